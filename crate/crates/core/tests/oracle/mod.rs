//! Naive reference models of the three platforms, written against plain
//! index-based data so they share no code with the library, plus the
//! cross-checks that pin the library to them.
//!
//! Agent `i` of an oracle configuration is `AgentId::numbered(n)[i]`.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Debug;

use grassroots_core::checker::{self, Verdict};
use grassroots_core::gc::{self, CoinBag, Gc, GcLabel, SwapSpec};
use grassroots_core::gf::{self, CommunityId, FederationGraph, Gf, GfLabel};
use grassroots_core::gsn::{self, FriendSet, Gsn};
use grassroots_core::{
    apply, initial_configuration, run::trace_from_labels, validate_run, AgentId, AgentSet, Bounds, Configuration, Platform,
};

/// A platform as a successor function over per-agent states.
pub trait Model {
    type Local: Clone + Ord + Debug;

    fn initial(&self, i: usize) -> Self::Local;

    /// Every transition enabled at `c`, as a label description and the
    /// configuration it leads to.
    fn successors(&self, c: &[Self::Local]) -> Vec<(String, Vec<Self::Local>)>;

    /// Agent indices a local state mentions.
    fn refs(&self, s: &Self::Local) -> BTreeSet<usize>;
}

pub fn initial<M: Model>(m: &M, n: usize) -> Vec<M::Local> {
    (0..n).map(|i| m.initial(i)).collect()
}

/// Breadth-first closure from the initial configuration, with the depth at
/// which each configuration was first seen.
pub fn reach<M: Model>(m: &M, n: usize, depth: usize) -> BTreeMap<Vec<M::Local>, usize> {
    let mut seen = BTreeMap::new();
    let mut queue = VecDeque::new();
    seen.insert(initial(m, n), 0);
    queue.push_back((initial(m, n), 0));
    while let Some((c, d)) = queue.pop_front() {
        if d == depth {
            continue;
        }
        for (_, next) in m.successors(&c) {
            if !seen.contains_key(&next) {
                seen.insert(next.clone(), d + 1);
                queue.push_back((next, d + 1));
            }
        }
    }
    seen
}

fn within<M: Model>(m: &M, s: &M::Local, k: usize) -> bool {
    m.refs(s).iter().all(|&i| i < k)
}

/// Obliviousness of the `k`-agent system inside the `n`-agent one: a
/// transition of the first `k` agents taken on their own, using only
/// states over them, is also a transition of everyone.
pub fn oblivious<M: Model>(m: &M, k: usize, n: usize, depth: usize) -> Result<usize, String> {
    let mut instances = 0;
    for c in reach(m, n, depth).keys() {
        let small = &c[..k];
        for (label, next_small) in m.successors(small) {
            let changed: Vec<usize> = (0..k).filter(|&i| small[i] != next_small[i]).collect();
            let scoped = changed
                .iter()
                .all(|&i| within(m, &small[i], k) && within(m, &next_small[i], k));
            if !scoped {
                continue;
            }
            instances += 1;
            let mut lifted = c.clone();
            lifted[..k].clone_from_slice(&next_small);
            if !m.successors(c).iter().any(|(l, d)| l == &label && d == &lifted) {
                return Err(format!("{label} at {c:?}"));
            }
        }
    }
    Ok(instances)
}

/// Longest shortest escape, over qualifying reachable configurations, after
/// which one of the first `k` agents mentions an agent outside them.
pub fn interactive<M: Model>(m: &M, k: usize, n: usize, depth: usize, witness: usize) -> Result<usize, String> {
    let mut longest = 0;
    for c in reach(m, n, depth).keys() {
        if !c[..k].iter().all(|s| within(m, s, k)) {
            continue;
        }
        let escaped = |d: &Vec<M::Local>| d[..k].iter().any(|s| !within(m, s, k));
        let mut frontier = vec![c.clone()];
        let mut seen: BTreeSet<Vec<M::Local>> = frontier.iter().cloned().collect();
        let mut found = None;
        'search: for len in 1..=witness {
            let mut next_frontier = Vec::new();
            for d in &frontier {
                for (_, e) in m.successors(d) {
                    if escaped(&e) {
                        found = Some(len);
                        break 'search;
                    }
                    if seen.insert(e.clone()) {
                        next_frontier.push(e);
                    }
                }
            }
            frontier = next_frontier;
        }
        match found {
            Some(len) => longest = longest.max(len),
            None => return Err(format!("no escape within {witness} from {c:?}")),
        }
    }
    Ok(longest)
}

fn names(n: usize) -> Vec<String> {
    AgentId::numbered(n).iter().map(|a| a.as_str().to_string()).collect()
}

fn index_of(agents: &[AgentId], p: &AgentId) -> usize {
    agents.iter().position(|a| a == p).expect("agent of the configuration")
}

// Social network: each agent's friend indices.

pub struct GsnModel;

impl Model for GsnModel {
    type Local = BTreeSet<usize>;

    fn initial(&self, _i: usize) -> BTreeSet<usize> {
        BTreeSet::new()
    }

    fn successors(&self, c: &[BTreeSet<usize>]) -> Vec<(String, Vec<BTreeSet<usize>>)> {
        let n = names(c.len());
        let mut out = Vec::new();
        for i in 0..c.len() {
            for j in i + 1..c.len() {
                let (a, b) = (c[i].contains(&j), c[j].contains(&i));
                let mut d = c.to_vec();
                if !a && !b {
                    d[i].insert(j);
                    d[j].insert(i);
                    out.push((format!("befriend {} {}", n[i], n[j]), d));
                } else if a && b {
                    d[i].remove(&j);
                    d[j].remove(&i);
                    out.push((format!("unfriend {} {}", n[i], n[j]), d));
                }
            }
        }
        out
    }

    fn refs(&self, s: &BTreeSet<usize>) -> BTreeSet<usize> {
        s.clone()
    }
}

pub fn gsn_local(c: &Configuration<FriendSet>) -> Vec<BTreeSet<usize>> {
    let agents: Vec<AgentId> = c.agents().iter().cloned().collect();
    c.states().map(|s| s.iter().map(|p| index_of(&agents, p)).collect()).collect()
}

// Cryptocurrency: each agent's coin counts by minter index.

pub struct GcModel {
    pub max_mint: u64,
    pub max_swap: u64,
}

impl GcModel {
    pub fn new(bounds: Bounds) -> Self {
        GcModel { max_mint: bounds.max_mint, max_swap: bounds.max_swap_size as u64 }
    }
}

/// Every sub-bag of `bag`, by brute-force counting over each minter.
fn sub_bags(bag: &BTreeMap<usize, u64>) -> Vec<BTreeMap<usize, u64>> {
    let mut out = vec![BTreeMap::new()];
    for (&m, &k) in bag {
        let mut grown = Vec::new();
        for partial in &out {
            for take in 0..=k {
                let mut b = partial.clone();
                if take > 0 {
                    b.insert(m, take);
                }
                grown.push(b);
            }
        }
        out = grown;
    }
    out
}

fn bag_size(b: &BTreeMap<usize, u64>) -> u64 {
    b.values().sum()
}

fn bag_text(b: &BTreeMap<usize, u64>, n: &[String]) -> String {
    b.iter().map(|(m, k)| format!("{}:{k}", n[*m])).collect::<Vec<_>>().join(",")
}

fn bag_move(from: &mut BTreeMap<usize, u64>, to: &mut BTreeMap<usize, u64>, x: &BTreeMap<usize, u64>) {
    for (&m, &k) in x {
        let left = from[&m] - k;
        if left == 0 {
            from.remove(&m);
        } else {
            from.insert(m, left);
        }
        *to.entry(m).or_insert(0) += k;
    }
}

impl Model for GcModel {
    type Local = BTreeMap<usize, u64>;

    fn initial(&self, _i: usize) -> BTreeMap<usize, u64> {
        BTreeMap::new()
    }

    fn successors(&self, c: &[BTreeMap<usize, u64>]) -> Vec<(String, Vec<BTreeMap<usize, u64>>)> {
        let n = names(c.len().max(10));
        let mut out = Vec::new();
        for i in 0..c.len() {
            for k in 1..=self.max_mint {
                let mut d = c.to_vec();
                *d[i].entry(i).or_insert(0) += k;
                out.push((format!("mint {} {k}", n[i]), d));
            }
        }
        for i in 0..c.len() {
            for j in i + 1..c.len() {
                for x in sub_bags(&c[i]) {
                    for y in sub_bags(&c[j]) {
                        if x == y || bag_size(&x) + bag_size(&y) > self.max_swap {
                            continue;
                        }
                        let mut d = c.to_vec();
                        let (mut di, mut dj) = (d[i].clone(), d[j].clone());
                        bag_move(&mut di, &mut dj, &x);
                        bag_move(&mut dj, &mut di, &y);
                        d[i] = di;
                        d[j] = dj;
                        let label = format!("swap {} {} x={} y={}", n[i], n[j], bag_text(&x, &n), bag_text(&y, &n));
                        out.push((label, d));
                    }
                }
            }
        }
        out
    }

    fn refs(&self, s: &BTreeMap<usize, u64>) -> BTreeSet<usize> {
        s.keys().copied().collect()
    }
}

pub fn gc_local(c: &Configuration<CoinBag>) -> Vec<BTreeMap<usize, u64>> {
    let agents: Vec<AgentId> = c.agents().iter().cloned().collect();
    c.states()
        .map(|b| b.iter().map(|(m, k)| (index_of(&agents, m), k)).collect())
        .collect()
}

// Federation: each agent's personal subgraph over `(root index, path)`.

pub type Node = (usize, Vec<u32>);

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct Graph {
    pub nodes: BTreeSet<Node>,
    pub edges: BTreeSet<(Node, Node)>,
}

/// Strict order: longer paths first, then root, then path.
pub fn precedes(f: &Node, g: &Node) -> bool {
    (f.1.len(), f.0, &f.1) > (g.1.len(), g.0, &g.1)
}

/// Members of every node: singletons reachable from it, by transitive
/// closure of the edge relation.
pub fn members(g: &Graph) -> BTreeMap<Node, BTreeSet<usize>> {
    let nodes: Vec<&Node> = g.nodes.iter().collect();
    let at = |v: &Node| nodes.iter().position(|u| *u == v).expect("edge endpoint is a node");
    let n = nodes.len();
    let mut reach = vec![vec![false; n]; n];
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for (f, h) in &g.edges {
        reach[at(f)][at(h)] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    (0..n)
        .map(|i| {
            let m = (0..n).filter(|&j| reach[i][j] && nodes[j].1.is_empty()).map(|j| nodes[j].0).collect();
            (nodes[i].clone(), m)
        })
        .collect()
}

/// The communities `p` belongs to with their neighbours and incident edges.
pub fn personal(g: &Graph, p: usize) -> Graph {
    let m = members(g);
    let mine: BTreeSet<&Node> = m.iter().filter(|(_, ms)| ms.contains(&p)).map(|(v, _)| v).collect();
    let mut out = Graph::default();
    for v in &mine {
        out.nodes.insert((*v).clone());
        for (f, h) in &g.edges {
            if f == *v || h == *v {
                out.nodes.insert(f.clone());
                out.nodes.insert(h.clone());
                out.edges.insert((f.clone(), h.clone()));
            }
        }
    }
    out
}

pub fn union(c: &[Graph]) -> Graph {
    let mut out = Graph::default();
    for s in c {
        out.nodes.extend(s.nodes.iter().cloned());
        out.edges.extend(s.edges.iter().cloned());
    }
    out
}

fn node_text(v: &Node, n: &[String]) -> String {
    let mut s = n[v.0].clone();
    for i in &v.1 {
        s.push_str(&format!("/{i}"));
    }
    s
}

pub struct GfModel;

impl GfModel {
    /// Participants must all be in `c` and hold their personal subgraph of
    /// the union; they then take their personal subgraph of `next`.
    fn step(c: &[Graph], g: &Graph, participants: &BTreeSet<usize>, next: &Graph) -> Option<Vec<Graph>> {
        if participants.is_empty() || participants.iter().any(|&p| p >= c.len() || c[p] != personal(g, p)) {
            return None;
        }
        let mut d = c.to_vec();
        for &p in participants {
            d[p] = personal(next, p);
        }
        Some(d)
    }
}

impl Model for GfModel {
    type Local = Graph;

    fn initial(&self, i: usize) -> Graph {
        Graph { nodes: [(i, vec![])].into_iter().collect(), edges: BTreeSet::new() }
    }

    fn successors(&self, c: &[Graph]) -> Vec<(String, Vec<Graph>)> {
        let n = names(c.len().max(1 + union(c).nodes.iter().map(|v| v.0).max().unwrap_or(0)));
        let g = union(c);
        let m = members(&g);
        let mut out = Vec::new();
        for v in &g.nodes {
            let i = g
                .nodes
                .iter()
                .filter(|u| u.0 == v.0 && u.1.len() == v.1.len() + 1 && u.1.starts_with(&v.1))
                .map(|u| *u.1.last().unwrap())
                .max()
                .unwrap_or(0);
            let mut path = v.1.clone();
            path.push(i + 1);
            let f = (v.0, path);
            let mut next = g.clone();
            next.nodes.insert(f.clone());
            next.edges.insert((f, v.clone()));
            if let Some(d) = Self::step(c, &g, &m[v], &next) {
                out.push((format!("federate {}", node_text(v, &n)), d));
            }
        }
        for f in &g.nodes {
            for h in &g.nodes {
                if !precedes(f, h) || g.edges.contains(&(f.clone(), h.clone())) {
                    continue;
                }
                let mut next = g.clone();
                next.edges.insert((f.clone(), h.clone()));
                let both: BTreeSet<usize> = m[f].union(&m[h]).copied().collect();
                if let Some(d) = Self::step(c, &g, &both, &next) {
                    out.push((format!("join {} {}", node_text(f, &n), node_text(h, &n)), d));
                }
            }
        }
        for (f, h) in &g.edges {
            let mut next = g.clone();
            next.edges.remove(&(f.clone(), h.clone()));
            if let Some(d) = Self::step(c, &g, &m[f], &next) {
                out.push((format!("leave {} {}", node_text(f, &n), node_text(h, &n)), d));
            }
        }
        out
    }

    fn refs(&self, s: &Graph) -> BTreeSet<usize> {
        s.nodes.iter().map(|v| v.0).collect()
    }
}

fn node_of(v: &CommunityId, agents: &[AgentId]) -> Node {
    (index_of(agents, v.root()), v.path().to_vec())
}

pub fn gf_graph(g: &FederationGraph, agents: &[AgentId]) -> Graph {
    Graph {
        nodes: g.nodes().iter().map(|v| node_of(v, agents)).collect(),
        edges: g.edges().iter().map(|(f, h)| (node_of(f, agents), node_of(h, agents))).collect(),
    }
}

pub fn gf_local(c: &Configuration<FederationGraph>) -> Vec<Graph> {
    let agents: Vec<AgentId> = c.agents().iter().cloned().collect();
    c.states().map(|s| gf_graph(s, &agents)).collect()
}

fn cid(s: &str) -> CommunityId {
    s.parse().expect("community id")
}

// Cross-checks.

/// Library reachable set against the model's, mapped to model form.
fn same_reach<P, M>(platform: &P, model: &M, n: usize, depth: usize, bounds: &Bounds, local: fn(&Configuration<P::State>) -> Vec<M::Local>) -> Result<usize, String>
where
    P: Platform,
    M: Model,
{
    let agents = AgentSet::numbered(n).map_err(|e| e.to_string())?;
    let lib: BTreeSet<Vec<M::Local>> = checker::reachable(platform, &agents, depth, bounds)
        .map_err(|e| e.to_string())?
        .iter()
        .map(local)
        .collect();
    let oracle: BTreeSet<Vec<M::Local>> = reach(model, n, depth).into_keys().collect();
    if lib == oracle {
        Ok(lib.len())
    } else {
        Err(format!("{} library vs {} oracle configurations", lib.len(), oracle.len()))
    }
}

/// Every library enumeration at every reachable configuration against the
/// model's successors, as label sets and as successor configurations.
fn same_successors<P, M>(platform: &P, model: &M, n: usize, depth: usize, bounds: &Bounds, local: fn(&Configuration<P::State>) -> Vec<M::Local>) -> Result<usize, String>
where
    P: Platform,
    M: Model,
{
    let agents = AgentSet::numbered(n).map_err(|e| e.to_string())?;
    let mut checked = 0;
    for c in checker::reachable(platform, &agents, depth, bounds).map_err(|e| e.to_string())? {
        let labels = platform.enabled_labels(&c, bounds);
        let lib: BTreeSet<(String, Vec<M::Local>)> = labels
            .iter()
            .map(|l| (l.to_string(), local(&apply(platform, &c, &platform.instantiate(l, &c).unwrap()).unwrap())))
            .collect();
        let oracle: BTreeSet<(String, Vec<M::Local>)> = model.successors(&local(&c)).into_iter().collect();
        if lib != oracle || labels.len() != lib.len() {
            return Err(format!("enumeration differs at {c}"));
        }
        checked += 1;
    }
    Ok(checked)
}

fn expect(name: &str, ok: bool, detail: String) -> (String, Result<(), String>) {
    (name.to_string(), if ok { Ok(()) } else { Err(detail) })
}

fn outcome(name: &str, r: Result<(), String>) -> (String, Result<(), String>) {
    (name.to_string(), r)
}

/// Every worked example value, recomputed independently and compared with
/// the library.
pub fn worked_examples() -> Vec<(String, Result<(), String>)> {
    let mut out = Vec::new();
    let a = AgentId::numbered(3);
    let (p, q) = (a[0].clone(), a[1].clone());
    let two = AgentSet::numbered(2).unwrap();
    let three = AgentSet::numbered(3).unwrap();

    // validate_run of mint then a one-coin payment.
    {
        let labels = vec![
            GcLabel::mint(p.clone(), 1),
            GcLabel::swap(p.clone(), q.clone(), SwapSpec::new(CoinBag::of(&p, 1), CoinBag::new()).unwrap()).unwrap(),
        ];
        let trace = trace_from_labels(&Gc, &two, &labels);
        let target = vec![BTreeMap::new(), [(0usize, 1u64)].into_iter().collect()];
        let reached = reach(&GcModel::new(Bounds::default()), 2, 2).contains_key(&target);
        let valid = trace.as_ref().is_ok_and(|t| validate_run(&Gc, t).is_valid());
        out.push(expect("run mint p 1; swap p q x=p:1 is valid", valid && reached, format!("valid {valid}, oracle reaches {reached}")));
    }

    // Join degree on a brute-forced three-agent federation.
    {
        let gf = Gf::new();
        let mut oracle_c = initial(&GfModel, 3);
        oracle_c = GfModel.successors(&oracle_c).into_iter().find(|(l, _)| l == "federate p0").unwrap().1;
        let g = union(&oracle_c);
        let m = members(&g);
        let expected: BTreeSet<usize> = m[&(0, vec![1])].union(&m[&(1, vec![])]).copied().collect();
        let lib_c = initial_configuration(&gf, &three);
        let lib_c = apply(&gf, &lib_c, &gf::federate(&cid("p0"), &lib_c).unwrap()).unwrap();
        let t = gf::join(&cid("p0/1"), &cid("p1"), &lib_c).unwrap();
        let got: BTreeSet<usize> = t.participants().iter().map(|x| index_of(&a, x)).collect();
        let active: BTreeSet<usize> = t.active().iter().map(|x| index_of(&a, x)).collect();
        let in_oracle = GfModel.successors(&oracle_c).iter().any(|(l, _)| l == "join p0/1 p1");
        out.push(expect(
            "join p0/1 p1 has degree |members(f) u members(g)|",
            got == expected && active == expected && t.degree() == expected.len() && in_oracle,
            format!("participants {got:?}, active {active:?}, oracle {expected:?}"),
        ));
    }

    // Three friendless agents can befriend along every unordered pair.
    {
        let c = initial_configuration(&Gsn, &three);
        let lib = gsn::enumerate_enabled_gsn(&c).len();
        let oracle = GsnModel.successors(&initial(&GsnModel, 3)).len();
        out.push(expect("three friendless agents have 3 befriends", lib == 3 && oracle == 3, format!("library {lib}, oracle {oracle}")));
    }

    // A single coin offered with swap size 1.
    {
        let bounds = Bounds::new(2, 1);
        let c = initial_configuration(&Gc, &two);
        let c = apply(&Gc, &c, &gc::mint(&p, 1, &c).unwrap()).unwrap();
        let lib: BTreeSet<String> = gc::enumerate_enabled_gc(&c, &bounds).iter().map(|t| t.label().to_string()).collect();
        let oracle: BTreeSet<String> = GcModel::new(bounds).successors(&gc_local(&c)).into_iter().map(|(l, _)| l).collect();
        let wanted = "swap p0 p1 x=p0:1 y=".to_string();
        out.push(expect(
            "p:1 coin, q:none, swap size 1 includes the payment",
            lib == oracle && lib.contains(&wanted),
            format!("library {lib:?}, oracle {oracle:?}"),
        ));
    }

    // Members of a community with two children.
    {
        let g: FederationGraph = "({p0,p1,p0/1};{p0/1>p0,p0/1>p1})".parse().unwrap();
        let lib: BTreeSet<usize> = g.members(&cid("p0/1")).unwrap().iter().map(|x| index_of(&a, x)).collect();
        let oracle = members(&gf_graph(&g, &a))[&(0, vec![1])].clone();
        let expected: BTreeSet<usize> = [0, 1].into_iter().collect();
        out.push(expect("members of a two-child community", lib == expected && oracle == expected, format!("library {lib:?}, oracle {oracle:?}")));
    }

    // Personal subgraph along a chain.
    {
        let g: FederationGraph = "({p0,p0/1,p0/1/1,p1};{p0/1>p0,p0/1/1>p0/1,p0/1/1>p1})".parse().unwrap();
        let mut ok = true;
        let mut detail = String::new();
        for (i, agent) in a.iter().take(2).enumerate() {
            let lib = gf_graph(&g.personal_subgraph(agent).unwrap(), &a);
            let oracle = personal(&gf_graph(&g, &a), i);
            if lib != oracle {
                ok = false;
                detail = format!("{agent}: library {lib:?}, oracle {oracle:?}");
            }
        }
        let pa = g.personal_subgraph(&p).unwrap();
        ok &= pa.contains_node(&cid("p0/1/1")) && pa.contains_edge(&cid("p0/1/1"), &cid("p1"));
        let pb = g.personal_subgraph(&q).unwrap();
        ok &= !pb.contains_edge(&cid("p0/1"), &cid("p0"));
        out.push(expect("personal subgraphs on a chain", ok, detail));
    }

    // Leave participants are the members of f before removal.
    {
        let gf = Gf::new();
        let mut ok = true;
        let mut detail = String::new();
        let mut seen = 0;
        for c in checker::reachable(&gf, &three, 3, &Bounds::default()).unwrap() {
            for l in gf.enabled_labels(&c, &Bounds::default()) {
                if let GfLabel::Leave(f, _) = &l {
                    let t = gf.instantiate(&l, &c).unwrap();
                    let got: BTreeSet<usize> = t.participants().iter().map(|x| index_of(&a, x)).collect();
                    let m = members(&union(&gf_local(&c)));
                    let want = m[&node_of(f, &a)].clone();
                    seen += 1;
                    if got != want {
                        ok = false;
                        detail = format!("{l} at {c}: {got:?} vs {want:?}");
                    }
                }
            }
        }
        out.push(expect("leave participants are members(f)", ok && seen > 0, format!("{detail} ({seen} leaves)")));
    }

    // Reconstruction of every brute-forced configuration over two agents.
    {
        let gf = Gf::new();
        let mut ok = true;
        let mut detail = String::new();
        let mut graphs: BTreeSet<Graph> = BTreeSet::new();
        let global = global_reach(2, 3);
        for (c, g) in &global {
            let r = union(c);
            graphs.insert(g.clone());
            if &r != g || (0..2).any(|i| c[i] != personal(g, i)) {
                ok = false;
                detail = format!("{c:?}: union {r:?} vs global {g:?}");
            }
        }
        let lib: BTreeSet<Vec<Graph>> = checker::reachable(&gf, &two, 3, &Bounds::default())
            .unwrap()
            .iter()
            .map(|c| {
                if gf::check_valid(c).is_some() {
                    ok = false;
                }
                gf_local(c)
            })
            .collect();
        let oracle: BTreeSet<Vec<Graph>> = global.keys().cloned().collect();
        out.push(expect(
            "reconstruct reproduces the global graph (2 agents, depth 3)",
            ok && lib == oracle,
            format!("{detail}; library {} vs global search {}", lib.len(), oracle.len()),
        ));
    }

    // Reachable-set sizes.
    out.push(outcome(
        "gsn, 2 agents, depth 2: 2 configurations",
        same_reach(&Gsn, &GsnModel, 2, 2, &Bounds::default(), gsn_local).and_then(|k| if k == 2 { Ok(()) } else { Err(format!("{k}")) }),
    ));
    out.push(outcome(
        "gc, 1 agent, depth 1, max mint 2: 3 configurations",
        same_reach(&Gc, &GcModel::new(Bounds::new(2, 2)), 1, 1, &Bounds::new(2, 2), gc_local).and_then(|k| if k == 3 { Ok(()) } else { Err(format!("{k}")) }),
    ));

    // Obliviousness and grassroots verdicts at depth 2.
    let gc_small = Bounds::new(1, 2);
    let one = AgentSet::numbered(1).unwrap();
    {
        let lib = checker::check_oblivious(&Gsn, &two, &three, 2, &Bounds::default()).unwrap();
        let oracle = oblivious(&GsnModel, 2, 3, 2);
        out.push(expect(
            "gsn oblivious 2 in 3, depth 2",
            lib.passed() && oracle.as_ref().is_ok_and(|&k| k == lib.stats.instances),
            format!("library {:?} ({}), oracle {oracle:?}", lib.verdict, lib.stats.instances),
        ));
    }
    {
        let two_of_two = AgentSet::numbered(2).unwrap();
        let lib = checker::check_oblivious(&Gc, &one, &two_of_two, 2, &gc_small).unwrap();
        let oracle = oblivious(&GcModel::new(gc_small), 1, 2, 2);
        out.push(expect(
            "gc oblivious 1 in 2, depth 2, bounds (1,2)",
            lib.passed() && oracle.as_ref().is_ok_and(|&k| k == lib.stats.instances),
            format!("library {:?} ({}), oracle {oracle:?}", lib.verdict, lib.stats.instances),
        ));
    }

    // Closure transitivity by direct computation.
    {
        let four = AgentSet::numbered(4).unwrap();
        let c = initial_configuration(&Gsn, &four);
        let t = gsn::befriend(&p, &q, &c.project(&two).unwrap()).unwrap();
        let direct = grassroots_core::lift(&t, &c).unwrap();
        let via = grassroots_core::lift(&t, &c.project(&two).unwrap()).unwrap();
        let through = grassroots_core::lift(&grassroots_core::Transaction::from_transition(t.label().clone(), via), &c).unwrap();
        let mut expected = initial(&GsnModel, 4);
        expected[0].insert(1);
        expected[1].insert(0);
        out.push(expect(
            "gsn befriend lifts through 2 agents to 4 identically",
            direct == through && gsn_local(direct.after()) == expected,
            format!("{direct:?} vs {through:?}"),
        ));

        let c = initial_configuration(&Gc, &four);
        let t = gc::mint(&p, 1, &c.project(&two).unwrap()).unwrap();
        let direct = grassroots_core::lift(&t, &c).unwrap();
        let via = grassroots_core::lift(&t, &c.project(&two).unwrap()).unwrap();
        let through = grassroots_core::lift(&grassroots_core::Transaction::from_transition(t.label().clone(), via), &c).unwrap();
        let mut expected = initial(&GcModel::new(Bounds::default()), 4);
        expected[0].insert(0, 1);
        out.push(expect(
            "gc mint lifts through 2 agents to 4 identically",
            direct == through && gc_local(direct.after()) == expected,
            format!("{direct:?} vs {through:?}"),
        ));
    }

    {
        let lib = checker::check_grassroots(&Gsn, &two, &three, 2, &Bounds::default()).unwrap();
        let oracle = oblivious(&GsnModel, 2, 3, 2).and_then(|_| interactive(&GsnModel, 2, 3, 2, 1));
        out.push(expect("gsn grassroots 2 in 3, depth 2", lib.passed() && oracle.is_ok(), format!("library {:?}, oracle {oracle:?}", lib.verdict)));
    }
    {
        let lib = checker::check_grassroots(&Gc, &one, &two, 2, &gc_small).unwrap();
        let oracle = oblivious(&GcModel::new(gc_small), 1, 2, 2).and_then(|_| interactive(&GcModel::new(gc_small), 1, 2, 2, 3));
        out.push(expect("gc grassroots 1 in 2, depth 2, bounds (1,2)", lib.passed() && oracle.is_ok(), format!("library {:?}, oracle {oracle:?}", lib.verdict)));
    }
    {
        let gf = Gf::new();
        let lib = checker::check_grassroots(&gf, &two, &three, 2, &Bounds::default()).unwrap();
        let oracle = oblivious(&GfModel, 2, 3, 2).and_then(|_| interactive(&GfModel, 2, 3, 2, 1));
        out.push(expect(
            "gf grassroots 2 in 3, depth 2",
            lib.passed() && lib.verdict == Verdict::Pass && oracle.is_ok(),
            format!("library {:?} {:?}, oracle {oracle:?}", lib.verdict, lib.counterexample.map(|c| c.reason)),
        ));
    }

    // Enumerations at every reachable configuration.
    out.push(outcome("gsn enumeration, 3 agents, depth 3", same_successors(&Gsn, &GsnModel, 3, 3, &Bounds::default(), gsn_local).map(|_| ())));
    out.push(outcome("gc enumeration, 2 agents, depth 3, bounds (2,2)", same_successors(&Gc, &GcModel::new(Bounds::default()), 2, 3, &Bounds::default(), gc_local).map(|_| ())));
    out.push(outcome("gc enumeration, 3 agents, depth 2, bounds (1,2)", same_successors(&Gc, &GcModel::new(gc_small), 3, 2, &gc_small, gc_local).map(|_| ())));
    out.push(outcome("gf enumeration, 3 agents, depth 3", same_successors(&Gf::new(), &GfModel, 3, 3, &Bounds::default(), gf_local).map(|_| ())));
    out.push(outcome("gf reachable, 3 agents, depth 3", same_reach(&Gf::new(), &GfModel, 3, 3, &Bounds::default(), gf_local).map(|_| ())));

    out
}

/// Runs from the initial graph over `n` agents, applying each federation
/// operation to one global graph and keeping the part visible to members.
/// Returns each configuration of personal subgraphs with its global graph.
pub fn global_reach(n: usize, depth: usize) -> BTreeMap<Vec<Graph>, Graph> {
    let visible = |g: &Graph| {
        let m = members(g);
        let live = |v: &Node| !m[v].is_empty();
        let mut out = Graph { nodes: g.nodes.iter().filter(|v| live(v)).cloned().collect(), ..Graph::default() };
        for (f, h) in g.edges.iter().filter(|(f, _)| live(f)) {
            out.nodes.insert(h.clone());
            out.edges.insert((f.clone(), h.clone()));
        }
        out
    };
    let project = |g: &Graph| (0..n).map(|i| personal(g, i)).collect::<Vec<_>>();
    let start = Graph { nodes: (0..n).map(|i| (i, vec![])).collect(), edges: BTreeSet::new() };
    let mut seen: BTreeMap<Graph, usize> = BTreeMap::new();
    seen.insert(start.clone(), 0);
    let mut queue = VecDeque::from([(start, 0)]);
    while let Some((g, d)) = queue.pop_front() {
        if d == depth {
            continue;
        }
        let m = members(&g);
        let mut next = Vec::new();
        for v in g.nodes.iter().filter(|v| !m[*v].is_empty()) {
            let top = g
                .nodes
                .iter()
                .filter(|u| u.0 == v.0 && u.1.len() == v.1.len() + 1 && u.1.starts_with(&v.1))
                .map(|u| *u.1.last().unwrap())
                .max()
                .unwrap_or(0);
            let mut path = v.1.clone();
            path.push(top + 1);
            let mut h = g.clone();
            h.nodes.insert((v.0, path.clone()));
            h.edges.insert(((v.0, path), v.clone()));
            next.push(h);
        }
        for f in &g.nodes {
            for h in &g.nodes {
                if precedes(f, h) && !g.edges.contains(&(f.clone(), h.clone())) && !(m[f].is_empty() && m[h].is_empty()) {
                    let mut k = g.clone();
                    k.edges.insert((f.clone(), h.clone()));
                    next.push(k);
                }
            }
        }
        for e in g.edges.iter().filter(|(f, _)| !m[f].is_empty()) {
            let mut k = g.clone();
            k.edges.remove(e);
            next.push(k);
        }
        for h in next {
            let h = visible(&h);
            if !seen.contains_key(&h) {
                seen.insert(h.clone(), d + 1);
                queue.push_back((h, d + 1));
            }
        }
    }
    seen.into_keys().map(|g| (project(&g), g)).collect()
}
