//! Grassroots democratic federation.
//!
//! Communities form a DAG with parent→child edges. Agents store only their
//! personal subgraph, the union of the community subgraphs of every
//! community they belong to; the global graph is the union of those. All
//! members of the affected communities take part in each federate, join,
//! or leave.
//!
//! A leave can disconnect a community from every agent below it. Such a
//! community has no members and drops out of every personal subgraph
//! unless it is a child of a community that still has members. The global
//! graph is always taken to be the union of the personal subgraphs; see
//! [`FederationGraph::observable`].

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use crate::agent::{AgentId, AgentSet};
use crate::dts::{Configuration, Transaction};
use crate::error::Error;
use crate::platform::{Bounds, Platform, Txn};
use crate::sim::Monitor;

/// A community identifier: an agent followed by a list of positive
/// integers. `(p, [])` is the singleton community of `p`; `(v, i)` is the
/// `i`-th parent federated by `v`.
///
/// The `Ord` instance is the federation order: longer paths are greater,
/// equal lengths compare by root and then by path.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CommunityId {
    root: AgentId,
    path: Vec<u32>,
}

impl CommunityId {
    pub fn new(root: AgentId, path: Vec<u32>) -> Result<Self, Error> {
        if path.contains(&0) {
            return Err(Error::Parse("community path entries must be positive".into()));
        }
        Ok(CommunityId { root, path })
    }

    pub fn singleton(agent: AgentId) -> Self {
        CommunityId { root: agent, path: Vec::new() }
    }

    pub fn root(&self) -> &AgentId {
        &self.root
    }

    pub fn path(&self) -> &[u32] {
        &self.path
    }

    /// The agent this is the singleton community of, if any.
    pub fn singleton_of(&self) -> Option<&AgentId> {
        self.path.is_empty().then_some(&self.root)
    }

    /// Identifier `(self, index)`.
    pub fn parent_id(&self, index: u32) -> CommunityId {
        let mut path = self.path.clone();
        path.push(index);
        CommunityId { root: self.root.clone(), path }
    }

    /// Whether `self` is `(other, j)` for some `j`; returns `j`.
    fn parent_index_of(&self, other: &CommunityId) -> Option<u32> {
        if self.root == other.root && self.path.len() == other.path.len() + 1 && self.path.starts_with(&other.path) {
            self.path.last().copied()
        } else {
            None
        }
    }
}

impl Ord for CommunityId {
    fn cmp(&self, other: &Self) -> Ordering {
        self.path
            .len()
            .cmp(&other.path.len())
            .then_with(|| self.root.cmp(&other.root))
            .then_with(|| self.path.cmp(&other.path))
    }
}

impl PartialOrd for CommunityId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CommunityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.root)?;
        for i in &self.path {
            write!(f, "/{i}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CommunityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for CommunityId {
    type Err = Error;

    /// `root/1/2/...`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let mut parts = s.trim().split('/');
        let root = AgentId::new(parts.next().unwrap_or_default())?;
        let path = parts
            .map(|p| {
                p.parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad community path entry {p:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        CommunityId::new(root, path)
    }
}

/// A strict order on communities; a join `f → g` needs `f ≻ g`.
pub trait CommunityOrder {
    fn succ(&self, u: &CommunityId, v: &CommunityId) -> bool;
}

/// Longer identifier lists first, ties broken lexicographically by root
/// agent and then path.
#[derive(Clone, Copy, Debug, Default)]
pub struct LengthLex;

impl CommunityOrder for LengthLex {
    fn succ(&self, u: &CommunityId, v: &CommunityId) -> bool {
        u > v
    }
}

/// `u ≻ v` under the shipped order.
pub fn succ(u: &CommunityId, v: &CommunityId) -> bool {
    LengthLex.succ(u, v)
}

pub type Edge = (CommunityId, CommunityId);

/// A labelled directed graph over community identifiers. Edges point from
/// parent to child.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FederationGraph {
    nodes: BTreeSet<CommunityId>,
    edges: BTreeSet<Edge>,
}

/// Agents store their personal subgraph.
pub type PersonalSubgraph = FederationGraph;

impl FederationGraph {
    pub fn new() -> Self {
        FederationGraph::default()
    }

    /// One singleton community per agent and no edges.
    pub fn initial(agents: &AgentSet) -> Self {
        FederationGraph {
            nodes: agents.iter().cloned().map(CommunityId::singleton).collect(),
            edges: BTreeSet::new(),
        }
    }

    pub fn from_parts(nodes: BTreeSet<CommunityId>, edges: BTreeSet<Edge>) -> Result<Self, Error> {
        if let Some((f, g)) = edges.iter().find(|(f, g)| !nodes.contains(f) || !nodes.contains(g)) {
            return Err(Error::Domain(format!("edge {f}>{g} has an endpoint that is not a node")));
        }
        Ok(FederationGraph { nodes, edges })
    }

    pub fn nodes(&self) -> &BTreeSet<CommunityId> {
        &self.nodes
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn contains_node(&self, v: &CommunityId) -> bool {
        self.nodes.contains(v)
    }

    pub fn contains_edge(&self, f: &CommunityId, g: &CommunityId) -> bool {
        self.edges.contains(&(f.clone(), g.clone()))
    }

    fn require_node(&self, v: &CommunityId) -> Result<(), Error> {
        if self.nodes.contains(v) {
            Ok(())
        } else {
            Err(Error::Domain(format!("community {v} is not in the federation")))
        }
    }

    fn adjacency(&self) -> Adjacency<'_> {
        let mut children: BTreeMap<&CommunityId, Vec<&CommunityId>> = BTreeMap::new();
        let mut parents: BTreeMap<&CommunityId, Vec<&CommunityId>> = BTreeMap::new();
        for (f, g) in &self.edges {
            children.entry(f).or_default().push(g);
            parents.entry(g).or_default().push(f);
        }
        Adjacency { children, parents }
    }

    /// Agents `p` whose singleton `(p, [])` is reachable from `v`.
    pub fn members(&self, v: &CommunityId) -> Result<BTreeSet<AgentId>, Error> {
        self.require_node(v)?;
        Ok(self.adjacency().members(v))
    }

    /// Members of every node.
    pub fn member_map(&self) -> BTreeMap<CommunityId, BTreeSet<AgentId>> {
        let adj = self.adjacency();
        self.nodes.iter().map(|v| (v.clone(), adj.members(v))).collect()
    }

    /// `v`, its neighbours, and the edges incident with `v`.
    pub fn community_subgraph(&self, v: &CommunityId) -> Result<FederationGraph, Error> {
        self.require_node(v)?;
        let mut out = FederationGraph::new();
        out.nodes.insert(v.clone());
        for (f, g) in self.edges.iter().filter(|(f, g)| f == v || g == v) {
            out.nodes.insert(f.clone());
            out.nodes.insert(g.clone());
            out.edges.insert((f.clone(), g.clone()));
        }
        Ok(out)
    }

    /// Communities `p` is a member of: `(p, [])` and its ancestors.
    pub fn communities_of(&self, p: &AgentId) -> Result<BTreeSet<CommunityId>, Error> {
        let own = CommunityId::singleton(p.clone());
        if !self.nodes.contains(&own) {
            return Err(Error::Domain(format!("agent {p} has no singleton community")));
        }
        let adj = self.adjacency();
        let mut seen: BTreeSet<&CommunityId> = BTreeSet::new();
        let mut stack = vec![&own];
        while let Some(v) = stack.pop() {
            if seen.insert(v) {
                if let Some(ps) = adj.parents.get(v) {
                    stack.extend(ps.iter().copied());
                }
            }
        }
        Ok(seen.into_iter().cloned().collect())
    }

    /// Union of the community subgraphs of every community `p` belongs to.
    pub fn personal_subgraph(&self, p: &AgentId) -> Result<PersonalSubgraph, Error> {
        let communities = self.communities_of(p)?;
        let mut out = FederationGraph::new();
        for v in &communities {
            out.nodes.insert(v.clone());
        }
        for (f, g) in &self.edges {
            if communities.contains(f) || communities.contains(g) {
                out.nodes.insert(f.clone());
                out.nodes.insert(g.clone());
                out.edges.insert((f.clone(), g.clone()));
            }
        }
        Ok(out)
    }

    pub fn union(&self, other: &FederationGraph) -> FederationGraph {
        let mut out = self.clone();
        out.nodes.extend(other.nodes.iter().cloned());
        out.edges.extend(other.edges.iter().cloned());
        out
    }

    pub fn is_acyclic(&self) -> bool {
        let adj = self.adjacency();
        let mut indegree: BTreeMap<&CommunityId, usize> = self.nodes.iter().map(|v| (v, 0)).collect();
        for (_, g) in &self.edges {
            *indegree.entry(g).or_insert(0) += 1;
        }
        let mut ready: Vec<&CommunityId> = indegree.iter().filter(|(_, d)| **d == 0).map(|(v, _)| *v).collect();
        let mut removed = 0;
        while let Some(v) = ready.pop() {
            removed += 1;
            for g in adj.children.get(v).into_iter().flatten() {
                let d = indegree.get_mut(g).expect("indexed above");
                *d -= 1;
                if *d == 0 {
                    ready.push(g);
                }
            }
        }
        removed == indegree.len()
    }

    /// The first edge `f → g` with `¬(f ≻ g)`, if any.
    pub fn order_violation<O: CommunityOrder + ?Sized>(&self, order: &O) -> Option<&Edge> {
        self.edges.iter().find(|(f, g)| !order.succ(f, g))
    }

    /// The part of the graph visible in personal subgraphs: communities
    /// with members, children of such communities, and edges out of
    /// communities with members.
    pub fn observable(&self) -> FederationGraph {
        let members = self.member_map();
        let has_members = |v: &CommunityId| members.get(v).is_some_and(|m| !m.is_empty());
        let mut out = FederationGraph::new();
        for v in self.nodes.iter().filter(|v| has_members(v)) {
            out.nodes.insert(v.clone());
        }
        for (f, g) in self.edges.iter().filter(|(f, _)| has_members(f)) {
            out.nodes.insert(g.clone());
            out.edges.insert((f.clone(), g.clone()));
        }
        out
    }

    /// Largest `j` with `(v, j)` a node, 0 if there is none.
    pub fn max_parent_index(&self, v: &CommunityId) -> u32 {
        self.nodes
            .iter()
            .filter_map(|n| n.parent_index_of(v))
            .max()
            .unwrap_or(0)
    }

    /// Adds the next parent `(v, i + 1)` of `v` and the edge to `v`.
    pub fn with_federated(&self, v: &CommunityId) -> Result<(CommunityId, FederationGraph), Error> {
        self.require_node(v)?;
        let f = v.parent_id(self.max_parent_index(v) + 1);
        let mut out = self.clone();
        out.nodes.insert(f.clone());
        out.edges.insert((f.clone(), v.clone()));
        Ok((f, out))
    }

    pub fn with_edge(&self, f: &CommunityId, g: &CommunityId) -> Result<FederationGraph, Error> {
        self.require_node(f)?;
        self.require_node(g)?;
        let mut out = self.clone();
        out.edges.insert((f.clone(), g.clone()));
        Ok(out)
    }

    pub fn without_edge(&self, f: &CommunityId, g: &CommunityId) -> FederationGraph {
        let mut out = self.clone();
        out.edges.remove(&(f.clone(), g.clone()));
        out
    }
}

struct Adjacency<'g> {
    children: BTreeMap<&'g CommunityId, Vec<&'g CommunityId>>,
    parents: BTreeMap<&'g CommunityId, Vec<&'g CommunityId>>,
}

impl Adjacency<'_> {
    fn members(&self, v: &CommunityId) -> BTreeSet<AgentId> {
        let mut out = BTreeSet::new();
        let mut seen: BTreeSet<&CommunityId> = BTreeSet::new();
        let mut stack: Vec<&CommunityId> = vec![v];
        while let Some(n) = stack.pop() {
            if let Some(p) = n.singleton_of() {
                out.insert(p.clone());
            }
            for g in self.children.get(n).into_iter().flatten() {
                if seen.insert(g) {
                    stack.push(g);
                }
            }
        }
        out
    }
}

impl fmt::Display for FederationGraph {
    /// `({a,a/1};{a/1>a})`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("({")?;
        for (i, v) in self.nodes.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("};{")?;
        for (i, (a, b)) in self.edges.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}>{b}")?;
        }
        f.write_str("})")
    }
}

impl FromStr for FederationGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("federation graph must look like ({{nodes}};{{edges}}): {s:?}"));
        let inner = s.trim().strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        let (nodes, edges) = inner.split_once(';').ok_or_else(bad)?;
        let braced = |part: &str| -> Result<Vec<String>, Error> {
            let body = part.trim().strip_prefix('{').and_then(|r| r.strip_suffix('}')).ok_or_else(bad)?;
            Ok(body.split(',').map(|t| t.trim().into()).filter(|t: &String| !t.is_empty()).collect())
        };
        let nodes = braced(nodes)?
            .iter()
            .map(|t| t.parse())
            .collect::<Result<BTreeSet<CommunityId>, _>>()?;
        let edges = braced(edges)?
            .iter()
            .map(|t| {
                let (f, g) = t.split_once('>').ok_or_else(|| Error::Parse(format!("edge must be f>g, got {t:?}")))?;
                Ok((f.parse()?, g.parse()?))
            })
            .collect::<Result<BTreeSet<Edge>, Error>>()?;
        FederationGraph::from_parts(nodes, edges)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum GfLabel {
    Federate(CommunityId),
    Join(CommunityId, CommunityId),
    Leave(CommunityId, CommunityId),
}

impl fmt::Display for GfLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GfLabel::Federate(v) => write!(f, "federate {v}"),
            GfLabel::Join(a, b) => write!(f, "join {a} {b}"),
            GfLabel::Leave(a, b) => write!(f, "leave {a} {b}"),
        }
    }
}

impl FromStr for GfLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let words: Vec<&str> = s.split_whitespace().collect();
        match words.as_slice() {
            ["federate", v] => Ok(GfLabel::Federate(v.parse()?)),
            ["join", f, g] => Ok(GfLabel::Join(f.parse()?, g.parse()?)),
            ["leave", f, g] => Ok(GfLabel::Leave(f.parse()?, g.parse()?)),
            _ => Err(Error::Parse(format!("not a federation label: {s:?}"))),
        }
    }
}

/// The federation platform, parameterized by the community order that
/// guards joins.
#[derive(Clone, Copy, Debug, Default)]
pub struct Gf<O = LengthLex> {
    order: O,
}

impl Gf<LengthLex> {
    pub fn new() -> Self {
        Gf { order: LengthLex }
    }
}

impl<O: CommunityOrder> Gf<O> {
    pub fn with_order(order: O) -> Self {
        Gf { order }
    }

    pub fn order(&self) -> &O {
        &self.order
    }

    /// Validity under this platform's order.
    pub fn check_valid(&self, c: &Configuration<FederationGraph>) -> Option<ValidityViolation> {
        validity(c, &self.order)
    }

    fn transaction(
        &self,
        label: &GfLabel,
        c: &Configuration<FederationGraph>,
        graph: &FederationGraph,
        participants: BTreeSet<AgentId>,
        next: &FederationGraph,
    ) -> Result<Txn<Self>, Error> {
        let participants = AgentSet::from_set(participants)
            .map_err(|_| Error::Guard(format!("{label}: the communities involved have no members")))?;
        let mut after = BTreeMap::new();
        for p in &participants {
            let expected = graph.personal_subgraph(p)?;
            if c.state(p)? != &expected {
                return Err(Error::NotEnabled(format!("{label}: {p} does not hold its personal subgraph")));
            }
            after.insert(p.clone(), next.personal_subgraph(p)?);
        }
        Transaction::new(label.clone(), c.project(&participants)?, Configuration::new(after)?)
    }
}

impl<O: CommunityOrder> Platform for Gf<O> {
    type State = FederationGraph;
    type Label = GfLabel;

    fn tag(&self) -> &'static str {
        "gf"
    }

    fn initial_state(&self, agent: &AgentId) -> FederationGraph {
        FederationGraph::initial(&AgentSet::single(agent.clone()))
    }

    fn instantiate(&self, label: &GfLabel, c: &Configuration<FederationGraph>) -> Result<Txn<Self>, Error> {
        let graph = reconstruct(c);
        match label {
            GfLabel::Federate(v) => {
                let participants = graph.members(v)?;
                let (_, next) = graph.with_federated(v)?;
                self.transaction(label, c, &graph, participants, &next)
            }
            GfLabel::Join(f, g) => {
                graph.require_node(f)?;
                graph.require_node(g)?;
                if !self.order.succ(f, g) {
                    return Err(Error::Order(format!("join {f} {g}: {f} does not precede {g}")));
                }
                if graph.contains_edge(f, g) {
                    return Err(Error::NoOp(format!("edge {f}>{g} already present")));
                }
                let mut participants = graph.members(f)?;
                participants.extend(graph.members(g)?);
                let next = graph.with_edge(f, g)?;
                self.transaction(label, c, &graph, participants, &next)
            }
            GfLabel::Leave(f, g) => {
                if !graph.contains_edge(f, g) {
                    return Err(Error::Guard(format!("no edge {f}>{g} to leave")));
                }
                let participants = graph.members(f)?;
                let next = graph.without_edge(f, g);
                self.transaction(label, c, &graph, participants, &next)
            }
        }
    }

    fn enabled_labels(&self, c: &Configuration<FederationGraph>, _bounds: &Bounds) -> Vec<GfLabel> {
        let graph = reconstruct(c);
        let members = graph.member_map();
        let consistent: BTreeSet<&AgentId> = c
            .iter()
            .filter(|(p, s)| graph.personal_subgraph(p).is_ok_and(|g| &g == *s))
            .map(|(p, _)| p)
            .collect();
        let ready = |m: &BTreeSet<AgentId>| !m.is_empty() && m.iter().all(|p| consistent.contains(p));
        let mut out = Vec::new();
        for (v, m) in &members {
            if ready(m) {
                out.push(GfLabel::Federate(v.clone()));
            }
        }
        for (f, mf) in &members {
            for (g, mg) in &members {
                if self.order.succ(f, g) && !graph.contains_edge(f, g) {
                    let both: BTreeSet<AgentId> = mf.union(mg).cloned().collect();
                    if ready(&both) {
                        out.push(GfLabel::Join(f.clone(), g.clone()));
                    }
                }
            }
        }
        for (f, g) in graph.edges() {
            if members.get(f).is_some_and(&ready) {
                out.push(GfLabel::Leave(f.clone(), g.clone()));
            }
        }
        out
    }

    fn refs(&self, state: &FederationGraph) -> BTreeSet<AgentId> {
        state.nodes.iter().map(|v| v.root.clone()).collect()
    }

    /// Join the singleton of an insider and an outsider, in order direction.
    fn interaction_hints(&self, c: &Configuration<FederationGraph>, inside: &AgentSet) -> Vec<Vec<GfLabel>> {
        let mut hints = Vec::new();
        for p in inside {
            for q in c.as_map().keys().filter(|q| !inside.contains(q)) {
                let (u, v) = (CommunityId::singleton(p.clone()), CommunityId::singleton(q.clone()));
                let label = if self.order.succ(&u, &v) { GfLabel::Join(u, v) } else { GfLabel::Join(v, u) };
                hints.push(vec![label]);
            }
        }
        hints
    }
}

pub fn federate(v: &CommunityId, c: &Configuration<FederationGraph>) -> Result<Txn<Gf>, Error> {
    Gf::new().instantiate(&GfLabel::Federate(v.clone()), c)
}

pub fn join(f: &CommunityId, g: &CommunityId, c: &Configuration<FederationGraph>) -> Result<Txn<Gf>, Error> {
    Gf::new().instantiate(&GfLabel::Join(f.clone(), g.clone()), c)
}

pub fn leave(f: &CommunityId, g: &CommunityId, c: &Configuration<FederationGraph>) -> Result<Txn<Gf>, Error> {
    Gf::new().instantiate(&GfLabel::Leave(f.clone(), g.clone()), c)
}

/// The union of every agent's personal subgraph.
pub fn reconstruct(c: &Configuration<FederationGraph>) -> FederationGraph {
    let mut out = FederationGraph::new();
    for s in c.states() {
        out.nodes.extend(s.nodes.iter().cloned());
        out.edges.extend(s.edges.iter().cloned());
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValidityViolation {
    Cyclic,
    /// An edge against the community order.
    Order(CommunityId, CommunityId),
    /// The agent's state is not its personal subgraph of the union.
    Agent(AgentId),
}

impl fmt::Display for ValidityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidityViolation::Cyclic => f.write_str("federation graph has a cycle"),
            ValidityViolation::Order(a, b) => write!(f, "edge {a}>{b} violates the community order"),
            ValidityViolation::Agent(p) => write!(f, "{p} does not hold its personal subgraph"),
        }
    }
}

fn validity<O: CommunityOrder + ?Sized>(c: &Configuration<FederationGraph>, order: &O) -> Option<ValidityViolation> {
    let graph = reconstruct(c);
    if !graph.is_acyclic() {
        return Some(ValidityViolation::Cyclic);
    }
    if let Some((f, g)) = graph.order_violation(order) {
        return Some(ValidityViolation::Order(f.clone(), g.clone()));
    }
    c.iter()
        .find(|(p, s)| graph.personal_subgraph(p).map_or(true, |g| &g != *s))
        .map(|(p, _)| ValidityViolation::Agent(p.clone()))
}

/// Whether every agent holds its personal subgraph of one acyclic,
/// order-respecting federation graph.
pub fn check_valid(c: &Configuration<FederationGraph>) -> Option<ValidityViolation> {
    validity(c, &LengthLex)
}

/// Runtime monitor for federation safety. Besides checking validity it
/// keeps its own copy of the global graph, updated by graph operations
/// alone, and compares it with the union of the personal subgraphs.
#[derive(Debug, Default)]
pub struct FederationMonitor {
    global: FederationGraph,
}

impl FederationMonitor {
    pub fn global(&self) -> &FederationGraph {
        &self.global
    }
}

impl Monitor<Gf> for FederationMonitor {
    fn name(&self) -> &'static str {
        "validity"
    }

    fn start(&mut self, initial: &Configuration<FederationGraph>) -> Result<(), String> {
        self.global = FederationGraph::initial(&initial.agents());
        self.compare(initial)
    }

    fn observe(&mut self, _index: usize, t: &Txn<Gf>, after: &Configuration<FederationGraph>) -> Result<(), String> {
        let next = match t.label() {
            GfLabel::Federate(v) => self.global.with_federated(v).map(|(_, g)| g),
            GfLabel::Join(f, g) => self.global.with_edge(f, g),
            GfLabel::Leave(f, g) => Ok(self.global.without_edge(f, g)),
        }
        .map_err(|e| format!("global graph cannot take {}: {e}", t.label()))?;
        self.global = next.observable();
        self.compare(after)
    }
}

impl FederationMonitor {
    fn compare(&self, c: &Configuration<FederationGraph>) -> Result<(), String> {
        if let Some(v) = check_valid(c) {
            return Err(format!("invalid federation configuration: {v}"));
        }
        if !self.global.is_acyclic() {
            return Err("global federation graph has a cycle".into());
        }
        let union = reconstruct(c);
        if union != self.global {
            return Err(format!("union of personal subgraphs {union} differs from global graph {}", self.global));
        }
        Ok(())
    }
}
