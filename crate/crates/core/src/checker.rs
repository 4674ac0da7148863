//! Bounded brute-force checks of obliviousness, interactivity, closure
//! transitivity, and the grassroots property.
//!
//! Membership of a state in the local states of an agent set `P` is decided
//! by [`Platform::refs`]: the state belongs to `S(P)` iff every agent it
//! mentions is in `P`.
//!
//! All exploration is breadth-first from the initial configuration under
//! the platform's bounded enumeration, deduplicated by structural equality
//! of configurations.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::time::Duration;

use crate::agent::{AgentId, AgentSet};
use crate::dts::{lift, Configuration, Transaction};
use crate::error::Error;
use crate::platform::{initial_configuration, is_enabled, refs_of, step, Bounds, Platform, Txn};
use crate::sim::{random_walk, Scheduler};

/// Largest agent set the checker explores.
pub const MAX_AGENTS: usize = 5;
/// Largest exploration or witness depth.
pub const MAX_DEPTH: usize = 6;
/// Witness search depth used by [`check_grassroots`].
pub const WITNESS_DEPTH: usize = 3;
/// Longest random walk used to sample configurations.
pub const SAMPLE_WALK_LEN: usize = 8;

fn guardrails(agents: &AgentSet, depth: usize) -> Result<(), Error> {
    if agents.len() > MAX_AGENTS {
        return Err(Error::Limit(format!("{} agents exceeds the limit of {MAX_AGENTS}", agents.len())));
    }
    if depth > MAX_DEPTH {
        return Err(Error::Limit(format!("depth {depth} exceeds the limit of {MAX_DEPTH}")));
    }
    Ok(())
}

fn strict_subset(inside: &AgentSet, outside: &AgentSet) -> Result<(), Error> {
    if !inside.is_strict_subset(outside) {
        return Err(Error::Domain(format!("{{{inside}}} is not a strict subset of {{{outside}}}")));
    }
    Ok(())
}

struct Node<S, L> {
    config: Configuration<S>,
    parent: Option<usize>,
    label: Option<L>,
    depth: usize,
}

/// Every configuration reachable within a depth bound, each with one
/// shortest generating computation.
pub struct Exploration<S, L> {
    agents: AgentSet,
    nodes: Vec<Node<S, L>>,
    index: BTreeMap<Configuration<S>, usize>,
}

impl<S: Clone + Eq + Ord, L: Clone> Exploration<S, L> {
    pub fn agents(&self) -> &AgentSet {
        &self.agents
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, c: &Configuration<S>) -> bool {
        self.index.contains_key(c)
    }

    pub fn configurations(&self) -> impl Iterator<Item = &Configuration<S>> + '_ {
        self.nodes.iter().map(|n| &n.config)
    }

    pub fn depth_of(&self, c: &Configuration<S>) -> Option<usize> {
        self.index.get(c).map(|&i| self.nodes[i].depth)
    }

    /// Labels leading from the initial configuration to node `i`.
    pub fn path(&self, i: usize) -> Vec<L> {
        let mut labels = Vec::new();
        let mut at = i;
        while let Some(parent) = self.nodes[at].parent {
            labels.push(self.nodes[at].label.clone().expect("non-root nodes carry a label"));
            at = parent;
        }
        labels.reverse();
        labels
    }

    pub fn path_to(&self, c: &Configuration<S>) -> Option<Vec<L>> {
        self.index.get(c).map(|&i| self.path(i))
    }

    /// `(path, configuration)` for every node, in discovery order.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<L>, &Configuration<S>)> + '_ {
        (0..self.nodes.len()).map(move |i| (self.path(i), &self.nodes[i].config))
    }

    pub fn into_set(self) -> BTreeSet<Configuration<S>> {
        self.index.into_keys().collect()
    }
}

/// Breadth-first exploration from the initial configuration over `agents`.
pub fn explore<P: Platform + ?Sized>(
    platform: &P,
    agents: &AgentSet,
    depth: usize,
    bounds: &Bounds,
) -> Result<Exploration<P::State, P::Label>, Error> {
    guardrails(agents, depth)?;
    let initial = initial_configuration(platform, agents);
    let mut ex = Exploration {
        agents: agents.clone(),
        nodes: Vec::new(),
        index: BTreeMap::new(),
    };
    ex.index.insert(initial.clone(), 0);
    ex.nodes.push(Node { config: initial, parent: None, label: None, depth: 0 });
    let mut frontier = 0;
    while frontier < ex.nodes.len() {
        let at = frontier;
        frontier += 1;
        if ex.nodes[at].depth == depth {
            continue;
        }
        let current = ex.nodes[at].config.clone();
        for label in platform.enabled_labels(&current, bounds) {
            let (_, next) = step(platform, &current, &label)?;
            if !ex.index.contains_key(&next) {
                ex.index.insert(next.clone(), ex.nodes.len());
                ex.nodes.push(Node {
                    config: next,
                    parent: Some(at),
                    label: Some(label),
                    depth: ex.nodes[at].depth + 1,
                });
            }
        }
    }
    Ok(ex)
}

/// The set of configurations reachable within `depth` steps.
pub fn reachable<P: Platform + ?Sized>(
    platform: &P,
    agents: &AgentSet,
    depth: usize,
    bounds: &Bounds,
) -> Result<BTreeSet<Configuration<P::State>>, Error> {
    Ok(explore(platform, agents, depth, bounds)?.into_set())
}

/// Whether every agent of `agents` holds a state mentioning only `agents`.
pub fn in_cp<P: Platform + ?Sized>(platform: &P, c: &Configuration<P::State>, agents: &AgentSet) -> Result<bool, Error> {
    for p in agents {
        let refs = platform.refs(c.state(p)?);
        if !refs.iter().all(|r| agents.contains(r)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The agents a transaction is over and the agents its states mention.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransactionScope {
    pub agents: AgentSet,
    /// Smallest `Q'` with every before- and after-state in `S(Q')`.
    pub state_scope: BTreeSet<AgentId>,
}

impl TransactionScope {
    pub fn of<P: Platform + ?Sized>(platform: &P, t: &Txn<P>) -> Self {
        let mut state_scope = refs_of(platform, t.before().states());
        state_scope.extend(refs_of(platform, t.after().states()));
        TransactionScope { agents: t.participants(), state_scope }
    }

    /// Membership of the transaction in `R(P)`.
    pub fn within(&self, agents: &AgentSet) -> bool {
        self.agents.is_subset(agents) && self.state_scope.iter().all(|a| agents.contains(a))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CheckKind {
    Oblivious,
    Interactive,
    Transitivity,
    Grassroots,
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckKind::Oblivious => "oblivious",
            CheckKind::Interactive => "interactive",
            CheckKind::Transitivity => "transitivity",
            CheckKind::Grassroots => "grassroots",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    /// No witness within the search depth; not a refutation.
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckStats {
    /// Transactions, configurations, or samples examined, per check.
    pub instances: usize,
    pub configurations: usize,
    pub depth: usize,
    pub longest_witness: usize,
    /// Filled in by callers that can read a clock.
    pub elapsed: Option<Duration>,
}

/// A configuration reached by `path` from the initial configuration of the
/// larger agent set, and what went wrong there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample<S, L> {
    pub path: Vec<L>,
    pub configuration: Configuration<S>,
    pub transaction: Option<L>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport<S, L> {
    pub kind: CheckKind,
    pub verdict: Verdict,
    pub counterexample: Option<Counterexample<S, L>>,
    /// Interactivity witness; the longest one when many were searched.
    pub witness: Option<Vec<L>>,
    pub stats: CheckStats,
}

impl<S, L> CheckReport<S, L> {
    fn pass(kind: CheckKind, stats: CheckStats) -> Self {
        CheckReport { kind, verdict: Verdict::Pass, counterexample: None, witness: None, stats }
    }

    fn failed(kind: CheckKind, verdict: Verdict, cex: Counterexample<S, L>, stats: CheckStats) -> Self {
        CheckReport { kind, verdict, counterexample: Some(cex), witness: None, stats }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

pub type Report<P> = CheckReport<<P as Platform>::State, <P as Platform>::Label>;

/// Transactions of the `inside` system enabled at `c` and belonging to
/// `R(inside)`.
fn inside_transactions<P: Platform + ?Sized>(
    platform: &P,
    c: &Configuration<P::State>,
    inside: &AgentSet,
    bounds: &Bounds,
) -> Result<Vec<Txn<P>>, Error> {
    let mut out = Vec::new();
    for label in platform.enabled_labels(c, bounds) {
        let t = platform.instantiate(&label, c)?;
        if TransactionScope::of(platform, &t).within(inside) {
            out.push(t);
        }
    }
    Ok(out)
}

/// For every configuration `c'` of the `outside` system within `depth`,
/// every transaction the `inside` system can take at `c'` restricted to
/// `inside` must, lifted to `c'`, be a transition of the `outside` system.
pub fn check_oblivious<P: Platform + ?Sized>(
    platform: &P,
    inside: &AgentSet,
    outside: &AgentSet,
    depth: usize,
    bounds: &Bounds,
) -> Result<Report<P>, Error> {
    strict_subset(inside, outside)?;
    let ex = explore(platform, outside, depth, bounds)?;
    let mut stats = CheckStats { configurations: ex.len(), depth, ..CheckStats::default() };
    for (i, big) in ex.configurations().enumerate() {
        let small = big.project(inside)?;
        for t in inside_transactions(platform, &small, inside, bounds)? {
            stats.instances += 1;
            let cex = |reason: String| Counterexample {
                path: ex.path(i),
                configuration: big.clone(),
                transaction: Some(t.label().clone()),
                reason,
            };
            if !is_enabled(platform, big, &t)? {
                let reason = format!("{} is enabled for the subgroup but not in the larger system", t.label());
                return Ok(CheckReport::failed(CheckKind::Oblivious, Verdict::Fail, cex(reason), stats));
            }
            let taken = lift(&t, big)?;
            let via_small = lift(
                &Transaction::from_transition(t.label().clone(), lift(&t, &small)?),
                big,
            )?;
            if taken != via_small {
                let reason = format!("{} lifts differently through the subgroup", t.label());
                return Ok(CheckReport::failed(CheckKind::Oblivious, Verdict::Fail, cex(reason), stats));
            }
        }
    }
    Ok(CheckReport::pass(CheckKind::Oblivious, stats))
}

/// A computation from `c` in the system over `c`'s agents after which some
/// member of `inside` holds a state mentioning an agent outside `inside`.
/// Platform hints are tried first, then breadth-first search up to
/// `max_depth` steps.
pub fn find_witness<P: Platform + ?Sized>(
    platform: &P,
    c: &Configuration<P::State>,
    inside: &AgentSet,
    max_depth: usize,
    bounds: &Bounds,
) -> Result<Option<Vec<P::Label>>, Error> {
    let escaped = |cfg: &Configuration<P::State>| in_cp(platform, cfg, inside).map(|ok| !ok);
    if escaped(c)? {
        return Ok(Some(Vec::new()));
    }
    for hint in platform.interaction_hints(c, inside) {
        if hint.len() > max_depth {
            continue;
        }
        let mut current = c.clone();
        for (i, label) in hint.iter().enumerate() {
            match step(platform, &current, label) {
                Ok((_, next)) => current = next,
                Err(_) => break,
            }
            if escaped(&current)? {
                return Ok(Some(hint[..=i].to_vec()));
            }
        }
    }
    let mut seen: BTreeSet<Configuration<P::State>> = BTreeSet::new();
    seen.insert(c.clone());
    let mut queue: VecDeque<(Configuration<P::State>, Vec<P::Label>)> = VecDeque::new();
    queue.push_back((c.clone(), Vec::new()));
    while let Some((current, path)) = queue.pop_front() {
        if path.len() == max_depth {
            continue;
        }
        for label in platform.enabled_labels(&current, bounds) {
            let (_, next) = step(platform, &current, &label)?;
            let mut extended = path.clone();
            extended.push(label);
            if escaped(&next)? {
                return Ok(Some(extended));
            }
            if seen.insert(next.clone()) {
                queue.push_back((next, extended));
            }
        }
    }
    Ok(None)
}

/// Witness search at `c`, reached from the initial configuration by
/// `path`, which is kept for the counterexample.
pub fn check_interactive_from<P: Platform + ?Sized>(
    platform: &P,
    inside: &AgentSet,
    c: &Configuration<P::State>,
    path: Vec<P::Label>,
    max_depth: usize,
    bounds: &Bounds,
) -> Result<Report<P>, Error> {
    if !in_cp(platform, &c.project(inside)?, inside)? {
        return Err(Error::Domain(format!("the states of {{{inside}}} already mention outsiders")));
    }
    let stats = CheckStats { instances: 1, configurations: 1, depth: max_depth, ..CheckStats::default() };
    match find_witness(platform, c, inside, max_depth, bounds)? {
        Some(witness) => Ok(CheckReport {
            kind: CheckKind::Interactive,
            verdict: Verdict::Pass,
            counterexample: None,
            stats: CheckStats { longest_witness: witness.len(), ..stats },
            witness: Some(witness),
        }),
        None => {
            let cex = Counterexample {
                path,
                configuration: c.clone(),
                transaction: None,
                reason: format!("no computation of length at most {max_depth} leaves outsider traces in {{{inside}}}"),
            };
            Ok(CheckReport::failed(CheckKind::Interactive, Verdict::Inconclusive, cex, stats))
        }
    }
}

/// Witness search at one configuration `c` of the `outside` system whose
/// restriction to `inside` mentions only `inside`.
pub fn check_interactive<P: Platform + ?Sized>(
    platform: &P,
    inside: &AgentSet,
    outside: &AgentSet,
    c: &Configuration<P::State>,
    max_depth: usize,
    bounds: &Bounds,
) -> Result<Report<P>, Error> {
    strict_subset(inside, outside)?;
    guardrails(outside, max_depth)?;
    if &c.agents() != outside {
        return Err(Error::Domain(format!("configuration is not over {{{outside}}}")));
    }
    check_interactive_from(platform, inside, c, Vec::new(), max_depth, bounds)
}

/// Reachable configurations of the `outside` system whose restriction to
/// `inside` stays within `C(inside)`, with their generating paths.
pub fn qualifying_configurations<P: Platform + ?Sized>(
    platform: &P,
    ex: &Exploration<P::State, P::Label>,
    inside: &AgentSet,
) -> Result<Vec<(Vec<P::Label>, Configuration<P::State>)>, Error> {
    let mut out = Vec::new();
    for (path, c) in ex.entries() {
        if in_cp(platform, &c.project(inside)?, inside)? {
            out.push((path, c.clone()));
        }
    }
    Ok(out)
}

/// Merges per-configuration interactivity reports, keeping the instance
/// order: the first inconclusive report wins.
pub fn merge_interactive<S: Clone, L: Clone>(
    reports: Vec<CheckReport<S, L>>,
    configurations: usize,
    depth: usize,
) -> CheckReport<S, L> {
    let mut stats = CheckStats { configurations, depth, ..CheckStats::default() };
    let mut longest: Option<Vec<L>> = None;
    for r in reports {
        stats.instances += 1;
        if r.verdict != Verdict::Pass {
            return CheckReport { stats, witness: longest, ..r };
        }
        if let Some(w) = r.witness {
            if longest.as_ref().is_none_or(|l| w.len() > l.len()) {
                stats.longest_witness = w.len();
                longest = Some(w);
            }
        }
    }
    CheckReport { kind: CheckKind::Interactive, verdict: Verdict::Pass, counterexample: None, witness: longest, stats }
}

/// Witness search at every qualifying configuration reachable within
/// `depth`.
pub fn check_interactive_reachable<P: Platform + ?Sized>(
    platform: &P,
    inside: &AgentSet,
    outside: &AgentSet,
    depth: usize,
    max_depth: usize,
    bounds: &Bounds,
) -> Result<Report<P>, Error> {
    strict_subset(inside, outside)?;
    guardrails(outside, max_depth)?;
    let ex = explore(platform, outside, depth, bounds)?;
    let qualifying = qualifying_configurations(platform, &ex, inside)?;
    let mut reports = Vec::with_capacity(qualifying.len());
    for (path, c) in qualifying {
        let r = check_interactive_from(platform, inside, &c, path, max_depth, bounds)?;
        let stop = !r.passed();
        reports.push(r);
        if stop {
            break;
        }
    }
    Ok(merge_interactive(reports, ex.len(), depth))
}

/// Samples transactions of `R(inside)` at configurations of the `outside`
/// system and checks that lifting through `inside` and lifting directly
/// give the same transition.
pub fn check_closure_transitivity<P: Platform + ?Sized>(
    platform: &P,
    inside: &AgentSet,
    outside: &AgentSet,
    samples: usize,
    seed: u64,
    bounds: &Bounds,
) -> Result<Report<P>, Error> {
    strict_subset(inside, outside)?;
    let mut scheduler = Scheduler::new(seed);
    let mut stats = CheckStats { depth: SAMPLE_WALK_LEN, ..CheckStats::default() };
    let outsiders = outside.difference(inside);
    for _ in 0..samples {
        let mut picked = None;
        for attempt in 0..16 {
            let len = if attempt >= 8 { 0 } else { scheduler.pick(SAMPLE_WALK_LEN + 1) };
            let (path, big) = random_walk(platform, outside, len, bounds, &mut scheduler);
            let small = big.project(inside)?;
            let mut candidates = inside_transactions(platform, &small, inside, bounds)?;
            if !candidates.is_empty() {
                let t = candidates.swap_remove(scheduler.pick(candidates.len()));
                picked = Some((path, big, small, t));
                break;
            }
        }
        let Some((path, big, small, t)) = picked else {
            let cex = Counterexample {
                path: Vec::new(),
                configuration: initial_configuration(platform, outside),
                transaction: None,
                reason: format!("could not sample a transaction of R({{{inside}}})"),
            };
            return Ok(CheckReport::failed(CheckKind::Transitivity, Verdict::Inconclusive, cex, stats));
        };
        stats.instances += 1;
        let direct = lift(&t, &big)?;
        let to_small = lift(&t, &small)?;
        let through = lift(&Transaction::from_transition(t.label().clone(), to_small.clone()), &big)?;
        let factors = direct.project(inside).as_ref() == Ok(&to_small) && outsiders.iter().all(|q| direct.is_stationary(q));
        if direct != through || !factors {
            let cex = Counterexample {
                path,
                configuration: big,
                transaction: Some(t.label().clone()),
                reason: format!("lifting {} through the subgroup differs from lifting directly", t.label()),
            };
            return Ok(CheckReport::failed(CheckKind::Transitivity, Verdict::Fail, cex, stats));
        }
    }
    Ok(CheckReport::pass(CheckKind::Transitivity, stats))
}

/// Obliviousness, then interactivity at every qualifying reachable
/// configuration with witnesses of at most [`WITNESS_DEPTH`] steps.
pub fn check_grassroots<P: Platform + ?Sized>(
    platform: &P,
    inside: &AgentSet,
    outside: &AgentSet,
    depth: usize,
    bounds: &Bounds,
) -> Result<Report<P>, Error> {
    let oblivious = check_oblivious(platform, inside, outside, depth, bounds)?;
    combine_grassroots(
        oblivious,
        check_interactive_reachable(platform, inside, outside, depth, WITNESS_DEPTH, bounds)?,
    )
}

/// The grassroots verdict from an obliviousness and an interactivity
/// report.
pub fn combine_grassroots<S, L>(
    oblivious: CheckReport<S, L>,
    interactive: CheckReport<S, L>,
) -> Result<CheckReport<S, L>, Error> {
    let stats = CheckStats {
        instances: oblivious.stats.instances + interactive.stats.instances,
        configurations: oblivious.stats.configurations,
        depth: oblivious.stats.depth,
        longest_witness: interactive.stats.longest_witness,
        elapsed: None,
    };
    let first_failure = if !oblivious.passed() { oblivious } else { interactive };
    Ok(CheckReport { kind: CheckKind::Grassroots, stats, ..first_failure })
}
