//! Grassroots social network: friend sets and binary befriend/unfriend.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::agent::{join_agents, AgentId, AgentSet};
use crate::dts::{Configuration, Transaction};
use crate::error::Error;
use crate::platform::{Bounds, Platform, Txn};
use crate::sim::Monitor;

/// The agents a given agent is friends with.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FriendSet(BTreeSet<AgentId>);

impl FriendSet {
    pub fn new() -> Self {
        FriendSet(BTreeSet::new())
    }

    pub fn contains(&self, agent: &AgentId) -> bool {
        self.0.contains(agent)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &AgentId> + '_ {
        self.0.iter()
    }

    fn with(&self, agent: &AgentId) -> FriendSet {
        let mut out = self.clone();
        out.0.insert(agent.clone());
        out
    }

    fn without(&self, agent: &AgentId) -> FriendSet {
        let mut out = self.clone();
        out.0.remove(agent);
        out
    }
}

impl<I: IntoIterator<Item = AgentId>> From<I> for FriendSet {
    fn from(agents: I) -> Self {
        FriendSet(agents.into_iter().collect())
    }
}

impl fmt::Display for FriendSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", join_agents(&self.0))
    }
}

impl FromStr for FriendSet {
    type Err = Error;

    /// `{}` or `{p,q}`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("friend set must be braced: {s:?}")))?;
        if inner.trim().is_empty() {
            return Ok(FriendSet::new());
        }
        inner
            .split(',')
            .map(|t| AgentId::new(t.trim()))
            .collect::<Result<BTreeSet<_>, _>>()
            .map(FriendSet)
    }
}

/// A befriend or unfriend between two distinct agents. The pair is stored
/// in agent order, so `befriend p q` and `befriend q p` are one label.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum GsnLabel {
    Befriend(AgentId, AgentId),
    Unfriend(AgentId, AgentId),
}

fn ordered_pair(p: AgentId, q: AgentId) -> Result<(AgentId, AgentId), Error> {
    match p.cmp(&q) {
        core::cmp::Ordering::Less => Ok((p, q)),
        core::cmp::Ordering::Greater => Ok((q, p)),
        core::cmp::Ordering::Equal => Err(Error::InvalidParticipants(format!("{p} cannot befriend itself"))),
    }
}

impl GsnLabel {
    pub fn befriend(p: AgentId, q: AgentId) -> Result<Self, Error> {
        let (a, b) = ordered_pair(p, q)?;
        Ok(GsnLabel::Befriend(a, b))
    }

    pub fn unfriend(p: AgentId, q: AgentId) -> Result<Self, Error> {
        let (a, b) = ordered_pair(p, q)?;
        Ok(GsnLabel::Unfriend(a, b))
    }

    pub fn pair(&self) -> (&AgentId, &AgentId) {
        match self {
            GsnLabel::Befriend(p, q) | GsnLabel::Unfriend(p, q) => (p, q),
        }
    }
}

impl fmt::Display for GsnLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GsnLabel::Befriend(p, q) => write!(f, "befriend {p} {q}"),
            GsnLabel::Unfriend(p, q) => write!(f, "unfriend {p} {q}"),
        }
    }
}

impl FromStr for GsnLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let words: Vec<&str> = s.split_whitespace().collect();
        match words.as_slice() {
            ["befriend", p, q] => GsnLabel::befriend(p.parse()?, q.parse()?),
            ["unfriend", p, q] => GsnLabel::unfriend(p.parse()?, q.parse()?),
            _ => Err(Error::Parse(format!("not a social-network label: {s:?}"))),
        }
    }
}

/// The social-network platform.
#[derive(Clone, Copy, Debug, Default)]
pub struct Gsn;

fn guard_pair<'c>(c: &'c Configuration<FriendSet>, p: &AgentId, q: &AgentId) -> Result<(&'c FriendSet, &'c FriendSet), Error> {
    Ok((c.state(p)?, c.state(q)?))
}

fn pair_transaction(
    label: GsnLabel,
    c: &Configuration<FriendSet>,
    after_p: FriendSet,
    after_q: FriendSet,
) -> Result<Txn<Gsn>, Error> {
    let (p, q) = label.pair();
    let (p, q) = (p.clone(), q.clone());
    let participants = AgentSet::pair(p.clone(), q.clone())?;
    let before = c.project(&participants)?;
    let after = Configuration::new([(p, after_p), (q, after_q)].into_iter().collect())?;
    Transaction::new(label, before, after)
}

/// The befriend transaction between `p` and `q` at `c`.
pub fn befriend(p: &AgentId, q: &AgentId, c: &Configuration<FriendSet>) -> Result<Txn<Gsn>, Error> {
    Gsn.instantiate(&GsnLabel::befriend(p.clone(), q.clone())?, c)
}

/// The unfriend transaction between `p` and `q` at `c`.
pub fn unfriend(p: &AgentId, q: &AgentId, c: &Configuration<FriendSet>) -> Result<Txn<Gsn>, Error> {
    Gsn.instantiate(&GsnLabel::unfriend(p.clone(), q.clone())?, c)
}

impl Platform for Gsn {
    type State = FriendSet;
    type Label = GsnLabel;

    fn tag(&self) -> &'static str {
        "gsn"
    }

    fn initial_state(&self, _agent: &AgentId) -> FriendSet {
        FriendSet::new()
    }

    fn instantiate(&self, label: &GsnLabel, c: &Configuration<FriendSet>) -> Result<Txn<Gsn>, Error> {
        let (p, q) = label.pair();
        if p == q {
            return Err(Error::InvalidParticipants(format!("{p} cannot befriend itself")));
        }
        let (cp, cq) = guard_pair(c, p, q)?;
        match label {
            GsnLabel::Befriend(..) => {
                if cp.contains(q) || cq.contains(p) {
                    return Err(Error::Guard(format!("{p} and {q} are already friends")));
                }
                pair_transaction(label.clone(), c, cp.with(q), cq.with(p))
            }
            GsnLabel::Unfriend(..) => {
                if !(cp.contains(q) && cq.contains(p)) {
                    return Err(Error::Guard(format!("{p} and {q} are not mutual friends")));
                }
                pair_transaction(label.clone(), c, cp.without(q), cq.without(p))
            }
        }
    }

    fn enabled_labels(&self, c: &Configuration<FriendSet>, _bounds: &Bounds) -> Vec<GsnLabel> {
        let mut befriends = Vec::new();
        let mut unfriends = Vec::new();
        let agents: Vec<(&AgentId, &FriendSet)> = c.iter().collect();
        for (i, (p, cp)) in agents.iter().enumerate() {
            for (q, cq) in &agents[i + 1..] {
                if !cp.contains(q) && !cq.contains(p) {
                    befriends.push(GsnLabel::Befriend((*p).clone(), (*q).clone()));
                } else if cp.contains(q) && cq.contains(p) {
                    unfriends.push(GsnLabel::Unfriend((*p).clone(), (*q).clone()));
                }
            }
        }
        befriends.extend(unfriends);
        befriends
    }

    fn refs(&self, state: &FriendSet) -> BTreeSet<AgentId> {
        state.0.clone()
    }

    fn interaction_hints(&self, c: &Configuration<FriendSet>, inside: &AgentSet) -> Vec<Vec<GsnLabel>> {
        let mut hints = Vec::new();
        for p in inside {
            for q in c.as_map().keys().filter(|q| !inside.contains(q)) {
                if let Ok(label) = GsnLabel::befriend(p.clone(), q.clone()) {
                    hints.push(alloc::vec![label]);
                }
            }
        }
        hints
    }
}

/// All befriend/unfriend transactions enabled at `c`, befriends first.
pub fn enumerate_enabled_gsn(c: &Configuration<FriendSet>) -> Vec<Txn<Gsn>> {
    crate::platform::enumerate_enabled(&Gsn, c, &Bounds::default())
}

/// The first ordered pair `(p, q)` of agents in `c` where exactly one of
/// `q ∈ c_p` and `p ∈ c_q` holds, or `None` if friendship is symmetric.
pub fn check_symmetry(c: &Configuration<FriendSet>) -> Option<(AgentId, AgentId)> {
    for (p, cp) in c.iter() {
        for (q, cq) in c.iter() {
            if cp.contains(q) != cq.contains(p) {
                return Some((p.clone(), q.clone()));
            }
        }
    }
    None
}

/// Runtime monitor for friendship symmetry.
#[derive(Debug, Default)]
pub struct SymmetryMonitor;

impl Monitor<Gsn> for SymmetryMonitor {
    fn name(&self) -> &'static str {
        "symmetry"
    }

    fn start(&mut self, initial: &Configuration<FriendSet>) -> Result<(), String> {
        check(initial)
    }

    fn observe(&mut self, _index: usize, _t: &Txn<Gsn>, after: &Configuration<FriendSet>) -> Result<(), String> {
        check(after)
    }
}

fn check(c: &Configuration<FriendSet>) -> Result<(), String> {
    match check_symmetry(c) {
        None => Ok(()),
        Some((p, q)) => Err(format!("asymmetric friendship between {p} and {q}")),
    }
}

/// Edges `{p, q}` of the friendship graph induced by `c`.
pub fn friendship_edges(c: &Configuration<FriendSet>) -> BTreeSet<(AgentId, AgentId)> {
    let mut edges = BTreeSet::new();
    for (p, cp) in c.iter() {
        for q in cp.iter() {
            if p < q && c.get(q).is_some_and(|cq| cq.contains(p)) {
                edges.insert((p.clone(), q.clone()));
            }
        }
    }
    edges
}
