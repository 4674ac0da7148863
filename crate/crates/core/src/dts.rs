//! Configurations, distributed transitions, and atomic transactions.
//!
//! The closure of a transaction onto a larger agent set is infinite as soon
//! as non-participants are unconstrained, so it is never materialized.
//! [`lift`] selects the unique member of the closure that starts at a given
//! configuration.

use alloc::collections::BTreeMap;
use alloc::format;
use core::fmt;

use crate::agent::{AgentId, AgentSet};
use crate::error::Error;

/// An assignment of one local state to every agent of a nonempty agent set.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration<S> {
    states: BTreeMap<AgentId, S>,
}

impl<S: Clone + Eq> Configuration<S> {
    pub fn new(states: BTreeMap<AgentId, S>) -> Result<Self, Error> {
        if states.is_empty() {
            return Err(Error::Domain("configuration over an empty agent set".into()));
        }
        Ok(Configuration { states })
    }

    /// The configuration assigning `state(p)` to every `p` in `agents`.
    pub fn from_fn<F: FnMut(&AgentId) -> S>(agents: &AgentSet, mut state: F) -> Self {
        Configuration {
            states: agents.iter().map(|p| (p.clone(), state(p))).collect(),
        }
    }

    pub fn agents(&self) -> AgentSet {
        AgentSet::from_set(self.states.keys().cloned().collect())
            .expect("configurations are nonempty")
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn contains(&self, agent: &AgentId) -> bool {
        self.states.contains_key(agent)
    }

    pub fn get(&self, agent: &AgentId) -> Option<&S> {
        self.states.get(agent)
    }

    pub fn state(&self, agent: &AgentId) -> Result<&S, Error> {
        self.states
            .get(agent)
            .ok_or_else(|| Error::Domain(format!("agent {agent} is not in the configuration")))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&AgentId, &S)> + '_ {
        self.states.iter()
    }

    pub fn states(&self) -> impl Iterator<Item = &S> + '_ {
        self.states.values()
    }

    pub fn as_map(&self) -> &BTreeMap<AgentId, S> {
        &self.states
    }

    /// Restriction to `agents`; states are kept verbatim and may still
    /// mention agents outside `agents`.
    pub fn project(&self, agents: &AgentSet) -> Result<Configuration<S>, Error> {
        let mut states = BTreeMap::new();
        for p in agents {
            states.insert(p.clone(), self.state(p)?.clone());
        }
        Ok(Configuration { states })
    }

    /// Copy of `self` with the states of `updates` overwritten.
    pub(crate) fn overwritten(&self, updates: &Configuration<S>) -> Configuration<S> {
        let mut states = self.states.clone();
        for (p, s) in &updates.states {
            states.insert(p.clone(), s.clone());
        }
        Configuration { states }
    }

    pub(crate) fn same_domain(&self, other: &Configuration<S>) -> bool {
        self.states.len() == other.states.len()
            && self.states.keys().zip(other.states.keys()).all(|(a, b)| a == b)
    }
}

impl<S: fmt::Display> fmt::Display for Configuration<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (p, s)) in self.states.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}: {s}")?;
        }
        f.write_str("}")
    }
}

impl<S: fmt::Debug> fmt::Debug for Configuration<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.states.iter()).finish()
    }
}

/// A pair of distinct configurations over the same agent set.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Transition<S> {
    before: Configuration<S>,
    after: Configuration<S>,
}

impl<S: Clone + Eq> Transition<S> {
    pub fn new(before: Configuration<S>, after: Configuration<S>) -> Result<Self, Error> {
        if !before.same_domain(&after) {
            return Err(Error::Domain("transition endpoints over different agent sets".into()));
        }
        if before == after {
            return Err(Error::NoOp("transition between identical configurations".into()));
        }
        Ok(Transition { before, after })
    }

    pub fn before(&self) -> &Configuration<S> {
        &self.before
    }

    pub fn after(&self) -> &Configuration<S> {
        &self.after
    }

    pub fn agents(&self) -> AgentSet {
        self.before.agents()
    }

    /// Agents whose state changes.
    pub fn active(&self) -> AgentSet {
        active_agents(&self.before, &self.after)
    }

    pub fn degree(&self) -> usize {
        self.active().len()
    }

    /// Restriction of both endpoints. Fails with [`Error::NoOp`] when no
    /// agent of `agents` is active.
    pub fn project(&self, agents: &AgentSet) -> Result<Transition<S>, Error> {
        Transition::new(self.before.project(agents)?, self.after.project(agents)?)
    }

    pub fn is_stationary(&self, agent: &AgentId) -> bool {
        self.before.get(agent) == self.after.get(agent)
    }
}

fn active_agents<S: Clone + Eq>(before: &Configuration<S>, after: &Configuration<S>) -> AgentSet {
    AgentSet::from_set(
        before
            .iter()
            .filter(|(p, s)| after.get(p) != Some(*s))
            .map(|(p, _)| p.clone())
            .collect(),
    )
    .expect("transitions have at least one active agent")
}

/// A distributed transition over its participants, tagged with the
/// platform label that produced it.
///
/// Participants may be stationary (their `before` and `after` agree); at
/// least one is active.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Transaction<S, L> {
    label: L,
    before: Configuration<S>,
    after: Configuration<S>,
}

impl<S: Clone + Eq, L> Transaction<S, L> {
    pub fn new(label: L, before: Configuration<S>, after: Configuration<S>) -> Result<Self, Error> {
        let transition = Transition::new(before, after)?;
        Ok(Self::from_transition(label, transition))
    }

    pub fn from_transition(label: L, transition: Transition<S>) -> Self {
        Transaction {
            label,
            before: transition.before,
            after: transition.after,
        }
    }

    pub fn label(&self) -> &L {
        &self.label
    }

    pub fn before(&self) -> &Configuration<S> {
        &self.before
    }

    pub fn after(&self) -> &Configuration<S> {
        &self.after
    }

    pub fn participants(&self) -> AgentSet {
        self.before.agents()
    }

    pub fn active(&self) -> AgentSet {
        active_agents(&self.before, &self.after)
    }

    pub fn degree(&self) -> usize {
        self.active().len()
    }

    pub fn as_transition(&self) -> Transition<S> {
        Transition {
            before: self.before.clone(),
            after: self.after.clone(),
        }
    }
}

/// The member of the closure of `t` over `c`'s agents whose source is `c`.
///
/// Participants take `t`'s after-states; every other agent is stationary.
pub fn lift<S: Clone + Eq, L>(t: &Transaction<S, L>, c: &Configuration<S>) -> Result<Transition<S>, Error> {
    for p in t.before.as_map().keys() {
        if !c.contains(p) {
            return Err(Error::Domain(format!("participant {p} is not in the configuration")));
        }
    }
    for (p, s) in t.before.iter() {
        if c.get(p) != Some(s) {
            return Err(Error::NotEnabled(format!("participant {p} is not in the expected state")));
        }
    }
    Ok(Transition {
        before: c.clone(),
        after: c.overwritten(&t.after),
    })
}
