//! Agent identifiers and finite agent sets.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::Error;

/// An agent, identified by a canonical textual token.
///
/// Tokens stand in for public keys: only uniqueness and the total order
/// matter. The order is lexicographic on the token bytes, so it is stable
/// across runs and implementations.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AgentId(Arc<str>);

impl AgentId {
    /// Accepts tokens over `[A-Za-z0-9_.-]`, nonempty.
    pub fn new(token: &str) -> Result<Self, Error> {
        if token.is_empty() {
            return Err(Error::Parse("empty agent token".into()));
        }
        if let Some(bad) = token
            .chars()
            .find(|ch| !(ch.is_ascii_alphanumeric() || matches!(ch, '_' | '-' | '.')))
        {
            return Err(Error::Parse(format!("invalid character {bad:?} in agent token {token:?}")));
        }
        Ok(AgentId(Arc::from(token)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// `n` agents named `p0, p1, ...`, zero-padded so that the token order
    /// matches the numeric order.
    pub fn numbered(n: usize) -> Vec<AgentId> {
        let width = if n <= 1 { 1 } else { format!("{}", n - 1).len() };
        (0..n)
            .map(|i| AgentId(Arc::from(format!("p{i:0width$}").as_str())))
            .collect()
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for AgentId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        AgentId::new(s)
    }
}

/// A nonempty finite set of agents.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AgentSet(BTreeSet<AgentId>);

impl AgentSet {
    /// Builds a set from a list; duplicates and emptiness are errors.
    pub fn new<I: IntoIterator<Item = AgentId>>(agents: I) -> Result<Self, Error> {
        let mut set = BTreeSet::new();
        for agent in agents {
            if !set.insert(agent.clone()) {
                return Err(Error::Domain(format!("duplicate agent {agent}")));
            }
        }
        Self::from_set(set)
    }

    pub fn from_set(set: BTreeSet<AgentId>) -> Result<Self, Error> {
        if set.is_empty() {
            return Err(Error::Domain("agent set must be nonempty".into()));
        }
        Ok(AgentSet(set))
    }

    pub fn numbered(n: usize) -> Result<Self, Error> {
        Self::new(AgentId::numbered(n))
    }

    pub fn single(agent: AgentId) -> Self {
        let mut set = BTreeSet::new();
        set.insert(agent);
        AgentSet(set)
    }

    pub fn pair(p: AgentId, q: AgentId) -> Result<Self, Error> {
        Self::new([p, q])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; present for API symmetry with collections.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, agent: &AgentId) -> bool {
        self.0.contains(agent)
    }

    pub fn iter(&self) -> impl Iterator<Item = &AgentId> + '_ {
        self.0.iter()
    }

    pub fn as_set(&self) -> &BTreeSet<AgentId> {
        &self.0
    }

    pub fn is_subset(&self, other: &AgentSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_strict_subset(&self, other: &AgentSet) -> bool {
        self.is_subset(other) && self.len() < other.len()
    }

    /// Agents of `self` that are not in `other`, possibly none.
    pub fn difference(&self, other: &AgentSet) -> BTreeSet<AgentId> {
        self.0.difference(&other.0).cloned().collect()
    }

    /// The first `n` agents in order.
    pub fn prefix(&self, n: usize) -> Result<AgentSet, Error> {
        Self::from_set(self.0.iter().take(n).cloned().collect())
    }
}

impl fmt::Display for AgentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, agent) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{agent}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for AgentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

impl FromStr for AgentSet {
    type Err = Error;

    /// Comma-separated tokens, e.g. `p0,p1,p2`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let agents = s
            .split(',')
            .map(|tok| AgentId::new(tok.trim()))
            .collect::<Result<Vec<_>, _>>()?;
        AgentSet::new(agents)
    }
}

impl<'a> IntoIterator for &'a AgentSet {
    type Item = &'a AgentId;
    type IntoIter = alloc::collections::btree_set::Iter<'a, AgentId>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

pub(crate) fn join_agents<'a, I: IntoIterator<Item = &'a AgentId>>(agents: I) -> String {
    let mut out = String::new();
    for (i, agent) in agents.into_iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(agent.as_str());
    }
    out
}
