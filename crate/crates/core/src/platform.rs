//! The platform abstraction and the generic step semantics built on it.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::agent::{AgentId, AgentSet};
use crate::dts::{lift, Configuration, Transaction};
use crate::error::Error;

/// Enumeration bounds for platforms whose transaction families are infinite.
///
/// Only the cryptocurrency platform reads them; the others have finitely
/// many enabled transactions at every configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Bounds {
    /// Largest `k` enumerated for `mint p k`.
    pub max_mint: u64,
    /// Largest `|x| + |y|` enumerated for swaps.
    pub max_swap_size: usize,
}

impl Bounds {
    pub const fn new(max_mint: u64, max_swap_size: usize) -> Self {
        Bounds { max_mint, max_swap_size }
    }
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds::new(2, 2)
    }
}

/// A transactions-based platform: local states, the initial state, and the
/// set of atomic transactions, each named by a label.
pub trait Platform {
    type State: Clone + Eq + Ord + fmt::Debug + fmt::Display + FromStr<Err = Error>;
    type Label: Clone + Eq + Ord + fmt::Debug + fmt::Display + FromStr<Err = Error>;

    /// Short tag used in file headers (`gsn`, `gc`, `gf`).
    fn tag(&self) -> &'static str;

    fn initial_state(&self, agent: &AgentId) -> Self::State;

    /// The transaction named by `label` at configuration `c`, if its guard
    /// holds there. The transaction's `before` is `c` restricted to its
    /// participants.
    fn instantiate(&self, label: &Self::Label, c: &Configuration<Self::State>) -> Result<Txn<Self>, Error>;

    /// Labels of all enabled transactions at `c` within `bounds`, in
    /// canonical order.
    fn enabled_labels(&self, c: &Configuration<Self::State>, bounds: &Bounds) -> Vec<Self::Label>;

    fn count_enabled(&self, c: &Configuration<Self::State>, bounds: &Bounds) -> usize {
        self.enabled_labels(c, bounds).len()
    }

    /// The `n`-th label of [`Platform::enabled_labels`].
    fn nth_enabled(&self, c: &Configuration<Self::State>, bounds: &Bounds, n: usize) -> Option<Self::Label> {
        self.enabled_labels(c, bounds).into_iter().nth(n)
    }

    /// Agents mentioned by a local state. A state belongs to the local
    /// states of `P` exactly when its references are a subset of `P`.
    fn refs(&self, state: &Self::State) -> BTreeSet<AgentId>;

    /// Candidate computations from `c` that leave traces of agents outside
    /// `inside` in the states of `inside`. Tried before blind search.
    fn interaction_hints(&self, _c: &Configuration<Self::State>, _inside: &AgentSet) -> Vec<Vec<Self::Label>> {
        Vec::new()
    }
}

pub type Txn<P> = Transaction<<P as Platform>::State, <P as Platform>::Label>;

pub fn initial_configuration<P: Platform + ?Sized>(platform: &P, agents: &AgentSet) -> Configuration<P::State> {
    Configuration::from_fn(agents, |p| platform.initial_state(p))
}

/// All enabled transactions at `c`, in canonical order.
pub fn enumerate_enabled<P: Platform + ?Sized>(
    platform: &P,
    c: &Configuration<P::State>,
    bounds: &Bounds,
) -> Vec<Txn<P>> {
    platform
        .enabled_labels(c, bounds)
        .iter()
        .map(|label| {
            platform
                .instantiate(label, c)
                .expect("enumerated labels are enabled")
        })
        .collect()
}

/// Whether `t` may be taken at `c`: participants are in `t`'s before-states
/// and the platform guard of `t`'s label holds at `c`, producing `t`.
pub fn is_enabled<P: Platform + ?Sized>(platform: &P, c: &Configuration<P::State>, t: &Txn<P>) -> Result<bool, Error> {
    for p in t.before().as_map().keys() {
        if !c.contains(p) {
            return Err(Error::Domain(format!("participant {p} is not in the configuration")));
        }
    }
    if t.before().iter().any(|(p, s)| c.get(p) != Some(s)) {
        return Ok(false);
    }
    Ok(matches!(platform.instantiate(t.label(), c), Ok(ref rebuilt) if rebuilt == t))
}

/// Takes `t` at `c`.
pub fn apply<P: Platform + ?Sized>(
    platform: &P,
    c: &Configuration<P::State>,
    t: &Txn<P>,
) -> Result<Configuration<P::State>, Error> {
    if !is_enabled(platform, c, t)? {
        return Err(Error::NotEnabled(format!("{} is not enabled", t.label())));
    }
    Ok(lift(t, c)?.after().clone())
}

/// Instantiates `label` at `c` and takes it.
pub fn step<P: Platform + ?Sized>(
    platform: &P,
    c: &Configuration<P::State>,
    label: &P::Label,
) -> Result<(Txn<P>, Configuration<P::State>), Error> {
    let t = platform.instantiate(label, c)?;
    let next = lift(&t, c)?.after().clone();
    Ok((t, next))
}

/// Union of the references of every given state.
pub fn refs_of<'a, P, I>(platform: &P, states: I) -> BTreeSet<AgentId>
where
    P: Platform + ?Sized,
    P::State: 'a,
    I: IntoIterator<Item = &'a P::State>,
{
    let mut out = BTreeSet::new();
    for s in states {
        out.extend(platform.refs(s));
    }
    out
}
