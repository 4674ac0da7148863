//! A deliberately broken social network used as a negative control for the
//! obliviousness check: befriending is refused while any non-participant is
//! friendless, so the guard reads states outside the transaction.

use std::collections::BTreeSet;

use grassroots_core::gsn::{FriendSet, Gsn, GsnLabel};
use grassroots_core::{AgentId, AgentSet, Bounds, Configuration, Error, Platform, Txn};

#[derive(Clone, Copy, Debug, Default)]
pub struct NosyGsn;

impl Platform for NosyGsn {
    type State = FriendSet;
    type Label = GsnLabel;

    fn tag(&self) -> &'static str {
        "gsn-nosy"
    }

    fn initial_state(&self, agent: &AgentId) -> FriendSet {
        Gsn.initial_state(agent)
    }

    fn instantiate(&self, label: &GsnLabel, c: &Configuration<FriendSet>) -> Result<Txn<Self>, Error> {
        if let GsnLabel::Befriend(p, q) = label {
            if let Some((r, _)) = c.iter().find(|(r, s)| *r != p && *r != q && s.is_empty()) {
                return Err(Error::Guard(format!("{label}: bystander {r} has no friends")));
            }
        }
        Gsn.instantiate(label, c)
    }

    fn enabled_labels(&self, c: &Configuration<FriendSet>, bounds: &Bounds) -> Vec<GsnLabel> {
        Gsn.enabled_labels(c, bounds)
            .into_iter()
            .filter(|l| self.instantiate(l, c).is_ok())
            .collect()
    }

    fn refs(&self, state: &FriendSet) -> BTreeSet<AgentId> {
        Gsn.refs(state)
    }

    fn interaction_hints(&self, c: &Configuration<FriendSet>, inside: &AgentSet) -> Vec<Vec<GsnLabel>> {
        Gsn.interaction_hints(c, inside)
    }
}
