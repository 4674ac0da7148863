//! Scenario files.
//!
//! ```toml
//! platform = "gc"
//! agents = 5              # or ["alice", "bob"]
//! steps = 200
//! seed = 7
//! hooks = ["conservation"]
//! prefix = ["mint p0 1"]
//!
//! [bounds]
//! max_mint = 3
//! max_swap_size = 3
//! ```

use grassroots_core::sim::Scenario;
use grassroots_core::{AgentId, AgentSet, Bounds, Error, Platform};
use serde::Deserialize;

#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum Agents {
    Count(usize),
    Names(Vec<String>),
}

impl Agents {
    pub fn to_set(&self) -> Result<AgentSet, Error> {
        match self {
            Agents::Count(n) => AgentSet::numbered(*n),
            Agents::Names(names) => AgentSet::new(names.iter().map(|s| AgentId::new(s)).collect::<Result<Vec<_>, _>>()?),
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct BoundsFile {
    #[serde(default = "default_mint")]
    pub max_mint: u64,
    #[serde(default = "default_swap")]
    pub max_swap_size: usize,
}

fn default_mint() -> u64 {
    Bounds::default().max_mint
}

fn default_swap() -> usize {
    Bounds::default().max_swap_size
}

impl Default for BoundsFile {
    fn default() -> Self {
        BoundsFile { max_mint: default_mint(), max_swap_size: default_swap() }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub platform: String,
    pub agents: Agents,
    pub steps: usize,
    pub seed: u64,
    /// Invariant names; absent means every invariant of the platform.
    #[serde(default)]
    pub hooks: Option<Vec<String>>,
    #[serde(default)]
    pub prefix: Vec<String>,
    #[serde(default)]
    pub bounds: BoundsFile,
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn bounds(&self) -> Bounds {
        Bounds::new(self.bounds.max_mint, self.bounds.max_swap_size)
    }

    pub fn to_scenario<P: Platform + ?Sized>(&self, _platform: &P) -> Result<Scenario<P::Label>, Error> {
        let prefix = self.prefix.iter().map(|s| s.parse()).collect::<Result<Vec<P::Label>, _>>()?;
        Ok(Scenario {
            agents: self.agents.to_set()?,
            steps: self.steps,
            seed: self.seed,
            bounds: self.bounds(),
            prefix,
        })
    }
}
