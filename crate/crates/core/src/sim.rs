//! Seeded random execution with per-step monitors.
//!
//! The scheduler is ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64(seed)`. Each step draws the index of the next transaction
//! from the canonical enumeration with [`Scheduler::pick`]: 64-bit draws,
//! rejecting those at or above the largest multiple of `n`, then taking the
//! remainder. A trace is therefore a pure function of the platform's
//! enumeration order and the seed.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::agent::AgentSet;
use crate::dts::{lift, Configuration};
use crate::error::Error;
use crate::platform::{initial_configuration, step, Bounds, Platform, Txn};
use crate::run::{replay_steps, Trace, TraceStep};

/// Uniform choice over `0..n`, reproducible from a 64-bit seed.
#[derive(Clone, Debug)]
pub struct Scheduler {
    rng: ChaCha8Rng,
}

impl Scheduler {
    pub fn new(seed: u64) -> Self {
        Scheduler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Panics if `n == 0`.
    pub fn pick(&mut self, n: usize) -> usize {
        assert!(n > 0, "cannot pick from an empty range");
        let n = n as u64;
        let zone = u64::MAX - (u64::MAX % n);
        loop {
            let x = self.rng.next_u64();
            if x < zone {
                return (x % n) as usize;
            }
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
}

/// A check run after every step of a simulation or replay.
pub trait Monitor<P: Platform + ?Sized> {
    fn name(&self) -> &'static str;

    fn start(&mut self, _initial: &Configuration<P::State>) -> Result<(), String> {
        Ok(())
    }

    fn observe(&mut self, index: usize, t: &Txn<P>, after: &Configuration<P::State>) -> Result<(), String>;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub monitor: &'static str,
    /// Step after which the monitor failed; `None` for the initial
    /// configuration.
    pub index: Option<usize>,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct Scenario<L> {
    pub agents: AgentSet,
    pub steps: usize,
    pub seed: u64,
    pub bounds: Bounds,
    /// Steps taken before random scheduling starts; they count towards
    /// `steps`.
    pub prefix: Vec<L>,
}

impl<L> Scenario<L> {
    pub fn new(agents: AgentSet, steps: usize, seed: u64) -> Self {
        Scenario { agents, steps, seed, bounds: Bounds::default(), prefix: Vec::new() }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome<S, L> {
    pub trace: Trace<S, L>,
    pub last: Configuration<S>,
    /// The first monitor failure; the trace stops at that step.
    pub violation: Option<Violation>,
}

fn start_monitors<P: Platform + ?Sized>(
    monitors: &mut [&mut dyn Monitor<P>],
    initial: &Configuration<P::State>,
) -> Option<Violation> {
    monitors.iter_mut().find_map(|m| {
        m.start(initial)
            .err()
            .map(|reason| Violation { monitor: m.name(), index: None, reason })
    })
}

fn observe_monitors<P: Platform + ?Sized>(
    monitors: &mut [&mut dyn Monitor<P>],
    index: usize,
    t: &Txn<P>,
    after: &Configuration<P::State>,
) -> Option<Violation> {
    monitors.iter_mut().find_map(|m| {
        m.observe(index, t, after)
            .err()
            .map(|reason| Violation { monitor: m.name(), index: Some(index), reason })
    })
}

/// Runs the scripted prefix and then uniformly random enabled steps from the
/// initial configuration, until the step budget is spent, nothing is
/// enabled, or a monitor fails.
pub fn simulate<P: Platform + ?Sized>(
    platform: &P,
    scenario: &Scenario<P::Label>,
    monitors: &mut [&mut dyn Monitor<P>],
) -> Result<Outcome<P::State, P::Label>, Error> {
    let initial = initial_configuration(platform, &scenario.agents);
    let mut trace = Trace::new(platform.tag(), scenario.seed, initial.clone());
    let mut current = initial;
    let mut scheduler = Scheduler::new(scenario.seed);
    let mut violation = start_monitors(monitors, &current);

    let mut index = 0;
    while violation.is_none() && index < scenario.steps {
        let label = match scenario.prefix.get(index) {
            Some(label) => label.clone(),
            None => {
                let n = platform.count_enabled(&current, &scenario.bounds);
                if n == 0 {
                    trace.terminal = true;
                    break;
                }
                let k = scheduler.pick(n);
                platform
                    .nth_enabled(&current, &scenario.bounds, k)
                    .expect("index below enabled count")
            }
        };
        let (t, next) = step(platform, &current, &label).map_err(|e| Error::Validation {
            index,
            reason: format!("scripted step {label}: {e}"),
        })?;
        trace.steps.push(TraceStep { index, label, participants: t.participants() });
        violation = observe_monitors(monitors, index, &t, &next);
        current = next;
        index += 1;
    }
    if index < scenario.prefix.len() && violation.is_none() {
        return Err(Error::Validation {
            index,
            reason: format!("step budget {} is shorter than the scripted prefix", scenario.steps),
        });
    }
    Ok(Outcome { trace, last: current, violation })
}

/// Re-applies a trace, running the monitors after every step.
pub fn replay<P: Platform + ?Sized>(
    platform: &P,
    trace: &Trace<P::State, P::Label>,
    monitors: &mut [&mut dyn Monitor<P>],
) -> Result<Outcome<P::State, P::Label>, Error> {
    let steps = replay_steps(platform, trace).map_err(|f| match f.step_index() {
        Some(index) => Error::Validation { index, reason: format!("{}", f.error) },
        None => f.error,
    })?;
    let mut violation = start_monitors(monitors, &trace.initial);
    let mut last = trace.initial.clone();
    let mut kept = Vec::new();
    for ((t, next), recorded) in steps.into_iter().zip(&trace.steps) {
        if violation.is_some() {
            break;
        }
        violation = observe_monitors(monitors, recorded.index, &t, &next);
        kept.push(recorded.clone());
        last = next;
    }
    let mut trace = trace.clone();
    if violation.is_some() {
        trace.steps = kept;
    }
    Ok(Outcome { trace, last, violation })
}

/// A random run of exactly `len` steps (fewer if nothing is enabled),
/// returning the labels and the final configuration.
pub fn random_walk<P: Platform + ?Sized>(
    platform: &P,
    agents: &AgentSet,
    len: usize,
    bounds: &Bounds,
    scheduler: &mut Scheduler,
) -> (Vec<P::Label>, Configuration<P::State>) {
    let mut current = initial_configuration(platform, agents);
    let mut labels = Vec::with_capacity(len);
    for _ in 0..len {
        let n = platform.count_enabled(&current, bounds);
        if n == 0 {
            break;
        }
        let label = platform
            .nth_enabled(&current, bounds, scheduler.pick(n))
            .expect("index below enabled count");
        let t = platform.instantiate(&label, &current).expect("enumerated labels are enabled");
        current = lift(&t, &current).expect("instantiated at this configuration").after().clone();
        labels.push(label);
    }
    (labels, current)
}
