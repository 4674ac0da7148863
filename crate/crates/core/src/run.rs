//! Traces and run validation.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::agent::AgentSet;
use crate::dts::Configuration;
use crate::error::Error;
use crate::platform::{initial_configuration, step, Platform, Txn};

/// One recorded step: its position, the transaction label, and the
/// participants the transaction was taken by.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep<L> {
    pub index: usize,
    pub label: L,
    pub participants: AgentSet,
}

/// A recorded computation of some platform.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace<S, L> {
    pub platform: String,
    pub seed: u64,
    pub initial: Configuration<S>,
    pub steps: Vec<TraceStep<L>>,
    /// Set when the computation stopped because nothing was enabled.
    pub terminal: bool,
}

impl<S: Clone + Eq, L> Trace<S, L> {
    pub fn new(platform: &str, seed: u64, initial: Configuration<S>) -> Self {
        Trace {
            platform: platform.into(),
            seed,
            initial,
            steps: Vec::new(),
            terminal: false,
        }
    }

    pub fn agents(&self) -> AgentSet {
        self.initial.agents()
    }

    pub fn labels(&self) -> impl Iterator<Item = &L> + '_ {
        self.steps.iter().map(|s| &s.label)
    }
}

/// Where a run first went wrong.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailurePoint {
    /// The trace does not start at the initial configuration.
    Initial,
    Step(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunFailure {
    pub at: FailurePoint,
    pub error: Error,
}

impl RunFailure {
    pub fn step_index(&self) -> Option<usize> {
        match self.at {
            FailurePoint::Step(i) => Some(i),
            FailurePoint::Initial => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunVerdict {
    pub failure: Option<RunFailure>,
}

impl RunVerdict {
    pub fn is_valid(&self) -> bool {
        self.failure.is_none()
    }
}

/// Replays `trace`, yielding every transaction with its target
/// configuration, and stops at the first step that cannot be taken.
pub fn replay_steps<P: Platform + ?Sized>(
    platform: &P,
    trace: &Trace<P::State, P::Label>,
) -> Result<Vec<(Txn<P>, Configuration<P::State>)>, RunFailure> {
    let fail = |at, error| RunFailure { at, error };
    if trace.platform != platform.tag() {
        return Err(fail(
            FailurePoint::Initial,
            Error::Parse(format!("trace platform {} is not {}", trace.platform, platform.tag())),
        ));
    }
    let agents = trace.initial.agents();
    if trace.initial != initial_configuration(platform, &agents) {
        return Err(fail(
            FailurePoint::Initial,
            Error::NotEnabled("trace does not start at the initial configuration".into()),
        ));
    }
    let mut current = trace.initial.clone();
    let mut out = Vec::with_capacity(trace.steps.len());
    for (i, s) in trace.steps.iter().enumerate() {
        if s.index != i {
            return Err(fail(
                FailurePoint::Step(i),
                Error::Validation { index: i, reason: format!("recorded index {} out of sequence", s.index) },
            ));
        }
        if !s.participants.is_subset(&agents) {
            return Err(fail(
                FailurePoint::Step(i),
                Error::Domain(format!("participants {} outside agent set {}", s.participants, agents)),
            ));
        }
        let (t, next) = step(platform, &current, &s.label).map_err(|e| fail(FailurePoint::Step(i), e))?;
        if t.participants() != s.participants {
            return Err(fail(
                FailurePoint::Step(i),
                Error::Validation {
                    index: i,
                    reason: format!("recorded participants {} but {} has {}", s.participants, s.label, t.participants()),
                },
            ));
        }
        current = next.clone();
        out.push((t, next));
    }
    Ok(out)
}

/// Checks that `trace` is a run: it starts at the initial configuration and
/// every step is enabled at its predecessor.
pub fn validate_run<P: Platform + ?Sized>(platform: &P, trace: &Trace<P::State, P::Label>) -> RunVerdict {
    RunVerdict {
        failure: replay_steps(platform, trace).err(),
    }
}

/// The configuration a valid trace ends in.
pub fn final_configuration<P: Platform + ?Sized>(
    platform: &P,
    trace: &Trace<P::State, P::Label>,
) -> Result<Configuration<P::State>, RunFailure> {
    Ok(replay_steps(platform, trace)?
        .pop()
        .map(|(_, c)| c)
        .unwrap_or_else(|| trace.initial.clone()))
}

/// Builds a trace by taking `labels` in order from the initial
/// configuration over `agents`.
pub fn trace_from_labels<P: Platform + ?Sized>(
    platform: &P,
    agents: &AgentSet,
    labels: &[P::Label],
) -> Result<Trace<P::State, P::Label>, Error> {
    let mut trace = Trace::new(platform.tag(), 0, initial_configuration(platform, agents));
    let mut current = trace.initial.clone();
    for (index, label) in labels.iter().enumerate() {
        let (t, next) = step(platform, &current, label).map_err(|e| Error::Validation {
            index,
            reason: format!("{e}"),
        })?;
        trace.steps.push(TraceStep { index, label: label.clone(), participants: t.participants() });
        current = next;
    }
    Ok(trace)
}
