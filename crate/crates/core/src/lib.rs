//! Transactions-based distributed transition systems.
//!
//! A platform is described by the atomic transactions its agents may take.
//! Everything else here is generic over [`Platform`]: projection and closure
//! of transactions onto larger agent sets, run validation, seeded
//! simulation, and a bounded brute-force checker for the oblivious,
//! interactive, and grassroots properties.
//!
//! Three platforms ship with the crate:
//!
//! * [`gsn`]: social network with binary befriend/unfriend.
//! * [`gc`]: personal cryptocurrencies with unary mint and binary swap.
//! * [`gf`]: democratic federation with k-ary federate/join/leave.
//!
//! The crate is `no_std` and needs only `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod agent;
pub mod checker;
pub mod dts;
pub mod error;
pub mod gc;
pub mod gf;
pub mod gsn;
pub mod platform;
pub mod run;
pub mod sim;

pub use agent::{AgentId, AgentSet};
pub use dts::{lift, Configuration, Transaction, Transition};
pub use error::Error;
pub use platform::{apply, enumerate_enabled, initial_configuration, is_enabled, Bounds, Platform, Txn};
pub use run::{validate_run, FailurePoint, RunFailure, RunVerdict, Trace, TraceStep};
