//! JSON Lines reports: one metadata line, then one record per check.
//!
//! Only the metadata line carries timing; the records are a function of the
//! inputs alone.

use std::path::Path;

use grassroots_core::checker::CheckReport;
use grassroots_core::Bounds;
use serde::Serialize;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Meta {
    pub record: &'static str,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub elapsed_ms: u128,
}

impl Meta {
    pub fn new(command: &str, elapsed_ms: u128) -> Self {
        Meta {
            record: "meta",
            tool: "grassroots",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            elapsed_ms,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
pub struct BoundsRecord {
    pub max_mint: u64,
    pub max_swap_size: usize,
}

impl From<Bounds> for BoundsRecord {
    fn from(b: Bounds) -> Self {
        BoundsRecord { max_mint: b.max_mint, max_swap_size: b.max_swap_size }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CounterexampleRecord {
    /// Trace file reproducing the configuration, relative to the report.
    pub trace: Option<String>,
    pub path: Vec<String>,
    pub configuration: String,
    pub transaction: Option<String>,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CheckRecord {
    pub record: &'static str,
    pub check: String,
    pub platform: String,
    pub p: usize,
    pub pprime: usize,
    pub depth: usize,
    pub bounds: BoundsRecord,
    pub verdict: String,
    pub instances: usize,
    pub configurations: usize,
    pub longest_witness: usize,
    pub witness: Vec<String>,
    pub counterexample: Option<CounterexampleRecord>,
}

/// Where a check ran.
#[derive(Clone, Copy, Debug)]
pub struct Setting<'a> {
    pub platform: &'a str,
    pub p: usize,
    pub pprime: usize,
    pub depth: usize,
    pub bounds: Bounds,
}

impl CheckRecord {
    pub fn new<S, L>(setting: Setting<'_>, report: &CheckReport<S, L>, trace: Option<String>) -> Self
    where
        S: std::fmt::Display,
        L: std::fmt::Display,
    {
        CheckRecord {
            record: "check",
            check: report.kind.to_string(),
            platform: setting.platform.to_string(),
            p: setting.p,
            pprime: setting.pprime,
            depth: setting.depth,
            bounds: setting.bounds.into(),
            verdict: report.verdict.to_string(),
            instances: report.stats.instances,
            configurations: report.stats.configurations,
            longest_witness: report.stats.longest_witness,
            witness: report.witness.iter().flatten().map(ToString::to_string).collect(),
            counterexample: report.counterexample.as_ref().map(|c| CounterexampleRecord {
                trace,
                path: c.path.iter().map(ToString::to_string).collect(),
                configuration: c.configuration.to_string(),
                transaction: c.transaction.as_ref().map(ToString::to_string),
                reason: c.reason.clone(),
            }),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct FailureRecord {
    /// `None` when the failure concerns the initial configuration.
    pub index: Option<usize>,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct InvariantRecord {
    pub record: &'static str,
    pub trace: String,
    pub platform: String,
    pub invariant: String,
    pub verdict: String,
    pub steps: usize,
    pub failure: Option<FailureRecord>,
}

/// Writes the metadata line followed by the records.
pub fn write_jsonl<R: Serialize>(path: &Path, meta: &Meta, records: &[R]) -> std::io::Result<()> {
    let mut out = serde_json::to_string(meta)?;
    out.push('\n');
    for r in records {
        out.push_str(&serde_json::to_string(r)?);
        out.push('\n');
    }
    std::fs::write(path, out)
}
