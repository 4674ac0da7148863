//! Line-oriented text formats for traces and configurations.
//!
//! A trace file:
//!
//! ```text
//! grassroots-trace	version=1	platform=gsn	agents=p0,p1	seed=7
//! 0	befriend p0 p1	p0,p1	3f1c0a9e5b7d2c41
//! end	terminal=false
//! ```
//!
//! Fields are tab-separated. Each step line holds the index, the label, the
//! participants, and the first 16 hex digits of the SHA-256 of the
//! configuration after the step in its display form. Lines starting with
//! `#` are comments. A configuration file has a `grassroots-config` header
//! and one `agent<TAB>state` line per agent.

#![allow(clippy::tabs_in_doc_comments)]

use std::collections::BTreeMap;
use std::fmt::Write as _;

use grassroots_core::run::{replay_steps, Trace, TraceStep};
use grassroots_core::{initial_configuration, AgentId, AgentSet, Configuration, Error, Platform};
use sha2::{Digest, Sha256};

pub const TRACE_MAGIC: &str = "grassroots-trace";
pub const CONFIG_MAGIC: &str = "grassroots-config";
pub const VERSION: &str = "1";

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FileError {
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    /// A problem attributable to one step of a trace.
    #[error("step {index}: {reason}")]
    Step { index: usize, reason: String },
}

impl FileError {
    pub fn step_index(&self) -> Option<usize> {
        match self {
            FileError::Step { index, .. } => Some(*index),
            FileError::Syntax { .. } => None,
        }
    }
}

/// First 16 hex digits of the SHA-256 of the configuration's display form.
pub fn digest<S: std::fmt::Display>(c: &Configuration<S>) -> String {
    let hash = Sha256::digest(c.to_string().as_bytes());
    hex::encode(&hash[..8])
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
}

fn header<'a>(line: usize, text: &'a str, magic: &str) -> Result<BTreeMap<&'a str, &'a str>, FileError> {
    let syntax = |reason: String| FileError::Syntax { line, reason };
    let mut fields = text.split('\t');
    if fields.next() != Some(magic) {
        return Err(syntax(format!("expected a {magic} header")));
    }
    let mut out = BTreeMap::new();
    for field in fields {
        let (k, v) = field.split_once('=').ok_or_else(|| syntax(format!("header field {field:?} is not key=value")))?;
        if out.insert(k, v).is_some() {
            return Err(syntax(format!("header field {k} repeated")));
        }
    }
    match out.get("version") {
        Some(&VERSION) => Ok(out),
        Some(v) => Err(syntax(format!("unsupported version {v}"))),
        None => Err(syntax("header lacks a version".into())),
    }
}

fn field<'a>(line: usize, fields: &BTreeMap<&str, &'a str>, key: &str) -> Result<&'a str, FileError> {
    fields
        .get(key)
        .copied()
        .ok_or_else(|| FileError::Syntax { line, reason: format!("header lacks {key}") })
}

/// The platform tag named in a trace or configuration header.
pub fn platform_tag(text: &str) -> Result<String, FileError> {
    let (line, first) = content_lines(text)
        .next()
        .ok_or(FileError::Syntax { line: 1, reason: "empty file".into() })?;
    let magic = first.split('\t').next().unwrap_or_default();
    let fields = header(line, first, if magic == CONFIG_MAGIC { CONFIG_MAGIC } else { TRACE_MAGIC })?;
    Ok(field(line, &fields, "platform")?.to_string())
}

/// Renders a valid trace, replaying it to compute the digests.
pub fn write_trace<P: Platform + ?Sized>(platform: &P, trace: &Trace<P::State, P::Label>) -> Result<String, Error> {
    let steps = replay_steps(platform, trace).map_err(|f| f.error)?;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{TRACE_MAGIC}\tversion={VERSION}\tplatform={}\tagents={}\tseed={}",
        trace.platform,
        trace.initial.agents(),
        trace.seed
    );
    for (s, (_, after)) in trace.steps.iter().zip(&steps) {
        let _ = writeln!(out, "{}\t{}\t{}\t{}", s.index, s.label, s.participants, digest(after));
    }
    let _ = writeln!(out, "end\tterminal={}", trace.terminal);
    Ok(out)
}

/// A parsed trace with the digest recorded for each step.
#[derive(Clone, Debug)]
pub struct TraceFile<S, L> {
    pub trace: Trace<S, L>,
    pub digests: Vec<String>,
}

/// Parses a trace file. Steps are not replayed; see [`verify_trace`].
pub fn read_trace<P: Platform + ?Sized>(platform: &P, text: &str) -> Result<TraceFile<P::State, P::Label>, FileError> {
    let mut lines = content_lines(text);
    let (hline, htext) = lines.next().ok_or(FileError::Syntax { line: 1, reason: "empty trace".into() })?;
    let fields = header(hline, htext, TRACE_MAGIC)?;
    let tag = field(hline, &fields, "platform")?;
    if tag != platform.tag() {
        return Err(FileError::Syntax { line: hline, reason: format!("platform {tag} is not {}", platform.tag()) });
    }
    let agents: AgentSet = field(hline, &fields, "agents")?
        .parse()
        .map_err(|e: Error| FileError::Syntax { line: hline, reason: e.to_string() })?;
    let seed: u64 = field(hline, &fields, "seed")?
        .parse()
        .map_err(|_| FileError::Syntax { line: hline, reason: "seed is not a 64-bit integer".into() })?;

    let mut trace = Trace::new(tag, seed, initial_configuration(platform, &agents));
    let mut digests = Vec::new();
    let mut ended = false;
    for (line, text) in lines {
        if ended {
            return Err(FileError::Syntax { line, reason: "content after the end line".into() });
        }
        let cols: Vec<&str> = text.split('\t').collect();
        if cols[0] == "end" {
            trace.terminal = match cols.get(1).copied() {
                Some("terminal=true") => true,
                Some("terminal=false") => false,
                _ => return Err(FileError::Syntax { line, reason: "end line must carry terminal=true|false".into() }),
            };
            ended = true;
            continue;
        }
        let index = trace.steps.len();
        let step_error = |reason: String| FileError::Step { index, reason };
        let [recorded, label, participants, hash] = cols.as_slice() else {
            return Err(step_error(format!("expected 4 tab-separated fields on line {line}")));
        };
        let recorded: usize = recorded.parse().map_err(|_| step_error(format!("bad index {recorded:?}")))?;
        let label: P::Label = label.parse().map_err(|e: Error| step_error(e.to_string()))?;
        let participants: AgentSet = participants.parse().map_err(|e: Error| step_error(e.to_string()))?;
        trace.steps.push(TraceStep { index: recorded, label, participants });
        digests.push(hash.to_string());
    }
    if !ended {
        return Err(FileError::Syntax { line: text.lines().count(), reason: "trace is truncated: no end line".into() });
    }
    Ok(TraceFile { trace, digests })
}

/// Why a trace file was rejected, with the earliest offending step if the
/// problem lies in one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rejection {
    pub index: Option<usize>,
    pub reason: String,
}

impl std::fmt::Display for Rejection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.index {
            Some(i) => write!(f, "step {i}: {}", self.reason),
            None => f.write_str(&self.reason),
        }
    }
}

/// Replays a parsed trace, checking every step and every recorded digest.
/// Returns the final configuration.
pub fn verify_trace<P: Platform + ?Sized>(
    platform: &P,
    file: &TraceFile<P::State, P::Label>,
) -> Result<Configuration<P::State>, Rejection> {
    let steps = replay_steps(platform, &file.trace).map_err(|f| Rejection {
        index: f.step_index(),
        reason: match f.error {
            Error::Validation { reason, .. } => reason,
            e => e.to_string(),
        },
    })?;
    for (i, ((_, after), recorded)) in steps.iter().zip(&file.digests).enumerate() {
        if &digest(after) != recorded {
            return Err(Rejection { index: Some(i), reason: format!("digest {recorded} does not match the replayed configuration") });
        }
    }
    Ok(steps.last().map_or_else(|| file.trace.initial.clone(), |(_, c)| c.clone()))
}

/// Parses and verifies in one go.
pub fn load_trace<P: Platform + ?Sized>(
    platform: &P,
    text: &str,
) -> Result<(TraceFile<P::State, P::Label>, Configuration<P::State>), Rejection> {
    let file = read_trace(platform, text).map_err(|e| Rejection { index: e.step_index(), reason: e.to_string() })?;
    let last = verify_trace(platform, &file)?;
    Ok((file, last))
}

pub fn write_config<P: Platform + ?Sized>(platform: &P, c: &Configuration<P::State>) -> String {
    let mut out = format!("{CONFIG_MAGIC}\tversion={VERSION}\tplatform={}\n", platform.tag());
    for (p, s) in c.iter() {
        let _ = writeln!(out, "{p}\t{s}");
    }
    out
}

pub fn read_config<P: Platform + ?Sized>(platform: &P, text: &str) -> Result<Configuration<P::State>, FileError> {
    let mut lines = content_lines(text);
    let (hline, htext) = lines.next().ok_or(FileError::Syntax { line: 1, reason: "empty configuration".into() })?;
    let fields = header(hline, htext, CONFIG_MAGIC)?;
    let tag = field(hline, &fields, "platform")?;
    if tag != platform.tag() {
        return Err(FileError::Syntax { line: hline, reason: format!("platform {tag} is not {}", platform.tag()) });
    }
    let mut states = BTreeMap::new();
    for (line, text) in lines {
        let syntax = |reason: String| FileError::Syntax { line, reason };
        let (agent, state) = text.split_once('\t').ok_or_else(|| syntax("expected agent<TAB>state".into()))?;
        let agent: AgentId = agent.parse().map_err(|e: Error| syntax(e.to_string()))?;
        let state: P::State = state.parse().map_err(|e: Error| syntax(e.to_string()))?;
        if states.insert(agent.clone(), state).is_some() {
            return Err(syntax(format!("agent {agent} listed twice")));
        }
    }
    Configuration::new(states).map_err(|e| FileError::Syntax { line: hline, reason: e.to_string() })
}
