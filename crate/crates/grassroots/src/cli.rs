//! The `grassroots` command: simulate, replay, check, modelcheck, and
//! enumerate.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails (a
//! replayable artifact is written), 2 for usage and IO errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use grassroots_core::checker::{
    check_closure_transitivity, check_interactive_from, check_oblivious, combine_grassroots, explore,
    merge_interactive, qualifying_configurations, Report, MAX_DEPTH,
};
use grassroots_core::gc::Gc;
use grassroots_core::gf::Gf;
use grassroots_core::gsn::Gsn;
use grassroots_core::run::trace_from_labels;
use grassroots_core::sim::{self, Monitor};
use grassroots_core::{AgentSet, Bounds, Error, Platform};

use crate::control::NosyGsn;
use crate::files::{load_trace, platform_tag, read_config, write_config, write_trace};
use crate::pool::map_ordered;
use crate::report::{self, CheckRecord, FailureRecord, InvariantRecord, Meta, Setting};
use crate::scenario::{Agents, BoundsFile, ScenarioFile};
use crate::tool::{self, Tool};

#[derive(Parser, Debug)]
#[command(name = "grassroots", version, about = "Simulate and model-check grassroots platforms")]
pub struct Cli {
    /// Suppress the human-readable summary.
    #[arg(long, short, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a seeded random simulation and write its trace.
    Simulate(SimulateArgs),
    /// Validate a trace, re-running its invariants, and print the final configuration.
    Replay(ReplayArgs),
    /// Check selected invariants along a trace.
    Check(CheckArgs),
    /// Bounded model checking of a subgroup inside a larger group.
    Modelcheck(ModelcheckArgs),
    /// List the transactions enabled at a configuration.
    Enumerate(EnumerateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PlatformArg {
    Gsn,
    Gc,
    Gf,
    /// Negative control: a social network whose befriend guard reads bystanders.
    GsnNosy,
}

impl PlatformArg {
    pub fn tag(self) -> &'static str {
        match self {
            PlatformArg::Gsn => Gsn.tag(),
            PlatformArg::Gc => Gc.tag(),
            PlatformArg::Gf => Gf::new().tag(),
            PlatformArg::GsnNosy => NosyGsn.tag(),
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        PlatformArg::value_variants().iter().copied().find(|p| p.tag() == tag)
    }
}

macro_rules! dispatch {
    ($kind:expr, $p:ident => $body:expr) => {
        match $kind {
            PlatformArg::Gsn => {
                let $p = &Gsn;
                $body
            }
            PlatformArg::Gc => {
                let $p = &Gc;
                $body
            }
            PlatformArg::Gf => {
                let $p = &Gf::new();
                $body
            }
            PlatformArg::GsnNosy => {
                let $p = &NosyGsn;
                $body
            }
        }
    };
}

#[derive(Args, Debug, Clone, Copy, Default)]
pub struct BoundsArgs {
    /// Largest mint amount enumerated [default: 2].
    #[arg(long)]
    pub max_mint: Option<u64>,
    /// Largest number of coins moved by one enumerated swap [default: 2].
    #[arg(long)]
    pub max_swap_size: Option<usize>,
}

impl BoundsArgs {
    fn over(&self, base: Bounds) -> Bounds {
        Bounds::new(self.max_mint.unwrap_or(base.max_mint), self.max_swap_size.unwrap_or(base.max_swap_size))
    }
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Scenario file (TOML); flags given alongside override its values.
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub platform: Option<PlatformArg>,
    /// Number of agents, named p0, p1, ...
    #[arg(long)]
    pub agents: Option<usize>,
    /// Step budget.
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub bounds: BoundsArgs,
    /// Invariants to monitor: all, none, or a comma-separated list.
    #[arg(long)]
    pub hooks: Option<String>,
    /// Trace file to write.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct ReplayArgs {
    #[arg(long)]
    pub trace: PathBuf,
    /// Invariants to re-check while replaying.
    #[arg(long, default_value = "all")]
    pub hooks: String,
    /// Write the final configuration here instead of standard output.
    #[arg(long)]
    pub dump: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(long)]
    pub trace: PathBuf,
    /// symmetry, conservation, validity, all, or a comma-separated list.
    #[arg(long, default_value = "all")]
    pub invariants: String,
    /// JSON Lines report to write.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Oblivious,
    Interactive,
    Transitivity,
    Grassroots,
}

#[derive(Args, Debug)]
pub struct ModelcheckArgs {
    #[arg(long, value_enum)]
    pub platform: PlatformArg,
    /// Size of the subgroup P.
    #[arg(long = "p")]
    pub p: usize,
    /// Size of the larger group P'.
    #[arg(long = "pprime")]
    pub pprime: usize,
    /// Exploration depth from the initial configuration.
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    #[command(flatten)]
    pub bounds: BoundsArgs,
    #[arg(long, value_enum)]
    pub mode: Mode,
    /// Longest interactivity witness searched for.
    #[arg(long, default_value_t = 3)]
    pub witness_depth: usize,
    /// Samples for the transitivity mode.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Seed for the transitivity mode.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for interactivity checks.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Directory for the report and any counterexample traces.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    #[arg(long, value_enum)]
    pub platform: PlatformArg,
    /// Configuration file.
    #[arg(long)]
    pub config: PathBuf,
    #[command(flatten)]
    pub bounds: BoundsArgs,
}

/// How a command went wrong.
#[derive(Debug, PartialEq, Eq)]
pub enum Failure {
    /// Bad input, unreadable files, exceeded guardrails.
    Usage(String),
    /// A check failed; the message names the artifact written.
    Check(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Usage(_) => 2,
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

struct Out {
    quiet: bool,
}

impl Out {
    fn say(&self, line: impl AsRef<str>) {
        if !self.quiet {
            emit(&format!("{}\n", line.as_ref()));
        }
    }
}

/// Standard output, tolerating a closed pipe.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn monitor_refs<P: Platform + ?Sized>(boxes: &mut [Box<dyn Monitor<P>>]) -> Vec<&mut dyn Monitor<P>> {
    boxes.iter_mut().map(|b| b.as_mut() as &mut dyn Monitor<P>).collect()
}

pub fn run(cli: Cli) -> Result<(), Failure> {
    let out = Out { quiet: cli.quiet };
    match cli.command {
        Command::Simulate(args) => simulate(&args, &out),
        Command::Replay(args) => {
            let text = read(&args.trace)?;
            let kind = trace_platform(&text)?;
            dispatch!(kind, p => replay_on(p, &args, &text, &out))
        }
        Command::Check(args) => {
            let text = read(&args.trace)?;
            let kind = trace_platform(&text)?;
            dispatch!(kind, p => check_on(p, &args, &text, &out))
        }
        Command::Modelcheck(args) => dispatch!(args.platform, p => modelcheck_on(p, &args, &out)),
        Command::Enumerate(args) => dispatch!(args.platform, p => enumerate_on(p, &args, &out)),
    }
}

/// Parses arguments, runs, reports errors on standard error.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::Check(m) => eprintln!("check failed: {m}"),
            }
            ExitCode::from(f.exit_code())
        }
    }
}

fn trace_platform(text: &str) -> Result<PlatformArg, Failure> {
    let tag = platform_tag(text).map_err(usage)?;
    PlatformArg::from_tag(&tag).ok_or_else(|| Failure::Usage(format!("unknown platform {tag:?}")))
}

fn simulate(args: &SimulateArgs, out: &Out) -> Result<(), Failure> {
    let mut file = match &args.scenario {
        Some(path) => ScenarioFile::parse(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
        None => {
            let missing = |flag: &str| Failure::Usage(format!("--{flag} is required without --scenario"));
            ScenarioFile {
                platform: args.platform.ok_or_else(|| missing("platform"))?.tag().to_string(),
                agents: Agents::Count(args.agents.ok_or_else(|| missing("agents"))?),
                steps: args.steps.ok_or_else(|| missing("steps"))?,
                seed: args.seed.ok_or_else(|| missing("seed"))?,
                hooks: None,
                prefix: Vec::new(),
                bounds: BoundsFile::default(),
            }
        }
    };
    if let Some(p) = args.platform {
        file.platform = p.tag().to_string();
    }
    if let Some(n) = args.agents {
        file.agents = Agents::Count(n);
    }
    if let Some(s) = args.steps {
        file.steps = s;
    }
    if let Some(s) = args.seed {
        file.seed = s;
    }
    let b = args.bounds.over(file.bounds());
    file.bounds = BoundsFile { max_mint: b.max_mint, max_swap_size: b.max_swap_size };
    let hooks = match (&args.hooks, &file.hooks) {
        (Some(h), _) => h.clone(),
        (None, Some(list)) => list.join(","),
        (None, None) => "all".to_string(),
    };
    let kind = PlatformArg::from_tag(&file.platform)
        .ok_or_else(|| Failure::Usage(format!("unknown platform {:?}", file.platform)))?;
    dispatch!(kind, p => simulate_on(p, &file, &hooks, &args.out, out))
}

fn simulate_on<P: Tool>(p: &P, file: &ScenarioFile, hooks: &str, path: &Path, out: &Out) -> Result<(), Failure> {
    let scenario = file.to_scenario(p).map_err(usage)?;
    let names = tool::select(p, hooks).map_err(Failure::Usage)?;
    let mut boxes = tool::monitors(p, &names);
    let outcome = sim::simulate(p, &scenario, &mut monitor_refs(&mut boxes)).map_err(usage)?;
    write(path, &write_trace(p, &outcome.trace).map_err(usage)?)?;
    out.say(format!(
        "{}: {} steps over {} agents, seed {}{} -> {}",
        p.tag(),
        outcome.trace.steps.len(),
        scenario.agents.len(),
        scenario.seed,
        if outcome.trace.terminal { " (nothing enabled)" } else { "" },
        path.display()
    ));
    match outcome.violation {
        None => {
            if !names.is_empty() {
                out.say(format!("invariants held at every step: {}", names.join(", ")));
            }
            Ok(())
        }
        Some(v) => Err(Failure::Check(format!(
            "{} violated {}: {}; trace up to the violation written to {}",
            v.monitor,
            v.index.map_or("initially".to_string(), |i| format!("after step {i}")),
            v.reason,
            path.display()
        ))),
    }
}

fn replay_on<P: Tool>(p: &P, args: &ReplayArgs, text: &str, out: &Out) -> Result<(), Failure> {
    let names = tool::select(p, &args.hooks).map_err(Failure::Usage)?;
    let (file, last) =
        load_trace(p, text).map_err(|r| Failure::Check(format!("{} is not a valid run: {r}", args.trace.display())))?;
    let mut boxes = tool::monitors(p, &names);
    let outcome = sim::replay(p, &file.trace, &mut monitor_refs(&mut boxes)).map_err(usage)?;
    if let Some(v) = outcome.violation {
        return Err(Failure::Check(format!(
            "{} violated {}: {}",
            v.monitor,
            v.index.map_or("initially".to_string(), |i| format!("after step {i}")),
            v.reason
        )));
    }
    let dump = write_config(p, &last);
    match &args.dump {
        Some(path) => write(path, &dump)?,
        None => emit(&dump),
    }
    out.say(format!("valid run of {} steps", file.trace.steps.len()));
    Ok(())
}

fn check_on<P: Tool>(p: &P, args: &CheckArgs, text: &str, out: &Out) -> Result<(), Failure> {
    let started = Instant::now();
    let names = tool::select(p, &args.invariants).map_err(Failure::Usage)?;
    let trace_name = args.trace.display().to_string();
    let record = |invariant: &str, steps: usize, failure: Option<FailureRecord>| InvariantRecord {
        record: "invariant",
        trace: trace_name.clone(),
        platform: p.tag().to_string(),
        invariant: invariant.to_string(),
        verdict: if failure.is_none() { "pass" } else { "fail" }.to_string(),
        steps,
        failure,
    };
    let mut records = Vec::new();
    let mut failed = Vec::new();
    match load_trace(p, text) {
        Err(r) => {
            failed.push(format!("run: {r}"));
            records.push(record("run", 0, Some(FailureRecord { index: r.index, reason: r.reason })));
        }
        Ok((file, _)) => {
            let steps = file.trace.steps.len();
            records.push(record("run", steps, None));
            out.say(format!("run: valid ({steps} steps)"));
            for name in &names {
                let mut boxes = tool::monitors(p, &[name]);
                let outcome = sim::replay(p, &file.trace, &mut monitor_refs(&mut boxes)).map_err(usage)?;
                match outcome.violation {
                    None => {
                        out.say(format!("{name}: pass"));
                        records.push(record(name, steps, None));
                    }
                    Some(v) => {
                        out.say(format!("{name}: FAIL at {:?}: {}", v.index, v.reason));
                        failed.push(format!("{name}: {}", v.reason));
                        records.push(record(name, steps, Some(FailureRecord { index: v.index, reason: v.reason })));
                    }
                }
            }
        }
    }
    if let Some(path) = &args.report {
        report::write_jsonl(path, &Meta::new("check", started.elapsed().as_millis()), &records).map_err(usage)?;
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!("{} ({})", failed.join("; "), trace_name)))
    }
}

/// Interactivity at every qualifying reachable configuration, spread over
/// `jobs` threads; the merged report does not depend on `jobs`.
pub fn interactive_parallel<P>(
    p: &P,
    inside: &AgentSet,
    outside: &AgentSet,
    depth: usize,
    witness_depth: usize,
    bounds: &Bounds,
    jobs: usize,
) -> Result<Report<P>, Error>
where
    P: Platform + Sync,
    P::State: Send + Sync,
    P::Label: Send + Sync,
{
    if witness_depth > MAX_DEPTH {
        return Err(Error::Limit(format!("witness depth {witness_depth} exceeds the limit of {MAX_DEPTH}")));
    }
    let ex = explore(p, outside, depth, bounds)?;
    let qualifying = qualifying_configurations(p, &ex, inside)?;
    let reports = map_ordered(&qualifying, jobs, |(path, c)| {
        check_interactive_from(p, inside, c, path.clone(), witness_depth, bounds)
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    Ok(merge_interactive(reports, ex.len(), depth))
}

fn modelcheck_on<P>(p: &P, args: &ModelcheckArgs, out: &Out) -> Result<(), Failure>
where
    P: Tool,
    P::State: Send + Sync,
    P::Label: Send + Sync,
{
    let started = Instant::now();
    if args.p == 0 || args.p >= args.pprime {
        return Err(Failure::Usage(format!("need 0 < --p < --pprime, got {} and {}", args.p, args.pprime)));
    }
    let outside = AgentSet::numbered(args.pprime).map_err(usage)?;
    let inside = outside.prefix(args.p).map_err(usage)?;
    let bounds = args.bounds.over(Bounds::default());
    let mut reports: Vec<Report<P>> = Vec::new();
    match args.mode {
        Mode::Oblivious => reports.push(check_oblivious(p, &inside, &outside, args.depth, &bounds).map_err(usage)?),
        Mode::Interactive => reports.push(
            interactive_parallel(p, &inside, &outside, args.depth, args.witness_depth, &bounds, args.jobs).map_err(usage)?,
        ),
        Mode::Transitivity => reports.push(
            check_closure_transitivity(p, &inside, &outside, args.samples, args.seed, &bounds).map_err(usage)?,
        ),
        Mode::Grassroots => {
            let oblivious = check_oblivious(p, &inside, &outside, args.depth, &bounds).map_err(usage)?;
            let interactive =
                interactive_parallel(p, &inside, &outside, args.depth, args.witness_depth, &bounds, args.jobs)
                    .map_err(usage)?;
            let combined = combine_grassroots(oblivious.clone(), interactive.clone()).map_err(usage)?;
            reports.extend([oblivious, interactive, combined]);
        }
    }
    fs::create_dir_all(&args.out_dir).map_err(|e| Failure::Usage(format!("cannot create {}: {e}", args.out_dir.display())))?;
    let setting = Setting { platform: p.tag(), p: args.p, pprime: args.pprime, depth: args.depth, bounds };
    let mut records = Vec::new();
    for r in &reports {
        let artifact = match &r.counterexample {
            Some(cex) => {
                let name = format!("{}.counterexample.trace", r.kind);
                let trace = trace_from_labels(p, &outside, &cex.path).map_err(usage)?;
                write(&args.out_dir.join(&name), &write_trace(p, &trace).map_err(usage)?)?;
                Some(name)
            }
            None => None,
        };
        records.push(CheckRecord::new(setting, r, artifact));
        out.say(format!(
            "{} {}: {} in {}, depth {}: {} ({} instances, {} configurations, longest witness {})",
            p.tag(),
            r.kind,
            args.p,
            args.pprime,
            args.depth,
            r.verdict,
            r.stats.instances,
            r.stats.configurations,
            r.stats.longest_witness
        ));
        if let Some(cex) = &r.counterexample {
            out.say(format!("  {}", cex.reason));
        }
    }
    let mode = format!("{:?}", args.mode).to_lowercase();
    let report_path = args.out_dir.join(format!("modelcheck-{mode}.jsonl"));
    report::write_jsonl(&report_path, &Meta::new("modelcheck", started.elapsed().as_millis()), &records)
        .map_err(usage)?;
    out.say(format!("report: {}", report_path.display()));
    let last = reports.last().expect("at least one report");
    if last.passed() {
        Ok(())
    } else {
        Err(Failure::Check(format!("{} {} is {}; see {}", p.tag(), last.kind, last.verdict, report_path.display())))
    }
}

fn enumerate_on<P: Tool>(p: &P, args: &EnumerateArgs, out: &Out) -> Result<(), Failure> {
    let text = read(&args.config)?;
    let c = read_config(p, &text).map_err(|e| Failure::Usage(format!("{}: {e}", args.config.display())))?;
    let bounds = args.bounds.over(Bounds::default());
    let labels = p.enabled_labels(&c, &bounds);
    for label in &labels {
        let t = p.instantiate(label, &c).map_err(usage)?;
        emit(&format!("{label}\t{}\n", t.participants()));
    }
    out.say(format!("{} enabled transactions", labels.len()));
    Ok(())
}
