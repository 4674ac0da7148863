use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn grassroots(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grassroots")).current_dir(dir).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

/// Coin counts per minter from a bag such as `{p0:1,p1:2}`.
fn bag(text: &str) -> BTreeMap<String, u64> {
    let inner = text.trim().trim_start_matches('{').trim_end_matches('}');
    inner
        .split(',')
        .filter(|s| !s.is_empty())
        .map(|e| {
            let (k, v) = e.split_once(':').unwrap();
            (k.to_string(), v.parse().unwrap())
        })
        .collect()
}

#[test]
fn simulate_writes_a_short_trace() {
    let dir = tempfile::tempdir().unwrap();
    let o = grassroots(dir.path(), &["simulate", "--platform", "gsn", "--agents", "4", "--steps", "50", "--seed", "7", "--out", "t.trace"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(dir.path().join("t.trace")).unwrap();
    let steps = text.lines().filter(|l| l.starts_with(|c: char| c.is_ascii_digit())).count();
    assert!(steps <= 50);
    assert!(text.lines().last().unwrap().starts_with("end\t"));

    let again = grassroots(dir.path(), &["-q", "simulate", "--platform", "gsn", "--agents", "4", "--steps", "50", "--seed", "7", "--out", "u.trace"]);
    assert_eq!(code(&again), 0);
    assert!(again.stdout.is_empty());
    assert_eq!(text, fs::read_to_string(dir.path().join("u.trace")).unwrap());
}

#[test]
fn check_all_on_a_currency_trace_matches_a_recount() {
    let dir = tempfile::tempdir().unwrap();
    let o = grassroots(dir.path(), &["simulate", "--platform", "gc", "--agents", "4", "--steps", "120", "--seed", "3", "--max-mint", "3", "--max-swap-size", "3", "--out", "g.trace"]);
    assert_eq!(code(&o), 0);
    let o = grassroots(dir.path(), &["check", "--trace", "g.trace", "--invariants", "all", "--report", "r.jsonl"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report = fs::read_to_string(dir.path().join("r.jsonl")).unwrap();
    assert!(report.contains("\"invariant\":\"conservation\",\"verdict\":\"pass\""));

    // Minted totals from the labels alone, held totals from the final dump.
    let trace = fs::read_to_string(dir.path().join("g.trace")).unwrap();
    let mut minted: BTreeMap<String, u64> = BTreeMap::new();
    for line in trace.lines().skip(1) {
        let label = line.split('\t').nth(1).unwrap_or("");
        if let Some(rest) = label.strip_prefix("mint ") {
            let (who, n) = rest.split_once(' ').unwrap();
            *minted.entry(who.to_string()).or_default() += n.parse::<u64>().unwrap();
        }
    }
    assert!(!minted.is_empty());
    let o = grassroots(dir.path(), &["-q", "replay", "--trace", "g.trace"]);
    assert_eq!(code(&o), 0);
    let mut held: BTreeMap<String, u64> = BTreeMap::new();
    for line in String::from_utf8(o.stdout).unwrap().lines().skip(1) {
        let (_, b) = line.split_once('\t').unwrap();
        for (k, v) in bag(b) {
            *held.entry(k).or_default() += v;
        }
    }
    held.retain(|_, v| *v > 0);
    minted.retain(|_, v| *v > 0);
    assert_eq!(held, minted);
}

#[test]
fn federation_grassroots_at_depth_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = grassroots(dir.path(), &["modelcheck", "--platform", "gf", "--p", "2", "--pprime", "3", "--depth", "2", "--mode", "grassroots"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report = fs::read_to_string(dir.path().join("modelcheck-grassroots.jsonl")).unwrap();
    let lines: Vec<&str> = report.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].contains("\"record\":\"meta\""));
    assert!(lines[1..].iter().all(|l| l.contains("\"verdict\":\"pass\"")));
}

#[test]
fn job_count_does_not_change_reports() {
    let dir = tempfile::tempdir().unwrap();
    let mut bodies = Vec::new();
    for jobs in ["1", "3"] {
        let out = dir.path().join(jobs);
        let o = grassroots(
            dir.path(),
            &["modelcheck", "--platform", "gc", "--p", "2", "--pprime", "3", "--depth", "2", "--max-mint", "1", "--mode", "interactive", "--jobs", jobs, "--out-dir", out.to_str().unwrap()],
        );
        assert_eq!(code(&o), 0);
        let text = fs::read_to_string(out.join("modelcheck-interactive.jsonl")).unwrap();
        bodies.push(text.lines().skip(1).collect::<Vec<_>>().join("\n"));
    }
    assert_eq!(bodies[0], bodies[1]);
}

#[test]
fn negative_control_fails_with_a_replayable_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let o = grassroots(dir.path(), &["modelcheck", "--platform", "gsn-nosy", "--p", "2", "--pprime", "3", "--depth", "1", "--mode", "oblivious"]);
    assert_eq!(code(&o), 1);
    let cex = dir.path().join("oblivious.counterexample.trace");
    assert!(cex.exists());
    let o = grassroots(dir.path(), &["replay", "--trace", "oblivious.counterexample.trace"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn usage_and_io_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&grassroots(dir.path(), &["frobnicate"])), 2);
    assert_eq!(code(&grassroots(dir.path(), &["replay", "--trace", "missing.trace"])), 2);
    assert_eq!(code(&grassroots(dir.path(), &["modelcheck", "--platform", "gsn", "--p", "2", "--pprime", "3", "--depth", "9", "--mode", "oblivious"])), 2);
    assert_eq!(code(&grassroots(dir.path(), &["modelcheck", "--platform", "gsn", "--p", "2", "--pprime", "2", "--mode", "oblivious"])), 2);
    let o = grassroots(dir.path(), &["simulate", "--platform", "gsn", "--agents", "3", "--steps", "5", "--seed", "1", "--hooks", "conservation", "--out", "x.trace"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn corrupted_trace_fails_the_check() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&grassroots(dir.path(), &["simulate", "--platform", "gsn", "--agents", "3", "--steps", "10", "--seed", "2", "--out", "t.trace"])), 0);
    let text = fs::read_to_string(dir.path().join("t.trace")).unwrap();
    let bad: Vec<String> = text
        .lines()
        .map(|l| if l.starts_with("1\t") { l.replace("befriend", "unfriend") } else { l.to_string() })
        .collect();
    fs::write(dir.path().join("bad.trace"), bad.join("\n") + "\n").unwrap();
    let o = grassroots(dir.path(), &["check", "--trace", "bad.trace", "--report", "r.jsonl"]);
    assert_eq!(code(&o), 1);
    let report = fs::read_to_string(dir.path().join("r.jsonl")).unwrap();
    assert!(report.contains("\"index\":1"), "{report}");
}

#[test]
fn scenario_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("s.toml"),
        "platform = \"gc\"\nagents = [\"alice\", \"bob\"]\nsteps = 20\nseed = 5\nprefix = [\"mint alice 2\"]\n[bounds]\nmax_mint = 1\n",
    )
    .unwrap();
    let o = grassroots(dir.path(), &["simulate", "--scenario", "s.toml", "--steps", "4", "--out", "s.trace"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(dir.path().join("s.trace")).unwrap();
    assert!(text.contains("agents=alice,bob"));
    assert!(text.lines().nth(1).unwrap().contains("mint alice 2"));
    assert_eq!(text.lines().filter(|l| l.starts_with(|c: char| c.is_ascii_digit())).count(), 4);
}

#[test]
fn enumerate_lists_enabled_transactions() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("c.txt"), "grassroots-config\tversion=1\tplatform=gsn\np0\t{}\np1\t{}\np2\t{}\n").unwrap();
    let o = grassroots(dir.path(), &["-q", "enumerate", "--platform", "gsn", "--config", "c.txt"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let out = String::from_utf8(o.stdout).unwrap();
    assert_eq!(out.lines().count(), 3);
    assert!(out.lines().all(|l| l.starts_with("befriend ")));
}
