//! Adapter that profiles an external anytime solver.
//!
//! Contract with the child process: the instance arrives as an edge list
//! on standard input, the time budget as trailing `--budget <seconds>`
//! arguments, and every improvement must be announced on standard output
//! as `IMPROVED <elapsed_seconds> <cut_value> [<bitstring>]`. At the
//! budget the adapter sends a termination signal and force-kills after a
//! short grace period. Malformed output never panics the harness: the
//! profile comes back flagged invalid with the evidence attached.

use std::io::{BufRead, BufReader, Write};
use std::process::{Child, Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::graph::RegularGraph;
use crate::solvers::{cut_value, instance_label, PerformanceProfile, ProfilePoint};

/// Wait this long between the termination signal and force-kill.
pub const KILL_GRACE: Duration = Duration::from_secs(2);

/// Spawn `command` (argv vector; `{seed}` in any element is replaced by
/// the seed), feed it the instance, and collect its improvement stream.
/// Hard errors are reserved for a command that cannot run at all; a solver
/// that runs but misbehaves yields an invalid profile instead.
pub fn run_external(
    command: &[String],
    g: &RegularGraph,
    budget_seconds: f64,
    seed: u64,
) -> Result<PerformanceProfile> {
    if command.is_empty() {
        return Err(Error::InvalidArgument("external command is empty".into()));
    }
    if !(budget_seconds > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "budget must be positive, got {budget_seconds}"
        )));
    }
    let seed_str = seed.to_string();
    let mut argv: Vec<String> = command
        .iter()
        .map(|a| a.replace("{seed}", &seed_str))
        .collect();
    argv.push("--budget".into());
    argv.push(format!("{budget_seconds}"));

    let mut child = Command::new(&argv[0])
        .args(&argv[1..])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()?;

    {
        // A solver may exit without draining stdin; the broken pipe is its
        // concern, not a harness failure.
        let mut stdin = child.stdin.take().expect("stdin was piped");
        let _ = stdin.write_all(g.to_edge_list().as_bytes());
    }
    let stdout = child.stdout.take().expect("stdout was piped");
    let reader = thread::spawn(move || -> Vec<std::io::Result<String>> {
        BufReader::new(stdout).lines().collect()
    });

    let killed_at_budget = enforce_budget(&mut child, budget_seconds)?;
    let status = child.wait()?;
    let lines = reader.join().expect("reader thread never panics");

    let mut diagnostics = Vec::new();
    let mut trace = Vec::new();
    for (i, line) in lines.into_iter().enumerate() {
        let lineno = i + 1;
        match line {
            Err(e) => diagnostics.push(format!("line {lineno}: unreadable ({e})")),
            Ok(text) => match parse_improvement(&text, g) {
                Ok(Some(point)) => trace.push(point),
                Ok(None) => {}
                Err(msg) => diagnostics.push(format!("line {lineno}: {msg}")),
            },
        }
    }
    if !killed_at_budget && !status.success() {
        diagnostics.push(format!("solver exited with {status}"));
    }
    Ok(PerformanceProfile::flagged(
        instance_label(g),
        seed,
        g.num_edges(),
        trace,
        diagnostics,
    ))
}

/// One protocol line; empty lines are permitted noise, anything else must
/// be a well-formed IMPROVED event consistent with the instance.
fn parse_improvement(
    text: &str,
    g: &RegularGraph,
) -> std::result::Result<Option<ProfilePoint>, String> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(None);
    }
    let mut tokens = text.split_whitespace();
    if tokens.next() != Some("IMPROVED") {
        return Err(format!("unrecognised event {text:?}"));
    }
    let seconds: f64 = tokens
        .next()
        .ok_or("missing elapsed seconds")?
        .parse()
        .map_err(|e| format!("bad elapsed seconds: {e}"))?;
    if !seconds.is_finite() || seconds < 0.0 {
        return Err(format!("bad elapsed seconds: {seconds}"));
    }
    let cut: u64 = tokens
        .next()
        .ok_or("missing cut value")?
        .parse()
        .map_err(|e| format!("bad cut value: {e}"))?;
    if cut > g.num_edges() as u64 {
        return Err(format!(
            "cut {cut} exceeds the edge count {}",
            g.num_edges()
        ));
    }
    if let Some(bits) = tokens.next() {
        let side = parse_bitstring(bits, g.n())?;
        let recomputed = cut_value(g, &side);
        if recomputed != cut {
            return Err(format!(
                "reported cut {cut} but the bitstring cuts {recomputed}"
            ));
        }
    }
    if let Some(extra) = tokens.next() {
        return Err(format!("trailing token {extra:?}"));
    }
    Ok(Some(ProfilePoint { seconds, cut }))
}

fn parse_bitstring(bits: &str, n: u32) -> std::result::Result<Vec<bool>, String> {
    if bits.len() != n as usize {
        return Err(format!("bitstring has {} chars, expected {n}", bits.len()));
    }
    bits.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(format!("bad bitstring char {other:?}")),
        })
        .collect()
}

/// Poll until exit or budget; past the budget, signal and then force-kill
/// after the grace period. Returns whether the adapter had to intervene.
fn enforce_budget(child: &mut Child, budget_seconds: f64) -> Result<bool> {
    let start = Instant::now();
    let budget = Duration::from_secs_f64(budget_seconds);
    while start.elapsed() < budget {
        if child.try_wait()?.is_some() {
            return Ok(false);
        }
        thread::sleep(Duration::from_millis(2));
    }
    if child.try_wait()?.is_some() {
        return Ok(false);
    }
    terminate(child);
    let grace_start = Instant::now();
    while grace_start.elapsed() < KILL_GRACE {
        if child.try_wait()?.is_some() {
            return Ok(true);
        }
        thread::sleep(Duration::from_millis(5));
    }
    let _ = child.kill();
    Ok(true)
}

#[cfg(unix)]
fn terminate(child: &mut Child) {
    // SIGTERM first so a cooperative solver can flush and exit.
    unsafe {
        libc::kill(child.id() as libc::pid_t, libc::SIGTERM);
    }
}

#[cfg(not(unix))]
fn terminate(child: &mut Child) {
    let _ = child.kill();
}
