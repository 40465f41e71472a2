use std::io::{Read, Write};
use std::time::Instant;

use cutbench_core::solvers::flip_solve;
use cutbench_core::{rng, RegularGraph, Result};

use crate::commands::side_to_string;

/// Adapter that makes the built-in local search look like an external
/// solver: edge list on stdin, `IMPROVED <seconds> <cut> <bitstring>`
/// lines on stdout. Restart seeds match the in-process multistart, so a
/// run through this adapter reports the same cut sequence.
#[derive(clap::Args)]
pub struct Args {
    /// Seconds to keep restarting before exiting voluntarily.
    #[arg(long)]
    budget: f64,
}

pub fn run(seed: u64, args: &Args) -> Result<()> {
    let mut text = String::new();
    std::io::stdin().read_to_string(&mut text)?;
    let g = RegularGraph::parse_edge_list(&text)?;

    let start = Instant::now();
    let stdout = std::io::stdout();
    let mut best = 0u64;
    let mut i = 0u64;
    // Always report at least one solution, even on a nonpositive budget.
    loop {
        let result = flip_solve(&g, rng::child_seed(seed, "restart", i));
        if result.cut > best || i == 0 {
            best = result.cut;
            let mut out = stdout.lock();
            writeln!(
                out,
                "IMPROVED {} {} {}",
                start.elapsed().as_secs_f64(),
                result.cut,
                side_to_string(&result.assignment)
            )?;
            out.flush()?;
        }
        i += 1;
        if start.elapsed().as_secs_f64() >= args.budget {
            break;
        }
    }
    Ok(())
}
