use std::path::PathBuf;

use cutbench_core::qaoa::FixedAngleSet;
use cutbench_core::{statevector, Error, RegularGraph, Result};
use serde_json::json;

use crate::commands::bits_to_string;
use crate::context::RunContext;
use crate::schema::{self, CsvDoc};

#[derive(clap::Args)]
pub struct Args {
    /// Edge-list file to simulate.
    #[arg(long)]
    graph: PathBuf,

    /// Angle JSON for the circuit.
    #[arg(long)]
    angles: PathBuf,

    /// Measurement groups scored separately.
    #[arg(long, default_value_t = 1)]
    trials: usize,

    /// Shots per trial.
    #[arg(long, default_value_t = 1)]
    shots: usize,
}

pub fn run(ctx: &RunContext, args: &Args) -> Result<()> {
    if args.trials == 0 || args.shots == 0 {
        return Err(Error::InvalidArgument(
            "trials and shots must both be positive".into(),
        ));
    }
    let g = RegularGraph::read_file(&args.graph)?;
    let set = FixedAngleSet::from_json(&std::fs::read_to_string(&args.angles)?)?;
    let state = statevector::simulate_state(&g, &set.angles()?, &ctx.cfg)?;
    let draws = statevector::sample_bitstrings(&state, args.trials * args.shots, ctx.seed);

    let mut text = String::with_capacity(draws.len() * (g.n() as usize + 1));
    for &z in &draws {
        text.push_str(&bits_to_string(z, g.n()));
        text.push('\n');
    }

    let m = g.num_edges() as f64;
    let mut doc = CsvDoc::new(schema::TRIALS);
    let mut fractions = Vec::with_capacity(args.trials);
    for (t, chunk) in draws.chunks(args.shots).enumerate() {
        let best = chunk
            .iter()
            .map(|&z| statevector::cost_of(&g, z) as u64)
            .max()
            .expect("chunks of a positive size");
        fractions.push(best as f64 / m);
        doc.row([
            t.to_string(),
            args.shots.to_string(),
            best.to_string(),
            (best as f64 / m).to_string(),
        ]);
    }

    ctx.write("bitstrings.txt", &text)?;
    ctx.write("trials.csv", &doc.finish())?;
    ctx.manifest(
        "sample",
        json!({
            "graph": args.graph.display().to_string(),
            "angles": args.angles.display().to_string(),
            "trials": args.trials,
            "shots": args.shots,
        }),
        &["bitstrings.txt".into(), "trials.csv".into()],
    )?;
    let mean = fractions.iter().sum::<f64>() / fractions.len() as f64;
    println!(
        "{} trial(s) of {} shot(s): mean best fraction {:.4}",
        args.trials, args.shots, mean
    );
    Ok(())
}
