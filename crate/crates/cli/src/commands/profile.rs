use std::path::PathBuf;

use cutbench_core::solvers::{flip_multistart, run_external};
use cutbench_core::{rng, Error, RegularGraph, Result};
use serde_json::json;

use crate::commands::stem;
use crate::context::RunContext;
use crate::schema::{self, CsvDoc};

#[derive(clap::Args)]
pub struct Args {
    /// Edge-list files to solve.
    #[arg(required = true)]
    graphs: Vec<PathBuf>,

    /// Wall-clock budget per instance, seconds.
    #[arg(long)]
    budget: f64,

    /// External solver command line; whitespace-split, `{seed}` replaced
    /// per instance, `--budget <seconds>` appended. Omit for the built-in
    /// local search.
    #[arg(long)]
    solver_cmd: Option<String>,
}

pub fn run(ctx: &RunContext, args: &Args) -> Result<()> {
    let command: Option<Vec<String>> = args
        .solver_cmd
        .as_ref()
        .map(|c| c.split_whitespace().map(String::from).collect());

    let mut trace_doc = CsvDoc::new(schema::PROFILE);
    let mut zero_doc = CsvDoc::new(schema::ZERO_TIME);
    let mut violations = Vec::new();
    let mut qualities = Vec::new();

    for (i, path) in args.graphs.iter().enumerate() {
        let g = RegularGraph::read_file(path)?;
        let seed = rng::child_seed(ctx.seed, "profile", i as u64);
        let profile = match &command {
            Some(cmd) => run_external(cmd, &g, args.budget, seed)?,
            None => flip_multistart(&g, args.budget, seed)?,
        };
        let name = stem(path);
        for pt in &profile.trace {
            trace_doc.row([
                name.clone(),
                g.n().to_string(),
                g.num_edges().to_string(),
                seed.to_string(),
                pt.seconds.to_string(),
                pt.cut.to_string(),
            ]);
        }
        zero_doc.row([
            name.clone(),
            g.n().to_string(),
            g.num_edges().to_string(),
            profile.t0().map(|t| t.to_string()).unwrap_or_default(),
            profile
                .zero_time_quality()
                .map(|q| q.to_string())
                .unwrap_or_default(),
            profile
                .best_cut()
                .map(|c| c.to_string())
                .unwrap_or_default(),
        ]);
        if let Some(q) = profile.zero_time_quality() {
            qualities.push(q);
        }
        if !profile.valid {
            violations.push(format!("{name}: {}", profile.diagnostics.join("; ")));
        }
    }

    ctx.write("profile.csv", &trace_doc.finish())?;
    ctx.write("zero_time.csv", &zero_doc.finish())?;
    ctx.manifest(
        "profile",
        json!({
            "graphs": args.graphs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
            "budget_seconds": args.budget,
            "solver_cmd": args.solver_cmd,
        }),
        &["profile.csv".into(), "zero_time.csv".into()],
    )?;

    // The flagged traces are on disk for inspection either way; a protocol
    // violation still fails the run so scripts notice.
    if !violations.is_empty() {
        return Err(Error::ExternalProtocol(violations.join("\n")));
    }
    if qualities.is_empty() {
        println!("{} instance(s), no improvements recorded", args.graphs.len());
    } else {
        let mean = qualities.iter().sum::<f64>() / qualities.len() as f64;
        println!(
            "{} instance(s), mean zero-time quality {:.4}",
            args.graphs.len(),
            mean
        );
    }
    Ok(())
}
