use std::fs;
use std::path::PathBuf;

use cutbench_core::qaoa::{graph_expectation, ExpectationTable, FixedAngleSet};
use cutbench_core::{graph, statevector, Error, RegularGraph, Result};
use serde_json::json;

use crate::commands::stem;
use crate::context::RunContext;
use crate::schema::{self, CsvDoc};

#[derive(clap::Args)]
pub struct Args {
    /// Edge-list files to evaluate.
    #[arg(required = true)]
    graphs: Vec<PathBuf>,

    /// Angle JSON from the angles subcommand.
    #[arg(long)]
    angles: PathBuf,

    /// Expected depth; the run refuses an angle file that disagrees.
    #[arg(long)]
    p: Option<u32>,

    /// Cross-check every graph against dense simulation (small n only).
    #[arg(long)]
    check_oracle: bool,
}

pub fn run(ctx: &RunContext, args: &Args) -> Result<()> {
    let set = FixedAngleSet::from_json(&fs::read_to_string(&args.angles)?)?;
    if let Some(p) = args.p {
        if p != set.p {
            return Err(Error::InvalidArgument(format!(
                "--p {} but the angle file is depth {}",
                p, set.p
            )));
        }
    }
    let angles = set.angles()?;
    let table = ExpectationTable::new(&angles);

    let mut doc = CsvDoc::new(schema::EVALUATE);
    for path in &args.graphs {
        let g = RegularGraph::read_file(path)?;
        let tally = graph::tally_subgraphs(&g, set.p, ctx.cfg.canon_cap)?;
        let value = graph_expectation(&g, &angles, &table, true, &ctx.cfg)?;
        let dominant_share = tally
            .dominant()
            .map(|c| c.multiplicity as f64 / tally.num_edges() as f64)
            .unwrap_or(0.0);
        let (oracle, abs_err) = if args.check_oracle {
            let exact = statevector::exact_expectation(&g, &angles, &ctx.cfg)?;
            (
                exact.to_string(),
                (value.expectation - exact).abs().to_string(),
            )
        } else {
            (String::new(), String::new())
        };
        doc.row([
            stem(path),
            g.n().to_string(),
            g.num_edges().to_string(),
            set.p.to_string(),
            value.expectation.to_string(),
            value.cut_fraction.to_string(),
            tally.classes.len().to_string(),
            dominant_share.to_string(),
            oracle,
            abs_err,
        ]);
    }
    ctx.write("evaluate.csv", &doc.finish())?;
    ctx.write("table.csv", &table.to_csv())?;
    ctx.manifest(
        "evaluate",
        json!({
            "graphs": args.graphs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
            "angles": args.angles.display().to_string(),
            "p": set.p,
            "check_oracle": args.check_oracle,
        }),
        &["evaluate.csv".into(), "table.csv".into()],
    )?;
    println!(
        "{} graph(s) at p={}, {} class expectation(s) cached",
        args.graphs.len(),
        set.p,
        table.len()
    );
    Ok(())
}
