use std::fs;
use std::path::PathBuf;

use cutbench_core::advantage::whp_bounds;
use cutbench_core::qaoa::{reference_classes, subgraph_table, ExpectationTable, FixedAngleSet};
use cutbench_core::{Error, Result};
use serde_json::json;

use crate::context::RunContext;
use crate::schema::{self, CsvDoc};

#[derive(clap::Args)]
pub struct Args {
    /// Angle JSON; fixes the depth and vouches for the table.
    #[arg(long)]
    angles: PathBuf,

    /// Class-expectation CSV to read. Omit to contract the reference
    /// classes (tree plus short cycles) on the spot.
    #[arg(long)]
    table: Option<PathBuf>,

    /// Ensemble degree.
    #[arg(long, default_value_t = 3)]
    d: u32,

    /// Smallest vertex count of the sweep.
    #[arg(long)]
    n_min: u64,

    /// Largest vertex count of the sweep.
    #[arg(long)]
    n_max: u64,

    /// Grid points, log-spaced, both endpoints included.
    #[arg(long, default_value_t = 20)]
    points: usize,
}

fn log_grid(lo: u64, hi: u64, points: usize) -> Result<Vec<u64>> {
    if lo < 2 || hi < lo {
        return Err(Error::InvalidArgument(format!(
            "need 2 <= n_min <= n_max, got {lo}..{hi}"
        )));
    }
    if points == 0 {
        return Err(Error::InvalidArgument("need at least one grid point".into()));
    }
    let (a, b) = ((lo as f64).ln(), (hi as f64).ln());
    let mut grid: Vec<u64> = (0..points)
        .map(|i| {
            let t = if points == 1 { 0.0 } else { i as f64 / (points - 1) as f64 };
            (a + t * (b - a)).exp().round() as u64
        })
        .map(|n| n.clamp(lo, hi))
        .collect();
    grid.dedup();
    Ok(grid)
}

pub fn run(ctx: &RunContext, args: &Args) -> Result<()> {
    let set = FixedAngleSet::from_json(&fs::read_to_string(&args.angles)?)?;
    let angles = set.angles()?;
    let table = match &args.table {
        Some(path) => ExpectationTable::from_csv(&fs::read_to_string(path)?, &angles)?,
        None => {
            let classes = reference_classes(args.d, set.p);
            let build = subgraph_table(&classes, &angles, &ctx.cfg);
            for (i, e) in &build.failures {
                eprintln!("warning: reference class {i} not contracted: {e}");
            }
            build.table
        }
    };

    let mut doc = CsvDoc::new(schema::BOUNDS);
    let mut warned = false;
    let mut last = None;
    for n in log_grid(args.n_min, args.n_max, args.points)? {
        let b = whp_bounds(n, args.d, set.p, &table, &ctx.cfg)?;
        if !b.missing_cycle_lengths.is_empty() && !warned {
            eprintln!(
                "warning: no table rows for cycle length(s) {:?}; bounds stay valid but loosen",
                b.missing_cycle_lengths
            );
            warned = true;
        }
        doc.row([
            n.to_string(),
            args.d.to_string(),
            set.p.to_string(),
            b.m_tree_lower.to_string(),
            b.cut_lower.to_string(),
            b.cut_upper.to_string(),
            b.degenerate.to_string(),
        ]);
        last = Some(b);
    }
    ctx.write("bounds.csv", &doc.finish())?;
    ctx.manifest(
        "bounds",
        json!({
            "angles": args.angles.display().to_string(),
            "table": args.table.as_ref().map(|p| p.display().to_string()),
            "d": args.d,
            "n_min": args.n_min,
            "n_max": args.n_max,
            "points": args.points,
        }),
        &["bounds.csv".into()],
    )?;
    if let Some(b) = last {
        println!(
            "n={}: cut fraction in [{:.6}, {:.6}]",
            b.n, b.cut_lower, b.cut_upper
        );
    }
    Ok(())
}
