use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use cutbench_core::advantage::{advantage_curve, SampleExponent};
use cutbench_core::qaoa::FixedAngleSet;
use cutbench_core::solvers::ProfilePoint;
use cutbench_core::{CostDistributionModel, Error, PerformanceProfile, Result};
use serde_json::json;

use crate::context::RunContext;
use crate::schema::{self, read_rows, CsvDoc};

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ExponentArg {
    /// Exact inversion of the gain formula.
    Derived,
    /// Doubled-exponent compatibility mode.
    Doubled,
}

#[derive(clap::Args)]
pub struct Args {
    /// profile.csv files from the profile subcommand.
    #[arg(required = true)]
    profiles: Vec<PathBuf>,

    /// Concentration constant of the quantum cut-fraction model.
    #[arg(long)]
    gamma: f64,

    /// Quantum mean cut fraction, given directly.
    #[arg(long, conflicts_with = "angles", required_unless_present = "angles")]
    mu: Option<f64>,

    /// Angle JSON whose tree value supplies the quantum mean.
    #[arg(long)]
    angles: Option<PathBuf>,

    /// Depth tag for the output rows; required with --mu.
    #[arg(long, required_unless_present = "angles", conflicts_with = "angles")]
    p: Option<u32>,

    /// Hypothetical sampler seconds per shot, for quadrant labels.
    #[arg(long, default_value_t = 2e-4)]
    shot_seconds: f64,

    /// Which exponent the sample-count inversion uses.
    #[arg(long, value_enum, default_value_t = ExponentArg::Derived)]
    exponent: ExponentArg,
}

/// Profiles re-read from disk, keyed by instance size.
fn load_profiles(paths: &[PathBuf]) -> Result<BTreeMap<u64, Vec<PerformanceProfile>>> {
    // Instance name -> (n, m, seed, trace); rows arrive in trace order.
    let mut grouped: Vec<(String, u64, usize, u64, Vec<ProfilePoint>)> = Vec::new();
    for path in paths {
        for row in read_rows(path, schema::PROFILE)? {
            let bad = |what: &str| {
                Error::Parse(format!("{}: {what} in row {:?}", path.display(), row))
            };
            let n: u64 = row[1].parse().map_err(|_| bad("vertex count"))?;
            let m: usize = row[2].parse().map_err(|_| bad("edge count"))?;
            let seed: u64 = row[3].parse().map_err(|_| bad("seed"))?;
            let point = ProfilePoint {
                seconds: row[4].parse().map_err(|_| bad("timestamp"))?,
                cut: row[5].parse().map_err(|_| bad("cut"))?,
            };
            match grouped.iter_mut().find(|(name, ..)| *name == row[0]) {
                Some((_, gn, gm, gs, trace)) => {
                    if *gn != n || *gm != m || *gs != seed {
                        return Err(bad("instance metadata changed mid-file"));
                    }
                    trace.push(point);
                }
                None => grouped.push((row[0].clone(), n, m, seed, vec![point])),
            }
        }
    }
    let mut by_n: BTreeMap<u64, Vec<PerformanceProfile>> = BTreeMap::new();
    for (name, n, m, seed, trace) in grouped {
        by_n
            .entry(n)
            .or_default()
            .push(PerformanceProfile::new(name, seed, m, trace)?);
    }
    if by_n.is_empty() {
        return Err(Error::InvalidArgument("profile files contain no rows".into()));
    }
    Ok(by_n)
}

pub fn run(ctx: &RunContext, args: &Args) -> Result<()> {
    let (mu, p) = match (&args.angles, args.mu) {
        (Some(path), None) => {
            let set = FixedAngleSet::from_json(&fs::read_to_string(path)?)?;
            let mu = set.tree_value.ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "{} carries no tree value; pass --mu instead",
                    path.display()
                ))
            })?;
            (mu, set.p)
        }
        (None, Some(mu)) => (mu, args.p.expect("clap requires --p with --mu")),
        _ => unreachable!("clap enforces exactly one of --mu/--angles"),
    };
    let mode = match args.exponent {
        ExponentArg::Derived => SampleExponent::Derived,
        ExponentArg::Doubled => SampleExponent::Doubled,
    };

    let by_n = load_profiles(&args.profiles)?;
    let mut doc = CsvDoc::new(schema::THRESHOLD);
    let mut summary = Vec::new();
    for (&n, profiles) in &by_n {
        let model = CostDistributionModel::new(mu, args.gamma, n)?;
        let curve = advantage_curve(profiles, &model, p, args.shot_seconds, mode)?;
        for q in &curve.points {
            doc.row([
                n.to_string(),
                p.to_string(),
                q.t_seconds.to_string(),
                q.delta.to_string(),
                q.k.to_string(),
                q.nu_hz.to_string(),
                q.region.to_string(),
            ]);
        }
        summary.push(format!(
            "n={}: min {:.4} Hz at t={:.4} s over {} point(s)",
            n,
            curve.min_nu_hz,
            curve.argmin_t_seconds,
            curve.points.len()
        ));
    }
    ctx.write("threshold.csv", &doc.finish())?;
    ctx.manifest(
        "threshold",
        json!({
            "profiles": args.profiles.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
            "gamma": args.gamma,
            "mu": mu,
            "p": p,
            "shot_seconds": args.shot_seconds,
            "exponent": match args.exponent {
                ExponentArg::Derived => "derived",
                ExponentArg::Doubled => "doubled",
            },
        }),
        &["threshold.csv".into()],
    )?;
    for line in summary {
        println!("{line}");
    }
    Ok(())
}
