use cutbench_core::{qaoa, Result};
use serde_json::json;

use crate::context::RunContext;

#[derive(clap::Args)]
pub struct Args {
    /// Circuit depth.
    #[arg(long)]
    p: u32,

    /// Degree of the target ensemble.
    #[arg(long, default_value_t = 3)]
    d: u32,

    /// Random optimizer starts beyond the informed one.
    #[arg(long, default_value_t = 8)]
    restarts: u32,
}

pub fn run(ctx: &RunContext, args: &Args) -> Result<()> {
    let derived = qaoa::derive_fixed_angles(args.d, args.p, args.restarts, ctx.seed, &ctx.cfg)?;
    let name = format!("angles-p{}.json", args.p);
    ctx.write(&name, &(derived.angles.to_json() + "\n"))?;
    ctx.manifest(
        "angles",
        json!({ "p": args.p, "d": args.d, "restarts": args.restarts }),
        &[name],
    )?;
    println!(
        "p={} d={}: tree value {:.6} ({} evaluations, {} restarts)",
        args.p, args.d, derived.tree_value, derived.evaluations, derived.restarts
    );
    Ok(())
}
