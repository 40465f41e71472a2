use cutbench_core::{graph, Result};
use serde_json::json;

use crate::context::RunContext;

#[derive(clap::Args)]
pub struct Args {
    /// Vertices per graph.
    #[arg(long)]
    n: u32,

    /// Degree of every vertex; n*d must be even.
    #[arg(long, default_value_t = 3)]
    d: u32,

    /// Number of instances to draw.
    #[arg(long, default_value_t = 1)]
    count: usize,
}

pub fn run(ctx: &RunContext, args: &Args) -> Result<()> {
    let graphs = graph::generate_ensemble(args.n, args.d, args.count, ctx.seed)?;
    let mut outputs = Vec::with_capacity(graphs.len());
    for (i, g) in graphs.iter().enumerate() {
        let name = format!("graph-{i:03}.txt");
        g.write_file(&ctx.path(&name))?;
        outputs.push(name);
    }
    ctx.manifest(
        "generate",
        json!({ "n": args.n, "d": args.d, "count": args.count }),
        &outputs,
    )?;
    println!(
        "{} graph(s), n={} d={}, under {}",
        args.count,
        args.n,
        args.d,
        ctx.out.display()
    );
    Ok(())
}
