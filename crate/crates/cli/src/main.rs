use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cutbench_core::Error;

mod commands;
mod context;
mod schema;

use context::RunContext;

#[derive(Parser)]
#[command(name = "cutbench", version, about = "MaxCut benchmarking toolkit", max_term_width = 100)]
struct Cli {
    /// Root seed; every random choice of a run derives from it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Directory for outputs and the run manifest.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// Worker threads for ensemble work; defaults to all logical cores.
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Largest single tensor allocation, in MiB.
    #[arg(long, global = true, value_name = "MIB")]
    mem_budget: Option<u64>,

    /// Refuse contractions whose intermediate rank exceeds this.
    #[arg(long, global = true)]
    width_cap: Option<u32>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write random d-regular graphs as edge-list files
    Generate(commands::generate::Args),
    /// Derive fixed angles on the depth-p tree and save them as JSON
    Angles(commands::angles::Args),
    /// Expected cut of each graph by neighbourhood decomposition
    Evaluate(commands::evaluate::Args),
    /// Run an anytime solver per graph and record improvement traces
    Profile(commands::profile::Args),
    /// Price solver profiles against the multishot sampling model
    Threshold(commands::threshold::Args),
    /// Ensemble cut-fraction bounds over a range of sizes
    Bounds(commands::bounds::Args),
    /// Measure the circuit; export bitstrings and per-trial bests
    Sample(commands::sample::Args),
    /// Validate files produced by the other subcommands
    CheckSchema(commands::check_schema::Args),
    /// Internal adapter speaking the external-solver protocol on stdio
    #[command(hide = true)]
    FlipStream(commands::flip_stream::Args),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        // Fails only if a pool exists already, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global();
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// 2 usage and everything else, 3 capacity refusals, 4 protocol
/// violations by an external solver. Success is 0 and clap itself exits
/// with 2 on malformed invocations, so the codes line up end to end.
fn exit_code(e: &Error) -> u8 {
    if e.is_capacity() {
        3
    } else if matches!(e, Error::ExternalProtocol(_)) {
        4
    } else {
        2
    }
}

fn run(cli: Cli) -> cutbench_core::Result<()> {
    let ctx = RunContext::new(&cli)?;
    match &cli.command {
        Command::Generate(args) => commands::generate::run(&ctx, args),
        Command::Angles(args) => commands::angles::run(&ctx, args),
        Command::Evaluate(args) => commands::evaluate::run(&ctx, args),
        Command::Profile(args) => commands::profile::run(&ctx, args),
        Command::Threshold(args) => commands::threshold::run(&ctx, args),
        Command::Bounds(args) => commands::bounds::run(&ctx, args),
        Command::Sample(args) => commands::sample::run(&ctx, args),
        Command::CheckSchema(args) => commands::check_schema::run(args),
        Command::FlipStream(args) => commands::flip_stream::run(ctx.seed, args),
    }
}
