use std::path::PathBuf;

use cutbench_core::Result;

use crate::schema::{validate, Kind};

#[derive(clap::Args)]
pub struct Args {
    /// Files to validate.
    #[arg(required = true)]
    files: Vec<PathBuf>,

    /// Check against this kind instead of inferring one per file.
    #[arg(long, value_enum)]
    kind: Option<Kind>,
}

pub fn run(args: &Args) -> Result<()> {
    let mut first_err = None;
    for path in &args.files {
        match validate(path, args.kind) {
            Ok((kind, records)) => {
                println!("{}: {} ok, {} record(s)", path.display(), kind.name(), records);
            }
            Err(e) => {
                eprintln!("{}: invalid: {e}", path.display());
                first_err.get_or_insert(e);
            }
        }
    }
    match first_err {
        Some(e) => Err(e),
        None => Ok(()),
    }
}
