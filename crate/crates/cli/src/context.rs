use std::fs;
use std::path::PathBuf;

use cutbench_core::{EngineConfig, Result};
use serde_json::json;

use crate::Cli;

/// Global flags resolved once: seed, output directory (created on entry),
/// and the engine limits every command passes down.
pub struct RunContext {
    pub seed: u64,
    pub out: PathBuf,
    pub cfg: EngineConfig,
}

impl RunContext {
    pub fn new(cli: &Cli) -> Result<Self> {
        fs::create_dir_all(&cli.out)?;
        let mut cfg = EngineConfig::default();
        if let Some(mib) = cli.mem_budget {
            cfg = cfg.with_mem_budget(mib << 20);
        }
        if let Some(cap) = cli.width_cap {
            cfg = cfg.with_width_cap(cap);
        }
        cfg.workers = cli.workers.unwrap_or(0);
        Ok(RunContext {
            seed: cli.seed,
            out: cli.out.clone(),
            cfg,
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    pub fn write(&self, name: &str, text: &str) -> Result<()> {
        fs::write(self.path(name), text)?;
        Ok(())
    }

    /// Record everything needed to rerun the command byte-for-byte:
    /// the parameters, the engine limits, the seed, and what was written.
    /// Deliberately no timestamps, so a rerun reproduces the manifest too.
    pub fn manifest(
        &self,
        command: &str,
        parameters: serde_json::Value,
        outputs: &[String],
    ) -> Result<()> {
        let doc = json!({
            "command": command,
            "version": env!("CARGO_PKG_VERSION"),
            "schema_version": 1,
            "seed": self.seed,
            "engine": {
                "width_cap": self.cfg.width_cap,
                "mem_budget": self.cfg.mem_budget,
                "statevector_cap": self.cfg.statevector_cap,
                "canon_cap": self.cfg.canon_cap,
                "workers": self.cfg.workers,
            },
            "parameters": parameters,
            "outputs": outputs,
        });
        self.write(&format!("manifest-{command}.json"), &format!("{doc:#}\n"))
    }
}
