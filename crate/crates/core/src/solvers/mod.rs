//! Classical MaxCut baselines and their anytime performance profiles.
//!
//! Everything here reports progress the same way: a trace of (wall-clock
//! seconds, incumbent cut) pairs. The leftmost trace point defines the
//! zero-time quality of a solver, the quantity a sampling-based rival has
//! to beat before its shot rate matters.

mod exact;
mod external;
mod flip;

pub use exact::{exact_maxcut, exact_maxcut_capped, ExactCut, EXACT_DEFAULT_CAP, EXACT_MAX_CAP};
pub use external::{run_external, KILL_GRACE};
pub use flip::{cut_value, flip_multistart, flip_solve, FlipResult};

use crate::error::{Error, Result};
use crate::graph::RegularGraph;

/// One recorded improvement: seconds since solver start on a monotonic
/// clock, and the incumbent cut at that moment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfilePoint {
    pub seconds: f64,
    pub cut: u64,
}

/// Anytime trace of one solver run on one instance.
///
/// A profile from a well-behaved run has `valid = true` and an empty
/// `diagnostics`; adapters over external processes downgrade to
/// `valid = false` instead of erroring so a broken solver still leaves an
/// inspectable record.
#[derive(Debug, Clone)]
pub struct PerformanceProfile {
    pub instance: String,
    pub seed: u64,
    pub num_edges: usize,
    pub trace: Vec<ProfilePoint>,
    pub valid: bool,
    pub diagnostics: Vec<String>,
}

impl PerformanceProfile {
    /// Strict constructor for in-process solvers; trace violations are
    /// internal bugs, not data.
    pub fn new(
        instance: String,
        seed: u64,
        num_edges: usize,
        trace: Vec<ProfilePoint>,
    ) -> Result<Self> {
        let p = Self::flagged(instance, seed, num_edges, trace, Vec::new());
        if !p.valid {
            return Err(Error::InvalidArgument(p.diagnostics.join("; ")));
        }
        Ok(p)
    }

    /// Lenient constructor: monotonicity violations and caller-supplied
    /// diagnostics mark the profile invalid instead of failing.
    pub(crate) fn flagged(
        instance: String,
        seed: u64,
        num_edges: usize,
        trace: Vec<ProfilePoint>,
        mut diagnostics: Vec<String>,
    ) -> Self {
        diagnostics.extend(trace_violations(&trace));
        if trace.is_empty() {
            diagnostics.push("no solutions recorded".into());
        }
        let valid = diagnostics.is_empty();
        PerformanceProfile {
            instance,
            seed,
            num_edges,
            trace,
            valid,
            diagnostics,
        }
    }

    /// Time of the first recorded solution; None when nothing was reported.
    pub fn t0(&self) -> Option<f64> {
        self.trace.first().map(|p| p.seconds)
    }

    /// Cut fraction of the first recorded solution.
    pub fn zero_time_quality(&self) -> Option<f64> {
        self.trace
            .first()
            .map(|p| p.cut as f64 / self.num_edges as f64)
    }

    pub fn best_cut(&self) -> Option<u64> {
        self.trace.last().map(|p| p.cut)
    }
}

fn trace_violations(trace: &[ProfilePoint]) -> Vec<String> {
    let mut out = Vec::new();
    for p in trace {
        if !p.seconds.is_finite() || p.seconds < 0.0 {
            out.push(format!("bad timestamp {}", p.seconds));
        }
    }
    for w in trace.windows(2) {
        if w[1].seconds <= w[0].seconds {
            out.push(format!(
                "timestamps not strictly increasing: {} then {}",
                w[0].seconds, w[1].seconds
            ));
        }
        if w[1].cut < w[0].cut {
            out.push(format!("cut regressed from {} to {}", w[0].cut, w[1].cut));
        }
    }
    out
}

/// Label tying a profile back to its instance without storing the graph.
pub(crate) fn instance_label(g: &RegularGraph) -> String {
    format!("n{}d{}-{:016x}", g.n(), g.degree(), g.digest())
}
