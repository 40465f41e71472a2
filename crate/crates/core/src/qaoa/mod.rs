//! Whole-graph QAOA expectations assembled from per-class subgraph values,
//! plus the fixed-angle machinery that makes depth-p evaluation a pure
//! lookup: angles are derived once on the regular tree and reused across
//! every instance of the ensemble.

mod angles;
mod evaluate;

pub use angles::{derive_fixed_angles, AngleDerivation};
pub use evaluate::{
    angles_digest, ensemble_median, estimate_gamma, graph_expectation, graph_gamma, key_hex,
    reference_classes, subgraph_table, ExpectationTable, GammaEstimate, GammaReport, GammaRoute,
    GraphValue, SizeStats, TableBuild, TableEntry,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::QaoaAngles;

/// A reusable angle schedule. The serialised form is the interchange
/// format: depth, the two angle arrays, and a free-text provenance note.
/// Derived sets also carry the tree value they achieved, so a reader can
/// recheck the file against a fresh contraction.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixedAngleSet {
    pub p: u32,
    pub gammas: Vec<f64>,
    pub betas: Vec<f64>,
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tree_value: Option<f64>,
}

impl FixedAngleSet {
    pub fn angles(&self) -> Result<QaoaAngles> {
        if self.gammas.len() != self.p as usize || self.betas.len() != self.p as usize {
            return Err(Error::InvalidArgument(format!(
                "angle arrays must have length p = {}",
                self.p
            )));
        }
        QaoaAngles::new(self.gammas.clone(), self.betas.clone())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("angle sets are plain data")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let set: FixedAngleSet =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("angle file: {}", e)))?;
        set.angles()?; // validate shape and finiteness
        Ok(set)
    }
}
