//! Tensor-network evaluation of QAOA observables on anchored subgraphs.
//!
//! The expectation of a diagonal observable factors into a closed network:
//! ket circuit, observable, conjugated bra circuit. Diagonal gates reuse
//! wire variables and single-qubit mixers introduce fresh ones, so a qubit
//! at distance d from the observable support carries 2(p-d)+1 binary
//! variables after lightcone cancellation. Contraction is bucket
//! elimination along a greedy fill-in order; cost is exponential only in
//! the order's width, never in the host graph size.

mod build;
mod contract;
mod evaluate;
mod order;

pub use build::{build_expectation_network, build_z_network};
pub use contract::contract;
pub use evaluate::{
    cost_second_moment, edge_expectation, edge_values, zz_correlation, CostMoments,
    SubgraphEvaluator,
};
pub use order::contraction_order;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Angle schedule for a depth-p circuit: one cost angle and one mixer angle
/// per layer, applied in layer order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaoaAngles {
    pub gammas: Vec<f64>,
    pub betas: Vec<f64>,
}

impl QaoaAngles {
    pub fn new(gammas: Vec<f64>, betas: Vec<f64>) -> Result<Self> {
        if gammas.len() != betas.len() {
            return Err(Error::InvalidArgument(format!(
                "{} cost angles vs {} mixer angles",
                gammas.len(),
                betas.len()
            )));
        }
        if gammas.is_empty() {
            return Err(Error::InvalidArgument("depth must be at least 1".into()));
        }
        if gammas.iter().chain(betas.iter()).any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("angles must be finite".into()));
        }
        Ok(QaoaAngles { gammas, betas })
    }

    pub fn depth(&self) -> u32 {
        self.gammas.len() as u32
    }
}

/// Dense tensor over binary variables. Axis `k` of `data` (bit k of the
/// linear index) carries variable `vars[k]`; `vars` is kept sorted.
#[derive(Debug, Clone)]
pub(crate) struct Tensor {
    pub vars: Vec<u32>,
    pub data: Vec<Complex64>,
}

impl Tensor {
    pub(crate) fn new(vars: Vec<u32>, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(data.len(), 1 << vars.len());
        debug_assert!(vars.windows(2).all(|w| w[0] < w[1]), "vars must be sorted");
        Tensor { vars, data }
    }

    pub(crate) fn rank(&self) -> u32 {
        self.vars.len() as u32
    }
}

/// Closed network: contracting all tensors over all variables yields the
/// scalar observable value.
#[derive(Debug, Clone)]
pub struct TensorNetwork {
    pub(crate) num_vars: u32,
    pub(crate) tensors: Vec<Tensor>,
}

impl TensorNetwork {
    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn num_tensors(&self) -> usize {
        self.tensors.len()
    }

    /// Debug dump: one object per tensor, with variable labels and the
    /// entries as [re, im] pairs, row-major over the listed labels.
    pub fn to_debug_json(&self) -> String {
        use serde_json::json;
        let tensors: Vec<serde_json::Value> = self
            .tensors
            .iter()
            .map(|t| {
                let r = t.vars.len();
                // Storage keeps the first variable on the fastest axis;
                // row-major wants the last one there, so permute bits.
                let data: Vec<[f64; 2]> = (0..t.data.len())
                    .map(|out| {
                        let mut idx = 0usize;
                        for k in 0..r {
                            idx |= (out >> (r - 1 - k) & 1) << k;
                        }
                        [t.data[idx].re, t.data[idx].im]
                    })
                    .collect();
                json!({
                    "indices": t.vars.iter().map(|v| format!("v{v}")).collect::<Vec<_>>(),
                    "data": data,
                })
            })
            .collect();
        serde_json::to_string_pretty(&tensors).expect("plain data serializes")
    }

    /// Variable-interaction edges: one clique per tensor, deduplicated.
    pub fn interaction_edges(&self) -> Vec<(u32, u32)> {
        let mut edges = Vec::new();
        for t in &self.tensors {
            for (i, &a) in t.vars.iter().enumerate() {
                for &b in t.vars.iter().skip(i + 1) {
                    edges.push((a.min(b), a.max(b)));
                }
            }
        }
        edges.sort_unstable();
        edges.dedup();
        edges
    }
}

/// Elimination order plus the width it realises (max rank of any
/// intermediate, counting the product before each variable is summed out).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContractionOrder {
    pub order: Vec<u32>,
    pub width: u32,
    /// Sum over eliminations of 2^(clique size); a machine-free cost proxy.
    pub est_cost: f64,
}
