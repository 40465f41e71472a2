//! Dense simulator. Exponential in qubit count and deliberately capped; its
//! role is ground truth for the tensor pipeline at sizes where both run, and
//! bitstring sampling for the shots model.
//!
//! Basis convention: computational index `z` holds qubit q in bit q, so
//! vertex ids and bit positions coincide.

use num_complex::Complex64;
use rand::Rng;

use crate::config::EngineConfig;
use crate::error::{Error, Result};
use crate::graph::RegularGraph;
use crate::rng;
use crate::tensor::{CostMoments, QaoaAngles};

#[derive(Debug, Clone)]
pub struct StateVector {
    n: u32,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Probability-weighted average of an arbitrary basis-state functional.
    pub fn expectation_of(&self, f: impl Fn(u64) -> f64) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .map(|(z, a)| a.norm_sqr() * f(z as u64))
            .sum()
    }
}

/// Number of edges cut by assignment `z` (bit q = side of vertex q).
pub fn cost_of(g: &RegularGraph, z: u64) -> u32 {
    debug_assert!(g.n() <= 64);
    g.edges()
        .iter()
        .filter(|&&(u, v)| (z >> u ^ z >> v) & 1 == 1)
        .count() as u32
}

/// Per-basis-state cut counts for the whole computational basis.
///
/// u16 per state keeps the table at 2 bytes per amplitude; cut values are
/// bounded by the edge count which is far below 2^16 at dense-simulable
/// sizes.
fn cut_table(g: &RegularGraph) -> Vec<u16> {
    let n = g.n();
    let size = 1usize << n;
    let mut cuts = vec![0u16; size];
    for &(u, v) in g.edges() {
        let (u, v) = (u as u64, v as u64);
        for (z, c) in cuts.iter_mut().enumerate() {
            *c += ((z as u64 >> u ^ z as u64 >> v) & 1) as u16;
        }
    }
    cuts
}

/// Run the depth-p circuit: uniform superposition, then per layer the
/// diagonal cost phase followed by the single-qubit mixer rotations.
pub fn simulate_state(
    g: &RegularGraph,
    angles: &QaoaAngles,
    cfg: &EngineConfig,
) -> Result<StateVector> {
    let n = g.n();
    if n > cfg.statevector_cap || n >= usize::BITS {
        return Err(Error::StateTooLarge {
            n,
            cap: cfg.statevector_cap.min(usize::BITS - 1),
        });
    }
    let size = 1usize << n;
    let cuts = cut_table(g);
    let amp0 = Complex64::new(1.0 / (size as f64).sqrt(), 0.0);
    let mut amps = vec![amp0; size];

    for layer in 0..angles.depth() as usize {
        let gamma = angles.gammas[layer];
        let beta = angles.betas[layer];

        // Diagonal phase e^{-i gamma * cut(z)}: one table entry per cut value.
        let m = g.num_edges();
        let phase: Vec<Complex64> = (0..=m)
            .map(|c| Complex64::from_polar(1.0, -gamma * c as f64))
            .collect();
        for (a, &c) in amps.iter_mut().zip(cuts.iter()) {
            *a *= phase[c as usize];
        }

        // Mixer e^{-i beta X} on every qubit: in-place butterflies.
        let (cos_b, sin_b) = (beta.cos(), beta.sin());
        let mi_sin = Complex64::new(0.0, -sin_b);
        for q in 0..n {
            let stride = 1usize << q;
            let mut base = 0usize;
            while base < size {
                for lo in base..base + stride {
                    let hi = lo + stride;
                    let (a, b) = (amps[lo], amps[hi]);
                    amps[lo] = a * cos_b + b * mi_sin;
                    amps[hi] = a * mi_sin + b * cos_b;
                }
                base += stride << 1;
            }
        }
    }
    Ok(StateVector { n, amps })
}

/// Exact expected cut value of the circuit output distribution.
pub fn exact_expectation(g: &RegularGraph, angles: &QaoaAngles, cfg: &EngineConfig) -> Result<f64> {
    let state = simulate_state(g, angles, cfg)?;
    Ok(expectation_cut(&state, g))
}

/// Expected cut of an already-simulated state.
pub fn expectation_cut(state: &StateVector, g: &RegularGraph) -> f64 {
    let cuts = cut_table(g);
    state
        .amps
        .iter()
        .zip(cuts.iter())
        .map(|(a, &c)| a.norm_sqr() * c as f64)
        .sum()
}

/// First and second moments of the cut value in one pass.
pub fn cost_moments(state: &StateVector, g: &RegularGraph) -> Result<CostMoments> {
    if state.n() != g.n() {
        return Err(Error::InvalidArgument(format!(
            "state has {} qubits, graph has {} vertices",
            state.n(),
            g.n()
        )));
    }
    let cuts = cut_table(g);
    let mut mean = 0.0f64;
    let mut second = 0.0f64;
    for (a, &c) in state.amps.iter().zip(cuts.iter()) {
        let w = a.norm_sqr();
        let c = c as f64;
        mean += w * c;
        second += w * c * c;
    }
    Ok(CostMoments {
        mean,
        second_moment: second,
    })
}

/// Expectation of the Z-product over the qubits set in `mask`.
pub fn expectation_z_set(state: &StateVector, mask: u64) -> f64 {
    state
        .amps
        .iter()
        .enumerate()
        .map(|(z, a)| {
            let sign = if (z as u64 & mask).count_ones() % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            a.norm_sqr() * sign
        })
        .sum()
}

/// Draw k basis states from the measurement distribution of `state`.
///
/// Sorted uniforms are folded through a single sweep of the probability
/// vector, so the cost is one pass plus k log k regardless of state size,
/// and the draw order is deterministic in the seed.
pub fn sample_bitstrings(state: &StateVector, k: usize, seed: u64) -> Vec<u64> {
    let mut rng = rng::stream(seed, "measure", 0);
    let mut draws: Vec<(f64, usize)> = (0..k).map(|i| (rng.gen::<f64>(), i)).collect();
    draws.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut out = vec![0u64; k];
    let mut acc = 0.0;
    let mut di = 0;
    'outer: for (z, a) in state.amps.iter().enumerate() {
        acc += a.norm_sqr();
        while di < k && draws[di].0 < acc {
            out[draws[di].1] = z as u64;
            di += 1;
            if di == k {
                break 'outer;
            }
        }
    }
    // Float round-off can leave the tail short of 1.0; assign leftovers to
    // the last basis state.
    for d in draws.iter().skip(di) {
        out[d.1] = (state.amps.len() - 1) as u64;
    }
    out
}
