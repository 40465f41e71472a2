//! Fixed-angle derivation on the regular tree.
//!
//! The objective is the anchored-edge value on the depth-p tree, the class
//! that dominates sparse random regular graphs. Optimisation is multi-start
//! coordinate descent with a halving step, which is derivative-free and
//! deterministic given the seed. The first start is informed: depth p - 1
//! angles, derived recursively, resampled onto p points. That ladder is
//! what makes p >= 4 land reliably on the known optima instead of the
//! plateau of local maxima nearby.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8};

use rand::Rng;

use crate::config::EngineConfig;
use crate::error::Result;
use crate::graph::anchored_regular_tree;
use crate::qaoa::FixedAngleSet;
use crate::rng;
use crate::tensor::{QaoaAngles, SubgraphEvaluator};

/// Cost angles search in |gamma| <= pi/2, mixer angles in |beta| <= pi/4;
/// the circuit's exact symmetries fold every optimum into that box.
const GAMMA_MAX: f64 = FRAC_PI_2;
const BETA_MAX: f64 = FRAC_PI_4;

/// Step floor: value error near an optimum is quadratic in the step, so
/// pi/2048 in angle is far below 1e-3 in value.
const STEP_FLOOR: f64 = std::f64::consts::PI / 2048.0;

#[derive(Debug, Clone)]
pub struct AngleDerivation {
    pub angles: FixedAngleSet,
    /// Tree edge value at the returned angles.
    pub tree_value: f64,
    pub restarts: u32,
    pub evaluations: u64,
}

/// Derive depth-p angles for degree-d trees: the returned schedule
/// maximises the anchored-edge expectation on the radius-p tree.
///
/// `restarts` counts random starts beyond the informed one. Deterministic
/// in (d, p, restarts, seed).
pub fn derive_fixed_angles(
    d: u32,
    p: u32,
    restarts: u32,
    seed: u64,
    cfg: &EngineConfig,
) -> Result<AngleDerivation> {
    let tree = anchored_regular_tree(d, p);
    let eval = SubgraphEvaluator::new(tree, p, cfg)?;
    let mut evaluations = 0u64;

    let mut starts: Vec<Vec<f64>> = Vec::with_capacity(restarts as usize + 1);
    if p == 1 {
        // Depth-1 optimum on the degree-d tree is known in closed form:
        // maximise sin(4b) sin(g) cos^(d-1)(g).
        let gamma = (1.0 / (d as f64).sqrt()).asin();
        starts.push(vec![gamma, FRAC_PI_8]);
    } else {
        let inner = derive_fixed_angles(
            d,
            p - 1,
            (restarts / 2).min(4),
            rng::child_seed(seed, "ladder", p as u64),
            cfg,
        )?;
        evaluations += inner.evaluations;
        let mut warm = resample(&inner.angles.gammas, p as usize);
        warm.extend(resample(&inner.angles.betas, p as usize));
        starts.push(warm);
    }
    for i in 0..restarts {
        let mut r = rng::stream(seed, "angle-start", i as u64);
        let mut x = Vec::with_capacity(2 * p as usize);
        for _ in 0..p {
            x.push(r.gen_range(-GAMMA_MAX..GAMMA_MAX));
        }
        for _ in 0..p {
            x.push(r.gen_range(-BETA_MAX..BETA_MAX));
        }
        starts.push(x);
    }

    let mut best: Option<(f64, Vec<f64>)> = None;
    for start in starts {
        let (value, x) = descend(&eval, p, start, cfg, &mut evaluations)?;
        if best.as_ref().map_or(true, |(bv, _)| value > *bv) {
            best = Some((value, x));
        }
    }
    let (tree_value, mut x) = best.unwrap();

    // (g, b) -> (-g, -b) is an exact symmetry; present the positive branch.
    if x[0] < 0.0 {
        for v in x.iter_mut() {
            *v = -*v;
        }
    }
    let (gammas, betas) = x.split_at(p as usize);
    let angles = FixedAngleSet {
        p,
        gammas: gammas.to_vec(),
        betas: betas.to_vec(),
        source: format!(
            "tree-descent d={} p={} restarts={} seed={}",
            d, p, restarts, seed
        ),
        tree_value: Some(tree_value),
    };
    Ok(AngleDerivation {
        angles,
        tree_value,
        restarts,
        evaluations,
    })
}

/// Linear resampling of a schedule onto a new length; the standard warm
/// start for going one layer deeper.
fn resample(xs: &[f64], m: usize) -> Vec<f64> {
    if xs.len() == 1 {
        return vec![xs[0]; m];
    }
    let n = xs.len();
    (0..m)
        .map(|j| {
            let t = j as f64 * (n - 1) as f64 / (m - 1) as f64;
            let k = (t.floor() as usize).min(n - 2);
            let frac = t - k as f64;
            xs[k] * (1.0 - frac) + xs[k + 1] * frac
        })
        .collect()
}

/// Coordinate descent with halving steps. Accepts only strict improvement,
/// sweeping until a full pass makes no move, then halves the step.
fn descend(
    eval: &SubgraphEvaluator,
    p: u32,
    mut x: Vec<f64>,
    cfg: &EngineConfig,
    evaluations: &mut u64,
) -> Result<(f64, Vec<f64>)> {
    let dims = 2 * p as usize;
    let limit = |i: usize| if i < p as usize { GAMMA_MAX } else { BETA_MAX };
    for (i, v) in x.iter_mut().enumerate() {
        *v = v.clamp(-limit(i), limit(i));
    }

    let value = |x: &[f64], evals: &mut u64| -> Result<f64> {
        *evals += 1;
        let (g, b) = x.split_at(p as usize);
        let angles = QaoaAngles::new(g.to_vec(), b.to_vec())?;
        eval.edge_value(&angles, cfg)
    };

    let mut fx = value(&x, evaluations)?;
    let mut step = FRAC_PI_8;
    while step >= STEP_FLOOR {
        loop {
            let mut moved = false;
            for i in 0..dims {
                for dir in [1.0f64, -1.0] {
                    let cand = (x[i] + dir * step).clamp(-limit(i), limit(i));
                    if cand == x[i] {
                        continue;
                    }
                    let old = x[i];
                    x[i] = cand;
                    let fc = value(&x, evaluations)?;
                    if fc > fx {
                        fx = fc;
                        moved = true;
                    } else {
                        x[i] = old;
                    }
                }
            }
            if !moved {
                break;
            }
        }
        step *= 0.5;
    }
    Ok((fx, x))
}
