//! Exhaustive MaxCut, the ground truth for everything else in this module.

use crate::error::{Error, Result};
use crate::graph::RegularGraph;

pub const EXACT_DEFAULT_CAP: u32 = 24;
pub const EXACT_MAX_CAP: u32 = 30;

#[derive(Debug, Clone)]
pub struct ExactCut {
    pub cut: u64,
    pub assignment: Vec<bool>,
}

/// Exact maximum cut under the default size cap.
pub fn exact_maxcut(g: &RegularGraph) -> Result<ExactCut> {
    exact_maxcut_capped(g, EXACT_DEFAULT_CAP)
}

/// Walks all 2^(n-1) bipartitions in Gray-code order, vertex 0 pinned to
/// one side since complementing a bipartition preserves its cut. Each step
/// flips one vertex, so the incumbent updates in O(d).
pub fn exact_maxcut_capped(g: &RegularGraph, cap: u32) -> Result<ExactCut> {
    let cap = cap.min(EXACT_MAX_CAP);
    if g.n() > cap {
        return Err(Error::StateTooLarge { n: g.n(), cap });
    }
    let n = g.n() as usize;
    let mut side = vec![false; n];
    let mut cut_deg = vec![0i32; n];
    let mut cut = 0i64;
    let mut best = 0i64;
    let mut best_side = side.clone();
    for k in 1u64..1 << (n - 1) {
        // Gray code: step k flips bit trailing_zeros(k); shift past the
        // pinned vertex 0.
        let v = k.trailing_zeros() as usize + 1;
        let deg = g.neighbors(v as u32).len() as i32;
        cut += i64::from(deg - 2 * cut_deg[v]);
        side[v] = !side[v];
        cut_deg[v] = deg - cut_deg[v];
        for &w in g.neighbors(v as u32) {
            let wi = w as usize;
            if side[wi] == side[v] {
                cut_deg[wi] -= 1;
            } else {
                cut_deg[wi] += 1;
            }
        }
        if cut > best {
            best = cut;
            best_side.copy_from_slice(&side);
        }
    }
    Ok(ExactCut {
        cut: best as u64,
        assignment: best_side,
    })
}
