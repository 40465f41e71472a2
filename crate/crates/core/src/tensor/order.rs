//! Greedy fill-in elimination orders.
//!
//! Bucket elimination realises width w when every elimination clique stays
//! below w; greedy min-fill is the workhorse heuristic for that. Ties are
//! broken by degree then id on the first pass, and uniformly at random on
//! later restarts, keeping the best order seen. The whole search is
//! deterministic in the seed.

use rand::Rng;

use crate::config::EngineConfig;
use crate::error::{Error, Result};
use crate::rng;
use crate::tensor::{ContractionOrder, TensorNetwork};

/// Compute an elimination order for `net`, refusing widths above the cap.
///
/// `restarts` counts additional randomised passes beyond the deterministic
/// first one; orders are compared by (width, estimated cost).
pub fn contraction_order(
    net: &TensorNetwork,
    cfg: &EngineConfig,
    restarts: u32,
    seed: u64,
) -> Result<ContractionOrder> {
    let n = net.num_vars() as usize;
    if n == 0 {
        return Ok(ContractionOrder {
            order: Vec::new(),
            width: 0,
            est_cost: 0.0,
        });
    }
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (a, b) in net.interaction_edges() {
        adj[a as usize].push(b);
        adj[b as usize].push(a);
    }
    for nb in adj.iter_mut() {
        nb.sort_unstable();
        nb.dedup();
    }

    let mut best: Option<ContractionOrder> = None;
    for attempt in 0..=restarts {
        let mut rng = (attempt > 0).then(|| rng::stream(seed, "fill-order", attempt as u64));
        let cand = greedy_fill(&adj, rng.as_mut());
        let better = match &best {
            None => true,
            Some(b) => (cand.width, cand.est_cost) < (b.width, b.est_cost),
        };
        if better {
            best = Some(cand);
        }
    }
    let best = best.unwrap();
    if best.width > cfg.width_cap {
        return Err(Error::WidthExceeded {
            width: best.width,
            cap: cfg.width_cap,
        });
    }
    Ok(best)
}

/// One greedy pass. `rng` of None means deterministic tie-breaking.
fn greedy_fill(adj0: &[Vec<u32>], mut rng: Option<&mut rand_chacha::ChaCha8Rng>) -> ContractionOrder {
    let n = adj0.len();
    let mut adj: Vec<Vec<u32>> = adj0.to_vec();
    let mut alive = vec![true; n];
    let mut fill = vec![0u64; n];
    let mut dirty: Vec<u32> = (0..n as u32).collect();

    let mut order = Vec::with_capacity(n);
    let mut width = 0u32;
    let mut est_cost = 0.0f64;
    let mut ties: Vec<u32> = Vec::new();

    for _ in 0..n {
        for &v in &dirty {
            if alive[v as usize] {
                fill[v as usize] = fill_count(&adj, &alive, v);
            }
        }
        dirty.clear();

        // Min fill; ties by (degree, id) or uniformly among the tied set.
        let mut best_key = (u64::MAX, usize::MAX, u32::MAX);
        ties.clear();
        for v in 0..n as u32 {
            if !alive[v as usize] {
                continue;
            }
            let deg = adj[v as usize].len();
            let key = (fill[v as usize], deg, v);
            if rng.is_some() {
                if key.0 < best_key.0 {
                    best_key = (key.0, 0, 0);
                    ties.clear();
                    ties.push(v);
                } else if key.0 == best_key.0 {
                    ties.push(v);
                }
            } else if key < best_key {
                best_key = key;
                ties.clear();
                ties.push(v);
            }
        }
        let pick = match rng.as_mut() {
            Some(r) => ties[r.gen_range(0..ties.len())],
            None => ties[0],
        };

        let nb: Vec<u32> = adj[pick as usize]
            .iter()
            .copied()
            .filter(|&w| alive[w as usize])
            .collect();
        width = width.max(nb.len() as u32 + 1);
        est_cost += (nb.len() as f64 + 1.0).exp2();
        order.push(pick);
        alive[pick as usize] = false;

        // Clique-ify the neighbourhood; every touched vertex (and any vertex
        // adjacent to a new edge's endpoints) gets its fill recomputed.
        for (i, &a) in nb.iter().enumerate() {
            for &b in nb.iter().skip(i + 1) {
                if add_edge(&mut adj, a, b) {
                    // Common neighbours of (a, b) lose one missing pair.
                    dirty.push(a);
                    dirty.push(b);
                    for &w in &adj[a as usize] {
                        if alive[w as usize] && adj[b as usize].binary_search(&w).is_ok() {
                            dirty.push(w);
                        }
                    }
                }
            }
        }
        dirty.extend_from_slice(&nb);
        dirty.sort_unstable();
        dirty.dedup();
    }

    ContractionOrder {
        order,
        width,
        est_cost,
    }
}

/// Pairs of live neighbours of v that are not adjacent to each other.
fn fill_count(adj: &[Vec<u32>], alive: &[bool], v: u32) -> u64 {
    let nb: Vec<u32> = adj[v as usize]
        .iter()
        .copied()
        .filter(|&w| alive[w as usize])
        .collect();
    let mut missing = 0u64;
    for (i, &a) in nb.iter().enumerate() {
        for &b in nb.iter().skip(i + 1) {
            if adj[a as usize].binary_search(&b).is_err() {
                missing += 1;
            }
        }
    }
    missing
}

/// Insert edge (a, b) keeping adjacency sorted; false if already present.
fn add_edge(adj: &mut [Vec<u32>], a: u32, b: u32) -> bool {
    match adj[a as usize].binary_search(&b) {
        Ok(_) => false,
        Err(pos) => {
            adj[a as usize].insert(pos, b);
            let pos_b = adj[b as usize].binary_search(&a).unwrap_err();
            adj[b as usize].insert(pos_b, a);
            true
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::AnchoredSubgraph;
    use crate::tensor::{build_expectation_network, QaoaAngles};

    fn order_for(sub: &AnchoredSubgraph, p: u32, cap: u32) -> Result<ContractionOrder> {
        let angles = QaoaAngles::new(vec![0.3; p as usize], vec![0.2; p as usize]).unwrap();
        let net = build_expectation_network(sub, &angles).unwrap();
        let cfg = EngineConfig::default().with_width_cap(cap);
        contraction_order(&net, &cfg, 2, 7)
    }

    #[test]
    fn path_networks_have_small_width() {
        // Chain-shaped interaction graphs eliminate at constant width.
        let sub = AnchoredSubgraph::new(
            6,
            vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)],
            (2, 3),
            Vec::new(),
        );
        let ord = order_for(&sub, 2, 28).unwrap();
        assert!(ord.width <= 6, "path width blew up to {}", ord.width);
    }

    #[test]
    fn order_is_a_permutation() {
        let sub = AnchoredSubgraph::new(
            4,
            vec![(0, 1), (1, 2), (2, 3), (0, 3)],
            (0, 1),
            Vec::new(),
        );
        let angles = QaoaAngles::new(vec![0.3], vec![0.2]).unwrap();
        let net = build_expectation_network(&sub, &angles).unwrap();
        let ord = contraction_order(&net, &EngineConfig::default(), 0, 0).unwrap();
        let mut seen = vec![false; net.num_vars() as usize];
        assert_eq!(ord.order.len(), net.num_vars() as usize);
        for &v in &ord.order {
            assert!(!seen[v as usize]);
            seen[v as usize] = true;
        }
    }

    #[test]
    fn width_cap_is_enforced() {
        let sub = AnchoredSubgraph::new(
            4,
            vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
            (0, 1),
            Vec::new(),
        );
        match order_for(&sub, 2, 3) {
            Err(e) => assert!(e.is_capacity()),
            Ok(o) => panic!("expected refusal, got width {}", o.width),
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let sub = AnchoredSubgraph::new(
            5,
            vec![(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (1, 3)],
            (0, 1),
            Vec::new(),
        );
        let a = order_for(&sub, 2, 28).unwrap();
        let b = order_for(&sub, 2, 28).unwrap();
        assert_eq!(a.order, b.order);
        assert_eq!(a.width, b.width);
    }
}
