//! Network construction with lightcone cancellation.
//!
//! Working backwards from the observable, a mixer at layer k acts
//! nontrivially only on qubits within distance p-k of the observable
//! support, and a cost gate at layer k only if one endpoint is within p-k.
//! Everything else cancels against its bra-side mirror, which merges the
//! wire variables across the cancelled span. Vertices farther than p drop
//! out entirely; callers pass the induced ball so they never get built in
//! the first place.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::AnchoredSubgraph;
use crate::tensor::{QaoaAngles, Tensor, TensorNetwork};

/// Wire bookkeeping for one qubit: variable ids for the ket chain
/// w[0..=depth] and bra chain x[0..=depth], with x[depth] == w[depth].
struct Wire {
    ket: Vec<u32>,
    bra: Vec<u32>,
    depth: u32,
}

/// Network for the product of Z on `targets` under the depth-p circuit on
/// `sub`. Targets are local vertex ids of `sub`.
pub fn build_z_network(
    sub: &AnchoredSubgraph,
    angles: &QaoaAngles,
    targets: &[u32],
) -> Result<TensorNetwork> {
    let p = angles.depth();
    if targets.is_empty() {
        return Err(Error::InvalidArgument("empty observable support".into()));
    }
    if targets.iter().any(|&t| t >= sub.n()) {
        return Err(Error::InvalidArgument("target outside subgraph".into()));
    }
    let dist = sub.distances_from(targets);

    let mut next_var = 0u32;
    let mut alloc = |k: u32| -> Vec<u32> {
        let vars = (next_var..next_var + k).collect();
        next_var += k;
        vars
    };

    // Wires only for vertices inside the cone; others contribute identity.
    let wires: Vec<Option<Wire>> = (0..sub.n() as usize)
        .map(|v| {
            let d = dist[v];
            if d > p {
                return None;
            }
            let depth = p - d;
            let ket = alloc(depth + 1);
            let mut bra = alloc(depth);
            bra.push(ket[depth as usize]);
            Some(Wire { ket, bra, depth })
        })
        .collect();

    let mut tensors = Vec::new();
    let inv_sqrt2 = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);

    for wire in wires.iter().flatten() {
        // Plus-state legs on both chain heads. When depth = 0 the two legs
        // land on the same variable and multiply to the constant 1/2 vector.
        tensors.push(Tensor::new(vec![wire.ket[0]], vec![inv_sqrt2; 2]));
        tensors.push(Tensor::new(vec![wire.bra[0]], vec![inv_sqrt2; 2]));
    }

    for layer in 1..=p {
        let gamma = angles.gammas[(layer - 1) as usize];
        let beta = angles.betas[(layer - 1) as usize];

        // Cost gates survive while either endpoint still has live mixers at
        // or past this layer.
        let eig = Complex64::from_polar(1.0, -gamma);
        let cost_ket = [Complex64::new(1.0, 0.0), eig, eig, Complex64::new(1.0, 0.0)];
        let cost_bra = [
            Complex64::new(1.0, 0.0),
            eig.conj(),
            eig.conj(),
            Complex64::new(1.0, 0.0),
        ];
        for &(u, v) in sub.edges() {
            let (wu, wv) = match (&wires[u as usize], &wires[v as usize]) {
                (Some(a), Some(b)) => (a, b),
                _ => continue,
            };
            if layer > wu.depth.max(wv.depth) {
                continue;
            }
            let ku = wu.ket[layer.min(wu.depth + 1) as usize - 1];
            let kv = wv.ket[layer.min(wv.depth + 1) as usize - 1];
            tensors.push(pair_tensor(ku, kv, &cost_ket));
            let bu = wu.bra[layer.min(wu.depth + 1) as usize - 1];
            let bv = wv.bra[layer.min(wv.depth + 1) as usize - 1];
            tensors.push(pair_tensor(bu, bv, &cost_bra));
        }

        // Mixers inside the cone introduce the next wire variable.
        let (c, s) = (beta.cos(), beta.sin());
        let mix_ket = [
            Complex64::new(c, 0.0),
            Complex64::new(0.0, -s),
            Complex64::new(0.0, -s),
            Complex64::new(c, 0.0),
        ];
        let mix_bra = [
            Complex64::new(c, 0.0),
            Complex64::new(0.0, s),
            Complex64::new(0.0, s),
            Complex64::new(c, 0.0),
        ];
        for wire in wires.iter().flatten() {
            if layer <= wire.depth {
                let (i, o) = (wire.ket[(layer - 1) as usize], wire.ket[layer as usize]);
                tensors.push(pair_tensor(i, o, &mix_ket));
                let (i, o) = (wire.bra[(layer - 1) as usize], wire.bra[layer as usize]);
                tensors.push(pair_tensor(i, o, &mix_bra));
            }
        }
    }

    // The observable itself: Z legs on the shared final variables.
    for &t in targets {
        let wire = wires[t as usize].as_ref().expect("targets are at distance 0");
        tensors.push(Tensor::new(
            vec![wire.ket[wire.depth as usize]],
            vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)],
        ));
    }

    Ok(TensorNetwork {
        num_vars: next_var,
        tensors,
    })
}

/// ZZ-correlation network on the anchored edge; contracting it yields
/// <Z_a Z_b>, from which the edge expectation is (1 - value) / 2.
pub fn build_expectation_network(sub: &AnchoredSubgraph, angles: &QaoaAngles) -> Result<TensorNetwork> {
    let (a, b) = sub.anchor();
    build_z_network(sub, angles, &[a, b])
}

/// Rank-2 tensor on a variable pair; values indexed by (bit of lo var) +
/// 2 * (bit of hi var). `vals` is given for (first, second) argument order.
fn pair_tensor(first: u32, second: u32, vals: &[Complex64; 4]) -> Tensor {
    debug_assert_ne!(first, second);
    if first < second {
        Tensor::new(vec![first, second], vals.to_vec())
    } else {
        // Swap axes: entry (i, j) of the given matrix is (j, i) here.
        Tensor::new(
            vec![second, first],
            vec![vals[0], vals[2], vals[1], vals[3]],
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{edge_neighborhood, generate_regular, AnchoredSubgraph};

    fn path3() -> AnchoredSubgraph {
        AnchoredSubgraph::new(3, vec![(0, 1), (1, 2)], (0, 1), Vec::new())
    }

    #[test]
    fn variable_count_matches_pruned_wires() {
        // P3 anchored at (0,1), depth 1: distances 0,0,1.
        // Wires carry 2(p-d)+1 variables: 3 + 3 + 1 = 7.
        let angles = QaoaAngles::new(vec![0.5], vec![0.3]).unwrap();
        let net = build_z_network(&path3(), &angles, &[0, 1]).unwrap();
        assert_eq!(net.num_vars(), 7);
    }

    #[test]
    fn gate_census_depth_two() {
        // Depth 2 on a radius-2 ball: every vertex within the cone.
        let g = generate_regular(50, 3, 19).unwrap();
        let sub = edge_neighborhood(&g, g.edges()[0], 2);
        let angles = QaoaAngles::new(vec![0.4, 0.2], vec![0.3, 0.1]).unwrap();
        let net = build_expectation_network(&sub, &angles).unwrap();
        let dist = sub.distances_from(&[0, 1]);

        let mut want = 0usize;
        // legs: 2 per vertex; observable: 2.
        want += 2 * sub.n() as usize + 2;
        for layer in 1..=2u32 {
            for &(u, v) in sub.edges() {
                if layer <= (2 - dist[u as usize]).max(2 - dist[v as usize]) {
                    want += 2;
                }
            }
            for v in 0..sub.n() as usize {
                if layer <= 2 - dist[v] {
                    want += 2;
                }
            }
        }
        assert_eq!(net.num_tensors(), want);
    }

    #[test]
    fn rejects_bad_targets() {
        let angles = QaoaAngles::new(vec![0.5], vec![0.3]).unwrap();
        assert!(build_z_network(&path3(), &angles, &[]).is_err());
        assert!(build_z_network(&path3(), &angles, &[9]).is_err());
    }
}
