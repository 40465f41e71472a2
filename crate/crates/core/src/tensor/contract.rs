//! Bucket elimination. Tensors live in the bucket of their earliest
//! variable; processing a bucket multiplies its members, sums out that one
//! variable, and forwards the remainder. Width and memory refusals happen
//! before any oversized allocation, so a capped run either finishes or
//! fails cleanly without thrashing.

use num_complex::Complex64;

use crate::config::EngineConfig;
use crate::error::{Error, Result};
use crate::tensor::{ContractionOrder, Tensor, TensorNetwork};

const BYTES_PER_AMP: u64 = std::mem::size_of::<Complex64>() as u64;

/// Contract the closed network along `order`, returning the scalar value.
pub fn contract(net: &TensorNetwork, order: &ContractionOrder, cfg: &EngineConfig) -> Result<Complex64> {
    let n = net.num_vars() as usize;
    assert_eq!(order.order.len(), n, "order must cover every variable");

    let mut pos = vec![u32::MAX; n];
    for (i, &v) in order.order.iter().enumerate() {
        pos[v as usize] = i as u32;
    }

    let mut buckets: Vec<Vec<Tensor>> = (0..n).map(|_| Vec::new()).collect();
    let mut scalar = Complex64::new(1.0, 0.0);
    for t in &net.tensors {
        match earliest(&t.vars, &pos) {
            Some(b) => buckets[b].push(t.clone()),
            None => scalar *= t.data[0],
        }
    }

    for b in 0..n {
        if buckets[b].is_empty() {
            continue;
        }
        let mut members = std::mem::take(&mut buckets[b]);
        // Fold smallest-rank first: intermediates stay within the final
        // clique but transient peaks shrink.
        members.sort_by_key(|t| t.rank());
        let mut acc = members.remove(0);
        for t in members {
            acc = product(&acc, &t, cfg)?;
        }
        let reduced = sum_out(&acc, order.order[b]);
        match earliest(&reduced.vars, &pos) {
            Some(nb) => {
                debug_assert!(nb > b, "forwarding must move strictly later");
                buckets[nb].push(reduced);
            }
            None => scalar *= reduced.data[0],
        }
    }
    Ok(scalar)
}

fn earliest(vars: &[u32], pos: &[u32]) -> Option<usize> {
    vars.iter().map(|&v| pos[v as usize]).min().map(|p| p as usize)
}

/// Pointwise product over the union variable set. Operand indices are
/// maintained incrementally: stepping the output index flips a suffix of
/// bits, and each flipped output bit toggles a fixed bit (or nothing) in
/// each operand index.
fn product(a: &Tensor, b: &Tensor, cfg: &EngineConfig) -> Result<Tensor> {
    let mut vars: Vec<u32> = a.vars.iter().chain(b.vars.iter()).copied().collect();
    vars.sort_unstable();
    vars.dedup();
    let rank = vars.len() as u32;
    if rank > cfg.width_cap {
        return Err(Error::WidthExceeded {
            width: rank,
            cap: cfg.width_cap,
        });
    }
    let needed = BYTES_PER_AMP << rank;
    if needed > cfg.mem_budget {
        return Err(Error::MemoryExceeded {
            needed,
            budget: cfg.mem_budget,
        });
    }

    let mask_for = |t: &Tensor| -> Vec<u64> {
        vars.iter()
            .map(|v| match t.vars.binary_search(v) {
                Ok(axis) => 1u64 << axis,
                Err(_) => 0,
            })
            .collect()
    };
    let mask_a = mask_for(a);
    let mask_b = mask_for(b);

    let size = 1usize << rank;
    let mut data = Vec::with_capacity(size);
    let (mut ia, mut ib) = (0usize, 0usize);
    data.push(a.data[0] * b.data[0]);
    for i in 1..size {
        let mut flipped = (i ^ (i - 1)) as u64;
        while flipped != 0 {
            let bit = flipped.trailing_zeros() as usize;
            ia ^= mask_a[bit] as usize;
            ib ^= mask_b[bit] as usize;
            flipped &= flipped - 1;
        }
        data.push(a.data[ia] * b.data[ib]);
    }
    Ok(Tensor::new(vars, data))
}

/// Sum a tensor over one of its variables.
fn sum_out(t: &Tensor, var: u32) -> Tensor {
    let axis = t
        .vars
        .binary_search(&var)
        .expect("bucket variable must appear in its product");
    let low_mask = (1usize << axis) - 1;
    let bit = 1usize << axis;
    let vars: Vec<u32> = t
        .vars
        .iter()
        .copied()
        .filter(|&v| v != var)
        .collect();
    let size = 1usize << vars.len();
    let mut data = Vec::with_capacity(size);
    for i in 0..size {
        let base = ((i & !low_mask) << 1) | (i & low_mask);
        data.push(t.data[base] + t.data[base | bit]);
    }
    Tensor::new(vars, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::contraction_order;

    fn scalar_net(tensors: Vec<Tensor>, num_vars: u32) -> TensorNetwork {
        TensorNetwork { num_vars, tensors }
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn contracts_a_matrix_chain() {
        // sum_{x,y,z} A[x] B[x,y] C[y,z] D[z] with small integer entries,
        // checked against the hand-evaluated value.
        let a = Tensor::new(vec![0], vec![c(1.0), c(2.0)]);
        let b = Tensor::new(vec![0, 1], vec![c(1.0), c(0.0), c(3.0), c(1.0)]);
        let cc = Tensor::new(vec![1, 2], vec![c(2.0), c(1.0), c(1.0), c(0.0)]);
        let d = Tensor::new(vec![2], vec![c(1.0), c(5.0)]);
        // B[x,y]: entry index x + 2y. A.B = [1*1+2*0, 1*3+2*1] = [1, 5]
        // (A.B).C = [1*2+5*1, 1*1+5*0] = [7, 1]; dot D = 7 + 5 = 12.
        let net = scalar_net(vec![a, b, cc, d], 3);
        let cfg = EngineConfig::default();
        let ord = contraction_order(&net, &cfg, 0, 0).unwrap();
        let got = contract(&net, &ord, &cfg).unwrap();
        assert!((got - c(12.0)).norm() < 1e-12, "got {}", got);
    }

    #[test]
    fn order_independence() {
        // The scalar value must not depend on the elimination order.
        let t1 = Tensor::new(vec![0, 1], vec![c(0.5), c(1.5), c(-1.0), c(2.0)]);
        let t2 = Tensor::new(vec![1, 2], vec![c(1.0), c(2.0), c(0.5), c(-0.5)]);
        let t3 = Tensor::new(vec![0, 2], vec![c(2.0), c(1.0), c(0.0), c(1.0)]);
        let net = scalar_net(vec![t1, t2, t3], 3);
        let cfg = EngineConfig::default();
        let mut values = Vec::new();
        for order in [[0u32, 1, 2], [2, 1, 0], [1, 0, 2], [1, 2, 0]] {
            let ord = ContractionOrder {
                order: order.to_vec(),
                width: 3,
                est_cost: 0.0,
            };
            values.push(contract(&net, &ord, &cfg).unwrap());
        }
        for v in &values[1..] {
            assert!((v - values[0]).norm() < 1e-12);
        }
    }

    #[test]
    fn memory_budget_refuses_before_allocating() {
        // Two rank-10 tensors sharing only variable 0: eliminating it forces
        // a rank-19 product, 8 MiB of amplitudes against a 1 KiB budget.
        let vars_a: Vec<u32> = (0..10).collect();
        let vars_b: Vec<u32> = std::iter::once(0).chain(10..19).collect();
        let a = Tensor::new(vars_a, vec![c(1.0); 1 << 10]);
        let b = Tensor::new(vars_b, vec![c(1.0); 1 << 10]);
        let net = scalar_net(vec![a, b], 19);
        let cfg = EngineConfig::default().with_mem_budget(1024);
        let ord = ContractionOrder {
            order: (0..19).collect(),
            width: 19,
            est_cost: 0.0,
        };
        match contract(&net, &ord, &cfg) {
            Err(e) => assert!(e.is_capacity()),
            Ok(_) => panic!("allocation must be refused"),
        }
    }

    #[test]
    fn disconnected_pieces_multiply() {
        let a = Tensor::new(vec![0], vec![c(1.0), c(3.0)]); // sums to 4
        let b = Tensor::new(vec![1], vec![c(2.0), c(5.0)]); // sums to 7
        let net = scalar_net(vec![a, b], 2);
        let cfg = EngineConfig::default();
        let ord = contraction_order(&net, &cfg, 0, 0).unwrap();
        let got = contract(&net, &ord, &cfg).unwrap();
        assert!((got - c(28.0)).norm() < 1e-12);
    }
}
