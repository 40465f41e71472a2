//! Observable evaluation on subgraphs and whole graphs.
//!
//! Everything here returns real expectations; the imaginary residue of a
//! contraction is a pure rounding artifact and is checked, not returned.

use std::collections::HashMap;

use crate::config::EngineConfig;
use crate::error::Result;
use crate::graph::{canonical_form_colored, set_neighborhood, AnchoredSubgraph, RegularGraph};
use crate::tensor::{
    build_z_network, contract, contraction_order, ContractionOrder, QaoaAngles, TensorNetwork,
};

/// Fixed seed for order randomisation: orders must be a pure function of
/// the network shape, or per-class values stop being reproducible.
const ORDER_SEED: u64 = 0x74656e736f72;

/// Subgraphs at or below this size get canonical-key caching when they come
/// up repeatedly inside one graph-level computation. Bigger ones are almost
/// surely unique, and canonicalising them costs more than it saves.
const CACHE_MAX_N: u32 = 40;

fn order_restarts(num_vars: u32) -> u32 {
    if num_vars <= 200 {
        3
    } else {
        1
    }
}

fn contract_real(net: &TensorNetwork, order: &ContractionOrder, cfg: &EngineConfig) -> Result<f64> {
    let val = contract(net, order, cfg)?;
    debug_assert!(
        val.im.abs() <= 1e-8 * val.re.abs().max(1.0),
        "observable came out complex: {}",
        val
    );
    Ok(val.re)
}

fn z_product(
    sub: &AnchoredSubgraph,
    angles: &QaoaAngles,
    targets: &[u32],
    cfg: &EngineConfig,
) -> Result<f64> {
    let net = build_z_network(sub, angles, targets)?;
    let ord = contraction_order(&net, cfg, order_restarts(net.num_vars()), ORDER_SEED)?;
    contract_real(&net, &ord, cfg)
}

/// Expectation of the Z-product over `targets` (local ids) at the end of
/// the depth-p circuit on `sub`.
pub fn zz_correlation(
    sub: &AnchoredSubgraph,
    angles: &QaoaAngles,
    targets: &[u32],
    cfg: &EngineConfig,
) -> Result<f64> {
    z_product(sub, angles, targets, cfg)
}

/// Expected value of the anchored edge: (1 - <Z_a Z_b>) / 2.
pub fn edge_expectation(
    sub: &AnchoredSubgraph,
    angles: &QaoaAngles,
    cfg: &EngineConfig,
) -> Result<f64> {
    let (a, b) = sub.anchor();
    Ok((1.0 - z_product(sub, angles, &[a, b], cfg)?) / 2.0)
}

/// Reusable evaluator for one subgraph and target set: the network shape
/// and elimination order are fixed at construction, so optimisers can sweep
/// angles paying only for tensor refill and contraction.
pub struct SubgraphEvaluator {
    sub: AnchoredSubgraph,
    targets: Vec<u32>,
    depth: u32,
    order: ContractionOrder,
}

impl SubgraphEvaluator {
    pub fn new(sub: AnchoredSubgraph, depth: u32, cfg: &EngineConfig) -> Result<Self> {
        let (a, b) = sub.anchor();
        Self::for_targets(sub, vec![a, b], depth, cfg)
    }

    pub fn for_targets(
        sub: AnchoredSubgraph,
        targets: Vec<u32>,
        depth: u32,
        cfg: &EngineConfig,
    ) -> Result<Self> {
        // The variable layout depends on the angle count, never the values.
        let probe = QaoaAngles::new(vec![0.1; depth as usize], vec![0.1; depth as usize])?;
        let net = build_z_network(&sub, &probe, &targets)?;
        let order = contraction_order(&net, cfg, order_restarts(net.num_vars()), ORDER_SEED)?;
        Ok(SubgraphEvaluator {
            sub,
            targets,
            depth,
            order,
        })
    }

    pub fn width(&self) -> u32 {
        self.order.width
    }

    pub fn z_value(&self, angles: &QaoaAngles, cfg: &EngineConfig) -> Result<f64> {
        assert_eq!(angles.depth(), self.depth, "depth is fixed at construction");
        let net = build_z_network(&self.sub, angles, &self.targets)?;
        contract_real(&net, &self.order, cfg)
    }

    /// Edge value when the targets are the anchor pair.
    pub fn edge_value(&self, angles: &QaoaAngles, cfg: &EngineConfig) -> Result<f64> {
        Ok((1.0 - self.z_value(angles, cfg)?) / 2.0)
    }
}

/// First and second moments of the cut distribution produced by the
/// circuit.
#[derive(Debug, Clone, Copy)]
pub struct CostMoments {
    pub mean: f64,
    pub second_moment: f64,
}

impl CostMoments {
    pub fn variance(&self) -> f64 {
        (self.second_moment - self.mean * self.mean).max(0.0)
    }

    pub fn std_dev(&self) -> f64 {
        self.variance().sqrt()
    }
}

/// Exact <C> and <C^2> of the depth-p circuit on `g` by local contraction.
///
/// <C^2> splits over edge pairs. Pairs farther apart than 2p have disjoint
/// lightcones, so their correlator factorises exactly and is folded in
/// through the square of the mean; only nearby pairs need a joint network,
/// over the ball around the symmetric difference of their endpoints:
///   <C_e C_e'> = (1 - <ZZ_e> - <ZZ_e'> + <Z_T>) / 4.
/// Shared endpoints drop out of T because Z^2 = I.
pub fn cost_second_moment(
    g: &RegularGraph,
    angles: &QaoaAngles,
    cfg: &EngineConfig,
) -> Result<CostMoments> {
    let p = angles.depth();
    let f = edge_values(g, angles, cfg)?;
    let mean: f64 = f.iter().sum();

    let edges = g.edges();
    let mut near_joint = 0.0f64; // sum over near pairs of <C_e C_e'>
    let mut near_product = 0.0f64; // same pairs, factorised
    let mut zt_cache: HashMap<Vec<u8>, f64> = HashMap::new();

    for (i, &(a, b)) in edges.iter().enumerate() {
        let dist = g.distances_from(&[a, b]);
        for (j, &(x, y)) in edges.iter().enumerate().skip(i + 1) {
            if dist[x as usize].min(dist[y as usize]) > 2 * p {
                continue;
            }
            let mut t: Vec<u32> = Vec::with_capacity(4);
            for v in [a, b, x, y] {
                match t.iter().position(|&w| w == v) {
                    Some(pos) => {
                        t.swap_remove(pos);
                    }
                    None => t.push(v),
                }
            }
            t.sort_unstable();
            let zt = zt_value(g, angles, &t, p, cfg, &mut zt_cache)?;
            let zz_e = 1.0 - 2.0 * f[i];
            let zz_ep = 1.0 - 2.0 * f[j];
            near_joint += (1.0 - zz_e - zz_ep + zt) / 4.0;
            near_product += f[i] * f[j];
        }
    }

    let sum_sq: f64 = f.iter().map(|v| v * v).sum();
    // (sum f)^2 = sum_e f^2 + 2 sum_{e<e'} f f'; swap the near block for the
    // joint values and add the diagonal <C_e^2> = <C_e>.
    let second = mean + (mean * mean - sum_sq - 2.0 * near_product) + 2.0 * near_joint;
    Ok(CostMoments {
        mean,
        second_moment: second,
    })
}

/// Per-edge expectations, cached by neighbourhood class where that pays.
pub fn edge_values(g: &RegularGraph, angles: &QaoaAngles, cfg: &EngineConfig) -> Result<Vec<f64>> {
    let p = angles.depth();
    let mut cache: HashMap<Vec<u8>, f64> = HashMap::new();
    let mut out = Vec::with_capacity(g.num_edges());
    let cache_cap = (CACHE_MAX_N as usize).min(cfg.canon_cap) as u32;
    for &e in g.edges() {
        let ball = crate::graph::edge_neighborhood(g, e, p);
        let value = if ball.n() <= cache_cap {
            let cf = crate::graph::canonical_key_capped(&ball, cfg.canon_cap)?;
            match cache.get(&cf.key) {
                Some(&v) => v,
                None => {
                    let rep = ball.relabel(&cf.perm);
                    let v = edge_expectation(&rep, angles, cfg)?;
                    cache.insert(cf.key, v);
                    v
                }
            }
        } else {
            edge_expectation(&ball, angles, cfg)?
        };
        out.push(value);
    }
    Ok(out)
}

fn zt_value(
    g: &RegularGraph,
    angles: &QaoaAngles,
    targets: &[u32],
    p: u32,
    cfg: &EngineConfig,
    cache: &mut HashMap<Vec<u8>, f64>,
) -> Result<f64> {
    if targets.is_empty() {
        return Ok(1.0);
    }
    let (sub, local_targets) = set_neighborhood(g, targets, p);
    if sub.n() as usize > (CACHE_MAX_N as usize).min(cfg.canon_cap) {
        return z_product(&sub, angles, &local_targets, cfg);
    }
    let mut colors = vec![0u32; sub.n() as usize];
    for &t in &local_targets {
        colors[t as usize] = 1;
    }
    let cf = canonical_form_colored(sub.n(), sub.edges(), &colors, cfg.canon_cap)?;
    if let Some(&v) = cache.get(&cf.key) {
        return Ok(v);
    }
    let rep = sub.relabel(&cf.perm);
    let rep_targets: Vec<u32> = {
        let mut t: Vec<u32> = local_targets.iter().map(|&v| cf.perm[v as usize]).collect();
        t.sort_unstable();
        t
    };
    let v = z_product(&rep, angles, &rep_targets, cfg)?;
    cache.insert(cf.key, v);
    Ok(v)
}
