use std::collections::HashMap;

use crate::error::Result;
use crate::graph::{canonical_key_capped, edge_neighborhood, AnchoredSubgraph, RegularGraph};

/// One isomorphism class of anchored edge neighbourhoods.
#[derive(Debug, Clone)]
pub struct SubgraphClass {
    /// Canonical key; identity of the class.
    pub key: Vec<u8>,
    /// How many edges of the host graph fall in this class.
    pub multiplicity: u64,
    /// Representative in canonical labelling. Evaluating this exact object
    /// gives bit-identical values regardless of which edge was met first.
    pub representative: AnchoredSubgraph,
}

/// Decomposition of a graph's edge set into anchored-neighbourhood classes
/// at a fixed radius. The edge expectation of the whole graph is the
/// multiplicity-weighted sum of one value per class.
#[derive(Debug, Clone)]
pub struct SubgraphTally {
    pub radius: u32,
    pub classes: Vec<SubgraphClass>,
    num_edges: u64,
}

impl SubgraphTally {
    pub fn num_edges(&self) -> u64 {
        self.num_edges
    }

    /// Largest class first; stable order for reporting.
    pub fn dominant(&self) -> Option<&SubgraphClass> {
        self.classes.iter().max_by_key(|c| c.multiplicity)
    }
}

/// Group every edge of `g` by the isomorphism class of its radius-p
/// anchored neighbourhood. `canon_cap` bounds the ball size the
/// canonicaliser will accept; deep radii on large graphs need it raised.
///
/// Classes come out sorted by canonical key, so the tally of a graph is
/// itself deterministic. Multiplicities always sum to the edge count.
pub fn tally_subgraphs(g: &RegularGraph, p: u32, canon_cap: usize) -> Result<SubgraphTally> {
    let mut by_key: HashMap<Vec<u8>, SubgraphClass> = HashMap::new();
    for &e in g.edges() {
        let ball = edge_neighborhood(g, e, p);
        let cf = canonical_key_capped(&ball, canon_cap)?;
        by_key
            .entry(cf.key.clone())
            .or_insert_with(|| SubgraphClass {
                key: cf.key,
                multiplicity: 0,
                representative: ball.relabel(&cf.perm),
            })
            .multiplicity += 1;
    }
    let mut classes: Vec<SubgraphClass> = by_key.into_values().collect();
    classes.sort_by(|a, b| a.key.cmp(&b.key));
    Ok(SubgraphTally {
        radius: p,
        classes,
        num_edges: g.num_edges() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{canonical_key, generate_regular, girth, RegularGraph};

    fn petersen() -> RegularGraph {
        let mut edges = Vec::new();
        for i in 0..5u32 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, 5 + (i + 2) % 5));
        }
        RegularGraph::from_edges(10, 3, edges).unwrap()
    }

    #[test]
    fn multiplicities_sum_to_edge_count() {
        let g = generate_regular(60, 3, 17).unwrap();
        for p in 1..=2 {
            let tally = tally_subgraphs(&g, p, 64).unwrap();
            let total: u64 = tally.classes.iter().map(|c| c.multiplicity).sum();
            assert_eq!(total, g.num_edges() as u64);
        }
    }

    #[test]
    fn high_girth_graph_is_single_tree_class_at_shallow_radius() {
        // If girth > 2p + 1 every radius-p ball is the full binary-ish tree,
        // so the tally collapses to one acyclic class.
        let g = petersen(); // girth 5 > 3 = 2*1 + 1
        assert!(girth(&g).unwrap() > 3);
        let tally = tally_subgraphs(&g, 1, 64).unwrap();
        assert_eq!(tally.classes.len(), 1);
        assert_eq!(tally.classes[0].multiplicity, 15);
        assert!(tally.classes[0].representative.is_forest());
    }

    #[test]
    fn k4_is_single_class_but_cyclic() {
        let g = RegularGraph::from_edges(4, 3, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
            .unwrap();
        let tally = tally_subgraphs(&g, 1, 64).unwrap();
        assert_eq!(tally.classes.len(), 1);
        assert_eq!(tally.classes[0].multiplicity, 6);
        assert!(!tally.classes[0].representative.is_forest());
    }

    #[test]
    fn representative_is_canonically_labelled() {
        // Re-canonicalising a representative must be the identity.
        let g = generate_regular(40, 3, 23).unwrap();
        let tally = tally_subgraphs(&g, 2, 64).unwrap();
        assert!(tally.classes.len() >= 1);
        for class in &tally.classes {
            let cf = canonical_key(&class.representative).unwrap();
            assert_eq!(cf.key, class.key);
            let relabelled = class.representative.relabel(&cf.perm);
            assert_eq!(relabelled.edges(), class.representative.edges());
            assert_eq!(relabelled.anchor(), class.representative.anchor());
        }
    }

    #[test]
    fn tally_is_permutation_invariant() {
        // The same graph under a relabelling must give identical keys and
        // multiplicities.
        let g = generate_regular(30, 3, 31).unwrap();
        let n = g.n();
        let perm: Vec<u32> = (0..n).map(|v| (v * 7 + 3) % n).collect();
        let edges: Vec<(u32, u32)> = g
            .edges()
            .iter()
            .map(|&(u, v)| (perm[u as usize], perm[v as usize]))
            .collect();
        let h = RegularGraph::from_edges(n, 3, edges).unwrap();
        let ta = tally_subgraphs(&g, 2, 64).unwrap();
        let tb = tally_subgraphs(&h, 2, 64).unwrap();
        let sig_a: Vec<(Vec<u8>, u64)> =
            ta.classes.iter().map(|c| (c.key.clone(), c.multiplicity)).collect();
        let sig_b: Vec<(Vec<u8>, u64)> =
            tb.classes.iter().map(|c| (c.key.clone(), c.multiplicity)).collect();
        assert_eq!(sig_a, sig_b);
    }
}
