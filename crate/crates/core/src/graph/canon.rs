//! Canonical forms for small vertex-coloured graphs.
//!
//! Neighbourhood subgraphs are overwhelmingly trees or trees plus a few
//! independent cycles, so the canonicalisation is split:
//!
//! * acyclic components use rooted-tree encoding at the centroid, which is
//!   linear-ish and allocation-light;
//! * components with cycles strip to their 2-core, fold each hanging tree
//!   into its attachment vertex's colour, and canonicalise the core by
//!   individualisation-refinement with full backtracking.
//!
//! The result is a byte key (equal iff the coloured graphs are isomorphic)
//! plus the permutation onto the canonical labelling, so class
//! representatives can be stored in one fixed labelling and per-class values
//! stay bit-identical no matter which member was met first.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::AnchoredSubgraph;

/// Default vertex cap for canonicalisation. Backtracking search is
/// worst-case exponential; the cap keeps accidental huge inputs from
/// hanging. Raise it through [`EngineConfig`](crate::config::EngineConfig)
/// for deep-radius work.
pub const DEFAULT_CANON_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    /// Key bytes; equality is coloured-graph isomorphism.
    pub key: Vec<u8>,
    /// `perm[old] = new` onto canonical labels.
    pub perm: Vec<u32>,
}

/// Canonical form of an anchored subgraph. The two anchor endpoints carry
/// one shared mark: an anchored isomorphism may swap them, matching the
/// symmetry of the edge observable.
pub fn canonical_key(sub: &AnchoredSubgraph) -> Result<CanonicalForm> {
    canonical_key_capped(sub, DEFAULT_CANON_CAP)
}

pub fn canonical_key_capped(sub: &AnchoredSubgraph, cap: usize) -> Result<CanonicalForm> {
    let mut colors = vec![0u32; sub.n() as usize];
    colors[sub.anchor().0 as usize] = 1;
    colors[sub.anchor().1 as usize] = 1;
    canonical_form_colored(sub.n(), sub.edges(), &colors, cap)
}

/// Canonical form of an arbitrary coloured graph.
pub fn canonical_form_colored(
    n: u32,
    edges: &[(u32, u32)],
    colors: &[u32],
    cap: usize,
) -> Result<CanonicalForm> {
    let n = n as usize;
    if n > cap {
        return Err(Error::SubgraphTooLarge { n, cap });
    }
    assert_eq!(colors.len(), n);
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u as usize].push(v as usize);
        adj[v as usize].push(u as usize);
    }
    for nb in adj.iter_mut() {
        nb.sort_unstable();
    }

    // Split into components; canonicalise each, then order components by
    // their encodings so the global form is label-free.
    let mut comp_of = vec![usize::MAX; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for s in 0..n {
        if comp_of[s] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let mut verts = vec![s];
        comp_of[s] = id;
        let mut head = 0;
        while head < verts.len() {
            let v = verts[head];
            head += 1;
            for &w in &adj[v] {
                if comp_of[w] == usize::MAX {
                    comp_of[w] = id;
                    verts.push(w);
                }
            }
        }
        comps.push(verts);
    }

    let mut encoded: Vec<(Vec<u32>, Vec<usize>)> = comps
        .iter()
        .map(|verts| canon_component(verts, &adj, colors))
        .collect();
    encoded.sort();

    let mut perm = vec![0u32; n];
    let mut next = 0u32;
    let mut key_tokens: Vec<u32> = vec![n as u32, edges.len() as u32];
    for (enc, order) in &encoded {
        for &old in order {
            perm[old] = next;
            next += 1;
        }
        key_tokens.extend_from_slice(enc);
    }

    let mut key = Vec::with_capacity(key_tokens.len() * 4);
    for t in key_tokens {
        key.extend_from_slice(&t.to_le_bytes());
    }
    Ok(CanonicalForm { key, perm })
}

/// Canonicalise one connected component. Returns its encoding and the old
/// ids in canonical order.
fn canon_component(
    verts: &[usize],
    adj: &[Vec<usize>],
    colors: &[u32],
) -> (Vec<u32>, Vec<usize>) {
    let m: usize = verts.iter().map(|&v| adj[v].len()).sum::<usize>() / 2;
    let order = if m + 1 == verts.len() {
        canon_tree(verts, adj, colors)
    } else {
        canon_cyclic(verts, adj, colors)
    };
    (encode_ordered(&order, adj, colors), order)
}

/// Serialise a component under a given vertex order: n, m, colours in order,
/// then the relabelled edge list sorted. Two orders of isomorphic components
/// compare equal iff they realise the same coloured graph.
fn encode_ordered(order: &[usize], adj: &[Vec<usize>], colors: &[u32]) -> Vec<u32> {
    let mut new_id = vec![u32::MAX; adj.len()];
    for (new, &old) in order.iter().enumerate() {
        new_id[old] = new as u32;
    }
    let mut edges = Vec::new();
    for &old in order {
        let u = new_id[old];
        for &w in &adj[old] {
            let v = new_id[w];
            debug_assert!(v != u32::MAX, "order must cover the component");
            if u < v {
                edges.push((u, v));
            }
        }
    }
    edges.sort_unstable();
    let mut enc = Vec::with_capacity(2 + order.len() + 2 * edges.len());
    enc.push(order.len() as u32);
    enc.push(edges.len() as u32);
    enc.extend(order.iter().map(|&old| colors[old]));
    for (u, v) in edges {
        enc.push(u);
        enc.push(v);
    }
    enc
}

// ---------------------------------------------------------------------------
// trees

/// Tree canonical order: root at the centre (or the central edge) and sort
/// subtrees by their encodings, bottom up.
fn canon_tree(verts: &[usize], adj: &[Vec<usize>], colors: &[u32]) -> Vec<usize> {
    let centers = tree_centers(verts, adj);
    match centers[..] {
        [c] => tree_preorder(c, usize::MAX, adj, colors).1,
        [c1, c2] => {
            let (e1, mut o1) = tree_preorder(c1, c2, adj, colors);
            let (e2, mut o2) = tree_preorder(c2, c1, adj, colors);
            // Root the central edge with the lexicographically smaller half
            // first; equal halves are isomorphic, either order is canonical.
            if e2 < e1 {
                std::mem::swap(&mut o1, &mut o2);
            }
            o1.extend(o2);
            o1
        }
        _ => unreachable!("a tree has one or two centers"),
    }
}

/// Peel leaves layer by layer; what remains last is the centre set.
fn tree_centers(verts: &[usize], adj: &[Vec<usize>]) -> Vec<usize> {
    if verts.len() <= 2 {
        let mut c = verts.to_vec();
        c.sort_unstable();
        return c;
    }
    let mut deg: std::collections::HashMap<usize, usize> =
        verts.iter().map(|&v| (v, adj[v].len())).collect();
    let mut alive: std::collections::HashSet<usize> = verts.iter().copied().collect();
    let mut leaves: Vec<usize> = verts.iter().copied().filter(|&v| deg[&v] <= 1).collect();
    while alive.len() > 2 {
        for &v in &leaves {
            alive.remove(&v);
        }
        let mut next = Vec::new();
        for &v in &leaves {
            for &w in &adj[v] {
                if alive.contains(&w) {
                    let dw = deg.get_mut(&w).unwrap();
                    *dw -= 1;
                    if *dw == 1 {
                        next.push(w);
                    }
                }
            }
        }
        leaves = next;
    }
    let mut centers: Vec<usize> = alive.into_iter().collect();
    centers.sort_unstable();
    centers
}

/// Rooted encoding plus preorder with children sorted by encoding.
/// `banned` cuts the edge towards the other half of a central edge.
fn tree_preorder(
    root: usize,
    banned: usize,
    adj: &[Vec<usize>],
    colors: &[u32],
) -> (Vec<u32>, Vec<usize>) {
    const OPEN: u32 = u32::MAX;
    const CLOSE: u32 = u32::MAX - 1;

    fn rec(
        v: usize,
        parent: usize,
        adj: &[Vec<usize>],
        colors: &[u32],
    ) -> (Vec<u32>, Vec<usize>) {
        let mut kids: Vec<(Vec<u32>, Vec<usize>)> = adj[v]
            .iter()
            .filter(|&&w| w != parent)
            .map(|&w| rec(w, v, adj, colors))
            .collect();
        kids.sort();
        let mut enc = vec![OPEN, colors[v]];
        let mut order = vec![v];
        for (e, o) in kids {
            enc.extend(e);
            order.extend(o);
        }
        enc.push(CLOSE);
        (enc, order)
    }
    rec(root, banned, adj, colors)
}

// ---------------------------------------------------------------------------
// cyclic components

/// Canonical order for a component with cycles: 2-core by leaf stripping,
/// hanging trees folded into attachment colours, individualisation-
/// refinement on the core, then trees expanded behind their attachment.
fn canon_cyclic(verts: &[usize], adj: &[Vec<usize>], colors: &[u32]) -> Vec<usize> {
    let n_all = adj.len();
    let mut in_core = vec![false; n_all];
    let mut deg = vec![0usize; n_all];
    for &v in verts {
        in_core[v] = true;
        deg[v] = adj[v].len();
    }
    let mut queue: VecDeque<usize> = verts.iter().copied().filter(|&v| deg[v] <= 1).collect();
    while let Some(v) = queue.pop_front() {
        in_core[v] = false;
        for &w in &adj[v] {
            if in_core[w] {
                deg[w] -= 1;
                if deg[w] == 1 {
                    queue.push_back(w);
                }
            }
        }
    }

    let mut core: Vec<usize> = verts.iter().copied().filter(|&v| in_core[v]).collect();
    core.sort_unstable();
    debug_assert!(!core.is_empty(), "cyclic component must keep a 2-core");

    // Hanging trees: for each core vertex, encode every pendant subtree and
    // keep the preorders for later expansion, sorted by encoding.
    let mut pendant_enc: Vec<Vec<u32>> = Vec::with_capacity(core.len());
    let mut pendant_order: Vec<Vec<usize>> = Vec::with_capacity(core.len());
    for &c in &core {
        let mut subs: Vec<(Vec<u32>, Vec<usize>)> = adj[c]
            .iter()
            .filter(|&&w| !in_core[w])
            .map(|&w| tree_preorder(w, c, adj, colors))
            .collect();
        subs.sort();
        let mut enc = vec![colors[c], subs.len() as u32];
        let mut ord = Vec::new();
        for (e, o) in subs {
            enc.extend(e);
            ord.extend(o);
        }
        pendant_enc.push(enc);
        pendant_order.push(ord);
    }

    // Dense initial colours for the core, ordered by (own colour, pendant
    // forest encoding) so they are label-independent.
    let mut keys: Vec<&Vec<u32>> = pendant_enc.iter().collect();
    keys.sort();
    keys.dedup();
    let init_colors: Vec<u32> = pendant_enc
        .iter()
        .map(|e| keys.binary_search(&e).unwrap() as u32)
        .collect();

    let core_adj: Vec<Vec<usize>> = core
        .iter()
        .map(|&v| {
            let mut nb: Vec<usize> = adj[v]
                .iter()
                .filter(|&&w| in_core[w])
                .map(|&w| core.binary_search(&w).unwrap())
                .collect();
            nb.sort_unstable();
            nb
        })
        .collect();

    let core_order = ir_canonical_order(&core_adj, &init_colors);

    let mut order = Vec::with_capacity(verts.len());
    for idx in core_order {
        order.push(core[idx]);
        order.extend(&pendant_order[idx]);
    }
    order
}

/// Individualisation-refinement canonical order of a coloured graph given by
/// local adjacency. Full backtracking over the first non-singleton cell;
/// among all discrete partitions reached, the one with the smallest
/// component encoding wins.
fn ir_canonical_order(adj: &[Vec<usize>], colors: &[u32]) -> Vec<usize> {
    let n = adj.len();
    // Initial ordered partition: cells grouped by colour value.
    let mut by_color: Vec<(u32, usize)> = colors.iter().copied().zip(0..n).collect();
    by_color.sort_unstable();
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for (c, v) in by_color {
        match cells.last_mut() {
            Some(cell) if colors[cell[0]] == c => cell.push(v),
            _ => cells.push(vec![v]),
        }
    }

    let local_colors: Vec<u32> = (0..n).map(|v| colors[v]).collect();
    let mut best: Option<(Vec<u32>, Vec<usize>)> = None;
    search(&refine(cells, adj), adj, &local_colors, &mut best);
    best.expect("search visits at least one leaf").1
}

/// Equitable refinement. Cell order is derived from (old cell index, sorted
/// neighbour-cell multiset), so it is isomorphism-invariant.
fn refine(mut cells: Vec<Vec<usize>>, adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    loop {
        let mut cell_of = vec![0usize; n];
        for (i, cell) in cells.iter().enumerate() {
            for &v in cell {
                cell_of[v] = i;
            }
        }
        let mut sigs: Vec<(Vec<usize>, usize)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = adj[v].iter().map(|&w| cell_of[w]).collect();
                nb.sort_unstable();
                let mut sig = Vec::with_capacity(nb.len() + 1);
                sig.push(cell_of[v]);
                sig.extend(nb);
                (sig, v)
            })
            .collect();
        sigs.sort();
        let mut next: Vec<Vec<usize>> = Vec::with_capacity(cells.len());
        let mut prev: Option<&[usize]> = None;
        for (sig, v) in &sigs {
            if prev != Some(sig.as_slice()) {
                next.push(Vec::new());
            }
            next.last_mut().unwrap().push(*v);
            prev = Some(sig.as_slice());
        }
        if next.len() == cells.len() {
            return next;
        }
        cells = next;
    }
}

fn search(
    cells: &[Vec<usize>],
    adj: &[Vec<usize>],
    colors: &[u32],
    best: &mut Option<(Vec<u32>, Vec<usize>)>,
) {
    if let Some(target) = cells.iter().position(|c| c.len() > 1) {
        for &v in &cells[target] {
            let mut split: Vec<Vec<usize>> = Vec::with_capacity(cells.len() + 1);
            for (i, cell) in cells.iter().enumerate() {
                if i == target {
                    split.push(vec![v]);
                    split.push(cell.iter().copied().filter(|&w| w != v).collect());
                } else {
                    split.push(cell.clone());
                }
            }
            search(&refine(split, adj), adj, colors, best);
        }
        return;
    }
    let order: Vec<usize> = cells.iter().map(|c| c[0]).collect();
    let enc = encode_ordered(&order, adj, colors);
    if best.as_ref().map_or(true, |(b, _)| enc < *b) {
        *best = Some((enc, order));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{edge_neighborhood, AnchoredSubgraph, RegularGraph};

    fn sub(n: u32, edges: &[(u32, u32)], anchor: (u32, u32)) -> AnchoredSubgraph {
        AnchoredSubgraph::new(n, edges.to_vec(), anchor, Vec::new())
    }

    #[test]
    fn path_mirror_is_isomorphic() {
        // P4 anchored at either end edge: same class. Anchored at the middle
        // edge: different class.
        let end_a = sub(4, &[(0, 1), (1, 2), (2, 3)], (0, 1));
        let end_b = sub(4, &[(0, 1), (1, 2), (2, 3)], (2, 3));
        let mid = sub(4, &[(0, 1), (1, 2), (2, 3)], (1, 2));
        assert_eq!(canonical_key(&end_a).unwrap().key, canonical_key(&end_b).unwrap().key);
        assert_ne!(canonical_key(&end_a).unwrap().key, canonical_key(&mid).unwrap().key);
    }

    #[test]
    fn anchor_placement_on_cycle() {
        // On C5 every edge is equivalent.
        let c5: Vec<(u32, u32)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        let k0 = canonical_key(&sub(5, &c5, (0, 1))).unwrap().key;
        for i in 1..5u32 {
            let k = canonical_key(&sub(5, &c5, (i, (i + 1) % 5))).unwrap().key;
            assert_eq!(k0, k);
        }
    }

    #[test]
    fn triangle_with_tail_depends_on_anchor() {
        // Triangle 0-1-2 plus pendant 3 on vertex 0.
        let edges = [(0, 1), (1, 2), (0, 2), (0, 3)];
        let in_triangle_far = canonical_key(&sub(4, &edges, (1, 2))).unwrap().key;
        let in_triangle_near = canonical_key(&sub(4, &edges, (0, 1))).unwrap().key;
        let on_tail = canonical_key(&sub(4, &edges, (0, 3))).unwrap().key;
        assert_ne!(in_triangle_far, in_triangle_near);
        assert_ne!(in_triangle_near, on_tail);
        assert_ne!(in_triangle_far, on_tail);
    }

    #[test]
    fn disconnected_components_sorted() {
        // Two triangles, marked vertex in the second component; component
        // discovery order must not leak into the key.
        let a = canonical_form_colored(
            6,
            &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)],
            &[1, 0, 0, 0, 0, 0],
            DEFAULT_CANON_CAP,
        )
        .unwrap();
        let b = canonical_form_colored(
            6,
            &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)],
            &[0, 0, 0, 1, 0, 0],
            DEFAULT_CANON_CAP,
        )
        .unwrap();
        assert_eq!(a.key, b.key);
    }

    #[test]
    fn c6_differs_from_two_triangles() {
        let c6: Vec<(u32, u32)> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        let tri2 = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)];
        let zeros = vec![0u32; 6];
        assert_ne!(
            canonical_form_colored(6, &c6, &zeros, DEFAULT_CANON_CAP).unwrap().key,
            canonical_form_colored(6, &tri2, &zeros, DEFAULT_CANON_CAP).unwrap().key
        );
    }

    #[test]
    fn relabeling_invariance_on_balls() {
        // Canonical rep must be identical no matter how the input subgraph
        // was labelled.
        let g = crate::graph::generate_regular(36, 3, 101).unwrap();
        let base = edge_neighborhood(&g, g.edges()[0], 2);
        let n = base.n();
        // Deterministic scrambles.
        for shift in 1..5 {
            let perm: Vec<u32> = (0..n).map(|v| (v * 7 + shift) % n).collect();
            // 7 coprime with any n we see here; ensure it's a bijection.
            let mut seen = vec![false; n as usize];
            if perm.iter().any(|&p| std::mem::replace(&mut seen[p as usize], true)) {
                continue;
            }
            let scrambled = base.relabel(&perm);
            let cf_a = canonical_key(&base).unwrap();
            let cf_b = canonical_key(&scrambled).unwrap();
            assert_eq!(cf_a.key, cf_b.key);
            let rep_a = base.relabel(&cf_a.perm);
            let rep_b = scrambled.relabel(&cf_b.perm);
            assert_eq!(rep_a.edges(), rep_b.edges());
            assert_eq!(rep_a.anchor(), rep_b.anchor());
        }
    }

    #[test]
    fn petersen_edges_form_one_class() {
        // The Petersen graph is edge-transitive: all 15 radius-1 anchored
        // balls are one class.
        let mut edges = Vec::new();
        for i in 0..5u32 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, 5 + (i + 2) % 5));
        }
        let g = RegularGraph::from_edges(10, 3, edges).unwrap();
        let mut keys: Vec<Vec<u8>> = g
            .edges()
            .iter()
            .map(|&e| canonical_key(&edge_neighborhood(&g, e, 1)).unwrap().key)
            .collect();
        keys.dedup();
        assert_eq!(keys.len(), 1);
    }

    #[test]
    fn size_cap_refuses_large_subgraphs() {
        let path: Vec<(u32, u32)> = (0..9).map(|i| (i, i + 1)).collect();
        let big = sub(10, &path, (0, 1));
        let err = canonical_key_capped(&big, 8).unwrap_err();
        assert!(err.is_capacity());
        assert!(canonical_key_capped(&big, 10).is_ok());
    }

    #[test]
    fn perm_is_a_bijection_onto_canonical_labels() {
        let g = crate::graph::generate_regular(20, 3, 77).unwrap();
        let ball = edge_neighborhood(&g, g.edges()[3], 2);
        let cf = canonical_key(&ball).unwrap();
        let mut seen = vec![false; ball.n() as usize];
        for &p in &cf.perm {
            assert!(!seen[p as usize]);
            seen[p as usize] = true;
        }
    }
}
