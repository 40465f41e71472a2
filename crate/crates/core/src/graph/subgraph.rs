use std::collections::VecDeque;

use crate::graph::RegularGraph;

/// Induced subgraph with a distinguished edge, carrying the map back to the
/// host graph. Local vertex ids are BFS order from the anchor pair, so
/// construction is deterministic; identity of the class is decided by
/// [`canonical_key`](super::canonical_key), not by these labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnchoredSubgraph {
    n: u32,
    edges: Vec<(u32, u32)>,
    anchor: (u32, u32),
    /// local id -> host vertex; empty when the subgraph is synthetic
    /// (e.g. a canonical representative or a hand-built tree).
    vertices: Vec<u32>,
}

impl AnchoredSubgraph {
    pub fn new(n: u32, mut edges: Vec<(u32, u32)>, anchor: (u32, u32), vertices: Vec<u32>) -> Self {
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
            debug_assert!(e.1 < n);
        }
        edges.sort_unstable();
        edges.dedup();
        let anchor = if anchor.0 <= anchor.1 {
            anchor
        } else {
            (anchor.1, anchor.0)
        };
        debug_assert!(vertices.is_empty() || vertices.len() == n as usize);
        AnchoredSubgraph {
            n,
            edges,
            anchor,
            vertices,
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn anchor(&self) -> (u32, u32) {
        self.anchor
    }

    pub fn host_vertices(&self) -> &[u32] {
        &self.vertices
    }

    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.n as usize];
        for &(u, v) in &self.edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for nb in adj.iter_mut() {
            nb.sort_unstable();
        }
        adj
    }

    /// BFS distances inside the subgraph from an arbitrary seed set.
    pub fn distances_from(&self, seeds: &[u32]) -> Vec<u32> {
        let adj = self.adjacency();
        let mut dist = vec![u32::MAX; self.n as usize];
        let mut queue = VecDeque::new();
        for &s in seeds {
            if dist[s as usize] == u32::MAX {
                dist[s as usize] = 0;
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            let dv = dist[v as usize];
            for &w in &adj[v as usize] {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = dv + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Independent cycles: m - n + number of components. Zero iff a forest.
    pub fn cyclomatic(&self) -> u32 {
        let mut comps = 0u32;
        let adj = self.adjacency();
        let mut seen = vec![false; self.n as usize];
        for s in 0..self.n as usize {
            if seen[s] {
                continue;
            }
            comps += 1;
            let mut stack = vec![s as u32];
            seen[s] = true;
            while let Some(v) = stack.pop() {
                for &w in &adj[v as usize] {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        stack.push(w);
                    }
                }
            }
        }
        self.edges.len() as u32 + comps - self.n
    }

    pub fn is_forest(&self) -> bool {
        self.cyclomatic() == 0
    }

    /// Apply a relabelling `perm[old] = new`, keeping the host map aligned.
    pub fn relabel(&self, perm: &[u32]) -> AnchoredSubgraph {
        assert_eq!(perm.len(), self.n as usize);
        let edges = self
            .edges
            .iter()
            .map(|&(u, v)| (perm[u as usize], perm[v as usize]))
            .collect();
        let anchor = (perm[self.anchor.0 as usize], perm[self.anchor.1 as usize]);
        let mut vertices = Vec::new();
        if !self.vertices.is_empty() {
            vertices = vec![0; self.n as usize];
            for (old, &host) in self.vertices.iter().enumerate() {
                vertices[perm[old] as usize] = host;
            }
        }
        AnchoredSubgraph::new(self.n, edges, anchor, vertices)
    }
}

/// Induced subgraph on the radius-p ball around an edge.
///
/// At depth p the QAOA value of the anchored edge depends on exactly this
/// ball: every gate outside it commutes through the observable and cancels
/// between bra and ket. Panics if `(u, v)` is not an edge of `g`.
pub fn edge_neighborhood(g: &RegularGraph, edge: (u32, u32), p: u32) -> AnchoredSubgraph {
    assert!(
        g.has_edge(edge.0.min(edge.1), edge.0.max(edge.1)),
        "({}, {}) is not an edge",
        edge.0,
        edge.1
    );
    let dist = g.distances_from(&[edge.0, edge.1]);

    // Local ids in BFS order from the anchor pair.
    let mut local = vec![u32::MAX; g.n() as usize];
    let mut vertices = Vec::new();
    let mut queue = VecDeque::new();
    for s in [edge.0, edge.1] {
        local[s as usize] = vertices.len() as u32;
        vertices.push(s);
        queue.push_back(s);
    }
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            if dist[w as usize] <= p && local[w as usize] == u32::MAX {
                local[w as usize] = vertices.len() as u32;
                vertices.push(w);
                queue.push_back(w);
            }
        }
    }

    let mut edges = Vec::new();
    for &host in &vertices {
        for &w in g.neighbors(host) {
            if host < w && local[w as usize] != u32::MAX {
                edges.push((local[host as usize], local[w as usize]));
            }
        }
    }
    AnchoredSubgraph::new(vertices.len() as u32, edges, (0, 1), vertices)
}

/// Induced subgraph on the union of radius-p balls around a vertex set,
/// anchored synthetically at the first two marked vertices. Used for
/// multi-point correlators where the support is a vertex set, not an edge.
pub fn set_neighborhood(g: &RegularGraph, targets: &[u32], p: u32) -> (AnchoredSubgraph, Vec<u32>) {
    assert!(!targets.is_empty());
    let dist = g.distances_from(targets);

    let mut local = vec![u32::MAX; g.n() as usize];
    let mut vertices = Vec::new();
    let mut queue = VecDeque::new();
    for &s in targets {
        if local[s as usize] == u32::MAX {
            local[s as usize] = vertices.len() as u32;
            vertices.push(s);
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            if dist[w as usize] <= p && local[w as usize] == u32::MAX {
                local[w as usize] = vertices.len() as u32;
                vertices.push(w);
                queue.push_back(w);
            }
        }
    }

    let mut edges = Vec::new();
    for &host in &vertices {
        for &w in g.neighbors(host) {
            if host < w && local[w as usize] != u32::MAX {
                edges.push((local[host as usize], local[w as usize]));
            }
        }
    }
    let local_targets: Vec<u32> = targets
        .iter()
        .map(|&t| local[t as usize])
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let anchor = if local_targets.len() >= 2 {
        (local_targets[0], local_targets[1])
    } else {
        (local_targets[0], local_targets[0])
    };
    (
        AnchoredSubgraph::new(vertices.len() as u32, edges, anchor, vertices),
        local_targets,
    )
}

/// The anchored tree every edge of a d-regular graph sees at radius p when
/// the girth exceeds 2p + 1: both anchor endpoints grow d - 1 fresh
/// children per level, p levels deep.
pub fn anchored_regular_tree(d: u32, p: u32) -> AnchoredSubgraph {
    assert!(d >= 1);
    let mut edges = vec![(0u32, 1u32)];
    let mut frontier = vec![0u32, 1];
    let mut next = 2u32;
    for _ in 0..p {
        let mut grown = Vec::with_capacity(frontier.len() * (d as usize - 1));
        for &v in &frontier {
            for _ in 0..d - 1 {
                edges.push((v, next));
                grown.push(next);
                next += 1;
            }
        }
        frontier = grown;
    }
    AnchoredSubgraph::new(next, edges, (0, 1), Vec::new())
}

/// The radius-p ball around an edge that lies on exactly one cycle, of
/// length l, in an otherwise tree-like d-regular graph: the next-most-common
/// edge class after the pure tree in the sparse random ensemble.
///
/// Cycle vertices beyond distance p from the anchor pair are cut off, so for
/// l > 2p + 2 the cycle is invisible and the result coincides with the tree
/// ball.
pub fn anchored_single_cycle(d: u32, p: u32, l: u32) -> AnchoredSubgraph {
    assert!(l >= 3, "cycles start at length 3");
    assert!(d >= 2);
    // Distance of cycle vertex j from the anchor pair {0, 1}.
    let cyc_dist = |j: u32| if j == 0 { 0 } else { (j - 1).min(l - j) };

    let mut local = vec![u32::MAX; l as usize];
    let mut dist = Vec::new();
    let mut degree = Vec::new();
    for j in 0..l {
        if cyc_dist(j) <= p {
            local[j as usize] = dist.len() as u32;
            dist.push(cyc_dist(j));
            degree.push(0u32);
        }
    }
    let mut edges = Vec::new();
    for j in 0..l {
        let k = (j + 1) % l;
        let (a, b) = (local[j as usize], local[k as usize]);
        if a != u32::MAX && b != u32::MAX {
            edges.push((a, b));
            degree[a as usize] += 1;
            degree[b as usize] += 1;
        }
    }

    // Pad interior vertices to degree d with fresh tree children.
    let mut queue: VecDeque<u32> = (0..dist.len() as u32).collect();
    while let Some(v) = queue.pop_front() {
        if dist[v as usize] >= p {
            continue;
        }
        for _ in degree[v as usize]..d {
            let child = dist.len() as u32;
            dist.push(dist[v as usize] + 1);
            degree.push(1);
            degree[v as usize] += 1;
            edges.push((v, child));
            queue.push_back(child);
        }
    }
    AnchoredSubgraph::new(dist.len() as u32, edges, (0, 1), Vec::new())
}
