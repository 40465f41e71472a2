use crate::error::{Error, Result};
use crate::graph::RegularGraph;

/// Longest cycle length `count_cycles` will enumerate. The walk count grows
/// roughly as (d-1)^l per vertex, so this stays deliberately small.
pub const CYCLE_LEN_CAP: u32 = 12;

/// Exact simple-cycle counts by length.
///
/// Returns `counts` where `counts[l]` is the number of simple cycles of
/// length `l`, for `l` in `0..=lmax` (entries below 3 are zero). Each cycle
/// is enumerated exactly once: paths grow only through vertices larger than
/// the start, and orientation is fixed by requiring the second vertex of the
/// walk to be smaller than the last. Cost is exponential in `lmax` but flat
/// in n for bounded-degree graphs, which is the regime this is for;
/// `lmax` beyond [`CYCLE_LEN_CAP`] is refused.
pub fn count_cycles(g: &RegularGraph, lmax: u32) -> Result<Vec<u64>> {
    if lmax > CYCLE_LEN_CAP {
        return Err(Error::CycleLengthExceeded { len: lmax, cap: CYCLE_LEN_CAP });
    }
    let mut counts = vec![0u64; lmax as usize + 1];
    if lmax < 3 {
        return Ok(counts);
    }
    let mut path = Vec::with_capacity(lmax as usize);
    let mut on_path = vec![false; g.n() as usize];
    for s in 0..g.n() {
        path.push(s);
        on_path[s as usize] = true;
        extend(g, s, s, lmax, &mut path, &mut on_path, &mut counts);
        on_path[s as usize] = false;
        path.pop();
    }
    Ok(counts)
}

fn extend(
    g: &RegularGraph,
    start: u32,
    v: u32,
    lmax: u32,
    path: &mut Vec<u32>,
    on_path: &mut [bool],
    counts: &mut [u64],
) {
    for &w in g.neighbors(v) {
        if w == start && path.len() >= 3 {
            // Count each cycle once, not once per direction.
            if path[1] < path[path.len() - 1] {
                counts[path.len()] += 1;
            }
            continue;
        }
        if w <= start || on_path[w as usize] || path.len() as u32 == lmax {
            continue;
        }
        path.push(w);
        on_path[w as usize] = true;
        extend(g, start, w, lmax, path, on_path, counts);
        on_path[w as usize] = false;
        path.pop();
    }
}

/// Length of the shortest cycle, or None for a forest.
///
/// BFS from every vertex; a non-tree edge (x, y) seen from root r witnesses
/// a cycle of length dist(x) + dist(y) + 1, and scanning all roots makes the
/// minimum exact.
pub fn girth(g: &RegularGraph) -> Option<u32> {
    let mut best = u32::MAX;
    let n = g.n() as usize;
    let mut dist = vec![u32::MAX; n];
    let mut parent = vec![u32::MAX; n];
    for r in 0..g.n() {
        dist.iter_mut().for_each(|d| *d = u32::MAX);
        parent.iter_mut().for_each(|p| *p = u32::MAX);
        let mut queue = std::collections::VecDeque::new();
        dist[r as usize] = 0;
        queue.push_back(r);
        while let Some(v) = queue.pop_front() {
            if 2 * dist[v as usize] >= best {
                break;
            }
            for &w in g.neighbors(v) {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = dist[v as usize] + 1;
                    parent[w as usize] = v;
                    queue.push_back(w);
                } else if parent[v as usize] != w && parent[w as usize] != v {
                    // Cross or back edge: cycle through r of this length or
                    // shorter exists; the scan over all roots tightens it.
                    let l = dist[v as usize] + dist[w as usize] + 1;
                    if l < best {
                        best = l;
                    }
                }
            }
        }
    }
    (best != u32::MAX).then_some(best)
}
