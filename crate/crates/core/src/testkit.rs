//! Independent reference computations for unit tests.

use crate::graph::{Scaled, WeightedGraph};

/// Every subset (as a bitmask) containing all of `inside` and none of `outside`,
/// with its cut weight.
pub fn enumerate_cuts(g: &WeightedGraph, inside: &[usize], outside: &[usize]) -> Vec<(u32, Scaled)> {
    let n = g.n();
    assert!(n <= 20);
    let need: u32 = inside.iter().map(|&v| 1 << v).sum();
    let forbid: u32 = outside.iter().map(|&v| 1 << v).sum();
    let edges: Vec<(usize, usize, Scaled)> = g.edges().collect();
    (0u32..1 << n)
        .filter(|&m| m & need == need && m & forbid == 0)
        .map(|m| {
            let w = edges.iter().filter(|&&(u, v, _)| (m >> u & 1) != (m >> v & 1)).map(|e| e.2).sum();
            (m, w)
        })
        .collect()
}

/// Minimum value and all minimizers over cuts with `inside` in and `outside` out.
pub fn brute_min_cut(g: &WeightedGraph, inside: &[usize], outside: &[usize]) -> (Scaled, Vec<u32>) {
    let cuts = enumerate_cuts(g, inside, outside);
    let best = cuts.iter().map(|c| c.1).min().expect("some cut exists");
    (best, cuts.into_iter().filter(|c| c.1 == best).map(|c| c.0).collect())
}

pub fn mask_members(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&v| mask >> v & 1 == 1).collect()
}

/// Edmonds-Karp on a dense capacity matrix.
pub fn augmenting_path_flow(g: &WeightedGraph, s: usize, t: usize) -> Scaled {
    let n = g.n();
    let mut cap = vec![vec![0 as Scaled; n]; n];
    for (u, v, w) in g.edges() {
        cap[u][v] += w;
        cap[v][u] += w;
    }
    let mut flow = 0;
    loop {
        let mut prev = vec![usize::MAX; n];
        prev[s] = s;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if prev[v] == usize::MAX && cap[u][v] > 0 {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if prev[t] == usize::MAX {
            return flow;
        }
        let mut bottleneck = Scaled::MAX;
        let mut v = t;
        while v != s {
            bottleneck = bottleneck.min(cap[prev[v]][v]);
            v = prev[v];
        }
        let mut v = t;
        while v != s {
            cap[prev[v]][v] -= bottleneck;
            cap[v][prev[v]] += bottleneck;
            v = prev[v];
        }
        flow += bottleneck;
    }
}
