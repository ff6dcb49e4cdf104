//! Brute-force references shared by the integration tests. Nothing here calls
//! the library's solvers: cut values come from direct edge counting.

#![allow(dead_code)]

use cutquery::graph::PerturbationScheme;
use cutquery::{Graph, Scaled};

pub fn members(mask: usize, n: usize) -> Vec<usize> {
    (0..n).filter(|&v| mask >> v & 1 == 1).collect()
}

pub fn mask_of(vertices: &[usize]) -> usize {
    vertices.iter().fold(0, |m, &v| m | 1 << v)
}

pub fn side_of(mask: usize, n: usize) -> Vec<bool> {
    (0..n).map(|v| mask >> v & 1 == 1).collect()
}

/// Cut size of every vertex subset, indexed by bitmask.
pub struct CutTable {
    pub n: usize,
    sizes: Vec<u32>,
}

impl CutTable {
    pub fn new(g: &Graph) -> Self {
        let n = g.n();
        assert!(n <= 20, "exhaustive tables need n <= 20");
        let sizes = (0..1usize << n)
            .map(|mask| g.edges().iter().filter(|&&(u, v)| (mask >> u & 1) != (mask >> v & 1)).count() as u32)
            .collect();
        Self { n, sizes }
    }

    pub fn size(&self, mask: usize) -> u32 {
        self.sizes[mask]
    }

    /// Proper subsets containing `s`, each bipartition once when `s = 0`.
    pub fn sides_with(&self, s: usize) -> impl Iterator<Item = usize> + '_ {
        let full = (1usize << self.n) - 1;
        (1..full).filter(move |m| m >> s & 1 == 1)
    }

    pub fn min_st(&self, s: usize, t: usize) -> u32 {
        self.sides_with(s).filter(|m| m >> t & 1 == 0).map(|m| self.sizes[m]).min().unwrap()
    }

    pub fn all_pairs(&self) -> Vec<Vec<u32>> {
        let n = self.n;
        let mut best = vec![vec![u32::MAX; n]; n];
        for mask in 1..(1usize << n) - 1 {
            let c = self.sizes[mask];
            for s in (0..n).filter(|&s| mask >> s & 1 == 1) {
                for t in (0..n).filter(|&t| mask >> t & 1 == 0) {
                    if c < best[s][t] {
                        best[s][t] = c;
                        best[t][s] = c;
                    }
                }
            }
        }
        for (v, row) in best.iter_mut().enumerate() {
            row[v] = 0;
        }
        best
    }

    /// Minimum cut with `v` inside and every other terminal outside.
    pub fn isolating(&self, v: usize, terminals: &[usize]) -> u32 {
        let others = mask_of(terminals) & !(1 << v);
        self.sides_with(v).filter(|m| m & others == 0).map(|m| self.sizes[m]).min().unwrap()
    }
}

/// Perturbation of a side, summed pair by pair.
pub fn perturbation(scheme: &PerturbationScheme, mask: usize, n: usize) -> Scaled {
    let mut total = 0;
    for u in 0..n {
        for v in u + 1..n {
            if (mask >> u & 1) != (mask >> v & 1) {
                total += scheme.weight(u, v);
            }
        }
    }
    total
}

/// Unit-capacity augmenting paths: the maximum number of edge-disjoint `s`-`t` paths.
pub fn edge_connectivity(g: &Graph, s: usize, t: usize) -> usize {
    let n = g.n();
    let mut cap = vec![vec![0i32; n]; n];
    for &(u, v) in g.edges() {
        cap[u][v] += 1;
        cap[v][u] += 1;
    }
    let mut flow = 0;
    loop {
        let mut prev = vec![usize::MAX; n];
        prev[s] = s;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for y in 0..n {
                if cap[x][y] > 0 && prev[y] == usize::MAX {
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        if prev[t] == usize::MAX {
            return flow;
        }
        let mut y = t;
        while y != s {
            let x = prev[y];
            cap[x][y] -= 1;
            cap[y][x] += 1;
            y = x;
        }
        flow += 1;
    }
}

pub fn median(values: &mut [u64]) -> f64 {
    values.sort_unstable();
    let k = values.len();
    if k % 2 == 1 {
        values[k / 2] as f64
    } else {
        (values[k / 2 - 1] + values[k / 2]) as f64 / 2.0
    }
}
