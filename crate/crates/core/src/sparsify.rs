//! Nagamochi-Ibaraki forest packings and cut sparsifiers built through the oracle.

use std::collections::HashMap;

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CutSet, Scaled, WeightedGraph};
use crate::oracle::{ceil_log2, CutOracle, Multiedge};
use crate::seed::Seed;

/// Disjoint union-find over `0..n`.
#[derive(Debug, Clone)]
pub struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; false if they were already together.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }

}

/// `k` successive maximal spanning forests; their union keeps every cut value up to `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NiSparsifier {
    pub k: usize,
    pub n: usize,
    /// Forest `j` as `(u, v)` pairs with `u < v`; a pair may recur in later
    /// forests when the view has parallel edges.
    pub forests: Vec<Vec<(usize, usize)>>,
}

impl NiSparsifier {
    /// Union of the forests with multiplicities.
    pub fn edges(&self) -> Vec<Multiedge> {
        let mut count: HashMap<(usize, usize), i64> = HashMap::new();
        for f in &self.forests {
            for &e in f {
                *count.entry(e).or_insert(0) += 1;
            }
        }
        let mut out: Vec<Multiedge> = count.into_iter().map(|((u, v), m)| (u, v, m)).collect();
        out.sort_unstable();
        out
    }

    pub fn edge_count(&self) -> usize {
        self.forests.iter().map(Vec::len).sum()
    }

    pub fn graph(&self, unit: Scaled) -> WeightedGraph {
        let mut g = WeightedGraph::new(self.n, unit);
        for (u, v, m) in self.edges() {
            g.add_edge(u, v, Scaled::from(m) * unit).expect("forest edges are proper");
        }
        g
    }
}

fn ceil_log2_f(n: usize) -> f64 {
    (n.max(2) as f64).log2()
}

/// Forest packing of an explicit graph whose weights are multiples of `g.unit()`.
///
/// Uses the same scan order as [`ni_sparsify`], so both produce identical forests.
pub fn ni_from_graph(g: &WeightedGraph, k: usize) -> NiSparsifier {
    let n = g.n();
    let unit = g.unit();
    let mut remaining: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for (u, v, w) in g.edges() {
        let m = (w / unit) as i64;
        remaining[u].push((v, m));
        remaining[v].push((u, m));
    }
    for list in &mut remaining {
        list.sort_unstable();
    }
    let mut forests = Vec::new();
    for _ in 0..k {
        let forest = scan_forest(n, |x, visited| {
            let found: Vec<usize> = remaining[x].iter().filter(|&&(y, m)| m > 0 && !visited[y]).map(|&(y, _)| y).collect();
            Ok(found)
        })
        .expect("offline scan cannot fail");
        if forest.is_empty() {
            break;
        }
        for &(u, v) in &forest {
            for (a, b) in [(u, v), (v, u)] {
                if let Some(e) = remaining[a].iter_mut().find(|e| e.0 == b) {
                    e.1 -= 1;
                }
            }
        }
        forests.push(forest);
    }
    NiSparsifier { k, n, forests }
}

/// Scan-first search: vertices are scanned in discovery order, and scanning `x`
/// attaches every unvisited vertex that `neighbours(x, visited)` reports.
fn scan_forest(
    n: usize,
    mut neighbours: impl FnMut(usize, &[bool]) -> Result<Vec<usize>>,
) -> Result<Vec<(usize, usize)>> {
    let mut visited = vec![false; n];
    let mut forest = Vec::new();
    for root in 0..n {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            let mut found = neighbours(x, &visited)?;
            found.sort_unstable();
            for y in found {
                if !visited[y] {
                    visited[y] = true;
                    forest.push(crate::graph::ordered(x, y));
                    queue.push_back(y);
                }
            }
        }
    }
    Ok(forest)
}

/// Builds a `k`-NI sparsifier of the view.
///
/// After one degree query per vertex, picks whichever of [`ni_by_sampling`]
/// and full recovery followed by [`ni_from_graph`] is expected to be cheaper.
/// Both give the same forests.
pub fn ni_sparsify(o: &CutOracle, k: usize, seed: Seed) -> Result<NiSparsifier> {
    if k == 0 {
        return Err(Error::InvalidParameter("NI sparsifier needs k >= 1".into()));
    }
    let n = o.n();
    let degrees = o.degrees()?;
    let m = degrees.iter().sum::<i64>() as usize / 2;
    let log = ceil_log2(n).max(1) as usize;
    let by_sampling = m.min(k * n.saturating_sub(1)) * (3 + 2 * log) + 3 * k * n;
    let by_recovery = (n * n.saturating_sub(1) / 2 + n).min(6 * (m + 1) * log);
    if o.is_known() || degrees.iter().all(|&d| d as usize <= k) || by_recovery < by_sampling {
        return Ok(ni_from_graph(&o.recover_all()?, k));
    }
    ni_by_sampling(o, k, seed)
}

/// Builds a `k`-NI sparsifier of the view by edge sampling alone.
///
/// Forest `j` grows one component at a time on the view minus earlier forests:
/// while the earliest unscanned vertex `x` of the component has an edge
/// leaving it, a uniformly sampled such edge joins the forest. Vertices that
/// appear this way are scanned in order, which yields scan-first forests.
pub fn ni_by_sampling(o: &CutOracle, k: usize, seed: Seed) -> Result<NiSparsifier> {
    if k == 0 {
        return Err(Error::InvalidParameter("NI sparsifier needs k >= 1".into()));
    }
    let n = o.n();
    let mut rng = seed.rng();
    let mut forests: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut removed: Vec<Multiedge> = Vec::new();
    for _ in 0..k {
        let view = if removed.is_empty() { o.clone() } else { o.view_minus_edges(&removed)? };
        let forest = scan_forest(n, |x, visited| {
            let scanned = CutSet::singleton(x);
            let mut found = Vec::new();
            let mut fresh: Vec<usize> = (0..n).filter(|&y| !visited[y]).collect();
            loop {
                if fresh.is_empty() {
                    return Ok(found);
                }
                let outside = CutSet::new(fresh.clone());
                let count = view.cross_count(&scanned, &outside)?;
                if count == 0 {
                    return Ok(found);
                }
                let (_, y) = view.sample_edge_known(&scanned, &outside, count, &mut rng)?;
                found.push(y);
                fresh.retain(|&z| z != y);
            }
        })?;
        if forest.is_empty() {
            break;
        }
        removed.extend(forest.iter().map(|&(u, v)| (u, v, 1)));
        forests.push(forest);
    }
    Ok(NiSparsifier { k, n, forests })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SparsifyStrategy {
    ReferenceFullRecovery,
    NiPlusUniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutSparsifierConfig {
    pub strategy: SparsifyStrategy,
    /// Forest count multiplier: `k = ⌈c1·ε⁻²·log₂ n⌉`.
    pub c1: f64,
    /// Sampling multiplier: `p = min(1, c2·log₂ n / (ε²·k))`.
    pub c2: f64,
}

impl Default for CutSparsifierConfig {
    fn default() -> Self {
        Self { strategy: SparsifyStrategy::NiPlusUniform, c1: 3.0, c2: 12.0 }
    }
}

impl CutSparsifierConfig {
    /// Forest count and remainder sampling rate for a view of `n` vertices.
    pub fn parameters(&self, n: usize, eps: f64) -> (usize, f64) {
        let log = ceil_log2_f(n);
        let k = ((self.c1 * log / (eps * eps)).ceil() as usize).max(1);
        let p = (self.c2 * log / (eps * eps * k as f64)).min(1.0);
        (k, p)
    }
}

/// Weighted graph approximating every cut of the view within `1 ± eps`.
pub fn cut_sparsify(o: &CutOracle, eps: f64, config: &CutSparsifierConfig, seed: Seed) -> Result<WeightedGraph> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon {eps} outside (0, 1)")));
    }
    let (k, p) = config.parameters(o.n(), eps);
    if config.strategy == SparsifyStrategy::ReferenceFullRecovery || p >= 1.0 {
        return o.recover_all();
    }
    let unit = o.unit();
    let ni = ni_sparsify(o, k, seed.derive("forests"))?;
    let mut out = ni.graph(unit);
    let rest = o.view_minus_edges(&ni.edges())?;
    let remainder_edges = rest.degrees()?.iter().sum::<i64>() / 2;
    if remainder_edges == 0 {
        return Ok(out);
    }
    let mut rng = seed.derive("remainder").rng();
    let draws = Binomial::new(remainder_edges as u64, p)
        .map_err(|e| Error::InvalidParameter(e.to_string()))?
        .sample(&mut rng);
    let weight = (unit as f64 / p).round() as Scaled;
    let mut taken: HashMap<(usize, usize), (i64, Option<i64>)> = HashMap::new();
    let mut accepted = 0;
    let n = o.n();
    while accepted < draws {
        let side: CutSet = (0..n).filter(|_| rng.random_bool(0.5)).collect();
        if side.is_trivial(n) {
            continue;
        }
        let other = side.complement(n);
        let crossing = rest.cross_count(&side, &other)?;
        if crossing == 0 || rng.random_range(0..remainder_edges) >= crossing {
            continue;
        }
        let (u, v) = rest.sample_edge_known(&side, &other, crossing, &mut rng)?;
        let key = crate::graph::ordered(u, v);
        let entry = taken.entry(key).or_insert((0, None));
        if entry.0 > 0 {
            let mult = match entry.1 {
                Some(m) => m,
                None => {
                    let m = rest.cross_count(&CutSet::singleton(u), &CutSet::singleton(v))?;
                    entry.1 = Some(m);
                    m
                }
            };
            if rng.random_range(0..mult) < entry.0 {
                continue;
            }
        }
        entry.0 += 1;
        out.add_edge(key.0, key.1, weight)?;
        accepted += 1;
    }
    Ok(out)
}
