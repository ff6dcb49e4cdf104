//! Explicit graphs, exact scaled-integer weights, contraction and perturbation.
//!
//! Weights of explicit graphs are integers in units of `1/D`, where
//! `D = n_base^10` for a hidden graph on `n_base` vertices. One unweighted edge
//! therefore weighs `D`, and the perturbation of any cut stays strictly below
//! one edge.

mod contraction;
mod generate;
mod io;
mod perturbation;
mod ratio;

pub use contraction::{contract, ContractionMap};
pub use generate::{generate, Family};
pub use io::{parse_graph, parse_weighted, write_graph, write_weighted};
pub use perturbation::{perturb, perturbation_cut_weight, PerturbationScheme};
pub use ratio::{cmp_products, Sparsity};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact weight in units of `1/D`.
pub type Scaled = i128;

/// Largest base vertex count for which `n^10`-scaled cut values fit in `i128`.
pub const MAX_BASE_N: usize = 1024;

/// `D = n^10`, the number of scaled units in one unweighted edge.
pub fn scale_for(n_base: usize) -> Result<Scaled> {
    if n_base == 0 || n_base > MAX_BASE_N {
        return Err(Error::InvalidParameter(format!(
            "base vertex count {n_base} outside 1..={MAX_BASE_N}"
        )));
    }
    Ok((n_base as Scaled).pow(10))
}

#[inline]
pub(crate) fn ordered(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Simple unweighted graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut list = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u},{v}) out of range for n={n}")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {u}")));
            }
            list.push(ordered(u, v));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!("duplicate edge {:?}", w[0])));
        }
        Ok(Self { n, edges: list })
    }

    pub fn empty(n: usize) -> Self {
        Self { n, edges: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges as sorted `(u, v)` pairs with `u < v`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&ordered(u, v)).is_ok()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Number of edges with exactly one endpoint inside `side`.
    pub fn cut_size(&self, side: &[bool]) -> usize {
        self.edges.iter().filter(|&&(u, v)| side[u] != side[v]).count()
    }

    /// `|E(A, B)|` for disjoint masks.
    pub fn cross_count(&self, a: &[bool], b: &[bool]) -> usize {
        self.edges
            .iter()
            .filter(|&&(u, v)| (a[u] && b[v]) || (a[v] && b[u]))
            .count()
    }

    pub fn to_weighted(&self, unit: Scaled) -> WeightedGraph {
        let mut g = WeightedGraph::new(self.n, unit);
        for &(u, v) in &self.edges {
            g.edges.insert((u, v), unit);
        }
        g
    }
}

/// Graph with positive scaled-integer edge weights; parallel edges are merged.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedGraph {
    n: usize,
    /// Scaled value of one unweighted edge.
    unit: Scaled,
    edges: BTreeMap<(usize, usize), Scaled>,
}

impl WeightedGraph {
    pub fn new(n: usize, unit: Scaled) -> Self {
        Self { n, unit, edges: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn unit(&self) -> Scaled {
        self.unit
    }

    /// Adds `w` to the weight of `{u, v}`.
    pub fn add_edge(&mut self, u: usize, v: usize, w: Scaled) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::InvalidGraph(format!("edge ({u},{v}) out of range for n={}", self.n)));
        }
        if u == v {
            return Err(Error::InvalidGraph(format!("self-loop at {u}")));
        }
        if w <= 0 {
            return Err(Error::InvalidGraph(format!("non-positive weight {w} on ({u},{v})")));
        }
        *self.edges.entry(ordered(u, v)).or_insert(0) += w;
        Ok(())
    }

    pub fn weight(&self, u: usize, v: usize) -> Scaled {
        self.edges.get(&ordered(u, v)).copied().unwrap_or(0)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Scaled)> + '_ {
        self.edges.iter().map(|(&(u, v), &w)| (u, v, w))
    }

    pub fn total_weight(&self) -> Scaled {
        self.edges.values().sum()
    }

    pub fn max_weight(&self) -> Scaled {
        self.edges.values().copied().max().unwrap_or(0)
    }

    pub fn adjacency(&self) -> Vec<Vec<(usize, Scaled)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (&(u, v), &w) in &self.edges {
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        adj
    }

    pub fn weighted_degrees(&self) -> Vec<Scaled> {
        let mut deg = vec![0; self.n];
        for (&(u, v), &w) in &self.edges {
            deg[u] += w;
            deg[v] += w;
        }
        deg
    }

    pub fn cut_weight(&self, side: &[bool]) -> Scaled {
        self.edges
            .iter()
            .filter(|(&(u, v), _)| side[u] != side[v])
            .map(|(_, &w)| w)
            .sum()
    }

    pub fn cross_weight(&self, a: &[bool], b: &[bool]) -> Scaled {
        self.edges
            .iter()
            .filter(|(&(u, v), _)| (a[u] && b[v]) || (a[v] && b[u]))
            .map(|(_, &w)| w)
            .sum()
    }

    /// Subgraph induced by `vertices`; vertex `i` of the result is `vertices[i]`.
    pub fn induced(&self, vertices: &[usize]) -> WeightedGraph {
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut g = WeightedGraph::new(vertices.len(), self.unit);
        for (&(u, v), &w) in &self.edges {
            if local[u] != usize::MAX && local[v] != usize::MAX {
                g.edges.insert(ordered(local[u], local[v]), w);
            }
        }
        g
    }

    /// Drops edge weights back to an unweighted graph, keeping every present pair.
    pub fn support(&self) -> Graph {
        Graph { n: self.n, edges: self.edges.keys().copied().collect() }
    }
}

/// A vertex subset, kept sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CutSet(Vec<usize>);

impl CutSet {
    pub fn new(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        Self(members)
    }

    pub fn from_mask(mask: &[bool]) -> Self {
        Self(mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect())
    }

    pub fn singleton(v: usize) -> Self {
        Self(vec![v])
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &v in &self.0 {
            m[v] = true;
        }
        m
    }

    pub fn complement(&self, n: usize) -> CutSet {
        let mask = self.mask(n);
        Self((0..n).filter(|&v| !mask[v]).collect())
    }

    /// True when the set is empty or covers all `n` vertices.
    pub fn is_trivial(&self, n: usize) -> bool {
        self.0.is_empty() || self.0.len() >= n
    }

    pub fn intersection_len(&self, other: &[usize]) -> usize {
        other.iter().filter(|&&v| self.contains(v)).count()
    }
}

impl FromIterator<usize> for CutSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_edges() {
        assert!(matches!(Graph::new(3, [(0, 0)]), Err(Error::InvalidGraph(_))));
        assert!(matches!(Graph::new(3, [(0, 3)]), Err(Error::InvalidGraph(_))));
        assert!(matches!(Graph::new(3, [(0, 1), (1, 0)]), Err(Error::InvalidGraph(_))));
    }

    #[test]
    fn cut_of_path_middle() {
        let g = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(g.cut_size(&[false, true, false]), 2);
        assert_eq!(g.cross_count(&[true, false, false], &[false, false, true]), 0);
    }

    #[test]
    fn scale_guard() {
        assert_eq!(scale_for(2).unwrap(), 1024);
        assert!(scale_for(1025).is_err());
        // 1024^10 = 2^100 leaves headroom for n^2 edges of that weight
        assert_eq!(scale_for(1024).unwrap(), 1 << 100);
    }

    #[test]
    fn cutset_normalizes() {
        let s = CutSet::new(vec![3, 1, 3]);
        assert_eq!(s.members(), &[1, 3]);
        assert_eq!(s.complement(4).members(), &[0, 2]);
        assert!(CutSet::new(vec![]).is_trivial(4));
        assert!(CutSet::new(vec![0, 1, 2, 3]).is_trivial(4));
    }
}
