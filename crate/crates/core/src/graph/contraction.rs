use serde::{Deserialize, Serialize};

use super::WeightedGraph;
use crate::error::{Error, Result};

/// Partition of `[0, n)` into super-vertices.
///
/// Blocks are kept sorted internally and ordered by their smallest member,
/// which is also the block's representative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractionMap {
    blocks: Vec<Vec<usize>>,
    #[serde(skip)]
    block_of: Vec<usize>,
}

impl ContractionMap {
    pub fn identity(n: usize) -> Self {
        Self { blocks: (0..n).map(|v| vec![v]).collect(), block_of: (0..n).collect() }
    }

    pub fn from_blocks(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        let mut normalized = Vec::with_capacity(blocks.len());
        for mut b in blocks {
            if b.is_empty() {
                return Err(Error::InvalidContraction("empty block".into()));
            }
            b.sort_unstable();
            for &v in &b {
                if v >= n {
                    return Err(Error::InvalidContraction(format!("vertex {v} out of range for n={n}")));
                }
                if std::mem::replace(&mut seen[v], true) {
                    return Err(Error::InvalidContraction(format!("vertex {v} in two blocks")));
                }
            }
            normalized.push(b);
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(Error::InvalidContraction(format!("vertex {v} not covered")));
        }
        normalized.sort_unstable_by_key(|b| b[0]);
        let mut block_of = vec![0; n];
        for (i, b) in normalized.iter().enumerate() {
            for &v in b {
                block_of[v] = i;
            }
        }
        Ok(Self { blocks: normalized, block_of })
    }

    /// Groups vertices by equal labels.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for (v, &l) in labels.iter().enumerate() {
            groups.entry(l).or_default().push(v);
        }
        Self::from_blocks(labels.len(), groups.into_values().collect())
            .expect("labels always describe a partition")
    }

    /// Rebuilds the vertex index after deserialization.
    pub fn validated(self) -> Result<Self> {
        let n = self.blocks.iter().map(Vec::len).sum();
        Self::from_blocks(n, self.blocks)
    }

    pub fn n(&self) -> usize {
        self.block_of.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, b: usize) -> &[usize] {
        &self.blocks[b]
    }

    pub fn block_of(&self, v: usize) -> usize {
        self.block_of[v]
    }

    pub fn representative(&self, b: usize) -> usize {
        self.blocks[b][0]
    }

    pub fn is_identity(&self) -> bool {
        self.blocks.len() == self.block_of.len()
    }

    /// Union of the given blocks, sorted.
    pub fn expand(&self, block_ids: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = block_ids.iter().flat_map(|&b| self.blocks[b].iter().copied()).collect();
        out.sort_unstable();
        out
    }

    pub fn expand_mask(&self, block_mask: &[bool]) -> Vec<bool> {
        (0..self.n()).map(|v| block_mask[self.block_of[v]]).collect()
    }

    /// Block ids of a base vertex set that is a union of whole blocks, else `None`.
    pub fn lift(&self, base: &[usize]) -> Option<Vec<usize>> {
        let mut mask = vec![false; self.n()];
        for &v in base {
            mask[v] = true;
        }
        let mut ids = Vec::new();
        for (i, b) in self.blocks.iter().enumerate() {
            let inside = b.iter().filter(|&&v| mask[v]).count();
            if inside == b.len() {
                ids.push(i);
            } else if inside != 0 {
                return None;
            }
        }
        Some(ids)
    }

    /// True when no block has members on both sides of `side`.
    pub fn respects(&self, side: &[bool]) -> bool {
        self.blocks.iter().all(|b| b.iter().all(|&v| side[v] == side[b[0]]))
    }

    /// Composes with a partition of this map's blocks, giving a coarser map on the base.
    pub fn then(&self, coarser: &ContractionMap) -> Result<ContractionMap> {
        if coarser.n() != self.num_blocks() {
            return Err(Error::InvalidContraction(format!(
                "outer map covers {} vertices, inner map has {} blocks",
                coarser.n(),
                self.num_blocks()
            )));
        }
        let blocks = coarser.blocks.iter().map(|outer| self.expand(outer)).collect();
        ContractionMap::from_blocks(self.n(), blocks)
    }
}

/// Contracts each block of `map` into one vertex, summing parallel edges and dropping
/// edges inside a block. Vertex `i` of the output is block `i` of `map`.
pub fn contract(g: &WeightedGraph, map: &ContractionMap) -> Result<WeightedGraph> {
    if map.n() != g.n() {
        return Err(Error::InvalidContraction(format!(
            "map covers {} vertices, graph has {}",
            map.n(),
            g.n()
        )));
    }
    let mut out = WeightedGraph::new(map.num_blocks(), g.unit());
    for (u, v, w) in g.edges() {
        let (a, b) = (map.block_of(u), map.block_of(v));
        if a != b {
            out.add_edge(a, b, w)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use proptest::prelude::*;

    #[test]
    fn triangle_pair_merges_to_weight_two() {
        let g = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap().to_weighted(1);
        let map = ContractionMap::from_blocks(3, vec![vec![0, 1], vec![2]]).unwrap();
        let h = contract(&g, &map).unwrap();
        assert_eq!(h.n(), 2);
        assert_eq!(h.weight(0, 1), 2);
        assert_eq!(h.m(), 1);
    }

    #[test]
    fn identity_is_noop() {
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap().to_weighted(5);
        assert_eq!(contract(&g, &ContractionMap::identity(4)).unwrap(), g);
    }

    #[test]
    fn path_middle_contraction() {
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap().to_weighted(1);
        let map = ContractionMap::from_blocks(4, vec![vec![0], vec![1, 2], vec![3]]).unwrap();
        let h = contract(&g, &map).unwrap();
        let edges: Vec<_> = h.edges().collect();
        assert_eq!(edges, vec![(0, 1, 1), (1, 2, 1)]);
    }

    #[test]
    fn invalid_partitions() {
        assert!(ContractionMap::from_blocks(3, vec![vec![0, 1]]).is_err());
        assert!(ContractionMap::from_blocks(3, vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(ContractionMap::from_blocks(2, vec![vec![0], vec![1], vec![]]).is_err());
        assert!(ContractionMap::from_blocks(2, vec![vec![0, 2], vec![1]]).is_err());
    }

    #[test]
    fn lift_and_compose() {
        let map = ContractionMap::from_blocks(5, vec![vec![0, 3], vec![1], vec![2, 4]]).unwrap();
        assert_eq!(map.lift(&[0, 3, 1]), Some(vec![0, 1]));
        assert_eq!(map.lift(&[0]), None);
        let outer = ContractionMap::from_blocks(3, vec![vec![0, 2], vec![1]]).unwrap();
        let both = map.then(&outer).unwrap();
        assert_eq!(both.blocks(), &[vec![0, 2, 3, 4], vec![1]]);
    }

    proptest! {
        // Contracted cut values equal base cut values of expanded block sets (exhaustive per case).
        #[test]
        fn contraction_cut_consistency(
            n in 2usize..=8,
            edge_bits in proptest::collection::vec(any::<bool>(), 28),
            labels in proptest::collection::vec(0usize..4, 8),
        ) {
            let mut edges = Vec::new();
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if edge_bits[k] { edges.push((u, v)); }
                    k += 1;
                }
            }
            let g = Graph::new(n, edges).unwrap().to_weighted(3);
            let map = ContractionMap::from_labels(&labels[..n]);
            let h = contract(&g, &map).unwrap();
            let b = map.num_blocks();
            for bits in 0u32..(1 << b) {
                let block_mask: Vec<bool> = (0..b).map(|i| bits >> i & 1 == 1).collect();
                prop_assert_eq!(h.cut_weight(&block_mask), g.cut_weight(&map.expand_mask(&block_mask)));
            }
        }
    }
}
