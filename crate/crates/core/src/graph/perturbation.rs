use serde::{Deserialize, Serialize};

use super::{ordered, scale_for, ContractionMap, CutSet, Scaled, WeightedGraph};
use crate::error::{Error, Result};
use crate::seed::{mix64, Seed};

/// Largest view that `perturb` will materialize in full.
const MAX_MATERIALIZED: usize = 2048;

/// Seeded tie-breaking weights on every unordered vertex pair of the base graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerturbationScheme {
    seed: u64,
    n: usize,
    unit: Scaled,
    range: u128,
}

impl PerturbationScheme {
    pub fn new(seed: Seed, n_base: usize) -> Result<Self> {
        let unit = scale_for(n_base)?;
        Ok(Self { seed: seed.0, n: n_base, unit, range: (n_base as u128).pow(7) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `D`, the scaled weight of one edge.
    pub fn unit(&self) -> Scaled {
        self.unit
    }

    /// Weight of the pair `{u, v}`, uniform on `1..=n^7`.
    pub fn weight(&self, u: usize, v: usize) -> Scaled {
        let (a, b) = ordered(u, v);
        let h1 = mix64(mix64(self.seed ^ mix64(a as u64)) ^ (b as u64).rotate_left(32));
        let h2 = mix64(h1 ^ 0x6A09_E667_F3BC_C909);
        let wide = (u128::from(h1) << 64) | u128::from(h2);
        (wide % self.range + 1) as Scaled
    }

    /// Sum of pair weights between two disjoint base vertex lists.
    pub fn block_pair_weight(&self, a: &[usize], b: &[usize]) -> Scaled {
        a.iter().flat_map(|&u| b.iter().map(move |&v| self.weight(u, v))).sum()
    }
}

/// Perturbation weight of the cut `s`, summed over all base pairs crossing it.
///
/// `s` lives in the view described by `map` (the base graph when `None`).
pub fn perturbation_cut_weight(
    scheme: &PerturbationScheme,
    s: &CutSet,
    map: Option<&ContractionMap>,
) -> Result<Scaled> {
    let view_n = map.map_or(scheme.n, ContractionMap::num_blocks);
    if let Some(&v) = s.members().iter().find(|&&v| v >= view_n) {
        return Err(Error::InvalidSet { vertex: v, n: view_n });
    }
    if s.is_trivial(view_n) {
        return Err(Error::TrivialCut { n: view_n });
    }
    let inside = match map {
        Some(m) => m.expand(s.members()),
        None => s.members().to_vec(),
    };
    let outside = CutSet::new(inside.clone()).complement(scheme.n).into_vec();
    Ok(scheme.block_pair_weight(&inside, &outside))
}

/// Adds the perturbation to every vertex pair of `g`.
///
/// When `g` is a contracted view, `map` gives its blocks and each pair of blocks
/// receives the summed perturbation of the base pairs between them.
pub fn perturb(
    g: &WeightedGraph,
    scheme: &PerturbationScheme,
    map: Option<&ContractionMap>,
) -> Result<WeightedGraph> {
    let identity;
    let map = match map {
        Some(m) => m,
        None => {
            identity = ContractionMap::identity(scheme.n);
            &identity
        }
    };
    if map.num_blocks() != g.n() || map.n() != scheme.n {
        return Err(Error::InvalidContraction(format!(
            "view has {} vertices, map has {} blocks over {} base vertices, scheme expects {}",
            g.n(),
            map.num_blocks(),
            map.n(),
            scheme.n
        )));
    }
    if g.n() > MAX_MATERIALIZED {
        return Err(Error::InvalidParameter(format!(
            "refusing to materialize a perturbation on {} vertices",
            g.n()
        )));
    }
    let mut out = g.clone();
    for a in 0..g.n() {
        for b in a + 1..g.n() {
            out.add_edge(a, b, scheme.block_pair_weight(map.block(a), map.block(b)))?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn scheme(n: usize) -> PerturbationScheme {
        PerturbationScheme::new(Seed(11), n).unwrap()
    }

    #[test]
    fn weights_in_range_and_symmetric() {
        let p = scheme(6);
        for u in 0..6 {
            for v in 0..6 {
                if u != v {
                    let w = p.weight(u, v);
                    assert!((1..=6i128.pow(7)).contains(&w));
                    assert_eq!(w, p.weight(v, u));
                }
            }
        }
    }

    #[test]
    fn two_vertex_cut_is_single_pair() {
        let p = scheme(2);
        assert_eq!(perturbation_cut_weight(&p, &CutSet::singleton(0), None).unwrap(), p.weight(0, 1));
    }

    #[test]
    fn trivial_cut_rejected() {
        let p = scheme(3);
        assert_eq!(perturbation_cut_weight(&p, &CutSet::new(vec![]), None), Err(Error::TrivialCut { n: 3 }));
        assert!(perturbation_cut_weight(&p, &CutSet::new(vec![0, 1, 2]), None).is_err());
    }

    #[test]
    fn five_vertex_cut_matches_table() {
        let p = scheme(5);
        let mut table = [[0i128; 5]; 5];
        for u in 0..5 {
            for v in u + 1..5 {
                table[u][v] = p.weight(u, v);
            }
        }
        let expected: i128 = [0, 1].iter().flat_map(|&u| (2..5).map(move |v| table[u][v])).sum();
        assert_eq!(perturbation_cut_weight(&p, &CutSet::new(vec![0, 1]), None).unwrap(), expected);
    }

    #[test]
    fn complement_symmetry() {
        let p = scheme(7);
        for bits in 1u32..(1 << 7) - 1 {
            let s: CutSet = (0..7).filter(|i| bits >> i & 1 == 1).collect();
            assert_eq!(
                perturbation_cut_weight(&p, &s, None).unwrap(),
                perturbation_cut_weight(&p, &s.complement(7), None).unwrap()
            );
        }
    }

    #[test]
    fn single_edge_gains_pair_weight() {
        let p = scheme(2);
        let g = Graph::new(2, [(0, 1)]).unwrap().to_weighted(p.unit());
        let h = perturb(&g, &p, None).unwrap();
        assert_eq!(h.weight(0, 1), p.unit() + p.weight(0, 1));
    }

    #[test]
    fn contracted_view_sums_base_pairs() {
        let p = scheme(4);
        let map = ContractionMap::from_blocks(4, vec![vec![0, 2], vec![1, 3]]).unwrap();
        let g = WeightedGraph::new(2, p.unit());
        let h = perturb(&g, &p, Some(&map)).unwrap();
        let expected = p.weight(0, 1) + p.weight(0, 3) + p.weight(2, 1) + p.weight(2, 3);
        assert_eq!(h.weight(0, 1), expected);
    }

    #[test]
    fn total_perturbation_below_one_edge() {
        for n in [2usize, 5, 10, 64] {
            let p = scheme(n);
            let all: i128 = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).map(|(u, v)| p.weight(u, v)).sum();
            assert!(all > 0 && all < p.unit());
        }
    }
}
