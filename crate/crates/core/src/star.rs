//! Randomized star contraction: high-degree vertices outside a protected set
//! merge into a sampled neighbour from a random centre set.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ContractionMap, CutSet, WeightedGraph};
use crate::oracle::CutOracle;
use crate::seed::Seed;
use crate::sparsify::DisjointSets;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StarConfig {
    /// Centre probability is `min(1, p_const·log₂n/τ)`.
    pub p_const: f64,
    /// Constant in the size bounds on the contracted graph.
    pub c_sc: f64,
}

impl Default for StarConfig {
    fn default() -> Self {
        Self { p_const: 800.0, c_sc: 32.0 }
    }
}

impl StarConfig {
    pub fn probability(&self, n: usize, tau: usize) -> f64 {
        (self.p_const * log2(n) / tau as f64).min(1.0)
    }

    /// Bound on the edge count of the contracted graph.
    pub fn total_bound(&self, n: usize, tau: usize, fixed: usize) -> f64 {
        let ratio = n as f64 / tau as f64;
        self.c_sc * ((ratio + fixed as f64).powi(2) + (n * tau) as f64) * log2(n).powi(2)
    }

    /// Bound on the contracted edges incident to a centre block.
    pub fn centre_bound(&self, n: usize, tau: usize, fixed: usize) -> f64 {
        let ratio = n as f64 / tau as f64;
        self.c_sc * (ratio * ratio + ratio * fixed as f64) * log2(n).powi(2)
    }
}

fn log2(n: usize) -> f64 {
    (n.max(2) as f64).log2()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StarContractionOutcome {
    pub map: ContractionMap,
    /// Sampled centres.
    pub centres: Vec<usize>,
    /// Vertices outside the protected set with degree at least `τ`.
    pub high: Vec<usize>,
    /// Contracted pairs `(u, centre)` with `u` high and not a centre.
    pub contracted_edges: Vec<(usize, usize)>,
    pub p: f64,
}

impl StarContractionOutcome {
    /// True when no contracted edge crosses `s`.
    pub fn preserved(&self, s: &CutSet) -> bool {
        self.contracted_edges.iter().all(|&(u, c)| s.contains(u) == s.contains(c))
    }

    /// Adjacent block pairs of `contracted` (block coordinates), in total and
    /// with an endpoint in a centre block. Parallel edges count once.
    pub fn edge_counts(&self, contracted: &WeightedGraph) -> (usize, usize) {
        let mut is_centre = vec![false; self.map.num_blocks()];
        for &c in &self.centres {
            is_centre[self.map.block_of(c)] = true;
        }
        let total = contracted.m();
        let at_centres = contracted.edges().filter(|&(a, b, _)| is_centre[a] || is_centre[b]).count();
        (total, at_centres)
    }

    /// Checks both size bounds for a contracted graph over `n` base vertices.
    pub fn within_bounds(&self, contracted: &WeightedGraph, n: usize, tau: usize, fixed: usize, config: &StarConfig) -> bool {
        let (total, at_centres) = self.edge_counts(contracted);
        total as f64 <= config.total_bound(n, tau, fixed) && at_centres as f64 <= config.centre_bound(n, tau, fixed)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "blocks": self.map.blocks(),
            "centres": self.centres,
            "high": self.high,
            "contracted_edges": self.contracted_edges,
            "p": self.p,
        })
    }
}

/// One `(τ, F)`-star contraction of the view.
///
/// `degrees` may carry already known view degrees; otherwise one query per
/// vertex is spent on them.
pub fn star_contract(
    o: &CutOracle,
    tau: usize,
    fixed: &[usize],
    degrees: Option<&[i64]>,
    config: &StarConfig,
    seed: Seed,
) -> Result<StarContractionOutcome> {
    let n = o.n();
    if tau == 0 {
        return Err(Error::InvalidParameter("star contraction needs τ >= 1".into()));
    }
    if let Some(&v) = fixed.iter().find(|&&v| v >= n) {
        return Err(Error::InvalidSet { vertex: v, n });
    }
    let degrees = match degrees {
        Some(d) if d.len() == n => d.to_vec(),
        Some(d) => return Err(Error::InvalidParameter(format!("{} degrees for a view with {n} vertices", d.len()))),
        None => o.degrees()?,
    };
    let mut protected = vec![false; n];
    for &v in fixed {
        protected[v] = true;
    }
    let high: Vec<usize> = (0..n).filter(|&v| !protected[v] && degrees[v] >= tau as i64).collect();
    let p = config.probability(n, tau);
    let mut rng = seed.derive("centres").rng();
    let centres: Vec<usize> = (0..n).filter(|_| rand::Rng::random_bool(&mut rng, p)).collect();
    let mut is_centre = vec![false; n];
    for &c in &centres {
        is_centre[c] = true;
    }
    let centre_set = CutSet::new(centres.clone());
    let mut contracted_edges = Vec::new();
    let mut sets = DisjointSets::new(n);
    let edges = seed.derive("edges");
    for &u in high.iter().filter(|&&u| !is_centre[u]) {
        let count = o.cross_count(&CutSet::singleton(u), &centre_set)?;
        if count == 0 {
            continue;
        }
        let mut rng = edges.derive_index(u as u64).rng();
        let (_, c) = o.sample_edge_known(&CutSet::singleton(u), &centre_set, count, &mut rng)?;
        contracted_edges.push((u, c));
        sets.union(u, c);
    }
    let labels: Vec<usize> = (0..n).map(|v| sets.find(v)).collect();
    Ok(StarContractionOutcome { map: ContractionMap::from_labels(&labels), centres, high, contracted_edges, p })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::friendly::cut_preserved;
    use crate::graph::{contract, generate, Family, Graph};
    use proptest::prelude::{any, prop_assert_eq, proptest, ProptestConfig};

    const LOW_P: StarConfig = StarConfig { p_const: 0.5, c_sc: 32.0 };

    #[test]
    fn trivial_cases_are_identity() {
        let g = generate(Family::Gnp(0.5), 12, Seed(1)).unwrap();
        let o = CutOracle::new(&g);
        let out = star_contract(&o, 12, &[], None, &LOW_P, Seed(2)).unwrap();
        assert!(out.high.is_empty() && out.map.is_identity());
        let all: Vec<usize> = (0..12).collect();
        let out = star_contract(&o, 1, &all, None, &LOW_P, Seed(2)).unwrap();
        assert!(out.high.is_empty() && out.map.is_identity());
    }

    #[test]
    fn default_constant_makes_everyone_a_centre() {
        let k16 = generate(Family::Clique, 16, Seed(0)).unwrap();
        let out = star_contract(&CutOracle::new(&k16), 4, &[0, 1], None, &StarConfig::default(), Seed(3)).unwrap();
        assert_eq!(out.p, 1.0);
        assert_eq!(out.centres.len(), 16);
        assert!(out.map.is_identity());
    }

    #[test]
    fn clique_stars_replay_against_graph() {
        let k16 = generate(Family::Clique, 16, Seed(0)).unwrap();
        let mut merged = 0;
        for s in 0..20 {
            let out = star_contract(&CutOracle::new(&k16), 4, &[0, 1], None, &LOW_P, Seed(s)).unwrap();
            assert_eq!(out.high, (2..16).collect::<Vec<_>>());
            let waiting = out.high.iter().filter(|u| !out.centres.contains(u)).count();
            if !out.centres.is_empty() {
                assert_eq!(out.contracted_edges.len(), waiting);
            }
            for &(u, c) in &out.contracted_edges {
                assert!(k16.has_edge(u, c));
                assert!(out.centres.contains(&c) && !out.centres.contains(&u));
                assert!(u >= 2);
            }
            merged += out.contracted_edges.len();
            for block in out.map.blocks() {
                assert!(block.iter().filter(|v| out.centres.contains(v)).count() <= 1);
            }
        }
        assert!(merged > 0);
    }

    #[test]
    fn preserved_matches_intersection() {
        let g = generate(Family::PlantedCut(2), 20, Seed(5)).unwrap();
        let o = CutOracle::new(&g);
        let out = star_contract(&o, 3, &[0, 19], None, &LOW_P, Seed(8)).unwrap();
        assert!(!out.contracted_edges.is_empty());
        let mut rng = Seed(1).rng();
        for _ in 0..200 {
            let s: CutSet = (0..20).filter(|_| rand::Rng::random_bool(&mut rng, 0.5)).collect();
            assert_eq!(out.preserved(&s), cut_preserved(&out.map, &g, &s));
        }
        let (u, c) = out.contracted_edges[0];
        assert!(!out.preserved(&CutSet::singleton(u)) || c == u);
        assert!(StarContractionOutcome { map: ContractionMap::identity(20), contracted_edges: vec![], ..out }
            .preserved(&CutSet::singleton(u)));
    }

    #[test]
    fn known_degrees_skip_queries() {
        let g = generate(Family::Gnp(0.4), 16, Seed(2)).unwrap();
        let degrees: Vec<i64> = g.degrees().iter().map(|&d| d as i64).collect();
        let o = CutOracle::new(&g);
        let a = star_contract(&o, 20, &[], Some(&degrees), &LOW_P, Seed(1)).unwrap();
        assert_eq!(o.queries(), 0);
        assert!(a.map.is_identity());
    }

    #[test]
    fn size_bounds_hold() {
        for (n, tau) in [(32usize, 6usize), (48, 8)] {
            let g = generate(Family::Gnp(0.5), n, Seed(n as u64)).unwrap();
            let o = CutOracle::new(&g);
            for (config, s) in [(LOW_P, 1), (StarConfig::default(), 2)] {
                let out = star_contract(&o, tau, &[0, 1, 2], None, &config, Seed(s)).unwrap();
                let h = contract(&g.to_weighted(1), &out.map).unwrap();
                assert!(out.within_bounds(&h, n, tau, 3, &config));
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn blocks_are_stars(n in 4usize..=14, seed in any::<u64>(), tau in 1usize..6) {
            let g: Graph = generate(Family::Gnp(0.5), n, Seed(seed)).unwrap();
            let out = star_contract(&CutOracle::new(&g), tau, &[0], None, &LOW_P, Seed(seed ^ 3)).unwrap();
            for block in out.map.blocks() {
                let centres: Vec<usize> = block.iter().copied().filter(|v| out.centres.contains(v)).collect();
                if block.len() > 1 {
                    prop_assert_eq!(centres.len(), 1);
                    for &v in block.iter().filter(|&&v| v != centres[0]) {
                        prop_assert_eq!(out.contracted_edges.iter().find(|e| e.0 == v).map(|e| e.1), Some(centres[0]));
                    }
                }
            }
            let degrees = g.degrees();
            prop_assert_eq!(out.high.clone(), (1..n).filter(|&v| degrees[v] >= tau).collect::<Vec<_>>());
        }
    }
}
