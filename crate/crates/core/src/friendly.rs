//! Friendly cut sparsifiers: contract shaved expander clusters, keep everything else.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expander::{expander_decompose, ExpanderConfig};
use crate::graph::{ContractionMap, CutSet, Graph, Scaled, WeightedGraph};
use crate::oracle::CutOracle;
use crate::seed::Seed;

/// True when every vertex keeps at least an `alpha` fraction of its edges on its own side.
pub fn friendliness_ok(g: &Graph, s: &CutSet, alpha: f64) -> bool {
    let side = s.mask(g.n());
    let mut crossing = vec![0usize; g.n()];
    for &(u, v) in g.edges() {
        if side[u] != side[v] {
            crossing[u] += 1;
            crossing[v] += 1;
        }
    }
    g.degrees()
        .iter()
        .zip(&crossing)
        .all(|(&d, &c)| d == 0 || 1.0 - c as f64 / d as f64 >= alpha)
}

/// True when no edge crossing `s` has both endpoints in one block of `map`.
pub fn cut_preserved(map: &ContractionMap, g: &Graph, s: &CutSet) -> bool {
    let side = s.mask(g.n());
    g.edges().iter().all(|&(u, v)| side[u] == side[v] || map.block_of(u) != map.block_of(v))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FriendlyConfig {
    pub phi: f64,
    /// Constant in the edge budget `c_fs·α⁻¹·n·√w·log₂²n`.
    pub c_fs: f64,
    pub expander: ExpanderConfig,
}

impl Default for FriendlyConfig {
    fn default() -> Self {
        Self { phi: 0.01, c_fs: 16.0, expander: ExpanderConfig::default() }
    }
}

impl FriendlyConfig {
    pub fn edge_budget(&self, n: usize, alpha: f64, w: usize) -> f64 {
        let log = (n.max(2) as f64).log2();
        self.c_fs / alpha * n as f64 * (w as f64).sqrt() * log * log
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FriendlySparsifier {
    /// The contracted graph; vertex `i` is block `i` of `map`.
    pub graph: WeightedGraph,
    /// Blocks over the vertices of the view the sparsifier was built on.
    pub map: ContractionMap,
    pub alpha: f64,
    pub w: usize,
    /// Expander clusters before shaving; empty when every vertex was shaved by degree.
    pub clusters: Vec<Vec<usize>>,
}

impl FriendlySparsifier {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "alpha": self.alpha,
            "w": self.w,
            "blocks": self.map.blocks(),
            "clusters": self.clusters,
            "edges": self.graph.edges().map(|(u, v, w)| serde_json::json!([u, v, w.to_string()])).collect::<Vec<_>>(),
        })
    }
}

/// Builds an `(alpha, w)`-friendly cut sparsifier of the view.
///
/// Vertices in `keep` are always shaved, so they stay distinct in the output.
pub fn friendly_sparsify(
    o: &CutOracle,
    alpha: f64,
    w: usize,
    keep: &[usize],
    config: &FriendlyConfig,
    seed: Seed,
) -> Result<FriendlySparsifier> {
    if !(alpha > 0.0 && alpha < 1.0) || w == 0 {
        return Err(Error::InvalidParameter(format!("friendly sparsifier needs α in (0,1) and w >= 1, got α={alpha}, w={w}")));
    }
    let n = o.n();
    let degrees = o.degrees()?;
    let root_w = (w as f64).sqrt();
    let degree_floor = 10.0 * root_w / alpha;
    let mut shaved: Vec<bool> = degrees.iter().map(|&d| (d as f64) < degree_floor).collect();
    for &v in keep {
        if v >= n {
            return Err(Error::InvalidSet { vertex: v, n });
        }
        shaved[v] = true;
    }
    if shaved.iter().all(|&s| s) {
        let map = ContractionMap::identity(n);
        return Ok(FriendlySparsifier { graph: o.recover_all()?, map, alpha, w, clusters: Vec::new() });
    }
    let demand_units = (root_w / config.phi).ceil() as Scaled;
    let demand = vec![demand_units * o.unit(); n];
    let expander = ExpanderConfig { phi: config.phi, ..config.expander };
    let decomposition = expander_decompose(&o.with_phase("expander"), &demand, &expander, seed.derive("expander"))?;
    let mut blocks = Vec::new();
    for cluster in &decomposition.clusters {
        let outside = CutSet::new(cluster.clone()).complement(n);
        let mut core = Vec::new();
        for &v in cluster {
            if shaved[v] {
                blocks.push(vec![v]);
                continue;
            }
            let leaving = if outside.is_empty() { 0 } else { o.cross_count(&CutSet::singleton(v), &outside)? };
            if alpha * (degrees[v] as f64) < 4.0 * leaving as f64 {
                blocks.push(vec![v]);
            } else {
                core.push(v);
            }
        }
        if !core.is_empty() {
            blocks.push(core);
        }
    }
    let map = ContractionMap::from_blocks(n, blocks)?;
    let graph = o.view_contract(&map)?.recover_all()?;
    Ok(FriendlySparsifier { graph, map, alpha, w, clusters: decomposition.clusters })
}

/// The same construction on an explicit unweighted graph, charged to a private ledger.
pub fn friendly_from_graph(
    g: &Graph,
    alpha: f64,
    w: usize,
    keep: &[usize],
    config: &FriendlyConfig,
    seed: Seed,
) -> Result<FriendlySparsifier> {
    friendly_sparsify(&CutOracle::new(g), alpha, w, keep, config, seed)
}
