//! Demand-weighted expander decomposition driven by balanced-cut-or-prune steps.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{cmp_products, CutSet, Scaled, Sparsity, WeightedGraph};
use crate::oracle::CutOracle;
use crate::seed::Seed;
use crate::sparsify::{cut_sparsify, CutSparsifierConfig};

/// Denominator used to turn a floating sparsity target into an exact ratio.
const PHI_DEN: Scaled = 1_000_000_000;

fn phi_num(phi: f64) -> Scaled {
    (phi * PHI_DEN as f64).round() as Scaled
}

/// `cut(S) / min(d(S), d(V \ S))` in `g`.
pub fn sparsity(g: &WeightedGraph, demand: &[Scaled], s: &CutSet) -> Sparsity {
    let mask = s.mask(g.n());
    let inside: Scaled = (0..g.n()).filter(|&v| mask[v]).map(|v| demand[v]).sum();
    let total: Scaled = demand.iter().sum();
    Sparsity::new(g.cut_weight(&mask), inside.min(total - inside))
}

/// `weight ≤ factor·φ·bound`, exactly.
fn within(weight: Scaled, factor: Scaled, phi: f64, bound: Scaled) -> bool {
    cmp_products(weight, PHI_DEN, factor * phi_num(phi), bound) != std::cmp::Ordering::Greater
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BalCutPrune {
    /// Both sides carry at least a third of the demand.
    Cut { a: Vec<usize>, b: Vec<usize> },
    /// `a` carries at least half the demand and expands; `b` may be empty.
    Prune { a: Vec<usize>, b: Vec<usize> },
}

/// How a cluster's expansion was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    /// Every subset was checked.
    Exhaustive,
    /// The second generalized eigenvalue bounds every subset's sparsity.
    Spectral,
    /// No sparse sweep cut was found, without a proof of expansion.
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpanderConfig {
    pub phi: f64,
    /// Constant in the inter-cluster weight bound.
    pub c_dec: f64,
    /// Largest cluster searched exhaustively.
    pub exhaustive_limit: usize,
    pub sparsifier: CutSparsifierConfig,
}

impl Default for ExpanderConfig {
    fn default() -> Self {
        Self { phi: 0.01, c_dec: 8.0, exhaustive_limit: 18, sparsifier: CutSparsifierConfig::default() }
    }
}

/// Local dense view of a small weighted graph with demands.
struct Dense {
    n: usize,
    adj: Vec<Vec<Scaled>>,
    demand: Vec<Scaled>,
}

impl Dense {
    fn new(g: &WeightedGraph, demand: &[Scaled]) -> Self {
        let n = g.n();
        let mut adj = vec![vec![0; n]; n];
        for (u, v, w) in g.edges() {
            adj[u][v] += w;
            adj[v][u] += w;
        }
        Self { n, adj, demand: demand.to_vec() }
    }

    /// Cut weight and demand of every subset, indexed by bitmask.
    fn tables(&self) -> (Vec<Scaled>, Vec<Scaled>) {
        let size = 1usize << self.n;
        let mut cut = vec![0; size];
        let mut dem = vec![0; size];
        let deg: Vec<Scaled> = self.adj.iter().map(|r| r.iter().sum()).collect();
        for mask in 1..size {
            let v = usize::BITS as usize - 1 - mask.leading_zeros() as usize;
            let rest = mask ^ (1 << v);
            let to_rest: Scaled = (0..self.n).filter(|&u| rest >> u & 1 == 1).map(|u| self.adj[v][u]).sum();
            cut[mask] = cut[rest] + deg[v] - 2 * to_rest;
            dem[mask] = dem[rest] + self.demand[v];
        }
        (cut, dem)
    }
}

fn members(mask: usize, n: usize) -> Vec<usize> {
    (0..n).filter(|&v| mask >> v & 1 == 1).collect()
}

/// Sparsest subset of `within` in the induced graph, as the side of smaller demand.
/// `None` when every subset has sparsity at least `phi`.
fn sparsest_inside(cut: &[Scaled], dem: &[Scaled], within_mask: usize, phi: f64) -> Option<usize> {
    let mut best: Option<(Sparsity, usize)> = None;
    let total_cut = cut[within_mask];
    let total_dem = dem[within_mask];
    let low = within_mask & within_mask.wrapping_neg();
    // Submasks containing the lowest vertex cover each bipartition once.
    let mut sub = (within_mask - 1) & within_mask;
    while sub > 0 {
        if sub & low != 0 {
            let other = within_mask ^ sub;
            let w = (cut[sub] + cut[other] - total_cut) / 2;
            let s = Sparsity::new(w, dem[sub].min(total_dem - dem[sub]));
            if !s.at_least(phi_num(phi), PHI_DEN) && best.is_none_or(|(b, _)| s < b) {
                let smaller = if dem[sub] <= dem[other] { sub } else { other };
                best = Some((s, smaller));
            }
        }
        sub = (sub - 1) & within_mask;
    }
    best.map(|(_, m)| m)
}

fn exhaustive(g: &WeightedGraph, demand: &[Scaled], phi: f64) -> Result<(BalCutPrune, Certificate)> {
    let dense = Dense::new(g, demand);
    let n = dense.n;
    let full = (1usize << n) - 1;
    let (cut, dem) = dense.tables();
    let total = dem[full];
    let mut best: Option<(Sparsity, usize)> = None;
    for mask in (1..full).filter(|m| m & 1 == 1) {
        let small = dem[mask].min(total - dem[mask]);
        if 3 * dem[mask] >= total && 3 * (total - dem[mask]) >= total && within(cut[mask], 2, phi, small) {
            let s = Sparsity::new(cut[mask], small);
            if best.is_none_or(|(b, _)| s < b) {
                best = Some((s, mask));
            }
        }
    }
    if let Some((_, mask)) = best {
        return Ok((BalCutPrune::Cut { a: members(mask, n), b: members(full ^ mask, n) }, Certificate::Exhaustive));
    }
    let mut a = full;
    while let Some(s) = sparsest_inside(&cut, &dem, a, phi) {
        a ^= s;
    }
    finish_prune(g, demand, phi, members(a, n), Certificate::Exhaustive)
}

/// Validates a trimmed partition against the definition.
fn finish_prune(
    g: &WeightedGraph,
    demand: &[Scaled],
    phi: f64,
    a: Vec<usize>,
    cert: Certificate,
) -> Result<(BalCutPrune, Certificate)> {
    let n = g.n();
    let a_set = CutSet::new(a);
    let b = a_set.complement(n).into_vec();
    let a = a_set.into_vec();
    let total: Scaled = demand.iter().sum();
    let da: Scaled = a.iter().map(|&v| demand[v]).sum();
    let db = total - da;
    let w = g.cut_weight(&CutSet::new(a.clone()).mask(n));
    if !within(w, 2, phi, da.min(db)) {
        return Err(Error::StrategyFailure(format!("trimmed boundary {w} exceeds 2φ·min demand")));
    }
    if 3 * da >= total && 3 * db >= total {
        return Ok((BalCutPrune::Cut { a, b }, cert));
    }
    if 2 * da < total {
        return Err(Error::StrategyFailure("trimming removed more than half the demand".into()));
    }
    Ok((BalCutPrune::Prune { a, b }, cert))
}

/// Spectral data of the demand-normalized Laplacian of `g[within]`.
struct Spectrum {
    lambda2: f64,
    vectors: Vec<Vec<f64>>,
}

fn spectrum(g: &WeightedGraph, demand: &[Scaled], within: &[usize]) -> Spectrum {
    let k = within.len();
    let unit = g.unit() as f64;
    let mut local = vec![usize::MAX; g.n()];
    for (i, &v) in within.iter().enumerate() {
        local[v] = i;
    }
    let positive_min = within.iter().map(|&v| demand[v]).filter(|&d| d > 0).min().unwrap_or(g.unit());
    // Zero demands are raised slightly: this only lowers the certified bound.
    let d: Vec<f64> = within
        .iter()
        .map(|&v| if demand[v] > 0 { demand[v] as f64 / unit } else { positive_min as f64 / unit / k as f64 })
        .collect();
    let mut lap = DMatrix::<f64>::zeros(k, k);
    for (u, v, w) in g.edges() {
        let (a, b) = (local[u], local[v]);
        if a != usize::MAX && b != usize::MAX {
            let w = w as f64 / unit;
            lap[(a, a)] += w;
            lap[(b, b)] += w;
            lap[(a, b)] -= w;
            lap[(b, a)] -= w;
        }
    }
    let scale: Vec<f64> = d.iter().map(|x| 1.0 / x.sqrt()).collect();
    for i in 0..k {
        for j in 0..k {
            lap[(i, j)] *= scale[i] * scale[j];
        }
    }
    let eig = SymmetricEigen::new(lap);
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let lambda2 = order.get(1).map_or(f64::INFINITY, |&i| eig.eigenvalues[i]);
    let vectors = order
        .iter()
        .skip(1)
        .take(3)
        .map(|&c| (0..k).map(|r| eig.eigenvectors[(r, c)] * scale[r]).collect())
        .collect();
    Spectrum { lambda2, vectors }
}

/// Prefix sets of `within` ordered by each vector, with exact boundary weight and demand.
fn sweep_sets(
    g: &WeightedGraph,
    demand: &[Scaled],
    within: &[usize],
    vectors: &[Vec<f64>],
) -> Vec<(Vec<usize>, Scaled, Scaled)> {
    let adj = g.adjacency();
    let mut inside_w = vec![false; g.n()];
    for &v in within {
        inside_w[v] = true;
    }
    let mut out = Vec::new();
    for x in vectors {
        let mut order: Vec<usize> = (0..within.len()).collect();
        order.sort_by(|&a, &b| x[a].total_cmp(&x[b]).then(a.cmp(&b)));
        let mut in_prefix = vec![false; g.n()];
        let (mut cut, mut dem) = (0 as Scaled, 0 as Scaled);
        let mut prefix = Vec::new();
        for &i in order.iter().take(within.len() - 1) {
            let v = within[i];
            for &(u, w) in &adj[v] {
                if inside_w[u] {
                    cut += if in_prefix[u] { -w } else { w };
                }
            }
            in_prefix[v] = true;
            dem += demand[v];
            prefix.push(v);
            out.push((prefix.clone(), cut, dem));
        }
    }
    out
}

fn spectral(g: &WeightedGraph, demand: &[Scaled], phi: f64) -> Result<(BalCutPrune, Certificate)> {
    let n = g.n();
    let total: Scaled = demand.iter().sum();
    let all: Vec<usize> = (0..n).collect();
    let spec = spectrum(g, demand, &all);
    let mut best: Option<(Sparsity, Vec<usize>)> = None;
    for (set, cut, dem) in sweep_sets(g, demand, &all, &spec.vectors) {
        let small = dem.min(total - dem);
        if 3 * dem >= total && 3 * (total - dem) >= total && within(cut, 2, phi, small) {
            let s = Sparsity::new(cut, small);
            if best.as_ref().is_none_or(|(b, _)| s < *b) {
                best = Some((s, set));
            }
        }
    }
    if let Some((_, a)) = best {
        let b = CutSet::new(a.clone()).complement(n).into_vec();
        return Ok((BalCutPrune::Cut { a: CutSet::new(a).into_vec(), b }, Certificate::Spectral));
    }
    let mut a = all;
    let mut cert = Certificate::Spectral;
    loop {
        if a.len() <= 1 {
            break;
        }
        let spec = spectrum(g, demand, &a);
        if spec.lambda2 / 2.0 >= phi * (1.0 + 1e-9) {
            break;
        }
        let dem_a: Scaled = a.iter().map(|&v| demand[v]).sum();
        let mut cut_best: Option<(Sparsity, Vec<usize>)> = None;
        for (set, cut, dem) in sweep_sets(g, demand, &a, &spec.vectors) {
            let s = Sparsity::new(cut, dem.min(dem_a - dem));
            if !s.at_least(phi_num(phi), PHI_DEN) && cut_best.as_ref().is_none_or(|(b, _)| s < *b) {
                let smaller = if 2 * dem <= dem_a {
                    set
                } else {
                    let mark = CutSet::new(set);
                    a.iter().copied().filter(|&v| !mark.contains(v)).collect()
                };
                cut_best = Some((s, smaller));
            }
        }
        match cut_best {
            Some((_, remove)) => {
                let drop = CutSet::new(remove);
                a.retain(|&v| !drop.contains(v));
            }
            None => {
                cert = Certificate::Sweep;
                break;
            }
        }
    }
    finish_prune(g, demand, phi, a, cert)
}

/// Balanced sparse cut, or a large expanding part with a sparse boundary.
pub fn bal_cut_prune(h: &WeightedGraph, demand: &[Scaled], phi: f64, exhaustive_limit: usize) -> Result<BalCutPrune> {
    bal_cut_prune_certified(h, demand, phi, exhaustive_limit).map(|(r, _)| r)
}

pub fn bal_cut_prune_certified(
    h: &WeightedGraph,
    demand: &[Scaled],
    phi: f64,
    exhaustive_limit: usize,
) -> Result<(BalCutPrune, Certificate)> {
    if !(phi > 0.0 && phi <= 1.0) {
        return Err(Error::InvalidParameter(format!("sparsity target {phi} outside (0, 1]")));
    }
    if demand.len() != h.n() {
        return Err(Error::InvalidParameter("demand length differs from vertex count".into()));
    }
    let all: Vec<usize> = (0..h.n()).collect();
    if demand.iter().filter(|&&d| d > 0).count() <= 1 || h.n() <= 1 {
        return Ok((BalCutPrune::Prune { a: all, b: Vec::new() }, Certificate::Exhaustive));
    }
    if h.n() <= exhaustive_limit.min(24) {
        exhaustive(h, demand, phi)
    } else {
        spectral(h, demand, phi)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpanderDecomposition {
    pub clusters: Vec<Vec<usize>>,
    pub phi: f64,
    /// Weight of edges between clusters, as measured on the sparsifiers used.
    pub inter_weight: Scaled,
    pub rounds: usize,
    pub certificates: Vec<Certificate>,
}

impl ExpanderDecomposition {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "clusters": self.clusters,
            "phi": self.phi,
            "inter_weight": self.inter_weight.to_string(),
            "rounds": self.rounds,
            "certificates": self.certificates,
        })
    }
}

/// Partitions the view into clusters that each expand with respect to `demand`.
///
/// Each round sparsifies every active cluster once and runs [`bal_cut_prune`]
/// on it; balanced cuts split a cluster, prunes retire the expanding part.
pub fn expander_decompose(
    o: &CutOracle,
    demand: &[Scaled],
    config: &ExpanderConfig,
    seed: Seed,
) -> Result<ExpanderDecomposition> {
    let n = o.n();
    if demand.len() != n {
        return Err(Error::InvalidParameter("demand length differs from vertex count".into()));
    }
    let mut active: Vec<Vec<usize>> = vec![(0..n).collect()];
    let mut done: Vec<(Vec<usize>, Certificate)> = Vec::new();
    let mut inter = 0;
    let mut rounds = 0;
    while !active.is_empty() {
        rounds += 1;
        let mut next = Vec::new();
        for (i, cluster) in active.into_iter().enumerate() {
            let local_demand: Vec<Scaled> = cluster.iter().map(|&v| demand[v]).collect();
            if cluster.len() == 1 || local_demand.iter().filter(|&&d| d > 0).count() <= 1 {
                done.push((cluster, Certificate::Exhaustive));
                continue;
            }
            let view = if cluster.len() == n { o.clone() } else { o.view_induced(&cluster)? };
            let sub_seed = seed.derive_index(rounds as u64).derive_index(i as u64);
            let h = cut_sparsify(&view, 0.5, &config.sparsifier, sub_seed)?;
            let (outcome, cert) = bal_cut_prune_certified(&h, &local_demand, config.phi, config.exhaustive_limit)?;
            let (a, b, pruned) = match outcome {
                BalCutPrune::Cut { a, b } => (a, b, false),
                BalCutPrune::Prune { a, b } => (a, b, true),
            };
            let a_mask = CutSet::new(a.clone()).mask(h.n());
            inter += h.cut_weight(&a_mask);
            let lift = |part: Vec<usize>| -> Vec<usize> { part.into_iter().map(|x| cluster[x]).collect() };
            if pruned {
                done.push((lift(a), cert));
                if !b.is_empty() {
                    next.push(lift(b));
                }
            } else {
                next.push(lift(a));
                next.push(lift(b));
            }
        }
        active = next;
    }
    done.sort_by(|x, y| x.0.cmp(&y.0));
    let (clusters, certificates) = done.into_iter().unzip();
    Ok(ExpanderDecomposition { clusters, phi: config.phi, inter_weight: inter, rounds, certificates })
}

/// Failure found by [`check_decomposition`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecompositionFault {
    NotPartition,
    SparseCluster { cluster: usize, witness: Vec<usize> },
    InterWeightTooLarge { weight: Scaled, bound: Scaled },
}

/// Checks a decomposition of an explicit graph: every cluster expands (exhaustively
/// up to `exhaustive_limit` vertices, by sweep cuts above) and the inter-cluster
/// weight respects `c_dec·φ·d(V)·log₂(mU)`.
pub fn check_decomposition(
    g: &WeightedGraph,
    demand: &[Scaled],
    decomposition: &ExpanderDecomposition,
    c_dec: f64,
    exhaustive_limit: usize,
) -> std::result::Result<(), DecompositionFault> {
    let n = g.n();
    let phi = decomposition.phi;
    let mut owner = vec![usize::MAX; n];
    for (i, c) in decomposition.clusters.iter().enumerate() {
        for &v in c {
            if v >= n || owner[v] != usize::MAX {
                return Err(DecompositionFault::NotPartition);
            }
            owner[v] = i;
        }
    }
    if owner.contains(&usize::MAX) {
        return Err(DecompositionFault::NotPartition);
    }
    for (i, cluster) in decomposition.clusters.iter().enumerate() {
        if cluster.len() < 2 {
            continue;
        }
        let sub = g.induced(cluster);
        let local: Vec<Scaled> = cluster.iter().map(|&v| demand[v]).collect();
        let witness = if cluster.len() <= exhaustive_limit {
            let (cut, dem) = Dense::new(&sub, &local).tables();
            sparsest_inside(&cut, &dem, (1 << cluster.len()) - 1, phi).map(|m| members(m, cluster.len()))
        } else {
            let all: Vec<usize> = (0..cluster.len()).collect();
            let spec = spectrum(&sub, &local, &all);
            let total: Scaled = local.iter().sum();
            sweep_sets(&sub, &local, &all, &spec.vectors)
                .into_iter()
                .find(|(_, cut, dem)| !Sparsity::new(*cut, (*dem).min(total - dem)).at_least(phi_num(phi), PHI_DEN))
                .map(|(s, _, _)| s)
        };
        if let Some(w) = witness {
            return Err(DecompositionFault::SparseCluster {
                cluster: i,
                witness: w.into_iter().map(|x| cluster[x]).collect(),
            });
        }
    }
    let weight: Scaled = g.edges().filter(|&(u, v, _)| owner[u] != owner[v]).map(|e| e.2).sum();
    let unit = g.unit();
    let total: Scaled = demand.iter().sum();
    let max_units = (g.max_weight() / unit).max(demand.iter().copied().max().unwrap_or(0) / unit).max(1);
    let log = ((g.m().max(1) as f64) * max_units as f64).log2().max(1.0);
    let bound = (c_dec * phi * log * (total as f64)).floor() as Scaled;
    if weight > bound {
        return Err(DecompositionFault::InterWeightTooLarge { weight, bound });
    }
    Ok(())
}
