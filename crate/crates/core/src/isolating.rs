//! Weak isolating cuts from cut queries.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::isolating_cuts_exact;
use crate::friendly::{friendly_sparsify, FriendlyConfig, FriendlySparsifier};
use crate::graph::{perturb, perturbation_cut_weight, ContractionMap, CutSet, PerturbationScheme, Scaled, WeightedGraph};
use crate::oracle::{CutOracle, Multiedge};
use crate::seed::Seed;
use crate::sparsify::{ni_sparsify, NiSparsifier};
use crate::star::{star_contract, StarConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsolatingConfig {
    /// Terminal degrees up to `degree_factor·n^{3/4}` take the NI branch.
    pub degree_factor: f64,
    /// Star threshold `τ = tau_factor·n^{3/4}`.
    pub tau_factor: f64,
    /// Star repetitions `⌈repetitions·log₂n⌉`.
    pub repetitions: f64,
    /// Constant in the query budgets.
    pub c_ic: f64,
    pub friendly: FriendlyConfig,
    pub star: StarConfig,
}

impl Default for IsolatingConfig {
    fn default() -> Self {
        Self {
            degree_factor: 100.0,
            tau_factor: 100.0,
            repetitions: 12.0,
            c_ic: 64.0,
            friendly: FriendlyConfig::default(),
            star: StarConfig::default(),
        }
    }
}

fn log2(n: usize) -> f64 {
    (n.max(2) as f64).log2()
}

fn three_quarters(n: usize) -> f64 {
    (n as f64).powf(0.75)
}

impl IsolatingConfig {
    pub fn degree_cutoff(&self, n: usize) -> f64 {
        self.degree_factor * three_quarters(n)
    }

    pub fn tau(&self, n: usize) -> usize {
        (self.tau_factor * three_quarters(n)).ceil().max(1.0) as usize
    }

    pub fn rounds(&self, n: usize) -> usize {
        (self.repetitions * log2(n)).ceil().max(1.0) as usize
    }

    /// Query budget of a call without a bundle, for terminal degree `d`.
    pub fn standalone_budget(&self, n: usize, d: usize) -> f64 {
        self.c_ic * ((n * d) as f64).min((n as f64).powf(1.75)) * log2(n).powi(3)
    }

    /// Query budget of a call with a bundle and `terminals` terminals.
    pub fn bundle_budget(&self, n: usize, terminals: usize) -> f64 {
        self.c_ic * ((n as f64).sqrt() + terminals as f64 * (n as f64).powf(0.25)) * log2(n).powi(3)
    }
}

/// Inputs shared by many isolating-cut calls on one graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrecomputedBundle {
    pub degrees: Vec<i64>,
    /// Every edge with an endpoint of degree at most the cutoff.
    pub low_degree_edges: Vec<(usize, usize)>,
    /// True when the low-degree edges are the whole graph.
    pub complete: bool,
    pub friendly: FriendlySparsifier,
    pub ni: NiSparsifier,
}

impl PrecomputedBundle {
    pub fn build(o: &CutOracle, config: &IsolatingConfig, seed: Seed) -> Result<Self> {
        let n = o.n();
        let degrees = o.with_phase("degrees").degrees()?;
        let cutoff = config.degree_cutoff(n);
        let (low, high): (Vec<usize>, Vec<usize>) = (0..n).partition(|&v| degrees[v] as f64 <= cutoff);
        let edges = o.with_phase("low_degree_edges");
        let mut found: Vec<Multiedge> = if high.is_empty() {
            edges.recover_all()?.edges().map(|(u, v, _)| (u, v, 1)).collect()
        } else {
            let mut found = edges.recover_internal(&CutSet::new(low.clone()))?;
            if !low.is_empty() {
                found.extend(edges.recover_edges(&CutSet::new(low), &CutSet::new(high.clone()))?);
            }
            found
        };
        let mut low_degree_edges: Vec<(usize, usize)> = found.drain(..).map(|(u, v, _)| crate::graph::ordered(u, v)).collect();
        low_degree_edges.sort_unstable();
        let alpha = (n as f64).powf(-0.25);
        let friendly = friendly_sparsify(&o.with_phase("friendly"), alpha, n, &[], &config.friendly, seed.derive("friendly"))?;
        let k = three_quarters(n).ceil() as usize;
        let ni = ni_sparsify(&o.with_phase("ni"), k.max(1), seed.derive("ni"))?;
        Ok(Self { degrees, low_degree_edges, complete: high.is_empty(), friendly, ni })
    }

    fn graph(&self, unit: Scaled) -> Result<WeightedGraph> {
        let mut g = WeightedGraph::new(self.degrees.len(), unit);
        for &(u, v) in &self.low_degree_edges {
            g.add_edge(u, v, unit)?;
        }
        Ok(g)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// The bundle held the whole graph.
    Known,
    LowDegree,
    HighDegree,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsolatingCutsResult {
    pub cuts: BTreeMap<usize, CutSet>,
    /// Perturbed value of each cut in the base graph, in units of `1/unit` edges.
    pub values: BTreeMap<usize, Scaled>,
    pub unit: Scaled,
    pub branch: Branch,
}

impl IsolatingCutsResult {
    pub fn to_json(&self) -> serde_json::Value {
        let entries: serde_json::Map<String, serde_json::Value> = self
            .cuts
            .iter()
            .map(|(v, cut)| {
                let value = serde_json::json!({
                    "cut": cut.members(),
                    "value_num": self.values[v].to_string(),
                    "value_den": self.unit.to_string(),
                });
                (v.to_string(), value)
            })
            .collect();
        serde_json::Value::Object(entries)
    }
}

/// Exact isolating cuts of an explicit graph under the perturbation, lifted through `map`.
fn solve_perturbed(
    g: &WeightedGraph,
    scheme: &PerturbationScheme,
    map: Option<&ContractionMap>,
    terminals: &[usize],
) -> Result<BTreeMap<usize, (CutSet, Scaled)>> {
    let perturbed = perturb(g, scheme, map)?;
    let lift = |side: &CutSet| match map {
        Some(m) => CutSet::new(m.expand(side.members())),
        None => side.clone(),
    };
    match map {
        None => Ok(isolating_cuts_exact(&perturbed, terminals)?
            .into_iter()
            .map(|(v, r)| (v, (r.side, r.value)))
            .collect()),
        Some(m) => {
            // Terminals sharing a block cannot be separated in this view.
            let mut per_block: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for &v in terminals {
                per_block.entry(m.block_of(v)).or_default().push(v);
            }
            if per_block.len() < 2 {
                return Ok(BTreeMap::new());
            }
            let blocks: Vec<usize> = per_block.keys().copied().collect();
            let solved = isolating_cuts_exact(&perturbed, &blocks)?;
            Ok(per_block
                .into_iter()
                .filter(|(_, vs)| vs.len() == 1)
                .map(|(b, vs)| (vs[0], (lift(&solved[&b].side), solved[&b].value)))
                .collect())
        }
    }
}

/// Weak isolating cuts for the terminals `terminals` of the base graph behind `o`.
///
/// Each returned cut contains its terminal and no other. A terminal whose
/// minimum isolating cut is also a minimum cut to another terminal gets exactly
/// that cut (under the perturbation) with high probability.
pub fn weak_isolating_cuts(
    o: &CutOracle,
    terminals: &[usize],
    scheme: &PerturbationScheme,
    bundle: Option<&PrecomputedBundle>,
    config: &IsolatingConfig,
    seed: Seed,
) -> Result<IsolatingCutsResult> {
    let n = o.n();
    if n != o.base_n() || o.is_induced() || scheme.n() != n {
        return Err(Error::InvalidParameter("isolating cuts run on the uncontracted base graph".into()));
    }
    let mut r = terminals.to_vec();
    r.sort_unstable();
    r.dedup();
    if let Some(&v) = r.iter().find(|&&v| v >= n) {
        return Err(Error::InvalidSet { vertex: v, n });
    }
    if r.len() < 2 {
        return Err(Error::TooFewTerminals(r.len()));
    }
    let unit = o.unit();
    let finish = |branch, found: BTreeMap<usize, (CutSet, Scaled)>| {
        let (cuts, values) = found.into_iter().map(|(v, (c, x))| ((v, c), (v, x))).unzip();
        IsolatingCutsResult { cuts, values, unit, branch }
    };
    if let Some(b) = bundle.filter(|b| b.complete) {
        return Ok(finish(Branch::Known, solve_perturbed(&b.graph(unit)?, scheme, None, &r)?));
    }
    let terminal_degrees: Vec<i64> = match bundle {
        Some(b) => r.iter().map(|&v| b.degrees[v]).collect(),
        None => {
            let q = o.with_phase("degrees");
            r.iter().map(|&v| q.degree(v)).collect::<Result<_>>()?
        }
    };
    let d = terminal_degrees.iter().copied().max().unwrap_or(0) as usize;
    if d as f64 <= config.degree_cutoff(n) {
        // Cuts up to d survive a (d+1)-NI sparsifier exactly.
        let sparse = match bundle {
            Some(b) if d < b.ni.k => b.ni.graph(unit),
            _ => ni_sparsify(&o.with_phase("ni"), d + 1, seed.derive("ni"))?.graph(unit),
        };
        return Ok(finish(Branch::LowDegree, solve_perturbed(&sparse, scheme, None, &r)?));
    }
    let mut candidates: BTreeMap<usize, Vec<CutSet>> = r.iter().map(|&v| (v, Vec::new())).collect();
    let owned;
    let friendly = match bundle {
        Some(b) => &b.friendly,
        None => {
            let alpha = (n as f64).powf(-0.25);
            owned = friendly_sparsify(&o.with_phase("friendly"), alpha, n, &r, &config.friendly, seed.derive("friendly"))?;
            &owned
        }
    };
    for (v, (cut, _)) in solve_perturbed(&friendly.graph, scheme, Some(&friendly.map), &r)? {
        candidates.get_mut(&v).expect("terminal").push(cut);
    }
    let degrees = match bundle {
        Some(b) => b.degrees.clone(),
        None => o.with_phase("degrees").degrees()?,
    };
    let tau = config.tau(n);
    let known_low: Vec<(usize, usize)> = bundle.map(|b| b.low_degree_edges.clone()).unwrap_or_default();
    for i in 0..config.rounds(n) {
        let round = seed.derive("star").derive_index(i as u64);
        let star = star_contract(&o.with_phase("star"), tau, &r, Some(&degrees), &config.star, round)?;
        let contracted = contracted_without_terminal_edges(o, &star.map, &star.centres, &r, &known_low)?;
        for (v, (cut, _)) in solve_perturbed(&contracted, scheme, Some(&star.map), &r)? {
            candidates.get_mut(&v).expect("terminal").push(cut);
        }
    }
    let evaluate = o.with_phase("evaluate");
    let mut seen: HashMap<Vec<usize>, Scaled> = HashMap::new();
    let mut found = BTreeMap::new();
    for (v, list) in candidates {
        let mut best: Option<(CutSet, Scaled)> = None;
        for cut in list {
            let value = match seen.get(cut.members()) {
                Some(&x) => x,
                None => {
                    let x = Scaled::from(evaluate.cut(&cut)?) * unit + perturbation_cut_weight(scheme, &cut, None)?;
                    seen.insert(cut.members().to_vec(), x);
                    x
                }
            };
            if best.as_ref().is_none_or(|(_, b)| value < *b) {
                best = Some((cut, value));
            }
        }
        let (cut, value) = best.ok_or_else(|| Error::StrategyFailure(format!("no isolating candidate for terminal {v}")))?;
        found.insert(v, (cut, value));
    }
    Ok(finish(Branch::HighDegree, found))
}

/// Recovers the contraction of the base graph by `map`, leaving out edges between
/// terminal blocks. Edges in `known` that avoid centre blocks are not queried.
fn contracted_without_terminal_edges(
    o: &CutOracle,
    map: &ContractionMap,
    centres: &[usize],
    terminals: &[usize],
    known: &[(usize, usize)],
) -> Result<WeightedGraph> {
    let unit = o.unit();
    let mut is_terminal_block = vec![false; map.num_blocks()];
    for &v in terminals {
        is_terminal_block[map.block_of(v)] = true;
    }
    let mut is_centre_block = vec![false; map.num_blocks()];
    for &c in centres {
        is_centre_block[map.block_of(c)] = true;
    }
    let mut skipped: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    for &(u, v) in known {
        let (a, b) = crate::graph::ordered(map.block_of(u), map.block_of(v));
        if a != b && !is_centre_block[a] && !is_centre_block[b] && !(is_terminal_block[a] && is_terminal_block[b]) {
            *skipped.entry((a, b)).or_insert(0) += 1;
        }
    }
    let skipped: Vec<Multiedge> = skipped.into_iter().map(|((a, b), m)| (a, b, m)).collect();
    let view = o.with_phase("recover").view_contract(map)?;
    let view = if skipped.is_empty() { view } else { view.view_minus_edges(&skipped)? };
    let (inside, outside): (Vec<usize>, Vec<usize>) = (0..map.num_blocks()).partition(|&b| is_terminal_block[b]);
    let mut g = WeightedGraph::new(map.num_blocks(), unit);
    let mut edges = view.recover_internal(&CutSet::new(outside.clone()))?;
    if !outside.is_empty() {
        edges.extend(view.recover_edges(&CutSet::new(inside), &CutSet::new(outside))?);
    }
    edges.extend(skipped);
    for (a, b, m) in edges {
        g.add_edge(a, b, Scaled::from(m) * unit)?;
    }
    Ok(g)
}

#[cfg(test)]
mod tests;
