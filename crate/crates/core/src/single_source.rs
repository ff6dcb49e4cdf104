//! Minimum cuts from one pivot per part to every other vertex of the part.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{gomory_hu_exact, min_st_cut};
use crate::friendly::{friendly_sparsify, FriendlyConfig};
use crate::graph::{perturb, perturbation_cut_weight, CutSet, PerturbationScheme, Scaled};
use crate::isolating::{weak_isolating_cuts, IsolatingConfig, PrecomputedBundle};
use crate::oracle::CutOracle;
use crate::seed::Seed;
use crate::sparsify::{cut_sparsify, CutSparsifierConfig};

/// Disjoint parts covering the vertices, each with a pivot inside it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PivotPartition {
    parts: Vec<Vec<usize>>,
    pivots: Vec<usize>,
}

impl PivotPartition {
    pub fn new(n: usize, parts: Vec<Vec<usize>>, pivots: Vec<usize>) -> Result<Self> {
        if parts.len() != pivots.len() {
            return Err(Error::InvalidParameter(format!("{} parts but {} pivots", parts.len(), pivots.len())));
        }
        let mut seen = vec![false; n];
        for (part, &pivot) in parts.iter().zip(&pivots) {
            if !part.contains(&pivot) {
                return Err(Error::InvalidParameter(format!("pivot {pivot} lies outside its part")));
            }
            for &v in part {
                if v >= n {
                    return Err(Error::InvalidSet { vertex: v, n });
                }
                if std::mem::replace(&mut seen[v], true) {
                    return Err(Error::SetsOverlap(v));
                }
            }
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(Error::InvalidParameter(format!("vertex {v} is in no part")));
        }
        let parts = parts
            .into_iter()
            .map(|mut p| {
                p.sort_unstable();
                p
            })
            .collect();
        Ok(Self { parts, pivots })
    }

    /// One part holding every vertex.
    pub fn single(n: usize, pivot: usize) -> Result<Self> {
        Self::new(n, vec![(0..n).collect()], vec![pivot])
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn n(&self) -> usize {
        self.parts.iter().map(Vec::len).sum()
    }

    /// `(part, vertex)` for every vertex that is not a pivot.
    pub fn targets(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(move |(i, part)| part.iter().filter(move |&&v| v != self.pivots[i]).map(move |&v| (i, v)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceCut {
    pub part: usize,
    /// Contains the target vertex and not the pivot.
    pub side: CutSet,
    /// Perturbed value in the base graph.
    pub value: Scaled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingleSourceResult {
    pub cuts: BTreeMap<usize, SourceCut>,
    pub unit: Scaled,
}

impl SingleSourceResult {
    pub fn to_json(&self) -> serde_json::Value {
        let entries: serde_json::Map<String, serde_json::Value> = self
            .cuts
            .iter()
            .map(|(v, c)| {
                let value = serde_json::json!({
                    "part": c.part,
                    "cut": c.side.members(),
                    "value_num": c.value.to_string(),
                    "value_den": self.unit.to_string(),
                });
                (v.to_string(), value)
            })
            .collect();
        serde_json::Value::Object(entries)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingleSourceConfig {
    /// Accuracy of the cut sparsifier used for the thresholds.
    pub eps: f64,
    /// Threshold ratio between consecutive levels.
    pub delta: f64,
    /// Friendliness of the sparsifier that catches friendly minimum cuts.
    pub alpha: f64,
    /// Constant in the query budgets.
    pub c_ss: f64,
    pub sparsifier: CutSparsifierConfig,
    pub friendly: FriendlyConfig,
    pub isolating: IsolatingConfig,
}

impl Default for SingleSourceConfig {
    fn default() -> Self {
        Self {
            eps: 0.01,
            delta: 0.01,
            alpha: 0.4,
            c_ss: 64.0,
            sparsifier: CutSparsifierConfig::default(),
            friendly: FriendlyConfig::default(),
            isolating: IsolatingConfig::default(),
        }
    }
}

fn log2(n: usize) -> f64 {
    (n.max(2) as f64).log2()
}

impl SingleSourceConfig {
    /// Threshold levels `⌈log_{1+δ}(2n²)⌉`.
    pub fn levels(&self, n: usize) -> usize {
        ((2.0 * (n * n) as f64).ln() / (1.0 + self.delta).ln()).ceil() as usize
    }

    pub fn total_budget(&self, n: usize) -> f64 {
        self.c_ss * (n as f64).powf(1.75) * log2(n).powi(3)
    }

    pub fn isolating_budget(&self, n: usize) -> f64 {
        self.c_ss * (n as f64).powf(1.5) * log2(n).powi(3)
    }
}

/// Tracks the best candidate per target under the perturbed base-graph value.
struct Selection<'a> {
    oracle: CutOracle,
    scheme: &'a PerturbationScheme,
    values: HashMap<Vec<usize>, Scaled>,
    best: BTreeMap<usize, SourceCut>,
}

impl<'a> Selection<'a> {
    fn new(o: &CutOracle, scheme: &'a PerturbationScheme) -> Self {
        Self { oracle: o.with_phase("evaluate"), scheme, values: HashMap::new(), best: BTreeMap::new() }
    }

    fn offer(&mut self, v: usize, part: usize, side: CutSet) -> Result<()> {
        let value = match self.values.get(side.members()) {
            Some(&x) => x,
            None => {
                let x = Scaled::from(self.oracle.cut(&side)?) * self.oracle.unit()
                    + perturbation_cut_weight(self.scheme, &side, None)?;
                self.values.insert(side.members().to_vec(), x);
                x
            }
        };
        if self.best.get(&v).is_none_or(|b| value < b.value) {
            self.best.insert(v, SourceCut { part, side, value });
        }
        Ok(())
    }
}

fn check_inputs(o: &CutOracle, pp: &PivotPartition, scheme: &PerturbationScheme) -> Result<()> {
    let n = o.n();
    if n != o.base_n() || o.is_induced() || scheme.n() != n {
        return Err(Error::InvalidParameter("single-source cuts run on the uncontracted base graph".into()));
    }
    if pp.n() != n {
        return Err(Error::InvalidParameter(format!("partition covers {} vertices, graph has {n}", pp.n())));
    }
    Ok(())
}

/// Cuts that are exact whenever the minimum pivot cut is 0.4-unfriendly, and
/// never below the minimum otherwise.
pub fn single_source_unfriendly(
    o: &CutOracle,
    pp: &PivotPartition,
    scheme: &PerturbationScheme,
    config: &SingleSourceConfig,
    seed: Seed,
) -> Result<SingleSourceResult> {
    check_inputs(o, pp, scheme)?;
    let n = o.n();
    let unit = o.unit();
    let sparse = cut_sparsify(&o.with_phase("sparsifier"), config.eps, &config.sparsifier, seed.derive("sparsifier"))?;
    let estimates = gomory_hu_exact(&sparse);
    let bundle = PrecomputedBundle::build(&o.with_phase("bundle"), &config.isolating, seed.derive("bundle"))?;
    let isolating = o.with_phase("isolating");
    let mut selection = Selection::new(o, scheme);
    for (i, part) in pp.parts().iter().enumerate() {
        let pivot = pp.pivots()[i];
        let scaled: Vec<(usize, f64)> = part
            .iter()
            .filter(|&&v| v != pivot)
            .map(|&v| (v, 2.0 * (estimates.path_min(pivot, v) as f64 / unit as f64) / (1.0 - config.eps)))
            .collect();
        let mut levels: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut threshold = 1.0;
        for _ in 0..config.levels(n) {
            threshold *= 1.0 + config.delta;
            let members: Vec<usize> = scaled.iter().filter(|&&(_, c)| c >= threshold).map(|&(v, _)| v).collect();
            if !members.is_empty() {
                levels.insert(members);
            }
        }
        for (j, mut terminals) in levels.into_iter().enumerate() {
            terminals.push(pivot);
            let level_seed = seed.derive("level").derive_index(i as u64).derive_index(j as u64);
            let found = weak_isolating_cuts(&isolating, &terminals, scheme, Some(&bundle), &config.isolating, level_seed)?;
            let pivot_side = &found.cuts[&pivot];
            let outside = pivot_side.complement(n);
            for &v in part.iter().filter(|&&v| v != pivot) {
                if let Some(side) = found.cuts.get(&v) {
                    selection.offer(v, i, side.clone())?;
                }
                if !pivot_side.contains(v) {
                    selection.offer(v, i, outside.clone())?;
                }
            }
        }
        for &v in part.iter().filter(|&&v| v != pivot) {
            if !selection.best.contains_key(&v) {
                selection.offer(v, i, CutSet::singleton(v))?;
            }
        }
    }
    Ok(SingleSourceResult { cuts: selection.best, unit })
}

/// Minimum cut from each part's pivot to every other vertex of the part,
/// under the perturbation.
pub fn single_source_min_cuts(
    o: &CutOracle,
    pp: &PivotPartition,
    scheme: &PerturbationScheme,
    config: &SingleSourceConfig,
    seed: Seed,
) -> Result<SingleSourceResult> {
    check_inputs(o, pp, scheme)?;
    let n = o.n();
    let friendly = friendly_sparsify(&o.with_phase("friendly"), config.alpha, n, &[], &config.friendly, seed.derive("friendly"))?;
    let perturbed = perturb(&friendly.graph, scheme, Some(&friendly.map))?;
    let unfriendly = single_source_unfriendly(&o.with_phase("unfriendly"), pp, scheme, config, seed.derive("unfriendly"))?;
    let mut selection = Selection::new(o, scheme);
    for (i, v) in pp.targets() {
        let (a, b) = (friendly.map.block_of(v), friendly.map.block_of(pp.pivots()[i]));
        if a != b {
            let side = min_st_cut(&perturbed, a, b)?.side;
            selection.offer(v, i, CutSet::new(friendly.map.expand(side.members())))?;
        }
        if let Some(c) = unfriendly.cuts.get(&v) {
            selection.offer(v, i, c.side.clone())?;
        }
    }
    Ok(SingleSourceResult { cuts: selection.best, unit: o.unit() })
}
