//! Gomory-Hu trees from cut queries: a partial tree from an NI sparsifier,
//! refined level by level with single-source minimum cuts.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{gomory_hu_exact, GomoryHuTree};
use crate::graph::{perturb, CutSet, PerturbationScheme, Scaled};
use crate::oracle::CutOracle;
use crate::seed::Seed;
use crate::single_source::{single_source_min_cuts, PivotPartition, SingleSourceConfig};
use crate::sparsify::ni_sparsify;

/// A tree over disjoint vertex groups covering `V`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionTree {
    pub n: usize,
    pub groups: Vec<Vec<usize>>,
    /// `(group, group, perturbed cut value)`.
    pub edges: Vec<(usize, usize, Scaled)>,
}

impl PartitionTree {
    pub fn validate(&self) -> Result<()> {
        let mut seen = vec![false; self.n];
        for g in &self.groups {
            if g.is_empty() {
                return Err(Error::MalformedTree("empty group".into()));
            }
            for &v in g {
                if v >= self.n || std::mem::replace(&mut seen[v], true) {
                    return Err(Error::MalformedTree(format!("vertex {v} missing or repeated")));
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::MalformedTree("groups do not cover every vertex".into()));
        }
        let k = self.groups.len();
        if self.edges.len() + 1 != k {
            return Err(Error::MalformedTree(format!("{} edges for {k} groups", self.edges.len())));
        }
        let mut sets = crate::sparsify::DisjointSets::new(k);
        for &(a, b, _) in &self.edges {
            if a >= k || b >= k || !sets.union(a, b) {
                return Err(Error::MalformedTree(format!("edge ({a},{b}) is out of range or closes a cycle")));
            }
        }
        Ok(())
    }

    pub fn group_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.n];
        for (i, g) in self.groups.iter().enumerate() {
            for &v in g {
                out[v] = i;
            }
        }
        out
    }

    /// Vertices of the groups reachable from `start` without entering `avoid`.
    fn hanging(&self, start: usize, avoid: usize) -> Vec<usize> {
        let mut adj = vec![Vec::new(); self.groups.len()];
        for &(a, b, _) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; self.groups.len()];
        seen[avoid] = true;
        seen[start] = true;
        let mut stack = vec![start];
        let mut out = Vec::new();
        while let Some(x) = stack.pop() {
            out.extend_from_slice(&self.groups[x]);
            for &y in &adj[x] {
                if !std::mem::replace(&mut seen[y], true) {
                    stack.push(y);
                }
            }
        }
        out
    }

    /// Splits group `x` with disjoint cuts, none containing `keep`, one Gomory-Hu
    /// step per cut. Returns how many neighbouring subtrees straddled a cut.
    fn refine(&mut self, x: usize, cuts: &[(CutSet, Scaled)]) -> usize {
        let mut straddled = 0;
        for (cut, value) in cuts {
            let (inside, rest): (Vec<usize>, Vec<usize>) = self.groups[x].iter().partition(|&&v| cut.contains(v));
            if inside.is_empty() || rest.is_empty() {
                continue;
            }
            let new = self.groups.len();
            self.groups[x] = rest;
            self.groups.push(inside);
            let neighbours: Vec<(usize, usize)> = self
                .edges
                .iter()
                .enumerate()
                .filter_map(|(i, &(a, b, _))| if a == x { Some((i, b)) } else if b == x { Some((i, a)) } else { None })
                .collect();
            for (i, y) in neighbours {
                let below = self.hanging(y, x);
                let hits = below.iter().filter(|&&v| cut.contains(v)).count();
                if hits != 0 && hits != below.len() {
                    straddled += 1;
                }
                if 2 * hits > below.len() {
                    let e = &mut self.edges[i];
                    if e.0 == x {
                        e.0 = new;
                    } else {
                        e.1 = new;
                    }
                }
            }
            self.edges.push((x, new, *value));
        }
        straddled
    }

    /// The vertex tree once every group is a singleton.
    fn into_vertex_tree(self, unit: Scaled) -> Result<(GomoryHuTree, Vec<Scaled>)> {
        let label = |g: usize| self.groups[g][0];
        let mut edges = Vec::new();
        let mut exact = Vec::new();
        for &(a, b, w) in &self.edges {
            edges.push((label(a), label(b), w / unit * unit));
            exact.push(w);
        }
        Ok((GomoryHuTree::new(self.n, edges)?, exact))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "groups": self.groups,
            "edges": self.edges.iter().map(|&(a, b, w)| serde_json::json!([a, b, w.to_string()])).collect::<Vec<_>>(),
        })
    }
}

/// Partial tree: groups are the components of the NI sparsifier's cut tree
/// after dropping edges heavier than `k`; surviving edges carry exact values.
pub fn partial_k_tree(o: &CutOracle, k: usize, scheme: &PerturbationScheme, seed: Seed) -> Result<PartitionTree> {
    let n = o.n();
    let unit = o.unit();
    let ni = ni_sparsify(o, 2 * k.max(1), seed)?;
    let cut_tree = gomory_hu_exact(&perturb(&ni.graph(unit), scheme, None)?);
    let mut sets = crate::sparsify::DisjointSets::new(n);
    for &(u, v, w) in cut_tree.edges() {
        if w / unit > k as Scaled {
            sets.union(u, v);
        }
    }
    let mut index: BTreeMap<usize, usize> = BTreeMap::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        let root = sets.find(v);
        let g = *index.entry(root).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(v);
    }
    let edges = cut_tree
        .edges()
        .iter()
        .filter(|&&(_, _, w)| w / unit <= k as Scaled)
        .map(|&(u, v, w)| (index[&sets.find(u)], index[&sets.find(v)], w))
        .collect();
    Ok(PartitionTree { n, groups, edges })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GomoryHuConfig {
    /// Pivot attempts per group are `⌈retry_factor·log₂n⌉`.
    pub retry_factor: f64,
    /// Constant in the total query budget.
    pub c_gh: f64,
    pub single_source: SingleSourceConfig,
}

impl Default for GomoryHuConfig {
    fn default() -> Self {
        Self { retry_factor: 20.0, c_gh: 64.0, single_source: SingleSourceConfig::default() }
    }
}

fn log2(n: usize) -> f64 {
    (n.max(2) as f64).log2()
}

impl GomoryHuConfig {
    pub fn attempts(&self, n: usize) -> usize {
        (self.retry_factor * log2(n)).ceil().max(1.0) as usize
    }

    pub fn budget(&self, n: usize) -> f64 {
        self.c_gh * (n as f64).powf(1.75) * log2(n).powi(4)
    }
}

/// Something during the run that can make the final tree wrong.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Anomaly {
    /// A subtree hanging off a refined group was split by the cut.
    Straddle { level: usize, group_size: usize, count: usize },
    /// A returned cut does not separate its target from the pivot.
    BadCut { level: usize, vertex: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GomoryHuOutcome {
    pub tree: GomoryHuTree,
    /// Perturbed value behind each tree edge, in the order of `tree.edges()`.
    pub exact_weights: Vec<Scaled>,
    pub initial_groups: usize,
    pub levels: usize,
    /// Pivot rounds that failed the good-vertex test.
    pub retries: usize,
    pub anomalies: Vec<Anomaly>,
}

impl GomoryHuOutcome {
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = self.tree.to_json();
        v["levels"] = self.levels.into();
        v["retries"] = self.retries.into();
        v["initial_groups"] = self.initial_groups.into();
        v["anomalies"] = serde_json::to_value(&self.anomalies).expect("plain data");
        v
    }
}

/// Gomory-Hu tree of the hidden graph behind `o`.
pub fn gomory_hu(o: &CutOracle, scheme: &PerturbationScheme, config: &GomoryHuConfig, seed: Seed) -> Result<GomoryHuOutcome> {
    let n = o.n();
    if n != o.base_n() || o.is_induced() || scheme.n() != n {
        return Err(Error::InvalidParameter("Gomory-Hu runs on the uncontracted base graph".into()));
    }
    let k = (n as f64).sqrt().ceil() as usize;
    let mut tree = partial_k_tree(&o.with_phase("partial_tree"), k, scheme, seed.derive("partial_tree"))?;
    let initial_groups = tree.groups.len();
    let max_attempts = config.attempts(n);
    let mut rng = seed.derive("pivots").rng();
    let mut anomalies = Vec::new();
    let (mut levels, mut retries, mut round) = (0, 0, 0u64);
    loop {
        let mut pending: Vec<usize> = (0..tree.groups.len()).filter(|&g| tree.groups[g].len() > 1).collect();
        if pending.is_empty() {
            break;
        }
        levels += 1;
        let mut attempts: BTreeMap<usize, usize> = BTreeMap::new();
        while !pending.is_empty() {
            let mut parts = Vec::new();
            let mut pivots = Vec::new();
            let mut active = vec![false; n];
            for &g in &pending {
                let members = &tree.groups[g];
                pivots.push(members[rand::Rng::random_range(&mut rng, 0..members.len())]);
                parts.push(members.clone());
                for &v in members {
                    active[v] = true;
                }
            }
            for v in (0..n).filter(|&v| !active[v]) {
                parts.push(vec![v]);
                pivots.push(v);
            }
            let pp = PivotPartition::new(n, parts, pivots.clone())?;
            let cuts = single_source_min_cuts(
                &o.with_phase("single_source"),
                &pp,
                scheme,
                &config.single_source,
                seed.derive("round").derive_index(round),
            )?;
            round += 1;
            let mut still = Vec::new();
            for (i, &g) in pending.iter().enumerate() {
                let members = tree.groups[g].clone();
                let pivot = pivots[i];
                let size = members.len();
                let mut good: Vec<(usize, CutSet, Scaled)> = Vec::new();
                for &v in members.iter().filter(|&&v| v != pivot) {
                    let c = &cuts.cuts[&v];
                    if !c.side.contains(v) || c.side.contains(pivot) {
                        anomalies.push(Anomaly::BadCut { level: levels, vertex: v });
                        continue;
                    }
                    if 2 * c.side.intersection_len(&members) <= size {
                        good.push((v, c.side.clone(), c.value));
                    }
                }
                if 4 * good.len() < size {
                    retries += 1;
                    let used = attempts.entry(g).or_insert(0);
                    *used += 1;
                    if *used >= max_attempts {
                        return Err(Error::Aborted { attempts: *used, part_size: size });
                    }
                    still.push(g);
                    continue;
                }
                let chosen = largest_covering(&good, &members);
                let count = tree.refine(g, &chosen);
                if count > 0 {
                    anomalies.push(Anomaly::Straddle { level: levels, group_size: size, count });
                }
            }
            pending = still;
        }
    }
    tree.validate()?;
    let (vertex_tree, exact_weights) = tree.into_vertex_tree(o.unit())?;
    Ok(GomoryHuOutcome { tree: vertex_tree, exact_weights, initial_groups, levels, retries, anomalies })
}

/// For each good vertex, the largest good cut holding it (ties to the cut with
/// the smallest member of the group); returns the distinct chosen cuts.
fn largest_covering(good: &[(usize, CutSet, Scaled)], members: &[usize]) -> Vec<(CutSet, Scaled)> {
    let key = |c: &CutSet| {
        let inside: Vec<usize> = members.iter().copied().filter(|&v| c.contains(v)).collect();
        (std::cmp::Reverse(inside.len()), inside.first().copied().unwrap_or(usize::MAX))
    };
    let mut chosen: Vec<usize> = Vec::new();
    for (u, _, _) in good {
        let best = (0..good.len()).filter(|&j| good[j].1.contains(*u)).min_by_key(|&j| key(&good[j].1));
        if let Some(j) = best {
            if !chosen.contains(&j) {
                chosen.push(j);
            }
        }
    }
    chosen.sort_by_key(|&j| key(&good[j].1));
    chosen.into_iter().map(|j| (good[j].1.clone(), good[j].2)).collect()
}

#[cfg(test)]
mod tests;
