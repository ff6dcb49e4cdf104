//! Query-free exact solvers on explicit weighted graphs.

mod flow;
mod tree;

pub use tree::GomoryHuTree;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CutSet, Scaled, WeightedGraph};
use flow::FlowNetwork;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinCutResult {
    pub value: Scaled,
    /// Source side; the minimal one among all minimum cuts.
    pub side: CutSet,
}

fn network(g: &WeightedGraph, extra: usize) -> FlowNetwork {
    let mut net = FlowNetwork::new(g.n() + extra);
    for (u, v, w) in g.edges() {
        net.add_undirected(u, v, w);
    }
    net
}

/// Minimum cut separating every vertex in `sources` from every vertex in `sinks`.
/// Returns the value and the minimal source side.
pub fn min_cut_between(g: &WeightedGraph, sources: &[usize], sinks: &[usize]) -> (Scaled, Vec<bool>) {
    let n = g.n();
    if let ([s], [t]) = (sources, sinks) {
        let mut net = network(g, 0);
        let value = net.max_flow(*s, *t);
        return (value, net.reachable(*s));
    }
    let (s, t) = (n, n + 1);
    let big = g.total_weight() + 1;
    let mut net = network(g, 2);
    for &v in sources {
        net.add_arc(s, v, big);
    }
    for &v in sinks {
        net.add_arc(v, t, big);
    }
    let value = net.max_flow(s, t);
    let mut side = net.reachable(s);
    side.truncate(n);
    (value, side)
}

fn check_vertex(g: &WeightedGraph, v: usize) -> Result<()> {
    if v >= g.n() {
        return Err(Error::InvalidSet { vertex: v, n: g.n() });
    }
    Ok(())
}

pub fn min_st_cut(g: &WeightedGraph, s: usize, t: usize) -> Result<MinCutResult> {
    check_vertex(g, s)?;
    check_vertex(g, t)?;
    if s == t {
        return Err(Error::SameVertex(s));
    }
    let (value, side) = min_cut_between(g, &[s], &[t]);
    Ok(MinCutResult { value, side: CutSet::from_mask(&side) })
}

/// Pairwise minimum cut values by one max-flow per pair; the diagonal is zero.
pub fn all_pairs_min_cut(g: &WeightedGraph) -> Vec<Vec<Scaled>> {
    let n = g.n();
    let mut out = vec![vec![0; n]; n];
    for s in 0..n {
        for t in s + 1..n {
            let v = min_cut_between(g, &[s], &[t]).0;
            out[s][t] = v;
            out[t][s] = v;
        }
    }
    out
}

/// Gomory-Hu tree by Gusfield's method: `n - 1` max-flows, no contraction.
///
/// The tree is a cut tree: removing an edge leaves a minimum cut between its
/// endpoints, not just the right value.
pub fn gomory_hu_exact(g: &WeightedGraph) -> GomoryHuTree {
    let n = g.n();
    let mut parent = vec![0; n];
    let mut weight = vec![0; n];
    for i in 1..n {
        let t = parent[i];
        let (value, side) = min_cut_between(g, &[i], &[t]);
        weight[i] = value;
        for j in (0..n).filter(|&j| j != i) {
            if side[j] && parent[j] == t {
                parent[j] = i;
            }
        }
        if side[parent[t]] {
            parent[i] = parent[t];
            parent[t] = i;
            weight[i] = weight[t];
            weight[t] = value;
        }
    }
    let edges = (1..n).map(|i| (i, parent[i], weight[i])).collect();
    GomoryHuTree::new(n.max(1), edges).expect("Gusfield parents form a tree")
}

/// For each `v` in `terminals`, the minimal minimum cut separating `v` from the others.
///
/// Uses `⌈log₂|R|⌉` bit-partition flows to confine each terminal to a disjoint
/// region, then one flow per terminal inside its region with the outside merged
/// into the sink.
pub fn isolating_cuts_exact(g: &WeightedGraph, terminals: &[usize]) -> Result<BTreeMap<usize, MinCutResult>> {
    let mut r = terminals.to_vec();
    r.sort_unstable();
    r.dedup();
    for &v in &r {
        check_vertex(g, v)?;
    }
    if r.len() < 2 {
        return Err(Error::TooFewTerminals(r.len()));
    }
    let n = g.n();
    // A vertex's signature records its side in each bipartition; terminal i has signature i.
    let mut signature = vec![0usize; n];
    for bit in 0..crate::oracle::ceil_log2(r.len()) {
        let (ones, zeros): (Vec<(usize, usize)>, Vec<(usize, usize)>) =
            r.iter().copied().enumerate().partition(|&(i, _)| i >> bit & 1 == 1);
        let ones: Vec<usize> = ones.into_iter().map(|(_, v)| v).collect();
        let zeros: Vec<usize> = zeros.into_iter().map(|(_, v)| v).collect();
        let (_, side) = min_cut_between(g, &ones, &zeros);
        for x in 0..n {
            if side[x] {
                signature[x] |= 1 << bit;
            }
        }
    }
    let owner: Vec<usize> = signature.iter().map(|&sig| if sig < r.len() { sig } else { usize::MAX }).collect();
    let mut out = BTreeMap::new();
    for (i, &v) in r.iter().enumerate() {
        let region: Vec<usize> = (0..n).filter(|&x| owner[x] == i).collect();
        let mut local = vec![usize::MAX; n];
        for (k, &x) in region.iter().enumerate() {
            local[x] = k;
        }
        let sink = region.len();
        let mut net = FlowNetwork::new(region.len() + 1);
        let mut to_sink: BTreeMap<usize, Scaled> = BTreeMap::new();
        for (a, b, w) in g.edges() {
            match (local[a], local[b]) {
                (usize::MAX, usize::MAX) => {}
                (la, usize::MAX) => *to_sink.entry(la).or_insert(0) += w,
                (usize::MAX, lb) => *to_sink.entry(lb).or_insert(0) += w,
                (la, lb) => net.add_undirected(la, lb, w),
            }
        }
        for (x, w) in to_sink {
            net.add_undirected(x, sink, w);
        }
        let value = net.max_flow(local[v], sink);
        let reach = net.reachable(local[v]);
        let side = region.iter().enumerate().filter(|&(k, _)| reach[k]).map(|(_, &x)| x).collect();
        out.insert(v, MinCutResult { value, side });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verification {
    Ok,
    Fail { s: usize, t: usize, expected: Scaled, got: Scaled },
}

impl Verification {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verification::Ok)
    }
}

/// Compares every tree path minimum with the pairwise max-flow value in `g`.
pub fn verify_gh_tree(g: &WeightedGraph, tree: &GomoryHuTree) -> Result<Verification> {
    tree.validate()?;
    if tree.n() != g.n() {
        return Err(Error::MalformedTree(format!("tree spans {} vertices, graph has {}", tree.n(), g.n())));
    }
    let expected = all_pairs_min_cut(g);
    let got = tree.all_pairs();
    for s in 0..g.n() {
        for t in s + 1..g.n() {
            if expected[s][t] != got[s][t] {
                return Ok(Verification::Fail { s, t, expected: expected[s][t], got: got[s][t] });
            }
        }
    }
    Ok(Verification::Ok)
}
