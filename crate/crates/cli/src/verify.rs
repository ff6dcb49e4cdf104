//! Checks an artifact against the explicit graph it was computed from.

use cutquery::exact::{isolating_cuts_exact, min_st_cut, verify_gh_tree, GomoryHuTree, Verification};
use cutquery::expander::{check_decomposition, Certificate, ExpanderDecomposition};
use cutquery::friendly::{cut_preserved, friendliness_ok};
use cutquery::graph::{contract, ContractionMap};
use cutquery::sparsify::DisjointSets;
use cutquery::{CutSet, Graph, Scaled, Seed, WeightedGraph};
use rand::Rng as _;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};

/// Graphs up to this size get every cut checked; larger ones a random sample.
pub const EXHAUSTIVE_CUTS: usize = 16;
const SAMPLED_CUTS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub ok: bool,
    pub detail: Value,
}

impl Verdict {
    fn pass(detail: Value) -> Self {
        Self { ok: true, detail }
    }

    fn fail(detail: Value) -> Self {
        Self { ok: false, detail }
    }
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Artifact(msg.into())
}

fn usize_at(v: &Value, key: &str) -> CliResult<usize> {
    v[key].as_u64().map(|x| x as usize).ok_or_else(|| bad(format!("missing integer `{key}`")))
}

fn f64_at(v: &Value, key: &str) -> CliResult<f64> {
    v[key].as_f64().ok_or_else(|| bad(format!("missing number `{key}`")))
}

fn scaled(v: &Value) -> CliResult<Scaled> {
    match v {
        Value::String(s) => s.parse().map_err(|_| bad(format!("bad scaled value `{s}`"))),
        Value::Number(x) => x.as_i64().map(Scaled::from).ok_or_else(|| bad("bad scaled value")),
        _ => Err(bad("expected a scaled value")),
    }
}

fn scaled_at(v: &Value, key: &str) -> CliResult<Scaled> {
    scaled(&v[key]).map_err(|e| bad(format!("`{key}`: {e}")))
}

fn vertices(v: &Value) -> CliResult<Vec<usize>> {
    v.as_array()
        .ok_or_else(|| bad("expected a vertex list"))?
        .iter()
        .map(|x| x.as_u64().map(|x| x as usize).ok_or_else(|| bad("bad vertex")))
        .collect()
}

fn vertex_lists(v: &Value) -> CliResult<Vec<Vec<usize>>> {
    v.as_array().ok_or_else(|| bad("expected a list of vertex lists"))?.iter().map(vertices).collect()
}

fn pairs(v: &Value) -> CliResult<Vec<(usize, usize)>> {
    vertex_lists(v)?
        .into_iter()
        .map(|p| match p[..] {
            [a, b] => Ok((a, b)),
            _ => Err(bad("expected a vertex pair")),
        })
        .collect()
}

fn weighted_edges(v: &Value, n: usize, unit: Scaled) -> CliResult<WeightedGraph> {
    let mut g = WeightedGraph::new(n, unit);
    for e in v.as_array().ok_or_else(|| bad("missing edge list"))? {
        let idx = |i: usize| e[i].as_u64().map(|x| x as usize).ok_or_else(|| bad("bad endpoint"));
        g.add_edge(idx(0)?, idx(1)?, scaled(&e[2])?)?;
    }
    Ok(g)
}

/// Sides to test: every cut containing vertex 0 for small graphs, otherwise
/// all singletons plus seeded random sides.
fn test_sides(n: usize) -> Vec<Vec<bool>> {
    if n <= EXHAUSTIVE_CUTS {
        return (1u32..1 << n)
            .filter(|m| m & 1 == 1 && *m != (1 << n) - 1)
            .map(|m| (0..n).map(|v| m >> v & 1 == 1).collect())
            .collect();
    }
    let mut out: Vec<Vec<bool>> = (0..n).map(|v| (0..n).map(|x| x == v).collect()).collect();
    let mut rng = Seed(0x5EED).rng();
    while out.len() < SAMPLED_CUTS {
        let p = rng.random_range(0.05..0.95);
        let side: Vec<bool> = (0..n).map(|_| rng.random_bool(p)).collect();
        if side.iter().any(|&b| b) && side.iter().any(|&b| !b) {
            out.push(side);
        }
    }
    out
}

fn sides_json(side: &[bool]) -> Value {
    json!(CutSet::from_mask(side).members())
}

pub fn verify(g: &Graph, artifact: &Value) -> CliResult<Verdict> {
    let kind = artifact["kind"].as_str().ok_or_else(|| bad("missing `kind`"))?;
    let n = usize_at(artifact, "n")?;
    if n != g.n() {
        return Err(bad(format!("artifact covers {n} vertices, graph has {}", g.n())));
    }
    match kind {
        "gomory_hu" => gomory_hu(g, artifact),
        "single_source" => single_source(g, artifact),
        "isolating" => isolating(g, artifact),
        "friendly_sparsifier" => friendly(g, artifact),
        "star_contraction" => star(g, artifact),
        "ni" => ni(g, artifact),
        "cut_sparsifier" => cut_sparsifier(g, artifact),
        "expander" => expander(g, artifact),
        other => Err(bad(format!("unknown artifact kind `{other}`"))),
    }
}

fn gomory_hu(g: &Graph, a: &Value) -> CliResult<Verdict> {
    let unit = scaled_at(a, "unit")?;
    let tree = GomoryHuTree::from_json(a)?;
    let outcome = verify_gh_tree(&g.to_weighted(unit), &tree)?;
    Ok(match outcome {
        Verification::Ok => Verdict::pass(json!({ "pairs": g.n() * (g.n() - 1) / 2 })),
        Verification::Fail { s, t, expected, got } => Verdict::fail(json!({
            "s": s,
            "t": t,
            "expected": expected.to_string(),
            "got": got.to_string(),
        })),
    })
}

fn single_source(g: &Graph, a: &Value) -> CliResult<Verdict> {
    let pivot = usize_at(a, "pivot")?;
    let unit_graph = g.to_weighted(1);
    let cuts = a["cuts"].as_object().ok_or_else(|| bad("missing `cuts`"))?;
    for v in (0..g.n()).filter(|&v| v != pivot) {
        let Some(entry) = cuts.get(&v.to_string()) else {
            return Ok(Verdict::fail(json!({ "missing_target": v })));
        };
        let side = CutSet::new(vertices(&entry["cut"])?);
        if !side.contains(v) || side.contains(pivot) {
            return Ok(Verdict::fail(json!({ "target": v, "reason": "cut does not separate target from pivot" })));
        }
        let got = g.cut_size(&side.mask(g.n())) as Scaled;
        let expected = min_st_cut(&unit_graph, v, pivot)?.value;
        if got != expected {
            return Ok(Verdict::fail(json!({ "target": v, "expected": expected, "got": got })));
        }
    }
    Ok(Verdict::pass(json!({ "targets": g.n() - 1 })))
}

fn isolating(g: &Graph, a: &Value) -> CliResult<Verdict> {
    let terminals = vertices(&a["terminals"])?;
    let exact = isolating_cuts_exact(&g.to_weighted(1), &terminals)?;
    let cuts = a["cuts"].as_object().ok_or_else(|| bad("missing `cuts`"))?;
    let mut minimum = 0;
    for (key, entry) in cuts {
        let v: usize = key.parse().map_err(|_| bad(format!("bad terminal `{key}`")))?;
        let side = CutSet::new(vertices(&entry["cut"])?);
        let inside: Vec<usize> = terminals.iter().copied().filter(|&t| side.contains(t)).collect();
        if inside != [v] || side.len() == g.n() {
            return Ok(Verdict::fail(json!({ "terminal": v, "reason": "cut does not isolate its terminal" })));
        }
        let Some(best) = exact.get(&v) else {
            return Ok(Verdict::fail(json!({ "terminal": v, "reason": "not a terminal" })));
        };
        let got = g.cut_size(&side.mask(g.n())) as Scaled;
        if got < best.value {
            return Ok(Verdict::fail(json!({ "terminal": v, "reason": "below the isolating minimum", "got": got })));
        }
        if got == best.value {
            minimum += 1;
        }
    }
    Ok(Verdict::pass(json!({ "returned": cuts.len(), "minimum": minimum, "terminals": terminals.len() })))
}

fn friendly(g: &Graph, a: &Value) -> CliResult<Verdict> {
    let n = g.n();
    let (alpha, w) = (f64_at(a, "alpha")?, usize_at(a, "w")?);
    let unit = scaled_at(a, "unit")?;
    let map = ContractionMap::from_blocks(n, vertex_lists(&a["blocks"])?)?;
    let claimed = weighted_edges(&a["edges"], map.num_blocks(), unit)?;
    if contract(&g.to_weighted(unit), &map)? != claimed {
        return Ok(Verdict::fail(json!({ "reason": "edges differ from the contraction of the graph" })));
    }
    let mut friendly_cuts = 0;
    for side in test_sides(n) {
        let s = CutSet::from_mask(&side);
        if g.cut_size(&side) <= w && friendliness_ok(g, &s, alpha) {
            friendly_cuts += 1;
            if !cut_preserved(&map, g, &s) {
                return Ok(Verdict::fail(json!({ "reason": "friendly cut not preserved", "side": sides_json(&side) })));
            }
        }
    }
    Ok(Verdict::pass(json!({ "blocks": map.num_blocks(), "friendly_cuts_checked": friendly_cuts })))
}

fn star(g: &Graph, a: &Value) -> CliResult<Verdict> {
    let n = g.n();
    let tau = usize_at(a, "tau")?;
    let fixed = CutSet::new(vertices(&a["fixed"])?);
    let centres = CutSet::new(vertices(&a["centres"])?);
    let degrees = g.degrees();
    let high: Vec<usize> = (0..n).filter(|&v| !fixed.contains(v) && degrees[v] >= tau).collect();
    if vertices(&a["high"])? != high {
        return Ok(Verdict::fail(json!({ "reason": "high-degree set differs", "expected": high })));
    }
    let mut sets = DisjointSets::new(n);
    for (u, c) in pairs(&a["contracted_edges"])? {
        if !g.has_edge(u, c) || !centres.contains(c) || centres.contains(u) || fixed.contains(u) || degrees[u] < tau {
            return Ok(Verdict::fail(json!({ "reason": "invalid contracted edge", "edge": [u, c] })));
        }
        sets.union(u, c);
    }
    let labels: Vec<usize> = (0..n).map(|v| sets.find(v)).collect();
    let expected = ContractionMap::from_labels(&labels);
    let got = ContractionMap::from_blocks(n, vertex_lists(&a["blocks"])?)?;
    if expected.blocks() != got.blocks() {
        return Ok(Verdict::fail(json!({ "reason": "blocks differ from the contracted edges" })));
    }
    Ok(Verdict::pass(json!({ "blocks": got.num_blocks(), "high": high.len() })))
}

fn ni(g: &Graph, a: &Value) -> CliResult<Verdict> {
    let n = g.n();
    let k = usize_at(a, "k")?;
    let forests: Vec<Vec<(usize, usize)>> =
        a["forests"].as_array().ok_or_else(|| bad("missing `forests`"))?.iter().map(pairs).collect::<CliResult<_>>()?;
    let mut used = std::collections::BTreeSet::new();
    let mut h = Graph::empty(n).to_weighted(1);
    for (j, forest) in forests.iter().enumerate() {
        let mut sets = DisjointSets::new(n);
        for &(u, v) in forest {
            if !g.has_edge(u, v) || !used.insert((u.min(v), u.max(v))) || !sets.union(u, v) {
                return Ok(Verdict::fail(json!({ "reason": "forest edge missing, reused or closing a cycle", "forest": j, "edge": [u, v] })));
            }
            h.add_edge(u, v, 1)?;
        }
    }
    for side in test_sides(n) {
        let (cg, ch) = (g.cut_size(&side) as Scaled, h.cut_weight(&side));
        if ch < cg.min(k as Scaled) {
            return Ok(Verdict::fail(json!({ "reason": "cut below min(value, k)", "side": sides_json(&side), "graph": cg, "sparsifier": ch })));
        }
    }
    Ok(Verdict::pass(json!({ "edges": used.len(), "k": k })))
}

fn cut_sparsifier(g: &Graph, a: &Value) -> CliResult<Verdict> {
    let n = g.n();
    let eps = f64_at(a, "eps")?;
    let unit = scaled_at(a, "unit")?;
    let h = weighted_edges(&a["edges"], n, unit)?;
    let mut worst: f64 = 0.0;
    for side in test_sides(n) {
        let cg = g.cut_size(&side) as f64;
        let ch = h.cut_weight(&side) as f64 / unit as f64;
        let err = if cg == 0.0 { if ch == 0.0 { 0.0 } else { f64::INFINITY } } else { (ch - cg).abs() / cg };
        worst = worst.max(err);
    }
    let detail = json!({ "worst_relative_error": worst, "eps": eps });
    Ok(if worst <= eps { Verdict::pass(detail) } else { Verdict::fail(detail) })
}

fn expander(g: &Graph, a: &Value) -> CliResult<Verdict> {
    let unit = scaled_at(a, "unit")?;
    let d = &a["decomposition"];
    let certificates: Vec<Certificate> =
        serde_json::from_value(d["certificates"].clone()).map_err(|e| bad(format!("certificates: {e}")))?;
    let decomposition = ExpanderDecomposition {
        clusters: vertex_lists(&d["clusters"])?,
        phi: f64_at(d, "phi")?,
        inter_weight: scaled_at(d, "inter_weight")?,
        rounds: usize_at(d, "rounds")?,
        certificates,
    };
    let demand: Vec<Scaled> = vertices(&a["demand_units"])?.into_iter().map(|x| x as Scaled * unit).collect();
    let c_dec = f64_at(a, "c_dec")?;
    let limit = usize_at(a, "exhaustive_limit")?;
    match check_decomposition(&g.to_weighted(unit), &demand, &decomposition, c_dec, limit) {
        Ok(()) => Ok(Verdict::pass(json!({ "clusters": decomposition.clusters.len() }))),
        Err(fault) => Ok(Verdict::fail(json!({ "fault": format!("{fault:?}") }))),
    }
}
