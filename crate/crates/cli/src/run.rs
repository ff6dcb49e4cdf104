//! Runs one algorithm against a metered oracle and packages the result.

use std::str::FromStr;
use std::time::Instant;

use clap::ValueEnum;
use cutquery::expander::expander_decompose;
use cutquery::friendly::friendly_sparsify;
use cutquery::gomory_hu::gomory_hu;
use cutquery::graph::PerturbationScheme;
use cutquery::isolating::weak_isolating_cuts;
use cutquery::oracle::CutOracle;
use cutquery::single_source::{single_source_min_cuts, PivotPartition};
use cutquery::sparsify::{cut_sparsify, ni_sparsify};
use cutquery::star::star_contract;
use cutquery::{Graph, Scaled, Seed};
use serde_json::{json, Value};

use crate::config::Settings;
use crate::error::{CliError, CliResult};
use crate::verify::{verify, Verdict};

/// Largest graph verified by default; bigger runs need `verify = true`.
pub const AUTO_VERIFY_LIMIT: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    GomoryHu,
    SingleSource,
    Isolating,
    FriendlySparsifier,
    StarContraction,
    Ni,
    CutSparsifier,
    Expander,
}

impl Algo {
    /// Artifact kind and ledger phase name.
    pub fn kind(self) -> &'static str {
        match self {
            Algo::GomoryHu => "gomory_hu",
            Algo::SingleSource => "single_source",
            Algo::Isolating => "isolating",
            Algo::FriendlySparsifier => "friendly_sparsifier",
            Algo::StarContraction => "star_contraction",
            Algo::Ni => "ni",
            Algo::CutSparsifier => "cut_sparsifier",
            Algo::Expander => "expander",
        }
    }
}

impl FromStr for Algo {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        <Algo as ValueEnum>::from_str(&s.replace('_', "-"), true).map_err(|_| CliError::Config(format!("unknown algorithm `{s}`")))
    }
}

/// Artifact plus the oracle it was computed through.
pub struct Computed {
    pub artifact: Value,
    pub oracle: CutOracle,
}

fn vertex_list(settings: &Settings, key: &str, n: usize) -> CliResult<Option<Vec<usize>>> {
    let raw = settings.list(key)?;
    if raw.is_empty() {
        return Ok(None);
    }
    let out: Vec<usize> = raw.into_iter().map(|v| v as usize).collect();
    if let Some(&v) = out.iter().find(|&&v| v >= n) {
        return Err(CliError::Config(format!("`{key}` names vertex {v} of a graph with {n} vertices")));
    }
    Ok(Some(out))
}

fn edge_list(edges: impl Iterator<Item = (usize, usize, Scaled)>) -> Value {
    edges.map(|(u, v, w)| json!([u, v, w.to_string()])).collect()
}

/// Runs `algo` on a fresh oracle over `g`. Queries are charged under `algo.kind()`.
pub fn compute(algo: Algo, g: &Graph, settings: &Settings, seed: Seed) -> CliResult<Computed> {
    let n = g.n();
    let base = CutOracle::new(g);
    let o = base.with_phase(algo.kind());
    let unit = o.unit();
    let gh = settings.gomory_hu()?;
    let ss = gh.single_source;
    let run_seed = seed.derive(algo.kind());
    let scheme = || PerturbationScheme::new(seed.derive("perturbation"), n);
    let mut artifact = match algo {
        Algo::GomoryHu => {
            let outcome = gomory_hu(&o, &scheme()?, &gh, run_seed)?;
            outcome.to_json()
        }
        Algo::SingleSource => {
            let pivot: usize = settings.get_or("pivot", 0)?;
            let pp = PivotPartition::single(n, pivot)?;
            let result = single_source_min_cuts(&o, &pp, &scheme()?, &ss, run_seed)?;
            json!({ "pivot": pivot, "cuts": result.to_json() })
        }
        Algo::Isolating => {
            let terminals = vertex_list(settings, "terminals", n)?.unwrap_or_else(|| (0..n).collect());
            let result = weak_isolating_cuts(&o, &terminals, &scheme()?, None, &ss.isolating, run_seed)?;
            json!({ "terminals": terminals, "branch": result.branch, "cuts": result.to_json() })
        }
        Algo::FriendlySparsifier => {
            let alpha = settings.get_or("alpha", ss.alpha)?;
            let w = settings.get_or("w", n)?;
            let keep = vertex_list(settings, "terminals", n)?.unwrap_or_default();
            friendly_sparsify(&o, alpha, w, &keep, &ss.friendly, run_seed)?.to_json()
        }
        Algo::StarContraction => {
            let tau = settings.get_or("tau", ss.isolating.tau(n))?;
            let fixed = vertex_list(settings, "terminals", n)?.unwrap_or_default();
            let outcome = star_contract(&o, tau, &fixed, None, &ss.isolating.star, run_seed)?;
            let mut v = outcome.to_json();
            v["tau"] = tau.into();
            v["fixed"] = json!(fixed);
            v
        }
        Algo::Ni => {
            let k = settings.get_or("k", (n as f64).sqrt().ceil() as usize)?;
            let ni = ni_sparsify(&o, k.max(1), run_seed)?;
            json!({ "k": ni.k, "forests": ni.forests, "edge_count": ni.edge_count() })
        }
        Algo::CutSparsifier => {
            let eps = settings.get_or("eps", 0.5)?;
            let h = cut_sparsify(&o, eps, &ss.sparsifier, run_seed)?;
            json!({ "eps": eps, "edges": edge_list(h.edges()) })
        }
        Algo::Expander => {
            let config = settings.expander(ss.friendly.expander)?;
            let degrees = o.with_phase("degrees").degrees()?;
            let demand: Vec<Scaled> = degrees.iter().map(|&d| Scaled::from(d) * unit).collect();
            let decomposition = expander_decompose(&o, &demand, &config, run_seed)?;
            json!({
                "demand_units": degrees,
                "c_dec": config.c_dec,
                "exhaustive_limit": config.exhaustive_limit,
                "decomposition": decomposition.to_json(),
            })
        }
    };
    artifact["kind"] = algo.kind().into();
    artifact["n"] = n.into();
    artifact["unit"] = unit.to_string().into();
    Ok(Computed { artifact, oracle: base })
}

/// Whether `settings` asks for verification of an `n`-vertex run.
pub fn should_verify(settings: &Settings, n: usize) -> CliResult<bool> {
    match settings.raw("verify").unwrap_or("auto") {
        "auto" => Ok(n <= AUTO_VERIFY_LIMIT),
        other => other.parse().map_err(|_| CliError::Config(format!("`verify` must be auto, true or false, got `{other}`"))),
    }
}

pub struct Report {
    pub json: Value,
    pub artifact: Value,
    pub verdict: Option<Verdict>,
}

pub fn run(algo: Algo, g: &Graph, settings: &Settings, seed: Seed) -> CliResult<Report> {
    let start = Instant::now();
    let computed = compute(algo, g, settings, seed)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1000.0;
    let verdict = if should_verify(settings, g.n())? { Some(verify(g, &computed.artifact)?) } else { None };
    let ledger = computed.oracle.ledger();
    let json = json!({
        "algorithm": algo.kind(),
        "n": g.n(),
        "m": g.m(),
        "seed": seed.0,
        "queries": ledger.total(),
        "phases": ledger.to_json(),
        "wall_ms": wall_ms,
        "verification": verdict,
    });
    Ok(Report { json, artifact: computed.artifact, verdict })
}
