//! Query-count sweeps over graph sizes and seeds, written as CSV.

use std::io::Write;

use cutquery::graph::generate;
use cutquery::Seed;
use serde::Serialize;

use crate::config::Settings;
use crate::error::CliResult;
use crate::run::{compute, should_verify, Algo};
use crate::verify::verify;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Row {
    pub family: String,
    pub n: usize,
    pub seed: u64,
    pub phase: String,
    pub queries: u64,
    pub success: bool,
    pub baseline: u64,
}

/// Query cost of recovering every pair by three cut queries.
pub fn baseline(n: usize) -> u64 {
    let n = n as u64;
    3 * n * n.saturating_sub(1) / 2
}

fn one(algo: Algo, settings: &Settings, n: usize, seed: u64) -> CliResult<Vec<Row>> {
    let family = settings.family()?;
    let g = generate(family, n, Seed(seed))?;
    let row = |phase: String, queries: u64, success: bool| Row {
        family: family.to_string(),
        n,
        seed,
        phase,
        queries,
        success,
        baseline: baseline(n),
    };
    let computed = match compute(algo, &g, settings, Seed(seed)) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("n={n} seed={seed}: {e}");
            return Ok(vec![row("total".into(), 0, false)]);
        }
    };
    let success = !should_verify(settings, n)? || verify(&g, &computed.artifact)?.ok;
    let ledger = computed.oracle.ledger();
    let mut rows: Vec<Row> = ledger.per_phase().into_iter().map(|(p, q)| row(p, q, success)).collect();
    rows.push(row("total".into(), ledger.total(), success));
    Ok(rows)
}

/// Every `(n, seed)` pair of the sweep; seeds of one size run concurrently.
pub fn sweep(settings: &Settings) -> CliResult<Vec<Row>> {
    let algo: Algo = settings.raw("algo").unwrap_or("gomory-hu").parse()?;
    let sizes = settings.list("n")?;
    let mut seeds = settings.list("seeds")?;
    if seeds.is_empty() {
        seeds = settings.list("seed")?;
    }
    if seeds.is_empty() {
        seeds.push(0);
    }
    let mut rows = Vec::new();
    for n in sizes {
        let results: Vec<CliResult<Vec<Row>>> = std::thread::scope(|scope| {
            let handles: Vec<_> =
                seeds.iter().map(|&seed| scope.spawn(move || one(algo, settings, n as usize, seed))).collect();
            handles.into_iter().map(|h| h.join().expect("bench worker panicked")).collect()
        });
        for r in results {
            rows.extend(r?);
        }
    }
    Ok(rows)
}

pub fn write_csv(rows: &[Row], out: impl Write) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record(["family", "n", "seed", "phase", "queries", "success", "baseline"])?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| crate::error::CliError::io("csv output", e))?;
    Ok(())
}
