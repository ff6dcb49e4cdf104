mod bench;
mod config;
mod error;
mod run;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cutquery::graph::{generate, parse_graph, write_graph};
use cutquery::{Graph, Seed};

use config::Settings;
use error::{CliError, CliResult};
use run::Algo;

#[derive(Parser)]
#[command(name = "cutquery", version, about = "Cut-query Gomory-Hu experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// `key = value` config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Config override, repeatable.
    #[arg(long = "override", value_name = "KEY=VAL")]
    overrides: Vec<String>,
}

impl Common {
    fn settings(&self) -> CliResult<Settings> {
        let mut s = match &self.config {
            Some(path) => Settings::parse(&read(path)?)?,
            None => Settings::default(),
        };
        s.apply_overrides(&self.overrides)?;
        Ok(s)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph from a family.
    Gen {
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output edge list; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Run one algorithm and print a JSON report.
    Run {
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long, value_enum)]
        algo: Option<Algo>,
        /// Generate an `n`-vertex graph from `family` instead of reading one.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Where to write the artifact; embedded in the report when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Check an artifact against its graph.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        artifact: PathBuf,
    },
    /// Sweep sizes and seeds, writing per-phase query counts as CSV.
    Bench {
        #[arg(long)]
        algo: Option<Algo>,
        /// Comma list of sizes.
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path.display().to_string(), e))
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::io(path.display().to_string(), e))
}

fn emit(out: Option<&PathBuf>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn set_opt(s: &mut Settings, key: &str, value: Option<String>) -> CliResult<()> {
    match value {
        Some(v) => s.set(key, &v),
        None => Ok(()),
    }
}

fn generated(s: &Settings) -> CliResult<Graph> {
    let n: usize = s.get("n")?.ok_or_else(|| CliError::Config("`n` is required to generate a graph".into()))?;
    let seed: u64 = s.get_or("seed", 0)?;
    Ok(generate(s.family()?, n, Seed(seed))?)
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize") + "\n"
}

/// `Ok(false)` means a verification failed.
fn execute(cli: Cli) -> CliResult<bool> {
    match cli.command {
        Command::Gen { family, n, seed, out, common } => {
            let mut s = common.settings()?;
            set_opt(&mut s, "family", family)?;
            set_opt(&mut s, "n", n.map(|v| v.to_string()))?;
            set_opt(&mut s, "seed", seed.map(|v| v.to_string()))?;
            let g = generated(&s)?;
            emit(out.as_ref().or(s.raw("out").map(PathBuf::from).as_ref()), &write_graph(&g))?;
            Ok(true)
        }
        Command::Run { graph, algo, n, family, seed, out, common } => {
            let mut s = common.settings()?;
            set_opt(&mut s, "family", family)?;
            set_opt(&mut s, "n", n.map(|v| v.to_string()))?;
            set_opt(&mut s, "seed", seed.map(|v| v.to_string()))?;
            let graph = graph.or_else(|| s.raw("graph").map(PathBuf::from));
            let g = match &graph {
                Some(path) => parse_graph(&read(path)?)?,
                None => generated(&s)?,
            };
            let algo = match algo {
                Some(a) => a,
                None => s.raw("algo").unwrap_or("gomory-hu").parse()?,
            };
            let seed = Seed(s.get_or("seed", 0)?);
            let report = run::run(algo, &g, &s, seed)?;
            let mut json = report.json;
            match out.or_else(|| s.raw("out").map(PathBuf::from)) {
                Some(path) => write(&path, &pretty(&report.artifact))?,
                None => json["artifact"] = report.artifact,
            }
            print!("{}", pretty(&json));
            Ok(report.verdict.is_none_or(|v| v.ok))
        }
        Command::Verify { graph, artifact } => {
            let g = parse_graph(&read(&graph)?)?;
            let a: serde_json::Value =
                serde_json::from_str(&read(&artifact)?).map_err(|e| CliError::Artifact(e.to_string()))?;
            let verdict = verify::verify(&g, &a)?;
            print!("{}", pretty(&serde_json::to_value(&verdict).expect("verdicts serialize")));
            Ok(verdict.ok)
        }
        Command::Bench { algo, n, out, common } => {
            let mut s = common.settings()?;
            set_opt(&mut s, "n", n)?;
            if let Some(a) = algo {
                s.set("algo", a.kind())?;
            }
            let rows = bench::sweep(&s)?;
            match out.or_else(|| s.raw("out").map(PathBuf::from)) {
                Some(path) => {
                    let file = std::fs::File::create(&path).map_err(|e| CliError::io(path.display().to_string(), e))?;
                    bench::write_csv(&rows, file)?;
                }
                None => bench::write_csv(&rows, std::io::stdout().lock())?,
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
