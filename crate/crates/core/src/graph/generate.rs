use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};
use crate::seed::Seed;

/// Deterministic graph families used by tests, benchmarks and the CLI.
///
/// Textual form is `name` or `name:param`, e.g. `gnp:0.5` or `two_cliques_bridge:1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Gnp(f64),
    Path,
    Cycle,
    Clique,
    Star,
    /// Two cliques of sizes `⌊n/2⌋` and `⌈n/2⌉` joined by a matching of `b` edges.
    TwoCliquesBridge(usize),
    /// Two halves joined by `k` random matching edges; the minimum cut between
    /// vertex 0 and vertex `n-1` is exactly `k`.
    PlantedCut(usize),
}

impl Family {
    /// For `PlantedCut`, the terminal pair whose minimum cut is planted.
    pub fn planted_terminals(n: usize) -> (usize, usize) {
        (0, n - 1)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Gnp(p) => write!(f, "gnp:{p}"),
            Family::Path => f.write_str("path"),
            Family::Cycle => f.write_str("cycle"),
            Family::Clique => f.write_str("clique"),
            Family::Star => f.write_str("star"),
            Family::TwoCliquesBridge(b) => write!(f, "two_cliques_bridge:{b}"),
            Family::PlantedCut(k) => write!(f, "planted_cut:{k}"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, param) = match s.split_once([':', '(']) {
            Some((name, rest)) => (name.trim(), Some(rest.trim_end_matches(')').trim())),
            None => (s.trim(), None),
        };
        let bad = |msg: &str| Error::InvalidFamily(format!("{s}: {msg}"));
        let count = |p: Option<&str>| -> Result<usize> {
            p.ok_or_else(|| bad("missing parameter"))?.parse().map_err(|_| bad("parameter must be an integer"))
        };
        let family = match name.replace('-', "_").as_str() {
            "gnp" => {
                let p: f64 = param
                    .ok_or_else(|| bad("missing edge probability"))?
                    .parse()
                    .map_err(|_| bad("edge probability must be a number"))?;
                Family::Gnp(p)
            }
            "path" => Family::Path,
            "cycle" => Family::Cycle,
            "clique" => Family::Clique,
            "star" => Family::Star,
            "two_cliques_bridge" | "barbell" => Family::TwoCliquesBridge(param.map_or(Ok(1), |p| count(Some(p)))?),
            "planted_cut" => Family::PlantedCut(count(param)?),
            _ => return Err(bad("unknown family")),
        };
        if param.is_some() && matches!(family, Family::Path | Family::Cycle | Family::Clique | Family::Star) {
            return Err(bad("family takes no parameter"));
        }
        Ok(family)
    }
}

/// Builds a member of `family` on `n` vertices. Deterministic in all arguments.
pub fn generate(family: Family, n: usize, seed: Seed) -> Result<Graph> {
    let invalid = |msg: String| Error::InvalidFamily(format!("{family} with n={n}: {msg}"));
    if n < 2 {
        return Err(invalid("need at least 2 vertices".into()));
    }
    let mut edges = Vec::new();
    let clique = |edges: &mut Vec<(usize, usize)>, lo: usize, hi: usize| {
        for u in lo..hi {
            for v in u + 1..hi {
                edges.push((u, v));
            }
        }
    };
    match family {
        Family::Gnp(p) => {
            if !(0.0..=1.0).contains(&p) {
                return Err(invalid("edge probability outside [0, 1]".into()));
            }
            let mut rng = seed.derive("gnp").rng();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random_bool(p) {
                        edges.push((u, v));
                    }
                }
            }
        }
        Family::Path => edges.extend((1..n).map(|v| (v - 1, v))),
        Family::Cycle => {
            if n < 3 {
                return Err(invalid("cycle needs at least 3 vertices".into()));
            }
            edges.extend((1..n).map(|v| (v - 1, v)));
            edges.push((0, n - 1));
        }
        Family::Clique => clique(&mut edges, 0, n),
        Family::Star => edges.extend((1..n).map(|v| (0, v))),
        Family::TwoCliquesBridge(b) => {
            let half = n / 2;
            if b == 0 || b > half {
                return Err(invalid(format!("bridge count must be in 1..={half}")));
            }
            clique(&mut edges, 0, half);
            clique(&mut edges, half, n);
            edges.extend((0..b).map(|i| (i, half + i)));
        }
        Family::PlantedCut(k) => {
            let half = n / 2;
            if half < 2 || k + 2 > half {
                return Err(invalid(format!("planted cut needs k <= n/2 - 2, got k={k}")));
            }
            clique(&mut edges, 0, half);
            clique(&mut edges, half, n);
            let mut rng = seed.derive("planted").rng();
            let mut left: Vec<usize> = (0..half).collect();
            let mut right: Vec<usize> = (half..n).collect();
            left.shuffle(&mut rng);
            right.shuffle(&mut rng);
            edges.extend(left.into_iter().zip(right).take(k));
        }
    }
    Graph::new(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_and_clique() {
        assert_eq!(generate(Family::Path, 4, Seed(0)).unwrap().edges(), &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(generate(Family::Clique, 4, Seed(0)).unwrap().m(), 6);
    }

    #[test]
    fn barbell_has_one_bridge() {
        let g = generate(Family::TwoCliquesBridge(1), 8, Seed(0)).unwrap();
        assert_eq!(g.m(), 13);
        let left: Vec<bool> = (0..8).map(|v| v < 4).collect();
        assert_eq!(g.cut_size(&left), 1);
    }

    #[test]
    fn gnp_is_deterministic() {
        let a = generate(Family::Gnp(0.5), 16, Seed(7)).unwrap();
        assert_eq!(a, generate(Family::Gnp(0.5), 16, Seed(7)).unwrap());
        assert_ne!(a, generate(Family::Gnp(0.5), 16, Seed(8)).unwrap());
    }

    #[test]
    fn planted_cut_crossing() {
        let g = generate(Family::PlantedCut(3), 12, Seed(4)).unwrap();
        let left: Vec<bool> = (0..12).map(|v| v < 6).collect();
        assert_eq!(g.cut_size(&left), 3);
        assert!(generate(Family::PlantedCut(5), 12, Seed(4)).is_err());
    }

    #[test]
    fn parse_round_trip() {
        for f in [
            Family::Gnp(0.25),
            Family::Path,
            Family::Cycle,
            Family::Clique,
            Family::Star,
            Family::TwoCliquesBridge(2),
            Family::PlantedCut(3),
        ] {
            assert_eq!(f.to_string().parse::<Family>().unwrap(), f);
        }
        assert_eq!("gnp(0.5)".parse::<Family>().unwrap(), Family::Gnp(0.5));
        assert!("gnp".parse::<Family>().is_err());
        assert!("torus".parse::<Family>().is_err());
        assert!(generate(Family::Gnp(1.5), 4, Seed(0)).is_err());
    }
}
