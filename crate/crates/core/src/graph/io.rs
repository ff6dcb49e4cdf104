//! Plain-text edge lists: a `n m` header, then one `u v` (or `u v w`) line per edge.

use std::fmt::Write as _;

use super::{Graph, Scaled, WeightedGraph};
use crate::error::{Error, Result};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, t)| !t.is_empty())
}

fn field<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse().map_err(|_| parse_err(line, format!("bad {what} `{tok}`")))
}

fn header<'a>(lines: &mut impl Iterator<Item = (usize, Vec<&'a str>)>) -> Result<(usize, usize)> {
    let (line, toks) = lines.next().ok_or_else(|| parse_err(1, "missing `n m` header"))?;
    if toks.len() != 2 {
        return Err(parse_err(line, "header must be `n m`"));
    }
    Ok((field(toks[0], line, "vertex count")?, field(toks[1], line, "edge count")?))
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = data_lines(text);
    let (n, m) = header(&mut lines)?;
    let mut edges = Vec::with_capacity(m);
    for (line, toks) in lines {
        if toks.len() != 2 {
            return Err(parse_err(line, "edge line must be `u v`"));
        }
        edges.push((field(toks[0], line, "endpoint")?, field(toks[1], line, "endpoint")?));
    }
    if edges.len() != m {
        return Err(parse_err(0, format!("header declares {m} edges, found {}", edges.len())));
    }
    Graph::new(n, edges)
}

/// Parses a weighted edge list. `unit` is the scaled weight of one edge; lines
/// without a weight get exactly one unit.
pub fn parse_weighted(text: &str, unit: Scaled) -> Result<WeightedGraph> {
    let mut lines = data_lines(text);
    let (n, m) = header(&mut lines)?;
    let mut g = WeightedGraph::new(n, unit);
    let mut count = 0;
    for (line, toks) in lines {
        let w = match toks.len() {
            2 => unit,
            3 => field(toks[2], line, "weight")?,
            _ => return Err(parse_err(line, "edge line must be `u v [w]`")),
        };
        let (u, v): (usize, usize) = (field(toks[0], line, "endpoint")?, field(toks[1], line, "endpoint")?);
        if u < n && v < n && g.weight(u, v) != 0 {
            return Err(parse_err(line, format!("duplicate edge ({u},{v})")));
        }
        g.add_edge(u, v, w).map_err(|e| parse_err(line, e.to_string()))?;
        count += 1;
    }
    if count != m {
        return Err(parse_err(0, format!("header declares {m} edges, found {count}")));
    }
    Ok(g)
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn write_weighted(g: &WeightedGraph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for (u, v, w) in g.edges() {
        let _ = writeln!(out, "{u} {v} {w}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unweighted_round_trip() {
        let g = Graph::new(4, [(0, 1), (2, 3), (1, 3)]).unwrap();
        let text = write_graph(&g);
        assert_eq!(text, "4 3\n0 1\n1 3\n2 3\n");
        assert_eq!(parse_graph(&text).unwrap(), g);
    }

    #[test]
    fn weighted_round_trip() {
        let mut g = WeightedGraph::new(3, 1 << 20);
        g.add_edge(0, 2, 5).unwrap();
        g.add_edge(1, 2, 1 << 21).unwrap();
        let text = write_weighted(&g);
        assert_eq!(parse_weighted(&text, 1 << 20).unwrap(), g);
    }

    #[test]
    fn rejects_malformed() {
        assert!(matches!(parse_graph(""), Err(Error::Parse { .. })));
        assert!(matches!(parse_graph("3 1\n0 x\n"), Err(Error::Parse { line: 2, .. })));
        assert!(parse_graph("3 2\n0 1\n").is_err());
        assert!(parse_graph("3 1\n0 3\n").is_err());
        assert!(parse_weighted("3 2\n0 1 4\n1 0 4\n", 1).is_err());
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = parse_graph("# demo\n3 2\n\n0 1 # first\n1 2\n").unwrap();
        assert_eq!(g.m(), 2);
    }
}
