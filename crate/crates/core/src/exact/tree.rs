use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Scaled;

/// Weighted spanning tree on `0..n` whose path minima are pairwise minimum cut values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GomoryHuTree {
    n: usize,
    edges: Vec<(usize, usize, Scaled)>,
}

impl GomoryHuTree {
    pub fn new(n: usize, edges: Vec<(usize, usize, Scaled)>) -> Result<Self> {
        let tree = Self { n, edges };
        tree.validate()?;
        Ok(tree)
    }

    /// Checks that the edges form a spanning tree on `0..n`.
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if n == 0 {
            return Err(Error::MalformedTree("tree has no vertices".into()));
        }
        if self.edges.len() != n - 1 {
            return Err(Error::MalformedTree(format!("{} edges for {n} vertices", self.edges.len())));
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(u, v, w) in &self.edges {
            if u >= n || v >= n || u == v {
                return Err(Error::MalformedTree(format!("bad edge ({u},{v})")));
            }
            if w < 0 {
                return Err(Error::MalformedTree(format!("negative weight on ({u},{v})")));
            }
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a == b {
                return Err(Error::MalformedTree(format!("edge ({u},{v}) closes a cycle")));
            }
            parent[a] = b;
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, Scaled)] {
        &self.edges
    }

    pub fn edges_mut(&mut self) -> &mut Vec<(usize, usize, Scaled)> {
        &mut self.edges
    }

    fn adjacency(&self) -> Vec<Vec<(usize, Scaled)>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v, w) in &self.edges {
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        adj
    }

    /// Smallest weight on the tree path from `src` to every vertex (`None` at `src`).
    fn path_minima_from(&self, adj: &[Vec<(usize, Scaled)>], src: usize) -> Vec<Option<Scaled>> {
        let mut best = vec![None; self.n];
        let mut seen = vec![false; self.n];
        seen[src] = true;
        let mut stack = vec![src];
        while let Some(u) = stack.pop() {
            for &(v, w) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    best[v] = Some(best[u].map_or(w, |b: Scaled| b.min(w)));
                    stack.push(v);
                }
            }
        }
        best
    }

    pub fn path_min(&self, s: usize, t: usize) -> Scaled {
        self.path_minima_from(&self.adjacency(), s)[t].expect("s and t must differ")
    }

    /// Matrix of path minima; the diagonal is zero.
    pub fn all_pairs(&self) -> Vec<Vec<Scaled>> {
        let adj = self.adjacency();
        (0..self.n).map(|s| self.path_minima_from(&adj, s).into_iter().map(|x| x.unwrap_or(0)).collect()).collect()
    }

    /// The side containing `s` after deleting tree edge `index`.
    pub fn edge_side(&self, index: usize) -> Vec<usize> {
        let (u, _, _) = self.edges[index];
        let mut adj = vec![Vec::new(); self.n];
        for (i, &(a, b, _)) in self.edges.iter().enumerate() {
            if i != index {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        let mut seen = vec![false; self.n];
        seen[u] = true;
        let mut stack = vec![u];
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        (0..self.n).filter(|&v| seen[v]).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "edges": self.edges.iter().map(|&(u, v, w)| serde_json::json!([u, v, w.to_string()])).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let bad = |msg: &str| Error::MalformedTree(msg.to_owned());
        let n = value["n"].as_u64().ok_or_else(|| bad("missing n"))? as usize;
        let mut edges = Vec::new();
        for e in value["edges"].as_array().ok_or_else(|| bad("missing edges"))? {
            let idx = |i: usize| e[i].as_u64().map(|x| x as usize).ok_or_else(|| bad("bad endpoint"));
            let w = match &e[2] {
                serde_json::Value::String(s) => s.parse().map_err(|_| bad("bad weight"))?,
                serde_json::Value::Number(x) => x.as_i64().ok_or_else(|| bad("bad weight"))? as Scaled,
                _ => return Err(bad("bad weight")),
            };
            edges.push((idx(0)?, idx(1)?, w));
        }
        Self::new(n, edges)
    }
}
