//! Metered access to a hidden graph through cut queries.
//!
//! A [`CutOracle`] is a view of the hidden graph: possibly contracted, with
//! known edges subtracted, or restricted to an induced subgraph. Views share
//! one [`QueryLedger`], and every evaluation of a cut of the hidden graph is
//! charged to the phase of the view that issued it.

mod hidden;
mod ledger;

pub use ledger::QueryLedger;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{scale_for, ContractionMap, CutSet, Graph, Scaled, WeightedGraph};
use hidden::{get, set, words, Bits, HiddenGraph};

/// An edge `(a, b)` of a view with its multiplicity.
pub type Multiedge = (usize, usize, i64);

/// `⌈log₂ x⌉` for `x ≥ 1`, and 0 for `x ≤ 1`.
pub fn ceil_log2(x: usize) -> u32 {
    if x <= 1 {
        0
    } else {
        usize::BITS - (x - 1).leading_zeros()
    }
}

/// Known edges subtracted from a view, indexed by base vertex.
///
/// Each edge is stored between the representatives of its endpoint blocks at
/// the time of removal, which stays correct under later contraction.
#[derive(Debug, Default)]
struct Removed {
    adj: HashMap<usize, Vec<(usize, i64)>>,
    edges: Vec<(usize, usize, i64)>,
}

#[derive(Clone)]
pub struct CutOracle {
    hidden: Arc<HiddenGraph>,
    ledger: Arc<QueryLedger>,
    phase: Arc<str>,
    blocks: Arc<Vec<Vec<usize>>>,
    /// Hidden-graph cut of the induced vertex set, when the view is induced.
    support: Option<i64>,
    removed: Arc<Removed>,
    /// Set once the base graph has been recovered in full; later queries are free.
    known: Arc<OnceLock<()>>,
}

impl fmt::Debug for CutOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CutOracle")
            .field("n", &self.n())
            .field("base_n", &self.base_n())
            .field("phase", &self.phase)
            .field("induced", &self.support.is_some())
            .field("removed_edges", &self.removed.edges.len())
            .finish()
    }
}

impl CutOracle {
    /// Hides `g` behind a fresh ledger.
    pub fn new(g: &Graph) -> Self {
        Self {
            hidden: Arc::new(HiddenGraph::new(g)),
            ledger: Arc::new(QueryLedger::new()),
            phase: Arc::from(""),
            blocks: Arc::new((0..g.n()).map(|v| vec![v]).collect()),
            support: None,
            removed: Arc::default(),
            known: Arc::default(),
        }
    }

    pub fn ledger(&self) -> &Arc<QueryLedger> {
        &self.ledger
    }

    /// Total queries charged so far, across all views.
    pub fn queries(&self) -> u64 {
        self.ledger.total()
    }

    pub fn phase(&self) -> &str {
        &self.phase
    }

    /// Same view, charging to `label` nested under the current phase.
    pub fn with_phase(&self, label: &str) -> Self {
        let phase = if self.phase.is_empty() { label.to_owned() } else { format!("{}/{label}", self.phase) };
        Self { phase: Arc::from(phase), ..self.clone() }
    }

    /// Vertex count of this view.
    pub fn n(&self) -> usize {
        self.blocks.len()
    }

    pub fn base_n(&self) -> usize {
        self.hidden.n()
    }

    /// Scaled weight of one edge, `base_n^10`.
    pub fn unit(&self) -> Scaled {
        scale_for(self.base_n()).expect("oracle size checked at construction")
    }

    /// Base vertices behind each view vertex.
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// The view's vertices as a contraction of the base graph. Only defined
    /// when the view is not restricted to an induced subgraph.
    pub fn contraction_map(&self) -> Result<ContractionMap> {
        ContractionMap::from_blocks(self.base_n(), self.blocks.to_vec())
    }

    pub fn is_induced(&self) -> bool {
        self.support.is_some()
    }

    fn check(&self, s: &[usize]) -> Result<()> {
        match s.iter().find(|&&v| v >= self.n()) {
            Some(&v) => Err(Error::InvalidSet { vertex: v, n: self.n() }),
            None => Ok(()),
        }
    }

    fn check_disjoint(&self, s: &CutSet, t: &CutSet) -> Result<()> {
        self.check(s.members())?;
        self.check(t.members())?;
        match s.members().iter().find(|&&v| t.contains(v)) {
            Some(&v) => Err(Error::SetsOverlap(v)),
            None => Ok(()),
        }
    }

    fn base_bits(&self, view: &[usize]) -> Bits {
        let mut bits = vec![0; words(self.base_n())];
        for &x in view {
            for &v in &self.blocks[x] {
                set(&mut bits, v);
            }
        }
        bits
    }

    /// True once some view has recovered the whole base graph. From then on
    /// every view answers from that knowledge without charging the ledger.
    pub fn is_known(&self) -> bool {
        self.known.get().is_some()
    }

    fn is_base_view(&self) -> bool {
        self.support.is_none() && self.removed.edges.is_empty() && self.n() == self.base_n()
    }

    fn query(&self, view: &[usize]) -> i64 {
        if !self.is_known() {
            self.ledger.charge(&self.phase, 1);
        }
        self.hidden.cut(&self.base_bits(view))
    }

    /// Multiplicity of removed edges between two disjoint view sets.
    fn removed_between(&self, a: &[usize], b: &[usize]) -> i64 {
        if self.removed.edges.is_empty() {
            return 0;
        }
        let b_bits = self.base_bits(b);
        let mut total = 0;
        for &x in a {
            for v in &self.blocks[x] {
                if let Some(list) = self.removed.adj.get(v) {
                    total += list.iter().filter(|(w, _)| get(&b_bits, *w)).map(|(_, m)| m).sum::<i64>();
                }
            }
        }
        total
    }

    fn memo(&self) -> Memo<'_> {
        Memo { oracle: self, cache: HashMap::new() }
    }

    /// Cut size of `s` in this view. Trivial sets evaluate to 0 but are still charged.
    pub fn cut(&self, s: &CutSet) -> Result<i64> {
        self.check(s.members())?;
        self.memo().cut(s.members())
    }

    /// `|E(S, T)|` for disjoint `s` and `t`; always exactly 3 queries.
    pub fn cross_count(&self, s: &CutSet, t: &CutSet) -> Result<i64> {
        self.check_disjoint(s, t)?;
        self.memo().cross(s.members(), t.members())
    }

    pub fn degree(&self, v: usize) -> Result<i64> {
        self.cut(&CutSet::singleton(v))
    }

    /// Degrees of every view vertex, one query each.
    pub fn degrees(&self) -> Result<Vec<i64>> {
        (0..self.n()).map(|v| self.degree(v)).collect()
    }

    /// An edge of `E(S, T)` chosen uniformly (counting multiplicity), as `(u ∈ S, v ∈ T)`.
    pub fn sample_edge<R: Rng + ?Sized>(&self, s: &CutSet, t: &CutSet, rng: &mut R) -> Result<(usize, usize)> {
        self.check_disjoint(s, t)?;
        self.memo().sample(s.members(), t.members(), None, rng)
    }

    /// Same as [`Self::sample_edge`] when `|E(S, T)|` is already known.
    pub fn sample_edge_known<R: Rng + ?Sized>(
        &self,
        s: &CutSet,
        t: &CutSet,
        count: i64,
        rng: &mut R,
    ) -> Result<(usize, usize)> {
        self.check_disjoint(s, t)?;
        self.memo().sample(s.members(), t.members(), Some(count), rng)
    }

    /// Every edge of `E(S, T)` with its multiplicity, as `(u ∈ S, v ∈ T, mult)`.
    pub fn recover_edges(&self, s: &CutSet, t: &CutSet) -> Result<Vec<Multiedge>> {
        self.check_disjoint(s, t)?;
        let mut memo = self.memo();
        let count = memo.cross(s.members(), t.members())?;
        let mut out = Vec::new();
        memo.recover(s.members(), t.members(), count, &mut out)?;
        Ok(out)
    }

    /// Every edge with both endpoints in `w`, as `(u, v, mult)` with `u < v`.
    pub fn recover_internal(&self, w: &CutSet) -> Result<Vec<Multiedge>> {
        self.check(w.members())?;
        let mut out = Vec::new();
        self.memo().recover_within(w.members(), &mut out)?;
        for e in &mut out {
            if e.0 > e.1 {
                *e = (e.1, e.0, e.2);
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// The whole view as an explicit weighted graph (multiplicity times unit).
    pub fn recover_all(&self) -> Result<WeightedGraph> {
        let all: CutSet = (0..self.n()).collect();
        let unit = self.unit();
        let mut g = WeightedGraph::new(self.n(), unit);
        for (u, v, m) in self.recover_internal(&all)? {
            g.add_edge(u, v, Scaled::from(m) * unit)?;
        }
        if self.is_base_view() {
            let _ = self.known.set(());
        }
        Ok(g)
    }

    /// View in which each block of `map` (over this view's vertices) is one vertex.
    pub fn view_contract(&self, map: &ContractionMap) -> Result<Self> {
        if map.n() != self.n() {
            return Err(Error::InvalidContraction(format!(
                "map covers {} vertices, view has {}",
                map.n(),
                self.n()
            )));
        }
        let blocks = map
            .blocks()
            .iter()
            .map(|b| {
                let mut base: Vec<usize> = b.iter().flat_map(|&x| self.blocks[x].iter().copied()).collect();
                base.sort_unstable();
                base
            })
            .collect();
        Ok(Self { blocks: Arc::new(blocks), ..self.clone() })
    }

    /// View with the given known edges (view coordinates, with multiplicity) removed.
    pub fn view_minus_edges(&self, known: &[Multiedge]) -> Result<Self> {
        let mut removed = Removed { adj: self.removed.adj.clone(), edges: self.removed.edges.clone() };
        for &(a, b, m) in known {
            self.check(&[a, b])?;
            if a == b || m <= 0 {
                return Err(Error::InvalidParameter(format!("known edge ({a},{b}) x{m} is not a proper edge")));
            }
            let (ra, rb) = (self.blocks[a][0], self.blocks[b][0]);
            removed.adj.entry(ra).or_default().push((rb, m));
            removed.adj.entry(rb).or_default().push((ra, m));
            removed.edges.push((ra, rb, m));
        }
        Ok(Self { removed: Arc::new(removed), ..self.clone() })
    }

    /// View of the subgraph induced by the view vertices `w`; vertex `i` of the
    /// new view is `w[i]`. Costs one query to fix the boundary of `w`.
    pub fn view_induced(&self, w: &[usize]) -> Result<Self> {
        self.check(w)?;
        let blocks: Vec<Vec<usize>> = w.iter().map(|&x| self.blocks[x].clone()).collect();
        let cut = self.query(w);
        Ok(Self { blocks: Arc::new(blocks), support: Some(cut), ..self.clone() })
    }
}

/// Per-call cache of hidden-graph cut values keyed by view vertex sets.
struct Memo<'a> {
    oracle: &'a CutOracle,
    cache: HashMap<Vec<usize>, i64>,
}

fn sorted_union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut u: Vec<usize> = a.iter().chain(b).copied().collect();
    u.sort_unstable();
    u
}

impl Memo<'_> {
    fn raw(&mut self, view: &[usize]) -> i64 {
        let mut key = view.to_vec();
        key.sort_unstable();
        if let Some(&v) = self.cache.get(&key) {
            return v;
        }
        let v = self.oracle.query(&key);
        self.cache.insert(key, v);
        v
    }

    fn adjusted(&self, value: i64) -> Result<i64> {
        if value < 0 {
            Err(Error::InconsistentKnownEdges(value))
        } else {
            Ok(value)
        }
    }

    fn cut(&mut self, s: &[usize]) -> Result<i64> {
        let o = self.oracle;
        let mut inside = vec![false; o.n()];
        s.iter().for_each(|&v| inside[v] = true);
        let rest: Vec<usize> = (0..o.n()).filter(|&v| !inside[v]).collect();
        let value = match o.support {
            None => self.raw(s),
            Some(boundary) => {
                let total = self.raw(s) + self.raw(&rest) - boundary;
                debug_assert!(total % 2 == 0);
                total / 2
            }
        };
        self.adjusted(value - o.removed_between(s, &rest))
    }

    fn cross(&mut self, a: &[usize], b: &[usize]) -> Result<i64> {
        let union = sorted_union(a, b);
        let total = self.raw(a) + self.raw(b) - self.raw(&union);
        debug_assert!(total % 2 == 0);
        let removed = self.oracle.removed_between(a, b);
        self.adjusted(total / 2 - removed)
    }

    fn sample<R: Rng + ?Sized>(
        &mut self,
        s: &[usize],
        t: &[usize],
        known: Option<i64>,
        rng: &mut R,
    ) -> Result<(usize, usize)> {
        let count = match known {
            Some(c) => c,
            None => self.cross(s, t)?,
        };
        if count <= 0 {
            return Err(Error::NoEdge);
        }
        let mut t = t.to_vec();
        t.shuffle(rng);
        let mut tc = count;
        while t.len() > 1 {
            let right = t.split_off(t.len() / 2);
            let left_count = self.cross(s, &t)?;
            if rng.random_range(0..tc) >= left_count {
                t = right;
                tc -= left_count;
            } else {
                tc = left_count;
            }
        }
        let v = t[0];
        let mut s = s.to_vec();
        s.shuffle(rng);
        let mut sc = tc;
        while s.len() > 1 {
            let right = s.split_off(s.len() / 2);
            let left_count = self.cross(&s, &[v])?;
            if rng.random_range(0..sc) >= left_count {
                s = right;
                sc -= left_count;
            } else {
                sc = left_count;
            }
        }
        Ok((s[0], v))
    }

    /// Appends `E(a, b)` given its size `count`.
    fn recover(&mut self, a: &[usize], b: &[usize], count: i64, out: &mut Vec<Multiedge>) -> Result<()> {
        if count == 0 {
            return Ok(());
        }
        if a.len() == 1 && b.len() == 1 {
            out.push((a[0], b[0], count));
            return Ok(());
        }
        let pairs = a.len() * b.len();
        // Dense blocks are cheaper to read pair by pair than to bisect.
        if pairs as u64 <= 2 * count as u64 * u64::from(ceil_log2(pairs)) {
            let mut left = count;
            for (i, &x) in a.iter().enumerate() {
                for (j, &y) in b.iter().enumerate() {
                    if left == 0 {
                        return Ok(());
                    }
                    let last = i + 1 == a.len() && j + 1 == b.len();
                    let c = if last { left } else { self.cross(&[x], &[y])? };
                    if c > 0 {
                        out.push((x, y, c));
                        left -= c;
                    }
                }
            }
            return self.adjusted(left).map(|_| ());
        }
        if a.len() >= b.len() {
            let (a1, a2) = a.split_at(a.len() / 2);
            let c1 = self.cross(a1, b)?;
            self.recover(a1, b, c1, out)?;
            self.recover(a2, b, self.adjusted(count - c1)?, out)
        } else {
            let (b1, b2) = b.split_at(b.len() / 2);
            let c1 = self.cross(a, b1)?;
            self.recover(a, b1, c1, out)?;
            self.recover(a, b2, self.adjusted(count - c1)?, out)
        }
    }

    fn recover_within(&mut self, w: &[usize], out: &mut Vec<Multiedge>) -> Result<()> {
        if w.len() < 2 {
            return Ok(());
        }
        let (a, b) = w.split_at(w.len() / 2);
        let c = self.cross(a, b)?;
        self.recover(a, b, c, out)?;
        self.recover_within(a, out)?;
        self.recover_within(b, out)
    }
}
