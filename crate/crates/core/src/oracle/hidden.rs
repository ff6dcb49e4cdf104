use crate::graph::Graph;

pub(crate) type Bits = Vec<u64>;

pub(crate) fn words(n: usize) -> usize {
    n.div_ceil(64)
}

#[inline]
pub(crate) fn set(bits: &mut [u64], v: usize) {
    bits[v / 64] |= 1 << (v % 64);
}

#[inline]
pub(crate) fn get(bits: &[u64], v: usize) -> bool {
    bits[v / 64] >> (v % 64) & 1 == 1
}

pub(crate) fn members(bits: &[u64]) -> impl Iterator<Item = usize> + '_ {
    bits.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            (w != 0).then(|| {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                i * 64 + b
            })
        })
    })
}

pub(crate) fn count(bits: &[u64]) -> usize {
    bits.iter().map(|w| w.count_ones() as usize).sum()
}

/// The graph behind the oracle, stored as adjacency bitsets.
#[derive(Debug)]
pub(crate) struct HiddenGraph {
    n: usize,
    adj: Vec<Bits>,
    full: Bits,
}

impl HiddenGraph {
    pub fn new(g: &Graph) -> Self {
        let n = g.n();
        let mut adj = vec![vec![0; words(n)]; n];
        for &(u, v) in g.edges() {
            set(&mut adj[u], v);
            set(&mut adj[v], u);
        }
        let mut full = vec![0; words(n)];
        (0..n).for_each(|v| set(&mut full, v));
        Self { n, adj, full }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `|E(S, V \ S)|` for a base-vertex bitset.
    pub fn cut(&self, side: &[u64]) -> i64 {
        let inside = count(side);
        let total: u32 = if 2 * inside <= self.n {
            members(side)
                .map(|u| self.adj[u].iter().zip(side).map(|(a, s)| (a & !s).count_ones()).sum::<u32>())
                .sum()
        } else {
            let outside: Bits = self.full.iter().zip(side).map(|(f, s)| f & !s).collect();
            members(&outside)
                .map(|u| self.adj[u].iter().zip(side).map(|(a, s)| (a & s).count_ones()).sum::<u32>())
                .sum()
        };
        i64::from(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_sides_agree() {
        let g = Graph::new(70, (0..69).map(|v| (v, v + 1)).chain([(0, 69), (3, 40)])).unwrap();
        let h = HiddenGraph::new(&g);
        for split in [1usize, 10, 35, 60, 69] {
            let mut bits = vec![0; words(70)];
            (0..split).for_each(|v| set(&mut bits, v));
            let mask: Vec<bool> = (0..70).map(|v| v < split).collect();
            assert_eq!(h.cut(&bits), g.cut_size(&mask) as i64);
        }
        assert_eq!(members(&[0b1010, 1]).collect::<Vec<_>>(), vec![1, 3, 64]);
    }
}
