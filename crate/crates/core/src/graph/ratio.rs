use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::Scaled;

/// Full 256-bit product of two `u128`s as `(high, low)`.
fn widening_mul(a: u128, b: u128) -> (u128, u128) {
    const MASK: u128 = u64::MAX as u128;
    let (a_hi, a_lo) = (a >> 64, a & MASK);
    let (b_hi, b_lo) = (b >> 64, b & MASK);
    let ll = a_lo * b_lo;
    let lh = a_lo * b_hi;
    let hl = a_hi * b_lo;
    let hh = a_hi * b_hi;
    let mid = (ll >> 64) + (lh & MASK) + (hl & MASK);
    let low = (ll & MASK) | (mid << 64);
    let high = hh + (lh >> 64) + (hl >> 64) + (mid >> 64);
    (high, low)
}

/// Compares `a * b` with `c * d` exactly; all operands must be non-negative.
pub fn cmp_products(a: Scaled, b: Scaled, c: Scaled, d: Scaled) -> Ordering {
    assert!(a >= 0 && b >= 0 && c >= 0 && d >= 0, "cmp_products needs non-negative operands");
    widening_mul(a as u128, b as u128).cmp(&widening_mul(c as u128, d as u128))
}

/// Demand-relative sparsity `cut / min(d(S), d(V \ S))` as an exact ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sparsity {
    Finite { num: Scaled, den: Scaled },
    /// The smaller demand side is zero.
    Infinite,
}

impl Sparsity {
    pub fn new(num: Scaled, den: Scaled) -> Self {
        if den == 0 {
            Sparsity::Infinite
        } else {
            Sparsity::Finite { num, den }
        }
    }

    /// `self >= p/q`.
    pub fn at_least(&self, p: Scaled, q: Scaled) -> bool {
        match *self {
            Sparsity::Infinite => true,
            Sparsity::Finite { num, den } => cmp_products(num, q, p, den) != Ordering::Less,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match *self {
            Sparsity::Infinite => f64::INFINITY,
            Sparsity::Finite { num, den } => num as f64 / den as f64,
        }
    }
}

impl PartialOrd for Sparsity {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Sparsity {
    fn cmp(&self, other: &Self) -> Ordering {
        match (*self, *other) {
            (Sparsity::Infinite, Sparsity::Infinite) => Ordering::Equal,
            (Sparsity::Infinite, _) => Ordering::Greater,
            (_, Sparsity::Infinite) => Ordering::Less,
            (Sparsity::Finite { num: a, den: b }, Sparsity::Finite { num: c, den: d }) => {
                cmp_products(a, d, c, b)
            }
        }
    }
}
