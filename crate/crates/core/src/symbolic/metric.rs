//! The product metric `d(x, y) = Σ_k 2^{-k} [x_k ≠ y_k]` seen through finite prefixes.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::rational::{self, dyadic, Rational};
use crate::symbolic::Symbol;
use crate::{Error, Result};

/// Diameter of the full shift under the product metric with discrete coordinate metric.
pub fn diameter() -> Rational {
    rational::int(2)
}

/// Closed interval of reals with exact rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl DistanceInterval {
    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

impl Serialize for DistanceInterval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (rational::format(&self.lo), rational::format(&self.hi)).serialize(s)
    }
}

/// Bounds on `d(x, y)` over all points `x` extending `u` and `y` extending `v`.
///
/// `lo` counts the disagreements inside the prefixes; the unknown tail can
/// add at most `Σ_{k ≥ |u|} 2^{-k} = 2^{-(|u|-1)}`.
pub fn word_distance_interval(u: &[Symbol], v: &[Symbol]) -> Result<DistanceInterval> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    if u.is_empty() {
        return Err(Error::Precondition(
            "distance interval needs non-empty prefixes".into(),
        ));
    }
    let lo = truncated_distance(u, v);
    let hi = &lo + dyadic(u.len() as u32 - 1);
    Ok(DistanceInterval { lo, hi })
}

/// `Σ_{k < n} 2^{-k} [u_k ≠ v_k]` over the common length `n`, exactly.
pub fn truncated_distance(u: &[Symbol], v: &[Symbol]) -> Rational {
    let n = u.len().min(v.len());
    if n == 0 {
        return Rational::zero();
    }
    // numerator over the common denominator 2^{n-1}
    let mut num = BigInt::zero();
    for k in 0..n {
        if u[k] != v[k] {
            num += BigInt::from(1) << (n - 1 - k);
        }
    }
    Rational::new(num, BigInt::from(1) << (n - 1))
}
