use std::fmt;

use serde::{Deserialize, Serialize};

use crate::gapped::{GappedSubshiftSpec, Tau};
use crate::rational::{dyadic, int, Rational};

/// Shadowing precision on the dyadic grid.
///
/// `Dyadic(m)` is `ε = 2^{-m}`; `Coarse` stands for any `ε ≥ 2`, where every
/// pair of points is within `ε` because the diameter is 2.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub enum Precision {
    Coarse,
    Dyadic(u32),
}

impl Precision {
    /// `-1` encodes `ε ≥ 2`; `m ≥ 0` encodes `2^{-m}`.
    pub fn from_code(code: i64) -> Option<Self> {
        match code {
            -1 => Some(Precision::Coarse),
            m if m >= 0 && m <= u32::MAX as i64 => Some(Precision::Dyadic(m as u32)),
            _ => None,
        }
    }

    pub fn code(&self) -> i64 {
        match self {
            Precision::Coarse => -1,
            Precision::Dyadic(m) => *m as i64,
        }
    }

    /// `⌈-log₂ ε⌉`, or `None` for the coarse branch.
    pub fn exponent(&self) -> Option<u32> {
        match self {
            Precision::Coarse => None,
            Precision::Dyadic(m) => Some(*m),
        }
    }

    pub fn epsilon(&self) -> Rational {
        match self {
            Precision::Coarse => int(2),
            Precision::Dyadic(m) => dyadic(*m),
        }
    }

    /// Number of leading coordinates two points must share to be certified within `ε`.
    pub fn agreement(&self) -> usize {
        match self {
            Precision::Coarse => 0,
            Precision::Dyadic(m) => *m as usize + 1,
        }
    }
}

impl fmt::Debug for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precision::Coarse => write!(f, "eps>=2"),
            Precision::Dyadic(m) => write!(f, "eps=2^-{m}"),
        }
    }
}

impl TryFrom<i64> for Precision {
    type Error = String;
    fn try_from(code: i64) -> Result<Self, String> {
        Precision::from_code(code).ok_or_else(|| format!("invalid precision code {code}"))
    }
}

impl From<Precision> for i64 {
    fn from(p: Precision) -> i64 {
        p.code()
    }
}

/// `M(n, ε) = ⌈τ(n + m)⌉ + m + 1` for `ε = 2^{-m}`, and `1` for `ε ≥ 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GapFunction {
    tau: Tau,
}

impl GapFunction {
    pub fn new(tau: Tau) -> Self {
        GapFunction { tau }
    }

    pub fn eval(&self, n: u64, precision: Precision) -> u64 {
        match precision {
            Precision::Coarse => 1,
            Precision::Dyadic(m) => self.tau.ceil_mul(n + m as u64) + m as u64 + 1,
        }
    }
}

pub fn gap_function(spec: &GappedSubshiftSpec, n: u64, precision: Precision) -> u64 {
    spec.gap_function().eval(n, precision)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn formula_examples() {
        let one = GapFunction::new(Tau::integer(1));
        assert_eq!(one.eval(2, Precision::Dyadic(1)), 5);
        let half = GapFunction::new(Tau::new(1, 2).unwrap());
        assert_eq!(half.eval(4, Precision::Dyadic(2)), 6);
        for n in 1..20 {
            assert_eq!(half.eval(n, Precision::Coarse), 1);
            assert_eq!(
                GapFunction::new(Tau::integer(7)).eval(n, Precision::Coarse),
                1
            );
        }
    }

    #[test]
    fn precision_codes() {
        assert_eq!(Precision::from_code(-1), Some(Precision::Coarse));
        assert_eq!(Precision::from_code(3), Some(Precision::Dyadic(3)));
        assert_eq!(Precision::from_code(-2), None);
        assert_eq!(Precision::Dyadic(2).epsilon(), dyadic(2));
        assert!(Precision::Coarse < Precision::Dyadic(0));
    }

    proptest! {
        #[test]
        fn monotone_in_length_and_precision(p in 0u64..7, q in 1u64..5, n in 1u64..60, m in -1i64..8) {
            let g = GapFunction::new(Tau::new(p, q).unwrap());
            let prec = Precision::from_code(m).unwrap();
            let finer = Precision::from_code(m + 1).unwrap();
            prop_assert!(g.eval(n, prec) <= g.eval(n + 1, prec));
            prop_assert!(g.eval(n, prec) <= g.eval(n, finer));
            prop_assert!(g.eval(n, prec) >= 1);
        }
    }
}
