use num_bigint::BigUint;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::rational::Rational;
use crate::{Error, Result};

/// Both sides of the word-class estimate `Σ_{k≤K} C(n,k)·A^k ≤ ⌈(2·A^e)^n⌉`
/// with `e = 1 − (1−κ)β` and `K = ⌊n·e⌋`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinomialBound {
    pub k_max: usize,
    pub sum: BigUint,
    pub closed: BigUint,
}

impl BinomialBound {
    pub fn holds(&self) -> bool {
        self.sum <= self.closed
    }
}

fn unit_interval(name: &str, q: &Rational) -> Result<()> {
    if q.is_negative() || q > &Rational::one() {
        return Err(Error::Precondition(format!("{name} = {q} outside [0, 1]")));
    }
    Ok(())
}

fn to_biguint(q: &Rational) -> BigUint {
    q.to_integer().to_biguint().expect("non-negative")
}

pub fn binomial_bound(
    n: usize,
    a: usize,
    beta: &Rational,
    kappa: &Rational,
) -> Result<BinomialBound> {
    if a == 0 {
        return Err(Error::Precondition(
            "base alphabet must be non-empty".into(),
        ));
    }
    unit_interval("beta", beta)?;
    unit_interval("kappa", kappa)?;
    let e = Rational::one() - (Rational::one() - kappa) * beta;
    let k_max = to_biguint(&(e.clone() * Rational::from_integer(n.into())).floor())
        .to_usize()
        .expect("k_max ≤ n")
        .min(n);

    let big_a = BigUint::from(a);
    let mut sum = BigUint::zero();
    let mut binom = BigUint::one();
    for k in 0..=k_max {
        sum += &binom * big_a.clone().pow(k as u32);
        binom = binom * BigUint::from(n - k) / BigUint::from(k + 1);
    }

    // ⌈(2^{nQ} · A^{nP})^{1/Q}⌉ with e = P/Q
    let p = to_biguint(&Rational::from_integer(e.numer().clone()));
    let q = to_biguint(&Rational::from_integer(e.denom().clone()));
    let q32 = q
        .to_u32()
        .ok_or_else(|| Error::Precondition("exponent denominator too large".into()))?;
    let p32 = p
        .to_u32()
        .ok_or_else(|| Error::Precondition("exponent numerator too large".into()))?;
    let radicand = BigUint::from(2u32).pow(n as u32 * q32) * big_a.pow(n as u32 * p32);
    let root = radicand.nth_root(q32);
    let exact = Pow::pow(&root, q32) == radicand;
    let closed = if exact { root } else { root + 1u32 };
    Ok(BinomialBound { k_max, sum, closed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn direct_example() {
        let b = binomial_bound(4, 2, &frac(1, 2), &frac(0, 1)).unwrap();
        assert_eq!(b.k_max, 2);
        assert_eq!(b.sum, BigUint::from(33u32));
        assert_eq!(b.closed, BigUint::from(64u32));
        assert!(b.holds());
    }

    #[test]
    fn degenerate_windows_are_the_binomial_theorem() {
        for (beta, kappa) in [(frac(0, 1), frac(1, 2)), (frac(1, 2), frac(1, 1))] {
            let b = binomial_bound(6, 3, &beta, &kappa).unwrap();
            assert_eq!(b.sum, BigUint::from(4u32.pow(6)));
            assert_eq!(b.closed, BigUint::from(6u32.pow(6)));
        }
    }

    #[test]
    fn irrational_closed_bound_rounds_up() {
        // e = 5/8, (2·2^{5/8})^3 = 2^{39/8} ≈ 29.34
        let b = binomial_bound(3, 2, &frac(1, 2), &frac(1, 4)).unwrap();
        assert_eq!(b.closed, BigUint::from(30u32));
        assert_eq!(b.k_max, 1);
        assert_eq!(b.sum, BigUint::from(7u32));
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(binomial_bound(3, 2, &frac(3, 2), &frac(1, 4)).is_err());
        assert!(binomial_bound(3, 2, &frac(1, 2), &frac(-1, 4)).is_err());
        assert!(binomial_bound(3, 0, &frac(1, 2), &frac(1, 4)).is_err());
    }
}
