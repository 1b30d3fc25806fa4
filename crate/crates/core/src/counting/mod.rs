//! Exact counts over `ℒ_n(X)`: language sizes, entropy profiles, word
//! classes, periodic-point censuses and separated-set sandwiches.

mod binomial;
mod census;

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

pub use binomial::{binomial_bound, BinomialBound};
pub use census::{
    growth_profile, periodic_points, primitive_orbits, GrowthProfile, GrowthRow, OrbitRecord,
    PeriodicCensus,
};

use crate::gapped::{GState, GappedSubshiftSpec};
use crate::rational::ln_big;
use crate::symbolic::Symbol;
use crate::{Error, Limits, Result};

fn check_bounded(spec: &GappedSubshiftSpec, n: usize) -> Result<()> {
    match spec.base().max_word_len() {
        Some(max) if n > max => Err(Error::ResourceLimit {
            what: format!(
                "{} base built for words up to length {max}",
                spec.base().kind()
            ),
            limit: max as u64,
        }),
        _ => Ok(()),
    }
}

/// `|ℒ_n(X)|` by a layered DP over membership-automaton states.
pub fn language_count(spec: &GappedSubshiftSpec, n: usize, limits: &Limits) -> Result<BigUint> {
    Ok(language_counts(spec, n, limits)?.pop().expect("non-empty"))
}

/// `|ℒ_k(X)|` for every `k` in `0..=n`.
pub fn language_counts(
    spec: &GappedSubshiftSpec,
    n: usize,
    limits: &Limits,
) -> Result<Vec<BigUint>> {
    check_bounded(spec, n)?;
    let mut out = vec![BigUint::one()];
    let mut layer: HashMap<GState, BigUint> = HashMap::from([(spec.start(), BigUint::one())]);
    for _ in 0..n {
        limits.check_deadline("language count")?;
        let mut next: HashMap<GState, BigUint> = HashMap::with_capacity(layer.len() * 2);
        for (&state, count) in &layer {
            for a in spec.ambient().symbols() {
                if let Some(t) = spec.step(state, a) {
                    *next.entry(t).or_insert_with(BigUint::zero) += count;
                }
            }
        }
        limits.check_states("language count", next.len())?;
        out.push(next.values().sum());
        layer = next;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyRow {
    pub n: usize,
    pub count: BigUint,
    pub h_n: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyProfile {
    pub rows: Vec<EntropyRow>,
    /// `ln |A|`.
    pub ref_log_a: f64,
    /// `ln 2 + ln|A| / (1 + τ)`.
    pub ref_mixed_bound: f64,
}

pub fn entropy_profile(
    spec: &GappedSubshiftSpec,
    n_max: usize,
    limits: &Limits,
) -> Result<EntropyProfile> {
    if n_max == 0 {
        return Err(Error::Precondition(
            "entropy profile needs n_max ≥ 1".into(),
        ));
    }
    let counts = language_counts(spec, n_max, limits)?;
    let rows = counts
        .into_iter()
        .enumerate()
        .skip(1)
        .map(|(n, count)| EntropyRow {
            n,
            h_n: ln_big(&count) / n as f64,
            count,
        })
        .collect();
    let ln_a = (spec.base_size() as f64).ln();
    Ok(EntropyProfile {
        rows,
        ref_log_a: ln_a,
        ref_mixed_bound: std::f64::consts::LN_2 + ln_a / (1.0 + spec.tau().to_f64()),
    })
}

/// KMP failure table; `next(state, a)` gives the matched-prefix length after reading `a`.
struct Kmp<'a> {
    pat: &'a [Symbol],
    fail: Vec<usize>,
}

impl<'a> Kmp<'a> {
    fn new(pat: &'a [Symbol]) -> Self {
        let mut fail = vec![0; pat.len()];
        let mut k = 0;
        for i in 1..pat.len() {
            while k > 0 && pat[i] != pat[k] {
                k = fail[k - 1];
            }
            if pat[i] == pat[k] {
                k += 1;
            }
            fail[i] = k;
        }
        Kmp { pat, fail }
    }

    fn next(&self, mut state: usize, a: Symbol) -> usize {
        if state == self.pat.len() {
            state = self.fail[state - 1];
        }
        while state > 0 && self.pat[state] != a {
            state = self.fail[state - 1];
        }
        if self.pat[state] == a {
            state + 1
        } else {
            0
        }
    }
}

/// Number of `u ∈ ℒ_n(X)` in which `w` occurs (overlaps counted) between
/// `lo` and `hi` times. An empty window (`lo > hi`) counts nothing.
pub fn count_word_class(
    spec: &GappedSubshiftSpec,
    n: usize,
    w: &[Symbol],
    lo: usize,
    hi: usize,
    limits: &Limits,
) -> Result<BigUint> {
    if w.is_empty() {
        return Err(Error::Precondition("word class of the empty word".into()));
    }
    if hi > n {
        return Err(Error::Precondition(format!(
            "occurrence bound {hi} exceeds length {n}"
        )));
    }
    spec.ambient().check_word(w)?;
    check_bounded(spec, n)?;
    if lo > hi {
        return Ok(BigUint::zero());
    }
    let kmp = Kmp::new(w);
    let cap = hi + 1;
    let mut layer: HashMap<(GState, usize, usize), BigUint> =
        HashMap::from([((spec.start(), 0, 0), BigUint::one())]);
    for _ in 0..n {
        limits.check_deadline("word class count")?;
        let mut next: HashMap<(GState, usize, usize), BigUint> =
            HashMap::with_capacity(layer.len() * 2);
        for (&(state, matched, occ), count) in &layer {
            for a in spec.ambient().symbols() {
                if let Some(t) = spec.step(state, a) {
                    let m = kmp.next(matched, a);
                    let o = (occ + usize::from(m == w.len())).min(cap);
                    *next.entry((t, m, o)).or_insert_with(BigUint::zero) += count;
                }
            }
        }
        limits.check_states("word class count", next.len())?;
        layer = next;
    }
    Ok(layer
        .into_iter()
        .filter(|((_, _, occ), _)| (lo..=hi).contains(occ))
        .map(|(_, c)| c)
        .sum())
}

/// Sandwich `|ℒ_n| ≤ s_n(2^{-m}) ≤ |ℒ_{n+m+1}|` for the maximal size of an
/// `(n, 2^{-m})`-separated set.
pub fn separated_count_bounds(
    spec: &GappedSubshiftSpec,
    n: usize,
    m: usize,
    limits: &Limits,
) -> Result<(BigUint, BigUint)> {
    if n == 0 {
        return Err(Error::Precondition("separated sets need n ≥ 1".into()));
    }
    let counts = language_counts(spec, n + m + 1, limits)?;
    Ok((counts[n].clone(), counts[n + m + 1].clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gapped::Tau;
    use crate::oracle::NaiveOracle;

    fn binary(tau: Tau) -> GappedSubshiftSpec {
        GappedSubshiftSpec::full(1, tau).unwrap()
    }

    #[test]
    fn language_count_anchors() {
        let spec = binary(Tau::integer(1));
        let l = Limits::default();
        let c: Vec<u64> = language_counts(&spec, 6, &l)
            .unwrap()
            .iter()
            .map(|c| c.try_into().unwrap())
            .collect();
        assert_eq!(c[1], 2);
        assert_eq!(c[4], 15);
        assert_eq!(c[5], 28);
        let mut oracle = NaiveOracle::new(&spec).unwrap();
        assert_eq!(BigUint::from(c[6]), oracle.language_count(6));
    }

    #[test]
    fn entropy_examples() {
        let p = entropy_profile(&binary(Tau::integer(1)), 4, &Limits::default()).unwrap();
        assert!((p.rows[0].h_n - std::f64::consts::LN_2).abs() < 1e-12);
        assert!((p.rows[3].h_n - 0.67701).abs() < 1e-5);
        let five = GappedSubshiftSpec::full(5, Tau::integer(1)).unwrap();
        let p = entropy_profile(&five, 8, &Limits::default()).unwrap();
        assert!(p.rows.iter().all(|r| r.h_n >= p.ref_log_a));
        assert!(entropy_profile(&five, 0, &Limits::default()).is_err());
    }

    #[test]
    fn word_class_examples() {
        let spec = binary(Tau::integer(1));
        let l = Limits::default();
        assert_eq!(
            count_word_class(&spec, 3, &[0], 0, 1, &l).unwrap(),
            BigUint::from(4u32)
        );
        assert_eq!(
            count_word_class(&spec, 4, &[0], 4, 4, &l).unwrap(),
            BigUint::from(1u32)
        );
        assert_eq!(
            count_word_class(&spec, 7, &[1], 0, 7, &l).unwrap(),
            language_count(&spec, 7, &l).unwrap()
        );
        assert!(count_word_class(&spec, 3, &[], 0, 1, &l).is_err());
        assert!(count_word_class(&spec, 3, &[0], 0, 4, &l).is_err());
    }

    #[test]
    fn word_class_matches_enumeration_with_overlaps() {
        let spec = binary(Tau::new(1, 2).unwrap());
        let l = Limits::default();
        let pat = [1, 1];
        let mut oracle = NaiveOracle::new(&spec).unwrap();
        let n = 9;
        let mut hist = vec![0u64; n + 1];
        oracle.enumerate(n, &mut |w, ok| {
            if ok && w.len() == n {
                hist[w.windows(2).filter(|f| *f == pat).count()] += 1;
            }
        });
        for lo in 0..=n {
            for hi in lo..=n {
                let want: u64 = hist[lo..=hi].iter().sum();
                assert_eq!(
                    count_word_class(&spec, n, &pat, lo, hi, &l).unwrap(),
                    BigUint::from(want)
                );
            }
        }
    }

    #[test]
    fn separated_examples() {
        let spec = binary(Tau::integer(1));
        let l = Limits::default();
        assert_eq!(
            separated_count_bounds(&spec, 1, 0, &l).unwrap(),
            (BigUint::from(2u32), BigUint::from(4u32))
        );
        let (lo, hi) = separated_count_bounds(&spec, 4, 1, &l).unwrap();
        assert_eq!(lo, BigUint::from(15u32));
        assert_eq!(hi, language_count(&spec, 6, &l).unwrap());
    }
}
