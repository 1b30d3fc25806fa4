//! Empirical measures, Birkhoff averages, transport distances between
//! finitely supported measures, and ergodic optimization over periodic orbits.

mod optimize;
mod transport;

use std::collections::BTreeMap;

use num_traits::Zero;

pub use optimize::{ergodic_optimum, orbit_averages, OptimizationResult, PeriodBest};
pub use transport::{perturbation_bound_check, wasserstein, FiniteMeasure, PerturbationCheck};

use crate::gapped::GAP;
use crate::rational::Rational;
use crate::symbolic::{CyclicWord, Symbol, Word};
use crate::{Error, Observable, Result};

/// `δ_x^n` projected onto cylinders of depth `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalMeasure {
    pub depth: usize,
    pub weights: BTreeMap<Word, Rational>,
}

impl EmpiricalMeasure {
    pub fn weight(&self, w: &[Symbol]) -> Rational {
        self.weights
            .get(&Word(w.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn total(&self) -> Rational {
        self.weights.values().sum()
    }

    pub fn to_finite(&self) -> Result<FiniteMeasure> {
        FiniteMeasure::new(
            self.weights
                .iter()
                .map(|(w, q)| (w.clone(), q.clone()))
                .collect(),
        )
    }
}

fn check_prefix(x: &[Symbol], n: usize, depth: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Precondition("averaging length must be ≥ 1".into()));
    }
    if x.len() + 1 < n + depth {
        return Err(Error::Precondition(format!(
            "prefix of length {} too short for {n} windows of depth {depth}",
            x.len()
        )));
    }
    Ok(())
}

pub fn empirical_measure(x: &[Symbol], n: usize, k: usize) -> Result<EmpiricalMeasure> {
    if k == 0 {
        return Err(Error::Precondition("cylinder depth must be ≥ 1".into()));
    }
    check_prefix(x, n, k)?;
    let mut counts: BTreeMap<Word, usize> = BTreeMap::new();
    for w in x.windows(k).take(n) {
        *counts.entry(Word(w.to_vec())).or_default() += 1;
    }
    let weights = counts
        .into_iter()
        .map(|(w, c)| (w, Rational::new(c.into(), n.into())))
        .collect();
    Ok(EmpiricalMeasure { depth: k, weights })
}

/// `(1/n) Σ_{i<n} φ(σ^i x)`, using only windows inside `x`.
pub fn birkhoff_average(x: &[Symbol], phi: &Observable, n: usize) -> Result<Rational> {
    check_prefix(x, n, phi.depth())?;
    let mut total = Rational::zero();
    for i in 0..n {
        total += phi.evaluate(x, i)?;
    }
    Ok(total / Rational::from_integer(n.into()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Oscillation {
    pub averages: Vec<(usize, Rational)>,
    pub min: Rational,
    pub max: Rational,
    pub gap: Rational,
}

pub fn oscillation(x: &[Symbol], phi: &Observable, checkpoints: &[usize]) -> Result<Oscillation> {
    if checkpoints.is_empty() {
        return Err(Error::Precondition("no checkpoints".into()));
    }
    let averages = checkpoints
        .iter()
        .map(|&n| Ok((n, birkhoff_average(x, phi, n)?)))
        .collect::<Result<Vec<_>>>()?;
    let min = averages
        .iter()
        .map(|(_, a)| a)
        .min()
        .expect("non-empty")
        .clone();
    let max = averages
        .iter()
        .map(|(_, a)| a)
        .max()
        .expect("non-empty")
        .clone();
    Ok(Oscillation {
        gap: &max - &min,
        averages,
        min,
        max,
    })
}

/// Fraction of gap symbols in one period.
pub fn zero_density(orbit: &CyclicWord) -> Rational {
    let zeros = orbit.symbols().iter().filter(|&&s| s == GAP).count();
    Rational::new(zeros.into(), orbit.period().into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gapped::{glue, Closure, GappedSubshiftSpec, GlueRequest, Precision, Segment, Tau};
    use crate::rational::frac;

    fn w(s: &str) -> Word {
        Word::compact(s)
    }

    #[test]
    fn empirical_examples() {
        let m = empirical_measure(w("1010").symbols(), 2, 1).unwrap();
        assert_eq!(m.weight(&[1]), frac(1, 2));
        assert_eq!(m.weight(&[0]), frac(1, 2));
        let m = empirical_measure(w("00000").symbols(), 5, 1).unwrap();
        assert_eq!(m.weights.len(), 1);
        assert_eq!(m.weight(&[0]), frac(1, 1));
        let m = empirical_measure(w("10001000").symbols(), 4, 2).unwrap();
        assert_eq!(m.weight(&[1, 0]), frac(1, 4));
        assert_eq!(m.weight(&[0, 0]), frac(2, 4));
        assert_eq!(m.weight(&[0, 1]), frac(1, 4));
        assert!(empirical_measure(w("100").symbols(), 3, 2).is_err());
    }

    #[test]
    fn birkhoff_examples() {
        let chi = Observable::chi_zero(2).unwrap();
        assert_eq!(
            birkhoff_average(w("1010").symbols(), &chi, 4).unwrap(),
            frac(1, 2)
        );
        assert_eq!(
            birkhoff_average(w("1000").symbols(), &chi, 4).unwrap(),
            frac(3, 4)
        );
        assert!(birkhoff_average(w("1000").symbols(), &chi, 5).is_err());

        let spec = GappedSubshiftSpec::full(1, Tau::integer(1)).unwrap();
        let req = GlueRequest {
            segments: vec![
                Segment {
                    word: w("11"),
                    start: 0,
                },
                Segment {
                    word: w("1"),
                    start: 6,
                },
            ],
            precision: Precision::Dyadic(1),
            closure: Closure::OpenEnd,
        };
        let (out, _) = glue(&spec, &req).unwrap();
        assert_eq!(
            birkhoff_average(out.symbols(), &chi, 8).unwrap(),
            frac(5, 8)
        );
    }

    #[test]
    fn oscillation_examples() {
        let chi = Observable::chi_zero(2).unwrap();
        let o = oscillation(w("11111111").symbols(), &chi, &[1, 4, 8]).unwrap();
        assert_eq!(o.gap, frac(0, 1));
        let o = oscillation(w("10101010").symbols(), &chi, &[2, 4, 8]).unwrap();
        assert_eq!(o.gap, frac(0, 1));
        let o = oscillation(w("11000000").symbols(), &chi, &[2, 8]).unwrap();
        assert_eq!((o.min, o.max), (frac(0, 1), frac(3, 4)));
    }

    #[test]
    fn zero_density_examples() {
        let c = |s: &str| CyclicWord::new(w(s).0).unwrap();
        assert_eq!(zero_density(&c("10")), frac(1, 2));
        assert_eq!(zero_density(&c("100")), frac(2, 3));
        assert_eq!(zero_density(&c("000")), frac(1, 1));
    }
}
