use crate::counting::{primitive_orbits, OrbitRecord};
use crate::gapped::{GappedSubshiftSpec, GAP};
use crate::rational::Rational;
use crate::symbolic::CyclicWord;
use crate::{Error, Limits, Observable, Result};

/// Every admissible primitive orbit of period `≤ n_max` with its `φ`-average.
pub fn orbit_averages(
    spec: &GappedSubshiftSpec,
    phi: &Observable,
    n_max: usize,
    limits: &Limits,
) -> Result<Vec<(OrbitRecord, Rational)>> {
    if n_max == 0 {
        return Err(Error::Precondition("maximal period must be ≥ 1".into()));
    }
    if phi.alphabet_size() != spec.ambient_size() {
        return Err(Error::Precondition(format!(
            "observable over {} symbols, subshift over {}",
            phi.alphabet_size(),
            spec.ambient_size()
        )));
    }
    let mut out = Vec::new();
    for d in 1..=n_max {
        for word in primitive_orbits(spec, d, limits)? {
            let rec = OrbitRecord::from_word(word);
            let avg = rec.average(phi)?;
            out.push((rec, avg));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodBest {
    pub period: usize,
    pub best: Rational,
    pub orbit: CyclicWord,
}

/// Periodic lower bound for `β(φ) = sup ∫φ dμ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimizationResult {
    pub best: Rational,
    /// All orbits attaining `best`, sorted by (period, word).
    pub argmax: Vec<CyclicWord>,
    /// Maximum over primitive orbits of each exact period that has one.
    pub per_period: Vec<PeriodBest>,
    pub zero_free_best: Option<(Rational, CyclicWord)>,
    pub zero_containing_best: Option<(Rational, CyclicWord)>,
}

fn keep_best(slot: &mut Option<(Rational, CyclicWord)>, avg: &Rational, word: &CyclicWord) {
    if slot.as_ref().is_none_or(|(b, _)| avg > b) {
        *slot = Some((avg.clone(), word.clone()));
    }
}

pub fn ergodic_optimum(
    spec: &GappedSubshiftSpec,
    phi: &Observable,
    n_max: usize,
    limits: &Limits,
) -> Result<OptimizationResult> {
    let orbits = orbit_averages(spec, phi, n_max, limits)?;
    let best = orbits
        .iter()
        .map(|(_, a)| a)
        .max()
        .cloned()
        .ok_or_else(|| Error::Infeasible("no admissible periodic orbit".into()))?;
    let mut per_period: Vec<PeriodBest> = Vec::new();
    let mut zero_free = None;
    let mut zero_containing = None;
    for (rec, avg) in &orbits {
        match per_period.last_mut() {
            Some(row) if row.period == rec.period() => {
                if avg > &row.best {
                    row.best = avg.clone();
                    row.orbit = rec.word.clone();
                }
            }
            _ => per_period.push(PeriodBest {
                period: rec.period(),
                best: avg.clone(),
                orbit: rec.word.clone(),
            }),
        }
        if rec.word.symbols().contains(&GAP) {
            keep_best(&mut zero_containing, avg, &rec.word);
        } else {
            keep_best(&mut zero_free, avg, &rec.word);
        }
    }
    Ok(OptimizationResult {
        argmax: orbits
            .iter()
            .filter(|(_, a)| a == &best)
            .map(|(r, _)| r.word.clone())
            .collect(),
        best,
        per_period,
        zero_free_best: zero_free,
        zero_containing_best: zero_containing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gapped::Tau;
    use crate::rational::frac;
    use crate::Word;

    fn cyc(s: &str) -> CyclicWord {
        CyclicWord::new(Word::compact(s).0).unwrap().canonical()
    }

    #[test]
    fn psi_dichotomy() {
        let spec = GappedSubshiftSpec::full(1, Tau::integer(1)).unwrap();
        let psi = Observable::chi_zero(2).unwrap().map(|v| frac(1, 1) - v);
        let r = ergodic_optimum(&spec, &psi, 6, &Limits::default()).unwrap();
        assert_eq!(r.best, frac(1, 1));
        assert_eq!(r.argmax, vec![cyc("1")]);
        assert_eq!(r.zero_containing_best, Some((frac(1, 2), cyc("10"))));
    }

    #[test]
    fn negative_chi_separation() {
        for tau in [Tau::integer(1), Tau::integer(2), Tau::new(1, 2).unwrap()] {
            let spec = GappedSubshiftSpec::full(2, tau).unwrap();
            let phi = Observable::chi_zero(3).unwrap().map(|v| -v);
            let r = ergodic_optimum(&spec, &phi, 6, &Limits::default()).unwrap();
            assert_eq!(r.zero_free_best.unwrap().0, frac(0, 1));
            let (z, _) = r.zero_containing_best.unwrap();
            assert!(z <= -tau.zero_density_floor());
        }
    }

    #[test]
    fn constant_observable() {
        let spec = GappedSubshiftSpec::full(1, Tau::integer(2)).unwrap();
        let c = Observable::constant(frac(3, 7), 2).unwrap();
        let r = ergodic_optimum(&spec, &c, 5, &Limits::default()).unwrap();
        assert_eq!(r.best, frac(3, 7));
        assert_eq!(
            r.argmax.len(),
            orbit_averages(&spec, &c, 5, &Limits::default())
                .unwrap()
                .len()
        );
        assert!(r.per_period.iter().all(|p| p.best == frac(3, 7)));
    }
}
