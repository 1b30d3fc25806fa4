use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;

use super::language_count;
use crate::gapped::{GState, GappedSubshiftSpec, GAP};
use crate::rational::{ln_big, Rational};
use crate::symbolic::{CyclicWord, Symbol};
use crate::{Error, Limits, Observable, Result};

/// A primitive periodic orbit, represented by its least rotation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitRecord {
    pub word: CyclicWord,
    pub zero_density: Rational,
}

impl OrbitRecord {
    pub fn from_word(word: CyclicWord) -> Self {
        let zeros = word.symbols().iter().filter(|&&s| s == GAP).count();
        let zero_density = Rational::new(zeros.into(), word.period().into());
        OrbitRecord { word, zero_density }
    }

    pub fn period(&self) -> usize {
        self.word.period()
    }

    /// Birkhoff average of `phi` along the orbit.
    pub fn average(&self, phi: &Observable) -> Result<Rational> {
        let p = self.period();
        let mut total = Rational::zero();
        for i in 0..p {
            total += phi.evaluate_cyclic(self.word.symbols(), i)?;
        }
        Ok(total / Rational::from_integer(p.into()))
    }
}

/// Points `x` with `σ^n x = x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicCensus {
    pub n: usize,
    /// `|Per_n|`: every orbit of primitive period `d | n` contributes `d` points.
    pub count: BigUint,
    /// All orbits whose primitive period divides `n`, sorted by (period, word).
    pub orbits: Vec<OrbitRecord>,
}

fn check_periodic_support(spec: &GappedSubshiftSpec) -> Result<()> {
    // surfaces Unsupported for bases without periodic points
    spec.base().contains_periodic(&[0]).map(|_| ())
}

struct Fkm<'a> {
    spec: &'a GappedSubshiftSpec,
    n: usize,
    k: Symbol,
    a: Vec<Symbol>,
    found: Vec<CyclicWord>,
    visited: &'a AtomicU64,
    limits: &'a Limits,
    error: Option<Error>,
}

impl Fkm<'_> {
    /// Fredricksen–Kessler–Maiorana generation of Lyndon words, pruned by
    /// the membership automaton: every linear prefix of an admissible cycle
    /// lies in `ℒ(X)`.
    fn gen(&mut self, t: usize, p: usize, state: GState) {
        if self.error.is_some() {
            return;
        }
        if t > self.n {
            if p == self.n {
                let cycle = self.a[1..].to_vec();
                match self.spec.cyclic_admissible(&cycle) {
                    Ok(true) => self.found.push(CyclicWord::new(cycle).expect("non-empty")),
                    Ok(false) => {}
                    Err(e) => self.error = Some(e),
                }
            }
            return;
        }
        let v = self.visited.fetch_add(1, Ordering::Relaxed) + 1;
        if v.is_multiple_of(65_536) {
            if let Err(e) = self
                .limits
                .check_enumeration("periodic census", v)
                .and_then(|_| self.limits.check_deadline("periodic census"))
            {
                self.error = Some(e);
                return;
            }
        }
        let first = self.a[t - p];
        for j in first..self.k {
            let Some(next) = self.spec.step(state, j) else {
                continue;
            };
            self.a[t] = j;
            self.gen(t + 1, if j == first { p } else { t }, next);
            if self.error.is_some() {
                return;
            }
        }
    }
}

/// Admissible Lyndon words of length exactly `d`, i.e. one least-rotation
/// representative per primitive orbit of period `d`.
pub fn primitive_orbits(
    spec: &GappedSubshiftSpec,
    d: usize,
    limits: &Limits,
) -> Result<Vec<CyclicWord>> {
    if d == 0 {
        return Err(Error::Precondition("period must be ≥ 1".into()));
    }
    check_periodic_support(spec)?;
    let k = spec.ambient_size() as Symbol;
    let visited = AtomicU64::new(0);
    // shard on the first symbol; a Lyndon word's first symbol is its least
    let shards: Vec<Result<Vec<CyclicWord>>> = (0..k)
        .into_par_iter()
        .map(|first| {
            let Some(state) = spec.step(spec.start(), first) else {
                return Ok(Vec::new());
            };
            let mut f = Fkm {
                spec,
                n: d,
                k,
                a: vec![0; d + 1],
                found: Vec::new(),
                visited: &visited,
                limits,
                error: None,
            };
            f.a[1] = first;
            f.gen(2, 1, state);
            match f.error {
                Some(e) => Err(e),
                None => Ok(f.found),
            }
        })
        .collect();
    let mut out = Vec::new();
    for s in shards {
        out.extend(s?);
    }
    out.sort();
    Ok(out)
}

pub fn periodic_points(
    spec: &GappedSubshiftSpec,
    n: usize,
    limits: &Limits,
) -> Result<PeriodicCensus> {
    if n == 0 {
        return Err(Error::Precondition("period must be ≥ 1".into()));
    }
    let mut orbits = Vec::new();
    let mut count = BigUint::zero();
    for d in (1..=n).filter(|d| n.is_multiple_of(*d)) {
        let reps = primitive_orbits(spec, d, limits)?;
        count += BigUint::from(d) * BigUint::from(reps.len());
        orbits.extend(reps.into_iter().map(OrbitRecord::from_word));
    }
    Ok(PeriodicCensus { n, count, orbits })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthRow {
    pub n: usize,
    pub count: BigUint,
    /// `(1/n)·ln |Per_n|`.
    pub growth: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthProfile {
    pub rows: Vec<GrowthRow>,
    /// `h_{n_max} / (1 + τ)`.
    pub reference: f64,
}

pub fn growth_profile(
    spec: &GappedSubshiftSpec,
    n_max: usize,
    limits: &Limits,
) -> Result<GrowthProfile> {
    if n_max == 0 {
        return Err(Error::Precondition("growth profile needs n_max ≥ 1".into()));
    }
    let per_period: Vec<usize> = (1..=n_max)
        .map(|d| primitive_orbits(spec, d, limits).map(|r| r.len()))
        .collect::<Result<_>>()?;
    let rows = (1..=n_max)
        .map(|n| {
            let count: BigUint = (1..=n)
                .filter(|d| n % d == 0)
                .map(|d| BigUint::from(d) * BigUint::from(per_period[d - 1]))
                .sum();
            GrowthRow {
                n,
                growth: ln_big(&count) / n as f64,
                count,
            }
        })
        .collect();
    let h = ln_big(&language_count(spec, n_max, limits)?) / n_max as f64;
    Ok(GrowthProfile {
        rows,
        reference: h / (1.0 + spec.tau().to_f64()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gapped::Tau;
    use crate::oracle::NaiveOracle;
    use crate::symbolic::base::{Substitution, UnionOfCopies};
    use crate::Word;
    use std::sync::Arc;

    #[test]
    fn census_anchors() {
        let spec = GappedSubshiftSpec::full(1, Tau::integer(1)).unwrap();
        let l = Limits::default();
        let counts: Vec<u32> = (1..=3)
            .map(|n| {
                periodic_points(&spec, n, &l)
                    .unwrap()
                    .count
                    .try_into()
                    .unwrap()
            })
            .collect();
        assert_eq!(counts, [2, 4, 5]);
        let c3 = periodic_points(&spec, 3, &l).unwrap();
        let words: Vec<String> = c3
            .orbits
            .iter()
            .map(|o| o.word.render(Default::default()))
            .collect();
        assert_eq!(words, ["0", "1", "0 0 1"]);
    }

    #[test]
    fn census_matches_brute_force() {
        let l = Limits::default();
        for tau in [Tau::new(1, 2).unwrap(), Tau::integer(1), Tau::integer(2)] {
            for size in [1, 2] {
                let spec = GappedSubshiftSpec::full(size, tau).unwrap();
                let mut oracle = NaiveOracle::new(&spec).unwrap();
                for n in 1..=7 {
                    let census = periodic_points(&spec, n, &l).unwrap();
                    assert_eq!(
                        census.count,
                        BigUint::from(oracle.periodic_count(n)),
                        "{tau} {size} {n}"
                    );
                }
            }
        }
    }

    #[test]
    fn growth_example() {
        let spec = GappedSubshiftSpec::full(1, Tau::integer(1)).unwrap();
        let g = growth_profile(&spec, 3, &Limits::default()).unwrap();
        assert!((g.rows[2].growth - 5f64.ln() / 3.0).abs() < 1e-12);
        assert!((g.rows[0].growth - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn substitution_census_is_unsupported() {
        let tm = Substitution::new(
            2,
            vec![Word::compact("01"), Word::compact("10")],
            0,
            16,
            &Limits::default(),
        )
        .unwrap();
        let spec = GappedSubshiftSpec::new(Arc::new(tm), Tau::integer(1)).unwrap();
        assert!(matches!(
            periodic_points(&spec, 3, &Limits::default()),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn copies_census_counts_each_copy() {
        let inner = Arc::new(crate::symbolic::base::FullShift::new(1).unwrap());
        let spec = GappedSubshiftSpec::new(
            Arc::new(UnionOfCopies::new(inner, 2).unwrap()),
            Tau::integer(1),
        )
        .unwrap();
        let mut oracle = NaiveOracle::new(&spec).unwrap();
        for n in 1..=6 {
            let c = periodic_points(&spec, n, &Limits::default()).unwrap();
            assert_eq!(c.count, BigUint::from(oracle.periodic_count(n)));
        }
    }

    #[test]
    fn enumeration_cap() {
        let spec = GappedSubshiftSpec::full(2, Tau::new(1, 2).unwrap()).unwrap();
        let l = Limits {
            max_enumeration: 10,
            ..Limits::default()
        };
        assert!(primitive_orbits(&spec, 16, &l)
            .unwrap_err()
            .is_resource_limit());
    }
}
