use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::{dyadic, Rational};
use crate::symbolic::metric::{
    diameter, truncated_distance, word_distance_interval, DistanceInterval,
};
use crate::symbolic::Word;
#[cfg(test)]
use crate::Symbol;
use crate::{Error, Result};

/// A probability measure with finitely many atoms, each known only through a
/// prefix of common length `L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMeasure {
    atoms: Vec<(Word, Rational)>,
}

impl FiniteMeasure {
    /// Zero-weight atoms are dropped; prefixes must be distinct and the weights must sum to 1.
    pub fn new(atoms: Vec<(Word, Rational)>) -> Result<Self> {
        let atoms: Vec<(Word, Rational)> =
            atoms.into_iter().filter(|(_, q)| !q.is_zero()).collect();
        let Some(len) = atoms.first().map(|(w, _)| w.len()) else {
            return Err(Error::Precondition("measure without atoms".into()));
        };
        if len == 0 {
            return Err(Error::Precondition("atoms need a non-empty prefix".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for (w, q) in &atoms {
            if w.len() != len {
                return Err(Error::LengthMismatch {
                    left: len,
                    right: w.len(),
                });
            }
            if q.is_negative() {
                return Err(Error::Precondition(format!("negative weight {q}")));
            }
            if !seen.insert(w) {
                return Err(Error::Precondition(format!("repeated atom {w}")));
            }
        }
        let total: Rational = atoms.iter().map(|(_, q)| q).sum();
        if !total.is_one() {
            return Err(Error::Precondition(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(FiniteMeasure { atoms })
    }

    pub fn dirac(w: Word) -> Result<Self> {
        FiniteMeasure::new(vec![(w, Rational::one())])
    }

    /// `(1/n) Σ δ_{x_i}`, merging repeated prefixes.
    pub fn uniform(words: &[Word]) -> Result<Self> {
        if words.is_empty() {
            return Err(Error::Precondition("measure without atoms".into()));
        }
        let mut counts: BTreeMap<&Word, usize> = BTreeMap::new();
        for w in words {
            *counts.entry(w).or_default() += 1;
        }
        let n = words.len();
        FiniteMeasure::new(
            counts
                .into_iter()
                .map(|(w, c)| (w.clone(), Rational::new(c.into(), n.into())))
                .collect(),
        )
    }

    pub fn atoms(&self) -> &[(Word, Rational)] {
        &self.atoms
    }

    pub fn prefix_len(&self) -> usize {
        self.atoms[0].0.len()
    }
}

struct Edge {
    to: usize,
    cap: BigInt,
    cost: i64,
}

/// Successive-shortest-path min-cost flow with Bellman–Ford path search.
struct Flow {
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

impl Flow {
    fn new(nodes: usize) -> Self {
        Flow {
            edges: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    fn add(&mut self, from: usize, to: usize, cap: BigInt, cost: i64) {
        self.adj[from].push(self.edges.len());
        self.edges.push(Edge { to, cap, cost });
        self.adj[to].push(self.edges.len());
        self.edges.push(Edge {
            to: from,
            cap: BigInt::zero(),
            cost: -cost,
        });
    }

    fn min_cost(&mut self, s: usize, t: usize) -> BigInt {
        let n = self.adj.len();
        let mut total = BigInt::zero();
        loop {
            let mut dist = vec![i64::MAX; n];
            let mut via = vec![usize::MAX; n];
            dist[s] = 0;
            for _ in 0..n {
                let mut changed = false;
                for u in 0..n {
                    if dist[u] == i64::MAX {
                        continue;
                    }
                    for &e in &self.adj[u] {
                        let edge = &self.edges[e];
                        if edge.cap.is_positive() && dist[u] + edge.cost < dist[edge.to] {
                            dist[edge.to] = dist[u] + edge.cost;
                            via[edge.to] = e;
                            changed = true;
                        }
                    }
                }
                if !changed {
                    break;
                }
            }
            if dist[t] == i64::MAX {
                return total;
            }
            let mut path = Vec::new();
            let mut v = t;
            while v != s {
                let e = via[v];
                path.push(e);
                v = self.edges[e ^ 1].to;
            }
            let push = path
                .iter()
                .map(|&e| self.edges[e].cap.clone())
                .min()
                .expect("non-empty path");
            for &e in &path {
                self.edges[e].cap -= &push;
                self.edges[e ^ 1].cap += &push;
            }
            total += push * dist[t];
        }
    }
}

/// Certified bounds on the first Wasserstein distance. The ground cost
/// between atoms is the lower end of their prefix distance interval; since
/// every coupling has mass 1 and each upper end exceeds its lower end by the
/// same tail `2^{-(L-1)}`, the optimum for upper ends is the lower optimum
/// plus that tail.
pub fn wasserstein(mu: &FiniteMeasure, nu: &FiniteMeasure) -> Result<DistanceInterval> {
    let len = mu.prefix_len();
    if nu.prefix_len() != len {
        return Err(Error::LengthMismatch {
            left: len,
            right: nu.prefix_len(),
        });
    }
    if len > 62 {
        return Err(Error::ResourceLimit {
            what: "transport prefix length".into(),
            limit: 62,
        });
    }
    let denom = mu
        .atoms
        .iter()
        .chain(&nu.atoms)
        .fold(BigInt::one(), |acc, (_, q)| acc.lcm(q.denom()));
    let scale = Rational::from_integer(BigInt::one() << (len - 1));
    let (a, b) = (mu.atoms.len(), nu.atoms.len());
    let (s, t) = (a + b, a + b + 1);
    let mut flow = Flow::new(a + b + 2);
    for (i, (_, q)) in mu.atoms.iter().enumerate() {
        flow.add(
            s,
            i,
            (q * Rational::from_integer(denom.clone())).to_integer(),
            0,
        );
    }
    for (j, (_, q)) in nu.atoms.iter().enumerate() {
        flow.add(
            a + j,
            t,
            (q * Rational::from_integer(denom.clone())).to_integer(),
            0,
        );
    }
    for (i, (x, _)) in mu.atoms.iter().enumerate() {
        for (j, (y, _)) in nu.atoms.iter().enumerate() {
            let cost = (truncated_distance(x.symbols(), y.symbols()) * &scale)
                .to_integer()
                .to_i64()
                .expect("cost below 2^62");
            flow.add(i, a + j, denom.clone(), cost);
        }
    }
    let cost = flow.min_cost(s, t);
    let lo = Rational::new(cost, denom) / scale;
    Ok(DistanceInterval {
        hi: &lo + dyadic(len as u32 - 1),
        lo,
    })
}

/// Outcome of comparing two uniform empirical measures whose atoms are
/// pairwise close except for a `δ` fraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerturbationCheck {
    pub certified_pairs: usize,
    pub distance: DistanceInterval,
    /// `2^{-m} + δ·diam + 2^{-(L-1)}`.
    pub bound: Rational,
    pub holds: bool,
}

pub fn perturbation_bound_check(
    xs: &[Word],
    ys: &[Word],
    m: u32,
    delta: &Rational,
) -> Result<PerturbationCheck> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch {
            left: xs.len(),
            right: ys.len(),
        });
    }
    if xs.is_empty() {
        return Err(Error::Precondition("no pairs".into()));
    }
    let eps = dyadic(m);
    let mut certified = 0usize;
    for (x, y) in xs.iter().zip(ys) {
        if word_distance_interval(x.symbols(), y.symbols())?.hi <= eps {
            certified += 1;
        }
    }
    let n = Rational::from_integer(xs.len().into());
    if Rational::from_integer(certified.into()) < (Rational::one() - delta) * &n {
        return Err(Error::Precondition(format!(
            "only {certified} of {} pairs certified within 2^-{m}",
            xs.len()
        )));
    }
    let distance = wasserstein(&FiniteMeasure::uniform(xs)?, &FiniteMeasure::uniform(ys)?)?;
    let len = xs[0].len() as u32;
    let bound = eps + delta * diameter() + dyadic(len - 1);
    Ok(PerturbationCheck {
        certified_pairs: certified,
        holds: distance.hi <= bound,
        distance,
        bound,
    })
}

/// Exact transport cost between two uniform measures by trying every
/// assignment; optimal plans between uniform measures of equal size are
/// permutations.
#[cfg(test)]
pub(crate) fn brute_uniform_cost(xs: &[Vec<Symbol>], ys: &[Vec<Symbol>]) -> Rational {
    fn go(
        i: usize,
        xs: &[Vec<Symbol>],
        ys: &[Vec<Symbol>],
        used: &mut Vec<bool>,
        acc: Rational,
        best: &mut Option<Rational>,
    ) {
        if i == xs.len() {
            if best.as_ref().is_none_or(|b| &acc < b) {
                *best = Some(acc);
            }
            return;
        }
        for j in 0..ys.len() {
            if !used[j] {
                used[j] = true;
                go(
                    i + 1,
                    xs,
                    ys,
                    used,
                    &acc + truncated_distance(&xs[i], &ys[j]),
                    best,
                );
                used[j] = false;
            }
        }
    }
    let mut best = None;
    go(
        0,
        xs,
        ys,
        &mut vec![false; ys.len()],
        Rational::zero(),
        &mut best,
    );
    best.expect("non-empty") / Rational::from_integer(xs.len().into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn w(s: &str) -> Word {
        Word::compact(s)
    }

    #[test]
    fn identity_and_diracs() {
        let mu = FiniteMeasure::uniform(&[w("0110"), w("1000")]).unwrap();
        let d = wasserstein(&mu, &mu).unwrap();
        assert_eq!((d.lo, d.hi), (frac(0, 1), frac(1, 8)));

        let l = 6;
        let zeros = FiniteMeasure::dirac(Word::zeros(l)).unwrap();
        let ones = FiniteMeasure::dirac(Word(vec![1; l])).unwrap();
        let d = wasserstein(&zeros, &ones).unwrap();
        assert_eq!(d.lo, frac(2, 1) - dyadic(l as u32 - 1));
        assert_eq!(d.hi, frac(2, 1));
    }

    #[test]
    fn half_mass_moves() {
        let l = 5u32;
        let x = Word::zeros(l as usize);
        let y = Word(vec![1; l as usize]);
        let mu = FiniteMeasure::new(vec![(x.clone(), frac(1, 2)), (y, frac(1, 2))]).unwrap();
        let nu = FiniteMeasure::dirac(x).unwrap();
        let d = wasserstein(&mu, &nu).unwrap();
        assert_eq!(d.lo, frac(1, 1) - dyadic(l));
        assert!(d.hi <= frac(1, 1) + dyadic(l - 1));
    }

    #[test]
    fn matches_assignment_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(1..=5);
            let l = rng.gen_range(1..=6);
            let mut draw = || {
                (0..n)
                    .map(|_| (0..l).map(|_| rng.gen_range(0..3)).collect())
                    .collect::<Vec<Vec<Symbol>>>()
            };
            let (xs, ys) = (draw(), draw());
            let wx: Vec<Word> = xs.iter().cloned().map(Word).collect();
            let wy: Vec<Word> = ys.iter().cloned().map(Word).collect();
            let d = wasserstein(
                &FiniteMeasure::uniform(&wx).unwrap(),
                &FiniteMeasure::uniform(&wy).unwrap(),
            )
            .unwrap();
            assert_eq!(d.lo, brute_uniform_cost(&xs, &ys));
            let back = wasserstein(
                &FiniteMeasure::uniform(&wy).unwrap(),
                &FiniteMeasure::uniform(&wx).unwrap(),
            )
            .unwrap();
            assert_eq!(d, back);
        }
    }

    #[test]
    fn perturbation_examples() {
        let xs = vec![w("10100"), w("00010"), w("11111")];
        let r = perturbation_bound_check(&xs, &xs, 3, &frac(0, 1)).unwrap();
        assert!(r.holds);

        let xs = vec![w("100000"), w("010000"), w("001000"), w("000000")];
        let mut ys = xs.clone();
        ys[3] = w("111111");
        let r = perturbation_bound_check(&xs, &ys, 3, &frac(1, 4)).unwrap();
        assert_eq!(r.certified_pairs, 3);
        assert!(r.holds);
        assert!(perturbation_bound_check(&xs, &ys, 3, &frac(0, 1)).is_err());
        assert!(perturbation_bound_check(&xs, &ys[..3], 3, &frac(0, 1)).is_err());
    }

    #[test]
    fn rejects_bad_measures() {
        assert!(FiniteMeasure::new(vec![(w("01"), frac(1, 2))]).is_err());
        assert!(FiniteMeasure::new(vec![(w("01"), frac(1, 2)), (w("01"), frac(1, 2))]).is_err());
        assert!(FiniteMeasure::new(vec![(w("01"), frac(1, 2)), (w("011"), frac(1, 2))]).is_err());
        let a = FiniteMeasure::dirac(w("01")).unwrap();
        let b = FiniteMeasure::dirac(w("011")).unwrap();
        assert!(wasserstein(&a, &b).is_err());
    }
}
