use std::sync::Arc;

use gapshift::counting::{
    binomial_bound, count_word_class, language_counts, periodic_points, primitive_orbits,
    separated_count_bounds,
};
use gapshift::gapped::{glue, Closure, GlueRequest, Precision, GAP};
use gapshift::measures::{
    birkhoff_average, empirical_measure, ergodic_optimum, wasserstein, zero_density, FiniteMeasure,
};
use gapshift::oracle::NaiveOracle;
use gapshift::rational::{frac, Rational};
use gapshift::symbolic::base::Sft;
use gapshift::symbolic::metric::truncated_distance;
use gapshift::{GappedSubshiftSpec, Limits, Observable, Symbol, Tau, Word};
use num_bigint::BigUint;
use num_traits::One;
use proptest::prelude::*;

fn tau_strategy() -> impl Strategy<Value = Tau> {
    (0u64..=3, 1u64..=3).prop_map(|(p, q)| Tau::new(p, q).unwrap())
}

/// Full shifts on one or two symbols, or a random two-symbol SFT.
fn spec_strategy() -> impl Strategy<Value = GappedSubshiftSpec> {
    let forbidden = prop::collection::vec(prop::collection::vec(0u16..2, 1..=3), 0..=2);
    (tau_strategy(), 0usize..3, forbidden).prop_map(|(tau, kind, forbidden)| match kind {
        0 | 1 => GappedSubshiftSpec::full(kind + 1, tau).unwrap(),
        _ => {
            let sft = Sft::new(
                2,
                forbidden.into_iter().map(Word).collect(),
                &Limits::default(),
            )
            .unwrap();
            GappedSubshiftSpec::new(Arc::new(sft), tau).unwrap()
        }
    })
}

fn word_over(size: usize, max_len: usize) -> impl Strategy<Value = Vec<Symbol>> {
    prop::collection::vec(0..size as Symbol, 0..=max_len)
}

fn spec_and_word(max_len: usize) -> impl Strategy<Value = (GappedSubshiftSpec, Vec<Symbol>)> {
    spec_strategy().prop_flat_map(move |s| {
        let size = s.ambient_size();
        (Just(s), word_over(size, max_len))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn membership_matches_scanner((spec, w) in spec_and_word(18)) {
        let mut oracle = NaiveOracle::new(&spec).unwrap();
        prop_assert_eq!(spec.contains_word(&w).unwrap(), oracle.contains(&w));
    }

    #[test]
    fn language_is_factor_closed((spec, w) in spec_and_word(16)) {
        if spec.contains_word(&w).unwrap() {
            for i in 0..w.len() {
                for j in i..=w.len() {
                    prop_assert!(spec.contains_word(&w[i..j]).unwrap());
                }
            }
        }
    }

    #[test]
    fn required_zero_run_is_least_admissible(tau in tau_strategy(), s in 1u64..40) {
        let spec = GappedSubshiftSpec::full(1, tau).unwrap();
        let t = spec.required_zero_run(s);
        let word = |zeros: u64| {
            let mut w = vec![1; s as usize];
            w.extend(std::iter::repeat_n(GAP, zeros as usize));
            w.push(1);
            w
        };
        prop_assert!(spec.contains_word(&word(t.max(1))).unwrap());
        if t >= 2 {
            prop_assert!(!spec.contains_word(&word(t - 1)).unwrap());
        }
    }

    #[test]
    fn counts_match_enumeration(spec in spec_strategy()) {
        let fast = language_counts(&spec, 8, &Limits::default()).unwrap();
        let slow = NaiveOracle::new(&spec).unwrap().language_counts(8);
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn census_matches_enumeration(spec in spec_strategy(), n in 1usize..=6) {
        let fast = periodic_points(&spec, n, &Limits::default()).unwrap().count;
        let slow = NaiveOracle::new(&spec).unwrap().periodic_count(n);
        prop_assert_eq!(fast, BigUint::from(slow));
    }

    #[test]
    fn subadditivity(spec in spec_strategy()) {
        let c = language_counts(&spec, 16, &Limits::default()).unwrap();
        for total in 2..=16 {
            for m in 1..total {
                prop_assert!(c[total] <= &c[m] * &c[total - m]);
            }
        }
    }

    #[test]
    fn counts_do_not_grow_with_tau(p in 0u64..4, q in 1u64..4, extra in 1u64..4, size in 1usize..=2) {
        let small = Tau::new(p, q).unwrap();
        let large = Tau::new(p * extra + extra, q).unwrap();
        let a = language_counts(&GappedSubshiftSpec::full(size, small).unwrap(), 12, &Limits::default()).unwrap();
        let b = language_counts(&GappedSubshiftSpec::full(size, large).unwrap(), 12, &Limits::default()).unwrap();
        for n in 0..=12 {
            prop_assert!(b[n] <= a[n]);
        }
    }

    #[test]
    fn word_class_bound(spec in spec_strategy(), kappa_num in 0i64..=4, n in 1usize..=10) {
        let kappa = frac(kappa_num, 4);
        let beta = spec.tau().zero_density_floor();
        let nq = Rational::from_integer(n.into());
        let lo: usize = ((Rational::one() - &kappa) * &beta * &nq).ceil().to_integer().try_into().unwrap();
        let count = count_word_class(&spec, n, &[GAP], lo.min(n), n, &Limits::default()).unwrap();
        let bb = binomial_bound(n, spec.base_size(), &beta, &kappa).unwrap();
        prop_assert!(count <= bb.sum);
        prop_assert!(bb.sum <= bb.closed);
    }

    #[test]
    fn full_window_word_class_is_the_language((spec, w) in spec_and_word(3), n in 3usize..=9) {
        prop_assume!(!w.is_empty());
        let all = count_word_class(&spec, n, &w, 0, n, &Limits::default()).unwrap();
        prop_assert_eq!(all, language_counts(&spec, n, &Limits::default()).unwrap()[n].clone());
    }

    #[test]
    fn mixed_orbits_respect_zero_density_floor(spec in spec_strategy(), d in 1usize..=9) {
        let floor = spec.tau().zero_density_floor();
        for c in primitive_orbits(&spec, d, &Limits::default()).unwrap() {
            let s = c.symbols();
            if s.contains(&GAP) && s.iter().any(|&x| x != GAP) {
                prop_assert!(zero_density(&c) >= floor, "{} below {}", c, floor);
            }
        }
    }

    #[test]
    fn sandwich_is_ordered_and_grows(spec in spec_strategy(), n in 1usize..=6, m in 0usize..=3) {
        let l = Limits::default();
        let (lo, hi) = separated_count_bounds(&spec, n, m, &l).unwrap();
        let (lo2, hi2) = separated_count_bounds(&spec, n + 1, m, &l).unwrap();
        prop_assert!(lo <= hi);
        prop_assert!(lo <= lo2 && hi <= hi2);
    }

    #[test]
    fn empirical_weights_sum_to_one(x in word_over(3, 30), k in 1usize..=3) {
        prop_assume!(x.len() >= k);
        let n = x.len() + 1 - k;
        let m = empirical_measure(&x, n, k).unwrap();
        prop_assert!(m.total().is_one());
        // Birkhoff averages of cylinder indicators are the cylinder weights
        for w in m.weights.keys() {
            let chi = Observable::cylinder(w.symbols(), 3).unwrap();
            prop_assert_eq!(birkhoff_average(&x, &chi, n).unwrap(), m.weight(w.symbols()));
        }
    }

    #[test]
    fn wasserstein_axioms(
        len in 1usize..=8,
        seeds in prop::collection::vec(prop::collection::vec(0u16..3, 8), 9),
    ) {
        let words: Vec<Word> = seeds.iter().map(|s| Word(s[..len].to_vec())).collect();
        let mu = FiniteMeasure::uniform(&words[0..3]).unwrap();
        let nu = FiniteMeasure::uniform(&words[3..6]).unwrap();
        let la = FiniteMeasure::uniform(&words[6..9]).unwrap();
        let d = wasserstein(&mu, &nu).unwrap();
        prop_assert_eq!(&d, &wasserstein(&nu, &mu).unwrap());
        prop_assert!(d.hi <= wasserstein(&mu, &la).unwrap().hi + wasserstein(&la, &nu).unwrap().hi);
        let dirac = wasserstein(
            &FiniteMeasure::dirac(words[0].clone()).unwrap(),
            &FiniteMeasure::dirac(words[1].clone()).unwrap(),
        ).unwrap();
        prop_assert!(dirac.contains(&truncated_distance(words[0].symbols(), words[1].symbols())));
    }

    #[test]
    fn argmax_invariant_under_constants(tau in tau_strategy(), c_num in -6i64..6, table in prop::collection::vec(-3i64..3, 2)) {
        let spec = GappedSubshiftSpec::full(1, tau).unwrap();
        let phi = Observable::from_table(1, 2, table.iter().map(|&v| frac(v, 1)).collect()).unwrap();
        let c = frac(c_num, 2);
        let l = Limits::default();
        let a = ergodic_optimum(&spec, &phi, 7, &l).unwrap();
        let b = ergodic_optimum(&spec, &phi.plus_constant(&c), 7, &l).unwrap();
        prop_assert_eq!(a.argmax, b.argmax);
        prop_assert_eq!(a.best + c, b.best);
    }
}

fn glue_case(
) -> impl Strategy<Value = (GappedSubshiftSpec, Vec<Vec<Symbol>>, u32, bool, Vec<usize>)> {
    spec_strategy().prop_flat_map(|spec| {
        let size = spec.ambient_size();
        (
            Just(spec),
            prop::collection::vec(prop::collection::vec(0..size as Symbol, 1..=5), 1..=4),
            0u32..=3,
            any::<bool>(),
            prop::collection::vec(0usize..3, 4),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn glued_witnesses_are_certified((spec, words, m, periodic, slack) in glue_case()) {
        for w in &words {
            prop_assume!(spec.contains_word(w).unwrap());
        }
        let precision = Precision::Dyadic(m);
        let mut req = GlueRequest::with_default_layout(
            &spec,
            words.into_iter().map(Word).collect(),
            precision,
            Closure::OpenEnd,
        ).unwrap();
        let mut shift = 0;
        for (seg, s) in req.segments.iter_mut().zip(&slack).skip(1) {
            shift += s;
            seg.start += shift;
        }
        if periodic {
            req.closure = Closure::Periodic { period: req.min_period(&spec).unwrap() + slack[0] };
        }
        let (out, report) = glue(&spec, &req).unwrap();
        prop_assert!(report.all_hold());
        prop_assert!(report.records.iter().all(|r| r.hi <= precision.epsilon()));
        let mut oracle = NaiveOracle::new(&spec).unwrap();
        match out {
            gapshift::gapped::GlueOutput::Prefix(w) => prop_assert!(oracle.contains(w.symbols())),
            gapshift::gapped::GlueOutput::Cycle(c) => prop_assert!(oracle.periodic_contains(c.symbols())),
        }
    }
}
