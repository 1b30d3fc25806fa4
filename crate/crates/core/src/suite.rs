//! The acceptance criteria as runnable checks.
//!
//! Each criterion returns a [`CriterionReport`]; brute-force oracles from
//! [`crate::oracle`] are the reference wherever a fast path is compared.

use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::{One, Pow, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::counting::{
    binomial_bound, count_word_class, language_counts, periodic_points, primitive_orbits,
};
use crate::gapped::{
    build_oscillating_point, glue, min_gap_witness_search, Closure, GlueOutput, GlueRequest,
    OscillationSchedule, Precision, Tau, GAP,
};
use crate::measures::{
    ergodic_optimum, orbit_averages, oscillation, perturbation_bound_check, wasserstein,
    zero_density, FiniteMeasure,
};
use crate::oracle::NaiveOracle;
use crate::rational::{dyadic, frac, ln_big, Rational};
use crate::symbolic::base::Sft;
use crate::symbolic::{CyclicWord, Symbol, Word};
use crate::{Error, GappedSubshiftSpec, Limits, Observable, Result};

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub seed: u64,
    pub limits: Limits,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: DEFAULT_SEED,
            limits: Limits::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    /// A resource cap stopped the check before it could decide.
    pub cap_exceeded: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {:<28} {} ({:.1}s) {}",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

type Check = fn(&SuiteOptions) -> Result<(bool, String)>;

pub const CRITERIA: [(u8, &str, Check); 13] = [
    (1, "membership-oracle", membership_oracle),
    (2, "counting-oracle", counting_oracle),
    (3, "subadditivity", subadditivity),
    (4, "entropy-sandwich", entropy_sandwich),
    (5, "zero-density", zero_density_certificate),
    (6, "periodic-census", periodic_census),
    (7, "glue-soundness", glue_soundness),
    (8, "gap-minimality", gap_minimality),
    (9, "word-class-bound", word_class_bound),
    (10, "wasserstein", wasserstein_properties),
    (11, "level-set-gap", level_set_gap),
    (12, "optimization-separation", optimization_separation),
    (13, "oscillation", oscillation_certificate),
];

pub fn run_criterion(id: u8, opts: &SuiteOptions) -> Result<CriterionReport> {
    let &(id, name, check) = CRITERIA
        .iter()
        .find(|(i, _, _)| *i == id)
        .ok_or_else(|| Error::Precondition(format!("no criterion {id}")))?;
    let start = Instant::now();
    let (passed, cap_exceeded, detail) = match check(opts) {
        Ok((p, d)) => (p, false, d),
        Err(e) => (false, e.is_resource_limit(), format!("error: {e}")),
    };
    Ok(CriterionReport {
        id,
        name,
        passed,
        cap_exceeded,
        detail,
        elapsed: start.elapsed(),
    })
}

pub fn run_all(opts: &SuiteOptions) -> Vec<CriterionReport> {
    CRITERIA
        .iter()
        .map(|(id, _, _)| run_criterion(*id, opts).expect("known id"))
        .collect()
}

fn taus() -> [Tau; 3] {
    [Tau::new(1, 2).unwrap(), Tau::integer(1), Tau::integer(2)]
}

/// Full shifts on 1 and 2 symbols and the golden-mean shift, so `|Ã| ≤ 3`.
fn small_specs(opts: &SuiteOptions) -> Result<Vec<(String, GappedSubshiftSpec)>> {
    let golden = Arc::new(Sft::new(2, vec![Word::compact("11")], &opts.limits)?);
    let mut out = Vec::new();
    for tau in taus() {
        out.push((
            format!("full1 tau={tau}"),
            GappedSubshiftSpec::full(1, tau)?,
        ));
        out.push((
            format!("full2 tau={tau}"),
            GappedSubshiftSpec::full(2, tau)?,
        ));
        out.push((
            format!("golden tau={tau}"),
            GappedSubshiftSpec::new(golden.clone(), tau)?,
        ));
    }
    Ok(out)
}

fn fail(detail: String) -> Result<(bool, String)> {
    Ok((false, detail))
}

fn membership_oracle(opts: &SuiteOptions) -> Result<(bool, String)> {
    let mut checked = 0u64;
    for (name, spec) in small_specs(opts)? {
        let mut oracle = NaiveOracle::new(&spec)?;
        let mut mismatch: Option<Word> = None;
        let mut err = None;
        oracle.enumerate(14, &mut |w, ok| {
            if mismatch.is_some() || err.is_some() {
                return;
            }
            checked += 1;
            match spec.contains_word(w) {
                Ok(fast) if fast != ok => mismatch = Some(Word(w.to_vec())),
                Ok(_) => {}
                Err(e) => err = Some(e),
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        if let Some(w) = mismatch {
            return fail(format!("{name}: verdicts differ on {w}"));
        }
        opts.limits.check_deadline("membership oracle")?;
    }
    Ok((true, format!("{checked} words agree")))
}

fn counting_oracle(opts: &SuiteOptions) -> Result<(bool, String)> {
    for (name, spec) in small_specs(opts)? {
        let fast = language_counts(&spec, 12, &opts.limits)?;
        let slow = NaiveOracle::new(&spec)?.language_counts(12);
        if let Some(n) = (0..=12).find(|&n| fast[n] != slow[n]) {
            return fail(format!("{name}: n={n} dp {} vs brute {}", fast[n], slow[n]));
        }
    }
    let binary = GappedSubshiftSpec::full(1, Tau::integer(1))?;
    let c = language_counts(&binary, 5, &opts.limits)?;
    if c[4] != BigUint::from(15u32) || c[5] != BigUint::from(28u32) {
        return fail(format!("anchors |L4|={} |L5|={}", c[4], c[5]));
    }
    Ok((true, "9 specs, n ≤ 12; |L4|=15 |L5|=28".into()))
}

fn subadditivity(opts: &SuiteOptions) -> Result<(bool, String)> {
    let mut specs = small_specs(opts)?;
    specs.push((
        "full5 tau=1".into(),
        GappedSubshiftSpec::full(5, Tau::integer(1))?,
    ));
    for (name, spec) in specs {
        let c = language_counts(&spec, 16, &opts.limits)?;
        for total in 2..=16 {
            for m in 1..total {
                if c[total] > &c[m] * &c[total - m] {
                    return fail(format!("{name}: |L{total}| > |L{m}|·|L{}|", total - m));
                }
            }
        }
    }
    Ok((true, "m+n ≤ 16 on 10 specs".into()))
}

fn entropy_sandwich(opts: &SuiteOptions) -> Result<(bool, String)> {
    let spec = GappedSubshiftSpec::full(5, Tau::integer(1))?;
    let c = language_counts(&spec, 14, &opts.limits)?;
    let five = BigUint::from(5u32);
    if let Some(n) = (1..=14).find(|&n| c[n] < five.clone().pow(n as u32)) {
        return fail(format!("h_{n} < ln 5"));
    }
    // h_14 < h_6  ⇔  |L14|^6 < |L6|^14
    let improving = c[14].clone().pow(6u32) < c[6].clone().pow(14u32);
    let h = |n: usize| ln_big(&c[n]) / n as f64 - 5f64.ln();
    Ok((
        improving,
        format!("h6-ln5={:.5} h14-ln5={:.5}", h(6), h(14)),
    ))
}

fn zero_density_certificate(opts: &SuiteOptions) -> Result<(bool, String)> {
    let mut orbits = 0usize;
    for (name, spec) in small_specs(opts)? {
        let floor = spec.tau().zero_density_floor();
        for d in 1..=14 {
            for c in primitive_orbits(&spec, d, &opts.limits)? {
                let s = c.symbols();
                if s.contains(&GAP) && s.iter().any(|&x| x != GAP) {
                    orbits += 1;
                    if zero_density(&c) < floor {
                        return fail(format!("{name}: {c} has density {}", zero_density(&c)));
                    }
                }
            }
        }
        let tau = spec.tau();
        if tau.is_integer() {
            let mut w = vec![1 as Symbol];
            w.extend(std::iter::repeat_n(GAP, tau.num() as usize));
            if !spec.cyclic_admissible(&w)? || zero_density(&CyclicWord::new(w)?) != floor {
                return fail(format!("{name}: (1 0^tau) does not attain the floor"));
            }
        }
    }
    Ok((true, format!("{orbits} mixed orbits of period ≤ 14")))
}

fn periodic_census(opts: &SuiteOptions) -> Result<(bool, String)> {
    let spec = GappedSubshiftSpec::full(1, Tau::integer(1))?;
    let mut oracle = NaiveOracle::new(&spec)?;
    for (n, want) in [(1, 2u32), (2, 4), (3, 5)] {
        let got = periodic_points(&spec, n, &opts.limits)?.count;
        let brute = oracle.periodic_count(n);
        if got != BigUint::from(want) || BigUint::from(brute) != got {
            return fail(format!("|Per{n}| = {got}, brute {brute}, expected {want}"));
        }
    }
    let per12 = periodic_points(&spec, 12, &opts.limits)?.count;
    let l12 = &language_counts(&spec, 12, &opts.limits)?[12];
    let growth = ln_big(&per12) / 12.0;
    let reference = ln_big(l12) / 12.0 / (1.0 + spec.tau().to_f64());
    Ok((
        growth >= reference - 0.2,
        format!("(1/12)ln|Per12|={growth:.5} ref={reference:.5}"),
    ))
}

fn random_word(spec: &GappedSubshiftSpec, rng: &mut ChaCha8Rng) -> Result<Word> {
    loop {
        let len = rng.gen_range(1..=5);
        let w: Vec<Symbol> = (0..len)
            .map(|_| rng.gen_range(0..spec.ambient_size()) as Symbol)
            .collect();
        if spec.contains_word(&w)? {
            return Ok(Word(w));
        }
    }
}

fn glue_soundness(opts: &SuiteOptions) -> Result<(bool, String)> {
    let specs = small_specs(opts)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut cycles = 0;
    for trial in 0..200 {
        let (name, spec) = specs.choose(&mut rng).expect("non-empty");
        let k = rng.gen_range(1..=4);
        let words = (0..k)
            .map(|_| random_word(spec, &mut rng))
            .collect::<Result<Vec<_>>>()?;
        let precision = Precision::Dyadic(rng.gen_range(0..=3));
        let mut req = GlueRequest::with_default_layout(spec, words, precision, Closure::OpenEnd)?;
        // stretch a few gaps beyond the minimum
        let mut shift = 0;
        for seg in req.segments.iter_mut().skip(1) {
            shift += rng.gen_range(0..=2);
            seg.start += shift;
        }
        if rng.gen_bool(0.5) {
            let period = req.min_period(spec).expect("non-empty") + rng.gen_range(0..=3);
            req.closure = Closure::Periodic { period };
        }
        let (out, report) = glue(spec, &req)?;
        if !report.all_hold() {
            return fail(format!(
                "trial {trial} ({name}): certificate fails for {req:?}"
            ));
        }
        if report.records.iter().any(|r| r.hi > precision.epsilon()) {
            return fail(format!("trial {trial} ({name}): bound exceeds 2^-m"));
        }
        // independent checks: scanner membership and literal agreement
        let mut oracle = NaiveOracle::new(spec)?;
        let admissible = match &out {
            GlueOutput::Prefix(w) => oracle.contains(w.symbols()),
            GlueOutput::Cycle(c) => {
                cycles += 1;
                spec.cyclic_admissible(c.symbols())? && oracle.periodic_contains(c.symbols())
            }
        };
        let agrees = req.segments.iter().all(|s| {
            s.word
                .symbols()
                .iter()
                .enumerate()
                .all(|(r, &a)| out.at(s.start + r) == a)
        });
        if !admissible || !agrees {
            return fail(format!(
                "trial {trial} ({name}): witness rejected for {req:?}"
            ));
        }
    }
    Ok((
        true,
        format!("200 requests ({cycles} periodic), seed {:#x}", opts.seed),
    ))
}

fn gap_minimality(opts: &SuiteOptions) -> Result<(bool, String)> {
    let v = Word::compact("01");
    let mut cases = 0;
    for tau in [Tau::integer(1), Tau::integer(2)] {
        let spec = GappedSubshiftSpec::full(1, tau)?;
        for n in 1..=3usize {
            let u = Word(vec![1; n]);
            for m in 0..=2u32 {
                let precision = Precision::Dyadic(m);
                let big_m = spec.gap_function().eval(n as u64, precision) as usize;
                let none_below = tau.ceil_mul((n + m as usize) as u64) as usize + m as usize - 1;
                for gap in 1..=none_below {
                    let s = min_gap_witness_search(&spec, &u, &v, precision, gap, &opts.limits)?;
                    if let Some(w) = s.witness {
                        return fail(format!("tau={tau} n={n} m={m}: witness {w} at gap {gap}"));
                    }
                }
                let s = min_gap_witness_search(&spec, &u, &v, precision, big_m, &opts.limits)?;
                if s.witness.is_none() {
                    return fail(format!("tau={tau} n={n} m={m}: no witness at M={big_m}"));
                }
                cases += 1;
            }
        }
    }
    Ok((true, format!("{cases} (tau, n, m) cases")))
}

fn word_class_bound(opts: &SuiteOptions) -> Result<(bool, String)> {
    let mut checked = 0;
    for (name, spec) in small_specs(opts)? {
        let beta = spec.tau().zero_density_floor();
        let a = spec.base_size();
        // zero-count histograms by brute force, for the "enumerated" side
        let mut hist = vec![vec![0u64; 11]; 11];
        NaiveOracle::new(&spec)?.enumerate(10, &mut |w, ok| {
            if ok {
                hist[w.len()][w.iter().filter(|&&s| s == GAP).count()] += 1;
            }
        });
        for kappa in [frac(1, 4), frac(1, 2)] {
            for (n, row) in hist.iter().enumerate().skip(1) {
                let nq = Rational::from_integer(n.into());
                let lo = ((Rational::one() - &kappa) * &beta * &nq)
                    .ceil()
                    .to_integer();
                let hi = ((Rational::one() + &kappa) * &beta * &nq)
                    .floor()
                    .to_integer();
                let lo: usize = lo.try_into().expect("small");
                let hi: usize = usize::try_from(hi).expect("small").min(n);
                let dp = count_word_class(&spec, n, &[GAP], lo, hi, &opts.limits)?;
                let brute: u64 = if lo <= hi {
                    row[lo..=hi].iter().sum()
                } else {
                    0
                };
                let bb = binomial_bound(n, a, &beta, &kappa)?;
                if dp != BigUint::from(brute) || dp > bb.sum || !bb.holds() {
                    return fail(format!(
                        "{name} n={n} kappa={kappa}: class {dp} (brute {brute}) sum {} closed {}",
                        bb.sum, bb.closed
                    ));
                }
                checked += 1;
            }
        }
    }
    Ok((true, format!("{checked} (spec, kappa, n) cases")))
}

fn random_symbols(rng: &mut ChaCha8Rng, len: usize) -> Vec<Symbol> {
    (0..len).map(|_| rng.gen_range(0..3)).collect()
}

fn wasserstein_properties(opts: &SuiteOptions) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x10);
    for i in 0..100 {
        let len = rng.gen_range(1..=12);
        let x = random_symbols(&mut rng, len);
        let y = random_symbols(&mut rng, len);
        // direct evaluation of Σ_{k<L} 2^{-k}[x_k ≠ y_k]
        let exact: Rational = (0..len)
            .filter(|&k| x[k] != y[k])
            .map(|k| dyadic(k as u32))
            .sum();
        let dx = FiniteMeasure::dirac(Word(x))?;
        let dy = FiniteMeasure::dirac(Word(y))?;
        let d = wasserstein(&dx, &dy)?;
        if !d.contains(&exact) || d != wasserstein(&dy, &dx)? {
            return fail(format!("dirac pair {i}: {:?} vs exact {exact}", d));
        }
    }
    for i in 0..100 {
        let n = rng.gen_range(1..=32);
        let len = rng.gen_range(2..=12);
        let m = rng.gen_range(0..len - 1) as u32;
        let far = rng.gen_range(0..=n);
        let delta = Rational::new(far.into(), n.into());
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(&mut rng);
        let xs: Vec<Word> = (0..n)
            .map(|_| Word(random_symbols(&mut rng, len)))
            .collect();
        let mut ys = xs.clone();
        for (rank, &j) in idx.iter().enumerate() {
            let keep = if rank < far { 0 } else { m as usize + 1 };
            for k in keep..len {
                ys[j].0[k] = rng.gen_range(0..3);
            }
        }
        let check = perturbation_bound_check(&xs, &ys, m, &delta)?;
        if !check.holds {
            return fail(format!(
                "empirical pair {i}: hi {} > bound {}",
                check.distance.hi, check.bound
            ));
        }
    }
    Ok((true, "100 dirac pairs, 100 empirical pairs".into()))
}

fn level_set_gap(opts: &SuiteOptions) -> Result<(bool, String)> {
    let mut orbits = 0;
    for tau in [Tau::integer(1), Tau::integer(2)] {
        for size in [1, 2] {
            let spec = GappedSubshiftSpec::full(size, tau)?;
            let psi = Observable::chi_zero(spec.ambient_size())?.map(|v| Rational::one() - v);
            let gamma = tau.base_fraction();
            for (rec, avg) in orbit_averages(&spec, &psi, 14, &opts.limits)? {
                orbits += 1;
                if avg > gamma && avg < Rational::one() {
                    return fail(format!(
                        "tau={tau} size={size}: {} has average {avg}",
                        rec.word
                    ));
                }
            }
        }
    }
    Ok((true, format!("{orbits} orbits outside (1/(1+tau), 1)")))
}

fn optimization_separation(opts: &SuiteOptions) -> Result<(bool, String)> {
    let spec = GappedSubshiftSpec::full(1, Tau::integer(1))?;
    let phi = Observable::chi_zero(2)?.map(|v| -v);
    let r = ergodic_optimum(&spec, &phi, 12, &opts.limits)?;
    let ten = CyclicWord::new(vec![1, 0])?.canonical();
    let zero_free = r.zero_free_best.as_ref().map(|(v, _)| v.clone());
    let Some((zc, _)) = r.zero_containing_best.clone() else {
        return fail("no zero-containing orbit".into());
    };
    let ten_avg = orbit_averages(&spec, &phi, 2, &opts.limits)?
        .into_iter()
        .find(|(rec, _)| rec.word == ten)
        .map(|(_, a)| a);
    if zero_free != Some(Rational::zero()) || zc != frac(-1, 2) || ten_avg != Some(frac(-1, 2)) {
        return fail(format!(
            "zero-free {zero_free:?}, zero-containing {zc}, (10) {ten_avg:?}"
        ));
    }
    for c in [frac(-3, 2), frac(1, 3), frac(5, 1)] {
        let shifted = ergodic_optimum(&spec, &phi.plus_constant(&c), 12, &opts.limits)?;
        if shifted.argmax != r.argmax || shifted.best != &r.best + &c {
            return fail(format!("argmax changes under φ + {c}"));
        }
    }
    Ok((true, "zero-free 0, zero-containing -1/2 at (10)".into()))
}

fn oscillation_certificate(_opts: &SuiteOptions) -> Result<(bool, String)> {
    let spec = GappedSubshiftSpec::full(1, Tau::integer(1))?;
    let sched = OscillationSchedule::default_for(&spec);
    let checkpoints = sched.checkpoints(&spec);
    let len = sched.total_len(&spec);
    let x = build_oscillating_point(&spec, &sched, len)?;
    let again = build_oscillating_point(&spec, &OscillationSchedule::default_for(&spec), len)?;
    let chi = Observable::chi_zero(2)?;
    let osc = oscillation(x.symbols(), &chi, &checkpoints)?;
    let deterministic = x == again;
    Ok((
        deterministic && osc.gap >= frac(3, 10),
        format!("gap {} over checkpoints {checkpoints:?}", osc.gap),
    ))
}
