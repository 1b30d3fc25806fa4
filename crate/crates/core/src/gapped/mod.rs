//! The gapped subshift `X` over `{0} ∪ A`.
//!
//! `X` forbids every word of `A* \ ℒ(Z)` and every pattern
//! `x_1..x_s 0^t x_{s+1}` with all `x_i ≠ 0`, `t ≥ 1` and `τ·s > t`. Base
//! symbol `a` of `Z` appears in `X` as `a + 1`; `0` is the gap symbol.

mod gap;
mod glue;
mod schedule;
mod witness;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

pub use gap::{gap_function, GapFunction, Precision};
pub use glue::{glue, Closure, GlueOutput, GlueRequest, Segment, ShadowRecord, VerificationReport};
pub use schedule::{build_oscillating_point, BlockSource, OscillationSchedule, Phase};
pub use witness::{min_gap_witness_search, WitnessSearch};

use crate::rational::Rational;
use crate::symbolic::base::{BaseLanguage, StateId};
use crate::symbolic::{Alphabet, Symbol};
use crate::{Error, Result};

pub const GAP: Symbol = 0;

/// Non-negative rational `p/q` in lowest terms.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Tau {
    num: u64,
    den: u64,
}

impl Tau {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidSpec(format!(
                "tau {num}/0 has zero denominator"
            )));
        }
        let g = num_integer::gcd(num, den);
        Ok(Tau {
            num: num / g,
            den: den / g,
        })
    }

    pub fn integer(n: u64) -> Self {
        Tau { num: n, den: 1 }
    }

    /// Accepts `"p/q"` or `"p"`; decimals are rejected.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("tau must be an exact fraction p/q, got {s:?}"));
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s, "1"),
        };
        let p: u64 = p.parse().map_err(|_| bad())?;
        let q: u64 = q.parse().map_err(|_| bad())?;
        Tau::new(p, q)
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn as_rational(&self) -> Rational {
        Rational::new(BigInt::from(self.num), BigInt::from(self.den))
    }

    /// `⌈τ·s⌉` in exact integer arithmetic.
    pub fn ceil_mul(&self, s: u64) -> u64 {
        let p = self.num as u128 * s as u128;
        p.div_ceil(self.den as u128) as u64
    }

    /// Whether `τ·s > t`, i.e. the pattern `1^s 0^t 1` is forbidden.
    pub fn forbids(&self, s: u64, t: u64) -> bool {
        self.num as u128 * s as u128 > t as u128 * self.den as u128
    }

    /// `τ/(1+τ)`, the least zero density of an orbit leaving the base.
    pub fn zero_density_floor(&self) -> Rational {
        Rational::new(
            BigInt::from(self.num),
            BigInt::from(self.num) + BigInt::from(self.den),
        )
    }

    /// `1/(1+τ)`.
    pub fn base_fraction(&self) -> Rational {
        Rational::new(
            BigInt::from(self.den),
            BigInt::from(self.num) + BigInt::from(self.den),
        )
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Tau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for Tau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tau({self})")
    }
}

impl TryFrom<String> for Tau {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        Tau::parse(&s)
    }
}

impl From<Tau> for String {
    fn from(t: Tau) -> String {
        t.to_string()
    }
}

/// State of the membership automaton for `ℒ(X)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GState {
    /// No pending gap requirement.
    Free,
    /// Inside a run of `len` base symbols; `base` is the base automaton state of the run.
    InRun { len: u32, base: StateId },
    /// Inside a zero run that still needs `remaining ≥ 1` zeros before a base symbol.
    InGap { remaining: u32 },
}

#[derive(Clone)]
pub struct GappedSubshiftSpec {
    base: Arc<dyn BaseLanguage>,
    tau: Tau,
    ambient: Alphabet,
}

impl fmt::Debug for GappedSubshiftSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GappedSubshiftSpec")
            .field("base", &self.base.kind())
            .field("base_size", &self.base_size())
            .field("tau", &self.tau)
            .finish()
    }
}

impl GappedSubshiftSpec {
    pub fn new(base: Arc<dyn BaseLanguage>, tau: Tau) -> Result<Self> {
        let ambient = Alphabet::new(base.alphabet().size() + 1)?;
        Ok(GappedSubshiftSpec { base, tau, ambient })
    }

    /// Full shift on `size` base symbols.
    pub fn full(size: usize, tau: Tau) -> Result<Self> {
        let base = crate::symbolic::base::FullShift::new(size)?;
        GappedSubshiftSpec::new(Arc::new(base), tau)
    }

    pub fn base(&self) -> &dyn BaseLanguage {
        self.base.as_ref()
    }

    pub fn base_arc(&self) -> &Arc<dyn BaseLanguage> {
        &self.base
    }

    pub fn tau(&self) -> Tau {
        self.tau
    }

    pub fn with_tau(&self, tau: Tau) -> Self {
        GappedSubshiftSpec {
            base: self.base.clone(),
            tau,
            ambient: self.ambient.clone(),
        }
    }

    /// `|A|`.
    pub fn base_size(&self) -> usize {
        self.ambient.size() - 1
    }

    pub fn ambient(&self) -> &Alphabet {
        &self.ambient
    }

    pub fn ambient_size(&self) -> usize {
        self.ambient.size()
    }

    /// Embeds a base word into the ambient alphabet.
    pub fn lift(&self, base_word: &[Symbol]) -> Vec<Symbol> {
        base_word.iter().map(|&a| a + 1).collect()
    }

    /// Least admissible zero run after `s` base symbols: `⌈τ·s⌉`.
    pub fn required_zero_run(&self, s: u64) -> u64 {
        self.tau.ceil_mul(s)
    }

    pub fn gap_function(&self) -> GapFunction {
        GapFunction::new(self.tau)
    }

    pub fn start(&self) -> GState {
        GState::Free
    }

    pub fn step(&self, state: GState, symbol: Symbol) -> Option<GState> {
        if symbol == GAP {
            return Some(match state {
                GState::Free => GState::Free,
                GState::InRun { len, .. } => match self.required_zero_run(len as u64) {
                    0 | 1 => GState::Free,
                    need => GState::InGap {
                        remaining: (need - 1) as u32,
                    },
                },
                GState::InGap { remaining } if remaining <= 1 => GState::Free,
                GState::InGap { remaining } => GState::InGap {
                    remaining: remaining - 1,
                },
            });
        }
        let a = symbol - 1;
        match state {
            GState::Free => Some(GState::InRun {
                len: 1,
                base: self.base.step(self.base.start(), a)?,
            }),
            GState::InRun { len, base } => Some(GState::InRun {
                len: len + 1,
                base: self.base.step(base, a)?,
            }),
            GState::InGap { .. } => None,
        }
    }

    pub fn run(&self, w: &[Symbol]) -> Option<GState> {
        w.iter().try_fold(self.start(), |st, &s| self.step(st, s))
    }

    fn check_runs(&self, w: &[Symbol]) -> Result<()> {
        if let Some(max) = self.base.max_word_len() {
            let longest = w
                .split(|&s| s == GAP)
                .map(<[Symbol]>::len)
                .max()
                .unwrap_or(0);
            if longest > max {
                return Err(Error::ResourceLimit {
                    what: format!("base run of length {longest}"),
                    limit: max as u64,
                });
            }
        }
        Ok(())
    }

    /// Membership in `ℒ(X)`.
    pub fn contains_word(&self, w: &[Symbol]) -> Result<bool> {
        self.ambient.check_word(w)?;
        self.check_runs(w)?;
        Ok(self.run(w).is_some())
    }

    /// Whether the periodic point `cycle^∞` lies in `X`.
    pub fn cyclic_admissible(&self, cycle: &[Symbol]) -> Result<bool> {
        self.ambient.check_word(cycle)?;
        if cycle.is_empty() {
            return Err(Error::Precondition("empty cycle".into()));
        }
        let n = cycle.len();
        let Some(start) = (0..n).find(|&i| cycle[i] != GAP && cycle[(i + n - 1) % n] == GAP) else {
            if cycle.iter().all(|&s| s == GAP) {
                return Ok(true);
            }
            let base: Vec<Symbol> = cycle.iter().map(|&s| s - 1).collect();
            return self.base.contains_periodic(&base);
        };
        let rotated: Vec<Symbol> = (0..n).map(|i| cycle[(start + i) % n]).collect();
        self.check_runs(&rotated)?;
        // read the rotation, then the first symbol again to close the cycle
        Ok(self
            .run(&rotated)
            .and_then(|st| self.step(st, rotated[0]))
            .is_some())
    }

    /// Rebuilds the configuration table `{ tau, base = {...} }`.
    pub fn describe(&self) -> toml::Table {
        let mut t = toml::Table::new();
        t.insert("tau".into(), self.tau.to_string().into());
        t.insert("base".into(), toml::Value::Table(self.base.describe()));
        t
    }
}

/// `⌈τ·s⌉` zeros must follow a run of `s` base symbols.
pub fn required_zero_run(spec: &GappedSubshiftSpec, s: u64) -> u64 {
    spec.required_zero_run(s)
}

pub fn contains_word(spec: &GappedSubshiftSpec, w: &[Symbol]) -> Result<bool> {
    spec.contains_word(w)
}
