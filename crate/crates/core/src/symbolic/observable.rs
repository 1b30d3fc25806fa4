//! Locally constant observables: functions of the first `k` coordinates.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::rational::{self, Rational};
use crate::symbolic::{Symbol, Word, WordFormat};
use crate::{Error, Result};

const MAX_TABLE: usize = 1 << 22;

/// A function on points that only reads the first `depth` coordinates,
/// stored as a dense table indexed by the base-`alphabet_size` value of the window.
#[derive(Clone, PartialEq, Eq)]
pub struct Observable {
    depth: usize,
    alphabet_size: usize,
    table: Vec<Rational>,
}

impl fmt::Debug for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Observable")
            .field("depth", &self.depth)
            .field("alphabet_size", &self.alphabet_size)
            .finish_non_exhaustive()
    }
}

fn table_len(alphabet_size: usize, depth: usize) -> Result<usize> {
    let mut len = 1usize;
    for _ in 0..depth {
        len = len
            .checked_mul(alphabet_size)
            .filter(|&l| l <= MAX_TABLE)
            .ok_or_else(|| Error::ResourceLimit {
                what: "observable table".into(),
                limit: MAX_TABLE as u64,
            })?;
    }
    Ok(len)
}

impl Observable {
    pub fn from_table(depth: usize, alphabet_size: usize, table: Vec<Rational>) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidSpec(
                "observable depth must be positive".into(),
            ));
        }
        let len = table_len(alphabet_size, depth)?;
        if table.len() != len {
            return Err(Error::InvalidSpec(format!(
                "observable table has {} entries, expected {len}",
                table.len()
            )));
        }
        Ok(Observable {
            depth,
            alphabet_size,
            table,
        })
    }

    pub fn constant(value: Rational, alphabet_size: usize) -> Result<Self> {
        Observable::from_table(1, alphabet_size, vec![value; alphabet_size])
    }

    /// The indicator `χ_[w]` of the cylinder `[w]`.
    pub fn cylinder(w: &[Symbol], alphabet_size: usize) -> Result<Self> {
        let len = table_len(alphabet_size, w.len())?;
        let mut obs = Observable::from_table(w.len(), alphabet_size, vec![Rational::zero(); len])?;
        let idx = obs.index(w)?;
        obs.table[idx] = Rational::one();
        Ok(obs)
    }

    /// `χ_[0]`, the indicator of the gap symbol at coordinate 0.
    pub fn chi_zero(alphabet_size: usize) -> Result<Self> {
        Observable::cylinder(&[0], alphabet_size)
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    fn index(&self, window: &[Symbol]) -> Result<usize> {
        let mut idx = 0usize;
        for &s in window {
            if s as usize >= self.alphabet_size {
                return Err(Error::SymbolOutOfRange {
                    symbol: s as u32,
                    size: self.alphabet_size,
                });
            }
            idx = idx * self.alphabet_size + s as usize;
        }
        Ok(idx)
    }

    /// Value on a window of exactly `depth` symbols.
    pub fn eval_window(&self, window: &[Symbol]) -> Result<&Rational> {
        if window.len() != self.depth {
            return Err(Error::LengthMismatch {
                left: window.len(),
                right: self.depth,
            });
        }
        Ok(&self.table[self.index(window)?])
    }

    /// `φ(f^i x)` for any `x` extending `w`.
    pub fn evaluate(&self, w: &[Symbol], i: usize) -> Result<&Rational> {
        if i + self.depth > w.len() {
            return Err(Error::WindowExceedsWord {
                start: i,
                len: self.depth,
                word_len: w.len(),
            });
        }
        self.eval_window(&w[i..i + self.depth])
    }

    /// `φ(f^i w^∞)`; the window wraps around the period.
    pub fn evaluate_cyclic(&self, cycle: &[Symbol], i: usize) -> Result<&Rational> {
        let n = cycle.len();
        let window: Vec<Symbol> = (0..self.depth).map(|j| cycle[(i + j) % n]).collect();
        self.eval_window(&window)
    }

    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> Observable {
        Observable {
            depth: self.depth,
            alphabet_size: self.alphabet_size,
            table: self.table.iter().map(f).collect(),
        }
    }

    pub fn plus_constant(&self, c: &Rational) -> Observable {
        self.map(|v| v + c)
    }

    pub fn min_value(&self) -> &Rational {
        self.table.iter().min().expect("non-empty table")
    }

    pub fn max_value(&self) -> &Rational {
        self.table.iter().max().expect("non-empty table")
    }
}

/// Builds an observable from configuration parameters for a given ambient alphabet size.
pub type ObservableFactory = Arc<dyn Fn(&toml::Table, usize) -> Result<Observable> + Send + Sync>;

/// Named observable constructors, selected by the `kind` key of a config table.
#[derive(Clone)]
pub struct ObservableRegistry {
    factories: BTreeMap<String, ObservableFactory>,
}

impl fmt::Debug for ObservableRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.factories.keys()).finish()
    }
}

fn rational_param(params: &toml::Table, key: &str) -> Result<Rational> {
    match params.get(key) {
        Some(toml::Value::String(s)) => rational::parse(s),
        Some(toml::Value::Integer(i)) => Ok(rational::int(*i)),
        Some(other) => Err(Error::Parse(format!(
            "{key}: expected fraction, got {other}"
        ))),
        None => Err(Error::Parse(format!("missing parameter {key:?}"))),
    }
}

impl ObservableRegistry {
    pub fn empty() -> Self {
        ObservableRegistry {
            factories: BTreeMap::new(),
        }
    }

    /// `chi0`, `psi` (= 1 - χ_[0]), `neg_chi0`, `constant`, `cylinder` and `table`.
    pub fn with_builtins() -> Self {
        let mut r = ObservableRegistry::empty();
        r.register("chi0", |_, size| Observable::chi_zero(size));
        r.register("psi", |_, size| {
            Ok(Observable::chi_zero(size)?.map(|v| Rational::one() - v))
        });
        r.register("neg_chi0", |_, size| {
            Ok(Observable::chi_zero(size)?.map(|v| -v))
        });
        r.register("constant", |p, size| {
            Observable::constant(rational_param(p, "value")?, size)
        });
        r.register("cylinder", |p, size| {
            let text = p
                .get("word")
                .and_then(|v| v.as_str())
                .ok_or_else(|| Error::Parse("cylinder needs a word".into()))?;
            Observable::cylinder(Word::parse(text, WordFormat::Decimal)?.symbols(), size)
        });
        r.register("table", |p, size| {
            let depth = p
                .get("depth")
                .and_then(|v| v.as_integer())
                .ok_or_else(|| Error::Parse("table needs an integer depth".into()))?;
            let values = p
                .get("values")
                .and_then(|v| v.as_array())
                .ok_or_else(|| Error::Parse("table needs a values array".into()))?
                .iter()
                .map(|v| match v {
                    toml::Value::String(s) => rational::parse(s),
                    toml::Value::Integer(i) => Ok(rational::int(*i)),
                    other => Err(Error::Parse(format!("bad table value {other}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            Observable::from_table(depth.max(0) as usize, size, values)
        });
        r
    }

    pub fn register<F>(&mut self, name: &str, factory: F)
    where
        F: Fn(&toml::Table, usize) -> Result<Observable> + Send + Sync + 'static,
    {
        self.factories.insert(name.to_string(), Arc::new(factory));
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.factories.keys().map(String::as_str)
    }

    /// Builds from a table whose `kind` key names a registered constructor.
    pub fn build(&self, params: &toml::Table, alphabet_size: usize) -> Result<Observable> {
        let kind = params
            .get("kind")
            .and_then(|v| v.as_str())
            .ok_or_else(|| Error::Parse("observable needs a kind".into()))?;
        let factory = self
            .factories
            .get(kind)
            .ok_or_else(|| Error::Parse(format!("unknown observable kind {kind:?}")))?;
        factory(params, alphabet_size)
    }
}

impl Default for ObservableRegistry {
    fn default() -> Self {
        ObservableRegistry::with_builtins()
    }
}
