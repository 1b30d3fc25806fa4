//! Base subshifts `Z` and their languages.
//!
//! Every base variant is a deterministic automaton for its (factor-closed)
//! language: a word belongs to `ℒ(Z)` exactly when the automaton can read
//! it from [`BaseLanguage::start`] without dying. Counting, membership and
//! the gapped construction only ever talk to this trait.

mod copies;
mod full;
mod sft;
mod substitution;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};

pub use copies::UnionOfCopies;
pub use full::FullShift;
pub use sft::Sft;
pub use substitution::Substitution;

use crate::symbolic::{Alphabet, Symbol, Word, WordFormat};
use crate::{Error, Limits, Result};

pub type StateId = u32;

pub trait BaseLanguage: Send + Sync + fmt::Debug {
    /// Registry name of the variant.
    fn kind(&self) -> &'static str;

    fn alphabet(&self) -> &Alphabet;

    /// State reached on the empty word.
    fn start(&self) -> StateId;

    /// Transition on `symbol`, or `None` when the extended word leaves the language.
    fn step(&self, state: StateId, symbol: Symbol) -> Option<StateId>;

    fn state_count(&self) -> usize;

    /// Longest word length for which the automaton is exact, if bounded.
    fn max_word_len(&self) -> Option<usize> {
        None
    }

    /// Whether the periodic point `cycle^∞` lies in `Z`.
    fn contains_periodic(&self, cycle: &[Symbol]) -> Result<bool>;

    /// Configuration table that rebuilds this language through a [`BaseRegistry`].
    fn describe(&self) -> toml::Table;
}

pub type BaseFactory = Arc<
    dyn Fn(&toml::Table, &BaseRegistry, &Limits) -> Result<Arc<dyn BaseLanguage>> + Send + Sync,
>;

/// Base-language constructors keyed by the `kind` field of a config table.
#[derive(Clone)]
pub struct BaseRegistry {
    factories: BTreeMap<String, BaseFactory>,
}

impl fmt::Debug for BaseRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.factories.keys()).finish()
    }
}

impl Default for BaseRegistry {
    fn default() -> Self {
        BaseRegistry::with_builtins()
    }
}

impl BaseRegistry {
    pub fn empty() -> Self {
        BaseRegistry {
            factories: BTreeMap::new(),
        }
    }

    /// `full`, `sft`, `substitution` and `copies`.
    pub fn with_builtins() -> Self {
        let mut r = BaseRegistry::empty();
        r.register("full", |p, _, _| {
            Ok(Arc::new(FullShift::new(usize_param(p, "size")?)?) as Arc<dyn BaseLanguage>)
        });
        r.register("sft", |p, _, limits| {
            let size = usize_param(p, "size")?;
            let forbidden = words_param(p, "forbidden")?;
            Ok(Arc::new(Sft::new(size, forbidden, limits)?) as Arc<dyn BaseLanguage>)
        });
        r.register("substitution", |p, _, limits| {
            let size = usize_param(p, "size")?;
            let rules = words_param(p, "rules")?;
            let seed = usize_param(p, "seed")? as Symbol;
            let max_len = match p.get("max_len") {
                Some(_) => usize_param(p, "max_len")?,
                None => Substitution::DEFAULT_MAX_LEN,
            };
            Ok(
                Arc::new(Substitution::new(size, rules, seed, max_len, limits)?)
                    as Arc<dyn BaseLanguage>,
            )
        });
        r.register("copies", |p, reg, limits| {
            let copies = usize_param(p, "copies")?;
            let inner = p
                .get("inner")
                .and_then(|v| v.as_table())
                .ok_or_else(|| Error::Parse("copies needs an inner table".into()))?;
            let inner = reg.build(inner, limits)?;
            Ok(Arc::new(UnionOfCopies::new(inner, copies)?) as Arc<dyn BaseLanguage>)
        });
        r
    }

    pub fn register<F>(&mut self, name: &str, factory: F)
    where
        F: Fn(&toml::Table, &BaseRegistry, &Limits) -> Result<Arc<dyn BaseLanguage>>
            + Send
            + Sync
            + 'static,
    {
        self.factories.insert(name.to_string(), Arc::new(factory));
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.factories.keys().map(String::as_str)
    }

    pub fn build(&self, params: &toml::Table, limits: &Limits) -> Result<Arc<dyn BaseLanguage>> {
        let kind = params
            .get("kind")
            .and_then(|v| v.as_str())
            .ok_or_else(|| Error::Parse("base subshift needs a kind".into()))?;
        let factory = self
            .factories
            .get(kind)
            .ok_or_else(|| Error::Parse(format!("unknown base kind {kind:?}")))?;
        factory(params, self, limits)
    }
}

pub(crate) fn usize_param(p: &toml::Table, key: &str) -> Result<usize> {
    p.get(key)
        .and_then(|v| v.as_integer())
        .filter(|&i| i >= 0)
        .map(|i| i as usize)
        .ok_or_else(|| Error::Parse(format!("missing or invalid non-negative integer {key:?}")))
}

fn word_format(p: &toml::Table) -> Result<WordFormat> {
    match p.get("format").and_then(|v| v.as_str()) {
        None | Some("decimal") => Ok(WordFormat::Decimal),
        Some("compact") => Ok(WordFormat::Compact),
        Some(other) => Err(Error::Parse(format!("unknown word format {other:?}"))),
    }
}

pub(crate) fn words_param(p: &toml::Table, key: &str) -> Result<Vec<Word>> {
    let format = word_format(p)?;
    p.get(key)
        .and_then(|v| v.as_array())
        .ok_or_else(|| Error::Parse(format!("missing word list {key:?}")))?
        .iter()
        .map(|v| {
            v.as_str()
                .ok_or_else(|| Error::Parse(format!("{key}: expected strings")))
                .and_then(|s| Word::parse(s, format))
        })
        .collect()
}

pub(crate) fn words_value(words: &[Vec<Symbol>]) -> toml::Value {
    toml::Value::Array(
        words
            .iter()
            .map(|w| toml::Value::String(crate::symbolic::render(w, WordFormat::Decimal)))
            .collect(),
    )
}

fn check_len(lang: &dyn BaseLanguage, n: usize) -> Result<()> {
    match lang.max_word_len() {
        Some(max) if n > max => Err(Error::ResourceLimit {
            what: format!(
                "{} language built for words up to length {max}",
                lang.kind()
            ),
            limit: max as u64,
        }),
        _ => Ok(()),
    }
}

/// Runs the automaton over `w`, returning the final state if `w ∈ ℒ(Z)`.
pub fn run(lang: &dyn BaseLanguage, w: &[Symbol]) -> Option<StateId> {
    w.iter()
        .try_fold(lang.start(), |state, &s| lang.step(state, s))
}

/// Membership of `w` in the base language.
pub fn base_contains(lang: &dyn BaseLanguage, w: &[Symbol]) -> Result<bool> {
    lang.alphabet().check_word(w)?;
    check_len(lang, w.len())?;
    Ok(run(lang, w).is_some())
}

/// `|ℒ_n(Z)|`, by counting automaton paths of length `n` from the start state.
pub fn base_language_count(lang: &dyn BaseLanguage, n: usize, limits: &Limits) -> Result<BigUint> {
    check_len(lang, n)?;
    let mut layer: HashMap<StateId, BigUint> = HashMap::from([(lang.start(), BigUint::one())]);
    for _ in 0..n {
        let mut next: HashMap<StateId, BigUint> = HashMap::with_capacity(layer.len());
        for (&state, count) in &layer {
            for a in lang.alphabet().symbols() {
                if let Some(t) = lang.step(state, a) {
                    *next.entry(t).or_insert_with(BigUint::zero) += count;
                }
            }
        }
        limits.check_states("base language count", next.len())?;
        layer = next;
    }
    Ok(layer.into_values().sum())
}
