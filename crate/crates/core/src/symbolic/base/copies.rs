use std::sync::Arc;

use crate::symbolic::base::{BaseLanguage, StateId};
use crate::symbolic::{Alphabet, Symbol};
use crate::{Error, Result};

/// Disjoint union of `m` relabeled copies of an inner language.
///
/// Copy `k` uses the symbols `k·|A| .. (k+1)·|A| - 1`.
#[derive(Debug, Clone)]
pub struct UnionOfCopies {
    inner: Arc<dyn BaseLanguage>,
    copies: usize,
    alphabet: Alphabet,
}

impl UnionOfCopies {
    pub fn new(inner: Arc<dyn BaseLanguage>, copies: usize) -> Result<Self> {
        if copies == 0 {
            return Err(Error::InvalidSpec("need at least one copy".into()));
        }
        let size = inner
            .alphabet()
            .size()
            .checked_mul(copies)
            .ok_or_else(|| Error::InvalidSpec("alphabet too large".into()))?;
        Ok(UnionOfCopies {
            alphabet: Alphabet::new(size)?,
            inner,
            copies,
        })
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn inner(&self) -> &Arc<dyn BaseLanguage> {
        &self.inner
    }

    fn split(&self, symbol: Symbol) -> (usize, Symbol) {
        let a = self.inner.alphabet().size();
        (symbol as usize / a, (symbol as usize % a) as Symbol)
    }

    fn encode(&self, copy: usize, inner: StateId) -> StateId {
        (1 + copy * self.inner.state_count() + inner as usize) as StateId
    }
}

impl BaseLanguage for UnionOfCopies {
    fn kind(&self) -> &'static str {
        "copies"
    }

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn start(&self) -> StateId {
        0
    }

    fn step(&self, state: StateId, symbol: Symbol) -> Option<StateId> {
        if symbol as usize >= self.alphabet.size() {
            return None;
        }
        let (copy, a) = self.split(symbol);
        if state == 0 {
            let t = self.inner.step(self.inner.start(), a)?;
            return Some(self.encode(copy, t));
        }
        let n = self.inner.state_count();
        let flat = state as usize - 1;
        if flat / n != copy {
            return None;
        }
        let t = self.inner.step((flat % n) as StateId, a)?;
        Some(self.encode(copy, t))
    }

    fn state_count(&self) -> usize {
        1 + self.copies * self.inner.state_count()
    }

    fn max_word_len(&self) -> Option<usize> {
        self.inner.max_word_len()
    }

    fn contains_periodic(&self, cycle: &[Symbol]) -> Result<bool> {
        self.alphabet.check_word(cycle)?;
        let Some(&first) = cycle.first() else {
            return Ok(true);
        };
        let copy = self.split(first).0;
        if cycle.iter().any(|&s| self.split(s).0 != copy) {
            return Ok(false);
        }
        let relabeled: Vec<Symbol> = cycle.iter().map(|&s| self.split(s).1).collect();
        self.inner.contains_periodic(&relabeled)
    }

    fn describe(&self) -> toml::Table {
        let mut t = toml::Table::new();
        t.insert("kind".into(), "copies".into());
        t.insert("copies".into(), (self.copies as i64).into());
        t.insert("inner".into(), toml::Value::Table(self.inner.describe()));
        t
    }
}
