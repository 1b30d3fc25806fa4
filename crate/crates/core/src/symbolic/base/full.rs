use crate::symbolic::base::{BaseLanguage, StateId};
use crate::symbolic::{Alphabet, Symbol};
use crate::Result;

#[derive(Debug, Clone)]
pub struct FullShift {
    alphabet: Alphabet,
}

impl FullShift {
    pub fn new(size: usize) -> Result<Self> {
        Ok(FullShift {
            alphabet: Alphabet::new(size)?,
        })
    }
}

impl BaseLanguage for FullShift {
    fn kind(&self) -> &'static str {
        "full"
    }

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn start(&self) -> StateId {
        0
    }

    fn step(&self, _state: StateId, symbol: Symbol) -> Option<StateId> {
        ((symbol as usize) < self.alphabet.size()).then_some(0)
    }

    fn state_count(&self) -> usize {
        1
    }

    fn contains_periodic(&self, cycle: &[Symbol]) -> Result<bool> {
        self.alphabet.check_word(cycle)?;
        Ok(true)
    }

    fn describe(&self) -> toml::Table {
        let mut t = toml::Table::new();
        t.insert("kind".into(), "full".into());
        t.insert("size".into(), (self.alphabet.size() as i64).into());
        t
    }
}
