use std::collections::HashSet;

use crate::symbolic::base::{words_value, BaseLanguage, StateId};
use crate::symbolic::{Alphabet, Symbol, Word};
use crate::{Error, Limits, Result};

/// Factor language of a non-erasing substitution iterated from a seed symbol.
///
/// The language is the set of factors of `σ^k(seed)` over all `k`, built up
/// to a fixed maximal length by closing under "factors of images of
/// factors". A length-`ℓ` factor of `σ^{k+1}(seed)` always sits inside the
/// image of a factor of `σ^k(seed)` of length at most `ℓ`, so the closure
/// is exact. Membership is a walk in the trie of factors.
#[derive(Debug, Clone)]
pub struct Substitution {
    alphabet: Alphabet,
    rules: Vec<Vec<Symbol>>,
    seed: Symbol,
    max_len: usize,
    // trie over the factor set; node 0 is the empty word
    children: Vec<Vec<Option<StateId>>>,
}

impl Substitution {
    pub const DEFAULT_MAX_LEN: usize = 32;

    pub fn new(
        size: usize,
        rules: Vec<Word>,
        seed: Symbol,
        max_len: usize,
        limits: &Limits,
    ) -> Result<Self> {
        let alphabet = Alphabet::new(size)?;
        if rules.len() != size {
            return Err(Error::InvalidSpec(format!(
                "substitution needs one rule per symbol ({} rules for {size} symbols)",
                rules.len()
            )));
        }
        for r in &rules {
            if r.is_empty() {
                return Err(Error::InvalidSpec(
                    "substitution rules must be non-erasing".into(),
                ));
            }
            alphabet.check_word(r.symbols())?;
        }
        alphabet.check(seed)?;
        let rules: Vec<Vec<Symbol>> = rules.into_iter().map(|w| w.0).collect();

        let mut factors: HashSet<Vec<Symbol>> = HashSet::new();
        let mut work: Vec<Vec<Symbol>> = Vec::new();
        if max_len > 0 {
            factors.insert(vec![seed]);
            work.push(vec![seed]);
        }
        while let Some(v) = work.pop() {
            let image: Vec<Symbol> = v
                .iter()
                .flat_map(|&a| rules[a as usize].iter().copied())
                .collect();
            for i in 0..image.len() {
                for j in i + 1..=(i + max_len).min(image.len()) {
                    let f = &image[i..j];
                    if !factors.contains(f) {
                        factors.insert(f.to_vec());
                        work.push(f.to_vec());
                    }
                }
            }
            limits.check_states("substitution factors", factors.len())?;
        }

        let mut children: Vec<Vec<Option<StateId>>> = vec![vec![None; size]];
        let mut sorted: Vec<&Vec<Symbol>> = factors.iter().collect();
        sorted.sort();
        for f in sorted {
            let mut node = 0usize;
            for &a in f {
                node = match children[node][a as usize] {
                    Some(c) => c as usize,
                    None => {
                        children.push(vec![None; size]);
                        let c = children.len() - 1;
                        children[node][a as usize] = Some(c as StateId);
                        c
                    }
                };
            }
        }

        Ok(Substitution {
            alphabet,
            rules,
            seed,
            max_len,
            children,
        })
    }

    pub fn rules(&self) -> &[Vec<Symbol>] {
        &self.rules
    }

    pub fn seed(&self) -> Symbol {
        self.seed
    }
}

impl BaseLanguage for Substitution {
    fn kind(&self) -> &'static str {
        "substitution"
    }

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn start(&self) -> StateId {
        0
    }

    fn step(&self, state: StateId, symbol: Symbol) -> Option<StateId> {
        self.children
            .get(state as usize)?
            .get(symbol as usize)
            .copied()
            .flatten()
    }

    fn state_count(&self) -> usize {
        self.children.len()
    }

    fn max_word_len(&self) -> Option<usize> {
        Some(self.max_len)
    }

    fn contains_periodic(&self, _cycle: &[Symbol]) -> Result<bool> {
        Err(Error::Unsupported(
            "periodic points of substitution subshifts".into(),
        ))
    }

    fn describe(&self) -> toml::Table {
        let mut t = toml::Table::new();
        t.insert("kind".into(), "substitution".into());
        t.insert("size".into(), (self.alphabet.size() as i64).into());
        t.insert("rules".into(), words_value(&self.rules));
        t.insert("seed".into(), (self.seed as i64).into());
        t.insert("max_len".into(), (self.max_len as i64).into());
        t
    }
}
