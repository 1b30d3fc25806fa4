use std::collections::{HashMap, HashSet};

use crate::symbolic::base::{words_value, BaseLanguage, StateId};
use crate::symbolic::{Alphabet, Symbol, Word};
use crate::{Error, Limits, Result};

/// Subshift of finite type given by forbidden words.
///
/// The automaton tracks the last `L = max(K-1, 1)` symbols (K the longest
/// forbidden word) and keeps only the essential part of the window graph,
/// i.e. windows lying on a bi-infinite path. Words that avoid the forbidden
/// set but cannot be extended on both sides forever are therefore rejected.
#[derive(Debug, Clone)]
pub struct Sft {
    alphabet: Alphabet,
    forbidden: Vec<Vec<Symbol>>,
    memory: usize,
    // transitions[state][symbol]
    transitions: Vec<Vec<Option<StateId>>>,
    // id -> context word (prefix of an essential window, or a full window)
    contexts: Vec<Vec<Symbol>>,
    windows: HashMap<Vec<Symbol>, StateId>,
}

impl Sft {
    pub fn new(size: usize, forbidden: Vec<Word>, limits: &Limits) -> Result<Self> {
        let alphabet = Alphabet::new(size)?;
        let forbidden: Vec<Vec<Symbol>> = forbidden.into_iter().map(|w| w.0).collect();
        for f in &forbidden {
            if f.is_empty() {
                return Err(Error::InvalidSpec(
                    "forbidden words must be non-empty".into(),
                ));
            }
            alphabet.check_word(f)?;
        }
        let longest = forbidden.iter().map(Vec::len).max().unwrap_or(1);
        let memory = longest.saturating_sub(1).max(1);
        let forbidden_set: HashSet<&[Symbol]> = forbidden.iter().map(Vec::as_slice).collect();
        // checks only factors ending at the last position
        let suffix_ok = |w: &[Symbol]| (0..w.len()).all(|i| !forbidden_set.contains(&w[i..]));

        // all allowed windows of length `memory`, built symbol by symbol
        let mut windows: Vec<Vec<Symbol>> = vec![vec![]];
        for _ in 0..memory {
            let mut next = Vec::new();
            for w in &windows {
                for a in alphabet.symbols() {
                    let mut v = w.clone();
                    v.push(a);
                    if suffix_ok(&v) {
                        next.push(v);
                    }
                }
            }
            limits.check_states("sft windows", next.len())?;
            windows = next;
        }
        let index: HashMap<Vec<Symbol>, usize> = windows
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();

        let mut succ: Vec<Vec<usize>> = vec![vec![]; windows.len()];
        let mut pred: Vec<Vec<usize>> = vec![vec![]; windows.len()];
        for (i, w) in windows.iter().enumerate() {
            for a in alphabet.symbols() {
                let mut ext = w.clone();
                ext.push(a);
                if !suffix_ok(&ext) {
                    continue;
                }
                if let Some(&j) = index.get(&ext[1..]) {
                    succ[i].push(j);
                    pred[j].push(i);
                }
            }
        }

        // strip windows without a successor or predecessor until stable
        let mut alive = vec![true; windows.len()];
        let mut out_deg: Vec<usize> = succ.iter().map(Vec::len).collect();
        let mut in_deg: Vec<usize> = pred.iter().map(Vec::len).collect();
        let mut queue: Vec<usize> = (0..windows.len())
            .filter(|&i| out_deg[i] == 0 || in_deg[i] == 0)
            .collect();
        while let Some(i) = queue.pop() {
            if !alive[i] {
                continue;
            }
            alive[i] = false;
            for &j in &succ[i] {
                if alive[j] {
                    in_deg[j] -= 1;
                    if in_deg[j] == 0 {
                        queue.push(j);
                    }
                }
            }
            for &j in &pred[i] {
                if alive[j] {
                    out_deg[j] -= 1;
                    if out_deg[j] == 0 {
                        queue.push(j);
                    }
                }
            }
        }

        // contexts: every prefix of an essential window gets an id; the empty word is 0
        let mut contexts: Vec<Vec<Symbol>> = Vec::new();
        let mut ids: HashMap<Vec<Symbol>, StateId> = HashMap::new();
        let mut intern = |w: &[Symbol], contexts: &mut Vec<Vec<Symbol>>| -> StateId {
            *ids.entry(w.to_vec()).or_insert_with(|| {
                contexts.push(w.to_vec());
                (contexts.len() - 1) as StateId
            })
        };
        intern(&[], &mut contexts);
        for (i, w) in windows.iter().enumerate() {
            if alive[i] {
                for k in 1..=memory {
                    intern(&w[..k], &mut contexts);
                }
            }
        }
        limits.check_states("sft automaton", contexts.len())?;
        let lookup: HashMap<Vec<Symbol>, StateId> = contexts
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i as StateId))
            .collect();

        let mut transitions = vec![vec![None; size]; contexts.len()];
        for (id, ctx) in contexts.iter().enumerate() {
            for a in alphabet.symbols() {
                let mut ext = ctx.clone();
                ext.push(a);
                let target = if ctx.len() < memory {
                    lookup.get(&ext).copied()
                } else if suffix_ok(&ext) {
                    lookup.get(&ext[1..]).copied()
                } else {
                    None
                };
                transitions[id][a as usize] = target;
            }
        }
        let windows = lookup
            .into_iter()
            .filter(|(w, _)| w.len() == memory)
            .collect();

        Ok(Sft {
            alphabet,
            forbidden,
            memory,
            transitions,
            contexts,
            windows,
        })
    }

    pub fn forbidden(&self) -> &[Vec<Symbol>] {
        &self.forbidden
    }

    /// Number of essential windows of length `L`.
    pub fn essential_windows(&self) -> usize {
        self.windows.len()
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn context(&self, state: StateId) -> &[Symbol] {
        &self.contexts[state as usize]
    }
}

impl BaseLanguage for Sft {
    fn kind(&self) -> &'static str {
        "sft"
    }

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn start(&self) -> StateId {
        0
    }

    fn step(&self, state: StateId, symbol: Symbol) -> Option<StateId> {
        self.transitions
            .get(state as usize)?
            .get(symbol as usize)
            .copied()
            .flatten()
    }

    fn state_count(&self) -> usize {
        self.contexts.len()
    }

    fn contains_periodic(&self, cycle: &[Symbol]) -> Result<bool> {
        self.alphabet.check_word(cycle)?;
        if cycle.is_empty() {
            return Ok(true);
        }
        // every cyclic window of length memory+1 shows up within |cycle| + memory symbols
        let total = cycle.len() + self.memory + 1;
        let mut state = self.start();
        for i in 0..total {
            match self.step(state, cycle[i % cycle.len()]) {
                Some(t) => state = t,
                None => return Ok(false),
            }
        }
        Ok(true)
    }

    fn describe(&self) -> toml::Table {
        let mut t = toml::Table::new();
        t.insert("kind".into(), "sft".into());
        t.insert("size".into(), (self.alphabet.size() as i64).into());
        t.insert("forbidden".into(), words_value(&self.forbidden));
        t
    }
}
