//! Brute-force reference implementations.
//!
//! Nothing here touches the automata used by the fast paths: base languages
//! are rebuilt from their configuration tables and checked by direct
//! extension search or by scanning long substitution iterates, and gapped
//! membership is checked by testing factors against the forbidden patterns.

use std::collections::{HashMap, HashSet};

use num_bigint::BigUint;

use crate::gapped::{GappedSubshiftSpec, Tau, GAP};
use crate::symbolic::base::{usize_param, words_param};
use crate::symbolic::Symbol;
use crate::{Error, Result};

const SUBSTITUTION_SCAN_LEN: usize = 1 << 16;

#[derive(Debug, Clone)]
enum Naive {
    Full {
        size: usize,
    },
    Sft {
        size: usize,
        forbidden: HashSet<Vec<Symbol>>,
        longest: usize,
    },
    Substitution {
        iterates: Vec<Vec<Symbol>>,
    },
    Copies {
        inner: Box<Naive>,
        inner_size: usize,
        copies: usize,
    },
}

impl Naive {
    fn from_table(t: &toml::Table) -> Result<Self> {
        let kind = t.get("kind").and_then(|v| v.as_str()).unwrap_or_default();
        Ok(match kind {
            "full" => Naive::Full {
                size: usize_param(t, "size")?,
            },
            "sft" => {
                let forbidden: HashSet<Vec<Symbol>> = words_param(t, "forbidden")?
                    .into_iter()
                    .map(|w| w.0)
                    .collect();
                let longest = forbidden.iter().map(Vec::len).max().unwrap_or(1);
                Naive::Sft {
                    size: usize_param(t, "size")?,
                    forbidden,
                    longest,
                }
            }
            "substitution" => {
                let rules: Vec<Vec<Symbol>> =
                    words_param(t, "rules")?.into_iter().map(|w| w.0).collect();
                let mut cur = vec![usize_param(t, "seed")? as Symbol];
                let mut iterates = vec![cur.clone()];
                while cur.len() < SUBSTITUTION_SCAN_LEN {
                    let next: Vec<Symbol> = cur
                        .iter()
                        .flat_map(|&a| rules[a as usize].iter().copied())
                        .collect();
                    if next.len() == cur.len() && next == cur {
                        break;
                    }
                    cur = next;
                    iterates.push(cur.clone());
                    if iterates.len() > 64 {
                        break;
                    }
                }
                Naive::Substitution { iterates }
            }
            "copies" => {
                let inner_t = t
                    .get("inner")
                    .and_then(|v| v.as_table())
                    .ok_or_else(|| Error::Parse("copies without inner".into()))?;
                let inner = Naive::from_table(inner_t)?;
                Naive::Copies {
                    inner_size: inner.size(inner_t)?,
                    inner: Box::new(inner),
                    copies: usize_param(t, "copies")?,
                }
            }
            other => return Err(Error::Unsupported(format!("no oracle for base {other:?}"))),
        })
    }

    fn size(&self, t: &toml::Table) -> Result<usize> {
        match self {
            Naive::Copies {
                inner_size, copies, ..
            } => Ok(inner_size * copies),
            _ => usize_param(t, "size"),
        }
    }

    fn longest_forbidden(&self) -> usize {
        match self {
            Naive::Sft { longest, .. } => *longest,
            Naive::Copies { inner, .. } => inner.longest_forbidden(),
            _ => 0,
        }
    }

    fn contains(&self, w: &[Symbol]) -> bool {
        match self {
            Naive::Full { size } => w.iter().all(|&s| (s as usize) < *size),
            Naive::Sft {
                size,
                forbidden,
                longest,
            } => sft_contains(*size, forbidden, *longest, w),
            Naive::Substitution { iterates } => {
                w.is_empty()
                    || iterates
                        .iter()
                        .any(|it| it.windows(w.len()).any(|f| f == w))
            }
            Naive::Copies {
                inner,
                inner_size,
                copies,
            } => {
                let Some(&first) = w.first() else {
                    return true;
                };
                let copy = first as usize / inner_size;
                copy < *copies
                    && w.iter().all(|&s| s as usize / inner_size == copy)
                    && inner.contains(
                        &w.iter()
                            .map(|&s| (s as usize % inner_size) as Symbol)
                            .collect::<Vec<_>>(),
                    )
            }
        }
    }
}

fn avoids(forbidden: &HashSet<Vec<Symbol>>, w: &[Symbol]) -> bool {
    (0..w.len()).all(|i| (i + 1..=w.len()).all(|j| !forbidden.contains(&w[i..j])))
}

/// Bi-extendability by direct search: `w` extends by `D` symbols on each side
/// with `D` larger than the number of possible memory windows, which forces a
/// repeated window and hence an infinite extension.
fn sft_contains(
    size: usize,
    forbidden: &HashSet<Vec<Symbol>>,
    longest: usize,
    w: &[Symbol],
) -> bool {
    if w.iter().any(|&s| s as usize >= size) || !avoids(forbidden, w) {
        return false;
    }
    let mem = longest.saturating_sub(1);
    let depth = size.pow(mem as u32) + longest + 1;
    // pad short words to a full memory window in every possible way
    let mut cores: Vec<Vec<Symbol>> = vec![w.to_vec()];
    while cores.first().is_some_and(|c| c.len() < mem) {
        let mut next = Vec::new();
        for c in &cores {
            for a in 0..size as Symbol {
                let mut left = vec![a];
                left.extend_from_slice(c);
                let mut right = c.clone();
                right.push(a);
                for cand in [left, right] {
                    if avoids(forbidden, &cand) {
                        next.push(cand);
                    }
                }
            }
        }
        cores = next;
    }
    let mut memo = HashMap::new();
    cores.iter().any(|c| {
        extends(size, forbidden, mem, c, depth, false, &mut memo)
            && extends(size, forbidden, mem, c, depth, true, &mut memo)
    })
}

fn extends(
    size: usize,
    forbidden: &HashSet<Vec<Symbol>>,
    mem: usize,
    w: &[Symbol],
    depth: usize,
    leftward: bool,
    memo: &mut HashMap<(Vec<Symbol>, usize, bool), bool>,
) -> bool {
    if depth == 0 {
        return true;
    }
    let edge: Vec<Symbol> = if leftward {
        w[..mem.min(w.len())].to_vec()
    } else {
        w[w.len() - mem.min(w.len())..].to_vec()
    };
    let key = (edge.clone(), depth, leftward);
    if let Some(&r) = memo.get(&key) {
        return r;
    }
    let r = (0..size as Symbol).any(|a| {
        let cand: Vec<Symbol> = if leftward {
            std::iter::once(a).chain(edge.iter().copied()).collect()
        } else {
            edge.iter().copied().chain(std::iter::once(a)).collect()
        };
        avoids(forbidden, &cand) && extends(size, forbidden, mem, &cand, depth - 1, leftward, memo)
    });
    memo.insert(key, r);
    r
}

/// Pattern-scanning membership oracle for the gapped subshift.
#[derive(Debug, Clone)]
pub struct NaiveOracle {
    base: Naive,
    tau: Tau,
    ambient: usize,
    memo: HashMap<Vec<Symbol>, bool>,
}

impl NaiveOracle {
    pub fn new(spec: &GappedSubshiftSpec) -> Result<Self> {
        Ok(NaiveOracle {
            base: Naive::from_table(&spec.base().describe())?,
            tau: spec.tau(),
            ambient: spec.ambient_size(),
            memo: HashMap::new(),
        })
    }

    /// Base membership of a word of nonzero ambient symbols.
    fn base_ok(&mut self, lifted: &[Symbol]) -> bool {
        if let Some(&r) = self.memo.get(lifted) {
            return r;
        }
        let w: Vec<Symbol> = lifted.iter().map(|&s| s - 1).collect();
        let r = self.base.contains(&w);
        self.memo.insert(lifted.to_vec(), r);
        r
    }

    /// Whether the factor is one of the forbidden words of `X`.
    fn forbidden_factor(&mut self, f: &[Symbol]) -> bool {
        if f.is_empty() {
            return false;
        }
        if f.iter().all(|&s| s != GAP) {
            return !self.base_ok(f);
        }
        // x_1..x_s 0^t x_{s+1}
        let s = f.iter().take_while(|&&x| x != GAP).count();
        let t = f[s..].iter().take_while(|&&x| x == GAP).count();
        s >= 1
            && t >= 1
            && s + t + 1 == f.len()
            && f[f.len() - 1] != GAP
            && self.tau.forbids(s as u64, t as u64)
    }

    /// Tests every factor of `w` against every forbidden word.
    pub fn contains(&mut self, w: &[Symbol]) -> bool {
        if w.iter().any(|&s| s as usize >= self.ambient) {
            return false;
        }
        for i in 0..w.len() {
            for j in i + 1..=w.len() {
                if self.forbidden_factor(&w[i..j]) {
                    return false;
                }
            }
        }
        true
    }

    /// Only the factors ending at the last position; used when the prefix is known good.
    fn suffixes_ok(&mut self, w: &[Symbol]) -> bool {
        (0..w.len()).all(|i| !self.forbidden_factor(&w[i..]))
    }

    /// Visits every word of length `1..=max_len` in lexicographic DFS order
    /// with its verdict. A word is in the language iff its prefix is and none
    /// of its suffixes is forbidden.
    pub fn enumerate(&mut self, max_len: usize, visit: &mut impl FnMut(&[Symbol], bool)) {
        let mut word = Vec::with_capacity(max_len);
        self.enumerate_from(&mut word, true, max_len, visit);
    }

    /// Like [`NaiveOracle::enumerate`] restricted to words starting with `prefix`.
    pub fn enumerate_with_prefix(
        &mut self,
        prefix: &[Symbol],
        max_len: usize,
        visit: &mut impl FnMut(&[Symbol], bool),
    ) {
        let mut word = prefix.to_vec();
        let ok = self.contains(prefix);
        if !prefix.is_empty() {
            visit(&word, ok);
        }
        self.enumerate_from(&mut word, ok, max_len, visit);
    }

    fn enumerate_from(
        &mut self,
        word: &mut Vec<Symbol>,
        ok: bool,
        max_len: usize,
        visit: &mut impl FnMut(&[Symbol], bool),
    ) {
        if word.len() == max_len {
            return;
        }
        for a in 0..self.ambient as Symbol {
            word.push(a);
            let good = ok && self.suffixes_ok(word);
            visit(word, good);
            self.enumerate_from(word, good, max_len, visit);
            word.pop();
        }
    }

    /// `|ℒ_n(X)|` by enumerating all `|Ã|^n` words.
    pub fn language_count(&mut self, n: usize) -> BigUint {
        self.language_counts(n).pop().expect("non-empty")
    }

    /// `|ℒ_k(X)|` for `k` in `0..=n_max` from one enumeration.
    pub fn language_counts(&mut self, n_max: usize) -> Vec<BigUint> {
        let mut counts = vec![0u64; n_max + 1];
        counts[0] = 1;
        self.enumerate(n_max, &mut |w, ok| {
            if ok {
                counts[w.len()] += 1;
            }
        });
        counts.into_iter().map(BigUint::from).collect()
    }

    /// Whether `c^∞ ∈ X`, by scanning a long enough unrolling of the cycle.
    pub fn periodic_contains(&mut self, c: &[Symbol]) -> bool {
        let n = c.len();
        let len = 3 * n + 2 * self.base.longest_forbidden() + 2;
        let unrolled: Vec<Symbol> = (0..len).map(|i| c[i % n]).collect();
        self.contains(&unrolled)
    }

    /// `|Per_n|` by testing all `|Ã|^n` cyclic words.
    pub fn periodic_count(&mut self, n: usize) -> u64 {
        let k = self.ambient as u64;
        let total = k.pow(n as u32);
        let mut count = 0;
        let mut c = vec![0 as Symbol; n];
        for code in 0..total {
            let mut x = code;
            for slot in c.iter_mut() {
                *slot = (x % k) as Symbol;
                x /= k;
            }
            if self.periodic_contains(&c) {
                count += 1;
            }
        }
        count
    }
}
