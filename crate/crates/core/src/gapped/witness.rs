//! Exhaustive search for gluing witnesses below the gap function.

use crate::gapped::{GState, GappedSubshiftSpec, Precision};
use crate::symbolic::{Symbol, Word};
use crate::{Error, Limits, Result};

/// Outcome of one search together with the amount of work spent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessSearch {
    pub witness: Option<Word>,
    pub length: usize,
    pub visited: u64,
}

/// Looks for `z ∈ ℒ(X)` shadowing the point `u·ū^∞` on `[0, |u|-1]` and the
/// point `v·v̄^∞` on `[a, a + |v| - 1]` with `a = |u| - 1 + gap`, where `ū`
/// and `v̄` are the final symbols of `u` and `v`.
///
/// Shadowing within `2^{-m}` means sharing `m + 1` coordinates from every
/// shadowed position, so `z` is pinned on `[0, |u| - 1 + m]` and
/// `[a, a + |v| - 1 + m]`; the rest is free. The search is a depth-first
/// walk over all words of length `a + |v| + m`, pruned by prefix membership.
/// Returns the lexicographically least witness.
pub fn min_gap_witness_search(
    spec: &GappedSubshiftSpec,
    u: &Word,
    v: &Word,
    precision: Precision,
    gap: usize,
    limits: &Limits,
) -> Result<WitnessSearch> {
    if u.is_empty() || v.is_empty() {
        return Err(Error::Precondition("segments must be non-empty".into()));
    }
    if gap == 0 {
        return Err(Error::Precondition("gap must be at least 1".into()));
    }
    let extra = precision.agreement().saturating_sub(1);
    let extend = |w: &Word| -> Vec<Symbol> {
        let last = *w.symbols().last().expect("non-empty");
        let mut x = w.0.clone();
        x.extend(std::iter::repeat_n(last, extra));
        x
    };
    let (xu, xv) = (extend(u), extend(v));
    for (name, x) in [("u", &xu), ("v", &xv)] {
        if !spec.contains_word(x)? {
            return Err(Error::Precondition(format!(
                "extended {name} = {} is not in the language",
                Word::new(x.clone())
            )));
        }
    }

    let a = u.len() - 1 + gap;
    let length = a + v.len() + extra;
    let mut pinned: Vec<Option<Symbol>> = vec![None; length];
    if precision != Precision::Coarse {
        for (k, &s) in xu.iter().enumerate() {
            pinned[k] = Some(s);
        }
        for (k, &s) in xv.iter().enumerate() {
            match pinned[a + k] {
                Some(p) if p != s => {
                    return Ok(WitnessSearch {
                        witness: None,
                        length,
                        visited: 0,
                    })
                }
                _ => pinned[a + k] = Some(s),
            }
        }
    }

    let mut search = Dfs {
        spec,
        pinned: &pinned,
        limits,
        visited: 0,
        word: Vec::with_capacity(length),
    };
    let found = search.go(spec.start())?;
    Ok(WitnessSearch {
        witness: found.then(|| Word::new(search.word.clone())),
        length,
        visited: search.visited,
    })
}

struct Dfs<'a> {
    spec: &'a GappedSubshiftSpec,
    pinned: &'a [Option<Symbol>],
    limits: &'a Limits,
    visited: u64,
    word: Vec<Symbol>,
}

impl Dfs<'_> {
    fn go(&mut self, state: GState) -> Result<bool> {
        let pos = self.word.len();
        if pos == self.pinned.len() {
            return Ok(true);
        }
        self.visited += 1;
        self.limits
            .check_enumeration("witness search", self.visited)?;
        let choices: Vec<Symbol> = match self.pinned[pos] {
            Some(s) => vec![s],
            None => self.spec.ambient().symbols().collect(),
        };
        for s in choices {
            if let Some(next) = self.spec.step(state, s) {
                self.word.push(s);
                if self.go(next)? {
                    return Ok(true);
                }
                self.word.pop();
            }
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gapped::Tau;

    fn binary(tau: u64) -> GappedSubshiftSpec {
        GappedSubshiftSpec::full(1, Tau::integer(tau)).unwrap()
    }

    #[test]
    fn below_and_at_the_gap_function() {
        let spec = binary(1);
        let (u, v) = (Word::compact("11"), Word::compact("01"));
        let limits = Limits::default();
        let none = min_gap_witness_search(&spec, &u, &v, Precision::Dyadic(1), 2, &limits).unwrap();
        assert!(none.witness.is_none());
        let m = spec.gap_function().eval(2, Precision::Dyadic(1)) as usize;
        assert_eq!(m, 5);
        let some = min_gap_witness_search(&spec, &u, &v, Precision::Dyadic(1), m, &limits).unwrap();
        let z = some.witness.unwrap();
        assert!(spec.contains_word(z.symbols()).unwrap());
        assert_eq!(&z.symbols()[..3], &[1, 1, 1]);
    }

    #[test]
    fn coarse_precision_needs_gap_one() {
        let spec = binary(3);
        let one = Word::compact("1");
        let r = min_gap_witness_search(&spec, &one, &one, Precision::Coarse, 1, &Limits::default())
            .unwrap();
        assert!(r.witness.is_some());
    }

    #[test]
    fn exhaustive_agreement_with_plain_enumeration() {
        // compare against enumerating all binary words of the search length
        let spec = binary(1);
        let (u, v) = (Word::compact("11"), Word::compact("01"));
        for gap in 1..=6 {
            let r = min_gap_witness_search(
                &spec,
                &u,
                &v,
                Precision::Dyadic(1),
                gap,
                &Limits::default(),
            )
            .unwrap();
            let a = 1 + gap;
            let len = r.length;
            let brute = (0u32..1 << len).any(|bits| {
                let z: Vec<Symbol> = (0..len).map(|i| ((bits >> i) & 1) as Symbol).collect();
                spec.contains_word(&z).unwrap() && z[..3] == [1, 1, 1] && z[a..a + 3] == [0, 1, 1]
            });
            assert_eq!(r.witness.is_some(), brute, "gap {gap}");
        }
    }

    #[test]
    fn caps_are_enforced() {
        let spec = binary(1);
        let tiny = Limits {
            max_enumeration: 3,
            ..Limits::default()
        };
        let err = min_gap_witness_search(
            &spec,
            &Word::compact("11"),
            &Word::compact("01"),
            Precision::Dyadic(1),
            4,
            &tiny,
        )
        .unwrap_err();
        assert!(err.is_resource_limit());
    }
}
