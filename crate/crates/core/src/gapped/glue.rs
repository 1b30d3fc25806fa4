//! Constructive gluing of orbit segments.
//!
//! Segment `u_i` placed at `a_i` is shadowed by writing `u_i 0^m` into the
//! witness at `[a_i, b_i + m]` and zeros everywhere else. Every shifted pair
//! then agrees on `m + 1` coordinates, which certifies `d ≤ 2^{-m}` against
//! the point `u_i 0^∞`.

use serde::Serialize;

use crate::gapped::{GappedSubshiftSpec, Precision, GAP};
use crate::rational::{self, Rational};
use crate::symbolic::metric::word_distance_interval;
use crate::symbolic::{CyclicWord, Symbol, Word};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub word: Word,
    pub start: usize,
}

impl Segment {
    /// `b_i`, the last coordinate covered by the segment.
    pub fn end(&self) -> usize {
        self.start + self.word.len() - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Closure {
    OpenEnd,
    Periodic { period: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlueRequest {
    pub segments: Vec<Segment>,
    pub precision: Precision,
    pub closure: Closure,
}

impl GlueRequest {
    /// Places the words back to back with the minimal gaps:
    /// `a_1 = 0`, `a_{i+1} = b_i + M(|u_i|, ε)`.
    pub fn with_default_layout(
        spec: &GappedSubshiftSpec,
        words: Vec<Word>,
        precision: Precision,
        closure: Closure,
    ) -> Result<Self> {
        let gap = spec.gap_function();
        let mut segments = Vec::with_capacity(words.len());
        let mut start = 0usize;
        for word in words {
            if word.is_empty() {
                return Err(Error::Infeasible("empty segment".into()));
            }
            let seg = Segment { word, start };
            start = seg.end() + gap.eval(seg.word.len() as u64, precision) as usize;
            segments.push(seg);
        }
        Ok(GlueRequest {
            segments,
            precision,
            closure,
        })
    }

    /// Smallest admissible period for a periodic closure: `b_k - a_1 + M(|u_k|, ε)`.
    pub fn min_period(&self, spec: &GappedSubshiftSpec) -> Option<usize> {
        let first = self.segments.first()?;
        let last = self.segments.last()?;
        let m = spec
            .gap_function()
            .eval(last.word.len() as u64, self.precision) as usize;
        Some(last.end() - first.start + m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GlueOutput {
    Prefix(Word),
    Cycle(CyclicWord),
}

impl GlueOutput {
    pub fn at(&self, i: usize) -> Symbol {
        match self {
            GlueOutput::Prefix(w) => w.symbols().get(i).copied().unwrap_or(GAP),
            GlueOutput::Cycle(c) => c.at(i),
        }
    }

    pub fn symbols(&self) -> &[Symbol] {
        match self {
            GlueOutput::Prefix(w) => w.symbols(),
            GlueOutput::Cycle(c) => c.symbols(),
        }
    }
}

/// One certified inequality `d(f^{j-a_i} x_i, f^j z) ≤ bound`.
#[derive(Debug, Clone, Serialize)]
pub struct ShadowRecord {
    pub segment: usize,
    pub position: usize,
    pub shift: usize,
    #[serde(serialize_with = "ser_rational")]
    pub bound: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub lo: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub hi: Rational,
    pub holds: bool,
}

fn ser_rational<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational::format(q))
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub admissible: bool,
    pub records: Vec<ShadowRecord>,
}

impl VerificationReport {
    pub fn all_hold(&self) -> bool {
        self.admissible && self.records.iter().all(|r| r.holds)
    }
}

fn validate(spec: &GappedSubshiftSpec, req: &GlueRequest) -> Result<()> {
    if req.segments.is_empty() {
        return Err(Error::Infeasible("no segments".into()));
    }
    let gap = spec.gap_function();
    for (i, seg) in req.segments.iter().enumerate() {
        if seg.word.is_empty() {
            return Err(Error::Infeasible(format!("segment {i} is empty")));
        }
        if !spec.contains_word(seg.word.symbols())? {
            return Err(Error::Infeasible(format!(
                "segment {i} ({}) is not in the language",
                seg.word
            )));
        }
    }
    for (i, pair) in req.segments.windows(2).enumerate() {
        let (cur, next) = (&pair[0], &pair[1]);
        if next.start <= cur.end() {
            return Err(Error::Infeasible(format!(
                "segment {} starts at {} before segment {i} ends at {}",
                i + 1,
                next.start,
                cur.end()
            )));
        }
        let need = gap.eval(cur.word.len() as u64, req.precision) as usize;
        if next.start - cur.end() < need {
            return Err(Error::Infeasible(format!(
                "gap {} after segment {i} is below M({}, eps) = {need}",
                next.start - cur.end(),
                cur.word.len()
            )));
        }
    }
    if let Closure::Periodic { period } = req.closure {
        let min = req.min_period(spec).unwrap_or(0);
        if period < min {
            return Err(Error::Infeasible(format!(
                "periodic closure gap too small: period {period} < {min}"
            )));
        }
    }
    Ok(())
}

fn layout(req: &GlueRequest, len: usize) -> Vec<Symbol> {
    let mut z = vec![GAP; len];
    for seg in &req.segments {
        for (r, &s) in seg.word.symbols().iter().enumerate() {
            z[(seg.start + r) % len] = s;
        }
    }
    z
}

/// Builds the shadowing point and certifies every shadowing inequality.
pub fn glue(
    spec: &GappedSubshiftSpec,
    req: &GlueRequest,
) -> Result<(GlueOutput, VerificationReport)> {
    validate(spec, req)?;
    let m = req.precision.exponent().unwrap_or(0) as usize;
    let last_end = req.segments.last().map(Segment::end).unwrap_or(0);

    let output = match req.closure {
        Closure::OpenEnd => {
            let z = layout(req, last_end + 1 + m);
            let z = if req.precision == Precision::Coarse && !spec.contains_word(&z)? {
                // every point is within ε ≥ 2 of every other
                vec![GAP; z.len()]
            } else {
                z
            };
            GlueOutput::Prefix(Word::new(z))
        }
        Closure::Periodic { period } => {
            let z = layout(req, period);
            let z = if req.precision == Precision::Coarse && !spec.cyclic_admissible(&z)? {
                vec![GAP; period]
            } else {
                z
            };
            GlueOutput::Cycle(CyclicWord::new(z)?)
        }
    };

    let admissible = match &output {
        GlueOutput::Prefix(w) => spec.contains_word(w.symbols())?,
        GlueOutput::Cycle(c) => spec.cyclic_admissible(c.symbols())?,
    };

    let window = req.precision.agreement().max(1);
    let bound = req.precision.epsilon();
    let mut records = Vec::new();
    for (i, seg) in req.segments.iter().enumerate() {
        let u = seg.word.symbols();
        for j in seg.start..=seg.end() {
            let shift = j - seg.start;
            // f^{shift} of the point u·0^∞
            let x: Vec<Symbol> = (shift..shift + window)
                .map(|k| u.get(k).copied().unwrap_or(GAP))
                .collect();
            let zw: Vec<Symbol> = (j..j + window).map(|k| output.at(k)).collect();
            let d = word_distance_interval(&x, &zw)?;
            let holds = d.hi <= bound;
            records.push(ShadowRecord {
                segment: i,
                position: j,
                shift,
                bound: bound.clone(),
                lo: d.lo,
                hi: d.hi,
                holds,
            });
        }
    }

    Ok((
        output,
        VerificationReport {
            admissible,
            records,
        },
    ))
}
