//! Alphabets, words and their text format.

pub mod base;
pub mod metric;
pub mod observable;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type Symbol = u16;

/// A finite alphabet `{0, .., size-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alphabet {
    size: usize,
    labels: Option<Vec<String>>,
}

impl Alphabet {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 || size > Symbol::MAX as usize {
            return Err(Error::InvalidSpec(format!("alphabet size {size}")));
        }
        Ok(Alphabet { size, labels: None })
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        let mut a = Alphabet::new(labels.len())?;
        a.labels = Some(labels);
        Ok(a)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> {
        0..self.size as Symbol
    }

    pub fn check(&self, symbol: Symbol) -> Result<()> {
        if (symbol as usize) < self.size {
            Ok(())
        } else {
            Err(Error::SymbolOutOfRange {
                symbol: symbol as u32,
                size: self.size,
            })
        }
    }

    pub fn check_word(&self, w: &[Symbol]) -> Result<()> {
        w.iter().try_for_each(|&s| self.check(s))
    }
}

/// Text encodings for words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WordFormat {
    /// Space-separated decimal integers.
    #[default]
    Decimal,
    /// One character per symbol from `0-9a-z`; alphabets of at most 36 symbols.
    Compact,
}

const COMPACT_DIGITS: &[u8; 36] = b"0123456789abcdefghijklmnopqrstuvwxyz";

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn zeros(n: usize) -> Self {
        Word(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn parse(text: &str, format: WordFormat) -> Result<Self> {
        let text = text.trim();
        match format {
            WordFormat::Decimal => text
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<Symbol>()
                        .map_err(|_| Error::Parse(format!("bad symbol {tok:?}")))
                })
                .collect::<Result<Vec<_>>>()
                .map(Word),
            WordFormat::Compact => text
                .chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| {
                    c.to_digit(36)
                        .map(|d| d as Symbol)
                        .ok_or_else(|| Error::Parse(format!("bad compact symbol {c:?}")))
                })
                .collect::<Result<Vec<_>>>()
                .map(Word),
        }
    }

    /// Parses the compact form; panics on malformed input. Meant for literals.
    pub fn compact(text: &str) -> Self {
        Word::parse(text, WordFormat::Compact).expect("malformed compact word literal")
    }

    pub fn render(&self, format: WordFormat) -> String {
        render(&self.0, format)
    }

    /// Reads one word per non-empty line.
    pub fn parse_lines(text: &str, format: WordFormat) -> Result<Vec<Word>> {
        text.lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| Word::parse(l, format))
            .collect()
    }
}

pub(crate) fn render(symbols: &[Symbol], format: WordFormat) -> String {
    match format {
        WordFormat::Decimal => symbols
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(" "),
        WordFormat::Compact => symbols
            .iter()
            .map(|&s| {
                COMPACT_DIGITS
                    .get(s as usize)
                    .map(|&b| b as char)
                    .unwrap_or('?')
            })
            .collect(),
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(WordFormat::Decimal))
    }
}

impl From<Vec<Symbol>> for Word {
    fn from(v: Vec<Symbol>) -> Self {
        Word(v)
    }
}

impl AsRef<[Symbol]> for Word {
    fn as_ref(&self) -> &[Symbol] {
        &self.0
    }
}

/// One period of the periodic point `w^∞`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CyclicWord(Vec<Symbol>);

impl CyclicWord {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::InvalidSpec("cyclic word must be non-empty".into()));
        }
        Ok(CyclicWord(symbols))
    }

    pub fn period(&self) -> usize {
        self.0.len()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    /// Symbol at coordinate `i` of `w^∞`.
    pub fn at(&self, i: usize) -> Symbol {
        self.0[i % self.0.len()]
    }

    /// The first `n` coordinates of `w^∞`.
    pub fn unroll(&self, n: usize) -> Word {
        Word((0..n).map(|i| self.at(i)).collect())
    }

    /// Smallest `d` with `w = v^{n/d}` for some `v` of length `d`.
    pub fn primitive_period(&self) -> usize {
        let n = self.0.len();
        (1..=n)
            .find(|&d| n.is_multiple_of(d) && (d..n).all(|i| self.0[i] == self.0[i - d]))
            .unwrap_or(n)
    }

    /// The lexicographically least rotation.
    pub fn canonical(&self) -> CyclicWord {
        let n = self.0.len();
        let best = (0..n)
            .min_by(|&a, &b| {
                (0..n)
                    .map(|i| self.0[(a + i) % n])
                    .cmp((0..n).map(|i| self.0[(b + i) % n]))
            })
            .unwrap_or(0);
        CyclicWord((0..n).map(|i| self.0[(best + i) % n]).collect())
    }

    pub fn render(&self, format: WordFormat) -> String {
        render(&self.0, format)
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})^inf", self.render(WordFormat::Decimal))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_formats() {
        let w = Word::parse("0 12 3", WordFormat::Decimal).unwrap();
        assert_eq!(w.symbols(), &[0, 12, 3]);
        assert_eq!(w.render(WordFormat::Compact), "0c3");
        assert_eq!(Word::parse("0c3", WordFormat::Compact).unwrap(), w);
        assert_eq!(w.to_string(), "0 12 3");
        assert!(Word::parse("1 x", WordFormat::Decimal).is_err());
        let lines = Word::parse_lines("0 1\n\n1 1\n", WordFormat::Decimal).unwrap();
        assert_eq!(lines.len(), 2);
        assert!(Word::parse("", WordFormat::Decimal).unwrap().is_empty());
    }

    #[test]
    fn alphabet_checks() {
        let a = Alphabet::new(3).unwrap();
        assert!(a.check_word(&[0, 1, 2]).is_ok());
        assert!(matches!(
            a.check(3),
            Err(Error::SymbolOutOfRange { symbol: 3, size: 3 })
        ));
        assert!(Alphabet::new(0).is_err());
    }

    #[test]
    fn cyclic_helpers() {
        let c = CyclicWord::new(vec![1, 0, 1, 0]).unwrap();
        assert_eq!(c.primitive_period(), 2);
        assert_eq!(c.canonical().symbols(), &[0, 1, 0, 1]);
        assert_eq!(c.unroll(5).symbols(), &[1, 0, 1, 0, 1]);
        assert!(CyclicWord::new(vec![]).is_err());
    }
}
