//! Alphabets and finite words.
//!
//! Symbols are stored as indices into an [`Alphabet`]; the alphabet's
//! declared symbol order fixes the canonical (lexicographic) order on
//! words of equal length, which every enumeration and report relies on
//! for determinism.

use std::fmt;

use crate::error::{Error, Result};

/// Index of a symbol within its alphabet.
pub type Symbol = u8;

/// An ordered, finite, nonempty set of symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    /// Builds an alphabet from symbols in the given order. The order is
    /// significant: it determines the canonical order on words.
    pub fn new(symbols: Vec<char>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet is empty".into()));
        }
        if symbols.len() > usize::from(Symbol::MAX) + 1 {
            return Err(Error::InvalidAlphabet(format!(
                "alphabet has {} symbols, at most {} supported",
                symbols.len(),
                usize::from(Symbol::MAX) + 1
            )));
        }
        let mut seen = symbols.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != symbols.len() {
            return Err(Error::InvalidAlphabet("duplicate symbol".into()));
        }
        Ok(Alphabet { symbols })
    }

    /// Builds an alphabet from the distinct characters of `text`, ordered
    /// by their natural character order.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut chars: Vec<char> = text.chars().collect();
        chars.sort_unstable();
        chars.dedup();
        Alphabet::new(chars)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn chars(&self) -> &[char] {
        &self.symbols
    }

    pub fn index_of(&self, c: char) -> Option<Symbol> {
        self.symbols.iter().position(|&s| s == c).map(|i| i as Symbol)
    }

    pub fn char_at(&self, s: Symbol) -> char {
        self.symbols[usize::from(s)]
    }

    /// All symbol indices in canonical order.
    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.symbols.len()).map(|i| i as Symbol)
    }

    /// Parses a word, one character per symbol.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let mut symbols = Vec::with_capacity(text.len());
        for c in text.chars() {
            match self.index_of(c) {
                Some(s) => symbols.push(s),
                None => return Err(Error::UnknownSymbol(c)),
            }
        }
        Ok(Word(symbols))
    }

    pub fn format_word(&self, w: &Word) -> String {
        w.symbols().iter().map(|&s| self.char_at(s)).collect()
    }
}

/// A finite word over an alphabet, stored as symbol indices.
///
/// The derived `Ord` is lexicographic on the indices, which matches the
/// alphabet's canonical order for words of equal length.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_symbols(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn single(s: Symbol) -> Self {
        Word(vec![s])
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

    pub fn at(&self, i: usize) -> Symbol {
        self.0[i]
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// The length-`n` prefix. Panics if `n > len`.
    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n].to_vec())
    }

    /// The length-`n` suffix. Panics if `n > len`.
    pub fn suffix(&self, n: usize) -> Word {
        Word(self.0[self.len() - n..].to_vec())
    }

    /// The subword at positions `start..start+len`.
    pub fn subword(&self, start: usize, len: usize) -> Word {
        Word(self.0[start..start + len].to_vec())
    }

    pub fn slice(&self, start: usize, len: usize) -> &[Symbol] {
        &self.0[start..start + len]
    }

    /// A copy with `s` appended on the right.
    pub fn pushed(&self, s: Symbol) -> Word {
        let mut v = Vec::with_capacity(self.len() + 1);
        v.extend_from_slice(&self.0);
        v.push(s);
        Word(v)
    }

    /// A copy with `s` prepended on the left.
    pub fn prepended(&self, s: Symbol) -> Word {
        let mut v = Vec::with_capacity(self.len() + 1);
        v.push(s);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    pub fn starts_with(&self, other: &Word) -> bool {
        self.0.starts_with(&other.0)
    }

    pub fn ends_with(&self, other: &Word) -> bool {
        self.0.ends_with(&other.0)
    }

    /// Start positions of all (possibly overlapping) occurrences of
    /// `pattern` in `self`.
    pub fn occurrences(&self, pattern: &Word) -> Vec<usize> {
        if pattern.is_empty() || pattern.len() > self.len() {
            return Vec::new();
        }
        (0..=self.len() - pattern.len())
            .filter(|&i| &self.0[i..i + pattern.len()] == pattern.symbols())
            .collect()
    }

    pub fn contains_word(&self, pattern: &Word) -> bool {
        if pattern.is_empty() {
            return true;
        }
        if pattern.len() > self.len() {
            return false;
        }
        (0..=self.len() - pattern.len()).any(|i| &self.0[i..i + pattern.len()] == pattern.symbols())
    }

    pub fn reversed(&self) -> Word {
        let mut v = self.0.clone();
        v.reverse();
        Word(v)
    }

    /// Whether the word has period `p`, i.e. `w[i] == w[i+p]` everywhere.
    pub fn has_period(&self, p: usize) -> bool {
        p >= 1 && (p..self.len()).all(|i| self.0[i] == self.0[i - p])
    }
}

impl std::borrow::Borrow<[Symbol]> for Word {
    fn borrow(&self) -> &[Symbol] {
        &self.0
    }
}

impl fmt::Display for Word {
    /// Raw index rendering, used in diagnostics when no alphabet is at
    /// hand. Reports go through [`Alphabet::format_word`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.0 {
            if s < 10 {
                write!(f, "{s}")?;
            } else {
                write!(f, "[{s}]")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binary() -> Alphabet {
        Alphabet::new(vec!['0', '1']).unwrap()
    }

    #[test]
    fn alphabet_rejects_duplicates_and_empty() {
        assert!(Alphabet::new(vec![]).is_err());
        assert!(Alphabet::new(vec!['a', 'a']).is_err());
    }

    #[test]
    fn parse_and_format_round_trip() {
        let a = binary();
        let w = a.parse_word("0110").unwrap();
        assert_eq!(w.len(), 4);
        assert_eq!(a.format_word(&w), "0110");
        assert!(a.parse_word("012").is_err());
    }

    #[test]
    fn concatenation_is_associative_with_empty_identity() {
        let a = binary();
        let u = a.parse_word("01").unwrap();
        let v = a.parse_word("10").unwrap();
        let w = a.parse_word("0").unwrap();
        assert_eq!(u.concat(&v).concat(&w), u.concat(&v.concat(&w)));
        assert_eq!(u.concat(&Word::empty()), u);
        assert_eq!(Word::empty().concat(&u), u);
    }

    #[test]
    fn occurrences_overlap() {
        let a = binary();
        let w = a.parse_word("00100").unwrap();
        let p = a.parse_word("00").unwrap();
        assert_eq!(w.occurrences(&p), vec![0, 3]);
        let w2 = a.parse_word("0000").unwrap();
        assert_eq!(w2.occurrences(&p), vec![0, 1, 2]);
    }

    #[test]
    fn canonical_order_is_lexicographic() {
        let a = binary();
        let mut words = vec![
            a.parse_word("10").unwrap(),
            a.parse_word("00").unwrap(),
            a.parse_word("01").unwrap(),
        ];
        words.sort();
        let rendered: Vec<String> = words.iter().map(|w| a.format_word(w)).collect();
        assert_eq!(rendered, vec!["00", "01", "10"]);
    }

    #[test]
    fn periods() {
        let a = binary();
        let w = a.parse_word("010101").unwrap();
        assert!(w.has_period(2));
        assert!(!w.has_period(3));
        assert!(w.has_period(4));
    }
}
