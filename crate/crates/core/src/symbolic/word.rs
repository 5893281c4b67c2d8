use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::LorenzError;

/// Side of the discontinuity. Ordered `L < R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    L,
    R,
}

impl Symbol {
    pub fn as_char(self) -> char {
        match self {
            Symbol::L => 'L',
            Symbol::R => 'R',
        }
    }

    pub fn flip(self) -> Symbol {
        match self {
            Symbol::L => Symbol::R,
            Symbol::R => Symbol::L,
        }
    }
}

impl TryFrom<char> for Symbol {
    type Error = LorenzError;

    fn try_from(c: char) -> Result<Self, Self::Error> {
        match c {
            'L' => Ok(Symbol::L),
            'R' => Ok(Symbol::R),
            other => Err(LorenzError::Parse(format!(
                "invalid symbol '{other}' (expected L or R)"
            ))),
        }
    }
}

/// Finite itinerary over `{L, R}`.
///
/// Ordering is lexicographic with `L < R`; a proper prefix sorts before any
/// of its extensions.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
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

    pub fn first(&self) -> Option<Symbol> {
        self.0.first().copied()
    }

    pub fn push(&mut self, s: Symbol) {
        self.0.push(s);
    }

    pub fn extended(&self, s: Symbol) -> Word {
        let mut w = self.clone();
        w.push(s);
        w
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n.min(self.0.len())].to_vec())
    }

    pub fn starts_with(&self, other: &Word) -> bool {
        self.0.starts_with(&other.0)
    }

    /// Index of the first differing symbol, or `None` when one is a prefix of the other.
    pub fn first_difference(&self, other: &Word) -> Option<usize> {
        self.0.iter().zip(&other.0).position(|(a, b)| a != b)
    }

    /// Swap `L` and `R` symbolwise.
    pub fn mirrored(&self) -> Word {
        Word(self.0.iter().map(|s| s.flip()).collect())
    }
}

/// Lexicographic comparison with `L < R`; a proper prefix is smaller.
pub fn compare_words(a: &Word, b: &Word) -> std::cmp::Ordering {
    a.cmp(b)
}

impl FromIterator<Symbol> for Word {
    fn from_iter<I: IntoIterator<Item = Symbol>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl FromStr for Word {
    type Err = LorenzError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.trim().chars().map(Symbol::try_from).collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<Ser: Serializer>(&self, ser: Ser) -> Result<Ser::Ok, Ser::Error> {
        ser.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cmp::Ordering;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn lexicographic_examples() {
        assert_eq!(compare_words(&w("LRL"), &w("LRR")), Ordering::Less);
        assert_eq!(compare_words(&w("R"), &w("LLL")), Ordering::Greater);
        assert_eq!(compare_words(&w("LRLR"), &w("LRLR")), Ordering::Equal);
    }

    #[test]
    fn proper_prefix_is_smaller() {
        assert_eq!(compare_words(&w("LR"), &w("LRL")), Ordering::Less);
        assert_eq!(compare_words(&w(""), &w("L")), Ordering::Less);
        assert_eq!(w("LR").first_difference(&w("LRL")), None);
        assert_eq!(w("LRL").first_difference(&w("LLL")), Some(1));
    }

    #[test]
    fn bad_symbol_is_named() {
        let err = "LRX".parse::<Word>().unwrap_err();
        assert!(err.to_string().contains("'X'"), "{err}");
    }

    #[test]
    fn serde_uses_bare_strings() {
        let json = serde_json::to_string(&w("LRRL")).unwrap();
        assert_eq!(json, "\"LRRL\"");
        let back: Word = serde_json::from_str(&json).unwrap();
        assert_eq!(back, w("LRRL"));
    }
}
