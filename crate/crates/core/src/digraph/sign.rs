use crate::error::{Error, Result};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

/// Direction of a single walk step: `Plus` follows an out-arc, `Minus` an in-arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    #[inline]
    pub fn complement(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    fn from_symbol(c: char) -> Option<Sign> {
        match c {
            '+' => Some(Sign::Plus),
            '-' | '\u{2212}' => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_char(self.symbol())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let c = char::deserialize(d)?;
        Sign::from_symbol(c).ok_or_else(|| serde::de::Error::custom(format!("bad sign {c:?}")))
    }
}

/// Non-empty sequence of signs. Indexing is 0-based: `at(0)` is the first step.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignPattern(Vec<Sign>);

impl SignPattern {
    pub fn new(signs: Vec<Sign>) -> Result<Self> {
        if signs.is_empty() {
            Err(Error::EmptyPattern)
        } else {
            Ok(SignPattern(signs))
        }
    }

    /// `(+, +, ..., +)` of the given length (at least 1).
    pub fn all_plus(len: usize) -> Self {
        assert!(len >= 1, "pattern length must be positive");
        SignPattern(vec![Sign::Plus; len])
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for API symmetry with `len`.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn at(&self, i: usize) -> Sign {
        self.0[i]
    }

    pub fn signs(&self) -> &[Sign] {
        &self.0
    }

    /// First `i` signs.
    pub fn prefix(&self, i: usize) -> Result<Self> {
        if i > self.len() {
            return Err(Error::InvalidParam(format!("prefix {i} of pattern of length {}", self.len())));
        }
        SignPattern::new(self.0[..i].to_vec())
    }

    /// Contiguous slice `[start, end)`.
    pub fn slice(&self, start: usize, end: usize) -> Result<Self> {
        if start > end || end > self.len() {
            return Err(Error::InvalidParam(format!("slice {start}..{end} of pattern of length {}", self.len())));
        }
        SignPattern::new(self.0[start..end].to_vec())
    }

    /// Reverse the order and flip every sign. Traversing a walk backwards
    /// realizes exactly this pattern.
    pub fn reverse_complement(&self) -> Self {
        SignPattern(self.0.iter().rev().map(|s| s.complement()).collect())
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for SignPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let signs = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .map(|c| Sign::from_symbol(c).ok_or_else(|| Error::InvalidParam(format!("bad sign {c:?}"))))
            .collect::<Result<Vec<_>>>()?;
        SignPattern::new(signs)
    }
}

impl Serialize for SignPattern {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SignPattern {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_is_involution() {
        for s in [Sign::Plus, Sign::Minus] {
            assert_ne!(s.complement(), s);
            assert_eq!(s.complement().complement(), s);
        }
    }

    #[test]
    fn parse_and_display() {
        let p: SignPattern = "+-+".parse().unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.to_string(), "+-+");
        assert!("".parse::<SignPattern>().is_err());
        assert!("+x".parse::<SignPattern>().is_err());
    }

    #[test]
    fn prefix_and_reverse_complement() {
        let p: SignPattern = "++-".parse().unwrap();
        assert_eq!(p.prefix(2).unwrap().to_string(), "++");
        assert!(p.prefix(0).is_err());
        assert!(p.prefix(4).is_err());
        assert_eq!(p.reverse_complement().to_string(), "+--");
        assert_eq!(p.reverse_complement().reverse_complement(), p);
        assert_eq!(p.slice(1, 3).unwrap().to_string(), "+-");
    }
}
