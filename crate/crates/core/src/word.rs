//! Alphabets, words over them, and signed words over state names.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub type Letter = usize;

/// Alphabet `{0, .., d-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alphabet(usize);

impl Alphabet {
    pub fn new(size: usize) -> Result<Self> {
        if size < 2 {
            return Err(Error::AlphabetTooSmall(size));
        }
        Ok(Alphabet(size))
    }

    pub fn size(self) -> usize {
        self.0
    }

    /// Number of words of length `level`, saturating at `u128::MAX`.
    pub fn level_size(self, level: usize) -> u128 {
        let mut n: u128 = 1;
        for _ in 0..level {
            n = n.saturating_mul(self.0 as u128);
        }
        n
    }

    /// The word with index `index` among words of length `level`, first letter most significant.
    pub fn word_at(self, level: usize, mut index: usize) -> StateWord {
        let mut letters = vec![0; level];
        for slot in letters.iter_mut().rev() {
            *slot = index % self.0;
            index /= self.0;
        }
        StateWord(letters)
    }

    pub fn index_of(self, word: &[Letter]) -> usize {
        word.iter().fold(0, |acc, &x| acc * self.0 + x)
    }

    /// All words of length `level` in lexicographic order.
    pub fn words(self, level: usize) -> impl Iterator<Item = StateWord> {
        let count = self.level_size(level) as usize;
        (0..count).map(move |i| self.word_at(level, i))
    }
}

/// A finite word `x1 x2 .. xn`; the first letter is read first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct StateWord(pub Vec<Letter>);

impl StateWord {
    pub fn empty() -> Self {
        StateWord(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn check(&self, alphabet: Alphabet) -> Result<()> {
        match self.0.iter().find(|&&x| x >= alphabet.size()) {
            Some(&letter) => Err(Error::LetterOutOfRange {
                letter,
                degree: alphabet.size(),
            }),
            None => Ok(()),
        }
    }
}

impl From<Vec<Letter>> for StateWord {
    fn from(v: Vec<Letter>) -> Self {
        StateWord(v)
    }
}

impl From<&[Letter]> for StateWord {
    fn from(v: &[Letter]) -> Self {
        StateWord(v.to_vec())
    }
}

pub fn format_letters(letters: &[Letter]) -> String {
    if letters.iter().all(|&x| x < 10) {
        letters.iter().map(|x| x.to_string()).collect()
    } else {
        letters
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(".")
    }
}

impl fmt::Display for StateWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_letters(&self.0))
    }
}

impl FromStr for StateWord {
    type Err = Error;

    /// Digits `0110`, or dot-separated letters `10.3.0` for large alphabets.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(StateWord::empty());
        }
        let parse = |t: &str| t.parse::<Letter>().map_err(|_| Error::InvalidWord(s.to_string()));
        if s.contains('.') {
            s.split('.').map(parse).collect::<Result<Vec<_>>>().map(StateWord)
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(|x| x as Letter))
                .collect::<Option<Vec<_>>>()
                .map(StateWord)
                .ok_or_else(|| Error::InvalidWord(s.to_string()))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

/// A product `s1^±1 * s2^±1 * ...` of named states. The rightmost factor acts first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GroupWord {
    pub factors: Vec<(String, Sign)>,
}

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord::default()
    }

    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Self {
        GroupWord {
            factors: names
                .iter()
                .map(|s| (s.as_ref().to_string(), Sign::Plus))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn inverse(&self) -> Self {
        GroupWord {
            factors: self
                .factors
                .iter()
                .rev()
                .map(|(n, s)| {
                    let s = match s {
                        Sign::Plus => Sign::Minus,
                        Sign::Minus => Sign::Plus,
                    };
                    (n.clone(), s)
                })
                .collect(),
        }
    }

    pub fn concat(&self, other: &GroupWord) -> Self {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        GroupWord { factors }
    }

    pub fn pow(&self, n: usize) -> Self {
        GroupWord {
            factors: (0..n).flat_map(|_| self.factors.iter().cloned()).collect(),
        }
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl FromStr for GroupWord {
    type Err = Error;

    /// Parses `a*b^-1*a`. The empty string and `1` denote the identity.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.is_empty() || t == "1" {
            return Ok(GroupWord::identity());
        }
        let mut factors = Vec::new();
        for part in t.split('*') {
            let part = part.trim();
            let (name, sign) = match part.strip_suffix("^-1") {
                Some(base) => (base, Sign::Minus),
                None => (part, Sign::Plus),
            };
            if !is_identifier(name) {
                return Err(Error::InvalidWord(s.to_string()));
            }
            factors.push((name.to_string(), sign));
        }
        Ok(GroupWord { factors })
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, (name, sign)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            f.write_str(name)?;
            if *sign == Sign::Minus {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}
