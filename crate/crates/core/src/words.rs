//! Objects of the category: words in ↑ and ↓, their classes, the order on
//! classes and the σ-diagrams between words of the same class.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagrams::NormalDiagram;

/// Errors from word parsing and class-level operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("invalid letter {0:?} in word (expected 'u' or 'd')")]
    BadLetter(char),
    #[error("words {0} and {1} lie in different classes")]
    ClassMismatch(Word, Word),
    #[error("class {0} exceeds the size limit {1}")]
    TooLarge(ClassIndex, usize),
}

/// One letter: ↑ (`'u'`) or ↓ (`'d'`). `Up < Down` in the word order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Dir {
    Up,
    Down,
}

impl Dir {
    /// `+1` for ↑ and `−1` for ↓.
    pub fn sign(self) -> i64 {
        match self {
            Dir::Up => 1,
            Dir::Down => -1,
        }
    }

    pub fn flip(self) -> Dir {
        match self {
            Dir::Up => Dir::Down,
            Dir::Down => Dir::Up,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Dir::Up => 'u',
            Dir::Down => 'd',
        }
    }
}

/// A finite word in ↑, ↓ (possibly empty), an object of the category.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<Dir>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Dir] {
        &self.0
    }

    /// `↑^r ↓^s`.
    pub fn ups_then_downs(r: usize, s: usize) -> Self {
        Word(std::iter::repeat_n(Dir::Up, r).chain(std::iter::repeat_n(Dir::Down, s)).collect())
    }

    /// Concatenation `self ⊗ other`.
    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(&other.0).copied().collect())
    }

    /// The class `(ℓ↓, ℓ↑)`.
    pub fn class(&self) -> ClassIndex {
        class_of(self)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.0 {
            write!(f, "{}", d.letter())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = WordError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.trim()
            .chars()
            .map(|c| match c {
                'u' => Ok(Dir::Up),
                'd' => Ok(Dir::Down),
                other => Err(WordError::BadLetter(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A ∼-class of words, `(r, s) = (#↓, #↑)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ClassIndex {
    pub r: usize,
    pub s: usize,
}

impl ClassIndex {
    pub fn new(r: usize, s: usize) -> Self {
        ClassIndex { r, s }
    }

    pub fn size(&self) -> usize {
        self.r + self.s
    }
}

impl fmt::Display for ClassIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.r, self.s)
    }
}

/// `(ℓ↓(a), ℓ↑(a))`.
pub fn class_of(a: &Word) -> ClassIndex {
    let r = a.0.iter().filter(|&&d| d == Dir::Down).count();
    ClassIndex { r, s: a.len() - r }
}

/// `x ⪯ y` iff `x = y + (k, k)` for some `k ≥ 0`.
pub fn order_leq(x: ClassIndex, y: ClassIndex) -> bool {
    x.r >= y.r && x.s >= y.s && x.r - y.r == x.s - y.s
}

/// All words of a class, lexicographic with `Up < Down`.
pub fn words_in_class(c: ClassIndex, limit: usize) -> Result<Vec<Word>, WordError> {
    if c.size() > limit {
        return Err(WordError::TooLarge(c, limit));
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(c.size());
    fn rec(r: usize, s: usize, cur: &mut Vec<Dir>, out: &mut Vec<Word>) {
        if r == 0 && s == 0 {
            out.push(Word(cur.clone()));
            return;
        }
        if s > 0 {
            cur.push(Dir::Up);
            rec(r, s - 1, cur, out);
            cur.pop();
        }
        if r > 0 {
            cur.push(Dir::Down);
            rec(r - 1, s, cur, out);
            cur.pop();
        }
    }
    rec(c.r, c.s, &mut cur, &mut out);
    Ok(out)
}

/// All words of length at most `n`, shortest first.
pub fn words_up_to(n: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &layer {
            for d in [Dir::Up, Dir::Down] {
                let mut v = w.0.clone();
                v.push(d);
                next.push(Word(v));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// The dot-free all-vertical diagram `b → a` joining the k-th ↑ of `b` to
/// the k-th ↑ of `a`, and likewise for ↓.
pub fn sigma(a: &Word, b: &Word) -> Result<NormalDiagram, WordError> {
    if class_of(a) != class_of(b) {
        return Err(WordError::ClassMismatch(a.clone(), b.clone()));
    }
    let positions = |w: &Word, d: Dir| -> Vec<usize> {
        w.0.iter().enumerate().filter(|(_, &x)| x == d).map(|(i, _)| i).collect()
    };
    let n = b.len();
    let mut pairs = Vec::with_capacity(n);
    for d in [Dir::Up, Dir::Down] {
        for (i, j) in positions(b, d).into_iter().zip(positions(a, d)) {
            pairs.push((i, n + j));
        }
    }
    Ok(NormalDiagram::from_pairs(b.clone(), a.clone(), pairs, None))
}
