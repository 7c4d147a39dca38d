//! Normally ordered dotted oriented Brauer diagrams: the data model, basis
//! enumeration, the Y/H/X subsets and the vertical flip.
//!
//! Endpoints are numbered globally: bottom point `i` of the source word is
//! `i`, top point `j` of the target word is `src.len() + j`. A diagram stores
//! its strands as sorted endpoint pairs with one dot count per strand. Dots
//! conceptually sit at the strand's head, the endpoint where the orientation
//! points out of the diagram: a top ↑ point or a bottom ↓ point.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::words::{class_of, ClassIndex, Dir, Word};

/// Errors from decoding diagrams.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("endpoint {0:?} is out of range or used twice")]
    BadEndpoint((String, usize)),
    #[error("strand joining {0} and {1} is not orientation-consistent")]
    Orientation(usize, usize),
    #[error("not every endpoint is matched")]
    Incomplete,
    #[error("dot vector has length {0}, expected {1}")]
    DotLength(usize, usize),
    #[error("malformed diagram: {0}")]
    Malformed(String),
}

/// Which boundary line an endpoint lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Bottom,
    Top,
}

/// An endpoint of a diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Endpoint {
    pub side: Side,
    pub index: usize,
}

/// Shape of a strand, derived from its endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrandKind {
    VertUp,
    VertDown,
    Cup,
    Cap,
}

/// The three triangular subsets of a Hom space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum YhxKind {
    Y,
    H,
    X,
}

/// A basis element of `Hom(src, dst)`: a matching plus one dot count per strand.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NormalDiagram {
    src: Word,
    dst: Word,
    pairs: Vec<(usize, usize)>,
    dots: Vec<u32>,
}

impl NormalDiagram {
    /// Builds a diagram from endpoint pairs given in any order. Missing dots
    /// default to zero. Orientation consistency is the caller's duty; use
    /// [`NormalDiagram::validate`] for untrusted input.
    pub fn from_pairs(src: Word, dst: Word, pairs: Vec<(usize, usize)>, dots: Option<Vec<u32>>) -> Self {
        let dots = dots.unwrap_or_else(|| vec![0; pairs.len()]);
        let mut items: Vec<((usize, usize), u32)> = pairs
            .into_iter()
            .map(|(a, b)| (a.min(b), a.max(b)))
            .zip(dots)
            .collect();
        items.sort();
        let (pairs, dots) = items.into_iter().unzip();
        NormalDiagram { src, dst, pairs, dots }
    }

    /// The identity `1_a`.
    pub fn identity(a: &Word) -> Self {
        let n = a.len();
        NormalDiagram::from_pairs(a.clone(), a.clone(), (0..n).map(|i| (i, n + i)).collect(), None)
    }

    pub fn src(&self) -> &Word {
        &self.src
    }

    pub fn dst(&self) -> &Word {
        &self.dst
    }

    /// Sorted endpoint pairs.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Dot counts aligned with [`NormalDiagram::pairs`].
    pub fn dots(&self) -> &[u32] {
        &self.dots
    }

    pub fn total_dots(&self) -> u32 {
        self.dots.iter().sum()
    }

    pub fn num_endpoints(&self) -> usize {
        self.src.len() + self.dst.len()
    }

    /// Endpoint described by a global index.
    pub fn endpoint(&self, g: usize) -> Endpoint {
        endpoint_of(self.src.len(), g)
    }

    /// Letter at a global endpoint.
    pub fn letter(&self, g: usize) -> Dir {
        letter_at(&self.src, &self.dst, g)
    }

    /// Whether the global endpoint is a strand head (top ↑ or bottom ↓).
    pub fn is_head(&self, g: usize) -> bool {
        is_head(&self.src, &self.dst, g)
    }

    /// Shape of strand `k`.
    pub fn kind(&self, k: usize) -> StrandKind {
        let (a, b) = self.pairs[k];
        let n = self.src.len();
        match (a < n, b < n) {
            (true, true) => StrandKind::Cap,
            (false, false) => StrandKind::Cup,
            _ if self.letter(a) == Dir::Up => StrandKind::VertUp,
            _ => StrandKind::VertDown,
        }
    }

    pub fn has_cups(&self) -> bool {
        (0..self.pairs.len()).any(|k| self.kind(k) == StrandKind::Cup)
    }

    pub fn has_caps(&self) -> bool {
        (0..self.pairs.len()).any(|k| self.kind(k) == StrandKind::Cap)
    }

    /// Whether two vertical strands cross.
    pub fn has_vertical_crossing(&self) -> bool {
        let verts: Vec<(usize, usize)> = self
            .pairs
            .iter()
            .filter(|&&(a, b)| a < self.src.len() && b >= self.src.len())
            .copied()
            .collect();
        verts.iter().enumerate().any(|(i, &(a, b))| {
            verts[i + 1..].iter().any(|&(c, d)| (a < c) != (b < d))
        })
    }

    pub fn has_vertical_dots(&self) -> bool {
        (0..self.pairs.len()).any(|k| {
            matches!(self.kind(k), StrandKind::VertUp | StrandKind::VertDown) && self.dots[k] > 0
        })
    }

    /// The class of the narrowest object this diagram factors through:
    /// `(#vertical ↓, #vertical ↑)`.
    pub fn through_class(&self) -> ClassIndex {
        let mut c = ClassIndex::new(0, 0);
        for k in 0..self.pairs.len() {
            match self.kind(k) {
                StrandKind::VertUp => c.s += 1,
                StrandKind::VertDown => c.r += 1,
                _ => {}
            }
        }
        c
    }

    /// Partner of every global endpoint.
    pub fn mates(&self) -> Vec<usize> {
        let mut m = vec![0; self.num_endpoints()];
        for &(a, b) in &self.pairs {
            m[a] = b;
            m[b] = a;
        }
        m
    }

    /// Dot count indexed by global endpoint, stored at each strand's head.
    pub fn head_dots(&self) -> Vec<u32> {
        let mut v = vec![0; self.num_endpoints()];
        for (k, &(a, b)) in self.pairs.iter().enumerate() {
            let h = if self.is_head(a) { a } else { b };
            v[h] = self.dots[k];
        }
        v
    }

    /// Rebuilds a diagram from a mate array and head-indexed dots.
    pub fn from_mates(src: Word, dst: Word, mates: &[usize], head_dots: &[u32]) -> Self {
        let mut pairs = Vec::with_capacity(mates.len() / 2);
        let mut dots = Vec::with_capacity(mates.len() / 2);
        for (a, &b) in mates.iter().enumerate() {
            if a < b {
                pairs.push((a, b));
                dots.push(head_dots[a] + head_dots[b]);
            }
        }
        NormalDiagram { src, dst, pairs, dots }
    }

    /// Same matching with all dots removed.
    pub fn undotted(&self) -> Self {
        NormalDiagram { dots: vec![0; self.dots.len()], ..self.clone() }
    }

    /// Checks orientation consistency and the dot bound `< level`.
    pub fn validate(&self, level: usize) -> Result<(), DiagramError> {
        let n = self.num_endpoints();
        let mut seen = vec![false; n];
        for &(a, b) in &self.pairs {
            for g in [a, b] {
                if g >= n || seen[g] {
                    let e = endpoint_of(self.src.len(), g.min(n));
                    return Err(DiagramError::BadEndpoint((format!("{:?}", e.side), e.index)));
                }
                seen[g] = true;
            }
            if self.is_head(a) == self.is_head(b) {
                return Err(DiagramError::Orientation(a, b));
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(DiagramError::Incomplete);
        }
        if self.dots.iter().any(|&d| d as usize >= level) {
            return Err(DiagramError::Malformed(format!("more than {} dots on a strand", level - 1)));
        }
        Ok(())
    }

    /// Horizontal juxtaposition `self ⊗ other`.
    pub fn tensor(&self, other: &NormalDiagram) -> NormalDiagram {
        let (n1, m1) = (self.src.len(), self.dst.len());
        let (n2, _) = (other.src.len(), other.dst.len());
        let remap1 = |g: usize| if g < n1 { g } else { g + n2 };
        let remap2 = |g: usize| if g < n2 { g + n1 } else { g + n1 + m1 };
        let mut pairs: Vec<(usize, usize)> =
            self.pairs.iter().map(|&(a, b)| (remap1(a), remap1(b))).collect();
        pairs.extend(other.pairs.iter().map(|&(a, b)| (remap2(a), remap2(b))));
        let mut dots = self.dots.clone();
        dots.extend(&other.dots);
        NormalDiagram::from_pairs(self.src.concat(&other.src), self.dst.concat(&other.dst), pairs, Some(dots))
    }

    /// The vertical flip: source and target swap, bottom and top swap, and
    /// dot counts are carried along.
    pub fn tau(&self) -> NormalDiagram {
        let n = self.src.len();
        let m = self.dst.len();
        let flip = |g: usize| if g < n { m + g } else { g - n };
        let pairs = self.pairs.iter().map(|&(a, b)| (flip(a), flip(b))).collect();
        NormalDiagram::from_pairs(self.dst.clone(), self.src.clone(), pairs, Some(self.dots.clone()))
    }

    /// Serializable form with `"B"`/`"T"` endpoint tags.
    pub fn to_json(&self) -> DiagramJson {
        let tag = |g: usize| {
            let e = self.endpoint(g);
            (if e.side == Side::Bottom { "B" } else { "T" }.to_string(), e.index)
        };
        DiagramJson {
            src: self.src.clone(),
            dst: self.dst.clone(),
            pairs: self.pairs.iter().map(|&(a, b)| [tag(a), tag(b)]).collect(),
            dots: self.dots.clone(),
        }
    }

    /// Decodes and validates the serializable form.
    pub fn from_json(j: &DiagramJson, level: usize) -> Result<Self, DiagramError> {
        let n = j.src.len();
        let glob = |(side, i): &(String, usize)| -> Result<usize, DiagramError> {
            match side.as_str() {
                "B" if *i < n => Ok(*i),
                "T" if *i < j.dst.len() => Ok(n + i),
                _ => Err(DiagramError::BadEndpoint((side.clone(), *i))),
            }
        };
        if j.dots.len() != j.pairs.len() {
            return Err(DiagramError::DotLength(j.dots.len(), j.pairs.len()));
        }
        let pairs = j
            .pairs
            .iter()
            .map(|[a, b]| Ok((glob(a)?, glob(b)?)))
            .collect::<Result<Vec<_>, DiagramError>>()?;
        let d = NormalDiagram::from_pairs(j.src.clone(), j.dst.clone(), pairs, Some(j.dots.clone()));
        d.validate(level)?;
        Ok(d)
    }
}

/// JSON shape of a diagram.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramJson {
    pub src: Word,
    pub dst: Word,
    pub pairs: Vec<[(String, usize); 2]>,
    pub dots: Vec<u32>,
}

pub(crate) fn endpoint_of(n: usize, g: usize) -> Endpoint {
    if g < n {
        Endpoint { side: Side::Bottom, index: g }
    } else {
        Endpoint { side: Side::Top, index: g - n }
    }
}

pub(crate) fn letter_at(src: &Word, dst: &Word, g: usize) -> Dir {
    let n = src.len();
    if g < n {
        src.0[g]
    } else {
        dst.0[g - n]
    }
}

pub(crate) fn is_head(src: &Word, dst: &Word, g: usize) -> bool {
    let top = g >= src.len();
    match letter_at(src, dst, g) {
        Dir::Up => top,
        Dir::Down => !top,
    }
}

/// Heads and tails of the endpoint set of `src → dst`, in increasing order.
fn heads_and_tails(src: &Word, dst: &Word) -> (Vec<usize>, Vec<usize>) {
    let n = src.len() + dst.len();
    (0..n).partition(|&g| is_head(src, dst, g))
}

/// Number of strands of any diagram `src → dst`, or `None` if no diagram exists.
pub fn strand_count(src: &Word, dst: &Word) -> Option<usize> {
    let (h, t) = heads_and_tails(src, dst);
    (h.len() == t.len()).then_some(h.len())
}

/// All permutations of `0..n` in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(n, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    rec(n, &mut cur, &mut used, &mut out);
    out
}

/// All dot vectors in `[0, level)^k`, lexicographic.
pub(crate) fn dot_vectors(k: usize, level: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..level as u32).map(move |d| {
                    let mut w = v.clone();
                    w.push(d);
                    w
                })
            })
            .collect();
    }
    out
}

/// All undotted matchings `src → dst`, sorted.
pub fn enumerate_matchings(src: &Word, dst: &Word) -> Vec<NormalDiagram> {
    let (heads, tails) = heads_and_tails(src, dst);
    if heads.len() != tails.len() {
        return Vec::new();
    }
    let set: BTreeSet<NormalDiagram> = permutations(heads.len())
        .into_iter()
        .map(|perm| {
            let pairs = heads.iter().zip(&perm).map(|(&h, &i)| (h, tails[i])).collect();
            NormalDiagram::from_pairs(src.clone(), dst.clone(), pairs, None)
        })
        .collect();
    set.into_iter().collect()
}

/// Every normally ordered dotted diagram `src → dst` with at most
/// `level − 1` dots per strand, in the deterministic order.
pub fn enumerate_basis(src: &Word, dst: &Word, level: usize) -> Vec<NormalDiagram> {
    let mut out = Vec::new();
    for m in enumerate_matchings(src, dst) {
        for dots in dot_vectors(m.pairs.len(), level) {
            out.push(NormalDiagram { dots, ..m.clone() });
        }
    }
    out.sort();
    out
}

/// The subsets `Y(a,b)`, `H(a,b)`, `X(a,b)` of diagrams `b → a`.
pub fn enumerate_yhx(kind: YhxKind, a: &Word, b: &Word, level: usize) -> Vec<NormalDiagram> {
    enumerate_basis(b, a, level)
        .into_iter()
        .filter(|d| match kind {
            YhxKind::Y => !d.has_caps() && !d.has_vertical_crossing() && !d.has_vertical_dots(),
            YhxKind::H => !d.has_cups() && !d.has_caps(),
            YhxKind::X => !d.has_cups() && !d.has_vertical_crossing() && !d.has_vertical_dots(),
        })
        .collect()
}

/// Whether `class_of(a) ⪯ class_of(b)` allows non-empty Y/X sets.
pub fn yx_possible(a: &Word, b: &Word) -> bool {
    crate::words::order_leq(class_of(a), class_of(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn identity_examples() {
        assert_eq!(NormalDiagram::identity(&w("")).pairs().len(), 0);
        let up = NormalDiagram::identity(&w("u"));
        assert_eq!(up.kind(0), StrandKind::VertUp);
        let ud = NormalDiagram::identity(&w("ud"));
        assert_eq!(ud.kind(0), StrandKind::VertUp);
        assert_eq!(ud.kind(1), StrandKind::VertDown);
    }

    #[test]
    fn basis_examples() {
        assert_eq!(enumerate_basis(&w(""), &w("ud"), 1).len(), 1);
        assert_eq!(enumerate_basis(&w("ud"), &w("ud"), 1).len(), 2);
        assert_eq!(enumerate_basis(&w("ud"), &w("ud"), 2).len(), 8);
        assert!(enumerate_basis(&w("u"), &w("d"), 2).is_empty());
    }

    #[test]
    fn yhx_examples() {
        assert_eq!(enumerate_yhx(YhxKind::Y, &w("ud"), &w(""), 2).len(), 2);
        let h = enumerate_yhx(YhxKind::H, &w("ud"), &w("du"), 1);
        assert_eq!(h.len(), 1);
        assert_eq!(h[0], crate::words::sigma(&w("ud"), &w("du")).unwrap());
        // Both caps of ↑↑↓ are allowed: the cap may pass over the vertical strand.
        assert_eq!(enumerate_yhx(YhxKind::X, &w("u"), &w("uud"), 1).len(), 2);
    }

    #[test]
    fn tau_examples() {
        let a = w("udu");
        assert_eq!(NormalDiagram::identity(&a).tau(), NormalDiagram::identity(&a));
        let cup = &enumerate_basis(&w(""), &w("ud"), 2)[1];
        let cap = cup.tau();
        assert_eq!(cap.src(), &w("ud"));
        assert!(cap.has_caps());
        assert_eq!(cap.dots(), cup.dots());
    }

    #[test]
    fn json_round_trip() {
        for d in enumerate_basis(&w("ud"), &w("du"), 2) {
            let j = d.to_json();
            let text = serde_json::to_string(&j).unwrap();
            let back: DiagramJson = serde_json::from_str(&text).unwrap();
            assert_eq!(NormalDiagram::from_json(&back, 2).unwrap(), d);
        }
    }

    #[test]
    fn json_rejects_inconsistent_orientation() {
        let j = DiagramJson {
            src: w("u"),
            dst: w("d"),
            pairs: vec![[("B".into(), 0), ("T".into(), 0)]],
            dots: vec![0],
        };
        assert!(NormalDiagram::from_json(&j, 1).is_err());
    }

    #[test]
    fn tensor_of_cups() {
        let cup = NormalDiagram::from_pairs(w(""), w("ud"), vec![(0, 1)], None);
        let t = cup.tensor(&cup);
        assert_eq!(t.dst(), &w("udud"));
        assert_eq!(t.pairs(), &[(0, 1), (2, 3)]);
    }
}
