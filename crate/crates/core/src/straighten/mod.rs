//! Formal linear combinations of diagrams, generator layers, the canonical
//! planar realization of a diagram, and the straightening engine that
//! rewrites stacked generators into the normally ordered basis.

mod engine;
mod relations;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagrams::{DiagramError, DiagramJson, NormalDiagram, StrandKind};
use crate::ground::{Field, FieldElem};
use crate::words::{Dir, Word};

pub use engine::Engine;
pub use relations::{find_relation, relation_catalog, whisker_contexts, Equation, Relation, RelationCheck};

/// Errors from building or combining morphisms.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StraightenError {
    #[error("layer {index} ({layer}) does not fit word {word}")]
    IllTyped { index: usize, layer: Layer, word: Word },
    #[error("type mismatch: cannot compose {0} → {1} after {2} → {3}")]
    Compose(Word, Word, Word, Word),
    #[error("unknown relation {0:?}")]
    UnknownRelation(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("bad coefficient: {0}")]
    Coefficient(String),
}

/// The ten generating morphisms, including the left cup/cap and the ↓ dot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Gen {
    /// `∅ → ↑↓`.
    CupR,
    /// `↓↑ → ∅`.
    CapR,
    /// `∅ → ↓↑`.
    CupL,
    /// `↑↓ → ∅`.
    CapL,
    /// `↑↑ → ↑↑`.
    CrossUU,
    /// `↓↓ → ↓↓`.
    CrossDD,
    /// `↑↓ → ↓↑`.
    CrossUD,
    /// `↓↑ → ↑↓`.
    CrossDU,
    /// Dot on a ↑ strand.
    DotUp,
    /// Dot on a ↓ strand.
    DotDown,
}

use Dir::{Down as D, Up as U};

impl Gen {
    pub fn input(self) -> &'static [Dir] {
        match self {
            Gen::CupR | Gen::CupL => &[],
            Gen::CapR => &[D, U],
            Gen::CapL => &[U, D],
            Gen::CrossUU => &[U, U],
            Gen::CrossDD => &[D, D],
            Gen::CrossUD => &[U, D],
            Gen::CrossDU => &[D, U],
            Gen::DotUp => &[U],
            Gen::DotDown => &[D],
        }
    }

    pub fn output(self) -> &'static [Dir] {
        match self {
            Gen::CupR => &[U, D],
            Gen::CupL => &[D, U],
            Gen::CapR | Gen::CapL => &[],
            Gen::CrossUU => &[U, U],
            Gen::CrossDD => &[D, D],
            Gen::CrossUD => &[D, U],
            Gen::CrossDU => &[U, D],
            Gen::DotUp => &[U],
            Gen::DotDown => &[D],
        }
    }

    pub fn is_crossing(self) -> bool {
        matches!(self, Gen::CrossUU | Gen::CrossDD | Gen::CrossUD | Gen::CrossDU)
    }

    /// Image under the anti-involution τ.
    pub fn tau(self) -> Gen {
        match self {
            Gen::CupR => Gen::CapL,
            Gen::CapL => Gen::CupR,
            Gen::CapR => Gen::CupL,
            Gen::CupL => Gen::CapR,
            Gen::CrossUD => Gen::CrossDU,
            Gen::CrossDU => Gen::CrossUD,
            g => g,
        }
    }

    /// The crossing whose input is `(a, b)`.
    pub fn crossing(a: Dir, b: Dir) -> Gen {
        match (a, b) {
            (U, U) => Gen::CrossUU,
            (D, D) => Gen::CrossDD,
            (U, D) => Gen::CrossUD,
            (D, U) => Gen::CrossDU,
        }
    }

    /// The cap whose input is `(a, b)`.
    pub fn cap(a: Dir) -> Gen {
        match a {
            U => Gen::CapL,
            D => Gen::CapR,
        }
    }

    /// The cup whose output starts with `a`.
    pub fn cup(a: Dir) -> Gen {
        match a {
            U => Gen::CupR,
            D => Gen::CupL,
        }
    }

    pub fn dot(a: Dir) -> Gen {
        match a {
            U => Gen::DotUp,
            D => Gen::DotDown,
        }
    }
}

/// One generator placed at a position of the ambient word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Layer {
    pub pos: usize,
    pub gen: Gen,
}

impl Layer {
    pub fn new(pos: usize, gen: Gen) -> Self {
        Layer { pos, gen }
    }

    /// Applies the layer to a word, or `None` if it does not fit.
    pub fn apply(&self, w: &Word) -> Option<Word> {
        let inp = self.gen.input();
        let end = self.pos + inp.len();
        if end > w.len() || &w.0[self.pos..end] != inp {
            return None;
        }
        let mut out = w.0[..self.pos].to_vec();
        out.extend_from_slice(self.gen.output());
        out.extend_from_slice(&w.0[end..]);
        Some(Word(out))
    }

    /// The same generator with the position moved by `k`.
    pub fn shifted(&self, k: usize) -> Layer {
        Layer { pos: self.pos + k, gen: self.gen }
    }
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}@{}", self.gen, self.pos)
    }
}

/// A source word with a bottom-to-top list of layers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerWord {
    pub src: Word,
    pub layers: Vec<Layer>,
}

impl LayerWord {
    pub fn new(src: Word, layers: Vec<Layer>) -> Self {
        LayerWord { src, layers }
    }

    /// Checks that every layer fits and returns the target word.
    pub fn target(&self) -> Result<Word, StraightenError> {
        let mut w = self.src.clone();
        for (index, layer) in self.layers.iter().enumerate() {
            w = layer
                .apply(&w)
                .ok_or(StraightenError::IllTyped { index, layer: *layer, word: w.clone() })?;
        }
        Ok(w)
    }

    /// Whiskers by identities: `1_left ⊗ self ⊗ 1_right`.
    pub fn whisker(&self, left: &Word, right: &Word) -> LayerWord {
        LayerWord {
            src: left.concat(&self.src).concat(right),
            layers: self.layers.iter().map(|l| l.shifted(left.len())).collect(),
        }
    }

    /// The image under τ: reversed layers with generators swapped, read from
    /// the old target.
    pub fn tau(&self) -> Result<LayerWord, StraightenError> {
        let tgt = self.target()?;
        Ok(LayerWord {
            src: tgt,
            layers: self.layers.iter().rev().map(|l| Layer::new(l.pos, l.gen.tau())).collect(),
        })
    }
}

/// Builds typed layer lists while tracking the current word.
#[derive(Debug, Clone)]
pub(crate) struct Builder {
    pub word: Vec<Dir>,
    pub layers: Vec<Layer>,
}

impl Builder {
    pub fn new(w: &Word) -> Self {
        Builder { word: w.0.clone(), layers: Vec::new() }
    }

    pub fn push(&mut self, l: Layer) {
        let w = l.apply(&Word(std::mem::take(&mut self.word))).expect("builder layer fits");
        self.word = w.0;
        self.layers.push(l);
    }

    pub fn cross(&mut self, p: usize) {
        let g = Gen::crossing(self.word[p], self.word[p + 1]);
        self.push(Layer::new(p, g));
    }

    pub fn dot(&mut self, p: usize, times: u32) {
        for _ in 0..times {
            let g = Gen::dot(self.word[p]);
            self.push(Layer::new(p, g));
        }
    }

    pub fn cap(&mut self, p: usize) {
        let g = Gen::cap(self.word[p]);
        self.push(Layer::new(p, g));
    }

    pub fn cup(&mut self, p: usize, left: Dir) {
        self.push(Layer::new(p, Gen::cup(left)));
    }

    /// Moves the letter at `from` to `to < from` by adjacent crossings.
    pub fn move_left(&mut self, from: usize, to: usize) {
        for i in (to..from).rev() {
            self.cross(i);
        }
    }

    /// Moves the letter at `from` to `to > from` by adjacent crossings.
    pub fn move_right(&mut self, from: usize, to: usize) {
        for i in from..to {
            self.cross(i);
        }
    }
}

/// The layers resolving a crossing into its smoothing: nothing for like
/// orientations, a cap followed by a cup for mixed ones.
pub(crate) fn smoothing(l: Layer) -> Vec<Layer> {
    match l.gen {
        Gen::CrossUD => vec![Layer::new(l.pos, Gen::CapL), Layer::new(l.pos, Gen::CupL)],
        Gen::CrossDU => vec![Layer::new(l.pos, Gen::CapR), Layer::new(l.pos, Gen::CupR)],
        Gen::CrossUU | Gen::CrossDD => vec![],
        other => panic!("smoothing of non-crossing {other:?}"),
    }
}

/// Layers placing the bottom-head dots of `d` on top of `1_src`.
pub(crate) fn bottom_dot_layers(d: &NormalDiagram) -> Vec<Layer> {
    let hd = d.head_dots();
    (0..d.src().len())
        .flat_map(|i| std::iter::repeat_n(Layer::new(i, Gen::DotDown), hd[i] as usize))
        .collect()
}

/// Layers placing the top-head dots of `d` on its target word.
pub(crate) fn top_dot_layers(d: &NormalDiagram) -> Vec<Layer> {
    let hd = d.head_dots();
    let n = d.src().len();
    (0..d.dst().len())
        .flat_map(|j| std::iter::repeat_n(Layer::new(j, Gen::DotUp), hd[n + j] as usize))
        .collect()
}

/// The undotted middle of the canonical realization: caps pulled to the left
/// and closed, cups opened at the left, then a permutation to the target.
/// Every permutation block is a reduced word, so no strand crosses itself and
/// two strands cross at most once per block.
pub(crate) fn slice_core(d: &NormalDiagram) -> Vec<Layer> {
    let n = d.src().len();
    let mates = d.mates();
    let mut b = Builder::new(d.src());

    // Bottom block: caps (by left leg) then verticals, in bottom order.
    let mut target: Vec<usize> = Vec::with_capacity(n);
    for (i, &j) in mates.iter().enumerate().take(n) {
        if j < n && i < j {
            target.push(i);
            target.push(j);
        }
    }
    let n_cap_legs = target.len();
    target.extend((0..n).filter(|&i| mates[i] >= n));
    let mut current: Vec<usize> = (0..n).collect();
    for (t, &want) in target.iter().enumerate() {
        let c = current.iter().position(|&x| x == want).expect("endpoint present");
        b.move_left(c, t);
        let item = current.remove(c);
        current.insert(t, item);
    }
    for _ in 0..n_cap_legs / 2 {
        b.cap(0);
    }

    // Cups, opened at the left edge in reverse order of their left leg.
    let m = d.dst().len();
    let cups: Vec<(usize, usize)> = (0..m)
        .filter_map(|j| {
            let k = mates[n + j];
            (k >= n && j + n < k).then(|| (j, k - n))
        })
        .collect();
    for &(l, _) in cups.iter().rev() {
        b.cup(0, d.dst().0[l]);
    }

    // Final permutation: each current position knows its top index.
    let mut tops: Vec<usize> = Vec::with_capacity(m);
    for &(l, r) in &cups {
        tops.push(l);
        tops.push(r);
    }
    tops.extend(current[n_cap_legs..].iter().map(|&i| mates[i] - n));
    for t in 0..m {
        let c = tops.iter().position(|&x| x == t).expect("top index present");
        b.move_left(c, t);
        let item = tops.remove(c);
        tops.insert(t, item);
    }
    debug_assert_eq!(Word(b.word.clone()), *d.dst());
    b.layers
}

/// Deterministic planar realization of a diagram:
/// bottom-head dots, [`slice_core`], then top-head dots.
pub fn slice(d: &NormalDiagram) -> LayerWord {
    let mut layers = bottom_dot_layers(d);
    layers.extend(slice_core(d));
    layers.extend(top_dot_layers(d));
    LayerWord { src: d.src().clone(), layers }
}

/// A finite linear combination of diagrams `src → dst`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Morphism {
    src: Word,
    dst: Word,
    terms: BTreeMap<NormalDiagram, FieldElem>,
}

impl Morphism {
    pub fn zero(src: Word, dst: Word) -> Self {
        Morphism { src, dst, terms: BTreeMap::new() }
    }

    /// `c · d`.
    pub fn term(d: NormalDiagram, c: FieldElem) -> Self {
        let mut m = Morphism::zero(d.src().clone(), d.dst().clone());
        m.add_term(d, &c);
        m
    }

    pub fn from_diagram(d: NormalDiagram, field: Field) -> Self {
        Morphism::term(d, field.one())
    }

    pub fn identity(a: &Word, field: Field) -> Self {
        Morphism::from_diagram(NormalDiagram::identity(a), field)
    }

    pub fn src(&self) -> &Word {
        &self.src
    }

    pub fn dst(&self) -> &Word {
        &self.dst
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&NormalDiagram, &FieldElem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, d: &NormalDiagram) -> Option<&FieldElem> {
        self.terms.get(d)
    }

    /// Adds `c · d`, pruning zeros.
    pub fn add_term(&mut self, d: NormalDiagram, c: &FieldElem) {
        debug_assert!(d.src() == &self.src && d.dst() == &self.dst, "term type mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&d) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&d);
                }
            }
            None => {
                self.terms.insert(d, c.clone());
            }
        }
    }

    /// Adds `c · other`.
    pub fn add_scaled(&mut self, other: &Morphism, c: &FieldElem) {
        for (d, v) in &other.terms {
            self.add_term(d.clone(), &(v * c));
        }
    }

    pub fn scaled(&self, c: &FieldElem) -> Morphism {
        let mut m = Morphism::zero(self.src.clone(), self.dst.clone());
        m.add_scaled(self, c);
        m
    }

    pub fn plus(&self, other: &Morphism) -> Morphism {
        let mut m = self.clone();
        let one = other.terms.values().next().map(|c| c.field().one());
        if let Some(one) = one {
            m.add_scaled(other, &one);
        }
        m
    }

    pub fn minus(&self, other: &Morphism) -> Morphism {
        let mut m = self.clone();
        let neg = other.terms.values().next().map(|c| -c.field().one());
        if let Some(neg) = neg {
            m.add_scaled(other, &neg);
        }
        m
    }

    /// Keeps only the terms satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(&NormalDiagram) -> bool) -> Morphism {
        Morphism {
            src: self.src.clone(),
            dst: self.dst.clone(),
            terms: self.terms.iter().filter(|(d, _)| keep(d)).map(|(d, c)| (d.clone(), c.clone())).collect(),
        }
    }

    /// Horizontal juxtaposition, extended bilinearly.
    pub fn tensor(&self, other: &Morphism) -> Morphism {
        let mut m = Morphism::zero(self.src.concat(&other.src), self.dst.concat(&other.dst));
        for (d1, c1) in &self.terms {
            for (d2, c2) in &other.terms {
                m.add_term(d1.tensor(d2), &(c1 * c2));
            }
        }
        m
    }

    /// Term-wise vertical flip of the basis keys.
    pub fn flip(&self) -> Morphism {
        let mut m = Morphism::zero(self.dst.clone(), self.src.clone());
        for (d, c) in &self.terms {
            m.add_term(d.tau(), c);
        }
        m
    }

    pub fn to_json(&self) -> MorphismJson {
        MorphismJson {
            src: self.src.clone(),
            dst: self.dst.clone(),
            terms: self
                .terms
                .iter()
                .map(|(d, c)| TermJson { diagram: d.to_json(), coeff: c.to_string() })
                .collect(),
        }
    }

    pub fn from_json(j: &MorphismJson, field: Field, level: usize) -> Result<Self, StraightenError> {
        let mut m = Morphism::zero(j.src.clone(), j.dst.clone());
        for t in &j.terms {
            let d = NormalDiagram::from_json(&t.diagram, level)?;
            if d.src() != &j.src || d.dst() != &j.dst {
                return Err(StraightenError::Compose(
                    d.src().clone(),
                    d.dst().clone(),
                    j.src.clone(),
                    j.dst.clone(),
                ));
            }
            let c = field.parse(&t.coeff).map_err(|e| StraightenError::Coefficient(e.to_string()))?;
            m.add_term(d, &c);
        }
        Ok(m)
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(d, c)| {
                let strands: Vec<String> = d
                    .pairs()
                    .iter()
                    .zip(d.dots())
                    .enumerate()
                    .map(|(k, (&(a, b), &x))| {
                        let kind = match d.kind(k) {
                            StrandKind::Cup => "cup",
                            StrandKind::Cap => "cap",
                            StrandKind::VertUp => "up",
                            StrandKind::VertDown => "down",
                        };
                        format!("{kind}{a}-{b}^{x}")
                    })
                    .collect();
                format!("{c}*[{}]", strands.join(" "))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// JSON shape of a morphism term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub diagram: DiagramJson,
    pub coeff: String,
}

/// JSON shape of a morphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismJson {
    pub src: Word,
    pub dst: Word,
    pub terms: Vec<TermJson>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::enumerate_basis;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn slice_of_identity_is_empty() {
        for a in crate::words::words_up_to(3) {
            assert!(slice(&NormalDiagram::identity(&a)).layers.is_empty());
        }
    }

    #[test]
    fn slice_of_dotted_cup() {
        let cup = NormalDiagram::from_pairs(w(""), w("ud"), vec![(0, 1)], Some(vec![2]));
        let s = slice(&cup);
        assert_eq!(
            s.layers,
            vec![Layer::new(0, Gen::CupR), Layer::new(0, Gen::DotUp), Layer::new(0, Gen::DotUp)]
        );
    }

    #[test]
    fn slices_are_well_typed() {
        for src in crate::words::words_up_to(3) {
            for dst in crate::words::words_up_to(3) {
                for d in enumerate_basis(&src, &dst, 2) {
                    assert_eq!(slice(&d).target().unwrap(), dst);
                }
            }
        }
    }

    #[test]
    fn layer_typing() {
        let lw = LayerWord::new(w("u"), vec![Layer::new(0, Gen::CupR), Layer::new(1, Gen::CapR)]);
        assert_eq!(lw.target().unwrap(), w("u"));
        let bad = LayerWord::new(w("u"), vec![Layer::new(0, Gen::CapR)]);
        assert!(matches!(bad.target(), Err(StraightenError::IllTyped { .. })));
    }

    #[test]
    fn tau_of_layer_word_is_involutive() {
        let lw = LayerWord::new(
            w("ud"),
            vec![Layer::new(0, Gen::CrossUD), Layer::new(0, Gen::DotDown), Layer::new(0, Gen::CapR)],
        );
        assert_eq!(lw.tau().unwrap().tau().unwrap(), lw);
    }
}
