//! Truncated quotients, corner algebras, σ-transport between corners, the
//! dot operators `X_i` on Hom spaces and their simultaneous generalized
//! eigenspaces, and dimensions of standard modules.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::combinatorics::{syt_count, Bipartition};
use crate::diagrams::{enumerate_basis, enumerate_yhx, NormalDiagram, YhxKind};
use crate::ground::FieldElem;
use crate::linalg::{intersect, Matrix};
use crate::straighten::{Engine, Gen, Layer, Morphism, StraightenError};
use crate::words::{class_of, order_leq, sigma, words_in_class, ClassIndex, Word, WordError};

/// Errors from quotient and corner computations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TowersError {
    #[error("word {0} has class {1}, which is not ⪯ {2}")]
    ClassNotBelow(Word, ClassIndex, ClassIndex),
    #[error("word length {0} exceeds the size limit {1}")]
    TooLarge(usize, usize),
    #[error("strand index {0} out of range for word {1}")]
    Index(usize, Word),
    #[error("eigenvalues outside the candidate window: {0} of {1} dimensions unaccounted for")]
    Unaccounted(usize, usize),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Straighten(#[from] StraightenError),
}

/// Drops every term that factors through a class `⋠ ā`.
pub fn project_leq(m: &Morphism, abar: ClassIndex) -> Result<Morphism, TowersError> {
    for w in [m.src(), m.dst()] {
        let c = class_of(w);
        if !order_leq(c, abar) {
            return Err(TowersError::ClassNotBelow(w.clone(), c, abar));
        }
    }
    Ok(m.filter(|d| order_leq(d.through_class(), abar)))
}

/// Product `g ∘ h` in the quotient `A_{⪯ā}`.
pub fn quotient_compose(engine: &Engine, g: &Morphism, h: &Morphism, abar: ClassIndex) -> Result<Morphism, TowersError> {
    project_leq(&engine.compose(g, h)?, abar)
}

/// The corner algebra `Ā_a` on the basis `H(a, a)`.
#[derive(Debug, Clone)]
pub struct CornerAlgebra {
    word: Word,
    basis: Vec<NormalDiagram>,
}

impl CornerAlgebra {
    pub fn new(engine: &Engine, a: &Word, size_limit: usize) -> Result<Self, TowersError> {
        if a.len() > size_limit {
            return Err(TowersError::TooLarge(a.len(), size_limit));
        }
        let basis = enumerate_yhx(YhxKind::H, a, a, engine.level());
        Ok(CornerAlgebra { word: a.clone(), basis })
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn basis(&self) -> &[NormalDiagram] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn class(&self) -> ClassIndex {
        class_of(&self.word)
    }

    pub fn unit(&self, engine: &Engine) -> Morphism {
        Morphism::identity(&self.word, engine.params().field())
    }

    /// `x · y = x ∘ y` followed by projection.
    pub fn mul(&self, engine: &Engine, x: &Morphism, y: &Morphism) -> Morphism {
        quotient_compose(engine, x, y, self.class()).expect("corner elements stay in their class")
    }

    /// Coordinates of an element on the basis.
    pub fn coords(&self, engine: &Engine, x: &Morphism) -> Vec<FieldElem> {
        let zero = engine.params().field().zero();
        self.basis.iter().map(|d| x.coeff(d).cloned().unwrap_or_else(|| zero.clone())).collect()
    }

    /// The element with the given coordinates.
    pub fn element(&self, coords: &[FieldElem]) -> Morphism {
        let mut m = Morphism::zero(self.word.clone(), self.word.clone());
        for (d, c) in self.basis.iter().zip(coords) {
            m.add_term(d.clone(), c);
        }
        m
    }

    /// Structure constants: `table[i][j]` holds the coordinates of
    /// `basis[i] · basis[j]`.
    pub fn structure_constants(&self, engine: &Engine) -> Vec<Vec<Vec<FieldElem>>> {
        let field = engine.params().field();
        self.basis
            .iter()
            .map(|x| {
                let xm = Morphism::from_diagram(x.clone(), field);
                self.basis
                    .iter()
                    .map(|y| {
                        let ym = Morphism::from_diagram(y.clone(), field);
                        self.coords(engine, &self.mul(engine, &xm, &ym))
                    })
                    .collect()
            })
            .collect()
    }

    /// Rank of the span of `elements` inside the corner algebra.
    pub fn span_rank(&self, engine: &Engine, elements: &[Morphism]) -> usize {
        let cols: Vec<Vec<FieldElem>> = elements.iter().map(|e| self.coords(engine, e)).collect();
        if cols.is_empty() {
            return 0;
        }
        Matrix::from_columns(engine.params().field(), self.dim(), &cols).rank()
    }
}

/// `dim Ā_ā = Σ_{a, b ∈ ā} |H(a, b)|`.
pub fn class_corner_dim(abar: ClassIndex, level: usize, size_limit: usize) -> Result<usize, TowersError> {
    let words = words_in_class(abar, size_limit)?;
    Ok(words
        .iter()
        .flat_map(|a| words.iter().map(move |b| (a, b)))
        .map(|(a, b)| enumerate_yhx(YhxKind::H, a, b, level).len())
        .sum())
}

/// Transports `m ∈ Ā_{a,b}` (a morphism `b → a`) to `Ā_{c,d}` by
/// `σ(c,a) ∘ m ∘ σ(b,d)`.
pub fn sigma_transport(engine: &Engine, m: &Morphism, c: &Word, d: &Word) -> Result<Morphism, TowersError> {
    let field = engine.params().field();
    let (a, b) = (m.dst().clone(), m.src().clone());
    let left = Morphism::from_diagram(sigma(c, &a)?, field);
    let right = Morphism::from_diagram(sigma(&b, d)?, field);
    let abar = class_of(&a);
    let inner = quotient_compose(engine, m, &right, abar)?;
    quotient_compose(engine, &left, &inner, abar)
}

/// The dot layer acting on strand `i` (1-based) of `a`.
fn dot_layer(a: &Word, i: usize) -> Layer {
    Layer::new(i - 1, Gen::dot(a.letters()[i - 1]))
}

/// Matrix of left composition with the `i`-th dot on the basis of
/// `Hom(b, a)`.
pub fn dot_matrix(engine: &Engine, a: &Word, b: &Word, i: usize) -> Result<Matrix, TowersError> {
    if i == 0 || i > a.len() {
        return Err(TowersError::Index(i, a.clone()));
    }
    let basis = enumerate_basis(b, a, engine.level());
    Ok(action_matrix(engine, &basis, &[dot_layer(a, i)]))
}

/// Matrix of applying `layers` on top, on a basis closed under that action.
pub fn action_matrix(engine: &Engine, basis: &[NormalDiagram], layers: &[Layer]) -> Matrix {
    let field = engine.params().field();
    let cols: Vec<Vec<FieldElem>> = basis
        .iter()
        .map(|d| {
            let img = engine.eval_on(d, layers);
            basis.iter().map(|e| img.coeff(e).cloned().unwrap_or_else(|| field.zero())).collect()
        })
        .collect();
    Matrix::from_columns(field, basis.len(), &cols)
}

/// Simultaneous generalized eigenspace dimensions of `X_1, …, X_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenProfile {
    pub word: Word,
    pub table: BTreeMap<Vec<FieldElem>, usize>,
}

impl EigenProfile {
    pub fn total(&self) -> usize {
        self.table.values().sum()
    }
}

/// Candidate eigenvalues `u_j + n`, `u'_j + n` for `|n| ≤ window`.
pub fn eigen_candidates(engine: &Engine, window: usize) -> Vec<FieldElem> {
    let p = engine.params();
    let f = p.field();
    let mut set = BTreeSet::new();
    for c in p.u().iter().chain(p.uprime()) {
        for n in -(window as i64)..=(window as i64) {
            set.insert(c + &f.int(n));
        }
    }
    set.into_iter().collect()
}

/// Generalized eigenspace profile of the dot operators on `Hom(b, a)`.
pub fn eigen_profile(engine: &Engine, a: &Word, b: &Word) -> Result<EigenProfile, TowersError> {
    let field = engine.params().field();
    let basis = enumerate_basis(b, a, engine.level());
    let n = basis.len();
    let candidates = eigen_candidates(engine, a.len() + b.len());
    let id = Matrix::identity(field, n);
    let full: Vec<Vec<FieldElem>> = (0..n).map(|j| id.column(j)).collect();
    let mut pieces: Vec<(Vec<FieldElem>, Vec<Vec<FieldElem>>)> = vec![(Vec::new(), full)];
    for i in 1..=a.len() {
        let x = action_matrix(engine, &basis, &[dot_layer(a, i)]);
        let mut next = Vec::new();
        for (key, space) in &pieces {
            for c in &candidates {
                let k = x.shift(c).pow(n as u32).kernel();
                let meet = intersect(field, n, space, &k);
                if !meet.is_empty() {
                    let mut key2 = key.clone();
                    key2.push(c.clone());
                    next.push((key2, meet));
                }
            }
        }
        pieces = next;
    }
    let table: BTreeMap<Vec<FieldElem>, usize> = pieces.into_iter().map(|(k, v)| (k, v.len())).collect();
    let profile = EigenProfile { word: a.clone(), table };
    if profile.total() != n {
        return Err(TowersError::Unaccounted(n - profile.total(), n));
    }
    Ok(profile)
}

/// `dim 1_a Δ̃(λ) = (Σ_{b ∈ class(λ)} |Y(a, b)|) · SYT(λ↓) · SYT(λ↑)`.
pub fn std_dim(lambda: &Bipartition, a: &Word, level: usize) -> Result<u128, TowersError> {
    let c = lambda.class();
    let words = words_in_class(c, usize::MAX)?;
    let y: usize = words.iter().map(|b| enumerate_yhx(YhxKind::Y, a, b, level).len()).sum();
    Ok(y as u128 * syt_count(&lambda.down) * syt_count(&lambda.up))
}
