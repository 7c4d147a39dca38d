//! Exact arithmetic for cyclotomic oriented Brauer categories `OB(u, u')`.
//!
//! The crate normalizes diagrammatic morphisms into the normally ordered
//! basis, builds corner algebras and their Hecke presentations, and computes
//! path combinatorics and a Grothendieck-group model attached to the
//! category. All scalars are exact elements of ℚ or 𝔽_p.

pub mod combinatorics;
pub mod diagrams;
pub mod ground;
pub mod hecke;
pub mod ktheory;
pub mod linalg;
pub mod straighten;
pub mod towers;
pub mod words;

pub use combinatorics::{Bipartition, Multipartition};
pub use diagrams::{enumerate_basis, enumerate_yhx, NormalDiagram, YhxKind};
pub use ground::{Field, FieldElem, Params};
pub use linalg::Matrix;
pub use straighten::{slice, Engine, Gen, Layer, LayerWord, Morphism};
pub use words::{ClassIndex, Dir, Word};
