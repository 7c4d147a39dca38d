//! The catalog of defining and derived relations, each stated as an equality
//! of linear combinations of layer words, and a checker that normalizes both
//! sides in a whiskering context.

use serde::Serialize;

use super::{Engine, Gen, Layer, LayerWord, Morphism, StraightenError};
use crate::words::{words_up_to, Word};

/// One side of an equation: integer-weighted layer lists on a common source.
pub type Side = Vec<(i64, Vec<Layer>)>;

/// `lhs = rhs` as morphisms out of `src`.
#[derive(Debug, Clone)]
pub struct Equation {
    pub src: Word,
    pub lhs: Side,
    pub rhs: Side,
}

/// A named relation, made of one or more equations.
#[derive(Debug, Clone)]
pub struct Relation {
    pub id: &'static str,
    pub description: &'static str,
    pub equations: Vec<Equation>,
}

/// The outcome of checking one relation in one context.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub left: Word,
    pub right: Word,
    pub pass: bool,
}

fn w(s: &str) -> Word {
    s.parse().expect("catalog words are valid")
}

fn ls(items: &[(usize, Gen)]) -> Vec<Layer> {
    items.iter().map(|&(p, g)| Layer::new(p, g)).collect()
}

fn eq(src: &str, lhs: Side, rhs: Side) -> Equation {
    Equation { src: w(src), lhs, rhs }
}

fn one(items: &[(usize, Gen)]) -> Side {
    vec![(1, ls(items))]
}

/// Every relation known to the checker, in catalog order.
pub fn relation_catalog() -> Vec<Relation> {
    use Gen::*;
    let id: Side = vec![(1, vec![])];
    let rel = |id: &'static str, description: &'static str, equations: Vec<Equation>| Relation {
        id,
        description,
        equations,
    };
    vec![
        rel("rel-1", "right zigzag on ↑", vec![eq("u", one(&[(0, CupR), (1, CapR)]), id.clone())]),
        rel("rel-2", "right zigzag on ↓", vec![eq("d", one(&[(1, CupR), (0, CapR)]), id.clone())]),
        rel("rel-3", "↑↑ double crossing", vec![eq("uu", one(&[(0, CrossUU), (0, CrossUU)]), id.clone())]),
        rel(
            "rel-4",
            "↑ braid relation",
            vec![eq(
                "uuu",
                one(&[(0, CrossUU), (1, CrossUU), (0, CrossUU)]),
                one(&[(1, CrossUU), (0, CrossUU), (1, CrossUU)]),
            )],
        ),
        rel(
            "rel-5",
            "mixed crossings are mutually inverse",
            vec![
                eq("ud", one(&[(0, CrossUD), (0, CrossDU)]), id.clone()),
                eq("du", one(&[(0, CrossDU), (0, CrossUD)]), id.clone()),
            ],
        ),
        rel(
            "rel-6",
            "dot past ↑↑ crossing",
            vec![eq(
                "uu",
                one(&[(0, CrossUU), (1, DotUp)]),
                vec![(1, ls(&[(0, DotUp), (0, CrossUU)])), (1, vec![])],
            )],
        ),
        rel("rel-7", "left zigzag on ↓", vec![eq("d", one(&[(0, CupL), (1, CapL)]), id.clone())]),
        rel("rel-8", "left zigzag on ↑", vec![eq("u", one(&[(1, CupL), (0, CapL)]), id.clone())]),
        rel("rel-9", "↓↓ double crossing", vec![eq("dd", one(&[(0, CrossDD), (0, CrossDD)]), id.clone())]),
        rel(
            "rel-10",
            "↓ braid relation",
            vec![eq(
                "ddd",
                one(&[(0, CrossDD), (1, CrossDD), (0, CrossDD)]),
                one(&[(1, CrossDD), (0, CrossDD), (1, CrossDD)]),
            )],
        ),
        rel(
            "rel-11",
            "dot past ↓↓ crossing",
            vec![eq(
                "dd",
                one(&[(1, DotDown), (0, CrossDD)]),
                vec![(1, ls(&[(0, CrossDD), (0, DotDown)])), (-1, vec![])],
            )],
        ),
        rel(
            "dots-1",
            "↓ dot past the ↓↑ crossing",
            vec![eq(
                "du",
                one(&[(0, DotDown), (0, CrossDU)]),
                vec![(1, ls(&[(0, CrossDU), (1, DotDown)])), (-1, ls(&[(0, CapR), (0, CupR)]))],
            )],
        ),
        rel(
            "dots-2",
            "↑ dot past the ↓↑ crossing",
            vec![eq(
                "du",
                one(&[(1, DotUp), (0, CrossDU)]),
                vec![(1, ls(&[(0, CrossDU), (0, DotUp)])), (-1, ls(&[(0, CapR), (0, CupR)]))],
            )],
        ),
        rel(
            "dots-3",
            "↑ dot past the ↑↓ crossing",
            vec![eq(
                "ud",
                one(&[(0, DotUp), (0, CrossUD)]),
                vec![(1, ls(&[(0, CrossUD), (1, DotUp)])), (1, ls(&[(0, CapL), (0, CupL)]))],
            )],
        ),
        rel(
            "dots-4",
            "↓ dot past the ↑↓ crossing",
            vec![eq(
                "ud",
                one(&[(1, DotDown), (0, CrossUD)]),
                vec![(1, ls(&[(0, CrossUD), (0, DotDown)])), (1, ls(&[(0, CapL), (0, CupL)]))],
            )],
        ),
        rel("dots-5", "dot slides over the right cup", vec![eq("", one(&[(0, CupR), (0, DotUp)]), one(&[(0, CupR), (1, DotDown)]))]),
        rel("dots-6", "dot slides over the right cap", vec![eq("du", one(&[(0, DotDown), (0, CapR)]), one(&[(1, DotUp), (0, CapR)]))]),
        rel("dots-7", "dot slides over the left cup", vec![eq("", one(&[(0, CupL), (0, DotDown)]), one(&[(0, CupL), (1, DotUp)]))]),
        rel("dots-8", "dot slides over the left cap", vec![eq("ud", one(&[(0, DotUp), (0, CapL)]), one(&[(1, DotDown), (0, CapL)]))]),
        rel(
            "gen-1",
            "left cup, left cap and ↓ dot in terms of the right generators",
            vec![
                eq("", one(&[(0, CupL)]), one(&[(0, CupR), (0, CrossUD)])),
                eq("ud", one(&[(0, CapL)]), one(&[(0, CrossUD), (0, CapR)])),
                eq("d", one(&[(0, DotDown)]), one(&[(1, CupR), (1, DotUp), (0, CapR)])),
                eq("du", one(&[(0, CrossDU)]), one(&[(2, CupR), (1, CrossUU), (0, CapR)])),
            ],
        ),
    ]
}

/// Looks up a relation by id.
pub fn find_relation(id: &str) -> Result<Relation, StraightenError> {
    relation_catalog()
        .into_iter()
        .find(|r| r.id == id)
        .ok_or_else(|| StraightenError::UnknownRelation(id.to_string()))
}

fn eval_side(engine: &Engine, src: &Word, side: &Side, left: &Word, right: &Word) -> Result<Morphism, StraightenError> {
    let mut total: Option<Morphism> = None;
    for (c, layers) in side {
        let lw = LayerWord::new(src.clone(), layers.clone()).whisker(left, right);
        let m = engine.eval(&lw)?.scaled(&engine.params().field().int(*c));
        total = Some(match total {
            None => m,
            Some(t) => t.plus(&m),
        });
    }
    Ok(total.unwrap_or_else(|| Morphism::zero(src.clone(), src.clone())))
}

impl Engine {
    /// Whether relation `id` holds after whiskering by `1_left` and `1_right`.
    pub fn verify_relation(&self, id: &str, left: &Word, right: &Word) -> Result<bool, StraightenError> {
        let rel = find_relation(id)?;
        for e in &rel.equations {
            let l = eval_side(self, &e.src, &e.lhs, left, right)?;
            let r = eval_side(self, &e.src, &e.rhs, left, right)?;
            if l != r {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Checks every catalog relation in every context `(left, right)` of
    /// total length at most `max_context`. Results follow catalog order, then
    /// context order.
    pub fn verify_all(&self, max_context: usize) -> Vec<RelationCheck> {
        let contexts = whisker_contexts(max_context);
        let mut out = Vec::new();
        for rel in relation_catalog() {
            for (left, right) in &contexts {
                let pass = self.verify_relation(rel.id, left, right).unwrap_or(false);
                out.push(RelationCheck { relation: rel.id.to_string(), left: left.clone(), right: right.clone(), pass });
            }
        }
        out
    }
}

/// All pairs of words with total length at most `n`.
pub fn whisker_contexts(n: usize) -> Vec<(Word, Word)> {
    let words = words_up_to(n);
    let mut out = Vec::new();
    for l in &words {
        for r in &words {
            if l.len() + r.len() <= n {
                out.push((l.clone(), r.clone()));
            }
        }
    }
    out
}
