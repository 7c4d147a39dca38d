//! Degenerate cyclotomic Hecke algebras inside corner algebras.
//!
//! The corner algebra of `↑^r ↓^s` is generated by the images of
//! `H_{ℓ,r}(u) ⊗ H_{ℓ,s}(−u')`: dots give the first Jucys–Murphy elements
//! (with a minus sign on the ↓ factor) and crossings of like-oriented
//! neighbours give the simple transpositions.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::ground::FieldElem;
use crate::straighten::{Engine, Gen, Layer, Morphism};
use crate::towers::CornerAlgebra;
use crate::words::{Dir, Word};

/// Errors from Hecke generator lookups.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HeckeError {
    #[error("generator index {index} out of range 1..={max} on the {side:?} side")]
    Index { index: usize, max: usize, side: Dir },
}

/// A generator of `H_{ℓ,r}(u) ⊗ H_{ℓ,s}(−u')`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeckeGen {
    /// `L_1 ⊗ 1` or `1 ⊗ L_1`.
    L1(Dir),
    /// `S_i ⊗ 1` or `1 ⊗ S_i`.
    S(Dir, usize),
}

/// `↑^r ↓^s`.
pub fn corner_word(r: usize, s: usize) -> Word {
    Word::ups_then_downs(r, s)
}

fn side_len(r: usize, s: usize, side: Dir) -> usize {
    match side {
        Dir::Up => r,
        Dir::Down => s,
    }
}

/// Offset of the first strand of a side in `↑^r ↓^s`.
fn side_offset(r: usize, side: Dir) -> usize {
    match side {
        Dir::Up => 0,
        Dir::Down => r,
    }
}

/// The image of a generator in the corner algebra of `↑^r ↓^s`.
pub fn hecke_generator_image(engine: &Engine, gen: HeckeGen, r: usize, s: usize) -> Result<Morphism, HeckeError> {
    let a = corner_word(r, s);
    let id = Morphism::identity(&a, engine.params().field());
    match gen {
        HeckeGen::L1(side) => {
            let max = side_len(r, s, side);
            if max == 0 {
                return Err(HeckeError::Index { index: 1, max, side });
            }
            let m = engine.apply(&id, &[Layer::new(side_offset(r, side), Gen::dot(side))]);
            Ok(match side {
                Dir::Up => m,
                Dir::Down => m.scaled(&engine.params().field().int(-1)),
            })
        }
        HeckeGen::S(side, i) => {
            let n = side_len(r, s, side);
            if i == 0 || i >= n {
                return Err(HeckeError::Index { index: i, max: n.saturating_sub(1), side });
            }
            Ok(engine.apply(&id, &[Layer::new(side_offset(r, side) + i - 1, Gen::crossing(side, side))]))
        }
    }
}

/// `L_i` on one side, from `L_{i+1} = S_i L_i S_i + S_i`.
pub fn jucys_murphy(engine: &Engine, i: usize, r: usize, s: usize, side: Dir) -> Result<Morphism, HeckeError> {
    let n = side_len(r, s, side);
    if i == 0 || i > n {
        return Err(HeckeError::Index { index: i, max: n, side });
    }
    let corner = CornerAlgebra::new(engine, &corner_word(r, s), usize::MAX).expect("no size limit");
    let mut l = hecke_generator_image(engine, HeckeGen::L1(side), r, s)?;
    for k in 1..i {
        let sk = hecke_generator_image(engine, HeckeGen::S(side, k), r, s)?;
        let sls = corner.mul(engine, &corner.mul(engine, &sk, &l), &sk);
        l = sls.plus(&sk);
    }
    Ok(l)
}

/// One line of a relation report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HeckeCheck {
    pub relation: String,
    pub context: String,
    pub pass: bool,
}

/// `∏_j (x − c_j)` evaluated in the corner algebra.
fn cyclotomic_product(engine: &Engine, corner: &CornerAlgebra, x: &Morphism, charges: &[FieldElem]) -> Morphism {
    let mut acc = corner.unit(engine);
    for c in charges {
        let shifted = x.minus(&corner.unit(engine).scaled(c));
        acc = corner.mul(engine, &acc, &shifted);
    }
    acc
}

/// Checks every defining relation of `H_{ℓ,r}(u) ⊗ H_{ℓ,s}(−u')` on the
/// generator images, plus commutation of the two factors.
pub fn check_hecke_relations(engine: &Engine, r: usize, s: usize) -> Vec<HeckeCheck> {
    let corner = CornerAlgebra::new(engine, &corner_word(r, s), usize::MAX).expect("no size limit");
    let ctx = format!("r={r},s={s}");
    let mut out = Vec::new();
    let mut push = |relation: String, pass: bool| out.push(HeckeCheck { relation, context: ctx.clone(), pass });
    let mul = |x: &Morphism, y: &Morphism| corner.mul(engine, x, y);
    let one = corner.unit(engine);

    let mut all_gens: Vec<(Dir, Vec<Morphism>)> = Vec::new();
    for side in [Dir::Up, Dir::Down] {
        let n = side_len(r, s, side);
        if n == 0 {
            continue;
        }
        let tag = if side == Dir::Up { "up" } else { "down" };
        let l1 = hecke_generator_image(engine, HeckeGen::L1(side), r, s).expect("n ≥ 1");
        let gens: Vec<Morphism> =
            (1..n).map(|i| hecke_generator_image(engine, HeckeGen::S(side, i), r, s).expect("in range")).collect();

        let charges: Vec<FieldElem> = match side {
            Dir::Up => engine.params().u().to_vec(),
            Dir::Down => engine.params().uprime().iter().map(|c| -c).collect(),
        };
        push(format!("cyclotomic f(L1_{tag}) = 0"), cyclotomic_product(engine, &corner, &l1, &charges).is_zero());

        for (i, si) in gens.iter().enumerate() {
            push(format!("S{}_{tag}^2 = 1", i + 1), mul(si, si) == one);
        }
        for i in 0..gens.len().saturating_sub(1) {
            let (a, b) = (&gens[i], &gens[i + 1]);
            push(format!("braid S{}S{}S{}_{tag}", i + 1, i + 2, i + 1), mul(&mul(a, b), a) == mul(&mul(b, a), b));
        }
        for i in 0..gens.len() {
            for j in i + 2..gens.len() {
                push(format!("S{}S{}_{tag} commute", i + 1, j + 1), mul(&gens[i], &gens[j]) == mul(&gens[j], &gens[i]));
            }
        }
        for (i, si) in gens.iter().enumerate().skip(1) {
            push(format!("L1 S{}_{tag} commute", i + 1), mul(&l1, si) == mul(si, &l1));
        }
        if let Some(s1) = gens.first() {
            let t = mul(&mul(s1, &l1), s1).plus(s1);
            push(format!("(S1 L1 S1 + S1) L1 = L1 (S1 L1 S1 + S1)_{tag}"), mul(&t, &l1) == mul(&l1, &t));
        }
        let mut g = vec![l1];
        g.extend(gens);
        all_gens.push((side, g));
    }
    if all_gens.len() == 2 {
        let (up, down) = (&all_gens[0].1, &all_gens[1].1);
        let pass = up.iter().all(|x| down.iter().all(|y| mul(x, y) == mul(y, x)));
        push("up and down factors commute".to_string(), pass);
    }
    out
}

/// Images of the standard spanning set `{L^α w}` of each factor, multiplied
/// across the two factors.
pub fn standard_images(engine: &Engine, r: usize, s: usize) -> Vec<Morphism> {
    let corner = CornerAlgebra::new(engine, &corner_word(r, s), usize::MAX).expect("no size limit");
    let level = engine.level();
    let mut factors: Vec<Vec<Morphism>> = Vec::new();
    for side in [Dir::Up, Dir::Down] {
        let n = side_len(r, s, side);
        let ls: Vec<Morphism> = (1..=n).map(|i| jucys_murphy(engine, i, r, s, side).expect("in range")).collect();
        let gens: Vec<Morphism> =
            (1..n).map(|i| hecke_generator_image(engine, HeckeGen::S(side, i), r, s).expect("in range")).collect();
        let perms = permutation_elements(engine, &corner, &gens, n);
        let mut monos = vec![corner.unit(engine)];
        for l in &ls {
            let mut next = Vec::new();
            for m in &monos {
                let mut p = m.clone();
                for _ in 0..level {
                    next.push(p.clone());
                    p = corner.mul(engine, &p, l);
                }
            }
            monos = next;
        }
        let mut side_elems = Vec::new();
        for m in &monos {
            for w in &perms {
                side_elems.push(corner.mul(engine, m, w));
            }
        }
        factors.push(side_elems);
    }
    let mut out = Vec::new();
    for x in &factors[0] {
        for y in &factors[1] {
            out.push(corner.mul(engine, x, y));
        }
    }
    out
}

/// One element per permutation of `n` letters, as a product of the
/// transposition images `gens` along a shortest word.
fn permutation_elements(engine: &Engine, corner: &CornerAlgebra, gens: &[Morphism], n: usize) -> Vec<Morphism> {
    let start: Vec<usize> = (0..n).collect();
    let mut seen: BTreeMap<Vec<usize>, Morphism> = BTreeMap::new();
    seen.insert(start.clone(), corner.unit(engine));
    let mut queue = VecDeque::from([start]);
    while let Some(p) = queue.pop_front() {
        let elem = seen[&p].clone();
        for (i, g) in gens.iter().enumerate() {
            let mut q = p.clone();
            q.swap(i, i + 1);
            if !seen.contains_key(&q) {
                seen.insert(q.clone(), corner.mul(engine, &elem, g));
                queue.push_back(q);
            }
        }
    }
    seen.into_values().collect()
}
