//! A combinatorial model of the Grothendieck group: weights over the residue
//! set, the Cartan matrix, the operators `e_i`, `f_i` on formal combinations
//! of bipartitions, and the semisimplicity criterion.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::combinatorics::{add_cell, addable_removable, content, remove_cell, Bipartition};
use crate::ground::{Field, FieldElem, Params};
use crate::linalg::Matrix;
use crate::words::Dir;

/// `2` on the diagonal, `−1` between neighbours (`−2` in characteristic 2,
/// where `i + 1 = i − 1`), `0` otherwise.
pub fn cartan(i: &FieldElem, j: &FieldElem, params: &Params) -> i64 {
    let f = params.field();
    if i == j {
        return 2;
    }
    let one = f.one();
    let up = i == &(j + &one);
    let down = i == &(j - &one);
    if f.characteristic() == 2 && (up || down) {
        -2
    } else if up || down {
        -1
    } else {
        0
    }
}

/// A weight `Σ fund(i) ω_i + Σ roots(i) α_i` with finite support.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Weight {
    pub fund: BTreeMap<FieldElem, i64>,
    pub roots: BTreeMap<FieldElem, i64>,
}

fn bump(map: &mut BTreeMap<FieldElem, i64>, key: &FieldElem, by: i64) {
    let e = map.entry(key.clone()).or_insert(0);
    *e += by;
    if *e == 0 {
        map.remove(key);
    }
}

impl Weight {
    pub fn zero() -> Self {
        Weight::default()
    }

    pub fn add_fund(&mut self, i: &FieldElem, k: i64) {
        bump(&mut self.fund, i, k);
    }

    pub fn add_root(&mut self, i: &FieldElem, k: i64) {
        bump(&mut self.roots, i, k);
    }

    pub fn plus(&self, other: &Weight) -> Weight {
        let mut w = self.clone();
        for (k, v) in &other.fund {
            w.add_fund(k, *v);
        }
        for (k, v) in &other.roots {
            w.add_root(k, *v);
        }
        w
    }

    pub fn minus(&self, other: &Weight) -> Weight {
        let mut w = self.clone();
        for (k, v) in &other.fund {
            w.add_fund(k, -v);
        }
        for (k, v) in &other.roots {
            w.add_root(k, -v);
        }
        w
    }

    /// `⟨h_i, self⟩ = fund(i) + Σ_j roots(j)·a_{ij}`.
    pub fn pairing(&self, i: &FieldElem, params: &Params) -> i64 {
        let f = self.fund.get(i).copied().unwrap_or(0);
        f + self.roots.iter().map(|(j, k)| k * cartan(i, j, params)).sum::<i64>()
    }

    /// `{"fund": {...}, "roots": {...}}` with residues as string keys.
    pub fn to_json(&self) -> serde_json::Value {
        let side = |m: &BTreeMap<FieldElem, i64>| {
            serde_json::Value::Object(m.iter().map(|(k, v)| (k.to_string(), serde_json::json!(v))).collect())
        };
        serde_json::json!({ "fund": side(&self.fund), "roots": side(&self.roots) })
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, v) in &self.fund {
            parts.push(format!("{v}ω_{k}"));
        }
        for (k, v) in &self.roots {
            parts.push(format!("{v}α_{k}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `(wt↓, wt↑)` with `wt↑ = ω_u − Σ_{x ∈ λ↑} α_{c(x)}` and
/// `wt↓ = −ω_{u'} + Σ_{y ∈ λ↓} α_{c(y)}`.
pub fn wt(lambda: &Bipartition, params: &Params) -> (Weight, Weight) {
    let mut up = Weight::zero();
    for c in params.u() {
        up.add_fund(c, 1);
    }
    for (j, l, k) in lambda.up.cells() {
        up.add_root(&content(crate::combinatorics::Cell::new(Dir::Up, j, l, k), params), -1);
    }
    let mut down = Weight::zero();
    for c in params.uprime() {
        down.add_fund(c, -1);
    }
    for (j, l, k) in lambda.down.cells() {
        down.add_root(&content(crate::combinatorics::Cell::new(Dir::Down, j, l, k), params), 1);
    }
    (down, up)
}

/// `λ ≤ μ` in dominance order: `μ − λ ∈ Σ ℕ α_i`.
pub fn dominance_leq(lambda: &Weight, mu: &Weight) -> bool {
    let d = mu.minus(lambda);
    d.fund.is_empty() && d.roots.values().all(|&v| v >= 0)
}

/// `x ⪯ y` iff `x↓ + x↑ = y↓ + y↑` and `x↓ ≤ y↓`.
pub fn inverse_dominance_leq(x: &(Weight, Weight), y: &(Weight, Weight)) -> bool {
    x.0.plus(&x.1) == y.0.plus(&y.1) && dominance_leq(&x.0, &y.0)
}

/// A finite rational combination of bipartitions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KVector {
    pub terms: BTreeMap<Bipartition, FieldElem>,
    /// Set when an operator dropped terms above the truncation.
    pub truncated: bool,
}

impl KVector {
    pub fn zero() -> Self {
        KVector::default()
    }

    pub fn basis(lambda: Bipartition) -> Self {
        let mut v = KVector::zero();
        v.add(lambda, &Field::RATIONALS.one());
        v
    }

    pub fn add(&mut self, lambda: Bipartition, c: &FieldElem) {
        let e = self.terms.entry(lambda.clone()).or_insert_with(|| Field::RATIONALS.zero());
        *e += c;
        if e.is_zero() {
            self.terms.remove(&lambda);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn minus(&self, other: &KVector) -> KVector {
        let mut v = self.clone();
        for (k, c) in &other.terms {
            v.add(k.clone(), &-c);
        }
        v.truncated = self.truncated || other.truncated;
        v
    }

    pub fn coeff(&self, lambda: &Bipartition) -> FieldElem {
        self.terms.get(lambda).cloned().unwrap_or_else(|| Field::RATIONALS.zero())
    }

    /// `[{"shape": [λ↓, λ↑], "coeff": "p/q"}, …]`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(k, c)| serde_json::json!({ "shape": k.to_json(), "coeff": c.to_string() }))
                .collect(),
        )
    }
}

/// `e` or `f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Op {
    E,
    F,
}

/// Which half of the tensor product an operator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sector {
    Total,
    Up,
    Down,
}

/// Applies `op_i` on `sector` to `v`, dropping terms with more than `limit`
/// boxes.
///
/// `f_i↑` adds an `i`-cell to `λ↑`, `f_i↓` removes one from `λ↓`, `e_i↑`
/// removes one from `λ↑` and `e_i↓` adds one to `λ↓`.
pub fn apply_op(op: Op, sector: Sector, i: &FieldElem, v: &KVector, params: &Params, limit: usize) -> KVector {
    let mut out = KVector { terms: BTreeMap::new(), truncated: v.truncated };
    for (lambda, c) in &v.terms {
        let ar = addable_removable(lambda, i, params);
        let mut targets = Vec::new();
        let up = matches!(sector, Sector::Total | Sector::Up);
        let down = matches!(sector, Sector::Total | Sector::Down);
        match op {
            Op::F => {
                if up {
                    targets.extend(ar.up_addable.iter().map(|&x| add_cell(lambda, x)));
                }
                if down {
                    targets.extend(ar.down_removable.iter().map(|&x| remove_cell(lambda, x)));
                }
            }
            Op::E => {
                if up {
                    targets.extend(ar.up_removable.iter().map(|&x| remove_cell(lambda, x)));
                }
                if down {
                    targets.extend(ar.down_addable.iter().map(|&x| add_cell(lambda, x)));
                }
            }
        }
        for t in targets {
            if t.size() > limit {
                out.truncated = true;
            } else {
                out.add(t, c);
            }
        }
    }
    out
}

/// Residues `u_j + n`, `u'_j + n` for `|n| ≤ window`.
pub fn residue_window(params: &Params, window: usize) -> Vec<FieldElem> {
    let f = params.field();
    let mut set = BTreeSet::new();
    for c in params.u().iter().chain(params.uprime()) {
        for n in -(window as i64)..=(window as i64) {
            set.insert(c + &f.int(n));
        }
    }
    set.into_iter().collect()
}

/// A bipartition on which `[e_i, f_j]` disagrees with the expected scalar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutatorFailure {
    pub i: FieldElem,
    pub j: FieldElem,
    pub lambda: Bipartition,
    pub expected: i64,
    pub got: KVector,
}

/// Checks `(e_i f_j − f_j e_i)(λ) = δ_{ij} ⟨h_i, wt↓(λ) + wt↑(λ)⟩ λ` for all
/// `|λ| ≤ n`.
pub fn commutator_check(i: &FieldElem, j: &FieldElem, n: usize, params: &Params) -> Vec<CommutatorFailure> {
    let mut failures = Vec::new();
    let unbounded = usize::MAX;
    for lambda in Bipartition::all_up_to(n, params.level()) {
        let v = KVector::basis(lambda.clone());
        let ef = apply_op(Op::E, Sector::Total, i, &apply_op(Op::F, Sector::Total, j, &v, params, unbounded), params, unbounded);
        let fe = apply_op(Op::F, Sector::Total, j, &apply_op(Op::E, Sector::Total, i, &v, params, unbounded), params, unbounded);
        let got = ef.minus(&fe);
        let expected = if i == j {
            let (d, u) = wt(&lambda, params);
            d.plus(&u).pairing(i, params)
        } else {
            0
        };
        let mut want = KVector::zero();
        want.add(lambda.clone(), &Field::RATIONALS.int(expected));
        if got != want {
            failures.push(CommutatorFailure { i: i.clone(), j: j.clone(), lambda, expected, got });
        }
    }
    failures
}

/// Matrix of `op_i` on `sector` in the basis of bipartitions with at most
/// `n` boxes (column = source).
pub fn op_matrix(op: Op, sector: Sector, i: &FieldElem, n: usize, params: &Params) -> (Vec<Bipartition>, Matrix) {
    let basis = Bipartition::all_up_to(n, params.level());
    let index: BTreeMap<&Bipartition, usize> = basis.iter().enumerate().map(|(k, b)| (b, k)).collect();
    let mut m = Matrix::zeros(Field::RATIONALS, basis.len(), basis.len());
    for (col, b) in basis.iter().enumerate() {
        let img = apply_op(op, sector, i, &KVector::basis(b.clone()), params, n);
        for (t, c) in &img.terms {
            m.set(index[t], col, c.clone());
        }
    }
    (basis, m)
}

/// Outcome of the semisimplicity criterion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemisimpleVerdict {
    pub semisimple: bool,
    pub reasons: Vec<String>,
}

/// Semisimple iff no `u_i − u'_j` lies in `ℤ·1`, and in characteristic 0
/// additionally no `u_i − u_j` or `u'_i − u'_j` (`i < j`) is an integer.
pub fn semisimple_check(params: &Params) -> SemisimpleVerdict {
    let f = params.field();
    let (u, up) = (params.u(), params.uprime());
    let mut reasons = Vec::new();
    for (i, a) in u.iter().enumerate() {
        for (j, b) in up.iter().enumerate() {
            let d = a - b;
            if f.is_integral(&d) {
                reasons.push(format!("u_{} - u'_{} = {} lies in Z·1", i + 1, j + 1, d));
            }
        }
    }
    if f.characteristic() == 0 {
        for (name, list) in [("u", u), ("u'", up)] {
            for i in 0..list.len() {
                for j in i + 1..list.len() {
                    let d = &list[i] - &list[j];
                    if f.is_integral(&d) {
                        reasons.push(format!("{name}_{} - {name}_{} = {} is an integer", i + 1, j + 1, d));
                    }
                }
            }
        }
    }
    SemisimpleVerdict { semisimple: reasons.is_empty(), reasons }
}

/// Whether `λ` indexes a simple module, when that is decidable here.
///
/// In the semisimple regime every bipartition does. At level 1 both sides
/// must be `e`-restricted (consecutive parts differ by less than `e`, with
/// `e = p`, or no bound in characteristic 0). Other cases are undetermined.
pub fn restricted_flag(lambda: &Bipartition, params: &Params) -> Option<bool> {
    if semisimple_check(params).semisimple {
        return Some(true);
    }
    if params.level() != 1 {
        return None;
    }
    let e = params.field().characteristic() as usize;
    if e == 0 {
        return Some(true);
    }
    let restricted = |parts: &[usize]| {
        parts.iter().zip(parts.iter().skip(1).chain(std::iter::once(&0))).all(|(a, b)| a - b < e)
    };
    Some([Dir::Up, Dir::Down].iter().all(|&d| restricted(&lambda.side(d).components()[0])))
}

/// The charges grouped into classes modulo `ℤ·1`, and the resulting Lie
/// algebra shape.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    pub orbits: Vec<Vec<String>>,
    pub algebra: String,
}

pub fn orbit_decomposition(params: &Params) -> OrbitReport {
    let f = params.field();
    let labelled: Vec<(String, FieldElem)> = params
        .u()
        .iter()
        .enumerate()
        .map(|(i, c)| (format!("u_{}={}", i + 1, c), c.clone()))
        .chain(params.uprime().iter().enumerate().map(|(i, c)| (format!("u'_{}={}", i + 1, c), c.clone())))
        .collect();
    let mut orbits: Vec<(FieldElem, Vec<String>)> = Vec::new();
    for (label, c) in labelled {
        match orbits.iter_mut().find(|(rep, _)| f.is_integral(&(rep - &c))) {
            Some((_, members)) => members.push(label),
            None => orbits.push((c, vec![label])),
        }
    }
    let k = orbits.len();
    let algebra = match f.characteristic() {
        0 => format!("{k} cop{} of sl_inf", if k == 1 { "y" } else { "ies" }),
        p => format!("{k} cop{} of affine sl_{p}", if k == 1 { "y" } else { "ies" }),
    };
    OrbitReport { orbits: orbits.into_iter().map(|(_, m)| m).collect(), algebra }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: u64, u: &[&str], up: &[&str]) -> Params {
        Params::new(u.len(), p, u, up).unwrap()
    }

    #[test]
    fn cartan_examples() {
        let q = params(0, &["0"], &["5"]);
        let f = q.field();
        assert_eq!(cartan(&f.int(0), &f.int(0), &q), 2);
        assert_eq!(cartan(&f.int(0), &f.int(1), &q), -1);
        assert_eq!(cartan(&f.int(0), &f.int(3), &q), 0);
        let two = params(2, &["0"], &["1"]);
        let g = two.field();
        assert_eq!(cartan(&g.int(0), &g.int(1), &two), -2);
    }

    #[test]
    fn wt_examples() {
        let p = params(0, &["0"], &["5"]);
        let f = p.field();
        let (d, u) = wt(&Bipartition::empty(1), &p);
        assert_eq!(d.fund.get(&f.int(5)), Some(&-1));
        assert_eq!(u.fund.get(&f.int(0)), Some(&1));
        let (_, u1) = wt(&Bipartition::parse("[[], [[1]]]", 1).unwrap(), &p);
        assert_eq!(u1.roots.get(&f.int(0)), Some(&-1));
        let (d1, _) = wt(&Bipartition::parse("[[[1]], []]", 1).unwrap(), &p);
        assert_eq!(d1.roots.get(&f.int(5)), Some(&1));
    }

    #[test]
    fn inverse_dominance_examples() {
        let p = params(0, &["0"], &["0"]);
        let x = wt(&Bipartition::parse("[[], [[1]]]", 1).unwrap(), &p);
        let y = wt(&Bipartition::parse("[[[1]], []]", 1).unwrap(), &p);
        assert!(inverse_dominance_leq(&x, &x));
        // Totals: both equal ω_0 − ω_0 ± α_0, which differ.
        assert!(!inverse_dominance_leq(&x, &y));
        let e = wt(&Bipartition::empty(1), &p);
        let both = wt(&Bipartition::parse("[[[1]], [[1]]]", 1).unwrap(), &p);
        assert!(inverse_dominance_leq(&e, &both));
        assert!(!inverse_dominance_leq(&both, &e));
    }

    #[test]
    fn apply_op_examples() {
        let p = params(0, &["0"], &["5"]);
        let f = p.field();
        let e = KVector::basis(Bipartition::empty(1));
        let f0 = apply_op(Op::F, Sector::Total, &f.int(0), &e, &p, 4);
        assert_eq!(f0, KVector::basis(Bipartition::parse("[[], [[1]]]", 1).unwrap()));
        assert!(apply_op(Op::E, Sector::Total, &f.int(0), &e, &p, 4).is_zero());
        assert!(apply_op(Op::F, Sector::Total, &f.int(5), &e, &p, 4).is_zero());
        let e5 = apply_op(Op::E, Sector::Total, &f.int(5), &e, &p, 4);
        assert_eq!(e5, KVector::basis(Bipartition::parse("[[[1]], []]", 1).unwrap()));
    }

    #[test]
    fn commutator_examples() {
        let p = params(0, &["0"], &["5"]);
        let f = p.field();
        assert!(commutator_check(&f.int(0), &f.int(0), 0, &p).is_empty());
        assert!(commutator_check(&f.int(0), &f.int(1), 0, &p).is_empty());
        let (d, u) = wt(&Bipartition::empty(1), &p);
        assert_eq!(d.plus(&u).pairing(&f.int(0), &p), 1);
    }

    #[test]
    fn semisimple_examples() {
        assert!(semisimple_check(&params(0, &["0"], &["1/2"])).semisimple);
        let v = semisimple_check(&params(0, &["0"], &["3"]));
        assert!(!v.semisimple && v.reasons[0].contains("u_1 - u'_1"));
        let v = semisimple_check(&params(0, &["0", "1"], &["1/2", "7/3"]));
        assert!(!v.semisimple);
        assert_eq!(v.reasons.len(), 1);
        assert!(v.reasons[0].starts_with("u_1 - u_2"));
    }

    #[test]
    fn orbit_examples() {
        let r = orbit_decomposition(&params(0, &["0"], &["3"]));
        assert_eq!(r.orbits.len(), 1);
        assert!(r.algebra.contains("sl_inf"));
        assert_eq!(orbit_decomposition(&params(0, &["0"], &["1/2"])).orbits.len(), 2);
        let r5 = orbit_decomposition(&params(5, &["0"], &["3"]));
        assert_eq!(r5.orbits.len(), 1);
        assert!(r5.algebra.contains("affine sl_5"));
    }

    #[test]
    fn restricted_flag_cases() {
        let generic = params(0, &["0"], &["1/2"]);
        let big = Bipartition::parse("[[[3]], [[2, 2]]]", 1).unwrap();
        assert_eq!(restricted_flag(&big, &generic), Some(true));
        let p3 = params(3, &["0"], &["1"]);
        assert_eq!(restricted_flag(&big, &p3), Some(false));
        let ok = Bipartition::parse("[[[2, 1]], [[1, 1]]]", 1).unwrap();
        assert_eq!(restricted_flag(&ok, &p3), Some(true));
        let level2 = Params::new(2, 0, &["0", "1"], &["0", "1"]).unwrap();
        assert_eq!(restricted_flag(&Bipartition::empty(2), &level2), None);
    }
}
