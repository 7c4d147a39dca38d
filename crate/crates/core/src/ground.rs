//! Exact scalars, parameter validation, the cyclotomic polynomials `f`, `f'`
//! and the bubble series `δ`, `δ'`.
//!
//! Scalars live either in ℚ or in a prime field 𝔽_p. A [`Field`] value names
//! the ambient field; [`FieldElem`] values carry enough information to do
//! arithmetic on their own, and mixing elements of different fields panics.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::words::Dir;

/// Errors raised while building parameters or parsing scalars.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroundError {
    #[error("level must be at least 1")]
    ZeroLevel,
    #[error("expected {expected} charges in {which}, found {found}")]
    LengthMismatch { which: &'static str, expected: usize, found: usize },
    #[error("characteristic {0} is neither 0 nor prime")]
    NotPrime(u64),
    #[error("cannot parse {0:?} as a field element")]
    Parse(String),
    #[error("division by zero")]
    DivisionByZero,
}

/// The ground field: ℚ when `p == 0`, otherwise 𝔽_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Field {
    p: u64,
}

impl Field {
    /// The rational numbers.
    pub const RATIONALS: Field = Field { p: 0 };

    /// Builds the field of characteristic `p`, rejecting composite `p`.
    pub fn new(p: u64) -> Result<Self, GroundError> {
        if p == 0 || is_prime(p) {
            Ok(Field { p })
        } else {
            Err(GroundError::NotPrime(p))
        }
    }

    /// The characteristic.
    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn zero(&self) -> FieldElem {
        self.int(0)
    }

    pub fn one(&self) -> FieldElem {
        self.int(1)
    }

    /// The image of an integer.
    pub fn int(&self, n: i64) -> FieldElem {
        if self.p == 0 {
            FieldElem::Rat(BigRational::from_integer(BigInt::from(n)))
        } else {
            let p = self.p as i128;
            FieldElem::Mod { value: (n as i128).rem_euclid(p) as u64, p: self.p }
        }
    }

    /// Parses `"a"`, `"-a"` or `"a/b"`. In characteristic `p` the fraction is
    /// reduced modulo `p`.
    pub fn parse(&self, s: &str) -> Result<FieldElem, GroundError> {
        let t = s.trim();
        let bad = || GroundError::Parse(s.to_string());
        let (num, den) = match t.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (t, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(GroundError::DivisionByZero);
        }
        if self.p == 0 {
            return Ok(FieldElem::Rat(BigRational::new(num, den)));
        }
        let p = BigInt::from(self.p);
        let n = self.elem_of_bigint(&num.mod_floor(&p));
        let d = self.elem_of_bigint(&den.mod_floor(&p));
        n.checked_div(&d).ok_or(GroundError::DivisionByZero)
    }

    fn elem_of_bigint(&self, n: &BigInt) -> FieldElem {
        let p = BigInt::from(self.p);
        let v = n.mod_floor(&p).to_u64().expect("reduced residue fits in u64");
        FieldElem::Mod { value: v, p: self.p }
    }

    /// Whether `x` is an integer multiple of the identity, i.e. lies in ℤ·1.
    pub fn is_integral(&self, x: &FieldElem) -> bool {
        match x {
            FieldElem::Rat(r) => r.is_integer(),
            FieldElem::Mod { .. } => true,
        }
    }
}

/// A field element of ℚ or 𝔽_p.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldElem {
    Rat(BigRational),
    Mod { value: u64, p: u64 },
}

impl FieldElem {
    /// The field this element belongs to.
    pub fn field(&self) -> Field {
        match self {
            FieldElem::Rat(_) => Field::RATIONALS,
            FieldElem::Mod { p, .. } => Field { p: *p },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Rat(r) => r.is_zero(),
            FieldElem::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElem::Rat(r) => r.is_one(),
            FieldElem::Mod { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse, or `None` for zero.
    pub fn inverse(&self) -> Option<FieldElem> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            FieldElem::Rat(r) => FieldElem::Rat(r.recip()),
            FieldElem::Mod { value, p } => {
                FieldElem::Mod { value: pow_mod(*value, p - 2, *p), p: *p }
            }
        })
    }

    pub fn checked_div(&self, other: &FieldElem) -> Option<FieldElem> {
        other.inverse().map(|inv| self * &inv)
    }

    /// Integer power with non-negative exponent.
    pub fn pow(&self, mut e: u32) -> FieldElem {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Returns `Some(n)` when the element is the image of the integer `n`
    /// (always the least non-negative residue in characteristic `p`).
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            FieldElem::Rat(r) if r.is_integer() => r.to_integer().to_i64(),
            FieldElem::Rat(_) => None,
            FieldElem::Mod { value, .. } => i64::try_from(*value).ok(),
        }
    }
}

impl fmt::Display for FieldElem {
    /// `"p/q"` with `q > 0` (denominator omitted when 1) in characteristic 0,
    /// and the least residue in characteristic `p`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Rat(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            FieldElem::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

impl PartialOrd for FieldElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElem {
    /// A total order used only for deterministic output.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (FieldElem::Rat(a), FieldElem::Rat(b)) => a.cmp(b),
            (FieldElem::Mod { value: a, p: pa }, FieldElem::Mod { value: b, p: pb }) => {
                (pa, a).cmp(&(pb, b))
            }
            (FieldElem::Rat(_), FieldElem::Mod { .. }) => Ordering::Less,
            (FieldElem::Mod { .. }, FieldElem::Rat(_)) => Ordering::Greater,
        }
    }
}

fn mismatch() -> ! {
    panic!("arithmetic between elements of different fields")
}

impl Add for &FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &FieldElem) -> FieldElem {
        match (self, rhs) {
            (FieldElem::Rat(a), FieldElem::Rat(b)) => FieldElem::Rat(a + b),
            (FieldElem::Mod { value: a, p }, FieldElem::Mod { value: b, p: q }) if p == q => {
                FieldElem::Mod { value: ((*a as u128 + *b as u128) % *p as u128) as u64, p: *p }
            }
            _ => mismatch(),
        }
    }
}

impl Sub for &FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &FieldElem) -> FieldElem {
        self + &(-rhs)
    }
}

impl Mul for &FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: &FieldElem) -> FieldElem {
        match (self, rhs) {
            (FieldElem::Rat(a), FieldElem::Rat(b)) => FieldElem::Rat(a * b),
            (FieldElem::Mod { value: a, p }, FieldElem::Mod { value: b, p: q }) if p == q => {
                FieldElem::Mod { value: ((*a as u128 * *b as u128) % *p as u128) as u64, p: *p }
            }
            _ => mismatch(),
        }
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        match self {
            FieldElem::Rat(a) => FieldElem::Rat(-a),
            FieldElem::Mod { value, p } => FieldElem::Mod { value: (p - value) % p, p: *p },
        }
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: FieldElem) -> FieldElem {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: &FieldElem) -> FieldElem {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&FieldElem> for FieldElem {
    fn add_assign(&mut self, rhs: &FieldElem) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&FieldElem> for FieldElem {
    fn sub_assign(&mut self, rhs: &FieldElem) {
        *self = &*self - rhs;
    }
}

impl Serialize for FieldElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc: u128 = 1;
    let m = p as u128;
    let mut base = (b % p) as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    b = acc as u64;
    b
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Level, field and the two charge sequences `u`, `u'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Params {
    field: Field,
    u: Vec<FieldElem>,
    uprime: Vec<FieldElem>,
}

impl Params {
    /// Validates and builds parameters from charge strings.
    pub fn new(level: usize, char_p: u64, u: &[&str], uprime: &[&str]) -> Result<Self, GroundError> {
        let field = Field::new(char_p)?;
        let parse = |xs: &[&str]| xs.iter().map(|x| field.parse(x)).collect::<Result<Vec<_>, _>>();
        Self::from_elems(level, field, parse(u)?, parse(uprime)?)
    }

    /// Builds parameters from already parsed charges.
    pub fn from_elems(
        level: usize,
        field: Field,
        u: Vec<FieldElem>,
        uprime: Vec<FieldElem>,
    ) -> Result<Self, GroundError> {
        if level == 0 {
            return Err(GroundError::ZeroLevel);
        }
        if u.len() != level {
            return Err(GroundError::LengthMismatch { which: "u", expected: level, found: u.len() });
        }
        if uprime.len() != level {
            return Err(GroundError::LengthMismatch {
                which: "uprime",
                expected: level,
                found: uprime.len(),
            });
        }
        if u.iter().chain(&uprime).any(|x| x.field() != field) {
            return Err(GroundError::Parse("charge from a different field".into()));
        }
        Ok(Params { field, u, uprime })
    }

    pub fn level(&self) -> usize {
        self.u.len()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn u(&self) -> &[FieldElem] {
        &self.u
    }

    pub fn uprime(&self) -> &[FieldElem] {
        &self.uprime
    }

    /// Charges governing dots of the given orientation: `u` for ↑, `u'` for ↓.
    pub fn charges(&self, dir: Dir) -> &[FieldElem] {
        match dir {
            Dir::Up => &self.u,
            Dir::Down => &self.uprime,
        }
    }
}

/// Monic coefficients `c_0, …, c_ℓ` of `∏ (x − e_i)`.
pub fn poly_from_roots(field: Field, roots: &[FieldElem]) -> Vec<FieldElem> {
    let mut c = vec![field.one()];
    for r in roots {
        let mut next = vec![field.zero(); c.len() + 1];
        for (i, ci) in c.iter().enumerate() {
            next[i + 1] += ci;
            next[i] -= &(ci * r);
        }
        c = next;
    }
    c
}

/// Coefficients of `f` (for ↑) or `f'` (for ↓), constant term first.
pub fn cyclo_poly(params: &Params, dir: Dir) -> Vec<FieldElem> {
    poly_from_roots(params.field, params.charges(dir))
}

/// Reduces `x^k` modulo the monic polynomial `poly`, returning the
/// coefficients of the remainder (length `deg poly`).
pub fn reduce_power(poly: &[FieldElem], k: usize) -> Vec<FieldElem> {
    let field = poly[0].field();
    let deg = poly.len() - 1;
    let mut rem = vec![field.zero(); deg.max(1)];
    if deg == 0 {
        return vec![];
    }
    if k < deg {
        rem[k] = field.one();
        return rem;
    }
    rem[deg - 1] = field.one();
    // rem currently represents x^(deg-1); multiply by x repeatedly.
    for _ in deg - 1..k {
        let top = rem[deg - 1].clone();
        for i in (1..deg).rev() {
            rem[i] = &rem[i - 1] - &(&top * &poly[i]);
        }
        rem[0] = -(&top * &poly[0]);
    }
    rem
}

/// The bubble values `δ_1..δ_n` and `δ'_1..δ'_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesCoeffs {
    pub deltas: Vec<FieldElem>,
    pub deltaprimes: Vec<FieldElem>,
}

/// Power-series quotient `num / den` truncated to degree `n` (inclusive);
/// `den` must have constant term 1.
fn series_div(num: &[FieldElem], den: &[FieldElem], n: usize) -> Vec<FieldElem> {
    let field = den[0].field();
    let at = |v: &[FieldElem], i: usize| v.get(i).cloned().unwrap_or_else(|| field.zero());
    let mut q: Vec<FieldElem> = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut acc = at(num, i);
        for j in 1..=i.min(den.len().saturating_sub(1)) {
            acc -= &(&den[j] * &q[i - j]);
        }
        q.push(acc);
    }
    q
}

/// Reversed coefficients of `∏ (x − e_i)`, i.e. `∏ (1 − e_i t)` in `t = 1/x`.
fn reversed(poly: &[FieldElem]) -> Vec<FieldElem> {
    poly.iter().rev().cloned().collect()
}

/// Computes `δ_i` from `1 + Σ δ_i t^i = f'/f` and `δ'_j` from
/// `(1 + Σ δ_i t^i)(1 − Σ δ'_j t^j) = 1`, both up to order `n`.
pub fn delta_series(params: &Params, n: usize) -> SeriesCoeffs {
    let f = reversed(&cyclo_poly(params, Dir::Up));
    let fp = reversed(&cyclo_poly(params, Dir::Down));
    let d = series_div(&fp, &f, n);
    let e = series_div(&f, &fp, n);
    SeriesCoeffs {
        deltas: d[1..].to_vec(),
        deltaprimes: e[1..].iter().map(|x| -x).collect(),
    }
}

/// Lazily extended cache of the bubble series for one parameter set.
#[derive(Debug)]
pub struct SeriesCache {
    params: Params,
    inner: RwLock<SeriesCoeffs>,
}

impl SeriesCache {
    pub fn new(params: Params, initial: usize) -> Self {
        let inner = RwLock::new(delta_series(&params, initial.max(1)));
        SeriesCache { params, inner }
    }

    fn ensure(&self, i: usize) {
        if self.inner.read().expect("series lock").deltas.len() >= i {
            return;
        }
        let fresh = delta_series(&self.params, (2 * i).max(8));
        let mut guard = self.inner.write().expect("series lock");
        if guard.deltas.len() < fresh.deltas.len() {
            *guard = fresh;
        }
    }

    /// `δ_i`, for `i ≥ 1`.
    pub fn delta(&self, i: usize) -> FieldElem {
        self.ensure(i);
        self.inner.read().expect("series lock").deltas[i - 1].clone()
    }

    /// `δ'_i`, for `i ≥ 1`.
    pub fn delta_prime(&self, i: usize) -> FieldElem {
        self.ensure(i);
        self.inner.read().expect("series lock").deltaprimes[i - 1].clone()
    }
}

/// Evaluates a polynomial given by its coefficients at `x`.
pub fn eval_poly(poly: &[FieldElem], x: &FieldElem) -> FieldElem {
    poly.iter().rev().fold(x.field().zero(), |acc, c| &(&acc * x) + c)
}

/// Converts a rational element to a `BigRational` when possible.
pub fn as_rational(x: &FieldElem) -> Option<&BigRational> {
    match x {
        FieldElem::Rat(r) => Some(r),
        FieldElem::Mod { .. } => None,
    }
}

/// Whether `x` is a strictly negative rational.
pub fn is_negative(x: &FieldElem) -> bool {
    as_rational(x).map(|r| r.is_negative()).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2() -> Params {
        Params::new(2, 0, &["0", "2"], &["0", "1"]).unwrap()
    }

    fn strs(v: &[FieldElem]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn make_params_examples() {
        assert_eq!(Params::new(1, 0, &["0"], &["0"]).unwrap().level(), 1);
        assert_eq!(p2().level(), 2);
        let p = Params::new(1, 5, &["3"], &["1"]).unwrap();
        assert_eq!(p.field().characteristic(), 5);
        assert!(matches!(Params::new(1, 4, &["0"], &["0"]), Err(GroundError::NotPrime(4))));
        assert!(matches!(
            Params::new(2, 0, &["0"], &["0", "1"]),
            Err(GroundError::LengthMismatch { .. })
        ));
        assert!(matches!(Params::new(1, 0, &["x"], &["0"]), Err(GroundError::Parse(_))));
    }

    #[test]
    fn scalar_formatting() {
        let q = Field::RATIONALS;
        assert_eq!(q.parse("6/-4").unwrap().to_string(), "-3/2");
        let f5 = Field::new(5).unwrap();
        assert_eq!(f5.parse("-1").unwrap().to_string(), "4");
        assert_eq!(f5.parse("1/2").unwrap().to_string(), "3");
        assert_eq!((f5.int(3) * f5.int(2).inverse().unwrap()).to_string(), "4");
    }

    #[test]
    fn cyclo_poly_examples() {
        let p1 = Params::new(1, 0, &["0"], &["0"]).unwrap();
        assert_eq!(strs(&cyclo_poly(&p1, Dir::Up)), ["0", "1"]);
        assert_eq!(strs(&cyclo_poly(&p2(), Dir::Up)), ["0", "-2", "1"]);
        assert_eq!(strs(&cyclo_poly(&p2(), Dir::Down)), ["0", "-1", "1"]);
    }

    #[test]
    fn delta_examples() {
        let p = Params::new(1, 0, &["1"], &["0"]).unwrap();
        assert_eq!(strs(&delta_series(&p, 1).deltas), ["1"]);
        let q = Params::new(2, 0, &["0", "1"], &["0", "1"]).unwrap();
        assert!(delta_series(&q, 4).deltas.iter().all(|x| x.is_zero()));
        let s = delta_series(&p2(), 3);
        assert_eq!(strs(&s.deltas), ["1", "2", "4"]);
        assert_eq!(strs(&s.deltaprimes), ["1", "1", "1"]);
    }

    #[test]
    fn reduce_power_matches_cyclotomic_relation() {
        let f = cyclo_poly(&p2(), Dir::Up);
        // x^2 = 2x, x^3 = 4x.
        assert_eq!(strs(&reduce_power(&f, 2)), ["0", "2"]);
        assert_eq!(strs(&reduce_power(&f, 3)), ["0", "4"]);
        assert_eq!(strs(&reduce_power(&f, 1)), ["0", "1"]);
    }

    #[test]
    fn cache_extends() {
        let cache = SeriesCache::new(p2(), 1);
        assert_eq!(cache.delta(3).to_string(), "4");
        assert_eq!(cache.delta_prime(5).to_string(), "1");
    }
}
