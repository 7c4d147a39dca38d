//! The straightening engine.
//!
//! A normal diagram `d` is the composite (top-head dots) ∘ U ∘ (bottom-head
//! dots) with `U` undotted, and `U` depends only on the matching. Appending
//! one generator to `d` is resolved by local case analysis:
//!
//! * cups insert a strand;
//! * a dot on a top ↑ point increments the head count of its strand;
//! * a dot on a top ↓ point is carried along its strand through a planar
//!   realization of `U` to the strand's head, collecting one smoothing term
//!   per crossing passed;
//! * a crossing first slides the dots sitting on its two top heads through
//!   itself, then swaps the two top endpoints;
//! * a cap joining two strands first moves the dots of the ↑ leg onto the ↓
//!   leg, then joins; a cap closing a cup creates a dotted bubble.
//!
//! Dots on strand `s` at a crossing obey
//! `dot after = dot before + ε · smoothing`, where "after" follows the
//! orientation of `s`, `ε = sign(w_p)·sign(w_{p+1})` for the strand running
//! from bottom `p` to top `p+1` and `−ε` for the other strand.
//!
//! The cyclotomic relations hold only at the left edge. A head carrying `ℓ`
//! or more dots is transported to the left edge by a chain of crossings and
//! their inverses, reduced there with `f` (or `f'` for ↓), and the
//! corrections produced while sliding the dots back are evaluated
//! recursively. Dotted bubbles are moved to the left edge one strand at a
//! time and then replaced by `δ` or `δ'`.
//!
//! Every recursive call either has fewer dots in total, or the same number
//! of dots with a bubble closer to the left edge, so evaluation terminates.

use std::collections::HashMap;
use std::sync::Mutex;

use super::{
    bottom_dot_layers, slice, slice_core, smoothing, top_dot_layers, Builder, Gen, Layer,
    LayerWord, Morphism, StraightenError,
};
use crate::diagrams::NormalDiagram;
use crate::ground::{cyclo_poly, reduce_power, FieldElem, Params, SeriesCache};
use crate::words::{Dir, Word};

/// Normalizes layer words in `OB(u, u')` for one parameter set.
///
/// Results of appending a single generator to a basis diagram are memoized;
/// the memo table is guarded by a mutex so an engine can be shared between
/// threads.
#[derive(Debug)]
pub struct Engine {
    params: Params,
    f_up: Vec<FieldElem>,
    f_down: Vec<FieldElem>,
    series: SeriesCache,
    memo: Mutex<HashMap<(NormalDiagram, Layer), Morphism>>,
}

impl Engine {
    pub fn new(params: Params) -> Self {
        let f_up = cyclo_poly(&params, Dir::Up);
        let f_down = cyclo_poly(&params, Dir::Down);
        let series = SeriesCache::new(params.clone(), 16);
        Engine { params, f_up, f_down, series, memo: Mutex::new(HashMap::new()) }
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn level(&self) -> usize {
        self.params.level()
    }

    fn one(&self) -> FieldElem {
        self.params.field().one()
    }

    /// `δ_i`.
    pub fn delta(&self, i: usize) -> FieldElem {
        self.series.delta(i)
    }

    /// `δ'_i`.
    pub fn delta_prime(&self, i: usize) -> FieldElem {
        self.series.delta_prime(i)
    }

    /// Number of memoized single-generator results.
    pub fn memo_len(&self) -> usize {
        self.memo.lock().expect("memo lock").len()
    }

    /// The image of a layer word in the normally ordered basis.
    pub fn eval(&self, lw: &LayerWord) -> Result<Morphism, StraightenError> {
        lw.target()?;
        Ok(self.eval_on(&NormalDiagram::identity(&lw.src), &lw.layers))
    }

    /// Applies `layers` on top of the basis diagram `d`.
    pub fn eval_on(&self, d: &NormalDiagram, layers: &[Layer]) -> Morphism {
        let m = Morphism::from_diagram(d.clone(), self.params.field());
        self.apply(&m, layers)
    }

    /// Applies `layers` on top of `m`. Layers must fit `m.dst()`.
    pub fn apply(&self, m: &Morphism, layers: &[Layer]) -> Morphism {
        let mut state = m.clone();
        for &l in layers {
            let dst = l.apply(state.dst()).expect("layer fits the current word");
            let mut next = Morphism::zero(state.src().clone(), dst);
            for (d, c) in state.terms() {
                next.add_scaled(&self.append(d, l), c);
            }
            state = next;
        }
        state
    }

    /// Checked form of [`Engine::apply`].
    pub fn apply_checked(&self, m: &Morphism, layers: &[Layer]) -> Result<Morphism, StraightenError> {
        LayerWord::new(m.dst().clone(), layers.to_vec()).target()?;
        Ok(self.apply(m, layers))
    }

    /// `g ∘ h`: `h` first, then `g`.
    pub fn compose(&self, g: &Morphism, h: &Morphism) -> Result<Morphism, StraightenError> {
        if h.dst() != g.src() {
            return Err(StraightenError::Compose(
                g.src().clone(),
                g.dst().clone(),
                h.src().clone(),
                h.dst().clone(),
            ));
        }
        let mut out = Morphism::zero(h.src().clone(), g.dst().clone());
        for (dg, cg) in g.terms() {
            let layers = slice(dg).layers;
            for (dh, ch) in h.terms() {
                out.add_scaled(&self.eval_on(dh, &layers), &(cg * ch));
            }
        }
        Ok(out)
    }

    /// Composition of two basis diagrams.
    pub fn compose_diagrams(&self, g: &NormalDiagram, h: &NormalDiagram) -> Morphism {
        self.eval_on(h, &slice(g).layers)
    }

    /// τ applied through the functor: each term is sliced, the layer word is
    /// flipped generator by generator and evaluated again.
    pub fn apply_tau(&self, m: &Morphism) -> Morphism {
        let mut out = Morphism::zero(m.dst().clone(), m.src().clone());
        for (d, c) in m.terms() {
            let lw = slice(d).tau().expect("slices are well typed");
            out.add_scaled(&self.eval_on(&NormalDiagram::identity(&lw.src), &lw.layers), c);
        }
        out
    }

    /// One generator on top of one basis diagram.
    pub fn append(&self, d: &NormalDiagram, l: Layer) -> Morphism {
        let key = (d.clone(), l);
        if let Some(hit) = self.memo.lock().expect("memo lock").get(&key) {
            return hit.clone();
        }
        let out = self.append_raw(d, l);
        self.memo.lock().expect("memo lock").insert(key, out.clone());
        out
    }

    fn append_raw(&self, d: &NormalDiagram, l: Layer) -> Morphism {
        let p = l.pos;
        match l.gen {
            Gen::CupR | Gen::CupL => self.single(insert_cup(d, p, l.gen.output()[0])),
            Gen::DotUp => {
                let g = d.src().len() + p;
                self.add_dots(d, g, 1)
            }
            Gen::DotDown => self.dot_on_tail(d, p),
            Gen::CapR | Gen::CapL => self.cap(d, p),
            _ => self.cross(d, l),
        }
    }

    fn single(&self, d: NormalDiagram) -> Morphism {
        Morphism::from_diagram(d, self.params.field())
    }

    /// Adds `k` dots at head `g`, reducing when the count reaches `ℓ`.
    fn add_dots(&self, d: &NormalDiagram, g: usize, k: u32) -> Morphism {
        let mut hd = d.head_dots();
        hd[g] += k;
        let count = hd[g];
        let nd = NormalDiagram::from_mates(d.src().clone(), d.dst().clone(), &d.mates(), &hd);
        if (count as usize) < self.level() {
            return self.single(nd);
        }
        let n = d.src().len();
        if g >= n {
            self.reduce_top(&nd, g - n)
        } else {
            self.reduce_bottom(&nd, g)
        }
    }

    fn with_dots(&self, d: &NormalDiagram, g: usize, k: u32) -> NormalDiagram {
        let mut hd = d.head_dots();
        hd[g] = k;
        NormalDiagram::from_mates(d.src().clone(), d.dst().clone(), &d.mates(), &hd)
    }

    /// A ↓ dot placed on the top tail at `p`, carried to the strand's head.
    fn dot_on_tail(&self, d: &NormalDiagram, p: usize) -> Morphism {
        let n = d.src().len();
        let mates = d.mates();
        let head = mates[n + p];
        let mut out = self.add_dots(d, head, 1);

        let core = slice_core(&d.undotted());
        let events = trace_crossings(d.src(), &core, p);
        if events.is_empty() {
            return out;
        }
        let below = bottom_dot_layers(d);
        let above = top_dot_layers(d);
        let id = NormalDiagram::identity(d.src());
        for (t, eps) in events {
            let mut layers = below.clone();
            layers.extend_from_slice(&core[..t]);
            layers.extend(smoothing(core[t]));
            layers.extend_from_slice(&core[t + 1..]);
            layers.extend_from_slice(&above);
            let term = self.eval_on(&id, &layers);
            out.add_scaled(&term, &self.sign(-eps));
        }
        out
    }

    fn sign(&self, e: i64) -> FieldElem {
        self.params.field().int(e)
    }

    /// A crossing on top of `d`.
    fn cross(&self, d: &NormalDiagram, l: Layer) -> Morphism {
        let n = d.src().len();
        let p = l.pos;
        let w = d.dst().letters();
        let eps_a = w[p].sign() * w[p + 1].sign();
        let hd = d.head_dots();
        for (slot, new_pos, eps) in [(p, p + 1, eps_a), (p + 1, p, -eps_a)] {
            let g = n + slot;
            if w[slot] == Dir::Up && hd[g] > 0 {
                let d1 = self.with_dots(d, g, hd[g] - 1);
                let mut out = self.eval_on(&d1, &[l, Layer::new(new_pos, Gen::DotUp)]);
                let sm = self.eval_on(&d1, &smoothing(l));
                out.add_scaled(&sm, &self.sign(-eps));
                return out;
            }
        }
        // No dots on the two top heads: the crossing only permutes endpoints.
        let mut mates = d.mates();
        let (a, b) = (n + p, n + p + 1);
        let (ma, mb) = (mates[a], mates[b]);
        if ma == b {
            // A cup: swapping its legs keeps the same strand.
        } else {
            mates[a] = mb;
            mates[mb] = a;
            mates[b] = ma;
            mates[ma] = b;
        }
        let mut dst = d.dst().clone();
        dst.0.swap(p, p + 1);
        let mut hd2 = hd;
        hd2.swap(a, b);
        self.single(NormalDiagram::from_mates(d.src().clone(), dst, &mates, &hd2))
    }

    /// A cap on top of `d` at `p`.
    fn cap(&self, d: &NormalDiagram, p: usize) -> Morphism {
        let n = d.src().len();
        let w = d.dst().letters();
        let (a, b) = (n + p, n + p + 1);
        let mates = d.mates();
        let hd = d.head_dots();
        if mates[a] == b {
            let head = if w[p] == Dir::Up { a } else { b };
            let k = hd[head];
            let d0 = remove_top_pair(d, p);
            return self.bubble(&d0, p, w[p] == Dir::Up, k);
        }
        let (up, down_pos) = if w[p] == Dir::Up { (a, p + 1) } else { (b, p) };
        if hd[up] > 0 {
            let k = hd[up];
            let d1 = self.with_dots(d, up, 0);
            let mut layers = vec![Layer::new(down_pos, Gen::DotDown); k as usize];
            layers.push(Layer::new(p, Gen::cap(w[p])));
            return self.eval_on(&d1, &layers);
        }
        let (ma, mb) = (mates[a], mates[b]);
        let mut m2 = mates.clone();
        m2[ma] = mb;
        m2[mb] = ma;
        m2[a] = a;
        m2[b] = b;
        let joined = NormalDiagram::from_mates(d.src().clone(), d.dst().clone(), &m2, &hd);
        self.single(remove_top_pair_raw(&joined, p, &m2, &hd))
    }

    /// A bubble with `k` dots on its ↑ arc, standing at position `p` on top
    /// of `d0`; `clockwise` is the orientation closed by the left cap.
    fn bubble(&self, d0: &NormalDiagram, p: usize, clockwise: bool, k: u32) -> Morphism {
        let value = |i: usize| if clockwise { self.delta(i) } else { self.delta_prime(i) };
        if k == 0 {
            return Morphism::term(d0.clone(), self.delta(1));
        }
        if p == 0 {
            return Morphism::term(d0.clone(), value(k as usize + 1));
        }
        // Pull the bubble across the strand on its left: open a cup left of
        // that strand, pass both legs over it, add the dots, pass back, close.
        let mut b = Builder::new(d0.dst());
        let left = if clockwise { Dir::Up } else { Dir::Down };
        b.cup(p - 1, left);
        b.cross(p);
        b.cross(p - 1);
        b.dot(if clockwise { p } else { p + 1 }, k);
        b.cross(p - 1);
        b.cross(p);
        b.cap(p - 1);
        self.eval_on(d0, &b.layers)
    }

    /// Reduces a top ↑ head at `p` carrying at least `ℓ` dots.
    fn reduce_top(&self, d: &NormalDiagram, p: usize) -> Morphism {
        let n = d.src().len();
        let g = n + p;
        let k = d.head_dots()[g];
        let d0 = self.with_dots(d, g, 0);
        let coeffs = reduce_power(&self.f_up, k as usize);
        let mut out = Morphism::zero(d.src().clone(), d.dst().clone());
        if p == 0 {
            for (i, c) in coeffs.iter().enumerate() {
                out.add_term(self.with_dots(&d0, g, i as u32), c);
            }
            return out;
        }
        let w = d.dst().letters().to_vec();
        let mut bc = Builder::new(d.dst());
        bc.move_left(p, 0);
        let chain = bc.layers.clone();
        let mut bi = Builder { word: bc.word.clone(), layers: vec![] };
        bi.move_right(0, p);
        let back = bi.layers;

        for (i, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut layers = chain.clone();
            layers.extend(std::iter::repeat_n(Layer::new(0, Gen::DotUp), i));
            layers.extend_from_slice(&back);
            out.add_scaled(&self.eval_on(&d0, &layers), c);
        }
        for (m, &cr) in back.iter().enumerate() {
            let eps = self.sign(w[m].sign());
            for j in 1..=k {
                let mut layers = chain.clone();
                layers.extend(std::iter::repeat_n(Layer::new(0, Gen::DotUp), (j - 1) as usize));
                layers.extend_from_slice(&back[..m]);
                layers.extend(smoothing(cr));
                layers.extend_from_slice(&back[m + 1..]);
                layers.extend(std::iter::repeat_n(Layer::new(p, Gen::DotUp), (k - j) as usize));
                out.add_scaled(&self.eval_on(&d0, &layers), &eps);
            }
        }
        out
    }

    /// Reduces a bottom ↓ head at `q` carrying at least `ℓ` dots.
    fn reduce_bottom(&self, d: &NormalDiagram, q: usize) -> Morphism {
        let k = d.head_dots()[q];
        let d0 = self.with_dots(d, q, 0);
        let coeffs = reduce_power(&self.f_down, k as usize);
        let mut out = Morphism::zero(d.src().clone(), d.dst().clone());
        if q == 0 {
            for (i, c) in coeffs.iter().enumerate() {
                out.add_term(self.with_dots(&d0, q, i as u32), c);
            }
            return out;
        }
        let a = d.src();
        let mut bc = Builder::new(a);
        bc.move_left(q, 0);
        let chain = bc.layers.clone();
        let mut bi = Builder { word: bc.word.clone(), layers: vec![] };
        bi.move_right(0, q);
        let back = bi.layers;
        let rest = slice(&d0).layers;
        let id = NormalDiagram::identity(a);

        for (i, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut layers = chain.clone();
            layers.extend(std::iter::repeat_n(Layer::new(0, Gen::DotDown), i));
            layers.extend_from_slice(&back);
            layers.extend_from_slice(&rest);
            out.add_scaled(&self.eval_on(&id, &layers), c);
        }
        for (m, &cr) in chain.iter().enumerate() {
            let eps = self.sign(a.letters()[q - 1 - m].sign());
            for j in 1..=k {
                let mut layers = vec![Layer::new(q, Gen::DotDown); (k - j) as usize];
                layers.extend_from_slice(&chain[..m]);
                layers.extend(smoothing(cr));
                layers.extend_from_slice(&chain[m + 1..]);
                layers.extend(std::iter::repeat_n(Layer::new(0, Gen::DotDown), (j - 1) as usize));
                layers.extend_from_slice(&back);
                layers.extend_from_slice(&rest);
                out.add_scaled(&self.eval_on(&id, &layers), &eps);
            }
        }
        out
    }

    /// Scalar value of a bubble with `k` dots on its ↑ arc at the left edge,
    /// computed by the engine (reducing dot powers when `k ≥ ℓ`).
    pub fn bubble_value(&self, clockwise: bool, k: u32) -> FieldElem {
        let e = Word::empty();
        let mut b = Builder::new(&e);
        if clockwise {
            b.cup(0, Dir::Up);
            b.dot(0, k);
        } else {
            b.cup(0, Dir::Down);
            b.dot(1, k);
        }
        b.cap(0);
        let m = self.eval_on(&NormalDiagram::identity(&e), &b.layers);
        m.coeff(&NormalDiagram::identity(&e)).cloned().unwrap_or_else(|| self.params.field().zero())
    }

    /// `1` in the ground field, exposed for callers building morphisms.
    pub fn unit(&self) -> FieldElem {
        self.one()
    }
}

/// Inserts a cup at top position `p` whose left leg has orientation `left`.
fn insert_cup(d: &NormalDiagram, p: usize, left: Dir) -> NormalDiagram {
    let n = d.src().len();
    let old_m = d.mates();
    let old_hd = d.head_dots();
    let remap = |g: usize| if g < n + p { g } else { g + 2 };
    let total = old_m.len() + 2;
    let mut mates = vec![0; total];
    let mut hd = vec![0; total];
    for g in 0..old_m.len() {
        mates[remap(g)] = remap(old_m[g]);
        hd[remap(g)] = old_hd[g];
    }
    mates[n + p] = n + p + 1;
    mates[n + p + 1] = n + p;
    let mut dst = d.dst().0.clone();
    dst.splice(p..p, [left, left.flip()]);
    NormalDiagram::from_mates(d.src().clone(), Word(dst), &mates, &hd)
}

/// Removes top points `p, p+1`, which must form a cup, from `d`.
fn remove_top_pair(d: &NormalDiagram, p: usize) -> NormalDiagram {
    remove_top_pair_raw(d, p, &d.mates(), &d.head_dots())
}

/// Removes top points `p, p+1` given explicit mates and dots, where those two
/// points are matched with each other (or with themselves).
fn remove_top_pair_raw(d: &NormalDiagram, p: usize, mates: &[usize], hd: &[u32]) -> NormalDiagram {
    let n = d.src().len();
    let (a, b) = (n + p, n + p + 1);
    let remap = |g: usize| if g < a { g } else { g - 2 };
    let total = mates.len() - 2;
    let mut m2 = vec![0; total];
    let mut h2 = vec![0; total];
    for g in 0..mates.len() {
        if g == a || g == b {
            continue;
        }
        m2[remap(g)] = remap(mates[g]);
        h2[remap(g)] = hd[g];
    }
    let mut dst = d.dst().0.clone();
    dst.drain(p..p + 2);
    NormalDiagram::from_mates(d.src().clone(), Word(dst), &m2, &h2)
}

/// Finds the crossings of `core` (a layer list on `src`) involving the
/// strand that ends at top position `p`, together with the sign `ε` of the
/// dot-sliding rule for that strand at each of them.
fn trace_crossings(src: &Word, core: &[Layer], p: usize) -> Vec<(usize, i64)> {
    // Labels: bottom points keep their index, cups get fresh labels.
    let mut labels: Vec<usize> = (0..src.len()).collect();
    let mut word = src.0.clone();
    let mut next = src.len();
    let mut events: Vec<(usize, usize, usize, i64)> = Vec::new();
    for (t, l) in core.iter().enumerate() {
        let q = l.pos;
        match l.gen {
            Gen::CupR | Gen::CupL => {
                labels.splice(q..q, [next, next]);
                next += 1;
            }
            Gen::CapR | Gen::CapL => {
                labels.drain(q..q + 2);
            }
            g if g.is_crossing() => {
                let eps_a = word[q].sign() * word[q + 1].sign();
                events.push((t, labels[q], labels[q + 1], eps_a));
                labels.swap(q, q + 1);
            }
            _ => {}
        }
        word = l.apply(&Word(word)).expect("core layer fits").0;
    }
    let s = labels[p];
    events
        .into_iter()
        .filter_map(|(t, la, lb, eps_a)| {
            debug_assert!(!(la == s && lb == s), "strand crosses itself in a slice");
            if la == s {
                Some((t, eps_a))
            } else if lb == s {
                Some((t, -eps_a))
            } else {
                None
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::enumerate_basis;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn p1() -> Params {
        Params::new(1, 0, &["1"], &["0"]).unwrap()
    }

    fn p2() -> Params {
        Params::new(2, 0, &["0", "2"], &["0", "1"]).unwrap()
    }

    fn lw(src: &str, layers: &[(usize, Gen)]) -> LayerWord {
        LayerWord::new(w(src), layers.iter().map(|&(p, g)| Layer::new(p, g)).collect())
    }

    #[test]
    fn zigzag_is_identity() {
        let e = Engine::new(p2());
        let m = e.eval(&lw("u", &[(0, Gen::CupR), (1, Gen::CapR)])).unwrap();
        assert_eq!(m, Morphism::identity(&w("u"), e.params().field()));
    }

    #[test]
    fn clockwise_bubble_is_delta_one() {
        let e = Engine::new(p1());
        let m = e.eval(&lw("", &[(0, Gen::CupR), (0, Gen::CapL)])).unwrap();
        assert_eq!(m, Morphism::identity(&w(""), e.params().field()));
    }

    #[test]
    fn two_dots_reduce_by_f() {
        let e = Engine::new(p2());
        let m = e.eval(&lw("u", &[(0, Gen::DotUp), (0, Gen::DotUp)])).unwrap();
        let one_dot = NormalDiagram::from_pairs(w("u"), w("u"), vec![(0, 1)], Some(vec![1]));
        assert_eq!(m, Morphism::term(one_dot, e.params().field().int(2)));
    }

    #[test]
    fn mixed_crossings_are_inverse() {
        let e = Engine::new(p2());
        let m = e.eval(&lw("ud", &[(0, Gen::CrossUD), (0, Gen::CrossDU)])).unwrap();
        assert_eq!(m, Morphism::identity(&w("ud"), e.params().field()));
    }

    #[test]
    fn round_trip_small() {
        let e = Engine::new(p2());
        for d in enumerate_basis(&w("ud"), &w("ud"), 2) {
            let m = e.eval(&slice(&d)).unwrap();
            assert_eq!(m, Morphism::from_diagram(d.clone(), e.params().field()));
        }
    }

    #[test]
    fn bubble_values_match_series() {
        let e = Engine::new(p2());
        for k in 0..6u32 {
            assert_eq!(e.bubble_value(true, k), e.delta(k as usize + 1), "clockwise k={k}");
            assert_eq!(e.bubble_value(false, k), e.delta_prime(k as usize + 1), "ccw k={k}");
        }
    }

    #[test]
    fn down_dot_on_left_cup_has_eigenvalue_uprime() {
        let params = Params::new(1, 0, &["3"], &["0"]).unwrap();
        let e = Engine::new(params);
        let cup = NormalDiagram::from_pairs(w(""), w("du"), vec![(0, 1)], None);
        let m = e.append(&cup, Layer::new(0, Gen::DotDown));
        assert!(m.is_zero(), "f'(x) = x kills the dot on the ↓ leg: {m}");
    }
}
