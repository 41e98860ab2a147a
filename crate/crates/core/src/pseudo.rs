//! Values in `(H (x) H) (x)_H V` with canonical normal forms, pseudobrackets
//! for the current, vector-field and Hamiltonian pseudoalgebras, and
//! executable skew-symmetry / Jacobi checkers.
//!
//! The canonical representation of a two-sided value is the left-normal form
//! `sum_I (m(I) (x) 1) (x)_H v_I`, whose coefficients are uniquely
//! determined. Right-normal forms and the three-factor analogue used by the
//! Jacobi identity come from the same Sweedler straightening.

use crate::hopf::{HElement, Hopf};
use crate::linalg::Mat;
use crate::multiindex::MultiIndex;
use crate::rat::{rone, Rat};
use num_traits::Zero;
use rayon::prelude::*;
use std::collections::BTreeMap;

/// Coefficient values of pseudo products: elements of a free `H`-module.
pub trait ModValue: Clone + PartialEq + std::fmt::Debug + Send + Sync {
    fn is_zero(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn add_scaled(&mut self, other: &Self, s: &Rat);
    /// Left multiplication by a PBW monomial.
    fn h_act_mono(&self, hopf: &Hopf, idx: &MultiIndex) -> Self;

    /// Left multiplication by a full element of `H`.
    fn h_act(&self, hopf: &Hopf, h: &HElement) -> Self {
        let mut acc = self.zero_like();
        for (i, c) in &h.terms {
            let part = self.h_act_mono(hopf, i);
            acc.add_scaled(&part, c);
        }
        acc
    }
}

impl ModValue for HElement {
    fn is_zero(&self) -> bool {
        HElement::is_zero(self)
    }

    fn zero_like(&self) -> Self {
        HElement::zero()
    }

    fn add_scaled(&mut self, other: &Self, s: &Rat) {
        for (i, x) in &other.terms {
            self.add_term(i.clone(), &(x * s));
        }
    }

    fn h_act_mono(&self, hopf: &Hopf, idx: &MultiIndex) -> Self {
        hopf.mul(&HElement::monomial(idx.clone(), rone()), self)
    }
}

/// Element of a free module `H (x) k^m`, stored as `m` components of `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HVec {
    pub comps: Vec<HElement>,
}

impl HVec {
    pub fn zero(m: usize) -> Self {
        HVec {
            comps: vec![HElement::zero(); m],
        }
    }

    /// `h (x) e_k`.
    pub fn single(m: usize, k: usize, h: HElement) -> Self {
        let mut v = HVec::zero(m);
        v.comps[k] = h;
        v
    }

    /// `1 (x) u` for a coordinate vector `u`.
    pub fn from_fiber(nvars: usize, u: &[Rat]) -> Self {
        HVec {
            comps: u
                .iter()
                .map(|c| {
                    if c.is_zero() {
                        HElement::zero()
                    } else {
                        HElement::monomial(MultiIndex::zero(nvars), c.clone())
                    }
                })
                .collect(),
        }
    }

    pub fn scale(&self, s: &Rat) -> HVec {
        HVec {
            comps: self.comps.iter().map(|c| c.scale(s)).collect(),
        }
    }

    pub fn add_helem(&mut self, k: usize, h: &HElement, s: &Rat) {
        for (i, x) in &h.terms {
            self.comps[k].add_term(i.clone(), &(x * s));
        }
    }
}

impl ModValue for HVec {
    fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    fn zero_like(&self) -> Self {
        HVec::zero(self.comps.len())
    }

    fn add_scaled(&mut self, other: &Self, s: &Rat) {
        for (a, b) in self.comps.iter_mut().zip(&other.comps) {
            for (i, x) in &b.terms {
                a.add_term(i.clone(), &(x * s));
            }
        }
    }

    fn h_act_mono(&self, hopf: &Hopf, idx: &MultiIndex) -> Self {
        let m = HElement::monomial(idx.clone(), rone());
        HVec {
            comps: self.comps.iter().map(|c| hopf.mul(&m, c)).collect(),
        }
    }
}

/// Raw (unnormalized) presentation: a sum of `(f (x) g) (x)_H v`.
pub type Raw<V> = Vec<(HElement, HElement, V)>;

/// Multiply `(f (x) g)` into every raw term (the `H`-bilinear extension).
pub fn raw_bilinear<V: ModValue>(hopf: &Hopf, f: &HElement, g: &HElement, raw: &Raw<V>) -> Raw<V> {
    raw.iter()
        .map(|(u, w, v)| (hopf.mul(f, u), hopf.mul(g, w), v.clone()))
        .collect()
}

/// `(sigma (x)_H id)`: swap the two `H` factors of each raw term.
pub fn raw_swap<V: ModValue>(raw: &Raw<V>) -> Raw<V> {
    raw.iter()
        .map(|(u, w, v)| (w.clone(), u.clone(), v.clone()))
        .collect()
}

/// Left-normal form `sum_I (m(I) (x) 1) (x)_H v_I`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoSided<V: ModValue> {
    pub terms: BTreeMap<MultiIndex, V>,
}

impl<V: ModValue> Default for TwoSided<V> {
    fn default() -> Self {
        TwoSided {
            terms: BTreeMap::new(),
        }
    }
}

impl<V: ModValue> TwoSided<V> {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, idx: MultiIndex, v: &V, s: &Rat) {
        if v.is_zero() || s.is_zero() {
            return;
        }
        match self.terms.entry(idx) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                let mut fresh = v.zero_like();
                fresh.add_scaled(v, s);
                if !fresh.is_zero() {
                    slot.insert(fresh);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_scaled(v, s);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&mut self, other: &TwoSided<V>) {
        for (i, v) in &other.terms {
            self.add_term(i.clone(), v, &rone());
        }
    }

    pub fn scale(&self, s: &Rat) -> TwoSided<V> {
        let mut out = TwoSided::default();
        for (i, v) in &self.terms {
            out.add_term(i.clone(), v, s);
        }
        out
    }

    /// Straighten a raw presentation into left-normal form:
    /// `(f (x) g) (x)_H v = sum (f S(g_(1)) (x) 1) (x)_H g_(2) v`.
    pub fn from_raw(hopf: &Hopf, raw: &Raw<V>) -> TwoSided<V> {
        let mut out = TwoSided::default();
        for (f, g, v) in raw {
            if v.is_zero() {
                continue;
            }
            for ((g1, g2), c) in hopf.coproduct(g) {
                let left = hopf.mul(f, &hopf.antipode_basis(&g1));
                if left.is_zero() {
                    continue;
                }
                let moved = v.h_act_mono(hopf, &g2);
                for (i, x) in &left.terms {
                    out.add_term(i.clone(), &moved, &(x * &c));
                }
            }
        }
        out
    }

    /// Back to a raw presentation.
    pub fn to_raw(&self, nvars: usize) -> Raw<V> {
        self.terms
            .iter()
            .map(|(i, v)| {
                (
                    HElement::monomial(i.clone(), rone()),
                    HElement::one(nvars),
                    v.clone(),
                )
            })
            .collect()
    }

    /// Largest left-factor degree present.
    pub fn left_degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|i| i.norm() as i64)
            .max()
            .unwrap_or(-1)
    }
}

/// Right-normal form `sum_I (1 (x) m(I)) (x)_H v_I`:
/// `(f (x) g) (x)_H v = sum (1 (x) g S(f_(2))) (x)_H f_(1) v`.
pub fn right_normal<V: ModValue>(hopf: &Hopf, raw: &Raw<V>) -> BTreeMap<MultiIndex, V> {
    let mut out: TwoSided<V> = TwoSided::default();
    for (f, g, v) in raw {
        if v.is_zero() {
            continue;
        }
        for ((f1, f2), c) in hopf.coproduct(f) {
            let right = hopf.mul(g, &hopf.antipode_basis(&f2));
            if right.is_zero() {
                continue;
            }
            let moved = v.h_act_mono(hopf, &f1);
            for (i, x) in &right.terms {
                out.add_term(i.clone(), &moved, &(x * &c));
            }
        }
    }
    out.terms
}

/// Normal form in `H^{(x)3} (x)_H V`:
/// `sum_{I,J} (m(I) (x) m(J) (x) 1) (x)_H v_{IJ}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ThreeSided<V: ModValue> {
    pub terms: BTreeMap<(MultiIndex, MultiIndex), V>,
}

impl<V: ModValue> Default for ThreeSided<V> {
    fn default() -> Self {
        ThreeSided {
            terms: BTreeMap::new(),
        }
    }
}

/// Raw three-factor presentation `(a (x) b (x) c) (x)_H v`.
pub type Raw3<V> = Vec<(HElement, HElement, HElement, V)>;

impl<V: ModValue> ThreeSided<V> {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: (MultiIndex, MultiIndex), v: &V, s: &Rat) {
        if v.is_zero() || s.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                let mut fresh = v.zero_like();
                fresh.add_scaled(v, s);
                if !fresh.is_zero() {
                    slot.insert(fresh);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_scaled(v, s);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&mut self, other: &ThreeSided<V>) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v, &rone());
        }
    }

    pub fn scale(&self, s: &Rat) -> ThreeSided<V> {
        let mut out = ThreeSided::default();
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v, s);
        }
        out
    }

    /// `(a (x) b (x) c) (x)_H v =
    ///  sum (a S(c_(1)) (x) b S(c_(2)) (x) 1) (x)_H c_(3) v`.
    pub fn from_raw(hopf: &Hopf, raw: &Raw3<V>) -> ThreeSided<V> {
        let mut out = ThreeSided::default();
        for (a, b, c, v) in raw {
            if v.is_zero() {
                continue;
            }
            for (ck, cc) in &c.terms {
                for (p, rest) in ck.splittings() {
                    let left = hopf.mul(a, &hopf.antipode_basis(&p));
                    if left.is_zero() {
                        continue;
                    }
                    for (q, r) in rest.splittings() {
                        let mid = hopf.mul(b, &hopf.antipode_basis(&q));
                        if mid.is_zero() {
                            continue;
                        }
                        let moved = v.h_act_mono(hopf, &r);
                        for (i, x) in &left.terms {
                            for (j, y) in &mid.terms {
                                out.add_term((i.clone(), j.clone()), &moved, &(cc * x * y));
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// Swap the first two `H` factors of a raw three-factor presentation.
pub fn raw3_swap12<V: ModValue>(raw: &Raw3<V>) -> Raw3<V> {
    raw.iter()
        .map(|(a, b, c, v)| (b.clone(), a.clone(), c.clone(), v.clone()))
        .collect()
}

/// A pseudoalgebra presented by its bracket on a finite set of free
/// `H`-module generators; values are vectors over those generators, so the
/// `H`-bilinear extension is componentwise.
pub struct GenPseudoAlgebra {
    pub hopf: Hopf,
    pub ngen: usize,
    /// `bracket[a][b]` is the raw value of `[gen_a * gen_b]`.
    pub bracket: Vec<Vec<Raw<HVec>>>,
}

impl GenPseudoAlgebra {
    /// `[f gen_a * g gen_b]` as a raw presentation.
    pub fn bracket_coeff(&self, f: &HElement, a: usize, g: &HElement, b: usize) -> Raw<HVec> {
        raw_bilinear(&self.hopf, f, g, &self.bracket[a][b])
    }

    /// `[v * gen_b]` for `v = sum_k h_k gen_k`.
    fn bracket_value_gen(&self, v: &HVec, b: usize) -> Raw<HVec> {
        let one = HElement::one(self.hopf.nvars());
        let mut out = Vec::new();
        for (k, h) in v.comps.iter().enumerate() {
            if h.is_zero() {
                continue;
            }
            out.extend(raw_bilinear(&self.hopf, h, &one, &self.bracket[k][b]));
        }
        out
    }

    /// `[gen_a * v]` for `v = sum_k h_k gen_k`.
    fn bracket_gen_value(&self, a: usize, v: &HVec) -> Raw<HVec> {
        let one = HElement::one(self.hopf.nvars());
        let mut out = Vec::new();
        for (k, h) in v.comps.iter().enumerate() {
            if h.is_zero() {
                continue;
            }
            out.extend(raw_bilinear(&self.hopf, &one, h, &self.bracket[a][k]));
        }
        out
    }

    /// `[[f gen_a * g gen_b] * h gen_c]` extended to `H^{(x)3}` through
    /// `(Delta (x) id)` on the first factor pair.
    fn jacobi_lhs(
        &self,
        f: &HElement,
        a: usize,
        g: &HElement,
        b: usize,
        h: &HElement,
        c: usize,
    ) -> Raw3<HVec> {
        let inner = self.bracket_coeff(f, a, g, b);
        let mut out = Vec::new();
        for (u, w, v) in inner {
            for (p, q, val) in self.bracket_value_gen(&v, c) {
                let hq = self.hopf.mul(h, &q);
                for ((p1, p2), cp) in self.hopf.coproduct(&p) {
                    let f1 = self.hopf.mul(&u, &HElement::monomial(p1, rone()));
                    let f2 = self.hopf.mul(&w, &HElement::monomial(p2, rone()));
                    let mut scaled = val.zero_like();
                    scaled.add_scaled(&val, &cp);
                    out.push((f1, f2, hq.clone(), scaled));
                }
            }
        }
        out
    }

    /// `[f gen_a * [g gen_b * h gen_c]]` extended through `(id (x) Delta)`.
    fn jacobi_rhs(
        &self,
        f: &HElement,
        a: usize,
        g: &HElement,
        b: usize,
        h: &HElement,
        c: usize,
    ) -> Raw3<HVec> {
        let inner = self.bracket_coeff(g, b, h, c);
        let mut out = Vec::new();
        for (u, w, v) in inner {
            for (p, q, val) in self.bracket_gen_value(a, &v) {
                let fp = self.hopf.mul(f, &p);
                for ((q1, q2), cq) in self.hopf.coproduct(&q) {
                    let f2 = self.hopf.mul(&u, &HElement::monomial(q1, rone()));
                    let f3 = self.hopf.mul(&w, &HElement::monomial(q2, rone()));
                    let mut scaled = val.zero_like();
                    scaled.add_scaled(&val, &cq);
                    out.push((fp.clone(), f2, f3, scaled));
                }
            }
        }
        out
    }

    /// Skew-symmetry on all generator pairs with PBW-monomial coefficients of
    /// degree at most `coeff_cap`.
    pub fn check_skew(&self, coeff_cap: u32) -> bool {
        let monos = crate::multiindex::indices_up_to(self.hopf.nvars(), coeff_cap);
        let mut jobs = Vec::new();
        for a in 0..self.ngen {
            for b in 0..self.ngen {
                for fi in &monos {
                    for gi in &monos {
                        jobs.push((a, b, fi.clone(), gi.clone()));
                    }
                }
            }
        }
        jobs.par_iter().all(|(a, b, fi, gi)| {
            let f = HElement::monomial(fi.clone(), rone());
            let g = HElement::monomial(gi.clone(), rone());
            let ab = TwoSided::from_raw(&self.hopf, &self.bracket_coeff(&f, *a, &g, *b));
            let ba = self.bracket_coeff(&g, *b, &f, *a);
            let swapped = TwoSided::from_raw(&self.hopf, &raw_swap(&ba)).scale(&-rone());
            ab == swapped
        })
    }

    /// Jacobi identity on all generator triples with PBW-monomial
    /// coefficients of total degree at most `coeff_total_cap`.
    ///
    /// The bracket and both composition extensions are multilinear over the
    /// coefficient slots, so the identity holds for all elements as soon as
    /// it holds on generator triples with monomial coefficients; the bounded
    /// battery exercises the extension maps on every straightening path
    /// rather than enlarging the logical coverage.
    pub fn check_jacobi(&self, coeff_total_cap: u32) -> bool {
        let monos = crate::multiindex::indices_up_to(self.hopf.nvars(), coeff_total_cap);
        let mut coeff_triples = Vec::new();
        for fi in &monos {
            for gi in &monos {
                for hi in &monos {
                    if fi.norm() + gi.norm() + hi.norm() <= coeff_total_cap {
                        coeff_triples.push((fi.clone(), gi.clone(), hi.clone()));
                    }
                }
            }
        }
        let mut jobs = Vec::new();
        for a in 0..self.ngen {
            for b in 0..self.ngen {
                for c in 0..self.ngen {
                    for t in &coeff_triples {
                        jobs.push((a, b, c, t.clone()));
                    }
                }
            }
        }
        jobs.par_iter().all(|(a, b, c, (fi, gi, hi))| {
            let f = HElement::monomial(fi.clone(), rone());
            let g = HElement::monomial(gi.clone(), rone());
            let h = HElement::monomial(hi.clone(), rone());
            let lhs = ThreeSided::from_raw(&self.hopf, &self.jacobi_lhs(&f, *a, &g, *b, &h, *c));
            let rhs1 = ThreeSided::from_raw(&self.hopf, &self.jacobi_rhs(&f, *a, &g, *b, &h, *c));
            let rhs2_raw = raw3_swap12(&self.jacobi_rhs(&g, *b, &f, *a, &h, *c));
            let rhs2 = ThreeSided::from_raw(&self.hopf, &rhs2_raw);
            let mut rhs = rhs1;
            rhs.add(&rhs2.scale(&-rone()));
            lhs == rhs
        })
    }
}

/// The vector-field pseudoalgebra `W(d) = H (x) d`:
/// `[(f (x) a) * (g (x) b)] = (f (x) g) (x)_H (1 (x) [a,b])
///  - (f (x) ga) (x)_H (1 (x) b) + (fb (x) g) (x)_H (1 (x) a)`.
pub fn w_algebra(hopf: &Hopf) -> GenPseudoAlgebra {
    let n = hopf.nvars();
    let one = HElement::one(n);
    let mut bracket = vec![vec![Vec::new(); n]; n];
    for a in 0..n {
        for b in 0..n {
            let mut raw: Raw<HVec> = Vec::new();
            let mut br = HVec::zero(n);
            for k in 0..n {
                let c = &hopf.alg.spec.c[a][b][k];
                if !c.is_zero() {
                    br.comps[k] = HElement::monomial(MultiIndex::zero(n), c.clone());
                }
            }
            if !ModValue::is_zero(&br) {
                raw.push((one.clone(), one.clone(), br));
            }
            raw.push((
                one.clone(),
                HElement::generator(n, a),
                HVec::single(n, b, one.scale(&-rone())),
            ));
            raw.push((
                HElement::generator(n, b),
                one.clone(),
                HVec::single(n, a, one.clone()),
            ));
            bracket[a][b] = raw;
        }
    }
    GenPseudoAlgebra {
        hopf: hopf.clone(),
        ngen: n,
        bracket,
    }
}

/// Explicit two-argument bracket of `W(d)` for generator indices.
pub fn w_bracket(hopf: &Hopf, f: &HElement, a: usize, g: &HElement, b: usize) -> TwoSided<HVec> {
    let alg = w_algebra(hopf);
    TwoSided::from_raw(hopf, &alg.bracket_coeff(f, a, g, b))
}

/// The current pseudoalgebra over a Lie algebra with structure constants
/// `cg[i][j][k]`.
pub fn cur_algebra(hopf: &Hopf, cg: &[Vec<Vec<Rat>>]) -> GenPseudoAlgebra {
    let n = hopf.nvars();
    let m = cg.len();
    let one = HElement::one(n);
    let mut bracket = vec![vec![Vec::new(); m]; m];
    for a in 0..m {
        for b in 0..m {
            let mut v = HVec::zero(m);
            for k in 0..m {
                if !cg[a][b][k].is_zero() {
                    v.comps[k] = HElement::monomial(MultiIndex::zero(n), cg[a][b][k].clone());
                }
            }
            if !ModValue::is_zero(&v) {
                bracket[a][b] = vec![(one.clone(), one.clone(), v)];
            }
        }
    }
    GenPseudoAlgebra {
        hopf: hopf.clone(),
        ngen: m,
        bracket,
    }
}

/// `[e * e]` of the Hamiltonian pseudoalgebra for a given inverse-form matrix
/// (normally `derived.r`; tests pass perturbed matrices to break Jacobi).
pub fn h_bracket_raw_with_r(hopf: &Hopf, r: &Mat) -> Raw<HVec> {
    let n = hopf.nvars();
    let mut raw = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let rij = r.at(i, j);
            if rij.is_zero() {
                continue;
            }
            let v = HVec::single(1, 0, HElement::monomial(MultiIndex::zero(n), rij.clone()));
            raw.push((hopf.bar_gen(i), hopf.bar_gen(j), v));
        }
    }
    raw
}

/// The Hamiltonian pseudoalgebra on one generator `e`.
pub fn h_algebra(hopf: &Hopf) -> GenPseudoAlgebra {
    let raw = h_bracket_raw_with_r(hopf, &hopf.alg.derived.r);
    GenPseudoAlgebra {
        hopf: hopf.clone(),
        ngen: 1,
        bracket: vec![vec![raw]],
    }
}

/// Same, with a substituted inverse form (mutation testing).
pub fn h_algebra_with_r(hopf: &Hopf, r: &Mat) -> GenPseudoAlgebra {
    GenPseudoAlgebra {
        hopf: hopf.clone(),
        ngen: 1,
        bracket: vec![vec![h_bracket_raw_with_r(hopf, r)]],
    }
}

/// `[e * e]` in the form `(r + s (x) 1 - 1 (x) s) (x)_H e`.
pub fn h_bracket_rs_form(hopf: &Hopf) -> Raw<HVec> {
    let n = hopf.nvars();
    let d = &hopf.alg.derived;
    let one = HElement::one(n);
    let e = HVec::single(1, 0, one.clone());
    let mut raw = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let rij = d.r.at(i, j);
            if rij.is_zero() {
                continue;
            }
            let v = HVec::single(1, 0, HElement::monomial(MultiIndex::zero(n), rij.clone()));
            raw.push((HElement::generator(n, i), HElement::generator(n, j), v));
        }
    }
    let s = HElement::from_vector(n, &d.s);
    if !HElement::is_zero(&s) {
        raw.push((s.clone(), one.clone(), e.clone()));
        raw.push((one.clone(), s, e.scale(&-rone())));
    }
    raw
}

/// The canonical embedding of the Hamiltonian generator into `W(d)`:
/// `e -> -r + 1 (x) s = - sum_i bar(d_i) (x) d^i`.
pub fn iota_embed(hopf: &Hopf) -> HVec {
    let n = hopf.nvars();
    let d = &hopf.alg.derived;
    let mut out = HVec::zero(n);
    for i in 0..n {
        let bar = hopf.bar_gen(i);
        for k in 0..n {
            let c = &d.dual_basis[i][k];
            if !c.is_zero() {
                out.add_helem(k, &bar, &-c.clone());
            }
        }
    }
    out
}

/// Apply `iota` `H`-linearly to a Hamiltonian value (a multiple of `e`).
pub fn iota_of_value(hopf: &Hopf, v: &HVec) -> HVec {
    let e_img = iota_embed(hopf);
    let h = &v.comps[0];
    HVec {
        comps: e_img.comps.iter().map(|c| hopf.mul(h, c)).collect(),
    }
}

/// `tau(e)` in `H (x) gl(d)` through the vector-field route:
/// `tau(h (x) d_i) = h (x) ad d_i + sum_j h d_j (x) e_i^j`,
/// applied to `iota(e)`. Component order: `e_i^j` at index `i * dim + j`.
pub fn tau_of_e_w_route(hopf: &Hopf) -> HVec {
    let n = hopf.nvars();
    let iota = iota_embed(hopf);
    let mut out = HVec::zero(n * n);
    for (k, h) in iota.comps.iter().enumerate() {
        if h.is_zero() {
            continue;
        }
        // ad d_k = sum_{ij} c[k][j][i] e_i^j
        for j in 0..n {
            for i in 0..n {
                let c = &hopf.alg.spec.c[k][j][i];
                if !c.is_zero() {
                    out.add_helem(i * n + j, h, c);
                }
            }
        }
        for j in 0..n {
            let hd = hopf.mul(h, &HElement::generator(n, j));
            out.add_helem(k * n + j, &hd, &rone());
        }
    }
    out
}

/// `tau(e)` from the symplectic decomposition:
/// `- sum_k bar(d_k) (x) (adsp(d^k) + chi(d^k)/2 I)
///  + sum_{ij} bar(d_i) bar(d_j) (x) f^{ij}`.
pub fn tau_of_e_sp_route(hopf: &Hopf) -> HVec {
    let n = hopf.nvars();
    let d = &hopf.alg.derived;
    let mut out = HVec::zero(n * n);
    let add_matrix_term = |h: &HElement, m: &Mat, out: &mut HVec| {
        for i in 0..n {
            for j in 0..n {
                let c = m.at(i, j);
                if !c.is_zero() {
                    out.add_helem(i * n + j, h, c);
                }
            }
        }
    };
    for k in 0..n {
        let mut m = d.ad_sp[k].clone();
        let chidk = hopf.alg.chi_dual(k);
        if !chidk.is_zero() {
            let half = crate::rat::rat(1, 2) * chidk;
            for a in 0..n {
                *m.at_mut(a, a) += &half;
            }
        }
        let h = hopf.bar_gen(k).scale(&-rone());
        add_matrix_term(&h, &m, &mut out);
    }
    for i in 0..n {
        for j in 0..n {
            let f = crate::forms::f_matrix(&hopf.alg, i, j);
            let h = hopf.mul(&hopf.bar_gen(i), &hopf.bar_gen(j));
            add_matrix_term(&h, &f, &mut out);
        }
    }
    out
}
