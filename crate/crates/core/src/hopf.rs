//! The universal enveloping algebra `H = U(d)` in the divided-power PBW basis
//! `m(I) = d_1^{i_1} ... d_n^{i_n} / i_1! ... i_n!`, with its Hopf structure.
//!
//! Multiplication is PBW straightening by rightmost-inversion rewriting with
//! memoized single-generator products. In the divided-power basis the
//! coproduct is binomial-free: `Delta m(I) = sum_{J+K=I} m(J) (x) m(K)` for
//! every Lie algebra, which keeps all downstream Sweedler expansions sparse.

use crate::algebra::Algebra;
use crate::multiindex::MultiIndex;
use crate::rat::{factorial, fmt_rat, rone, rzero, DetRng, Rat};
use num_traits::Zero;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

/// Sparse element of `H` in the divided-power PBW basis. No zero
/// coefficients are stored; terms iterate in graded-lex order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct HElement {
    pub terms: BTreeMap<MultiIndex, Rat>,
}

impl HElement {
    pub fn zero() -> Self {
        HElement::default()
    }

    pub fn one(nvars: usize) -> Self {
        HElement::monomial(MultiIndex::zero(nvars), rone())
    }

    pub fn generator(nvars: usize, k: usize) -> Self {
        HElement::monomial(MultiIndex::unit(nvars, k), rone())
    }

    pub fn monomial(idx: MultiIndex, coeff: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(idx, coeff);
        }
        HElement { terms }
    }

    pub fn from_vector(nvars: usize, v: &[Rat]) -> Self {
        let mut out = HElement::zero();
        for (k, x) in v.iter().enumerate() {
            if !x.is_zero() {
                out.terms.insert(MultiIndex::unit(nvars, k), x.clone());
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Filtration degree: max |I| over stored terms, or -1 for zero.
    pub fn degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|i| i.norm() as i64)
            .max()
            .unwrap_or(-1)
    }

    pub fn add_term(&mut self, idx: MultiIndex, coeff: &Rat) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(idx);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &HElement) -> HElement {
        let mut out = self.clone();
        for (i, x) in &other.terms {
            out.add_term(i.clone(), x);
        }
        out
    }

    pub fn sub(&self, other: &HElement) -> HElement {
        let mut out = self.clone();
        for (i, x) in &other.terms {
            out.add_term(i.clone(), &(-x.clone()));
        }
        out
    }

    pub fn scale(&self, s: &Rat) -> HElement {
        if s.is_zero() {
            return HElement::zero();
        }
        HElement {
            terms: self
                .terms
                .iter()
                .map(|(i, x)| (i.clone(), x * s))
                .collect(),
        }
    }

    pub fn coeff(&self, idx: &MultiIndex) -> Rat {
        self.terms.get(idx).cloned().unwrap_or_else(rzero)
    }

    /// Textual form: sorted `(i1,...,in): p/q` lines.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, x) in &self.terms {
            out.push_str(&format!("{:?}: {}\n", i, fmt_rat(x)));
        }
        out
    }
}

/// `H = U(d)` with memoized straightening tables. Cheap to clone the handle;
/// caches are shared and guarded for concurrent use.
#[derive(Clone)]
pub struct Hopf {
    pub alg: Arc<Algebra>,
    rmul: Arc<Mutex<HashMap<(MultiIndex, usize), HElement>>>,
    lmul: Arc<Mutex<HashMap<(usize, MultiIndex), HElement>>>,
    antipode: Arc<Mutex<HashMap<MultiIndex, HElement>>>,
}

impl Hopf {
    pub fn new(alg: Arc<Algebra>) -> Self {
        Hopf {
            alg,
            rmul: Arc::new(Mutex::new(HashMap::new())),
            lmul: Arc::new(Mutex::new(HashMap::new())),
            antipode: Arc::new(Mutex::new(HashMap::new())),
        }
    }

    pub fn nvars(&self) -> usize {
        self.alg.dim()
    }

    /// `m(I) . d_j` straightened into the PBW basis.
    pub fn mul_basis_gen(&self, idx: &MultiIndex, j: usize) -> HElement {
        if let Some(hit) = self.rmul.lock().unwrap().get(&(idx.clone(), j)) {
            return hit.clone();
        }
        let result = match idx.max_var() {
            None => HElement::monomial(MultiIndex::unit(self.nvars(), j), rone()),
            Some(m) if m <= j => {
                let coeff = Rat::from_integer((idx.0[j] as i64 + 1).into());
                HElement::monomial(idx.bump(j), coeff)
            }
            Some(m) => {
                let stripped = idx.drop(m).unwrap();
                let inv = Rat::from_integer((idx.0[m] as i64).into());
                let inner = self.mul_basis_gen(&stripped, j);
                let mut acc = self.mul_elem_gen(&inner, m);
                for k in 0..self.nvars() {
                    let cmjk = &self.alg.spec.c[m][j][k];
                    if !cmjk.is_zero() {
                        let term = self.mul_basis_gen(&stripped, k).scale(cmjk);
                        acc = acc.add(&term);
                    }
                }
                acc.scale(&(rone() / inv))
            }
        };
        self.rmul
            .lock()
            .unwrap()
            .insert((idx.clone(), j), result.clone());
        result
    }

    fn mul_elem_gen(&self, a: &HElement, j: usize) -> HElement {
        let mut out = HElement::zero();
        for (i, x) in &a.terms {
            let prod = self.mul_basis_gen(i, j);
            for (i2, y) in &prod.terms {
                out.add_term(i2.clone(), &(x * y));
            }
        }
        out
    }

    /// `d_j . m(I)` straightened into the PBW basis.
    pub fn gen_mul_basis(&self, j: usize, idx: &MultiIndex) -> HElement {
        if let Some(hit) = self.lmul.lock().unwrap().get(&(j, idx.clone())) {
            return hit.clone();
        }
        let result = match idx.min_var() {
            None => HElement::monomial(MultiIndex::unit(self.nvars(), j), rone()),
            Some(m) if m >= j => {
                let coeff = Rat::from_integer((idx.0[j] as i64 + 1).into());
                HElement::monomial(idx.bump(j), coeff)
            }
            Some(m) => {
                let stripped = idx.drop(m).unwrap();
                let inv = Rat::from_integer((idx.0[m] as i64).into());
                let inner = self.gen_mul_basis(j, &stripped);
                let mut acc = self.gen_mul_elem(m, &inner);
                for k in 0..self.nvars() {
                    let cjmk = &self.alg.spec.c[j][m][k];
                    if !cjmk.is_zero() {
                        let term = self.gen_mul_basis(k, &stripped).scale(cjmk);
                        acc = acc.add(&term);
                    }
                }
                acc.scale(&(rone() / inv))
            }
        };
        self.lmul
            .lock()
            .unwrap()
            .insert((j, idx.clone()), result.clone());
        result
    }

    fn gen_mul_elem(&self, j: usize, a: &HElement) -> HElement {
        let mut out = HElement::zero();
        for (i, x) in &a.terms {
            let prod = self.gen_mul_basis(j, i);
            for (i2, y) in &prod.terms {
                out.add_term(i2.clone(), &(x * y));
            }
        }
        out
    }

    /// Product of two PBW basis monomials.
    pub fn mul_basis(&self, a: &MultiIndex, b: &MultiIndex) -> HElement {
        // m(B) = word(B) / B!; multiply the word generator by generator.
        let mut acc = HElement::monomial(a.clone(), rone());
        let mut scale = rone();
        for (var, &e) in b.0.iter().enumerate() {
            for _ in 0..e {
                acc = self.mul_elem_gen(&acc, var);
            }
            scale *= factorial(e as u32);
        }
        acc.scale(&(rone() / scale))
    }

    /// Full product in `H`.
    pub fn mul(&self, a: &HElement, b: &HElement) -> HElement {
        let mut out = HElement::zero();
        for (ib, y) in &b.terms {
            // straighten a . m(ib) once per right monomial
            let mut acc = a.clone();
            let mut scale = rone();
            for (var, &e) in ib.0.iter().enumerate() {
                for _ in 0..e {
                    acc = self.mul_elem_gen(&acc, var);
                }
                scale *= factorial(e as u32);
            }
            let f = y / scale;
            for (i, x) in &acc.terms {
                out.add_term(i.clone(), &(x * &f));
            }
        }
        out
    }

    pub fn counit(&self, a: &HElement) -> Rat {
        a.coeff(&MultiIndex::zero(self.nvars()))
    }

    /// Coproduct as a sparse two-sided term map. Exact for any Lie algebra:
    /// in divided powers `Delta m(I) = sum_{J+K=I} m(J) (x) m(K)`.
    pub fn coproduct(&self, a: &HElement) -> BTreeMap<(MultiIndex, MultiIndex), Rat> {
        let mut out = BTreeMap::new();
        for (i, x) in &a.terms {
            for (j, k) in i.splittings() {
                *out.entry((j, k)).or_insert_with(rzero) += x;
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Antipode of a basis monomial: the reversed word with sign `(-1)^{|I|}`.
    pub fn antipode_basis(&self, idx: &MultiIndex) -> HElement {
        if let Some(hit) = self.antipode.lock().unwrap().get(idx) {
            return hit.clone();
        }
        let n = self.nvars();
        let mut acc = HElement::one(n);
        for var in (0..n).rev() {
            let e = idx.0[var];
            if e > 0 {
                let pow = HElement::monomial(
                    {
                        let mut v = MultiIndex::zero(n);
                        v.0[var] = e;
                        v
                    },
                    rone(),
                );
                acc = self.mul(&acc, &pow);
            }
        }
        if idx.norm() % 2 == 1 {
            acc = acc.scale(&-rone());
        }
        self.antipode
            .lock()
            .unwrap()
            .insert(idx.clone(), acc.clone());
        acc
    }

    pub fn antipode_of(&self, a: &HElement) -> HElement {
        let mut out = HElement::zero();
        for (i, x) in &a.terms {
            let s = self.antipode_basis(i);
            for (i2, y) in &s.terms {
                out.add_term(i2.clone(), &(x * y));
            }
        }
        out
    }

    /// The algebra automorphism generated by `d -> d - chi(d)`.
    pub fn bar(&self, a: &HElement) -> HElement {
        self.bar_with(a, &self.alg.spec.chi.clone())
    }

    /// Inverse of `bar` (same construction with `-chi`).
    pub fn bar_inv(&self, a: &HElement) -> HElement {
        let neg: Vec<Rat> = self.alg.spec.chi.iter().map(|x| -x.clone()).collect();
        self.bar_with(a, &neg)
    }

    fn bar_with(&self, a: &HElement, chi: &[Rat]) -> HElement {
        let mut out = HElement::zero();
        for (i, x) in &a.terms {
            // product over variables of (d_k - chi_k)^{e}/e! expanded binomially
            let mut partial: Vec<(MultiIndex, Rat)> =
                vec![(MultiIndex::zero(self.nvars()), x.clone())];
            for (var, &e) in i.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let mut next = Vec::new();
                for (idx, coeff) in &partial {
                    for take in 0..=e {
                        let drop = (e - take) as u32;
                        let mut scalar = coeff.clone();
                        if drop > 0 {
                            if chi[var].is_zero() {
                                continue;
                            }
                            let mut p = rone();
                            for _ in 0..drop {
                                p *= -chi[var].clone();
                            }
                            scalar *= p / factorial(drop);
                        }
                        let mut idx2 = idx.clone();
                        idx2.0[var] = take;
                        next.push((idx2, scalar));
                    }
                }
                partial = next;
            }
            for (idx, coeff) in partial {
                out.add_term(idx, &coeff);
            }
        }
        out
    }

    /// `bar(d_k)` for a single generator.
    pub fn bar_gen(&self, k: usize) -> HElement {
        let mut out = HElement::generator(self.nvars(), k);
        out.add_term(MultiIndex::zero(self.nvars()), &-self.alg.spec.chi[k].clone());
        out
    }

    /// Action of `h` on a module with generator matrices `act`:
    /// `rho(m(I)) = act_1^{i_1} ... act_n^{i_n} / I!`.
    pub fn act_on_module(&self, h: &HElement, act: &[crate::linalg::Mat]) -> crate::linalg::Mat {
        let dim = act[0].rows;
        let mut out = crate::linalg::Mat::zeros(dim, dim);
        for (i, x) in &h.terms {
            let mut m = crate::linalg::Mat::identity(dim);
            let mut denom = rone();
            for (var, &e) in i.0.iter().enumerate() {
                for _ in 0..e {
                    m = m.mul(&act[var]);
                }
                denom *= factorial(e as u32);
            }
            let f = x / denom;
            out = out.add(&m.scale(&f));
        }
        out
    }

    /// Deterministic pseudo-random element for test batteries.
    pub fn random_element(&self, rng: &mut DetRng, max_degree: u32, nterms: usize) -> HElement {
        let pool = crate::multiindex::indices_up_to(self.nvars(), max_degree);
        let mut out = HElement::zero();
        for _ in 0..nterms {
            let idx = pool[rng.below(pool.len() as u64) as usize].clone();
            let c = rng.small_rat();
            out.add_term(idx, &c);
        }
        out
    }
}
