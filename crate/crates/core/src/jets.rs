//! The dual `X = H*` truncated to finite jet order.
//!
//! A jet of order `M` stores the pairings against all PBW monomials `m(I)`
//! with `|I| <= M`, in the monomial basis `{x_I}` dual to `{m(I)}`. The jet
//! product is dual to the coproduct, which in divided powers is plain
//! convolution, identifying `X` with truncated formal power series.

use crate::hopf::{HElement, Hopf};
use crate::multiindex::MultiIndex;
use crate::rat::{factorial, rone, rzero, Rat};
use num_traits::Zero;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetError {
    pub message: String,
}

impl std::fmt::Display for JetError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for JetError {}

/// Truncated element of `X = H*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetElement {
    pub order: u32,
    pub terms: BTreeMap<MultiIndex, Rat>,
}

impl JetElement {
    pub fn zero(order: u32) -> Self {
        JetElement {
            order,
            terms: BTreeMap::new(),
        }
    }

    /// The basis jet `x_I`.
    pub fn monomial(order: u32, idx: MultiIndex, coeff: Rat) -> Self {
        assert!(idx.norm() <= order, "monomial exceeds jet order");
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(idx, coeff);
        }
        JetElement { order, terms }
    }

    /// The constant jet `1`.
    pub fn one(order: u32, nvars: usize) -> Self {
        JetElement::monomial(order, MultiIndex::zero(nvars), rone())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, idx: &MultiIndex) -> Rat {
        self.terms.get(idx).cloned().unwrap_or_else(rzero)
    }

    pub fn add_term(&mut self, idx: MultiIndex, coeff: &Rat) {
        if coeff.is_zero() || idx.norm() > self.order {
            return;
        }
        match self.terms.entry(idx) {
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

    pub fn add(&self, other: &JetElement) -> JetElement {
        let order = self.order.min(other.order);
        let mut out = self.truncate(order);
        for (i, x) in &other.terms {
            out.add_term(i.clone(), x);
        }
        out
    }

    pub fn scale(&self, s: &Rat) -> JetElement {
        if s.is_zero() {
            return JetElement::zero(self.order);
        }
        JetElement {
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|(i, x)| (i.clone(), x * s))
                .collect(),
        }
    }

    pub fn truncate(&self, order: u32) -> JetElement {
        JetElement {
            order,
            terms: self
                .terms
                .iter()
                .filter(|(i, _)| i.norm() <= order)
                .map(|(i, x)| (i.clone(), x.clone()))
                .collect(),
        }
    }

    /// Largest `n` such that the stored jet vanishes on `fil^n H`
    /// (the decreasing filtration layer), or the order for the zero jet.
    pub fn fil_level(&self) -> i64 {
        self.terms
            .keys()
            .map(|i| i.norm() as i64 - 1)
            .min()
            .unwrap_or(self.order as i64)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, x) in &self.terms {
            out.push_str(&format!("{:?}: {}\n", i, crate::rat::fmt_rat(x)));
        }
        out
    }
}

/// Pair a jet against an element of `H`. Fails if the element's degree
/// exceeds the jet order (the pairing would be silently lossy).
pub fn jet_pair(x: &JetElement, h: &HElement) -> Result<Rat, JetError> {
    if h.degree() > x.order as i64 {
        return Err(JetError {
            message: format!(
                "pairing a jet of order {} against degree {} exceeds the truncation",
                x.order,
                h.degree()
            ),
        });
    }
    let mut s = rzero();
    for (i, c) in &h.terms {
        if let Some(v) = x.terms.get(i) {
            s += v * c;
        }
    }
    Ok(s)
}

/// Product of jets: convolution in the monomial coordinates, truncated to the
/// smaller order.
pub fn jet_mul(x: &JetElement, y: &JetElement) -> JetElement {
    let order = x.order.min(y.order);
    let mut out = JetElement::zero(order);
    for (i, a) in &x.terms {
        if i.norm() > order {
            continue;
        }
        for (j, b) in &y.terms {
            let sum = i.add(j);
            if sum.norm() <= order {
                out.add_term(sum, &(a * b));
            }
        }
    }
    out
}

/// Left action of a generator: `<d_k x, h> = -<x, d_k h>`. Drops the order by 1.
pub fn jet_act_left(hopf: &Hopf, k: usize, x: &JetElement) -> JetElement {
    let order = x.order.saturating_sub(1);
    let mut out = JetElement::zero(order);
    for idx in crate::multiindex::indices_up_to(hopf.nvars(), order) {
        let prod = hopf.gen_mul_basis(k, &idx);
        let mut s = rzero();
        for (i2, c) in &prod.terms {
            if let Some(v) = x.terms.get(i2) {
                s += v * c;
            }
        }
        if !s.is_zero() {
            out.terms.insert(idx, -s);
        }
    }
    out
}

/// Right action of a generator: `<x d_k, h> = -<x, h d_k>`. Drops the order by 1.
pub fn jet_act_right(hopf: &Hopf, x: &JetElement, k: usize) -> JetElement {
    let order = x.order.saturating_sub(1);
    let mut out = JetElement::zero(order);
    for idx in crate::multiindex::indices_up_to(hopf.nvars(), order) {
        let prod = hopf.mul_basis_gen(&idx, k);
        let mut s = rzero();
        for (i2, c) in &prod.terms {
            if let Some(v) = x.terms.get(i2) {
                s += v * c;
            }
        }
        if !s.is_zero() {
            out.terms.insert(idx, -s);
        }
    }
    out
}

/// Right action of `bar(d_k) = d_k - chi(d_k)`.
pub fn jet_act_right_bar(hopf: &Hopf, x: &JetElement, k: usize) -> JetElement {
    let a = jet_act_right(hopf, x, k);
    let chi = &hopf.alg.spec.chi[k];
    if chi.is_zero() {
        a
    } else {
        a.add(&x.truncate(a.order).scale(&-chi.clone()))
    }
}

/// The jet of `e^{-chi}` up to the requested order: coefficient of `x_I` is
/// `prod_k (-chi_k)^{i_k} / i_k!`.
pub fn exp_minus_chi(hopf: &Hopf, order: u32) -> JetElement {
    let chi = &hopf.alg.spec.chi;
    let mut out = JetElement::zero(order);
    for idx in crate::multiindex::indices_up_to(hopf.nvars(), order) {
        let mut c = rone();
        let mut zero = false;
        for (var, &e) in idx.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if chi[var].is_zero() {
                zero = true;
                break;
            }
            let mut p = rone();
            for _ in 0..e {
                p *= -chi[var].clone();
            }
            c *= p / factorial(e as u32);
        }
        if !zero && !c.is_zero() {
            out.terms.insert(idx, c);
        }
    }
    out
}
