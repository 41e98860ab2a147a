//! Annihilation algebras at finite jet order: the Lie algebra structure on
//! truncated functionals, the induced map into vector-field jets, the
//! Fourier-coefficient action on tensor modules, and the distinguished
//! low-order elements used to label normalizer actions.

use crate::hopf::{HElement, Hopf};
use crate::jets::{
    exp_minus_chi, jet_act_right, jet_act_right_bar, jet_mul, jet_pair, JetElement,
};
use crate::linalg::Mat;
use crate::multiindex::MultiIndex;
use crate::rat::{rone, rzero, Rat};
use crate::tensor::{ModuleElement, TensorModule};
use num_traits::Zero;

/// Element of the annihilation algebra of the Hamiltonian pseudoalgebra,
/// identified with a truncated functional.
pub type AnnElement = JetElement;

/// Element of the vector-field annihilation algebra: one jet per basis
/// direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WJetElement {
    pub comps: Vec<JetElement>,
}

impl WJetElement {
    pub fn zero(nvars: usize, order: u32) -> Self {
        WJetElement {
            comps: vec![JetElement::zero(order); nvars],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    pub fn order(&self) -> u32 {
        self.comps.iter().map(|c| c.order).min().unwrap_or(0)
    }

    pub fn add(&self, other: &WJetElement) -> WJetElement {
        WJetElement {
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn scale(&self, s: &Rat) -> WJetElement {
        WJetElement {
            comps: self.comps.iter().map(|c| c.scale(s)).collect(),
        }
    }

    /// Truncate all components to a common order.
    pub fn truncate(&self, order: u32) -> WJetElement {
        WJetElement {
            comps: self.comps.iter().map(|c| c.truncate(order)).collect(),
        }
    }
}

/// Bracket of the Hamiltonian annihilation algebra:
/// `[x, y] = sum_{ij} r^{ij} (x bar d_i)(y bar d_j)`. Drops the order by 1.
pub fn p_bracket(hopf: &Hopf, x: &JetElement, y: &JetElement) -> JetElement {
    let n = hopf.nvars();
    let r = &hopf.alg.derived.r;
    let order = x.order.min(y.order).saturating_sub(1);
    let xi: Vec<JetElement> = (0..n).map(|i| jet_act_right_bar(hopf, x, i)).collect();
    let yj: Vec<JetElement> = (0..n).map(|j| jet_act_right_bar(hopf, y, j)).collect();
    let mut out = JetElement::zero(order);
    for i in 0..n {
        for j in 0..n {
            let c = r.at(i, j);
            if c.is_zero() {
                continue;
            }
            let prod = jet_mul(&xi[i], &yj[j]);
            out = out.add(&prod.scale(c));
        }
    }
    out
}

/// Bracket of vector-field jets:
/// `[x (x) a, y (x) b] = xy (x) [a,b] - x(ya) (x) b + (xb)y (x) a`.
pub fn w_jet_bracket(hopf: &Hopf, u: &WJetElement, v: &WJetElement) -> WJetElement {
    let n = hopf.nvars();
    let order = u.order().min(v.order()).saturating_sub(1);
    let mut out = WJetElement::zero(n, order);
    for (a, x) in u.comps.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (b, y) in v.comps.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            // xy (x) [d_a, d_b]
            let xy = jet_mul(x, y).truncate(order);
            for k in 0..n {
                let c = &hopf.alg.spec.c[a][b][k];
                if !c.is_zero() {
                    out.comps[k] = out.comps[k].add(&xy.scale(c));
                }
            }
            // - x (y d_a) (x) d_b
            let ya = jet_act_right(hopf, y, a);
            let t = jet_mul(&x.truncate(order), &ya.truncate(order));
            out.comps[b] = out.comps[b].add(&t.scale(&-rone()));
            // + (x d_b) y (x) d_a
            let xb = jet_act_right(hopf, x, b);
            let t2 = jet_mul(&xb.truncate(order), &y.truncate(order));
            out.comps[a] = out.comps[a].add(&t2);
        }
    }
    out
}

/// The induced homomorphism into vector-field jets:
/// `x -> sum_i (x bar d^i) (x) d_i`. Drops the order by 1.
pub fn iota_star(hopf: &Hopf, x: &JetElement) -> WJetElement {
    let n = hopf.nvars();
    let r = &hopf.alg.derived.r;
    let order = x.order.saturating_sub(1);
    let mut out = WJetElement::zero(n, order);
    let bar_acts: Vec<JetElement> = (0..n).map(|k| jet_act_right_bar(hopf, x, k)).collect();
    for i in 0..n {
        // x bar(d^i) = sum_k r[i][k] x bar(d_k)
        for k in 0..n {
            let c = r.at(i, k);
            if !c.is_zero() {
                out.comps[i] = out.comps[i].add(&bar_acts[k].scale(c));
            }
        }
    }
    out
}

/// Fourier-coefficient action `(x (x)_H e) . v` on a tensor module, computed
/// from the left-normal form of the pseudoaction:
/// the coefficient at `m(I)` contributes `<x, S(m(I))> v_I`.
pub fn ann_act(tm: &TensorModule, x: &JetElement, v: &ModuleElement) -> ModuleElement {
    let needed = (v.degree().max(0) as u32) + 2;
    assert!(
        x.order >= needed,
        "jet order {} insufficient for degree {} (need {})",
        x.order,
        v.degree(),
        needed
    );
    let hopf = &tm.hopf;
    let act = tm.action_on_element(v);
    let mut out = ModuleElement::zero(tm.fiber_dim());
    for (i, vi) in &act.terms {
        let s = hopf.antipode_basis(i);
        let c = jet_pair(x, &s).expect("order checked above");
        if !c.is_zero() {
            out.add_scaled_local(vi, &c);
        }
    }
    out
}

impl ModuleElement {
    fn add_scaled_local(&mut self, other: &ModuleElement, s: &Rat) {
        for (i, v) in &other.terms {
            self.add_fiber(i.clone(), v, s);
        }
    }
}

/// Degree-(<=1) part of a vector-field jet as an endomorphism of `d` under
/// the boundary identification `x (x) a  ->  -a (x) (linear part of x)`,
/// plus the constant coefficients (the `d`-part).
pub struct WJetSymbol {
    /// Coefficient of `1 (x) d_i`.
    pub constant: Vec<Rat>,
    /// The `gl(d)` element from the linear parts.
    pub linear: Mat,
}

/// Reduce a vector-field jet modulo the first congruence subalgebra.
pub fn w_jet_symbol(hopf: &Hopf, w: &WJetElement) -> WJetSymbol {
    let n = hopf.nvars();
    let mut constant = vec![rzero(); n];
    let mut linear = Mat::zeros(n, n);
    for (a, jet) in w.comps.iter().enumerate() {
        constant[a] = jet.coeff(&MultiIndex::zero(n));
        for m in 0..n {
            // x^m (x) d_a  ->  -e_a^m, i.e. entry (a, m) gets -coefficient
            let c = jet.coeff(&MultiIndex::unit(n, m));
            if !c.is_zero() {
                *linear.at_mut(a, m) -= &c;
            }
        }
    }
    WJetSymbol { constant, linear }
}

/// Verdict rows for the distinguished element comparisons.
#[derive(Clone, Debug)]
pub struct DistinguishedImages {
    /// `iota_*(e^{-chi})` vanishes identically at the working order.
    pub kernel_vanishes: bool,
    /// Per `k`: the image of `x^k e^{-chi}` matches
    /// `e^{-chi} (x) d^k - sum_{i<j} c_{ij}^k x^j e^{-chi} (x) d^i` up to the
    /// congruence level.
    pub linear_images_match: Vec<bool>,
    /// Per `(i, j)`: the symbol of the image of `x^i x^j e^{-chi}` equals
    /// `2 f^{ij}` in `gl(d)`.
    pub quadratic_images_match: Vec<((usize, usize), bool)>,
}

impl DistinguishedImages {
    pub fn all_pass(&self) -> bool {
        self.kernel_vanishes
            && self.linear_images_match.iter().all(|&b| b)
            && self.quadratic_images_match.iter().all(|&(_, b)| b)
    }
}

/// Compute and compare the images of the distinguished annihilation-algebra
/// elements under the induced map.
pub fn distinguished_images(hopf: &Hopf, order: u32) -> DistinguishedImages {
    let n = hopf.nvars();
    let emc = exp_minus_chi(hopf, order);

    // (i) the central jet maps to zero
    let img0 = iota_star(hopf, &emc);
    let kernel_vanishes = img0.is_zero();

    // (ii) linear jets: compare full jets up to order-2 truncation
    let mut linear_images_match = Vec::new();
    for k in 0..n {
        let xk = JetElement::monomial(order, MultiIndex::unit(n, k), rone());
        let img = iota_star(hopf, &jet_mul(&xk, &emc));
        // expected: e^{-chi} (x) d^k - sum_{i<j} c_{ij}^k x^j e^{-chi} (x) d^i,
        // modulo the congruence subalgebra (compare constant and linear parts)
        let mut expected = WJetElement::zero(n, order);
        let dual = &hopf.alg.derived.dual_basis[k];
        for (t, c) in dual.iter().enumerate() {
            if !c.is_zero() {
                expected.comps[t] = expected.comps[t].add(&emc.scale(c));
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let c = &hopf.alg.spec.c[i][j][k];
                if c.is_zero() {
                    continue;
                }
                let xj = JetElement::monomial(order, MultiIndex::unit(n, j), rone());
                let xje = jet_mul(&xj, &emc);
                let duali = &hopf.alg.derived.dual_basis[i];
                for (t, dc) in duali.iter().enumerate() {
                    if !dc.is_zero() {
                        expected.comps[t] =
                            expected.comps[t].add(&xje.scale(&-(c * dc)));
                    }
                }
            }
        }
        let got = w_jet_symbol(hopf, &img);
        let want = w_jet_symbol(hopf, &expected);
        linear_images_match.push(got.constant == want.constant && got.linear == want.linear);
    }

    // (iii) quadratic jets: symbols equal 2 f^{ij}
    let mut quadratic_images_match = Vec::new();
    for i in 0..n {
        for j in i..n {
            let idx = MultiIndex::unit(n, i).add(&MultiIndex::unit(n, j));
            let xij = JetElement::monomial(order, idx, rone());
            let img = iota_star(hopf, &jet_mul(&xij, &emc));
            let sym = w_jet_symbol(hopf, &img);
            let expected = crate::forms::f_matrix(&hopf.alg, i, j).scale(&crate::rat::rint(2));
            let ok = sym.linear == expected && sym.constant.iter().all(|c| c.is_zero());
            quadratic_images_match.push(((i, j), ok));
        }
    }

    DistinguishedImages {
        kernel_vanishes,
        linear_images_match,
        quadratic_images_match,
    }
}

/// Reconstruction of the pseudoaction from Fourier coefficients:
/// `e * v = sum_I (bar(S(m(I))) (x) 1) (x)_H ((x_I e^{-chi} (x)_H e) . v)`.
/// Returns true when it reproduces the direct action.
pub fn pseudoaction_reconstruction_check(tm: &TensorModule, v: &ModuleElement) -> bool {
    let hopf = &tm.hopf;
    let n = hopf.nvars();
    let order = (v.degree().max(0) as u32) + 2;
    let emc = exp_minus_chi(hopf, order);
    let direct = tm.action_on_element(v);
    let mut raw: crate::pseudo::Raw<ModuleElement> = Vec::new();
    for idx in crate::multiindex::indices_up_to(n, order) {
        let xi = JetElement::monomial(order, idx.clone(), rone());
        let coeff = ann_act(tm, &jet_mul(&xi, &emc), v);
        if crate::pseudo::ModValue::is_zero(&coeff) {
            continue;
        }
        let left = hopf.bar(&hopf.antipode_basis(&idx));
        raw.push((left, HElement::one(n), coeff));
    }
    let rebuilt = crate::pseudo::TwoSided::from_raw(hopf, &raw);
    rebuilt == direct
}

/// The action of a jet on the constant-degree part only, used for the
/// congruence-level nilpotency test.
pub fn acts_as_zero(tm: &TensorModule, x: &JetElement, window: &[ModuleElement]) -> bool {
    window
        .iter()
        .all(|v| crate::pseudo::ModValue::is_zero(&ann_act(tm, x, v)))
}
