//! Property tests for the algebraic invariants that hold on all inputs:
//! associativity of the straightened product, Hopf identities, duality of
//! the jet product, and normal-form uniqueness.

use liepseudo::battery;
use liepseudo::hopf::{HElement, Hopf};
use liepseudo::jets::{jet_mul, jet_pair, JetElement};
use liepseudo::multiindex::MultiIndex;
use liepseudo::pseudo::{right_normal, HVec, Raw, TwoSided};
use liepseudo::rat::{rat, rone, rzero};
use proptest::prelude::*;
use std::sync::Arc;

fn f2() -> Hopf {
    Hopf::new(Arc::new(battery::f2()))
}

fn x2() -> Hopf {
    Hopf::new(Arc::new(battery::x2()))
}

prop_compose! {
    fn arb_index()(a in 0u16..3, b in 0u16..3) -> MultiIndex {
        MultiIndex(vec![a, b])
    }
}

prop_compose! {
    fn arb_coeff()(p in -4i64..=4, q in 1i64..=3) -> (i64, i64) {
        (p, q)
    }
}

prop_compose! {
    fn arb_helem()(terms in prop::collection::vec((arb_index(), arb_coeff()), 0..5)) -> Vec<(MultiIndex, (i64, i64))> {
        terms
    }
}

fn build(h: &[(MultiIndex, (i64, i64))]) -> HElement {
    let mut out = HElement::zero();
    for (i, (p, q)) in h {
        out.add_term(i.clone(), &rat(*p, *q));
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn product_is_associative(a in arb_helem(), b in arb_helem(), c in arb_helem()) {
        let h = f2();
        let (a, b, c) = (build(&a), build(&b), build(&c));
        prop_assert_eq!(h.mul(&h.mul(&a, &b), &c), h.mul(&a, &h.mul(&b, &c)));
    }

    #[test]
    fn antipode_is_an_involutive_antihomomorphism(a in arb_helem(), b in arb_helem()) {
        let h = x2();
        let (a, b) = (build(&a), build(&b));
        prop_assert_eq!(h.antipode_of(&h.antipode_of(&a)), a.clone());
        prop_assert_eq!(
            h.antipode_of(&h.mul(&a, &b)),
            h.mul(&h.antipode_of(&b), &h.antipode_of(&a))
        );
    }

    #[test]
    fn twisting_preserves_degree_and_inverts(a in arb_helem()) {
        let h = x2();
        let a = build(&a);
        prop_assert_eq!(h.bar(&a).degree(), a.degree());
        prop_assert_eq!(h.bar_inv(&h.bar(&a)), a);
    }

    #[test]
    fn jet_product_is_dual_to_the_coproduct(
        xs in prop::collection::vec((arb_index(), arb_coeff()), 0..4),
        ys in prop::collection::vec((arb_index(), arb_coeff()), 0..4),
        probe in arb_index(),
    ) {
        let h = f2();
        let mut x = JetElement::zero(6);
        let mut y = JetElement::zero(6);
        for (i, (p, q)) in &xs {
            x.add_term(i.clone(), &rat(*p, *q));
        }
        for (i, (p, q)) in &ys {
            y.add_term(i.clone(), &rat(*p, *q));
        }
        let hh = HElement::monomial(probe, rone());
        let mut brute = rzero();
        for ((j, k), c) in h.coproduct(&hh) {
            brute += c * x.coeff(&j) * y.coeff(&k);
        }
        prop_assert_eq!(jet_pair(&jet_mul(&x, &y), &hh).unwrap(), brute);
    }

    #[test]
    fn normal_forms_round_trip(f in arb_helem(), g in arb_helem(), v in arb_helem()) {
        let h = x2();
        let raw: Raw<HVec> = vec![(build(&f), build(&g), HVec::single(1, 0, build(&v)))];
        let left1 = TwoSided::from_raw(&h, &raw);
        let right = right_normal(&h, &left1.to_raw(2));
        let back: Raw<HVec> = right
            .into_iter()
            .map(|(i, val)| (HElement::one(2), HElement::monomial(i, rone()), val))
            .collect();
        let left2 = TwoSided::from_raw(&h, &back);
        prop_assert_eq!(left1, left2);
    }
}
