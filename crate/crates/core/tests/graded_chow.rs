use std::sync::Arc;

use chain_core::graded_chow::{
    GeneratorKind, PresentationBuilder, RingElement, RingPresentation, Strategy,
};
use chain_core::scalars::PrimePower;
use chain_core::towers::{build_ktower, build_pn};
use proptest::prelude::*;

fn ring_element(pres: &Arc<RingPresentation>, picks: &[(usize, i64)]) -> RingElement {
    let basis = pres.relation_basis();
    let mut e = pres.zero();
    for &(i, c) in picks {
        e = &e + &pres.monomial_element(basis[i % basis.len()].clone(), c);
    }
    e
}

fn elements() -> impl proptest::strategy::Strategy<Value = Vec<(usize, i64)>> {
    prop::collection::vec((0usize..10_000, -20i64..20), 0..6)
}

fn ktower() -> Arc<RingPresentation> {
    build_ktower(3, 2).unwrap().pres
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rewriting_is_confluent(a in elements(), b in elements()) {
        let pres = ktower();
        let (x, y) = (ring_element(&pres, &a), ring_element(&pres, &b));
        let left = x.mul_with(&y, Strategy::Leftmost);
        let right = x.mul_with(&y, Strategy::Rightmost);
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(left.renormalize(Strategy::Rightmost), right);
    }

    #[test]
    fn multiplication_is_commutative_and_associative(a in elements(), b in elements(), c in elements()) {
        let pres = ktower();
        let (x, y, z) = (ring_element(&pres, &a), ring_element(&pres, &b), ring_element(&pres, &c));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
    }

    #[test]
    fn pn_products_agree_under_both_strategies(a in elements(), b in elements()) {
        let pres = build_pn(3, 2).unwrap().pres;
        let (x, y) = (ring_element(&pres, &a), ring_element(&pres, &b));
        prop_assert_eq!(x.mul_with(&y, Strategy::Leftmost), x.mul_with(&y, Strategy::Rightmost));
    }
}

#[test]
fn normal_forms_are_normal() {
    let pres = ktower();
    let z = pres.gen("z_1_1").unwrap();
    for e in 0..8 {
        for (m, _) in z.pow(e).terms() {
            assert!(pres.is_normal_monomial(m));
        }
    }
}

#[test]
fn text_round_trip() {
    for pres in [
        ktower(),
        build_pn(3, 2).unwrap().pres,
        build_ktower(5, 1).unwrap().pres,
    ] {
        let text = pres.to_text();
        let back = RingPresentation::from_text(&text).unwrap();
        assert_eq!(*back, *pres);
        assert_eq!(back.to_text(), text);
    }
}

#[test]
fn golden_ktower_presentation() {
    let text = build_ktower(3, 1).unwrap().pres.to_text();
    assert_eq!(text, include_str!("golden/ktower_p3_r1.txt"));
}

#[test]
fn golden_small_presentation() {
    let mut b = PresentationBuilder::new("small", PrimePower::new(3, 2).unwrap());
    let a = b.generator("a", 1, GeneratorKind::BundleClass);
    let t = b.generator("t", 1, GeneratorKind::Tautological);
    b.relation(a, 3, vec![]);
    b.relation(t, 2, vec![(vec![1, 1], 2), (vec![2, 0], -1)]);
    let pres = b.build().unwrap();
    assert_eq!(pres.to_text(), include_str!("golden/small_mod9.txt"));
    let t = pres.gen("t").unwrap();
    assert_eq!(
        t.pow(2).to_string(),
        pres.parse_element("2*a*t - a^2").unwrap().to_string()
    );
    assert_eq!(pres.relation_basis().len(), 6);
}

#[test]
fn mixed_presentations_are_rejected() {
    let x = ktower().gen("z_1_1").unwrap();
    let y = build_pn(3, 2).unwrap().pres.one();
    assert!(x.try_mul(&y).is_err());
    assert!(x.try_add(&y).is_err());
}
