use chain_core::report::Status;
use chain_core::scalars::{FqElem, PrimePower};
use chain_core::symbol_chain::{
    default_field_order, determinant, determinant_gauss, kummer_field, p2_norm_form_check,
    phi_symbolic, psi1_symbolic_check, KummerElement, PhiSpec,
};
use num_bigint::BigInt;
use proptest::prelude::*;

fn field_elems(q: u64, len: usize) -> impl proptest::strategy::Strategy<Value = Vec<u64>> {
    prop::collection::vec(0..q, len)
}

fn kummer(p: u64, q: u64, a: u64, coeffs: &[u64]) -> KummerElement<FqElem> {
    let f = kummer_field(p, q).unwrap();
    KummerElement::new(f.elem(a), coeffs.iter().map(|&c| f.elem(c)).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn norm_is_multiplicative(a in 1u64..7, x in field_elems(7, 3), y in field_elems(7, 3)) {
        let (bx, by) = (kummer(3, 7, a, &x), kummer(3, 7, a, &y));
        let prod = bx.try_mul(&by).unwrap();
        prop_assert_eq!(prod.norm(), bx.norm() * by.norm());
    }

    #[test]
    fn norm_is_multiplicative_p5(a in 1u64..11, x in field_elems(11, 5), y in field_elems(11, 5)) {
        let (bx, by) = (kummer(5, 11, a, &x), kummer(5, 11, a, &y));
        prop_assert_eq!(bx.try_mul(&by).unwrap().norm(), bx.norm() * by.norm());
    }

    #[test]
    fn norm_of_scalar_is_pth_power(a in 1u64..7, c in 0u64..7) {
        let f = kummer_field(3, 7).unwrap();
        let e = KummerElement::scalar(f.elem(a), 3, f.elem(c));
        prop_assert_eq!(e.norm(), f.elem(c) * f.elem(c) * f.elem(c));
    }

    #[test]
    fn one_minus_xu_norm(a in 1u64..7, x in 0u64..7) {
        let f = kummer_field(3, 7).unwrap();
        let (a, x) = (f.elem(a), f.elem(x));
        let e = KummerElement::one_minus_xu(a.clone(), 3, x.clone());
        prop_assert_eq!(e.norm(), f.one() - a * x.clone() * x.clone() * x);
    }

    #[test]
    fn determinant_paths_agree(entries in field_elems(13, 25)) {
        let f = kummer_field(3, 13).unwrap();
        let m: Vec<Vec<FqElem>> = entries.chunks(5).map(|r| r.iter().map(|&c| f.elem(c)).collect()).collect();
        prop_assert_eq!(determinant(&m, &f.one()), determinant_gauss(&m, &f.one()));
    }
}

#[test]
fn mismatched_algebras_are_rejected() {
    let x = kummer(3, 7, 2, &[1, 2, 3]);
    let y = kummer(3, 7, 3, &[1, 2, 3]);
    assert!(x.try_mul(&y).is_err());
    assert!(x.try_add(&kummer(5, 11, 2, &[1, 0, 0, 0, 0])).is_err());
}

#[test]
fn variable_counts() {
    let f = PrimePower::prime(3).unwrap();
    for r in 1..=3u32 {
        let spec = PhiSpec::new(3, vec![f.elem(1); r as usize]).unwrap();
        assert_eq!(spec.level(), r);
        assert_eq!(spec.phi_vars(), 3usize.pow(r));
        assert_eq!(spec.psi_vars(), 3usize.pow(r) - 3usize.pow(r - 1));
    }
    assert_eq!(phi_symbolic(3, 1).unwrap().nvars(), 4);
}

#[test]
fn fields_and_symbolic_identities() {
    assert_eq!(default_field_order(3), 7);
    assert_eq!(default_field_order(5), 11);
    assert_eq!(default_field_order(7), 29);
    assert!(kummer_field(3, 11).is_err());
    assert_eq!(psi1_symbolic_check(3).status, Status::Pass);
    assert_eq!(p2_norm_form_check(50, 1).status, Status::Pass);
    let phi = phi_symbolic(3, 1).unwrap();
    assert!(phi.terms().all(|(_, c)| *c != BigInt::from(0)));
}
