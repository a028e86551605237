use std::collections::HashSet;

use chain_core::scalars::{
    is_prime, lex_first_irreducible, mod_arith, Coefficient, FieldScalar, FqField, ModOp,
    PrimePower,
};
use proptest::prelude::*;

#[test]
fn pth_power_counts() {
    for (p, q) in [
        (3u64, 7u64),
        (3, 13),
        (5, 11),
        (3, 25),
        (3, 49),
        (7, 29),
        (5, 3125),
    ] {
        let f = FqField::with_order(q).unwrap();
        let powers: HashSet<u64> = f.elements().map(|x| x.pow_u64(p).packed()).collect();
        let flagged = f.elements().filter(|x| x.is_pth_power(p)).count() as u64;
        let expected = if (q - 1) % p == 0 { (q - 1) / p + 1 } else { q };
        assert_eq!(powers.len() as u64, expected, "p={p} q={q}");
        assert_eq!(flagged, expected, "p={p} q={q}");
    }
    let m = PrimePower::prime(7).unwrap();
    let cubes = (0..7).filter(|&n| m.elem(n).is_pth_power(3)).count();
    assert_eq!(cubes, 3);
}

#[test]
fn small_fields() {
    assert_eq!(lex_first_irreducible(3, 2), vec![1, 0, 1]);
    let f = FqField::new(3, 2).unwrap();
    assert_eq!((f.order(), f.degree(), f.p()), (9, 2, 3));
    assert!(FqField::with_order(12).is_err());
    assert!(FqField::with_order(1 << 21).is_err());
    assert!(PrimePower::new(9, 1).is_err());
    assert!(is_prime(1_000_003) && !is_prime(1_000_001));
}

#[test]
fn mixed_moduli_are_rejected() {
    let a = PrimePower::prime(3).unwrap().elem(1);
    let b = PrimePower::new(3, 2).unwrap().elem(1);
    assert!(mod_arith(&a, &b, ModOp::Add).is_err());
    assert!(a.try_mul(&b).is_err());
}

proptest! {
    #[test]
    fn mod_p2_units(n in -1000i64..1000, pi in 0usize..3) {
        let m = PrimePower::new([3u64, 5, 7][pi], 2).unwrap();
        let x = m.elem(n);
        prop_assert_eq!(x.is_unit(), n.rem_euclid(m.p() as i64) != 0);
        if let Some(y) = x.inverse_unit() {
            prop_assert_eq!((x * y).residue(), 1);
        }
        prop_assert_eq!(x.signed_residue().rem_euclid(m.modulus() as i64) as u64, x.residue());
    }

    #[test]
    fn field_inverses(q_index in 0usize..5, v in 1u64..1000) {
        let q = [7u64, 9, 25, 27, 121][q_index];
        let f = FqField::with_order(q).unwrap();
        let x = f.elem(v % (q - 1) + 1);
        prop_assert!(!x.is_zero());
        let inv = x.inverse().unwrap();
        prop_assert!((x.clone() * inv).is_one());
        prop_assert_eq!(x.pow_u64(q - 1), f.one());
        prop_assert_eq!(x.pow_u64(q), x);
    }
}
