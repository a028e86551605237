use chain_core::charnum::{
    s_d_pa, s_d_projective_space, tangent_class_projective_space, um, um_binomial, CoeffElem,
    CoeffRing, SplitBundleClass, Truncated,
};
use chain_core::scalars::PrimePower;
use num_bigint::BigInt;
use proptest::prelude::*;

fn bundle(top: usize, lines: &[(i64, i64)]) -> SplitBundleClass {
    SplitBundleClass {
        lines: lines
            .iter()
            .map(|&(c, m)| (Truncated::monomial(top, c, 1), m))
            .collect(),
    }
}

fn lines() -> impl proptest::strategy::Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-5i64..6, -3i64..4), 0..5)
}

fn coeff_elem(ring: &CoeffRing, terms: &[(i64, u32, u32)]) -> CoeffElem {
    terms.iter().fold(ring.zero(), |acc, &(c, x, y)| {
        ring.add(&acc, &ring.monomial(c, x, y))
    })
}

fn terms() -> impl proptest::strategy::Strategy<Value = Vec<(i64, u32, u32)>> {
    prop::collection::vec((-30i64..30, 0u32..4, 0u32..6), 0..5)
}

proptest! {
    #[test]
    fn s_d_is_additive(a in lines(), b in lines(), d in 1usize..8) {
        let (e, f) = (bundle(d, &a), bundle(d, &b));
        prop_assert_eq!(e.concat(&f).s_d(d), e.s_d(d) + f.s_d(d));
        prop_assert_eq!(e.concat(&f).rank(), e.rank() + f.rank());
    }

    #[test]
    fn s_d_of_a_line_is_its_top_power(c in -5i64..6, d in 1usize..10) {
        prop_assert_eq!(bundle(d, &[(c, 1)]).s_d(d), BigInt::from(c).pow(d as u32));
    }

    #[test]
    fn coefficient_ring_laws(a in terms(), b in terms(), c in terms(), pi in 0usize..3) {
        let ring = CoeffRing::new([3u64, 5, 7][pi]).unwrap();
        let (x, y, z) = (coeff_elem(&ring, &a), coeff_elem(&ring, &b), coeff_elem(&ring, &c));
        let xy = ring.mul(&x, &y).unwrap();
        prop_assert_eq!(&xy, &ring.mul(&y, &x).unwrap());
        prop_assert_eq!(ring.mul(&xy, &z).unwrap(), ring.mul(&x, &ring.mul(&y, &z).unwrap()).unwrap());
        let lhs = ring.mul(&x, &ring.add(&y, &z)).unwrap();
        prop_assert_eq!(lhs, ring.add(&xy, &ring.mul(&x, &z).unwrap()));
    }

    #[test]
    fn binomial_powers_match_repeated_squaring(i in 0u64..5, e in 0u64..40) {
        let ring = CoeffRing::new(5).unwrap();
        prop_assert_eq!(ring.line_power_binomial(i, e).unwrap(), ring.pow(&ring.line(i), e).unwrap());
    }
}

#[test]
fn product_of_all_lines_vanishes() {
    for p in [3u64, 5, 7] {
        let ring = CoeffRing::new(p).unwrap();
        let prod = (0..p).fold(ring.monomial(1, 0, 0), |acc, i| {
            ring.mul(&acc, &ring.line(i)).unwrap()
        });
        assert_eq!(prod, ring.zero());
    }
}

#[test]
fn reduction_orders_agree() {
    for p in [3u64, 5, 7] {
        let ring = CoeffRing::new(p).unwrap();
        for m in 1..=3 {
            assert_eq!(
                um(&ring, m).unwrap(),
                um_binomial(&ring, m).unwrap(),
                "p={p} m={m}"
            );
        }
    }
}

#[test]
fn frozen_s_d_of_pa() {
    let expected = [
        ((3u64, 2u32, 2i64), 6u64),
        ((3, 3, 1), 3),
        ((5, 2, 4), 20),
        ((5, 3, 1), 5),
    ];
    for ((p, n, deg), s) in expected {
        let modulus = PrimePower::new(p, 2).unwrap();
        let r = s_d_pa(p, n, &modulus.elem(deg)).unwrap();
        assert_eq!(r.s_d.residue(), s, "p={p} n={n}");
        assert_eq!(r.a.residue(), p);
        assert!(r.not_divisible_by_p2);
    }
}

#[test]
fn projective_spaces() {
    assert_eq!(s_d_projective_space(1).unwrap(), BigInt::from(2));
    assert_eq!(s_d_projective_space(30).unwrap(), BigInt::from(31));
    assert!(s_d_projective_space(0).is_err());
    assert_eq!(tangent_class_projective_space(4).rank(), 4);
}
