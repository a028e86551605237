use std::collections::BTreeMap;

use chain_core::equivariant::{
    build_pq_fixed, build_s_fixed, copies_of_pa_power, fiber_probe_counts, fixed_point_equivalent,
    is_nice, model_qw, model_ybar_w, proj_kummer, proj_o_plus_l, Character, FixedPoint, GSpace,
    Rep, PAIR_BUDGET,
};
use proptest::prelude::*;

fn character(p: u64, c: &[i64]) -> Character {
    Character::from_coords(p, c)
}

fn space(p: u64, pts: &[(Vec<[i64; 2]>, u64)]) -> GSpace {
    let points = pts
        .iter()
        .enumerate()
        .map(|(i, (tangent, mult))| FixedPoint {
            label: format!("x{i}"),
            base_tangent: Rep::new(tangent.iter().map(|c| character(p, c)).collect()),
            fiber_tangent: Rep::default(),
            bundles: BTreeMap::new(),
            multiplicity: *mult,
        })
        .collect();
    GSpace {
        p,
        n: 2,
        dim: pts.first().map_or(0, |t| t.0.len() as u64),
        points,
        positive_dimensional_fixed_locus: false,
    }
}

type Points = Vec<(Vec<[i64; 2]>, u64)>;

fn points() -> impl proptest::strategy::Strategy<Value = Points> {
    prop::collection::vec(
        (prop::collection::vec([1i64..3, 0i64..3], 2), 1u64..4),
        1..5,
    )
}

/// The same points with multiplicities split into unit classes and reversed.
fn relabelled(p: u64, pts: &Points) -> GSpace {
    let mut unit: Points = pts
        .iter()
        .flat_map(|(t, m)| (0..*m).map(move |_| (t.clone(), 1)))
        .collect();
    unit.reverse();
    space(p, &unit)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn equivalence_is_reflexive_and_symmetric(a in points()) {
        let x = space(3, &a);
        let y = relabelled(3, &a);
        prop_assert!(fixed_point_equivalent(&x, &x).unwrap().is_some());
        let m = fixed_point_equivalent(&x, &y).unwrap();
        prop_assert!(m.is_some());
        prop_assert!(fixed_point_equivalent(&y, &x).unwrap().is_some());
        let total: u64 = m.unwrap().iter().map(|e| e.2).sum();
        prop_assert_eq!(total as u128, x.count());
    }

    #[test]
    fn equivalence_is_transitive_and_detects_changes(a in points(), b in points()) {
        let (x, y, z) = (space(3, &a), relabelled(3, &a), space(3, &b));
        let xz = fixed_point_equivalent(&x, &z).unwrap().is_some();
        prop_assert_eq!(fixed_point_equivalent(&y, &z).unwrap().is_some(), xz);
        let mut extra = a.clone();
        extra.push((vec![[1, 1], [2, 2]], 1));
        prop_assert!(fixed_point_equivalent(&x, &space(3, &extra)).unwrap().is_none());
    }

    #[test]
    fn projective_line_niceness(c in [0i64..5, 0i64..5]) {
        let rho = character(5, &c);
        let x = GSpace::point(5, 2, &[("L", rho)]).unwrap();
        let y = proj_o_plus_l(&x, "L", "T").unwrap();
        prop_assert_eq!(y.count(), 2);
        prop_assert_eq!(is_nice(&y, &["T"]).unwrap(), !rho.is_trivial());
        prop_assert_eq!(y.positive_dimensional_fixed_locus, rho.is_trivial());
    }

    #[test]
    fn character_group_laws(a in [0i64..7, 0i64..7, 0i64..7], b in [0i64..7, 0i64..7, 0i64..7], k in -10i64..10) {
        let (x, y) = (character(7, &a), character(7, &b));
        prop_assert_eq!(x.add(&y), y.add(&x));
        prop_assert!(x.add(&x.neg()).is_trivial());
        prop_assert_eq!(x.scale(k).add(&y.scale(k)), x.add(&y).scale(k));
        prop_assert!(x.scale(7).is_trivial());
    }
}

#[test]
fn fixed_point_counts() {
    let s = build_s_fixed(3, 2).unwrap();
    assert_eq!(s.s(1).count(), 64);
    assert_eq!(s.s(1).dim, 6);
    assert_eq!(s.s(1).classes(), 27);
    let s3 = build_s_fixed(3, 3).unwrap();
    assert_eq!(s3.s(1).count(), 1 << s3.s(1).dim);
    assert_eq!(s3.s(1).dim, 24);
    let (p1, q1) = build_pq_fixed(3, 2, 1).unwrap();
    assert_eq!((p1.dim, q1.dim), (2, 2));
    assert_eq!((p1.count(), q1.count()), (4, 4));
}

#[test]
fn golden_s1_dump() {
    let s = build_s_fixed(3, 2).unwrap();
    assert_eq!(
        s.s(1).to_string(),
        include_str!("golden/s1_fixed_p3_n2.txt")
    );
}

#[test]
fn duplicate_fixed_loci_are_rejected() {
    let x = GSpace::point(3, 1, &[("L", Character::zero(3, 1))]).unwrap();
    let y = proj_o_plus_l(&x, "L", "T").unwrap();
    assert!(fixed_point_equivalent(&y, &y).is_err());
    assert!(GSpace::point(3, 5, &[]).is_err());
    assert!(GSpace::point(4, 1, &[]).is_err());
}

#[test]
fn counting_identity() {
    for p in [3u64, 5, 7] {
        let s = GSpace::point(p, 1, &[("J", Character::basis(p, 1, 0))]).unwrap();
        let ybar = model_ybar_w(&s, "J").unwrap();
        let copies = copies_of_pa_power(&s, "J").unwrap();
        let factorial: u128 = (1..p as u128).product();
        assert_eq!(ybar.count(), (p as u128).pow(p as u32) * factorial);
        assert_eq!(copies.count(), ybar.count());
        assert!(fixed_point_equivalent(&ybar, &copies).unwrap().is_some());
        let qw = model_qw(&s, "J").unwrap();
        assert_eq!(qw.count(), p as u128);
        let pa = proj_kummer(&s, "J").unwrap();
        assert!(fixed_point_equivalent(&qw, &pa).unwrap().is_some());
    }
}

#[test]
fn fiber_probe_accounting() {
    for c in fiber_probe_counts(7, 6, 4, 3, PAIR_BUDGET).unwrap() {
        let last = *c.counts.last().map(|(_, n)| n).unwrap();
        assert!(last <= 54);
        assert_eq!(last + 2 * c.escaped, 54, "{c:?}");
    }
}
