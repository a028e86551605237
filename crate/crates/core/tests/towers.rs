use chain_core::report::Status;
use chain_core::towers::{
    check_dims, cor22_check, cor22_expansion, pipeline_degrees, pq_dims_recursive, s_dim_recursive,
    verify_lem19, verify_part6_n2, TowerDims,
};
use proptest::prelude::*;

fn degrees(p: u64, n: u32) -> Vec<(u32, u64, u64)> {
    pipeline_degrees(p, n)
        .unwrap()
        .into_iter()
        .map(|l| (l.i, l.dim_s_i, l.degree.residue()))
        .collect()
}

#[test]
fn frozen_pipeline_degrees() {
    assert_eq!(degrees(3, 2), vec![(1, 6, 2)]);
    assert_eq!(degrees(3, 3), vec![(2, 18, 2), (1, 24, 1)]);
    assert_eq!(degrees(5, 2), vec![(1, 20, 4)]);
    assert_eq!(degrees(5, 3), vec![(2, 100, 4), (1, 120, 1)]);
    for p in [3, 5] {
        for l in pipeline_degrees(p, 3).unwrap() {
            assert_eq!(l.coefficient.residue(), 1);
            assert!(l.degree.is_unit());
        }
    }
}

#[test]
fn frozen_small_dims() {
    assert_eq!(pq_dims_recursive(3, 1), (2, 2));
    assert_eq!(pq_dims_recursive(3, 2), (6, 8));
    assert_eq!(pq_dims_recursive(5, 3), (100, 124));
    assert_eq!(s_dim_recursive(3, 3, 1), 24);
    assert_eq!(s_dim_recursive(7, 2, 1), 42);
}

#[test]
fn coefficient_is_one() {
    let (c, stray) = cor22_expansion(3, 2).unwrap();
    assert_eq!(c.residue(), 1);
    assert!(stray.is_empty());
    assert_eq!(cor22_check(3, 2).status, Status::Pass);
    assert_eq!(cor22_check(7, 2).status, Status::SkippedCapacity);
}

#[test]
fn part6_is_flagged_with_unit_degree() {
    let r = verify_part6_n2(3, 1 << 24);
    assert_eq!(r.status, Status::DiscrepancyFlagged);
    assert!(r
        .computed
        .starts_with("deg=2 (full expansion), 2 (zeta route)"));
}

#[test]
fn invalid_parameters_are_errors() {
    assert!(TowerDims::new(4, 2, 1).is_err());
    assert!(TowerDims::new(3, 0, 1).is_err());
    assert!(pipeline_degrees(2, 2).is_err());
    assert_eq!(verify_lem19(9, 1).status, Status::Fail);
}

proptest! {
    #[test]
    fn dims_closed_forms_match_recursions(pi in 0usize..4, n in 1u32..5, r in 1u32..5) {
        let p = [3u64, 5, 7, 11][pi];
        let d = TowerDims::new(p, n, r).unwrap();
        prop_assert_eq!(pq_dims_recursive(p, r), (d.p_rel, d.q_rel));
        prop_assert_eq!(s_dim_recursive(p, n, 1), d.dim_s);
        for i in 1..=n {
            prop_assert_eq!(s_dim_recursive(p, n, i), d.s_over_sn[(i - 1) as usize]);
        }
        prop_assert_eq!(d.dim_ybar, p * d.dim_s + (p - 1) * p);
        prop_assert_eq!(check_dims(p, n, r).status, Status::Pass);
    }
}
