mod common;

use std::collections::BTreeSet;

use common::*;
use polyconnect::connect::one_sum;
use polyconnect::exactlin::{rank, solve_basis};
use polyconnect::polytope::{
    build_skeleton, diameter, enumerate_vertices, feasible_bases, perturb_to_simple, Guardrail,
};
use polyconnect::StdPolyhedron;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_matches_gauss_jordan(m in int_matrix(5, 7, -3, 3)) {
        prop_assert_eq!(rank(&m), gj_rank(&m));
        prop_assert_eq!(rank(&m), rank(&m.transpose()));
    }

    #[test]
    fn solve_basis_agrees_with_oracle(
        m in int_matrix(3, 6, -2, 2),
        rhs in proptest::collection::vec(-4i64..=4, 3),
        pick in proptest::sample::subsequence((0..6).collect::<Vec<_>>(), 3),
    ) {
        let b: Vec<_> = rhs.into_iter().map(r).collect();
        let got = solve_basis(&m, &pick, &b).unwrap();
        let want = gj_solve(&m, &pick, &b);
        prop_assert_eq!(got.as_ref().map(|x| x.to_vec()), want);
        if let Some(x) = got {
            prop_assert_eq!(m.mul_vec(&x).to_vec(), b);
        }
    }

    #[test]
    fn enumeration_matches_brute_force(p in feasible_instance()) {
        let got: BTreeSet<_> = enumerate_vertices(&p).unwrap().into_iter().map(|v| v.coords.to_vec()).collect();
        prop_assert_eq!(got, brute_vertices(&p));
        let bases: BTreeSet<_> = feasible_bases(&p, &Guardrail::default()).unwrap().into_iter().map(|(b, _)| b).collect();
        prop_assert_eq!(bases, brute_basis_set(&p));
    }

    #[test]
    fn skeleton_diameter_matches_bfs_oracle(p in feasible_instance()) {
        let s = build_skeleton(&p).unwrap();
        match graph_diameter(s.len(), &s.edges) {
            Some(d) => prop_assert_eq!(diameter(&s).unwrap(), d),
            None => prop_assert!(diameter(&s).is_err()),
        }
    }

    #[test]
    fn simple_adjacency_is_single_exchange(p in feasible_instance()) {
        let q = perturb_to_simple(&p).unwrap().poly;
        let s = build_skeleton(&q).unwrap();
        prop_assert!(s.simple);
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                let (a, b) = (&s.vertices[i].bases[0], &s.vertices[j].bases[0]);
                let shared = a.iter().filter(|c| b.contains(c)).count();
                prop_assert_eq!(s.is_edge(i, j), shared + 1 == a.len(), "pair {} {}", i, j);
            }
        }
    }

    #[test]
    fn perturbation_is_simple_and_not_smaller(p in feasible_instance()) {
        let pert = perturb_to_simple(&p).unwrap();
        let before = build_skeleton(&p).unwrap();
        let after = build_skeleton(&pert.poly).unwrap();
        prop_assert!(after.simple);
        prop_assert!(after.len() >= before.len());
        prop_assert!(diameter(&after).unwrap() >= diameter(&before).unwrap());
        // every perturbed feasible basis was feasible before
        let old = brute_basis_set(&p);
        prop_assert!(brute_basis_set(&pert.poly).is_subset(&old));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn one_sum_diameters_add(p in simple_polytope(), q in simple_polytope()) {
        let sum = one_sum(&p, &q).unwrap();
        let (dp, dq) = (diameter(&build_skeleton(&p).unwrap()).unwrap(), diameter(&build_skeleton(&q).unwrap()).unwrap());
        let s = build_skeleton(&sum).unwrap();
        prop_assert_eq!(s.len(), build_skeleton(&p).unwrap().len() * build_skeleton(&q).unwrap().len());
        prop_assert_eq!(diameter(&s).unwrap(), dp + dq);
    }
}

#[test]
fn oracle_self_check() {
    // the oracle itself on the hand-worked case
    let p = StdPolyhedron::from_i64(&[&[1, 1, 0], &[1, 2, 1]], &[2, 3]).unwrap();
    let want: BTreeSet<_> = [vec![r(1), r(1), r(0)], vec![r(2), r(0), r(1)]].into_iter().collect();
    assert_eq!(brute_vertices(&p), want);
    assert_eq!(graph_diameter(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]), Some(2));
    assert_eq!(graph_diameter(3, &[(0, 1)]), None);
}
