//! Worked examples for every operation, each checked against an
//! independent computation or a hand derivation.
mod common;

use common::*;
use polyconnect::classify::{
    classify_all, classify_vertex, integrality_check, s_range, Category, Extended,
};
use polyconnect::connect::fixtures::{degenerate_parallel, fix_a, fix_b, pentagon, series_fixture};
use polyconnect::connect::{
    fig1, graphic_connection, linked_two_sum, one_sum, parallel_connect, perturb_connection,
    series_connect, tu_check, ConnectionKind, Digraph, GlueKind, LinkedForm, TuVerdict,
};
use polyconnect::exactlin::{
    normalize_link_column, parse_matrix, rank, rat, solve_basis, LinkPosition, RowOp,
};
use polyconnect::harness::cube;
use polyconnect::polytope::{
    build_skeleton, diameter, enumerate_vertices, estimate_diam_over_rhs, hirsch_bound, is_simple,
    perturb_to_simple, Guardrail, Sense,
};
use polyconnect::walks::{
    lift_walk, non_revisiting_walk, parallel_walk, s_bounded_diameter, s_bounded_distance,
    s_monotone_walk, series_walk, NonRevisiting, SLevels,
};
use polyconnect::{Error, RationalMatrix, RationalVector, Skeleton, StdPolyhedron};

fn q(p: i64, d: i64) -> polyconnect::Rational {
    rat(p, d)
}

fn v(items: &[(i64, i64)]) -> Vec<polyconnect::Rational> {
    items.iter().map(|&(p, d)| q(p, d)).collect()
}

fn ints(items: &[i64]) -> Vec<polyconnect::Rational> {
    items.iter().map(|&x| r(x)).collect()
}

fn at(skel: &Skeleton, coords: &[polyconnect::Rational]) -> usize {
    skel.index_of(coords).expect("vertex present")
}

fn simple_segment() -> (polyconnect::connect::ConnectionInstance, Skeleton) {
    let inst = perturb_connection(&series_fixture(2), &Guardrail::default())
        .unwrap()
        .instance;
    let skel = build_skeleton(&inst.poly).unwrap();
    (inst, skel)
}

// exactlin

#[test]
fn rank_examples() {
    assert_eq!(rank(&RationalMatrix::identity(2)), 2);
    assert_eq!(rank(&RationalMatrix::zeros(3, 4)), 0);
    let m = RationalMatrix::from_i64(&[&[1, 1, 0], &[1, 2, 1]]);
    assert_eq!(rank(&m), 2);
    assert_eq!(gj_rank(&m), 2);
}

#[test]
fn solve_basis_examples() {
    let m = RationalMatrix::from_i64(&[&[1, 1, 0], &[1, 2, 1]]);
    let x = solve_basis(&m, &[0, 1], &ints(&[2, 3])).unwrap().unwrap();
    assert_eq!(x.to_vec(), ints(&[1, 1, 0]));
    assert_eq!(Some(x.to_vec()), gj_solve(&m, &[0, 1], &ints(&[2, 3])));
    let id = RationalMatrix::identity(2);
    assert_eq!(solve_basis(&id, &[0, 1], &ints(&[5, 7])).unwrap().unwrap().to_vec(), ints(&[5, 7]));
    let sing = RationalMatrix::from_i64(&[&[1, 1], &[2, 2]]);
    assert!(solve_basis(&sing, &[0, 1], &ints(&[1, 3])).unwrap().is_none());
    assert!(solve_basis(&m, &[0], &ints(&[2, 3])).is_err());
}

#[test]
fn normalize_examples() {
    let m = RationalMatrix::from_i64(&[&[1, 1, 0], &[1, 2, 1]]);
    let (out, _) = normalize_link_column(&m, 2, LinkPosition::Last).unwrap();
    assert_eq!(out, m);

    let m = RationalMatrix::from_i64(&[&[0, 1], &[1, 1]]);
    let (out, log) = normalize_link_column(&m, 0, LinkPosition::First).unwrap();
    assert_eq!(out, RationalMatrix::from_i64(&[&[1, 1], &[0, 1]]));
    assert!(log.ops.iter().any(|op| matches!(op, RowOp::Swap(..))));
    assert_eq!(log.apply_matrix(&m), out);
    // same null space: stacking adds no rank
    let stacked = m.vstack(&out).unwrap();
    assert_eq!(rank(&stacked), rank(&m));

    let z = RationalMatrix::from_i64(&[&[0, 1], &[0, 2]]);
    assert!(matches!(
        normalize_link_column(&z, 0, LinkPosition::Last),
        Err(Error::LoopElement(0))
    ));
}

#[test]
fn matrix_text_rejects_bad_denominators() {
    assert!(parse_matrix("1 2\n1 1/0\n").is_err());
    assert!(parse_matrix("1 2\n1 1/-2\n").is_err());
    assert_eq!(parse_matrix("1 2\n1 3/6\n").unwrap()[(0, 1)], q(1, 2));
}

// polytope

#[test]
fn enumeration_examples() {
    let seg = StdPolyhedron::from_i64(&[&[1, 1]], &[1]).unwrap();
    let vs: Vec<_> = enumerate_vertices(&seg).unwrap().into_iter().map(|v| v.coords.to_vec()).collect();
    assert_eq!(vs, vec![ints(&[0, 1]), ints(&[1, 0])]);

    let fa = StdPolyhedron::from_i64(&[&[1, 1, 0], &[1, 2, 1]], &[2, 3]).unwrap();
    let vs: Vec<_> = enumerate_vertices(&fa).unwrap().into_iter().map(|v| v.coords.to_vec()).collect();
    assert_eq!(vs, vec![ints(&[1, 1, 0]), ints(&[2, 0, 1])]);

    let c3 = enumerate_vertices(&cube(3)).unwrap();
    assert_eq!(c3.len(), 8);
    assert!(c3.iter().all(|v| v.coords.support().len() == 3));
}

#[test]
fn simplicity_examples() {
    assert!(is_simple(&cube(3)).unwrap());
    assert!(!is_simple(&degenerate_parallel().poly).unwrap());
    let degenerate = enumerate_vertices(&degenerate_parallel().poly).unwrap();
    let bad = degenerate.iter().find(|v| v.coords.to_vec() == ints(&[0, 2, 0, 1, 0])).unwrap();
    assert!(bad.bases.len() > 1);
    let origin = StdPolyhedron::from_i64(&[&[1, 1]], &[0]).unwrap();
    assert!(!is_simple(&origin).unwrap());
    let empty = StdPolyhedron::from_i64(&[&[1, 1]], &[-1]).unwrap();
    assert!(matches!(is_simple(&empty), Err(Error::Empty)));
}

#[test]
fn perturbation_examples() {
    let c = cube(3);
    let p = perturb_to_simple(&c).unwrap();
    assert_eq!(p.poly, c);
    assert!(p.epsilon.is_none());

    let deg = degenerate_parallel().poly;
    let p = perturb_to_simple(&deg).unwrap();
    assert!(is_simple(&p.poly).unwrap());
    assert!(enumerate_vertices(&p.poly).unwrap().len() >= enumerate_vertices(&deg).unwrap().len());

    let origin = StdPolyhedron::from_i64(&[&[1, 1]], &[0]).unwrap();
    let p = perturb_to_simple(&origin).unwrap();
    let eps = p.epsilon.clone().unwrap();
    assert_eq!(p.poly.b().to_vec(), vec![eps]);
    assert_eq!(enumerate_vertices(&p.poly).unwrap().len(), 2);
    assert!(p.preserves_bases);
}

#[test]
fn skeleton_and_diameter_examples() {
    let seg = build_skeleton(&StdPolyhedron::from_i64(&[&[1, 1]], &[1]).unwrap()).unwrap();
    assert_eq!(seg.edges, vec![(0, 1)]);
    assert_eq!(diameter(&seg).unwrap(), 1);

    let c3 = build_skeleton(&cube(3)).unwrap();
    assert_eq!((c3.len(), c3.edges.len()), (8, 12));
    assert!((0..8).all(|i| c3.neighbors(i).len() == 3));
    assert_eq!(diameter(&c3).unwrap(), 3);

    let pent = build_skeleton(&pentagon().poly).unwrap();
    assert_eq!((pent.len(), pent.edges.len()), (5, 5));
    assert!((0..5).all(|i| pent.neighbors(i).len() == 2));
    assert_eq!(graph_diameter(5, &pent.edges), Some(2));
    assert_eq!(diameter(&pent).unwrap(), 2);
}

#[test]
fn sampled_diameter_examples() {
    let one = RationalMatrix::from_i64(&[&[1, 1]]);
    assert_eq!(estimate_diam_over_rhs(&one, 10, 1).unwrap().lower_bound, 1);
    let fa = RationalMatrix::from_i64(&[&[1, 1, 0], &[1, 2, 1]]);
    assert_eq!(estimate_diam_over_rhs(&fa, 20, 1).unwrap().lower_bound, 1);
    let c3 = cube(3);
    assert_eq!(estimate_diam_over_rhs(c3.a(), 20, 1).unwrap().lower_bound, 3);
}

#[test]
fn hirsch_examples() {
    assert_eq!(hirsch_bound(&cube(3)), 3);
    assert_eq!(hirsch_bound(&pentagon().poly), 3);
    assert_eq!(hirsch_bound(&series_fixture(2).poly), 4);
}

// connect

#[test]
fn parallel_examples() {
    let deg = degenerate_parallel();
    assert_eq!(
        *deg.poly.a(),
        RationalMatrix::from_i64(&[&[1, 1, 0, 0, 0], &[1, 2, 1, 1, 0], &[0, 0, 0, 1, 1]])
    );
    assert_eq!(deg.poly.b().to_vec(), ints(&[2, 5, 1]));
    assert_eq!(linked_two_sum(&fix_a(), &fix_b()).unwrap(), *deg.poly.a());

    let pent = build_skeleton(&pentagon().poly).unwrap();
    assert!(pent.simple);
    assert_eq!(diameter(&pent).unwrap(), 2);

    let a = LinkedForm::from_i64(&[&[1, 1]], LinkPosition::Last).unwrap();
    let b = LinkedForm::from_i64(&[&[1, 1]], LinkPosition::First).unwrap();
    let one = parallel_connect(&a, &[], &r(1), &b, &r(1), &[]).unwrap();
    assert_eq!(*one.poly.a(), RationalMatrix::from_i64(&[&[1, 1, 1]]));
    assert_eq!(one.poly.b().to_vec(), ints(&[2]));
    assert_eq!(enumerate_vertices(&one.poly).unwrap().len(), 3);
}

#[test]
fn series_examples() {
    let seg = series_fixture(2);
    assert_eq!(seg.kind, ConnectionKind::Series);
    assert_eq!(
        *seg.poly.a(),
        RationalMatrix::from_i64(&[
            &[1, 1, 0, 0, 0],
            &[1, 2, 1, 0, 0],
            &[0, 0, 1, 1, 0],
            &[0, 0, 0, 1, 1]
        ])
    );
    assert_eq!(seg.poly.b().to_vec(), ints(&[2, 3, 2, 2]));
    let vs: Vec<_> = enumerate_vertices(&seg.poly).unwrap().into_iter().map(|v| v.coords.to_vec()).collect();
    assert_eq!(vs, vec![ints(&[1, 1, 0, 2, 0]), ints(&[2, 0, 1, 1, 1])]);
    assert_eq!(diameter(&build_skeleton(&seg.poly).unwrap()).unwrap(), 1);

    let a0 = LinkedForm::from_i64(&[&[1, 1, 0], &[0, 0, 1]], LinkPosition::Last).unwrap();
    let b0 = LinkedForm::from_i64(&[&[1, 0, 0], &[0, 1, 1]], LinkPosition::First).unwrap();
    let cart = series_connect(&a0, &[r(1)], &r(1), &b0, &r(1), &[r(1)]).unwrap();
    assert_eq!(cart.kind, ConnectionKind::Cartesian);

    let point = series_fixture(1);
    let vs = enumerate_vertices(&point.poly).unwrap();
    assert_eq!(vs.len(), 1);
    assert_eq!(vs[0].coords[2], r(1));
}

#[test]
fn two_sum_examples() {
    let m = RationalMatrix::from_i64(&[&[1, 1], &[0, 2]]);
    let n = RationalMatrix::from_i64(&[&[3, 0], &[1, 1]]);
    assert_eq!(
        polyconnect::connect::two_sum(&m, &n).unwrap(),
        RationalMatrix::from_i64(&[&[1, 3, 0], &[0, 6, 0], &[0, 1, 1]])
    );
    let m0 = RationalMatrix::from_i64(&[&[1, 0], &[0, 0]]);
    let block = polyconnect::connect::two_sum(&m0, &n).unwrap();
    assert_eq!(block, RationalMatrix::from_i64(&[&[1, 0, 0], &[0, 0, 0], &[0, 1, 1]]));
}

#[test]
fn one_sum_examples() {
    let seg = StdPolyhedron::from_i64(&[&[1, 1]], &[1]).unwrap();
    let sq = one_sum(&seg, &seg).unwrap();
    assert_eq!(diameter(&build_skeleton(&sq).unwrap()).unwrap(), 2);

    let qa = StdPolyhedron::from_i64(&[&[1, 1, 0], &[1, 2, 1]], &[2, 3]).unwrap();
    let rb = StdPolyhedron::from_i64(&[&[1, 1, 0], &[0, 1, 1]], &[2, 1]).unwrap();
    let prod = build_skeleton(&one_sum(&qa, &rb).unwrap()).unwrap();
    assert_eq!((prod.len(), diameter(&prod).unwrap()), (4, 2));

    let pent = pentagon().poly;
    let pt = StdPolyhedron::from_i64(&[&[1]], &[1]).unwrap();
    let s = build_skeleton(&one_sum(&pent, &pt).unwrap()).unwrap();
    let p = build_skeleton(&pent).unwrap();
    assert_eq!((s.len(), s.edges.len(), diameter(&s).unwrap()), (p.len(), p.edges.len(), 2));
}

#[test]
fn graphic_examples() {
    let tri = Digraph::new(3, vec![(0, 1, "a"), (1, 2, "b"), (0, 2, "p")]).unwrap();
    let par = graphic_connection(&tri, "p", &tri, "p", GlueKind::Parallel).unwrap();
    assert_eq!((par.graph.nodes, par.graph.arcs.len()), (4, 5));
    let ser = graphic_connection(&tri, "p", &tri, "p", GlueKind::Series).unwrap();
    assert_eq!((ser.graph.nodes, ser.graph.arcs.len()), (5, 5));

    let (g1, g2) = fig1();
    let par = graphic_connection(&g1, "p1", &g2, "p2", GlueKind::Parallel).unwrap();
    let ser = graphic_connection(&g1, "p1", &g2, "p2", GlueKind::Series).unwrap();
    assert_eq!((par.graph.nodes, par.graph.arcs.len()), (9, 14));
    assert_eq!((ser.graph.nodes, ser.graph.arcs.len()), (10, 14));
    for c in [&par, &ser] {
        assert_eq!(tu_check(&c.incidence), TuVerdict::Yes);
    }
}

#[test]
fn tu_examples() {
    assert_eq!(tu_check(&RationalMatrix::from_i64(&[&[1, 1], &[1, -1]])), TuVerdict::No);
    // the entry 2 is itself a bad minor
    assert_eq!(tu_check(&fix_a().matrix().clone()), TuVerdict::No);
    assert_eq!(tu_check(&fix_b().matrix().clone()), TuVerdict::Yes);
    assert_eq!(tu_check(degenerate_parallel().poly.a()), TuVerdict::No);
    assert_eq!(tu_check(&RationalMatrix::identity(3)), TuVerdict::Yes);
}

// classify

#[test]
fn classify_examples() {
    let inst = pentagon();
    let vs = enumerate_vertices(&inst.poly).unwrap();
    let find = |c: &[polyconnect::Rational]| vs.iter().find(|v| v.coords.to_vec() == c).unwrap();
    let p1 = classify_vertex(&inst, find(&v(&[(1, 2), (3, 2), (0, 1), (1, 1), (0, 1)]))).unwrap();
    assert_eq!((p1.category, p1.triple()), (Category::P1, (2, 0, 1)));
    let p2 = classify_vertex(&inst, find(&v(&[(2, 1), (0, 1), (3, 2), (1, 1), (0, 1)]))).unwrap();
    assert_eq!((p2.category, p2.triple()), (Category::P2, (1, 1, 1)));

    let mut counts = std::collections::BTreeMap::new();
    for s in classify_all(&inst, &vs).unwrap() {
        *counts.entry(s.category).or_insert(0) += 1;
    }
    assert_eq!(counts.into_iter().collect::<Vec<_>>(), vec![(Category::P1, 1), (Category::P2, 3), (Category::P3, 1)]);

    // the listed series vertex is degenerate, so it is refused until perturbed
    let seg = series_fixture(2);
    let sv = enumerate_vertices(&seg.poly).unwrap();
    assert!(matches!(classify_vertex(&seg, &sv[0]), Err(Error::Degenerate(_))));
    let (simple, skel) = simple_segment();
    let cats: Vec<_> = classify_all(&simple, &skel.vertices).unwrap().into_iter().map(|s| s.category).collect();
    assert!(cats.iter().all(|c| matches!(c, Category::S1 | Category::S2 | Category::S3)));
}

#[test]
fn s_range_examples() {
    let rg = s_range(&series_fixture(2)).unwrap();
    assert_eq!((rg.s_min_q.clone(), rg.s_max_q.clone()), (r(0), Extended::Finite(r(1))));
    assert_eq!((rg.s_min_r.clone(), rg.s_max_r.clone()), (r(0), Extended::Finite(r(2))));
    assert_eq!((rg.s_min.clone(), rg.s_max.clone(), rg.s_diff.clone()), (r(0), Extended::Finite(r(1)), Some(r(1))));
    assert!(!rg.empty);

    // R forces s in [3, 5]
    let far = series_connect(&fix_a(), &[r(2)], &r(3), &fix_b(), &r(5), &[r(2)]).unwrap();
    assert!(s_range(&far).unwrap().empty);

    // x1 = x2 free along a ray, s = ca + x1
    let open = LinkedForm::from_i64(&[&[1, -1, 0], &[-1, 0, 1]], LinkPosition::Last).unwrap();
    let inst = series_connect(&open, &[r(0)], &r(1), &fix_b(), &r(2), &[r(2)]).unwrap();
    let rg = s_range(&inst).unwrap();
    assert_eq!(rg.s_max_q, Extended::Infinite);
}

#[test]
fn integrality_examples() {
    let (g1, g2) = fig1();
    let (abar, _) = g1.linked_form("p1", LinkPosition::Last).unwrap();
    let (bbar, _) = g2.linked_form("p2", LinkPosition::First).unwrap();
    let ca = vec![r(1); abar.m() - 1];
    let cb = vec![r(0); bbar.m() - 1];
    let net = parallel_connect(&abar, &ca, &r(1), &bbar, &r(1), &cb).unwrap();
    assert!(integrality_check(&net.poly).unwrap());
    assert!(!integrality_check(&pentagon().poly).unwrap());
    let empty = StdPolyhedron::from_i64(&[&[1, 1]], &[-1]).unwrap();
    assert!(integrality_check(&empty).unwrap());
}

// walks

#[test]
fn lift_examples() {
    let inst = pentagon();
    let y = ints(&[1, 0]);
    let t = &(&inst.ca + &inst.cb) - inst.bbar.link_row().dot(&y[..]);
    let qt = inst.q_at(&t).unwrap();
    let qs = build_skeleton(&qt).unwrap();
    let a = at(&qs, &v(&[(2, 1), (0, 1), (3, 2)]));
    let b = at(&qs, &v(&[(1, 2), (3, 2), (0, 1)]));
    let skel = build_skeleton(&inst.poly).unwrap();
    let w = lift_walk(&inst, &skel, &[qs.coords(a).clone(), qs.coords(b).clone()], &RationalVector::new(y.clone())).unwrap();
    assert_eq!(w.length, 1);
    assert_eq!(w.vertices, vec![
        at(&skel, &v(&[(2, 1), (0, 1), (3, 2), (1, 1), (0, 1)])),
        at(&skel, &v(&[(1, 2), (3, 2), (0, 1), (1, 1), (0, 1)])),
    ]);
    let single = lift_walk(&inst, &skel, &[qs.coords(a).clone()], &RationalVector::new(y)).unwrap();
    assert_eq!(single.length, 0);
    let too_many = RationalVector::new(v(&[(1, 2), (1, 2)]));
    assert!(lift_walk(&inst, &skel, &[qs.coords(a).clone()], &too_many).is_err());
}

#[test]
fn parallel_walk_examples() {
    let inst = pentagon();
    let skel = build_skeleton(&inst.poly).unwrap();
    let splits = classify_all(&inst, &skel.vertices).unwrap();
    let p2: Vec<usize> = (0..5).filter(|&i| splits[i].category == Category::P2).collect();
    for &u in &p2 {
        for &w in &p2 {
            if u != w {
                let pw = parallel_walk(&inst, &skel, u, w).unwrap();
                assert!(pw.record.within_bound());
                assert!(pw.record.length <= pw.len_q + pw.len_r);
                assert!(skel.is_walk(&pw.record.vertices));
            }
        }
    }
    let p1 = (0..5).find(|&i| splits[i].category == Category::P1).unwrap();
    let p3 = (0..5).find(|&i| splits[i].category == Category::P3).unwrap();
    let pw = parallel_walk(&inst, &skel, p1, p3).unwrap();
    assert!(pw.record.within_bound());
    assert!(skel.distance(p1, p3).unwrap() <= pw.record.length);
    assert!(parallel_walk(&inst, &skel, p1, p1).is_err());
}

#[test]
fn non_revisiting_examples() {
    let c3 = build_skeleton(&cube(3)).unwrap();
    let far = (0..8).find(|&i| c3.distance(0, i) == Some(3)).unwrap();
    let w = non_revisiting_walk(&c3, 0, far).unwrap().found().cloned().unwrap();
    assert_eq!(w.length, 3);
    let w = non_revisiting_walk(&c3, 0, c3.neighbors(0)[0]).unwrap().found().cloned().unwrap();
    assert_eq!(w.length, 1);
    let pent = build_skeleton(&pentagon().poly).unwrap();
    let two = (0..5).find(|&i| pent.distance(0, i) == Some(2)).unwrap();
    match non_revisiting_walk(&pent, 0, two).unwrap() {
        NonRevisiting::Found(w) => assert_eq!(w.length, 2),
        other => panic!("expected a walk, got {other:?}"),
    }
}

#[test]
fn s_monotone_examples() {
    let seg = series_fixture(2);
    let skel = build_skeleton(&seg.poly).unwrap();
    let start = at(&skel, &ints(&[1, 1, 0, 2, 0]));
    let w = s_monotone_walk(&seg.poly, &skel, start, seg.split.s, Sense::Max).unwrap();
    assert_eq!(w.length, 1);
    assert_eq!(skel.coords(w.end()).to_vec(), ints(&[2, 0, 1, 1, 1]));
    let w = s_monotone_walk(&seg.poly, &skel, w.end(), seg.split.s, Sense::Max).unwrap();
    assert_eq!(w.length, 0);
}

#[test]
fn s_bounded_examples() {
    let seg = series_fixture(2);
    let skel = build_skeleton(&seg.poly).unwrap();
    let lv = SLevels::new(&seg.poly, &skel, seg.split.s).unwrap();
    let low = at(&skel, &ints(&[1, 1, 0, 2, 0]));
    let res = s_bounded_distance(&skel, &lv, low);
    assert_eq!((res.to_max, res.to_min, res.d_b), (Some(1), Some(0), Some(1)));
    assert_eq!(s_bounded_distance(&skel, &lv, 1 - low).to_max, Some(0));
    assert_eq!(s_bounded_diameter(&skel, &lv), Some(1));

    let pt = series_fixture(1);
    let ps = build_skeleton(&pt.poly).unwrap();
    let lv = SLevels::new(&pt.poly, &ps, pt.split.s).unwrap();
    assert_eq!(s_bounded_diameter(&ps, &lv), Some(0));

    let c3 = cube(3);
    let cs = build_skeleton(&c3).unwrap();
    let lv = SLevels::new(&c3, &cs, 0).unwrap();
    assert_eq!(s_bounded_diameter(&cs, &lv), Some(1));
}

#[test]
fn series_walk_examples() {
    let (inst, skel) = simple_segment();
    assert_eq!(skel.len(), 2);
    let w = series_walk(&inst, &skel, 0, 1, false).unwrap();
    assert_eq!(w.record.length, 1);
    assert!(w.record.within_bound());
    assert!(series_walk(&pentagon(), &build_skeleton(&pentagon().poly).unwrap(), 0, 1, false).is_err());
}
