//! Independent brute-force oracles shared by the integration tests. Nothing
//! here calls into the elimination or enumeration code under test.
#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use num_traits::{One, Zero};
use polyconnect::exactlin::rat;
use polyconnect::{Rational, RationalMatrix, StdPolyhedron};
use proptest::prelude::*;

pub fn r(v: i64) -> Rational {
    rat(v, 1)
}

pub fn dense(m: &RationalMatrix) -> Vec<Vec<Rational>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

/// Reduced row echelon form by plain Gauss-Jordan over the rationals;
/// returns the pivot columns.
pub fn rref(rows: &mut [Vec<Rational>]) -> Vec<usize> {
    let (m, n) = (rows.len(), rows.first().map_or(0, Vec::len));
    let mut pivots = Vec::new();
    let mut r0 = 0;
    for c in 0..n {
        if r0 == m {
            break;
        }
        let Some(p) = (r0..m).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r0, p);
        let inv = Rational::one() / &rows[r0][c];
        for x in rows[r0].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m {
            if i != r0 && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..n {
                    let d = &f * &rows[r0][j];
                    rows[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r0 += 1;
    }
    pivots
}

pub fn gj_rank(m: &RationalMatrix) -> usize {
    rref(&mut dense(m)).len()
}

/// Unique solution of `A[:, cols] x = b` embedded into `n` coordinates.
pub fn gj_solve(a: &RationalMatrix, cols: &[usize], b: &[Rational]) -> Option<Vec<Rational>> {
    let mut aug: Vec<Vec<Rational>> = (0..a.rows())
        .map(|i| {
            let mut row: Vec<Rational> = cols.iter().map(|&j| a.row(i)[j].clone()).collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.len() != cols.len() || piv.contains(&cols.len()) {
        return None;
    }
    let mut x = vec![Rational::zero(); a.cols()];
    for (k, &j) in cols.iter().enumerate() {
        x[j] = aug[k][cols.len()].clone();
    }
    Some(x)
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Every feasible basis with its point.
pub fn brute_bases(p: &StdPolyhedron) -> Vec<(Vec<usize>, Vec<Rational>)> {
    subsets(p.n(), p.m())
        .into_iter()
        .filter_map(|cols| {
            let x = gj_solve(p.a(), &cols, p.b())?;
            x.iter().all(|v| *v >= Rational::zero()).then_some((cols, x))
        })
        .collect()
}

pub fn brute_vertices(p: &StdPolyhedron) -> BTreeSet<Vec<Rational>> {
    brute_bases(p).into_iter().map(|(_, x)| x).collect()
}

pub fn brute_basis_set(p: &StdPolyhedron) -> BTreeSet<Vec<usize>> {
    brute_bases(p).into_iter().map(|(b, _)| b).collect()
}

/// All-pairs BFS diameter of an undirected graph; `None` if disconnected.
pub fn graph_diameter(n: usize, edges: &[(usize, usize)]) -> Option<usize> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut best = 0;
    for s in 0..n {
        let mut d = vec![usize::MAX; n];
        d[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &w in &adj[u] {
                if d[w] == usize::MAX {
                    d[w] = d[u] + 1;
                    q.push_back(w);
                }
            }
        }
        if d.contains(&usize::MAX) {
            return None;
        }
        best = best.max(*d.iter().max().unwrap_or(&0));
    }
    Some(best)
}

/// Small integer matrix strategy (entries in `lo..=hi`).
pub fn int_matrix(rows: usize, cols: usize, lo: i64, hi: i64) -> impl Strategy<Value = RationalMatrix> {
    proptest::collection::vec(lo..=hi, rows * cols).prop_map(move |v| {
        RationalMatrix::with_shape(rows, cols, v.into_iter().map(r).collect()).expect("shape")
    })
}

/// Random full-row-rank standard-form instance with `b = A z`, `z >= 0`
/// (so it is nonempty); `m <= 4`, `n <= 7`.
pub fn feasible_instance() -> impl Strategy<Value = StdPolyhedron> {
    (1usize..=4, 0usize..=3)
        .prop_flat_map(|(m, extra)| {
            let n = (m + extra).min(7).max(m);
            (int_matrix(m, n, -2, 3), proptest::collection::vec(0i64..=2, n))
        })
        .prop_filter_map("rank deficient", |(a, z)| {
            if gj_rank(&a) < a.rows() {
                return None;
            }
            let zr: Vec<Rational> = z.into_iter().map(r).collect();
            StdPolyhedron::new(a.clone(), a.mul_vec(&zr)).ok()
        })
}

/// Random simple polytopes from perturbed `b = A z` draws with a positive
/// first row, so each factor is bounded.
pub fn simple_polytope() -> impl Strategy<Value = StdPolyhedron> {
    (1usize..=2, 1usize..=2)
        .prop_flat_map(|(m, extra)| {
            let n = m + extra;
            (
                proptest::collection::vec(1i64..=2, n),
                int_matrix(m - 1, n, -2, 2),
                proptest::collection::vec(0i64..=2, n),
            )
        })
        .prop_filter_map("rank deficient", |(top, rest, z)| {
            let mut rows = vec![top.into_iter().map(r).collect::<Vec<_>>()];
            rows.extend(dense(&rest));
            let a = RationalMatrix::from_rows(rows).ok()?;
            if gj_rank(&a) < a.rows() {
                return None;
            }
            let zr: Vec<_> = z.into_iter().map(r).collect();
            let p = StdPolyhedron::new(a.clone(), a.mul_vec(&zr)).ok()?;
            Some(polyconnect::polytope::perturb_to_simple(&p).ok()?.poly)
        })
}

/// Instances with `b = A z` where `z` has fewer than `m` nonzeros, so the
/// vertex at `z` is degenerate; kept only when enumeration confirms it.
pub fn degenerate_instance() -> impl Strategy<Value = StdPolyhedron> {
    (2usize..=4, 1usize..=3)
        .prop_flat_map(|(m, extra)| {
            let n = (m + extra).min(7);
            (
                proptest::collection::vec(1i64..=2, n),
                int_matrix(m - 1, n, -2, 3),
                proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 0..m),
                proptest::collection::vec(1i64..=2, m),
            )
        })
        .prop_filter_map("not degenerate", |(top, rest, support, vals)| {
            let mut rows = vec![top.into_iter().map(r).collect::<Vec<_>>()];
            rows.extend(dense(&rest));
            let a = RationalMatrix::from_rows(rows).ok()?;
            if gj_rank(&a) < a.rows() {
                return None;
            }
            let mut z = vec![Rational::zero(); a.cols()];
            for (j, v) in support.iter().zip(vals) {
                z[*j] = r(v);
            }
            let p = StdPolyhedron::new(a.clone(), a.mul_vec(&z)).ok()?;
            let short = brute_vertices(&p).iter().any(|x| x.iter().filter(|v| !v.is_zero()).count() < p.m());
            short.then_some(p)
        })
}
