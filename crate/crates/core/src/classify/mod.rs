//! Basis-split categories of connection vertices and the range of the
//! shared variable.

use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::connect::{ConnectionInstance, ConnectionKind};
use crate::error::{Error, Result};
use crate::exactlin::{as_string, opt_as_string, Rational};
use crate::polytope::{
    coordinate_objective, enumerate_vertices, optimize, LpOutcome, Sense, StdPolyhedron,
    VertexRecord,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Category {
    P1,
    P2,
    P3,
    S1,
    S2,
    S3,
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Basic variables per block of a nondegenerate connection vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisSplit {
    pub x_count: usize,
    pub s_basic: bool,
    pub y_count: usize,
    pub category: Category,
    /// Series only: `(x, s)` is a vertex of `Q` and `(s, y)` a vertex of `R`
    /// at the same time.
    pub overlap: bool,
}

impl BasisSplit {
    pub fn triple(&self) -> (usize, usize, usize) {
        (self.x_count, usize::from(self.s_basic), self.y_count)
    }
}

/// Counts `(x, s, y)` basic variables of a basis.
pub fn split_counts(inst: &ConnectionInstance, basis: &[usize]) -> (usize, bool, usize) {
    let x = basis.iter().filter(|j| inst.split.x.contains(j)).count();
    let s = basis.contains(&inst.split.s);
    let y = basis.iter().filter(|j| inst.split.y.contains(j)).count();
    (x, s, y)
}

pub fn classify_vertex(inst: &ConnectionInstance, v: &VertexRecord) -> Result<BasisSplit> {
    let m = inst.poly.m();
    if !v.is_nondegenerate(m) {
        return Err(Error::Degenerate(v.coords.to_string()));
    }
    let basis = v.unique_basis().expect("nondegenerate");
    let (x, s, y) = split_counts(inst, basis);
    let (m1, m2) = (inst.m1(), inst.m2());
    let category = match inst.kind {
        ConnectionKind::Parallel => match (x, s, y) {
            _ if (x, s, y) == (m1, false, m2 - 1) => Category::P1,
            _ if (x + 1, s, y + 1) == (m1, true, m2) => Category::P2,
            _ if (x + 1, s, y) == (m1, false, m2) => Category::P3,
            _ => {
                return Err(Error::invariant(format!(
                    "parallel split ({x}, {}, {y}) outside P1/P2/P3",
                    u8::from(s)
                )))
            }
        },
        ConnectionKind::Series => match (x, s, y) {
            _ if (x, s, y) == (m1, false, m2) => Category::S1,
            _ if (x, s, y + 1) == (m1, true, m2) => Category::S2,
            _ if (x + 1, s, y) == (m1, true, m2) => Category::S3,
            _ => {
                return Err(Error::invariant(format!(
                    "series split ({x}, {}, {y}) outside S1/S2/S3",
                    u8::from(s)
                )))
            }
        },
        ConnectionKind::Cartesian => {
            return Err(Error::Input(
                "cartesian instances have no split categories".into(),
            ))
        }
    };
    // both projections vertices: supports of (x,s) and (s,y) within m1 and m2
    let overlap = inst.kind == ConnectionKind::Series && s && {
        let xs = inst.xs_of(&v.coords).support().len();
        let sy = inst.sy_of(&v.coords).support().len();
        xs <= m1 && sy <= m2
    };
    Ok(BasisSplit {
        x_count: x,
        s_basic: s,
        y_count: y,
        category,
        overlap,
    })
}

/// Classifies every vertex (in parallel, order preserved).
pub fn classify_all(
    inst: &ConnectionInstance,
    vertices: &[VertexRecord],
) -> Result<Vec<BasisSplit>> {
    vertices
        .par_iter()
        .map(|v| classify_vertex(inst, v))
        .collect()
}

/// `s` value bound that may be `+inf`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extended {
    Finite(#[serde(with = "as_string")] Rational),
    Infinite,
}

impl Extended {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinite => None,
        }
    }

    pub fn min(a: &Extended, b: &Extended) -> Extended {
        match (a, b) {
            (Extended::Infinite, x) | (x, Extended::Infinite) => x.clone(),
            (Extended::Finite(x), Extended::Finite(y)) => Extended::Finite(x.min(y).clone()),
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => write!(f, "{v}"),
            Extended::Infinite => f.write_str("inf"),
        }
    }
}

/// Extremes of the shared variable on both sides and on the connection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SRange {
    #[serde(with = "as_string")]
    pub s_min_q: Rational,
    pub s_max_q: Extended,
    #[serde(with = "as_string")]
    pub s_min_r: Rational,
    pub s_max_r: Extended,
    #[serde(with = "as_string")]
    pub s_min: Rational,
    pub s_max: Extended,
    /// `s_max - s_min` when finite and nonnegative.
    #[serde(with = "opt_as_string")]
    pub s_diff: Option<Rational>,
    /// `s_max < s_min`: the series polyhedron is empty.
    pub empty: bool,
}

fn extreme(p: &StdPolyhedron, j: usize, sense: Sense) -> Result<Extended> {
    match optimize(p, &coordinate_objective(p.n(), j), sense)? {
        LpOutcome::Optimal { value, .. } => Ok(Extended::Finite(value)),
        LpOutcome::Unbounded { .. } => Ok(Extended::Infinite),
        LpOutcome::Infeasible => Err(Error::Empty),
    }
}

fn finite_min(p: &StdPolyhedron, j: usize) -> Result<Rational> {
    match extreme(p, j, Sense::Min)? {
        Extended::Finite(v) => Ok(v),
        // s >= 0, so the minimum is always finite
        Extended::Infinite => Err(Error::invariant(
            "minimum of a nonnegative variable unbounded",
        )),
    }
}

/// Exact LP extremes of `s` over `Q` and `R`.
pub fn s_range(inst: &ConnectionInstance) -> Result<SRange> {
    if inst.kind == ConnectionKind::Parallel {
        return Err(Error::Input(
            "s range is defined for series connections".into(),
        ));
    }
    let q = inst.q_poly()?;
    let r = inst.r_poly()?;
    let sq = q.n() - 1;
    let s_min_q = finite_min(&q, sq)?;
    let s_max_q = extreme(&q, sq, Sense::Max)?;
    let s_min_r = finite_min(&r, 0)?;
    let s_max_r = extreme(&r, 0, Sense::Max)?;
    let s_min = s_min_q.clone().max(s_min_r.clone());
    let s_max = Extended::min(&s_max_q, &s_max_r);
    let empty = s_max.finite().is_some_and(|m| *m < s_min);
    let s_diff = s_max.finite().filter(|_| !empty).map(|m| m - &s_min);
    Ok(SRange {
        s_min_q,
        s_max_q,
        s_min_r,
        s_max_r,
        s_min,
        s_max,
        s_diff,
        empty,
    })
}

/// Every vertex integral (vacuous when there are none).
pub fn integrality_check_vertices(vertices: &[VertexRecord]) -> bool {
    vertices.iter().all(|v| v.coords.is_integral())
}

pub fn integrality_check(p: &StdPolyhedron) -> Result<bool> {
    Ok(integrality_check_vertices(&enumerate_vertices(p)?))
}

/// Shared-variable value of a point.
pub fn s_value(inst: &ConnectionInstance, coords: &[Rational]) -> Rational {
    coords
        .get(inst.split.s)
        .cloned()
        .unwrap_or_else(Rational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connect::fixtures::{degenerate_parallel, fix_a, fix_b, pentagon, series_fixture};
    use crate::connect::{perturb_connection, series_connect};
    use crate::exactlin::{rat, RationalVector};
    use crate::polytope::Guardrail;

    fn vertex(inst: &ConnectionInstance, coords: &[Rational]) -> VertexRecord {
        enumerate_vertices(&inst.poly)
            .unwrap()
            .into_iter()
            .find(|v| v.coords.as_slice() == coords)
            .unwrap()
    }

    fn q(p: i64, d: i64) -> Rational {
        rat(p, d)
    }

    #[test]
    fn pentagon_categories() {
        let inst = pentagon();
        let v1 = vertex(&inst, &[q(1, 2), q(3, 2), q(0, 1), q(1, 1), q(0, 1)]);
        let c = classify_vertex(&inst, &v1).unwrap();
        assert_eq!((c.triple(), c.category), ((2, 0, 1), Category::P1));
        let v2 = vertex(&inst, &[q(2, 1), q(0, 1), q(3, 2), q(1, 1), q(0, 1)]);
        let c = classify_vertex(&inst, &v2).unwrap();
        assert_eq!((c.triple(), c.category), ((1, 1, 1), Category::P2));
        let all = classify_all(&inst, &enumerate_vertices(&inst.poly).unwrap()).unwrap();
        let count = |k| all.iter().filter(|s| s.category == k).count();
        assert_eq!(
            (
                count(Category::P1),
                count(Category::P2),
                count(Category::P3)
            ),
            (1, 3, 1)
        );
    }

    #[test]
    fn degenerate_vertices_refused() {
        let inst = degenerate_parallel();
        let v = vertex(&inst, &[q(0, 1), q(2, 1), q(0, 1), q(1, 1), q(0, 1)]);
        assert!(matches!(
            classify_vertex(&inst, &v),
            Err(Error::Degenerate(_))
        ));
        // the series segment endpoint (1,1,0,2,0) is degenerate too
        let s = series_fixture(2);
        let v = vertex(&s, &RationalVector::from_i64(&[1, 1, 0, 2, 0]));
        assert!(matches!(classify_vertex(&s, &v), Err(Error::Degenerate(_))));
    }

    #[test]
    fn series_after_perturbation() {
        let s = perturb_connection(&series_fixture(2), &Guardrail::default())
            .unwrap()
            .instance;
        let vs = enumerate_vertices(&s.poly).unwrap();
        let cats: Vec<Category> = vs
            .iter()
            .map(|v| classify_vertex(&s, v).unwrap())
            .inspect(|c| assert!(!c.overlap))
            .map(|c| c.category)
            .collect();
        // s moves off zero at the split vertex, so both ends have s basic
        assert_eq!(cats, vec![Category::S2, Category::S3]);
    }

    #[test]
    fn series_range() {
        let r = s_range(&series_fixture(2)).unwrap();
        assert_eq!(r.s_min_q, q(0, 1));
        assert_eq!(r.s_max_q, Extended::Finite(q(1, 1)));
        assert_eq!(r.s_min_r, q(0, 1));
        assert_eq!(r.s_max_r, Extended::Finite(q(2, 1)));
        assert_eq!(
            (r.s_min.clone(), r.s_max.clone()),
            (q(0, 1), Extended::Finite(q(1, 1)))
        );
        assert_eq!(r.s_diff, Some(q(1, 1)));
        assert!(!r.empty);
    }

    #[test]
    fn disjoint_and_unbounded_ranges() {
        // R forces s >= 3 while Q allows s <= 1
        let r = s_range(
            &series_connect(
                &fix_a(),
                &[q(2, 1)],
                &q(3, 1),
                &fix_b(),
                &q(5, 1),
                &[q(2, 1)],
            )
            .unwrap(),
        )
        .unwrap();
        assert_eq!(r.s_min_r, q(3, 1));
        assert!(r.empty);
        assert_eq!(r.s_diff, None);
        // Q = {x1 - x2 ... }: a free direction in s
        let abar = crate::connect::LinkedForm::from_i64(
            &[&[1, -1, 0], &[0, -1, 1]],
            crate::exactlin::LinkPosition::Last,
        )
        .unwrap();
        let inst =
            series_connect(&abar, &[q(1, 1)], &q(0, 1), &fix_b(), &q(2, 1), &[q(2, 1)]).unwrap();
        let r = s_range(&inst).unwrap();
        assert_eq!(r.s_max_q, Extended::Infinite);
        assert_eq!(r.s_max, Extended::Finite(q(2, 1)));
    }

    #[test]
    fn integrality() {
        assert!(!integrality_check(&pentagon().poly).unwrap());
        assert!(integrality_check(&series_fixture(2).poly).unwrap());
        let empty = StdPolyhedron::from_i64(&[&[1, 1]], &[-1]).unwrap();
        assert!(integrality_check(&empty).unwrap());
    }
}
