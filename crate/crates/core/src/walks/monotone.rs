use num_traits::{One, Signed};

use crate::classify::integrality_check_vertices;
use crate::error::{Error, Result};
use crate::exactlin::Rational;
use crate::polytope::{primal_simplex, BasisTableau, Sense, Skeleton, StdPolyhedron};

use super::record::WalkRecord;

/// Simplex walk from `start` optimizing coordinate `s_col` (Bland's rule).
/// Degenerate pivots are collapsed, so the walk lists distinct vertices.
pub fn s_monotone_walk(
    p: &StdPolyhedron,
    skel: &Skeleton,
    start: usize,
    s_col: usize,
    sense: Sense,
) -> Result<WalkRecord> {
    if start >= skel.len() {
        return Err(Error::Input("vertex index out of range".into()));
    }
    if s_col >= p.n() {
        return Err(Error::Dimension(format!("column {s_col} out of range")));
    }
    let basis = skel.vertices[start].bases[0].clone();
    let mut t = BasisTableau::from_poly(p, &basis)
        .ok_or_else(|| Error::invariant("vertex basis is singular"))?;
    let mut c = vec![Rational::default(); p.n()];
    c[s_col] = match sense {
        Sense::Max => Rational::one(),
        Sense::Min => -Rational::one(),
    };
    let trace = primal_simplex(&mut t, &c);
    if let Some(ray) = trace.unbounded {
        return Err(Error::Unbounded { ray });
    }
    let mut walk: Vec<usize> = Vec::new();
    for pt in &trace.points {
        let i = skel
            .index_of(pt)
            .ok_or_else(|| Error::invariant("simplex point is not a vertex"))?;
        if walk.last() != Some(&i) {
            walk.push(i);
        }
    }
    let s_at = |v: usize| skel.coords(v)[s_col].clone();
    for w in walk.windows(2) {
        let step = s_at(w[1]) - s_at(w[0]);
        let improving = match sense {
            Sense::Max => step.is_positive(),
            Sense::Min => step.is_negative(),
        };
        if !improving {
            return Err(Error::invariant("simplex step did not improve s"));
        }
    }
    let record = WalkRecord::new(walk, "s-monotone", None);
    if integrality_check_vertices(&skel.vertices) {
        let span = (s_at(record.end()) - s_at(start)).abs();
        if Rational::from_integer(record.length.into()) > span {
            return Err(Error::invariant(format!(
                "integral s-monotone walk of length {} exceeds the s span {span}",
                record.length
            )));
        }
    }
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connect::fixtures::series_fixture;
    use crate::exactlin::rat;
    use crate::polytope::build_skeleton;

    fn at(skel: &Skeleton, c: &[i64]) -> usize {
        let v: Vec<Rational> = c.iter().map(|&x| rat(x, 1)).collect();
        skel.index_of(&v).unwrap()
    }

    #[test]
    fn series_fixture_one_step_up() {
        let inst = series_fixture(2);
        let skel = build_skeleton(&inst.poly).unwrap();
        let start = at(&skel, &[1, 1, 0, 2, 0]);
        let w = s_monotone_walk(&inst.poly, &skel, start, inst.split.s, Sense::Max).unwrap();
        assert_eq!(w.length, 1);
        assert_eq!(w.end(), at(&skel, &[2, 0, 1, 1, 1]));
    }

    #[test]
    fn optimal_start_has_length_zero() {
        let inst = series_fixture(2);
        let skel = build_skeleton(&inst.poly).unwrap();
        let start = at(&skel, &[2, 0, 1, 1, 1]);
        let w = s_monotone_walk(&inst.poly, &skel, start, inst.split.s, Sense::Max).unwrap();
        assert_eq!(w.length, 0);
    }

    #[test]
    fn unbounded_direction_carries_ray() {
        let p = StdPolyhedron::from_i64(&[&[1, -1]], &[0]).unwrap();
        let skel = build_skeleton(&p).unwrap();
        let err = s_monotone_walk(&p, &skel, 0, 0, Sense::Max).unwrap_err();
        assert!(matches!(err, Error::Unbounded { .. }));
    }
}
