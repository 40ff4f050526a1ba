use crate::connect::{ConnectionInstance, ConnectionKind};
use crate::error::{Error, Result};
use crate::exactlin::{Rational, RationalVector};
use crate::polytope::Skeleton;

use super::record::WalkRecord;

/// Maps connection points to skeleton indices, checking each step is an edge.
pub(crate) fn lift_points(skel: &Skeleton, points: &[RationalVector]) -> Result<Vec<usize>> {
    let mut out = Vec::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        let idx = skel.index_of(p).ok_or_else(|| Error::LiftFailed {
            index: i,
            reason: format!("{p} is not a vertex"),
        })?;
        if let Some(&prev) = out.last() {
            if !skel.is_edge(prev, idx) {
                return Err(Error::LiftFailed {
                    index: i,
                    reason: "lifted step is not an edge".into(),
                });
            }
        }
        out.push(idx);
    }
    Ok(out)
}

/// Lifts a walk of `Q(t)` to the parallel connection with `y` held fixed,
/// where `t = c_a + c_b - b y`.
pub fn lift_walk(
    inst: &ConnectionInstance,
    skel: &Skeleton,
    walk_in_q: &[RationalVector],
    y_fixed: &[Rational],
) -> Result<WalkRecord> {
    if inst.kind != ConnectionKind::Parallel {
        return Err(Error::Input("lifting needs a parallel connection".into()));
    }
    if y_fixed.len() != inst.n2() - 1 {
        return Err(Error::Dimension("fixed y has the wrong length".into()));
    }
    let y = RationalVector::from(y_fixed.to_vec());
    if y.support().len() != inst.m2() - 1 {
        return Err(Error::Input(format!(
            "fixed y must have {} basic variables, has {}",
            inst.m2() - 1,
            y.support().len()
        )));
    }
    let t = &inst.ca + &inst.cb - inst.bbar.link_row().dot(&y);
    let q = inst.q_at(&t)?;
    let s = inst.split.s;
    let mut lifted = Vec::with_capacity(walk_in_q.len());
    for (i, p) in walk_in_q.iter().enumerate() {
        if !q.contains(p) {
            return Err(Error::LiftFailed {
                index: i,
                reason: format!("{p} is not a point of Q({t})"),
            });
        }
        lifted.push(inst.join(&p[..s], &p[s], &y));
    }
    let idx = lift_points(skel, &lifted)?;
    Ok(WalkRecord::new(idx, "lift", None))
}
