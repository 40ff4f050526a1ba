use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::Rational;
use crate::polytope::{coordinate_objective, optimize, LpOutcome, Sense, Skeleton, StdPolyhedron};

/// Values of the tracked coordinate at each vertex, with its extreme
/// values when those are finite.
#[derive(Clone, Debug)]
pub struct SLevels {
    pub values: Vec<Rational>,
    pub max: Option<Rational>,
    pub min: Option<Rational>,
}

impl SLevels {
    pub fn new(p: &StdPolyhedron, skel: &Skeleton, s_col: usize) -> Result<Self> {
        if s_col >= p.n() {
            return Err(Error::Dimension(format!("column {s_col} out of range")));
        }
        let values: Vec<Rational> = (0..skel.len())
            .map(|v| skel.coords(v)[s_col].clone())
            .collect();
        let c = coordinate_objective(p.n(), s_col);
        let bounded = |sense| -> Result<bool> {
            Ok(match optimize(p, &c, sense)? {
                LpOutcome::Optimal { .. } => true,
                LpOutcome::Unbounded { .. } => false,
                LpOutcome::Infeasible => return Err(Error::Empty),
            })
        };
        let max = if bounded(Sense::Max)? {
            values.iter().max().cloned()
        } else {
            None
        };
        let min = if bounded(Sense::Min)? {
            values.iter().min().cloned()
        } else {
            None
        };
        Ok(SLevels { values, max, min })
    }

    /// Levels taken as given; extremes over the listed values.
    pub fn from_values(values: Vec<Rational>) -> Self {
        let max = values.iter().max().cloned();
        let min = values.iter().min().cloned();
        SLevels { values, max, min }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SBoundedResult {
    /// Restricted distance to an `s`-maximal vertex, never dropping below
    /// the start level; `None` if unreachable or unbounded.
    pub to_max: Option<usize>,
    pub to_min: Option<usize>,
    /// Larger of the defined distances.
    pub d_b: Option<usize>,
    /// Same with every later vertex strictly beyond the start level.
    pub strict_to_max: Option<usize>,
    pub strict_to_min: Option<usize>,
}

fn restricted(
    skel: &Skeleton,
    levels: &SLevels,
    start: usize,
    up: bool,
    strict: bool,
) -> Option<usize> {
    let target = if up {
        levels.max.as_ref()?
    } else {
        levels.min.as_ref()?
    };
    let s0 = &levels.values[start];
    let dist = skel.bfs_restricted(start, |w| {
        let s = &levels.values[w];
        w == start
            || match (up, strict) {
                (true, false) => s >= s0,
                (true, true) => s > s0,
                (false, false) => s <= s0,
                (false, true) => s < s0,
            }
    });
    (0..skel.len())
        .filter(|&w| &levels.values[w] == target)
        .filter_map(|w| dist[w])
        .min()
}

pub fn s_bounded_distance(skel: &Skeleton, levels: &SLevels, start: usize) -> SBoundedResult {
    let to_max = restricted(skel, levels, start, true, false);
    let to_min = restricted(skel, levels, start, false, false);
    SBoundedResult {
        d_b: to_max.into_iter().chain(to_min).max(),
        to_max,
        to_min,
        strict_to_max: restricted(skel, levels, start, true, true),
        strict_to_min: restricted(skel, levels, start, false, true),
    }
}

/// Max of [`s_bounded_distance`] over all vertices; `None` ("undefined")
/// when some finite extreme cannot be reached under the restriction.
pub fn s_bounded_diameter(skel: &Skeleton, levels: &SLevels) -> Option<usize> {
    s_bounded_diameter_with(skel, levels, false)
}

/// As [`s_bounded_diameter`], optionally with the strict reading.
pub fn s_bounded_diameter_with(skel: &Skeleton, levels: &SLevels, strict: bool) -> Option<usize> {
    if skel.is_empty() {
        return None;
    }
    let mut best = 0;
    for v in 0..skel.len() {
        let r = s_bounded_distance(skel, levels, v);
        let (up, down) = if strict {
            (r.strict_to_max, r.strict_to_min)
        } else {
            (r.to_max, r.to_min)
        };
        if levels.max.is_some() {
            best = best.max(up?);
        }
        if levels.min.is_some() {
            best = best.max(down?);
        }
    }
    Some(best)
}
