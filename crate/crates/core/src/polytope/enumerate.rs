use std::collections::BTreeMap;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::poly::{Guardrail, StdPolyhedron};
use crate::error::{Error, Result};
use crate::exactlin::{solve_basis, RationalVector};

/// One geometric vertex with every feasible basis that produces it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexRecord {
    pub coords: RationalVector,
    /// Sorted index sets, themselves sorted.
    pub bases: Vec<Vec<usize>>,
    pub support: Vec<usize>,
}

impl VertexRecord {
    pub fn is_nondegenerate(&self, m: usize) -> bool {
        self.bases.len() == 1 && self.support.len() == m
    }

    /// The unique basis of a nondegenerate vertex.
    pub fn unique_basis(&self) -> Option<&[usize]> {
        match self.bases.as_slice() {
            [b] => Some(b),
            _ => None,
        }
    }

    /// Coordinates equal to zero (the coordinate facets containing the vertex).
    pub fn zero_set(&self) -> Vec<usize> {
        let n = self.coords.len();
        let mut s = self.support.iter().peekable();
        (0..n)
            .filter(|j| {
                if s.peek() == Some(&j) {
                    s.next();
                    false
                } else {
                    true
                }
            })
            .collect()
    }
}

/// Every feasible basis with its basic solution, sorted by basis.
pub fn feasible_bases(
    p: &StdPolyhedron,
    guard: &Guardrail,
) -> Result<Vec<(Vec<usize>, RationalVector)>> {
    let (m, n) = (p.m(), p.n());
    guard.check(n, m)?;
    let combos: Vec<Vec<usize>> = (0..n).combinations(m).collect();
    let found: Result<Vec<Option<(Vec<usize>, RationalVector)>>> = combos
        .into_par_iter()
        .with_min_len(64)
        .map(|basis| {
            Ok(solve_basis(p.a(), &basis, p.b())?
                .filter(RationalVector::is_nonnegative)
                .map(|x| (basis, x)))
        })
        .collect();
    Ok(found?.into_iter().flatten().collect())
}

/// All vertices, lexicographically sorted by coordinates.
pub fn enumerate_vertices_with(p: &StdPolyhedron, guard: &Guardrail) -> Result<Vec<VertexRecord>> {
    let mut groups: BTreeMap<RationalVector, Vec<Vec<usize>>> = BTreeMap::new();
    for (basis, x) in feasible_bases(p, guard)? {
        groups.entry(x).or_default().push(basis);
    }
    Ok(groups
        .into_iter()
        .map(|(coords, mut bases)| {
            bases.sort();
            let support = coords.support();
            VertexRecord {
                coords,
                bases,
                support,
            }
        })
        .collect())
}

pub fn enumerate_vertices(p: &StdPolyhedron) -> Result<Vec<VertexRecord>> {
    enumerate_vertices_with(p, &Guardrail::default())
}

/// Every vertex nondegenerate. Errors on an empty vertex list.
pub fn is_simple_vertices(vertices: &[VertexRecord], m: usize) -> Result<bool> {
    if vertices.is_empty() {
        return Err(Error::Empty);
    }
    Ok(vertices.iter().all(|v| v.is_nondegenerate(m)))
}

pub fn is_simple(p: &StdPolyhedron) -> Result<bool> {
    is_simple_vertices(&enumerate_vertices(p)?, p.m())
}
