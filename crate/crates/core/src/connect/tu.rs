use itertools::Itertools;
use num_traits::ToPrimitive;

use crate::exactlin::RationalMatrix;

/// Total unimodularity verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TuVerdict {
    Yes,
    No,
    /// Too many square submatrices to check exhaustively.
    Unknown,
}

/// Default cap on the number of square submatrices inspected.
pub const TU_MAX_MINORS: u128 = 20_000_000;

fn det(mut m: Vec<Vec<i128>>) -> i128 {
    let k = m.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for c in 0..k {
        let Some(p) = (c..k).find(|&i| m[i][c] != 0) else {
            return 0;
        };
        if p != c {
            m.swap(p, c);
            sign = -sign;
        }
        for i in c + 1..k {
            for j in c + 1..k {
                m[i][j] = (m[i][j] * m[c][c] - m[i][c] * m[c][j]) / prev;
            }
        }
        prev = m[c][c];
    }
    sign * m[k - 1][k - 1]
}

pub fn tu_check(m: &RationalMatrix) -> TuVerdict {
    tu_check_with(m, TU_MAX_MINORS)
}

/// Exhaustive minor check; entries outside `{-1, 0, 1}` fail immediately.
pub fn tu_check_with(m: &RationalMatrix, max_minors: u128) -> TuVerdict {
    let Some(rows) = m.to_i64() else {
        return TuVerdict::No;
    };
    if rows.iter().flatten().any(|v| !(-1..=1).contains(v)) {
        return TuVerdict::No;
    }
    let (r, c) = (m.rows(), m.cols());
    let total: u128 = (2..=r.min(c))
        .map(|k| crate::polytope::binomial(r, k).saturating_mul(crate::polytope::binomial(c, k)))
        .fold(0u128, u128::saturating_add);
    if total > max_minors {
        return TuVerdict::Unknown;
    }
    for k in 2..=r.min(c) {
        for rs in (0..r).combinations(k) {
            for cs in (0..c).combinations(k) {
                let sub: Vec<Vec<i128>> = rs
                    .iter()
                    .map(|&i| cs.iter().map(|&j| rows[i][j] as i128).collect())
                    .collect();
                if det(sub).abs() > 1 {
                    return TuVerdict::No;
                }
            }
        }
    }
    TuVerdict::Yes
}

/// Integer determinant of a square integer matrix (small sizes).
pub fn integer_det(m: &RationalMatrix) -> Option<i128> {
    let rows = m.to_i64()?;
    if m.rows() != m.cols() {
        return None;
    }
    if m.rows() == 0 {
        return Some(1);
    }
    Some(det(rows
        .iter()
        .map(|r| r.iter().map(|&v| v.to_i128().unwrap_or(0)).collect())
        .collect()))
}
