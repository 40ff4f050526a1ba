use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::RationalMatrix;
use super::rational::{Rational, RationalVector};
use crate::error::{Error, Result};

/// Where the unit link column ends up.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkPosition {
    /// Last column, 1 in the last row.
    Last,
    /// First column, 1 in the first row.
    First,
}

/// Elementary row operation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowOp {
    Swap(usize, usize),
    Scale {
        row: usize,
        #[serde(with = "super::rational::as_string")]
        factor: Rational,
    },
    /// `row[target] += factor * row[source]`
    AddMultiple {
        target: usize,
        source: usize,
        #[serde(with = "super::rational::as_string")]
        factor: Rational,
    },
}

impl RowOp {
    fn apply_rows<T>(
        &self,
        rows: &mut [T],
        mut scale: impl FnMut(&mut T, &Rational),
        mut axpy: impl FnMut(&mut T, &T, &Rational),
    ) where
        T: Clone,
    {
        match self {
            RowOp::Swap(a, b) => rows.swap(*a, *b),
            RowOp::Scale { row, factor } => scale(&mut rows[*row], factor),
            RowOp::AddMultiple {
                target,
                source,
                factor,
            } => {
                let src = rows[*source].clone();
                axpy(&mut rows[*target], &src, factor);
            }
        }
    }
}

/// Log of a link-column normalization: column order plus row operations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Normalization {
    /// `column_order[k]` is the input column placed at output position `k`.
    pub column_order: Vec<usize>,
    pub ops: Vec<RowOp>,
}

impl Normalization {
    /// Replays the row operations on a right-hand side.
    pub fn apply_rhs(&self, rhs: &[Rational]) -> RationalVector {
        let mut v: Vec<Rational> = rhs.to_vec();
        for op in &self.ops {
            op.apply_rows(&mut v, |x, f| *x *= f, |t, s, f| *t += s * f);
        }
        v.into()
    }

    /// Replays the column permutation and row operations on a matrix.
    pub fn apply_matrix(&self, m: &RationalMatrix) -> RationalMatrix {
        let permuted = m.select_columns(&self.column_order);
        let mut rows: Vec<Vec<Rational>> = (0..permuted.rows())
            .map(|i| permuted.row(i).to_vec())
            .collect();
        for op in &self.ops {
            op.apply_rows(
                &mut rows,
                |r, f| r.iter_mut().for_each(|x| *x *= f),
                |t, s, f| t.iter_mut().zip(s).for_each(|(x, y)| *x += y * f),
            );
        }
        RationalMatrix::from_rows(rows).unwrap_or_else(|_| RationalMatrix::zeros(0, m.cols()))
    }
}

/// Turns column `col` into a unit column at the last (1 in last row) or
/// first (1 in first row) position, using row operations only.
pub fn normalize_link_column(
    m: &RationalMatrix,
    col: usize,
    position: LinkPosition,
) -> Result<(RationalMatrix, Normalization)> {
    let (rows, cols) = (m.rows(), m.cols());
    if col >= cols {
        return Err(Error::Dimension(format!(
            "column {col} out of range for {cols} columns"
        )));
    }
    if m.is_zero_column(col) {
        return Err(Error::LoopElement(col));
    }
    let others = (0..cols).filter(|&j| j != col);
    let column_order: Vec<usize> = match position {
        LinkPosition::Last => others.chain(std::iter::once(col)).collect(),
        LinkPosition::First => std::iter::once(col).chain(others).collect(),
    };
    let target = match position {
        LinkPosition::Last => rows - 1,
        LinkPosition::First => 0,
    };

    let mut ops = Vec::new();
    let pivot_row = if !m[(target, col)].is_zero() {
        target
    } else {
        (0..rows)
            .find(|&i| !m[(i, col)].is_zero())
            .expect("nonzero column")
    };
    if pivot_row != target {
        ops.push(RowOp::Swap(pivot_row, target));
    }
    let mut work = m.clone();
    work.swap_rows(pivot_row, target);
    let p = work[(target, col)].clone();
    if !p.is_one() {
        ops.push(RowOp::Scale {
            row: target,
            factor: p.recip(),
        });
    }
    for i in 0..rows {
        if i == target {
            continue;
        }
        let v = work[(i, col)].clone();
        if !v.is_zero() {
            ops.push(RowOp::AddMultiple {
                target: i,
                source: target,
                factor: -v,
            });
        }
    }
    let log = Normalization { column_order, ops };
    let out = log.apply_matrix(m);
    Ok((out, log))
}
