use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{
    normalize_link_column, rank, LinkPosition, Normalization, RationalMatrix, RationalVector,
};

/// A full-row-rank matrix whose link column is a unit vector: last column
/// `e_last` (the `A`-side form) or first column `e_first` (the `B`-side form).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinkedForm {
    matrix: RationalMatrix,
    position: LinkPosition,
}

impl LinkedForm {
    pub fn new(matrix: RationalMatrix, position: LinkPosition) -> Result<Self> {
        let (m, n) = (matrix.rows(), matrix.cols());
        if m == 0 || n == 0 {
            return Err(Error::Input(
                "linked form needs at least one row and column".into(),
            ));
        }
        let (col, row) = match position {
            LinkPosition::Last => (n - 1, m - 1),
            LinkPosition::First => (0, 0),
        };
        for i in 0..m {
            let want_one = i == row;
            let v = &matrix[(i, col)];
            if (want_one && !v.is_one()) || (!want_one && !v.is_zero()) {
                return Err(Error::Input(format!(
                    "link column {col} is not the unit vector e_{row} ({position:?} form)"
                )));
            }
        }
        let r = rank(&matrix);
        if r < m {
            return Err(Error::RankDeficient { rank: r, rows: m });
        }
        Ok(LinkedForm { matrix, position })
    }

    pub fn from_i64(rows: &[&[i64]], position: LinkPosition) -> Result<Self> {
        Self::new(RationalMatrix::from_i64(rows), position)
    }

    /// Normalizes column `col` of an arbitrary full-row-rank matrix.
    pub fn normalize(
        m: &RationalMatrix,
        col: usize,
        position: LinkPosition,
    ) -> Result<(Self, Normalization)> {
        let (out, log) = normalize_link_column(m, col, position)?;
        Ok((Self::new(out, position)?, log))
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.matrix
    }

    pub fn position(&self) -> LinkPosition {
        self.position
    }

    pub fn m(&self) -> usize {
        self.matrix.rows()
    }

    pub fn n(&self) -> usize {
        self.matrix.cols()
    }

    /// The link row (`a` or `b`) without the unit entry.
    pub fn link_row(&self) -> RationalVector {
        let (row, cols) = match self.position {
            LinkPosition::Last => (self.m() - 1, 0..self.n() - 1),
            LinkPosition::First => (0, 1..self.n()),
        };
        cols.map(|j| self.matrix[(row, j)].clone()).collect()
    }

    /// The block (`A` or `B`) without the link row and column.
    pub fn block(&self) -> RationalMatrix {
        match self.position {
            LinkPosition::Last => self.matrix.submatrix(0..self.m() - 1, 0..self.n() - 1),
            LinkPosition::First => self.matrix.submatrix(1..self.m(), 1..self.n()),
        }
    }
}
