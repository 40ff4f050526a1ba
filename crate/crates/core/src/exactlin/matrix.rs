use std::fmt;

use serde::{Deserialize, Serialize};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::rational::{Rational, RationalVector};
use crate::error::{Error, Result};

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let nrows = rows.len();
        Ok(RationalMatrix {
            rows: nrows,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds from integer rows; panics on ragged input (test and fixture helper).
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let r = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&v| Rational::from_integer(v.into()))
                    .collect()
            })
            .collect();
        Self::from_rows(r).expect("ragged integer matrix")
    }

    pub fn with_shape(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(RationalMatrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Rational] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> RationalVector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero_column(&self, j: usize) -> bool {
        (0..self.rows).all(|i| self[(i, j)].is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Columns in the given order (indices may repeat).
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (k, &j) in cols.iter().enumerate() {
                out[(i, k)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let data = rows
            .iter()
            .flat_map(|&i| self.row(i).iter().cloned())
            .collect();
        RationalMatrix {
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn mul_vec(&self, x: &[Rational]) -> RationalVector {
        assert_eq!(x.len(), self.cols, "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::Dimension("vstack column mismatch".into()));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(RationalMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Block-diagonal join.
    pub fn block_diag(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        out.set_block(0, 0, self);
        out.set_block(self.rows, self.cols, other);
        out
    }

    pub fn set_block(&mut self, row: usize, col: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(row + i, col + j)] = block[(i, j)].clone();
            }
        }
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (oi, i) in rows.clone().enumerate() {
            for (oj, j) in cols.clone().enumerate() {
                out[(oi, oj)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    /// Integer entries only, as `i64`. `None` if any entry is fractional or too large.
    pub fn to_i64(&self) -> Option<Vec<Vec<i64>>> {
        use num_traits::ToPrimitive;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|v| {
                        if v.is_integer() {
                            v.numer().to_i64()
                        } else {
                            None
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Each row scaled by the lcm of its denominators.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| integerize(self.row(i))).collect()
    }
}

impl std::ops::Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Serialize for RationalMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows())
            .map(|i| self.row(i).iter().map(|v| v.to_string()).collect())
            .collect();
        (self.rows(), self.cols(), rows).serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (r, c, rows) = <(usize, usize, Vec<Vec<String>>)>::deserialize(d)?;
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            let v = RationalVector::from_strings(&row).map_err(serde::de::Error::custom)?;
            data.extend(v.into_inner());
        }
        RationalMatrix::with_shape(r, c, data).map_err(serde::de::Error::custom)
    }
}

fn integerize(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    row.iter().map(|v| v.numer() * (&lcm / v.denom())).collect()
}

/// Fraction-free row echelon form of an integer matrix (in place).
///
/// Returns the pivot columns. After the call, rows `0..rank` are the
/// echelon rows and the remaining rows are zero. Every division performed is
/// exact: intermediate entries are minors of the input.
pub fn bareiss_echelon(m: &mut [Vec<BigInt>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &m[i][j] * &m[r][c] - &m[i][c] * &m[r][j];
                m[i][j] = v / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        // Entries left of the pivot in lower rows are already zero; the
        // skipped columns c' < c of rows below r never get touched again.
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Exact rank by fraction-free elimination.
pub fn rank(m: &RationalMatrix) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    let mut ints = m.integer_rows();
    bareiss_echelon(&mut ints).len()
}

/// Solves the square subsystem on `basis` columns and embeds the solution
/// into an `n`-vector with zeros off-basis. `Ok(None)` when singular.
pub fn solve_basis(
    m: &RationalMatrix,
    basis: &[usize],
    rhs: &[Rational],
) -> Result<Option<RationalVector>> {
    let (rows, cols) = (m.rows, m.cols);
    if basis.len() != rows || rhs.len() != rows {
        return Err(Error::Dimension(format!(
            "basis size {} and rhs length {} must both equal {rows}",
            basis.len(),
            rhs.len()
        )));
    }
    if let Some(&bad) = basis.iter().find(|&&j| j >= cols) {
        return Err(Error::Dimension(format!("basis column {bad} out of range")));
    }
    let Some(local) = solve_square(m, basis, rhs) else {
        return Ok(None);
    };
    let mut x = RationalVector::zeros(cols);
    for (k, &j) in basis.iter().enumerate() {
        x[j] = local[k].clone();
    }
    Ok(Some(x))
}

/// Solution of `M[:, basis] z = rhs` in basis order, or `None` if singular.
pub(crate) fn solve_square(
    m: &RationalMatrix,
    basis: &[usize],
    rhs: &[Rational],
) -> Option<Vec<Rational>> {
    let n = basis.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let mut aug: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = basis.iter().map(|&j| m[(i, j)].clone()).collect();
            row.push(rhs[i].clone());
            integerize(&row)
        })
        .collect();
    let pivots = bareiss_echelon(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    let mut z = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = Rational::from_integer(aug[i][n].clone());
        for j in i + 1..n {
            acc -= Rational::from_integer(aug[i][j].clone()) * &z[j];
        }
        z[i] = acc / Rational::from_integer(aug[i][i].clone());
    }
    Some(z)
}
