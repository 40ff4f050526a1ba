//! Exact tableau simplex with Bland's rule.

use num_traits::{One, Signed, Zero};

use super::poly::StdPolyhedron;
use crate::error::{Error, Result};
use crate::exactlin::{Rational, RationalMatrix, RationalVector};

/// Dictionary for one basis: `B^{-1} A` and `B^{-1} b`.
#[derive(Clone, Debug)]
pub struct BasisTableau {
    /// `basis[i]` is the variable basic in row `i`.
    basis: Vec<usize>,
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
}

/// Result of bringing one column into the basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PivotOutcome {
    Bounded {
        leaving: usize,
        basis: Vec<usize>,
        point: RationalVector,
    },
    Unbounded {
        ray: RationalVector,
    },
}

impl BasisTableau {
    /// `None` when the basis columns are singular.
    pub fn new(a: &RationalMatrix, b: &[Rational], basis: &[usize]) -> Option<Self> {
        let m = a.rows();
        assert_eq!(basis.len(), m, "basis size must equal row count");
        let mut rows: Vec<Vec<Rational>> = (0..m).map(|i| a.row(i).to_vec()).collect();
        let mut rhs = b.to_vec();
        let mut order = Vec::with_capacity(m);
        for (k, &col) in basis.iter().enumerate() {
            let r = (k..m).find(|&i| !rows[i][col].is_zero())?;
            rows.swap(k, r);
            rhs.swap(k, r);
            let inv = rows[k][col].recip();
            if !inv.is_one() {
                rows[k].iter_mut().for_each(|v| *v *= &inv);
                rhs[k] *= &inv;
            }
            for i in 0..m {
                if i == k || rows[i][col].is_zero() {
                    continue;
                }
                let f = rows[i][col].clone();
                let (pivot_row, pivot_rhs) = (rows[k].clone(), rhs[k].clone());
                rows[i]
                    .iter_mut()
                    .zip(&pivot_row)
                    .for_each(|(v, p)| *v -= &f * p);
                rhs[i] -= &f * pivot_rhs;
            }
            order.push(col);
        }
        Some(BasisTableau {
            basis: order,
            rows,
            rhs,
        })
    }

    pub fn from_poly(p: &StdPolyhedron, basis: &[usize]) -> Option<Self> {
        Self::new(p.a(), p.b(), basis)
    }

    pub fn n(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    pub fn sorted_basis(&self) -> Vec<usize> {
        let mut b = self.basis.clone();
        b.sort_unstable();
        b
    }

    pub fn rhs(&self) -> &[Rational] {
        &self.rhs
    }

    /// Entry `(B^{-1} A)[row][col]`.
    pub fn entry(&self, row: usize, col: usize) -> &Rational {
        &self.rows[row][col]
    }

    pub fn row_of(&self, var: usize) -> Option<usize> {
        self.basis.iter().position(|&v| v == var)
    }

    pub fn is_basic(&self, var: usize) -> bool {
        self.basis.contains(&var)
    }

    pub fn is_feasible(&self) -> bool {
        !self.rhs.iter().any(Signed::is_negative)
    }

    pub fn point_with_n(&self, n: usize) -> RationalVector {
        let mut x = RationalVector::zeros(n);
        for (i, &j) in self.basis.iter().enumerate() {
            x[j] = self.rhs[i].clone();
        }
        x
    }

    pub fn point(&self) -> RationalVector {
        self.point_with_n(self.n())
    }

    /// Leaving row for entering column `j`: minimum ratio, ties to the
    /// smallest leaving variable. `None` when the column has no positive entry.
    pub fn ratio_test(&self, j: usize) -> Option<usize> {
        let mut best: Option<(usize, Rational)> = None;
        for i in 0..self.rows.len() {
            let d = &self.rows[i][j];
            if !d.is_positive() {
                continue;
            }
            let ratio = &self.rhs[i] / d;
            let better = match &best {
                None => true,
                Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
            };
            if better {
                best = Some((i, ratio));
            }
        }
        best.map(|(i, _)| i)
    }

    /// Ray `x_j = 1, x_B = -B^{-1}A_j`.
    pub fn ray(&self, j: usize) -> RationalVector {
        let mut r = RationalVector::zeros(self.n());
        r[j] = Rational::one();
        for (i, &bv) in self.basis.iter().enumerate() {
            r[bv] = -self.rows[i][j].clone();
        }
        r
    }

    pub fn pivot(&mut self, row: usize, j: usize) {
        let inv = self.rows[row][j].recip();
        self.rows[row].iter_mut().for_each(|v| *v *= &inv);
        self.rhs[row] *= &inv;
        let (pivot_row, pivot_rhs) = (self.rows[row].clone(), self.rhs[row].clone());
        for i in 0..self.rows.len() {
            if i == row || self.rows[i][j].is_zero() {
                continue;
            }
            let f = self.rows[i][j].clone();
            self.rows[i]
                .iter_mut()
                .zip(&pivot_row)
                .for_each(|(v, p)| *v -= &f * p);
            self.rhs[i] -= &f * &pivot_rhs;
        }
        self.basis[row] = j;
    }

    /// Brings `j` in with the ratio test and reports where it lands.
    pub fn enter(&mut self, j: usize) -> PivotOutcome {
        match self.ratio_test(j) {
            None => PivotOutcome::Unbounded { ray: self.ray(j) },
            Some(row) => {
                let leaving = self.basis[row];
                self.pivot(row, j);
                PivotOutcome::Bounded {
                    leaving,
                    basis: self.sorted_basis(),
                    point: self.point(),
                }
            }
        }
    }

    /// `c_j - c_B B^{-1} A_j` for every column.
    pub fn reduced_costs(&self, c: &[Rational]) -> Vec<Rational> {
        let n = self.n();
        (0..n)
            .map(|j| {
                let mut r = c[j].clone();
                for (i, &bv) in self.basis.iter().enumerate() {
                    if !c[bv].is_zero() && !self.rows[i][j].is_zero() {
                        r -= &c[bv] * &self.rows[i][j];
                    }
                }
                r
            })
            .collect()
    }
}

/// One simplex pivot from a feasible basis. Errors when `basis` is singular.
pub fn pivot_step(p: &StdPolyhedron, basis: &[usize], entering: usize) -> Result<PivotOutcome> {
    if entering >= p.n() {
        return Err(Error::Dimension(format!("column {entering} out of range")));
    }
    let mut t =
        BasisTableau::from_poly(p, basis).ok_or_else(|| Error::Input("singular basis".into()))?;
    if t.is_basic(entering) {
        return Ok(PivotOutcome::Bounded {
            leaving: entering,
            basis: t.sorted_basis(),
            point: t.point(),
        });
    }
    Ok(t.enter(entering))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Max,
    Min,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal {
        value: Rational,
        x: RationalVector,
        basis: Vec<usize>,
    },
    Unbounded {
        ray: RationalVector,
    },
    Infeasible,
}

/// Trace of a primal simplex run: every basis visited, in order.
#[derive(Clone, Debug)]
pub struct SimplexTrace {
    pub bases: Vec<Vec<usize>>,
    pub points: Vec<RationalVector>,
    pub unbounded: Option<RationalVector>,
}

/// Primal simplex maximizing `c` from a feasible tableau (Bland's rule).
pub fn primal_simplex(t: &mut BasisTableau, c: &[Rational]) -> SimplexTrace {
    let mut trace = SimplexTrace {
        bases: vec![t.sorted_basis()],
        points: vec![t.point()],
        unbounded: None,
    };
    loop {
        let r = t.reduced_costs(c);
        let Some(j) = (0..r.len()).find(|&j| r[j].is_positive() && !t.is_basic(j)) else {
            return trace;
        };
        match t.enter(j) {
            PivotOutcome::Unbounded { ray } => {
                trace.unbounded = Some(ray);
                return trace;
            }
            PivotOutcome::Bounded { basis, point, .. } => {
                trace.bases.push(basis);
                trace.points.push(point);
            }
        }
    }
}

/// Some feasible basis via the artificial-variable phase, or `None` if empty.
pub fn phase_one(p: &StdPolyhedron) -> Option<Vec<usize>> {
    let (m, n) = (p.m(), p.n());
    if m == 0 {
        return Some(Vec::new());
    }
    let mut aug = RationalMatrix::zeros(m, n + m);
    let mut b = p.b().clone();
    for i in 0..m {
        let flip = b[i].is_negative();
        for j in 0..n {
            aug[(i, j)] = if flip {
                -p.a()[(i, j)].clone()
            } else {
                p.a()[(i, j)].clone()
            };
        }
        if flip {
            b[i] = -b[i].clone();
        }
        aug[(i, n + i)] = Rational::one();
    }
    let art: Vec<usize> = (n..n + m).collect();
    let mut t = BasisTableau::new(&aug, &b, &art).expect("identity basis");
    let mut c = vec![Rational::zero(); n + m];
    for v in c.iter_mut().skip(n) {
        *v = -Rational::one();
    }
    primal_simplex(&mut t, &c);
    if t.basis
        .iter()
        .zip(&t.rhs)
        .any(|(&v, x)| v >= n && !x.is_zero())
    {
        return None;
    }
    // drive remaining artificials out with degenerate pivots
    for row in 0..m {
        if t.basis[row] >= n {
            let j = (0..n).find(|&j| !t.rows[row][j].is_zero() && !t.is_basic(j))?;
            t.pivot(row, j);
        }
    }
    Some(t.sorted_basis())
}

/// Two-phase exact LP over `p`.
pub fn optimize(p: &StdPolyhedron, c: &[Rational], sense: Sense) -> Result<LpOutcome> {
    if c.len() != p.n() {
        return Err(Error::Dimension("objective length".into()));
    }
    let Some(basis) = phase_one(p) else {
        return Ok(LpOutcome::Infeasible);
    };
    let obj: Vec<Rational> = match sense {
        Sense::Max => c.to_vec(),
        Sense::Min => c.iter().map(|v| -v.clone()).collect(),
    };
    let mut t = BasisTableau::from_poly(p, &basis)
        .ok_or_else(|| Error::invariant("phase one basis singular"))?;
    let trace = primal_simplex(&mut t, &obj);
    if let Some(ray) = trace.unbounded {
        return Ok(LpOutcome::Unbounded { ray });
    }
    let x = t.point_with_n(p.n());
    let value = x.dot(c);
    Ok(LpOutcome::Optimal {
        value,
        x,
        basis: t.sorted_basis(),
    })
}

/// Unit objective on one coordinate.
pub fn coordinate_objective(n: usize, j: usize) -> Vec<Rational> {
    let mut c = vec![Rational::zero(); n];
    c[j] = Rational::one();
    c
}

/// True when `max sum x` is finite (nonempty polyhedra only).
pub fn is_bounded(p: &StdPolyhedron) -> Result<bool> {
    let c = vec![Rational::one(); p.n()];
    Ok(!matches!(
        optimize(p, &c, Sense::Max)?,
        LpOutcome::Unbounded { .. }
    ))
}
