use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{
    parse_instance, rank, write_instance, Rational, RationalMatrix, RationalVector,
};

/// `{x : Ax = b, x >= 0}` with `A` of full row rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StdPolyhedron {
    a: RationalMatrix,
    b: RationalVector,
}

impl StdPolyhedron {
    /// Checks shapes and full row rank.
    pub fn new(a: RationalMatrix, b: impl Into<RationalVector>) -> Result<Self> {
        let b = b.into();
        if b.len() != a.rows() {
            return Err(Error::Dimension(format!(
                "right-hand side has {} entries for {} rows",
                b.len(),
                a.rows()
            )));
        }
        if a.rows() > a.cols() {
            return Err(Error::Dimension(format!(
                "more rows ({}) than columns ({})",
                a.rows(),
                a.cols()
            )));
        }
        let r = rank(&a);
        if r < a.rows() {
            return Err(Error::RankDeficient {
                rank: r,
                rows: a.rows(),
            });
        }
        Ok(StdPolyhedron { a, b })
    }

    pub fn from_i64(a: &[&[i64]], b: &[i64]) -> Result<Self> {
        Self::new(RationalMatrix::from_i64(a), RationalVector::from_i64(b))
    }

    pub fn a(&self) -> &RationalMatrix {
        &self.a
    }

    pub fn b(&self) -> &RationalVector {
        &self.b
    }

    /// Number of equality rows.
    pub fn m(&self) -> usize {
        self.a.rows()
    }

    /// Number of variables (and coordinate facets).
    pub fn n(&self) -> usize {
        self.a.cols()
    }

    pub fn dim_ambient(&self) -> usize {
        self.n() - self.m()
    }

    /// Same matrix, new right-hand side.
    pub fn with_rhs(&self, b: impl Into<RationalVector>) -> Result<Self> {
        let b = b.into();
        if b.len() != self.m() {
            return Err(Error::Dimension("right-hand side length".into()));
        }
        Ok(StdPolyhedron {
            a: self.a.clone(),
            b,
        })
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.n()
            && !x.iter().any(Signed::is_negative)
            && self.a.mul_vec(x).as_slice() == self.b.as_slice()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (a, b) = parse_instance(text)?;
        Self::new(a, b)
    }

    pub fn to_text(&self) -> String {
        write_instance(&self.a, &self.b)
    }
}

/// Size guardrail for basis enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Guardrail {
    pub max_n: usize,
    pub max_bases: u128,
}

impl Default for Guardrail {
    fn default() -> Self {
        Guardrail {
            max_n: 24,
            max_bases: 5_000_000,
        }
    }
}

impl Guardrail {
    /// Explicit override: only the basis count limit applies.
    pub fn with_max_bases(max_bases: u128) -> Self {
        Guardrail {
            max_n: usize::MAX,
            max_bases,
        }
    }

    pub fn check(&self, n: usize, m: usize) -> Result<()> {
        if n > self.max_n {
            return Err(Error::Guardrail(format!("n = {n} exceeds {}", self.max_n)));
        }
        let c = binomial(n, m);
        if c > self.max_bases {
            return Err(Error::Guardrail(format!(
                "C({n},{m}) = {c} exceeds {}",
                self.max_bases
            )));
        }
        Ok(())
    }
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| {
        acc.saturating_mul((n - i) as u128) / (i as u128 + 1)
    })
}
