use std::fmt;
use std::ops::{Deref, DerefMut};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational in canonical form (positive denominator,
/// reduced).
pub type Rational = BigRational;

/// Shorthand for `p/q` as a [`Rational`]. Panics on `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses an integer or `p/q` with `q > 0`.
pub fn parse_rational(token: &str) -> Result<Rational> {
    let bad = |msg: &str| Error::Parse {
        line: 0,
        msg: format!("{msg}: `{token}`"),
    };
    let (num, den) = match token.split_once('/') {
        Some((p, q)) => (p, Some(q)),
        None => (token, None),
    };
    let numer: BigInt = num.parse().map_err(|_| bad("bad numerator"))?;
    let denom: BigInt = match den {
        Some(q) => q.parse().map_err(|_| bad("bad denominator"))?,
        None => BigInt::one(),
    };
    if !denom.is_positive() {
        return Err(bad("denominator must be positive"));
    }
    Ok(Rational::new(numer, denom))
}

/// `p/q`, or `p` when the value is an integer.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Fixed-length vector of exact rationals.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalVector(Vec<Rational>);

impl RationalVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        RationalVector(entries)
    }

    pub fn zeros(len: usize) -> Self {
        RationalVector(vec![Rational::zero(); len])
    }

    pub fn from_i64(values: &[i64]) -> Self {
        RationalVector(
            values
                .iter()
                .map(|&v| Rational::from_integer(v.into()))
                .collect(),
        )
    }

    pub fn into_inner(self) -> Vec<Rational> {
        self.0
    }

    pub fn dot(&self, other: &[Rational]) -> Rational {
        assert_eq!(self.len(), other.len(), "dot product of unequal lengths");
        self.iter()
            .zip(other)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.iter().all(|v| !v.is_negative())
    }

    /// Indices of strictly positive entries.
    pub fn support(&self) -> Vec<usize> {
        self.iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_integral(&self) -> bool {
        self.iter().all(|v| v.is_integer())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.iter().map(format_rational).collect()
    }

    pub fn from_strings(items: &[String]) -> Result<Self> {
        items
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map(RationalVector)
    }
}

impl Deref for RationalVector {
    type Target = Vec<Rational>;
    fn deref(&self) -> &Vec<Rational> {
        &self.0
    }
}

impl DerefMut for RationalVector {
    fn deref_mut(&mut self) -> &mut Vec<Rational> {
        &mut self.0
    }
}

impl From<Vec<Rational>> for RationalVector {
    fn from(v: Vec<Rational>) -> Self {
        RationalVector(v)
    }
}

impl FromIterator<Rational> for RationalVector {
    fn from_iter<I: IntoIterator<Item = Rational>>(iter: I) -> Self {
        RationalVector(iter.into_iter().collect())
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for RationalVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let items = Vec::<String>::deserialize(d)?;
        RationalVector::from_strings(&items).map_err(serde::de::Error::custom)
    }
}

/// `#[serde(with = ...)]` adapter: a rational as a `"p/q"` string.
pub mod as_string {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// Optional variant of [`as_string`].
pub mod opt_as_string {
    use super::*;

    pub fn serialize<S: Serializer>(
        r: &Option<Rational>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        r.as_ref().map(format_rational).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|t| parse_rational(&t).map_err(serde::de::Error::custom))
            .transpose()
    }
}
