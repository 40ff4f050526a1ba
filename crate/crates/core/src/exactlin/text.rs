//! Plain-text matrix and right-hand-side formats.
//!
//! ```text
//! 2 3
//! 1 1 0
//! 1 2 1/2
//! ```

use std::fmt::Write as _;

use super::matrix::RationalMatrix;
use super::rational::{parse_rational, Rational, RationalVector};
use crate::error::{Error, Result};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn tokens(line: usize, text: &str) -> Result<Vec<Rational>> {
    text.split_whitespace()
        .map(|t| {
            parse_rational(t).map_err(|e| match e {
                Error::Parse { msg, .. } => parse_err(line, msg),
                other => other,
            })
        })
        .collect()
}

/// Line cursor that skips blank lines and keeps 1-based line numbers.
pub struct LineCursor<'a> {
    lines: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
    last: usize,
}

impl<'a> LineCursor<'a> {
    pub fn new(text: &'a str) -> Self {
        LineCursor {
            lines: text.lines().enumerate().peekable(),
            last: 0,
        }
    }

    /// Next non-blank line with its number.
    pub fn next_line(&mut self) -> Option<(usize, &'a str)> {
        for (i, l) in self.lines.by_ref() {
            self.last = i + 1;
            if !l.trim().is_empty() {
                return Some((i + 1, l));
            }
        }
        None
    }

    pub fn expect_line(&mut self, what: &str) -> Result<(usize, &'a str)> {
        let after = self.last;
        self.next_line()
            .ok_or_else(|| parse_err(after + 1, format!("expected {what}")))
    }

    /// Errors if anything but blank lines remain.
    pub fn finish(mut self) -> Result<()> {
        match self.next_line() {
            Some((n, _)) => Err(parse_err(n, "unexpected trailing content")),
            None => Ok(()),
        }
    }
}

/// Reads a `m n` header followed by m rows.
pub fn read_matrix(cur: &mut LineCursor<'_>) -> Result<RationalMatrix> {
    let (hn, header) = cur.expect_line("`m n` header")?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    let [m, n] = dims.as_slice() else {
        return Err(parse_err(hn, "header must be `m n`"));
    };
    let m: usize = m.parse().map_err(|_| parse_err(hn, "bad row count"))?;
    let n: usize = n.parse().map_err(|_| parse_err(hn, "bad column count"))?;
    let mut data = Vec::with_capacity(m * n);
    for _ in 0..m {
        let (ln, text) = cur.expect_line("matrix row")?;
        let row = tokens(ln, text)?;
        if row.len() != n {
            return Err(parse_err(
                ln,
                format!("expected {n} entries, found {}", row.len()),
            ));
        }
        data.extend(row);
    }
    RationalMatrix::with_shape(m, n, data)
}

/// Reads one line of exactly `len` entries. An empty line list is accepted
/// when `len == 0`.
pub fn read_rhs(cur: &mut LineCursor<'_>, len: usize) -> Result<RationalVector> {
    if len == 0 {
        return Ok(RationalVector::zeros(0));
    }
    let (ln, text) = cur.expect_line("right-hand side line")?;
    parse_rhs_line(ln, text, len)
}

pub fn parse_rhs_line(line: usize, text: &str, len: usize) -> Result<RationalVector> {
    let v = tokens(line, text)?;
    if v.len() != len {
        return Err(parse_err(
            line,
            format!("expected {len} right-hand side entries, found {}", v.len()),
        ));
    }
    Ok(v.into())
}

pub fn parse_matrix(text: &str) -> Result<RationalMatrix> {
    let mut cur = LineCursor::new(text);
    let m = read_matrix(&mut cur)?;
    cur.finish()?;
    Ok(m)
}

/// Matrix followed by one right-hand-side line.
pub fn parse_instance(text: &str) -> Result<(RationalMatrix, RationalVector)> {
    let mut cur = LineCursor::new(text);
    let m = read_matrix(&mut cur)?;
    let b = read_rhs(&mut cur, m.rows())?;
    cur.finish()?;
    Ok((m, b))
}

pub fn write_matrix(m: &RationalMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        out.push_str(&write_rhs_line(m.row(i)));
    }
    out
}

pub fn write_rhs_line(v: &[Rational]) -> String {
    let mut out = String::new();
    for (k, x) in v.iter().enumerate() {
        if k > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{x}");
    }
    out.push('\n');
    out
}

pub fn write_instance(m: &RationalMatrix, b: &[Rational]) -> String {
    let mut out = write_matrix(m);
    if m.rows() > 0 {
        out.push_str(&write_rhs_line(b));
    }
    out
}
