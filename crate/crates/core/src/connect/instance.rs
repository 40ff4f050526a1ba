use std::ops::Range;

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::linked::LinkedForm;
use crate::error::{Error, Result};
use crate::exactlin::{
    as_string, bareiss_echelon, rank, solve_basis, LinkPosition, Rational, RationalMatrix,
    RationalVector,
};
use crate::polytope::{perturb_to_simple_with, Guardrail, Perturbation, StdPolyhedron};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConnectionKind {
    Parallel,
    Series,
    /// Series connection whose linking rows are dependent: a product.
    Cartesian,
}

impl std::fmt::Display for ConnectionKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ConnectionKind::Parallel => "parallel",
            ConnectionKind::Series => "series",
            ConnectionKind::Cartesian => "cartesian",
        })
    }
}

/// Column blocks `(x | s | y)` of a connection polyhedron.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Split {
    pub x: Range<usize>,
    pub s: usize,
    pub y: Range<usize>,
}

impl Split {
    pub fn new(n1: usize, n2: usize) -> Self {
        Split {
            x: 0..n1 - 1,
            s: n1 - 1,
            y: n1..n1 + n2 - 1,
        }
    }
}

/// Factors of a degenerate series connection.
#[derive(Clone, Debug)]
pub struct CartesianFactors {
    /// `{x >= 0 : A x = c_A}`
    pub x_poly: StdPolyhedron,
    /// `{y >= 0 : B y = c_B}`
    pub y_poly: StdPolyhedron,
    /// Value of `s` forced by the `A`-side (equal to the `B`-side one when consistent).
    pub s_value: Rational,
    /// Both sides force the same `s`.
    pub consistent: bool,
}

/// A parallel or series connection with its block metadata.
#[derive(Clone, Debug)]
pub struct ConnectionInstance {
    pub kind: ConnectionKind,
    pub abar: LinkedForm,
    pub bbar: LinkedForm,
    pub c_a_vec: RationalVector,
    pub ca: Rational,
    pub cb: Rational,
    pub c_b_vec: RationalVector,
    pub poly: StdPolyhedron,
    pub split: Split,
    pub cartesian: Option<CartesianFactors>,
}

fn check_forms(
    abar: &LinkedForm,
    bbar: &LinkedForm,
    c_a: &[Rational],
    c_b: &[Rational],
) -> Result<()> {
    if abar.position() != LinkPosition::Last {
        return Err(Error::Input(
            "first matrix must have its unit link column last".into(),
        ));
    }
    if bbar.position() != LinkPosition::First {
        return Err(Error::Input(
            "second matrix must have its unit link column first".into(),
        ));
    }
    if c_a.len() + 1 != abar.m() || c_b.len() + 1 != bbar.m() {
        return Err(Error::Dimension("block right-hand side lengths".into()));
    }
    Ok(())
}

/// Assembles the block rows; `series` adds the second linking row.
fn assemble(abar: &LinkedForm, bbar: &LinkedForm, series: bool) -> RationalMatrix {
    let (m1, n1, m2, n2) = (abar.m(), abar.n(), bbar.m(), bbar.n());
    let (a_blk, a_row, b_blk, b_row) =
        (abar.block(), abar.link_row(), bbar.block(), bbar.link_row());
    let rows = if series { m1 + m2 } else { m1 + m2 - 1 };
    let n = n1 + n2 - 1;
    let s = n1 - 1;
    let mut out = RationalMatrix::zeros(rows, n);
    out.set_block(0, 0, &a_blk);
    let link = m1 - 1;
    for (j, v) in a_row.iter().enumerate() {
        out[(link, j)] = v.clone();
    }
    out[(link, s)] = Rational::one();
    let b_link = if series { link + 1 } else { link };
    if series {
        out[(b_link, s)] = Rational::one();
    }
    for (j, v) in b_row.iter().enumerate() {
        out[(b_link, n1 + j)] = v.clone();
    }
    out.set_block(b_link + 1, n1, &b_blk);
    debug_assert_eq!(b_link + 1 + (m2 - 1), rows);
    out
}

/// Any solution of `M z = c` (not necessarily nonnegative).
fn particular_solution(m: &RationalMatrix, c: &[Rational]) -> Result<RationalVector> {
    if m.rows() == 0 {
        return Ok(RationalVector::zeros(m.cols()));
    }
    let mut ints: Vec<Vec<_>> = (0..m.rows())
        .map(|i| {
            let lcm = m.row(i).iter().fold(num_bigint::BigInt::one(), |acc, v| {
                num_integer::Integer::lcm(&acc, v.denom())
            });
            m.row(i)
                .iter()
                .map(|v| v.numer() * (&lcm / v.denom()))
                .collect()
        })
        .collect();
    let pivots = bareiss_echelon(&mut ints);
    solve_basis(m, &pivots, c)?.ok_or_else(|| Error::invariant("pivot columns singular"))
}

pub fn parallel_connect(
    abar: &LinkedForm,
    c_a: &[Rational],
    ca: &Rational,
    bbar: &LinkedForm,
    cb: &Rational,
    c_b: &[Rational],
) -> Result<ConnectionInstance> {
    check_forms(abar, bbar, c_a, c_b)?;
    let a = assemble(abar, bbar, false);
    let mut rhs: Vec<Rational> = c_a.to_vec();
    rhs.push(ca + cb);
    rhs.extend(c_b.iter().cloned());
    Ok(ConnectionInstance {
        kind: ConnectionKind::Parallel,
        abar: abar.clone(),
        bbar: bbar.clone(),
        c_a_vec: c_a.to_vec().into(),
        ca: ca.clone(),
        cb: cb.clone(),
        c_b_vec: c_b.to_vec().into(),
        poly: StdPolyhedron::new(a, rhs)?,
        split: Split::new(abar.n(), bbar.n()),
        cartesian: None,
    })
}

pub fn series_connect(
    abar: &LinkedForm,
    c_a: &[Rational],
    ca: &Rational,
    bbar: &LinkedForm,
    cb: &Rational,
    c_b: &[Rational],
) -> Result<ConnectionInstance> {
    check_forms(abar, bbar, c_a, c_b)?;
    let a = assemble(abar, bbar, true);
    let mut rhs: Vec<Rational> = c_a.to_vec();
    rhs.push(ca.clone());
    rhs.push(cb.clone());
    rhs.extend(c_b.iter().cloned());
    let split = Split::new(abar.n(), bbar.n());
    let base = |kind, poly, cartesian| ConnectionInstance {
        kind,
        abar: abar.clone(),
        bbar: bbar.clone(),
        c_a_vec: c_a.to_vec().into(),
        ca: ca.clone(),
        cb: cb.clone(),
        c_b_vec: c_b.to_vec().into(),
        poly,
        split: split.clone(),
        cartesian,
    };
    if rank(&a) == a.rows() {
        return Ok(base(
            ConnectionKind::Series,
            StdPolyhedron::new(a, rhs)?,
            None,
        ));
    }
    // the two linking rows reduce to (0, 1, 0): s is fixed on each side
    let x0 = particular_solution(&abar.block(), c_a)?;
    let y0 = particular_solution(&bbar.block(), c_b)?;
    let s_q = ca - abar.link_row().dot(&x0);
    let s_r = cb - bbar.link_row().dot(&y0);
    let consistent = s_q == s_r;
    let keep: Vec<usize> = (0..a.rows()).filter(|&i| i != abar.m()).collect();
    let reduced = a.select_rows(&keep);
    let reduced_rhs: Vec<Rational> = keep.iter().map(|&i| rhs[i].clone()).collect();
    let factors = CartesianFactors {
        x_poly: StdPolyhedron::new(abar.block(), c_a.to_vec())?,
        y_poly: StdPolyhedron::new(bbar.block(), c_b.to_vec())?,
        s_value: s_q,
        consistent,
    };
    Ok(base(
        ConnectionKind::Cartesian,
        StdPolyhedron::new(reduced, reduced_rhs)?,
        Some(factors),
    ))
}

impl ConnectionInstance {
    pub fn m1(&self) -> usize {
        self.abar.m()
    }
    pub fn n1(&self) -> usize {
        self.abar.n()
    }
    pub fn m2(&self) -> usize {
        self.bbar.m()
    }
    pub fn n2(&self) -> usize {
        self.bbar.n()
    }

    pub fn x_of<'a>(&self, v: &'a [Rational]) -> &'a [Rational] {
        &v[self.split.x.clone()]
    }

    pub fn s_of<'a>(&self, v: &'a [Rational]) -> &'a Rational {
        &v[self.split.s]
    }

    pub fn y_of<'a>(&self, v: &'a [Rational]) -> &'a [Rational] {
        &v[self.split.y.clone()]
    }

    /// `(x, s)` as a point of the `A`-side polyhedron.
    pub fn xs_of(&self, v: &[Rational]) -> RationalVector {
        v[..=self.split.s].to_vec().into()
    }

    /// `(s, y)` as a point of the `B`-side polyhedron.
    pub fn sy_of(&self, v: &[Rational]) -> RationalVector {
        v[self.split.s..].to_vec().into()
    }

    pub fn join(&self, x: &[Rational], s: &Rational, y: &[Rational]) -> RationalVector {
        x.iter()
            .cloned()
            .chain(std::iter::once(s.clone()))
            .chain(y.iter().cloned())
            .collect()
    }

    /// `Q(t) = {(x, s) >= 0 : A x = c_A, a x + s = t}`.
    pub fn q_at(&self, t: &Rational) -> Result<StdPolyhedron> {
        let mut rhs = self.c_a_vec.clone();
        rhs.push(t.clone());
        StdPolyhedron::new(self.abar.matrix().clone(), rhs)
    }

    /// `R(t) = {(s, y) >= 0 : s + b y = t, B y = c_B}`.
    pub fn r_at(&self, t: &Rational) -> Result<StdPolyhedron> {
        let mut rhs = vec![t.clone()];
        rhs.extend(self.c_b_vec.iter().cloned());
        StdPolyhedron::new(self.bbar.matrix().clone(), rhs)
    }

    /// `Q = Q(c_a)`.
    pub fn q_poly(&self) -> Result<StdPolyhedron> {
        self.q_at(&self.ca)
    }

    /// `R = R(c_b)`.
    pub fn r_poly(&self) -> Result<StdPolyhedron> {
        self.r_at(&self.cb)
    }

    /// `a x` for the `x`-block of a point.
    pub fn a_dot(&self, v: &[Rational]) -> Rational {
        self.abar.link_row().dot(self.x_of(v))
    }

    /// `b y` for the `y`-block of a point.
    pub fn b_dot(&self, v: &[Rational]) -> Rational {
        self.bbar.link_row().dot(self.y_of(v))
    }

    /// Same matrices, new block right-hand sides.
    pub fn with_rhs(
        &self,
        c_a: &[Rational],
        ca: &Rational,
        cb: &Rational,
        c_b: &[Rational],
    ) -> Result<Self> {
        match self.kind {
            ConnectionKind::Parallel => parallel_connect(&self.abar, c_a, ca, &self.bbar, cb, c_b),
            _ => series_connect(&self.abar, c_a, ca, &self.bbar, cb, c_b),
        }
    }

    /// Block right-hand sides read back from a full right-hand side.
    /// For parallel connections `c_a` keeps its value and `c_b` absorbs the
    /// change in the merged entry.
    pub fn rhs_blocks(&self, b: &[Rational]) -> (Vec<Rational>, Rational, Rational, Vec<Rational>) {
        let m1 = self.m1();
        let c_a = b[..m1 - 1].to_vec();
        match self.kind {
            ConnectionKind::Parallel => {
                let cb = &b[m1 - 1] - &self.ca;
                (c_a, self.ca.clone(), cb, b[m1..].to_vec())
            }
            ConnectionKind::Series => (c_a, b[m1 - 1].clone(), b[m1].clone(), b[m1 + 1..].to_vec()),
            ConnectionKind::Cartesian => {
                // reduced system drops the second linking row
                (c_a, b[m1 - 1].clone(), self.cb.clone(), b[m1..].to_vec())
            }
        }
    }

    pub fn sidecar(&self) -> SplitSidecar {
        SplitSidecar {
            kind: self.kind,
            m1: self.m1(),
            n1: self.n1(),
            m2: self.m2(),
            n2: self.n2(),
            x: self.split.x.clone().collect(),
            s: self.split.s,
            y: self.split.y.clone().collect(),
            ca: self.ca.clone(),
            cb: self.cb.clone(),
        }
    }

    /// Rebuilds an instance from a connection polyhedron and its sidecar.
    pub fn from_sidecar(poly: &StdPolyhedron, side: &SplitSidecar) -> Result<Self> {
        let (m1, n1, m2, n2) = (side.m1, side.n1, side.m2, side.n2);
        if m1 == 0 || n1 == 0 || m2 == 0 || n2 == 0 {
            return Err(Error::Input("sidecar block sizes must be positive".into()));
        }
        let n = n1 + n2 - 1;
        let series_rows = m1 + m2;
        let expect_rows = match side.kind {
            ConnectionKind::Parallel => m1 + m2 - 1,
            ConnectionKind::Series => series_rows,
            ConnectionKind::Cartesian => series_rows - 1,
        };
        if poly.m() != expect_rows || poly.n() != n || side.s != n1 - 1 {
            return Err(Error::Input(
                "sidecar does not match the instance shape".into(),
            ));
        }
        let a = poly.a();
        let b = poly.b();
        let mut abar = a.submatrix(0..m1, 0..n1);
        abar[(m1 - 1, n1 - 1)] = Rational::one();
        let b_link = if side.kind == ConnectionKind::Parallel {
            m1 - 1
        } else {
            m1
        };
        let mut bbar = RationalMatrix::zeros(m2, n2);
        bbar[(0, 0)] = Rational::one();
        if side.kind == ConnectionKind::Cartesian {
            // second linking row was dropped; b is recovered from nothing, so
            // the sidecar cannot rebuild it
            return Err(Error::Input(
                "cartesian instances cannot be rebuilt from the reduced system".into(),
            ));
        }
        for j in 1..n2 {
            bbar[(0, j)] = a[(b_link, n1 - 1 + j)].clone();
        }
        bbar.set_block(1, 1, &a.submatrix(b_link + 1..b_link + m2, n1..n));
        let abar = LinkedForm::new(abar, LinkPosition::Last)?;
        let bbar = LinkedForm::new(bbar, LinkPosition::First)?;
        let c_a = b[..m1 - 1].to_vec();
        let c_b = b[b_link + 1..].to_vec();
        let inst = match side.kind {
            ConnectionKind::Parallel => {
                if &side.ca + &side.cb != b[m1 - 1] {
                    return Err(Error::Input(
                        "ca + cb does not match the merged right-hand side".into(),
                    ));
                }
                parallel_connect(&abar, &c_a, &side.ca, &bbar, &side.cb, &c_b)?
            }
            _ => series_connect(&abar, &c_a, &b[m1 - 1], &bbar, &b[m1], &c_b)?,
        };
        if inst.poly != *poly {
            return Err(Error::Input(
                "sidecar blocks do not reassemble the instance".into(),
            ));
        }
        Ok(inst)
    }
}

/// JSON sidecar recording the block split of a connection file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSidecar {
    pub kind: ConnectionKind,
    pub m1: usize,
    pub n1: usize,
    pub m2: usize,
    pub n2: usize,
    pub x: Vec<usize>,
    pub s: usize,
    pub y: Vec<usize>,
    #[serde(with = "as_string")]
    pub ca: Rational,
    #[serde(with = "as_string")]
    pub cb: Rational,
}

/// Outcome of making a connection instance simple.
#[derive(Clone, Debug)]
pub struct ConnectionPerturbation {
    pub instance: ConnectionInstance,
    /// Perturbation of the full connection polyhedron (last round).
    pub outer: Perturbation,
    /// Rounds of side perturbation needed (series only).
    pub rounds: usize,
}

const SERIES_ROUNDS: usize = 4;

/// Parallel: perturb the connection polyhedron. Series: perturb until the
/// connection polyhedron and both side polyhedra are simple.
pub fn perturb_connection(
    inst: &ConnectionInstance,
    guard: &Guardrail,
) -> Result<ConnectionPerturbation> {
    match inst.kind {
        ConnectionKind::Parallel => {
            let outer = perturb_to_simple_with(&inst.poly, guard)?;
            let (c_a, ca, cb, c_b) = inst.rhs_blocks(outer.poly.b());
            let instance = inst.with_rhs(&c_a, &ca, &cb, &c_b)?;
            Ok(ConnectionPerturbation {
                instance,
                outer,
                rounds: 0,
            })
        }
        ConnectionKind::Cartesian => {
            // perturb each factor and keep the forced s value
            let f = inst
                .cartesian
                .as_ref()
                .ok_or_else(|| Error::invariant("cartesian factors missing"))?;
            let px = perturb_to_simple_with(&f.x_poly, guard)?;
            let py = perturb_to_simple_with(&f.y_poly, guard)?;
            let x0 = particular_solution(px.poly.a(), px.poly.b())?;
            let y0 = particular_solution(py.poly.a(), py.poly.b())?;
            let ca = &f.s_value + inst.abar.link_row().dot(&x0);
            let cb = &f.s_value + inst.bbar.link_row().dot(&y0);
            let instance = inst.with_rhs(px.poly.b(), &ca, &cb, py.poly.b())?;
            // the product itself stays degenerate when s is forced to 0
            let outer = Perturbation {
                poly: instance.poly.clone(),
                epsilon: None,
                direction: None,
                preserves_bases: px.preserves_bases && py.preserves_bases,
                lost_bases: vec![],
            };
            Ok(ConnectionPerturbation {
                instance,
                outer,
                rounds: 1,
            })
        }
        ConnectionKind::Series => {
            let mut cur = inst.clone();
            for round in 0..SERIES_ROUNDS {
                let q = perturb_to_simple_with(&cur.q_poly()?, guard)?;
                let r = perturb_to_simple_with(&cur.r_poly()?, guard)?;
                let qb = q.poly.b();
                let rb = r.poly.b();
                let m1 = cur.m1();
                cur = cur.with_rhs(&qb[..m1 - 1], &qb[m1 - 1], &rb[0], &rb[1..])?;
                let outer = perturb_to_simple_with(&cur.poly, guard)?;
                if outer.epsilon.is_none() {
                    return Ok(ConnectionPerturbation {
                        instance: cur,
                        outer,
                        rounds: round + 1,
                    });
                }
                let (c_a, ca, cb, c_b) = cur.rhs_blocks(outer.poly.b());
                cur = cur.with_rhs(&c_a, &ca, &cb, &c_b)?;
                let q_simple = perturb_to_simple_with(&cur.q_poly()?, guard)?
                    .epsilon
                    .is_none();
                let r_simple = perturb_to_simple_with(&cur.r_poly()?, guard)?
                    .epsilon
                    .is_none();
                if q_simple && r_simple {
                    return Ok(ConnectionPerturbation {
                        instance: cur,
                        outer,
                        rounds: round + 1,
                    });
                }
            }
            Err(Error::NotSimple)
        }
    }
}
