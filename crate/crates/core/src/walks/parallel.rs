use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::classify::{classify_all, BasisSplit, Category};
use crate::connect::{ConnectionInstance, ConnectionKind};
use crate::error::{Error, Result};
use crate::exactlin::{Rational, RationalVector};
use crate::polytope::{build_skeleton, pivot_step, PivotOutcome, Skeleton};

use super::lift::lift_points;
use super::record::{concat, WalkRecord};

/// Rows of the case table for the parallel connection, numbered 1..=11.
/// Each row fixes the categories of the endpoints, possibly a comparison of
/// `a x` at the two ends, and an additive constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TableRow(pub u8);

impl TableRow {
    pub const ALL: [TableRow; 11] = [
        TableRow(1),
        TableRow(2),
        TableRow(3),
        TableRow(4),
        TableRow(5),
        TableRow(6),
        TableRow(7),
        TableRow(8),
        TableRow(9),
        TableRow(10),
        TableRow(11),
    ];

    pub fn constant(self) -> usize {
        match self.0 {
            1..=3 | 8 | 9 => 0,
            4..=7 => 1,
            _ => 2,
        }
    }

    /// Human-readable description, e.g. `P2->P3 ax1<ax2`.
    pub fn describe(self) -> &'static str {
        match self.0 {
            1 => "P2->P2",
            2 => "P2->P3 ax1>=ax2",
            3 => "P2->P1 ax1<=ax2",
            4 => "P2->P3 ax1<ax2",
            5 => "P2->P1 ax1>ax2",
            6 => "P1->P1",
            7 => "P3->P3",
            8 => "P1->P3 ax1>=ax2",
            9 => "P3->P1 ax1<=ax2",
            10 => "P1->P3 ax1<ax2",
            _ => "P3->P1 ax1>ax2",
        }
    }

    pub fn label(self) -> String {
        format!("row{}", self.0)
    }
}

/// Table row for an ordered pair; `None` when the pair is handled by
/// reversing (the initial vertex is P1 or P3 and the final one P2).
pub fn table_row(cu: Category, cv: Category, ax_u: &Rational, ax_v: &Rational) -> Option<TableRow> {
    use Category::*;
    let ord = ax_u.cmp(ax_v);
    let row = match (cu, cv) {
        (P2, P2) => 1,
        (P2, P3) => {
            if ord != Ordering::Less {
                2
            } else {
                4
            }
        }
        (P2, P1) => {
            if ord != Ordering::Greater {
                3
            } else {
                5
            }
        }
        (P1, P1) => 6,
        (P3, P3) => 7,
        (P1, P3) => {
            if ord != Ordering::Less {
                8
            } else {
                10
            }
        }
        (P3, P1) => {
            if ord != Ordering::Greater {
                9
            } else {
                11
            }
        }
        _ => return None,
    };
    Some(TableRow(row))
}

/// A constructed parallel-connection walk with its accounting.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParallelWalk {
    pub record: WalkRecord,
    pub row: TableRow,
    /// Built from the pair `(v, u)` and reversed.
    pub reversed: bool,
    /// Steps of the lifted `Q(t)` walk.
    pub len_q: usize,
    /// Steps of the lifted `R(t)` walk.
    pub len_r: usize,
    /// Endpoint moves making `s` basic.
    pub moves: usize,
}

/// Shared state for walks on one parallel instance: the skeleton, vertex
/// categories and cached side skeletons `Q(t)`, `R(t)`.
pub struct ParallelContext<'a> {
    inst: &'a ConnectionInstance,
    skel: &'a Skeleton,
    splits: Vec<BasisSplit>,
    q_cache: RefCell<HashMap<Rational, Rc<Skeleton>>>,
    r_cache: RefCell<HashMap<Rational, Rc<Skeleton>>>,
}

impl<'a> ParallelContext<'a> {
    pub fn new(inst: &'a ConnectionInstance, skel: &'a Skeleton) -> Result<Self> {
        if inst.kind != ConnectionKind::Parallel {
            return Err(Error::Input(
                "parallel walk on a non-parallel instance".into(),
            ));
        }
        if !skel.simple {
            return Err(Error::NotSimple);
        }
        let splits = classify_all(inst, &skel.vertices)?;
        Ok(ParallelContext {
            inst,
            skel,
            splits,
            q_cache: RefCell::default(),
            r_cache: RefCell::default(),
        })
    }

    pub fn splits(&self) -> &[BasisSplit] {
        &self.splits
    }

    fn q_skel(&self, t: &Rational) -> Result<Rc<Skeleton>> {
        if let Some(s) = self.q_cache.borrow().get(t) {
            return Ok(s.clone());
        }
        let s = Rc::new(build_skeleton(&self.inst.q_at(t)?)?);
        self.q_cache.borrow_mut().insert(t.clone(), s.clone());
        Ok(s)
    }

    fn r_skel(&self, t: &Rational) -> Result<Rc<Skeleton>> {
        if let Some(s) = self.r_cache.borrow().get(t) {
            return Ok(s.clone());
        }
        let s = Rc::new(build_skeleton(&self.inst.r_at(t)?)?);
        self.r_cache.borrow_mut().insert(t.clone(), s.clone());
        Ok(s)
    }

    fn coords(&self, v: usize) -> &RationalVector {
        self.skel.coords(v)
    }

    fn ax(&self, v: usize) -> Rational {
        self.inst.a_dot(self.coords(v))
    }

    /// Neighbor of `v` reached by pivoting `s` into the basis.
    fn move_s_basic(&self, v: usize) -> Result<usize> {
        let basis = self.skel.vertices[v]
            .unique_basis()
            .ok_or(Error::NotSimple)?
            .to_vec();
        match pivot_step(&self.inst.poly, &basis, self.inst.split.s)? {
            PivotOutcome::Bounded { point, .. } => self
                .skel
                .index_of(&point)
                .ok_or_else(|| Error::invariant("pivot left the vertex set")),
            PivotOutcome::Unbounded { ray } => Err(Error::Unbounded { ray }),
        }
    }

    /// Shortest walk of a side skeleton between two points, as point list.
    fn side_path(
        side: &Skeleton,
        from: &RationalVector,
        to: &RationalVector,
    ) -> Result<Vec<RationalVector>> {
        let (Some(i), Some(j)) = (side.index_of(from), side.index_of(to)) else {
            return Err(Error::LiftFailed {
                index: 0,
                reason: "endpoint is not a vertex of the side polyhedron".into(),
            });
        };
        let path = side.shortest_path(i, j).ok_or(Error::Disconnected)?;
        Ok(path.into_iter().map(|k| side.coords(k).clone()).collect())
    }

    /// The two-phase walk `p -> (x_q, s', y_p) -> q`: a lifted `Q(t)` walk
    /// with `y` fixed, then a lifted `R(t')` walk with `x` fixed. `None` when
    /// the pair does not meet the preconditions.
    fn two_phase(&self, p: usize, q: usize) -> Result<Option<(Vec<usize>, usize, usize)>> {
        let (m1, m2) = (self.inst.m1(), self.inst.m2());
        if self.splits[p].y_count != m2 - 1 || self.splits[q].x_count != m1 - 1 {
            return Ok(None);
        }
        let (cp, cq) = (self.coords(p), self.coords(q));
        let (ax_p, ax_q) = (self.ax(p), self.ax(q));
        let s_p = self.inst.s_of(cp);
        if ax_q > &ax_p + s_p {
            return Ok(None);
        }
        let total = &self.inst.ca + &self.inst.cb;
        let by_p = self.inst.b_dot(cp);
        let y_p = self.inst.y_of(cp);
        let x_q = self.inst.x_of(cq);
        let s_mid = &total - &ax_q - &by_p;

        let xs_from: RationalVector = self.inst.xs_of(cp);
        let xs_to: RationalVector = x_q.iter().cloned().chain([s_mid.clone()]).collect();
        let q_side = self.q_skel(&(&total - &by_p))?;
        let q_walk = Self::side_path(&q_side, &xs_from, &xs_to)?;
        let lifted_q: Vec<RationalVector> = q_walk
            .iter()
            .map(|z| self.inst.join(&z[..z.len() - 1], &z[z.len() - 1], y_p))
            .collect();

        let sy_from: RationalVector = [s_mid].into_iter().chain(y_p.iter().cloned()).collect();
        let sy_to = self.inst.sy_of(cq);
        let r_side = self.r_skel(&(&total - &ax_q))?;
        let r_walk = Self::side_path(&r_side, &sy_from, &sy_to)?;
        let lifted_r: Vec<RationalVector> = r_walk
            .iter()
            .map(|z| self.inst.join(x_q, &z[0], &z[1..]))
            .collect();

        let mut walk = lift_points(self.skel, &lifted_q)?;
        let tail = lift_points(self.skel, &lifted_r)?;
        concat(&mut walk, &tail);
        Ok(Some((walk, q_walk.len() - 1, r_walk.len() - 1)))
    }

    /// Two-phase walk in whichever direction applies.
    fn zero_cost(&self, p: usize, q: usize) -> Result<Option<(Vec<usize>, usize, usize)>> {
        if p == q {
            return Ok(Some((vec![p], 0, 0)));
        }
        if let Some(w) = self.two_phase(p, q)? {
            return Ok(Some(w));
        }
        Ok(self.two_phase(q, p)?.map(|(mut w, lq, lr)| {
            w.reverse();
            (w, lq, lr)
        }))
    }

    /// Walk for a pair already in table orientation.
    fn forward(
        &self,
        u: usize,
        v: usize,
        row: TableRow,
    ) -> Result<(Vec<usize>, usize, usize, usize)> {
        let s_basic = |w: usize| self.splits[w].s_basic;
        let mut options: Vec<(Option<usize>, Option<usize>)> = Vec::new();
        match row.constant() {
            0 => options.push((None, None)),
            1 => {
                if !s_basic(u) {
                    options.push((Some(self.move_s_basic(u)?), None));
                }
                if !s_basic(v) {
                    options.push((None, Some(self.move_s_basic(v)?)));
                }
            }
            _ => options.push((Some(self.move_s_basic(u)?), Some(self.move_s_basic(v)?))),
        }
        for (mu, mv) in options {
            let a = mu.unwrap_or(u);
            let b = mv.unwrap_or(v);
            if let Some((mid, lq, lr)) = self.zero_cost(a, b)? {
                let mut walk = vec![u];
                concat(&mut walk, &mid);
                concat(&mut walk, &[v]);
                let moves = usize::from(mu.is_some()) + usize::from(mv.is_some());
                return Ok((walk, lq, lr, moves));
            }
        }
        Err(Error::invariant(format!(
            "no construction applies for {} between vertices {u} and {v}",
            row.label()
        )))
    }

    /// Constructs the case-table walk from `u` to `v`.
    pub fn walk(&self, u: usize, v: usize) -> Result<ParallelWalk> {
        if u == v {
            return Err(Error::Input("walk endpoints coincide".into()));
        }
        if u >= self.skel.len() || v >= self.skel.len() {
            return Err(Error::Input("vertex index out of range".into()));
        }
        let (cu, cv) = (self.splits[u].category, self.splits[v].category);
        let (a, b, reversed) = match table_row(cu, cv, &self.ax(u), &self.ax(v)) {
            Some(_) => (u, v, false),
            None => (v, u, true),
        };
        let row = table_row(
            self.splits[a].category,
            self.splits[b].category,
            &self.ax(a),
            &self.ax(b),
        )
        .ok_or_else(|| Error::invariant("no table row in either orientation"))?;
        let (mut walk, len_q, len_r, moves) = self.forward(a, b, row)?;
        if reversed {
            walk.reverse();
        }
        let mut label = row.label();
        if reversed {
            label.push_str("-rev");
        }
        let bound = len_q + len_r + row.constant();
        let record = WalkRecord::new(walk, label, Some(bound));
        record.verify_path(self.skel, u, v)?;
        Ok(ParallelWalk {
            record,
            row,
            reversed,
            len_q,
            len_r,
            moves,
        })
    }
}

/// One-shot parallel walk between two skeleton vertices.
pub fn parallel_walk(
    inst: &ConnectionInstance,
    skel: &Skeleton,
    u: usize,
    v: usize,
) -> Result<ParallelWalk> {
    ParallelContext::new(inst, skel)?.walk(u, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connect::fixtures::{degenerate_parallel, pentagon};
    use crate::exactlin::rat;
    use crate::polytope::build_skeleton;

    fn idx(skel: &Skeleton, c: &[(i64, i64)]) -> usize {
        let v: Vec<Rational> = c.iter().map(|&(p, q)| rat(p, q)).collect();
        skel.index_of(&v).unwrap()
    }

    #[test]
    fn pentagon_p2_pair_uses_row_one() {
        let inst = pentagon();
        let skel = build_skeleton(&inst.poly).unwrap();
        let ctx = ParallelContext::new(&inst, &skel).unwrap();
        let p2: Vec<usize> = (0..skel.len())
            .filter(|&i| ctx.splits()[i].category == Category::P2)
            .collect();
        assert_eq!(p2.len(), 3);
        for &u in &p2 {
            for &v in &p2 {
                if u == v {
                    continue;
                }
                let w = ctx.walk(u, v).unwrap();
                assert_eq!(w.row, TableRow(1));
                assert!(w.record.length <= w.len_q + w.len_r);
                assert!(w.record.length >= skel.distance(u, v).unwrap());
            }
        }
    }

    #[test]
    fn pentagon_all_pairs_within_bound() {
        let inst = pentagon();
        let skel = build_skeleton(&inst.poly).unwrap();
        let ctx = ParallelContext::new(&inst, &skel).unwrap();
        for u in 0..skel.len() {
            for v in 0..skel.len() {
                if u == v {
                    continue;
                }
                let w = ctx.walk(u, v).unwrap();
                w.record.verify(&skel, u, v).unwrap();
                let rev = w.record.reversed();
                rev.verify(&skel, v, u).unwrap();
            }
        }
    }

    #[test]
    fn pentagon_p1_to_p3() {
        let inst = pentagon();
        let skel = build_skeleton(&inst.poly).unwrap();
        let ctx = ParallelContext::new(&inst, &skel).unwrap();
        let p1 = (0..skel.len())
            .find(|&i| ctx.splits()[i].category == Category::P1)
            .unwrap();
        let p3 = (0..skel.len())
            .find(|&i| ctx.splits()[i].category == Category::P3)
            .unwrap();
        let w = ctx.walk(p1, p3).unwrap();
        assert!([8, 10].contains(&w.row.0));
        let d = skel.distance(p1, p3).unwrap();
        assert!(d == 1 || d == 2);
        assert!(w.record.length <= w.record.claimed_bound.unwrap());
    }

    #[test]
    fn pentagon_specific_pair() {
        let inst = pentagon();
        let skel = build_skeleton(&inst.poly).unwrap();
        let u = idx(&skel, &[(2, 1), (0, 1), (3, 2), (1, 1), (0, 1)]);
        let v = idx(&skel, &[(1, 2), (3, 2), (0, 1), (1, 1), (0, 1)]);
        assert_eq!(parallel_walk(&inst, &skel, u, v).unwrap().record.length, 1);
    }

    #[test]
    fn equal_endpoints_refused() {
        let inst = pentagon();
        let skel = build_skeleton(&inst.poly).unwrap();
        assert!(matches!(
            parallel_walk(&inst, &skel, 0, 0),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn degenerate_instance_refused() {
        let inst = degenerate_parallel();
        let skel = build_skeleton(&inst.poly).unwrap();
        assert!(matches!(
            parallel_walk(&inst, &skel, 0, 1),
            Err(Error::NotSimple)
        ));
    }

    #[test]
    fn rows_partition_category_pairs() {
        use Category::*;
        let (lo, hi) = (rat(0, 1), rat(1, 1));
        let mut seen = std::collections::BTreeSet::new();
        for cu in [P1, P2, P3] {
            for cv in [P1, P2, P3] {
                for (a, b) in [(&lo, &hi), (&hi, &lo), (&lo, &lo)] {
                    match table_row(cu, cv, a, b) {
                        Some(r) => {
                            seen.insert(r);
                        }
                        None => assert!(table_row(cv, cu, b, a).is_some()),
                    }
                }
            }
        }
        assert_eq!(seen.len(), 11);
    }
}
