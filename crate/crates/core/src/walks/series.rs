use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::classify::{classify_all, s_range, BasisSplit, Category, Extended, SRange};
use crate::connect::{series_connect, ConnectionInstance, ConnectionKind, LinkedForm};
use crate::error::{Error, Result};
use crate::exactlin::{LinkPosition, Rational, RationalMatrix, RationalVector};
use crate::polytope::{build_skeleton, diameter, pivot_step, PivotOutcome, Skeleton, VertexRecord};

use super::nonrevisiting::{non_revisiting_within, NonRevisiting};
use super::record::{concat, erase_loops, WalkRecord};
use super::sbounded::{s_bounded_diameter, SLevels};

/// How an endpoint with split `(m1, 1, m2 - 1)` was moved off that split.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Crossover {
    NotNeeded,
    /// Lifted walk in `R` ending in a blocked pivot.
    Lifted(usize),
    /// No lifted walk applied; nearest suitable vertex by BFS.
    Fallback(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesCase {
    AllLift,
    Corrected,
    Spliced,
    /// Product instance: walk in each factor.
    Product,
}

impl SeriesCase {
    pub fn label(self) -> &'static str {
        match self {
            SeriesCase::AllLift => "all-lift",
            SeriesCase::Corrected => "corrected",
            SeriesCase::Spliced => "spliced",
            SeriesCase::Product => "product",
        }
    }
}

/// Per-instance quantities entering the quadratic bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesMeasures {
    pub diam_q: usize,
    pub diam_r: usize,
    /// s-bounded diameter of `R`.
    pub d_b: usize,
    /// Largest diameter of a face with `(x, s)` fixed.
    pub d_face: usize,
    /// Diameters of the `x` and `y` factors of the face `s = max_R s`, when
    /// that face is where the two sides get spliced.
    pub splice_face: Option<(usize, usize)>,
    /// `max(diam Q, x-factor)`.
    pub d_a: usize,
    /// `max(diam R, y-factor)`.
    pub d_bbar: usize,
    /// Hirsch-verified family: `d_bbar` replaces `d_face`.
    pub hirsch: bool,
    pub bound: usize,
}

impl SeriesMeasures {
    fn finish(mut self) -> Self {
        let (da, db, dbar) = (self.d_a as i64, self.d_b as i64, self.d_bbar as i64);
        let face = if self.hirsch {
            dbar
        } else {
            self.d_face as i64
        };
        let first = da * (db + 1) + face + 2 * dbar;
        let second = (da - 1) * (db + 1) + da + 3 * dbar + 2;
        self.bound = first.max(second).max(0) as usize;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesWalk {
    pub record: WalkRecord,
    pub case: SeriesCase,
    pub crossover: [Crossover; 2],
    /// Blocked lifts repaired by a walk in `R`.
    pub corrections: usize,
    /// Longest single correction, counted from the blocked pivot.
    pub max_correction: usize,
    /// Steps that fell back to plain BFS.
    pub fallbacks: usize,
    /// Steps before loop erasure.
    pub raw_length: usize,
}

/// Side data of a product instance.
struct Product {
    x: Skeleton,
    y: Skeleton,
    bound: usize,
}

/// Shared state for series walks on one instance. When `R` reaches lower
/// `s` values than `Q`, the roles of the two sides are swapped internally.
pub struct SeriesContext {
    inst: ConnectionInstance,
    mirrored: bool,
    skel: Skeleton,
    splits: Vec<BasisSplit>,
    q: Skeleton,
    r: Skeleton,
    /// `Q` vertex index of the `(x, s)` projection, when it is one.
    q_of: Vec<Option<usize>>,
    r_of: Vec<Option<usize>>,
    range: SRange,
    r_levels: SLevels,
    measures: SeriesMeasures,
    product: Option<Product>,
}

fn reversed_matrix(m: &RationalMatrix) -> Result<RationalMatrix> {
    let rows = (0..m.rows())
        .rev()
        .map(|i| m.row(i).iter().rev().cloned().collect())
        .collect();
    RationalMatrix::from_rows(rows)
}

fn rev(v: &[Rational]) -> Vec<Rational> {
    v.iter().rev().cloned().collect()
}

/// The same connection read right to left: `(x, s, y) -> (rev y, s, rev x)`.
pub fn mirror_series(inst: &ConnectionInstance) -> Result<ConnectionInstance> {
    let abar = LinkedForm::new(reversed_matrix(inst.bbar.matrix())?, LinkPosition::Last)?;
    let bbar = LinkedForm::new(reversed_matrix(inst.abar.matrix())?, LinkPosition::First)?;
    series_connect(
        &abar,
        &rev(&inst.c_b_vec),
        &inst.cb,
        &bbar,
        &inst.ca,
        &rev(&inst.c_a_vec),
    )
}

fn mirror_skeleton(skel: &Skeleton) -> Skeleton {
    let verts = skel
        .vertices
        .iter()
        .map(|v| {
            let n = v.coords.len();
            let flip = |s: &[usize]| {
                let mut o: Vec<usize> = s.iter().map(|&j| n - 1 - j).collect();
                o.sort_unstable();
                o
            };
            let mut bases: Vec<Vec<usize>> = v.bases.iter().map(|b| flip(b)).collect();
            bases.sort();
            VertexRecord {
                coords: rev(&v.coords).into(),
                bases,
                support: flip(&v.support),
            }
        })
        .collect();
    Skeleton::from_parts(verts, skel.edges.clone(), skel.simple)
}

fn only_basis(v: &VertexRecord) -> Result<&[usize]> {
    v.unique_basis().ok_or(Error::NotSimple)
}

/// Column entering and leaving between two adjacent vertices of a simple
/// polyhedron.
fn exchange(a: &VertexRecord, b: &VertexRecord) -> Result<(usize, usize)> {
    let (ba, bb) = (only_basis(a)?, only_basis(b)?);
    let entering = bb.iter().copied().find(|j| !ba.contains(j));
    let leaving = ba.iter().copied().find(|j| !bb.contains(j));
    match (entering, leaving) {
        (Some(e), Some(l)) => Ok((e, l)),
        _ => Err(Error::invariant("adjacent vertices share a basis")),
    }
}

/// Diameter of the subgraph induced by `members`.
fn induced_diameter(skel: &Skeleton, members: &[usize]) -> Result<usize> {
    let mut inside = vec![false; skel.len()];
    members.iter().for_each(|&v| inside[v] = true);
    let mut best = 0;
    for &v in members {
        let d = skel.bfs_restricted(v, |w| inside[w]);
        for &w in members {
            best = best.max(d[w].ok_or(Error::Disconnected)?);
        }
    }
    Ok(best)
}

impl SeriesContext {
    pub fn new(inst: &ConnectionInstance, skel: &Skeleton, hirsch: bool) -> Result<Self> {
        match inst.kind {
            ConnectionKind::Parallel => {
                return Err(Error::Input("series walk on a parallel instance".into()))
            }
            ConnectionKind::Cartesian => return Self::new_product(inst, skel),
            ConnectionKind::Series => {}
        }
        if !skel.simple {
            return Err(Error::NotSimple);
        }
        let range0 = s_range(inst)?;
        if range0.empty || skel.is_empty() {
            return Err(Error::Empty);
        }
        let mirrored = range0.s_min_r > range0.s_min_q;
        let (inst, skel, range) = if mirrored {
            let m = mirror_series(inst)?;
            let r = s_range(&m)?;
            (m, mirror_skeleton(skel), r)
        } else {
            (inst.clone(), skel.clone(), range0)
        };
        let splits = classify_all(&inst, &skel.vertices)?;
        let q = build_skeleton(&inst.q_poly()?)?;
        let r = build_skeleton(&inst.r_poly()?)?;
        if !q.simple || !r.simple {
            return Err(Error::NotSimple);
        }
        let q_of: Vec<Option<usize>> = (0..skel.len())
            .map(|v| q.index_of(&inst.xs_of(skel.coords(v))))
            .collect();
        let r_of: Vec<Option<usize>> = (0..skel.len())
            .map(|v| r.index_of(&inst.sy_of(skel.coords(v))))
            .collect();
        let r_levels = SLevels::new(&inst.r_poly()?, &r, 0)?;
        let d_b = s_bounded_diameter(&r, &r_levels)
            .ok_or_else(|| Error::invariant("s-bounded diameter of R undefined"))?;

        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (v, qv) in q_of.iter().enumerate() {
            if let Some(qv) = qv {
                groups.entry(*qv).or_default().push(v);
            }
        }
        let mut d_face = 0;
        for g in groups.values() {
            d_face = d_face.max(induced_diameter(&skel, g)?);
        }

        let splice_face = match (&range.s_max_r, &range.s_max_q) {
            (Extended::Finite(r_max), q_max) if Extended::Finite(r_max.clone()) < *q_max => {
                let face: Vec<usize> = (0..skel.len())
                    .filter(|&v| inst.s_of(skel.coords(v)) == r_max)
                    .collect();
                let first = *face
                    .first()
                    .ok_or_else(|| Error::invariant("face s = max_R s has no vertex"))?;
                let c0 = skel.coords(first).clone();
                let x_fiber: Vec<usize> = face
                    .iter()
                    .copied()
                    .filter(|&v| inst.y_of(skel.coords(v)) == inst.y_of(&c0))
                    .collect();
                let y_fiber: Vec<usize> = face
                    .iter()
                    .copied()
                    .filter(|&v| inst.x_of(skel.coords(v)) == inst.x_of(&c0))
                    .collect();
                Some((
                    induced_diameter(&skel, &x_fiber)?,
                    induced_diameter(&skel, &y_fiber)?,
                ))
            }
            _ => None,
        };
        let (diam_q, diam_r) = (diameter(&q)?, diameter(&r)?);
        let (fx, fy) = splice_face.unwrap_or((0, 0));
        let measures = SeriesMeasures {
            diam_q,
            diam_r,
            d_b,
            d_face,
            splice_face,
            d_a: diam_q.max(fx),
            d_bbar: diam_r.max(fy),
            hirsch,
            bound: 0,
        }
        .finish();
        Ok(SeriesContext {
            inst,
            mirrored,
            skel,
            splits,
            q,
            r,
            q_of,
            r_of,
            range,
            r_levels,
            measures,
            product: None,
        })
    }

    fn new_product(inst: &ConnectionInstance, skel: &Skeleton) -> Result<Self> {
        let f = inst
            .cartesian
            .as_ref()
            .ok_or_else(|| Error::invariant("product instance without factors"))?;
        if !f.consistent || skel.is_empty() {
            return Err(Error::Empty);
        }
        let x = build_skeleton(&f.x_poly)?;
        let y = build_skeleton(&f.y_poly)?;
        let bound = diameter(&x)? + diameter(&y)?;
        let range = SRange {
            s_min_q: f.s_value.clone(),
            s_max_q: Extended::Finite(f.s_value.clone()),
            s_min_r: f.s_value.clone(),
            s_max_r: Extended::Finite(f.s_value.clone()),
            s_min: f.s_value.clone(),
            s_max: Extended::Finite(f.s_value.clone()),
            s_diff: Some(Rational::default()),
            empty: false,
        };
        let measures = SeriesMeasures {
            diam_q: diameter(&x)?,
            diam_r: diameter(&y)?,
            d_b: 0,
            d_face: 0,
            splice_face: None,
            d_a: diameter(&x)?,
            d_bbar: diameter(&y)?,
            hirsch: false,
            bound,
        };
        Ok(SeriesContext {
            inst: inst.clone(),
            mirrored: false,
            skel: skel.clone(),
            splits: Vec::new(),
            q: Skeleton::from_parts(Vec::new(), Vec::new(), true),
            r: Skeleton::from_parts(Vec::new(), Vec::new(), true),
            q_of: Vec::new(),
            r_of: Vec::new(),
            range,
            r_levels: SLevels::from_values(Vec::new()),
            measures,
            product: Some(Product { x, y, bound }),
        })
    }

    pub fn measures(&self) -> &SeriesMeasures {
        &self.measures
    }

    /// Side roles were swapped because `R` reaches below `Q`.
    pub fn mirrored(&self) -> bool {
        self.mirrored
    }

    /// Extremes of `s` in the working orientation.
    pub fn range(&self) -> &SRange {
        &self.range
    }

    fn coords(&self, v: usize) -> &RationalVector {
        self.skel.coords(v)
    }

    fn s_at(&self, v: usize) -> &Rational {
        self.inst.s_of(self.coords(v))
    }

    fn r_col(&self, k: usize) -> usize {
        self.inst.split.s + k
    }

    /// Pivot at vertex `v` with column `col` entering: `(leaving, new vertex)`.
    fn pivot(&self, v: usize, col: usize) -> Result<Option<(usize, usize)>> {
        let basis = only_basis(&self.skel.vertices[v])?.to_vec();
        match pivot_step(&self.inst.poly, &basis, col)? {
            PivotOutcome::Bounded { leaving, point, .. } => {
                let w = self
                    .skel
                    .index_of(&point)
                    .ok_or_else(|| Error::invariant("pivot left the vertex set"))?;
                Ok(Some((leaving, w)))
            }
            PivotOutcome::Unbounded { .. } => Ok(None),
        }
    }

    /// BFS walk to the nearest vertex satisfying `goal` (ties: lowest index).
    fn nearest(&self, from: usize, goal: impl Fn(usize) -> bool) -> Result<Vec<usize>> {
        let d = self.skel.bfs(from);
        let target = (0..self.skel.len())
            .filter(|&w| goal(w))
            .filter_map(|w| d[w].map(|k| (k, w)))
            .min()
            .ok_or_else(|| Error::invariant("no vertex reachable for the fallback walk"))?
            .1;
        self.skel
            .shortest_path(from, target)
            .ok_or(Error::Disconnected)
    }

    fn y_split(&self, v: usize) -> bool {
        self.splits[v].y_count == self.inst.m2()
    }

    /// Restricted shortest path in `R` from `from` to the best target,
    /// preferring smaller distance and then the lexicographically smallest `y`.
    fn r_path(
        &self,
        from: usize,
        allow: impl Fn(&Rational) -> bool,
        target: impl Fn(&Rational) -> bool,
    ) -> Option<Vec<usize>> {
        let lv = &self.r_levels.values;
        let ok = |w: usize| w == from || allow(&lv[w]);
        let d = self.r.bfs_restricted(from, ok);
        let best = (0..self.r.len())
            .filter(|&w| target(&lv[w]))
            .filter_map(|w| d[w].map(|k| (k, &self.r.coords(w)[1..], w)))
            .min()?
            .2;
        self.r.shortest_path_restricted(from, best, ok)
    }

    /// Pivots along an `R` walk from `start`, one step per `R` edge, until a
    /// step does not lift. Returns the visited vertices and whether a step
    /// was blocked.
    fn lift_r(&self, start: usize, r_walk: &[usize]) -> Result<(Vec<usize>, bool)> {
        let mut out = vec![start];
        let mut cur = start;
        for w in r_walk.windows(2) {
            let (e, l) = exchange(&self.r.vertices[w[0]], &self.r.vertices[w[1]])?;
            let Some((leaving, next)) = self.pivot(cur, self.r_col(e))? else {
                return Ok((out, true));
            };
            out.push(next);
            cur = next;
            if leaving != self.r_col(l) {
                return Ok((out, true));
            }
            if self.r_of[next] != Some(w[1]) {
                return Err(Error::invariant("lifted R step landed elsewhere"));
            }
        }
        Ok((out, false))
    }

    /// `s` values at the ends of the `Q` edge containing the `(x, s)` part of
    /// `v`; `None` for the open end of a ray.
    fn q_edge_range(&self, v: usize) -> (Option<Rational>, Option<Rational>) {
        let n1 = self.inst.split.s + 1;
        let xs = &self.coords(v)[..n1];
        let ends: Vec<&Rational> = (0..self.q.len())
            .map(|i| self.q.coords(i))
            .filter(|c| c.iter().zip(xs).all(|(a, b)| a.is_zero() || !b.is_zero()))
            .map(|c| &c[n1 - 1])
            .collect();
        let here = &xs[n1 - 1];
        match ends.as_slice() {
            [a, b] => (Some((*a).min(*b).clone()), Some((*a).max(*b).clone())),
            [a] if *a <= here => (Some((*a).clone()), None),
            [a] => (None, Some((*a).clone())),
            _ => (None, None),
        }
    }

    /// Moves an endpoint with split `(m1, 1, m2 - 1)` to one whose `(x, s)`
    /// part is a vertex of `Q`.
    fn crossover(&self, v: usize) -> Result<(Vec<usize>, Crossover)> {
        if self.splits[v].category != Category::S2 {
            return Ok((vec![v], Crossover::NotNeeded));
        }
        let rg = &self.range;
        let r_here = self.r_of[v].ok_or_else(|| Error::invariant("S2 vertex off R"))?;
        let path = if rg.s_max_q < rg.s_max_r {
            let q_max = rg
                .s_max_q
                .finite()
                .cloned()
                .expect("finite below another extreme");
            self.r_path(r_here, |_| true, |s| *s > q_max)
        } else if rg.s_min_q > rg.s_min_r {
            let r_min = rg.s_min_r.clone();
            self.r_path(r_here, |_| true, |s| *s == r_min)
        } else {
            // any R vertex outside the s-range of the Q edge through (x, s)
            let (lo, hi) = self.q_edge_range(v);
            self.r_path(
                r_here,
                |_| true,
                |s| lo.as_ref().is_some_and(|l| s < l) || hi.as_ref().is_some_and(|h| s > h),
            )
        };
        if let Some(path) = path {
            let (walk, blocked) = self.lift_r(v, &path)?;
            let end = *walk.last().expect("nonempty");
            if blocked && self.y_split(end) {
                let len = walk.len() - 1;
                return Ok((walk, Crossover::Lifted(len)));
            }
        }
        let walk = self.nearest(v, |w| self.y_split(w))?;
        let len = walk.len() - 1;
        Ok((walk, Crossover::Fallback(len)))
    }

    /// Repairs a blocked lift at `cur` (between `Q` vertices `qa -> qb`):
    /// walk in `R` away from `s` level of `cur`, lifting until a step blocks
    /// and lands on `(x, s)` = `qb`. Returns the walk and whether it fell back.
    fn correct(&self, cur: usize, qa: usize, qb: usize) -> Result<(Vec<usize>, bool)> {
        let s_prev = &self.q.coords(qa)[self.q.coords(qa).len() - 1];
        let s_next = &self.q.coords(qb)[self.q.coords(qb).len() - 1];
        let s1 = self.s_at(cur).clone();
        let r_here = self.r_of[cur];
        let path = r_here.and_then(|r0| {
            if s_next < s_prev {
                let r_min = self.range.s_min_r.clone();
                self.r_path(r0, |s| *s <= s1, |s| *s == r_min)
            } else {
                match self.range.s_max_r.finite() {
                    Some(r_max) => {
                        let r_max = r_max.clone();
                        self.r_path(r0, |s| *s >= s1, |s| *s == r_max)
                    }
                    None => self.r_path(r0, |s| *s >= s1, |s| s >= s_next),
                }
            }
        });
        if let Some(path) = path {
            // both ends of the R path may sit on s = 0, so the last step can
            // reach qb without a block
            let (walk, _) = self.lift_r(cur, &path)?;
            if self.q_of[*walk.last().expect("nonempty")] == Some(qb) {
                return Ok((walk, false));
            }
        }
        Ok((self.nearest(cur, |w| self.q_of[w] == Some(qb))?, true))
    }

    /// Lifts the `Q` walk `qpath` starting at `start`. With `to_face` the
    /// last step is expected to be cut off by `s = max_R s`, and the walk
    /// ends on that face.
    fn lift_q(
        &self,
        start: usize,
        qpath: &[usize],
        to_face: bool,
        acc: &mut Accounting,
    ) -> Result<Vec<usize>> {
        let mut walk = vec![start];
        let mut cur = start;
        let steps = qpath.len().saturating_sub(1);
        for (i, w) in qpath.windows(2).enumerate() {
            let (e, l) = exchange(&self.q.vertices[w[0]], &self.q.vertices[w[1]])?;
            let last = to_face && i + 1 == steps;
            let pivoted = self.pivot(cur, e)?;
            if let Some((leaving, next)) = pivoted {
                if leaving == l {
                    if last {
                        return Err(Error::invariant("lift crossed the top of R"));
                    }
                    if self.q_of[next] != Some(w[1]) {
                        return Err(Error::invariant("lifted Q step landed elsewhere"));
                    }
                    walk.push(next);
                    cur = next;
                    continue;
                }
                walk.push(next);
                cur = next;
            }
            acc.corrections += 1;
            let (fix, fell_back) = if last {
                self.climb_to_face(cur)?
            } else if pivoted.is_none() {
                (self.nearest(cur, |v| self.q_of[v] == Some(w[1]))?, true)
            } else {
                self.correct(cur, w[0], w[1])?
            };
            acc.fallbacks += usize::from(fell_back);
            acc.max_correction = acc
                .max_correction
                .max(fix.len() - 1 + usize::from(pivoted.is_some()));
            concat(&mut walk, &fix);
            cur = *walk.last().expect("nonempty");
        }
        Ok(walk)
    }

    fn on_top_face(&self, v: usize) -> bool {
        self.range.s_max_r.finite() == Some(self.s_at(v))
    }

    /// From a blocked vertex, walk up in `R` to the face `s = max_R s`.
    fn climb_to_face(&self, cur: usize) -> Result<(Vec<usize>, bool)> {
        if self.on_top_face(cur) {
            return Ok((vec![cur], false));
        }
        let r_max = self
            .range
            .s_max_r
            .finite()
            .cloned()
            .ok_or_else(|| Error::invariant("splice needs a finite top of R"))?;
        let s1 = self.s_at(cur).clone();
        if let Some(path) =
            self.r_of[cur].and_then(|r0| self.r_path(r0, |s| *s >= s1, |s| *s == r_max))
        {
            let (walk, blocked) = self.lift_r(cur, &path)?;
            if !blocked && self.on_top_face(*walk.last().expect("nonempty")) {
                return Ok((walk, false));
            }
        }
        Ok((self.nearest(cur, |w| self.on_top_face(w))?, true))
    }

    /// Walk inside the face `s = max_R s`, non-revisiting when one exists.
    fn face_walk(&self, a: usize, b: usize, acc: &mut Accounting) -> Result<Vec<usize>> {
        let inside = |w: usize| self.on_top_face(w);
        if let NonRevisiting::Found(w) = non_revisiting_within(&self.skel, a, b, inside)? {
            return Ok(w.vertices);
        }
        acc.fallbacks += 1;
        self.skel
            .shortest_path_restricted(a, b, inside)
            .ok_or(Error::Disconnected)
    }

    fn product_walk(&self, p: &Product, u: usize, v: usize) -> Result<SeriesWalk> {
        let (cu, cv) = (self.coords(u), self.coords(v));
        let find = |sk: &Skeleton, c: &[Rational]| {
            sk.index_of(c)
                .ok_or_else(|| Error::invariant("product vertex factor missing"))
        };
        let s = self.inst.s_of(cu).clone();
        let xp =
            p.x.shortest_path(
                find(&p.x, self.inst.x_of(cu))?,
                find(&p.x, self.inst.x_of(cv))?,
            )
            .ok_or(Error::Disconnected)?;
        let yp =
            p.y.shortest_path(
                find(&p.y, self.inst.y_of(cu))?,
                find(&p.y, self.inst.y_of(cv))?,
            )
            .ok_or(Error::Disconnected)?;
        let mut pts: Vec<RationalVector> = xp
            .iter()
            .map(|&i| self.inst.join(p.x.coords(i), &s, self.inst.y_of(cu)))
            .collect();
        pts.extend(
            yp.iter()
                .skip(1)
                .map(|&j| self.inst.join(self.inst.x_of(cv), &s, p.y.coords(j))),
        );
        let walk = super::lift::lift_points(&self.skel, &pts)?;
        let raw_length = walk.len() - 1;
        let record = WalkRecord::new(walk, SeriesCase::Product.label(), Some(p.bound));
        record.verify_path(&self.skel, u, v)?;
        Ok(SeriesWalk {
            record,
            case: SeriesCase::Product,
            crossover: [Crossover::NotNeeded; 2],
            corrections: 0,
            max_correction: 0,
            fallbacks: 0,
            raw_length,
        })
    }

    /// Constructs the series walk from `u` to `v` (skeleton indices).
    pub fn walk(&self, u: usize, v: usize) -> Result<SeriesWalk> {
        if u == v {
            return Err(Error::Input("walk endpoints coincide".into()));
        }
        if u >= self.skel.len() || v >= self.skel.len() {
            return Err(Error::Input("vertex index out of range".into()));
        }
        if let Some(p) = &self.product {
            return self.product_walk(p, u, v);
        }
        let mut acc = Accounting::default();
        let (pre, cross_u) = self.crossover(u)?;
        let (post, cross_v) = self.crossover(v)?;
        for c in [cross_u, cross_v] {
            acc.fallbacks += usize::from(matches!(c, Crossover::Fallback(_)));
        }
        let (u1, v1) = (
            *pre.last().expect("nonempty"),
            *post.last().expect("nonempty"),
        );
        let (qa, qb) = (
            self.q_of[u1].ok_or_else(|| Error::invariant("crossover missed Q"))?,
            self.q_of[v1].ok_or_else(|| Error::invariant("crossover missed Q"))?,
        );
        let qpath = self.q.shortest_path(qa, qb).ok_or(Error::Disconnected)?;
        let q_s = |i: usize| {
            let c = self.q.coords(qpath[i]);
            c[c.len() - 1].clone()
        };
        let above: Vec<usize> = match self.range.s_max_r.finite() {
            Some(top) => (0..qpath.len()).filter(|&i| q_s(i) > *top).collect(),
            None => Vec::new(),
        };

        let mut walk = pre;
        let case = if let (Some(&first), Some(&last)) = (above.first(), above.last()) {
            let fwd = self.lift_q(u1, &qpath[..=first], true, &mut acc)?;
            let back_path: Vec<usize> = qpath[last..].iter().rev().copied().collect();
            let bwd = self.lift_q(v1, &back_path, true, &mut acc)?;
            let (fa, fb) = (
                *fwd.last().expect("nonempty"),
                *bwd.last().expect("nonempty"),
            );
            let mid = self.face_walk(fa, fb, &mut acc)?;
            concat(&mut walk, &fwd);
            concat(&mut walk, &mid);
            concat(&mut walk, &bwd.into_iter().rev().collect::<Vec<_>>());
            SeriesCase::Spliced
        } else {
            let lifted = self.lift_q(u1, &qpath, false, &mut acc)?;
            concat(&mut walk, &lifted);
            let here = *walk.last().expect("nonempty");
            let finish = self
                .skel
                .shortest_path_restricted(here, v1, |w| self.q_of[w] == Some(qb))
                .ok_or_else(|| Error::invariant("face with (x, s) fixed is disconnected"))?;
            concat(&mut walk, &finish);
            if acc.corrections > 0 {
                SeriesCase::Corrected
            } else {
                SeriesCase::AllLift
            }
        };
        concat(&mut walk, &post.into_iter().rev().collect::<Vec<_>>());
        let raw_length = walk.len() - 1;
        let walk = erase_loops(&walk);
        let label = if matches!(cross_u, Crossover::Fallback(_))
            || matches!(cross_v, Crossover::Fallback(_))
        {
            format!("{}+crossover-bfs", case.label())
        } else {
            case.label().to_string()
        };
        let record = WalkRecord::new(walk, label, Some(self.measures.bound));
        record.verify_path(&self.skel, u, v)?;
        Ok(SeriesWalk {
            record,
            case,
            crossover: [cross_u, cross_v],
            corrections: acc.corrections,
            max_correction: acc.max_correction,
            fallbacks: acc.fallbacks,
            raw_length,
        })
    }
}

#[derive(Default)]
struct Accounting {
    corrections: usize,
    max_correction: usize,
    fallbacks: usize,
}

/// One-shot series walk between two skeleton vertices.
pub fn series_walk(
    inst: &ConnectionInstance,
    skel: &Skeleton,
    u: usize,
    v: usize,
    hirsch: bool,
) -> Result<SeriesWalk> {
    SeriesContext::new(inst, skel, hirsch)?.walk(u, v)
}
