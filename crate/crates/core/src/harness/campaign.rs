use std::collections::BTreeMap;
use std::time::Instant;

use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::corpus::{CorpusInstance, Generator, InstanceBody};
use super::report::{BoundReport, Check};
use crate::classify::{classify_vertex, integrality_check_vertices, s_range, Category, Extended};
use crate::connect::{perturb_connection, ConnectionInstance, ConnectionKind};
use crate::error::{Error, Result};
use crate::polytope::{
    build_skeleton_with, coordinate_objective, diameter, optimize, perturb_to_simple_with, Guardrail,
    LpOutcome, Sense, Skeleton, StdPolyhedron,
};
use crate::walks::nonrevisiting::non_revisiting_from_within;
use crate::walks::{ParallelContext, SeriesContext, TableRow};

#[derive(Clone, Debug, Default)]
pub struct CampaignOptions {
    pub guard: Guardrail,
    /// Record wall-clock time per report row.
    pub timings: bool,
}

/// Simple version of an instance with its skeleton.
struct Simple {
    conn: Option<ConnectionInstance>,
    poly: StdPolyhedron,
    skel: Skeleton,
}

struct Job<'a> {
    ci: &'a CorpusInstance,
    opts: &'a CampaignOptions,
    simple: Option<std::result::Result<Simple, String>>,
}

fn is_unknown(e: &Error) -> bool {
    matches!(e, Error::Guardrail(_) | Error::NotSimple)
}

impl<'a> Job<'a> {
    fn kind(&self) -> String {
        self.ci.kind_name()
    }

    fn conn(&self) -> Option<&'a ConnectionInstance> {
        match &self.ci.body {
            InstanceBody::Connection(c) => Some(c),
            InstanceBody::Plain(_) => None,
        }
    }

    fn base(&self, check: Check, reference: &str) -> BoundReport {
        BoundReport::new(&self.ci.id, &self.kind(), check, reference)
    }

    fn simple(&mut self) -> std::result::Result<&Simple, String> {
        if self.simple.is_none() {
            let made = (|| -> Result<Simple> {
                let guard = &self.opts.guard;
                let (conn, poly) = match &self.ci.body {
                    InstanceBody::Connection(c) => {
                        let p = perturb_connection(c, guard)?;
                        let poly = p.instance.poly.clone();
                        (Some(p.instance), poly)
                    }
                    InstanceBody::Plain(p) => (None, perturb_to_simple_with(p, guard)?.poly),
                };
                let skel = build_skeleton_with(&poly, guard)?;
                Ok(Simple { conn, poly, skel })
            })();
            self.simple = Some(made.map_err(|e| match e {
                Error::Empty => "empty".to_string(),
                e => format!("unknown: {e}"),
            }));
        }
        match self.simple.as_ref().expect("set above") {
            Ok(s) => Ok(s),
            Err(e) => Err(e.clone()),
        }
    }
}

fn applies(check: Check, kind: Option<ConnectionKind>) -> bool {
    use ConnectionKind::*;
    match check {
        Check::ThmParallel | Check::Table1Row => kind == Some(Parallel),
        Check::ThmSdiff => kind == Some(Series),
        Check::ThmQuadratic | Check::LemmaSrange => matches!(kind, Some(Series | Cartesian)),
        Check::PropCategorize => matches!(kind, Some(Parallel | Series)),
        Check::CartesianAdditivity => kind == Some(Cartesian),
        Check::Nonrevisiting | Check::Hirsch => true,
    }
}

fn category_counts(cats: &[Category]) -> String {
    let mut m: BTreeMap<Category, usize> = BTreeMap::new();
    cats.iter().for_each(|c| *m.entry(*c).or_default() += 1);
    m.iter().map(|(c, k)| format!("{c}={k}")).collect::<Vec<_>>().join(" ")
}

fn run_check(job: &mut Job, check: Check) -> Result<Vec<BoundReport>> {
    match check {
        Check::ThmParallel | Check::Table1Row => parallel_checks(job, check),
        Check::ThmQuadratic => quadratic(job),
        Check::ThmSdiff => sdiff(job),
        Check::LemmaSrange => srange(job),
        Check::PropCategorize => categorize(job),
        Check::Nonrevisiting => nonrevisiting(job),
        Check::Hirsch => hirsch(job),
        Check::CartesianAdditivity => additivity(job),
    }
}

macro_rules! simple_or_unknown {
    ($job:expr, $check:expr, $reference:expr) => {
        match $job.simple() {
            Ok(s) => s,
            Err(e) => return Ok(vec![$job.base($check, $reference).note(e)]),
        }
    };
}

fn parallel_checks(job: &mut Job, check: Check) -> Result<Vec<BoundReport>> {
    let reference = match check {
        Check::ThmParallel => "diameter <= lenQ + lenR + 2",
        _ => "walk length <= lenQ + lenR + row constant",
    };
    let base = job.base(check, reference);
    let s = simple_or_unknown!(job, check, reference);
    if s.skel.is_empty() {
        return Ok(vec![base.note("empty")]);
    }
    let inst = s.conn.as_ref().expect("connection");
    let ctx = ParallelContext::new(inst, &s.skel)?;
    let n = s.skel.len();
    let (mut lq, mut lr, mut bad) = (0, 0, 0);
    // row -> (pairs, reversed, worst (length, bound))
    let mut rows: BTreeMap<TableRow, (usize, usize, (usize, usize))> = BTreeMap::new();
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            let w = ctx.walk(u, v)?;
            lq = lq.max(w.len_q);
            lr = lr.max(w.len_r);
            let b = w.record.claimed_bound.unwrap_or(usize::MAX);
            if w.record.length > b {
                bad += 1;
            }
            let e = rows.entry(w.row).or_insert((0, 0, (0, 0)));
            e.0 += 1;
            e.1 += usize::from(w.reversed);
            let worst = e.2;
            if w.record.length as i64 - b as i64 > worst.0 as i64 - worst.1 as i64 || e.0 == 1 {
                e.2 = (w.record.length, b);
            }
        }
    }
    if check == Check::ThmParallel {
        let d = diameter(&s.skel)?;
        let mut r = base.le(d, lq + lr + 2);
        r.pass &= bad == 0;
        return Ok(vec![r.note(format!(
            "vertices={n} lenQ_max={lq} lenR_max={lr} walk_violations={bad}"
        ))]);
    }
    Ok(rows
        .into_iter()
        .map(|(row, (pairs, rev, (len, b)))| {
            let desc = row.describe();
            let mut parts = desc.splitn(2, ' ');
            let splits = parts.next().unwrap_or_default();
            let ineq = parts.next().unwrap_or("n/a");
            let (from, to) = splits.split_once("->").unwrap_or((splits, ""));
            let mut r = base.clone().le(len, b);
            r.initial_split = from.into();
            r.final_split = to.into();
            r.inequality = ineq.into();
            r.note = format!("{} +{} pairs={pairs} reversed={rev}", row.label(), row.constant());
            r
        })
        .collect())
}

fn quadratic(job: &mut Job) -> Result<Vec<BoundReport>> {
    const REF: &str = "diameter <= max{dA(db+1) + dB + 2dBbar, (dA-1)(db+1) + dA + 3dBbar + 2}";
    let hirsch = job.ci.hirsch_verified;
    let base = job.base(Check::ThmQuadratic, REF);
    let s = simple_or_unknown!(job, Check::ThmQuadratic, REF);
    if s.skel.is_empty() {
        return Ok(vec![base.note("empty")]);
    }
    let inst = s.conn.as_ref().expect("connection");
    let ctx = match SeriesContext::new(inst, &s.skel, hirsch) {
        Err(Error::Empty) => return Ok(vec![base.note("empty")]),
        other => other?,
    };
    let n = s.skel.len();
    let m = ctx.measures();
    let (mut bad, mut fallbacks, mut longest, mut max_corr) = (0, 0, 0, 0);
    let mut cases: BTreeMap<&'static str, usize> = BTreeMap::new();
    let mut crossings = 0;
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            let w = ctx.walk(u, v)?;
            if !w.record.within_bound() {
                bad += 1;
            }
            longest = longest.max(w.record.length);
            fallbacks += w.fallbacks;
            max_corr = max_corr.max(w.max_correction);
            crossings += w
                .crossover
                .iter()
                .filter(|c| matches!(c, crate::walks::Crossover::Lifted(_)))
                .count();
            *cases.entry(w.case.label()).or_default() += 1;
        }
    }
    let d = diameter(&s.skel)?;
    let mut r = base.le(d, m.bound);
    r.pass &= bad == 0;
    let case_text = cases.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ");
    Ok(vec![r.note(format!(
        "orientation={} dA={} db={} dB={} dBbar={} longest_walk={longest} walk_violations={bad} \
         max_correction={max_corr} crossovers={crossings} fallbacks={fallbacks} {case_text}",
        if ctx.mirrored() { "mirrored" } else { "direct" },
        m.d_a,
        m.d_b,
        m.d_face,
        m.d_bbar,
    ))])
}

fn exact_skeleton(job: &Job) -> Result<Skeleton> {
    build_skeleton_with(job.ci.poly(), &job.opts.guard)
}

fn sdiff(job: &mut Job) -> Result<Vec<BoundReport>> {
    const REF: &str = "diameter <= m1 + m2 + s_diff";
    let base = job.base(Check::ThmSdiff, REF);
    let inst = job.conn().expect("connection");
    if !job.ci.integral {
        return Ok(vec![base.note("n/a: not an integral family")]);
    }
    let skel = exact_skeleton(job)?;
    if skel.is_empty() {
        return Ok(vec![base.note("empty")]);
    }
    if !integrality_check_vertices(&skel.vertices) {
        return Ok(vec![base.note("n/a: vertices not integral")]);
    }
    let rg = s_range(inst)?;
    let Some(diff) = rg.s_diff else {
        return Ok(vec![base.note("n/a: s unbounded")]);
    };
    let diff = diff
        .to_integer()
        .to_usize()
        .ok_or_else(|| Error::invariant("s range not a small integer"))?;
    let d = diameter(&skel)?;
    Ok(vec![base.le(d, inst.m1() + inst.m2() + diff).note(format!(
        "m1={} m2={} s_diff={diff} vertices={}",
        inst.m1(),
        inst.m2(),
        skel.len()
    ))])
}

fn srange(job: &mut Job) -> Result<Vec<BoundReport>> {
    const REF: &str = "s_min = max(s_min_Q, s_min_R), s_max = min(s_max_Q, s_max_R), both attained";
    let base = job.base(Check::LemmaSrange, REF);
    let inst = job.conn().expect("connection");
    let rg = s_range(inst)?;
    let p = &inst.poly;
    let c = coordinate_objective(p.n(), inst.split.s);
    let lo = optimize(p, &c, Sense::Min)?;
    if rg.empty {
        let ok = lo == LpOutcome::Infeasible;
        let mut r = base.le(usize::from(!ok), 0);
        r.inequality = "==".into();
        return Ok(vec![r.note("empty")]);
    }
    let mut bad = Vec::new();
    let expect_min = rg.s_min_q.clone().max(rg.s_min_r.clone());
    let expect_max = Extended::min(&rg.s_max_q, &rg.s_max_r);
    if rg.s_min != expect_min || rg.s_max != expect_max {
        bad.push("range formula");
    }
    match &lo {
        LpOutcome::Optimal { value, x, .. } if *value == rg.s_min && p.contains(x) => {}
        _ => bad.push("min not attained"),
    }
    match (optimize(p, &c, Sense::Max)?, &rg.s_max) {
        (LpOutcome::Optimal { value, x, .. }, Extended::Finite(m)) if value == *m && p.contains(&x) => {}
        (LpOutcome::Unbounded { .. }, Extended::Infinite) => {}
        _ => bad.push("max not attained"),
    }
    let skel = exact_skeleton(job)?;
    let vals: Vec<_> = (0..skel.len()).map(|v| skel.coords(v)[inst.split.s].clone()).collect();
    if vals.iter().min() != Some(&rg.s_min) {
        bad.push("vertex min differs");
    }
    if let Extended::Finite(m) = &rg.s_max {
        if vals.iter().max() != Some(m) {
            bad.push("vertex max differs");
        }
    }
    let mut r = base.le(bad.len(), 0);
    r.inequality = "==".into();
    let mut note = format!("s_min={} s_max={}", rg.s_min, rg.s_max);
    if !bad.is_empty() {
        note.push_str(&format!(" mismatch: {}", bad.join(", ")));
    }
    Ok(vec![r.note(note)])
}

fn categorize(job: &mut Job) -> Result<Vec<BoundReport>> {
    const REF: &str = "every vertex falls in one of three split categories";
    let base = job.base(Check::PropCategorize, REF);
    let s = simple_or_unknown!(job, Check::PropCategorize, REF);
    if s.skel.is_empty() {
        return Ok(vec![base.note("empty")]);
    }
    let inst = s.conn.as_ref().expect("connection");
    let mut cats = Vec::new();
    let mut failed = 0;
    for v in &s.skel.vertices {
        match classify_vertex(inst, v) {
            Ok(b) => cats.push(b.category),
            Err(_) => failed += 1,
        }
    }
    Ok(vec![base.le(failed, 0).note(format!(
        "vertices={} {}",
        s.skel.len(),
        category_counts(&cats)
    ))])
}

fn nonrevisiting(job: &mut Job) -> Result<Vec<BoundReport>> {
    const REF: &str = "non-revisiting walk length <= m";
    let exhaustive = job.ci.generator == Generator::Cube;
    let base = job.base(Check::Nonrevisiting, REF);
    let s = simple_or_unknown!(job, Check::Nonrevisiting, REF);
    if s.skel.is_empty() {
        return Ok(vec![base.note("empty")]);
    }
    let m = s.poly.m();
    let n = s.skel.len();
    let (mut found, mut longest) = (0, 0);
    for u in 0..n {
        match non_revisiting_from_within(&s.skel, u, |_| true)? {
            Err(why) => return Ok(vec![base.note(format!("unknown: {why}"))]),
            Ok(walks) => {
                for p in walks.iter().flatten() {
                    found += 1;
                    longest = longest.max(p.len() - 1);
                }
            }
        }
    }
    let mut r = base.le(longest, m);
    if exhaustive {
        r.pass &= found == n * n;
    }
    Ok(vec![r.note(format!("found={found}/{} n={}", n * n, s.poly.n()))])
}

fn hirsch(job: &mut Job) -> Result<Vec<BoundReport>> {
    const REF: &str = "diameter <= m";
    let base = job.base(Check::Hirsch, REF);
    let s = simple_or_unknown!(job, Check::Hirsch, REF);
    if s.skel.is_empty() {
        return Ok(vec![base.note("empty")]);
    }
    Ok(vec![base.le(diameter(&s.skel)?, s.poly.m())])
}

fn additivity(job: &mut Job) -> Result<Vec<BoundReport>> {
    const REF: &str = "diameter of a product = sum of factor diameters";
    let base = job.base(Check::CartesianAdditivity, REF);
    let inst = job.conn().expect("connection");
    let f = inst.cartesian.as_ref().ok_or_else(|| Error::invariant("no factors"))?;
    let skel = exact_skeleton(job)?;
    if skel.is_empty() {
        return Ok(vec![base.note("empty")]);
    }
    let g = &job.opts.guard;
    let dx = diameter(&build_skeleton_with(&f.x_poly, g)?)?;
    let dy = diameter(&build_skeleton_with(&f.y_poly, g)?)?;
    let d = diameter(&skel)?;
    let mut r = base.le(d, dx + dy);
    r.pass = d == dx + dy;
    r.inequality = "==".into();
    Ok(vec![r.note(format!("x={dx} y={dy}"))])
}

fn verify_instance(ci: &CorpusInstance, checks: &[Check], opts: &CampaignOptions) -> Vec<BoundReport> {
    let mut job = Job { ci, opts, simple: None };
    let kind = job.conn().map(|c| c.kind);
    let mut out = Vec::new();
    for &check in checks {
        if !applies(check, kind) {
            continue;
        }
        let t0 = Instant::now();
        let mut rows = match run_check(&mut job, check) {
            Ok(rows) => rows,
            Err(e) => {
                let mut r = job.base(check, "");
                if is_unknown(&e) {
                    r.note = format!("unknown: {e}");
                } else {
                    r.pass = false;
                    r.note = format!("error: {e}");
                }
                vec![r]
            }
        };
        if opts.timings {
            let ms = t0.elapsed().as_millis() as u64;
            rows.iter_mut().for_each(|r| r.runtime_ms = Some(ms));
        }
        out.extend(rows);
    }
    out
}

/// Runs every applicable check on every instance (instances in parallel,
/// merged back in corpus order).
pub fn verify_campaign(
    corpus: &[CorpusInstance],
    checks: &[Check],
    opts: &CampaignOptions,
) -> Result<Vec<BoundReport>> {
    if corpus.is_empty() {
        return Err(Error::Input("empty corpus".into()));
    }
    let per: Vec<Vec<BoundReport>> = corpus
        .par_iter()
        .map(|ci| verify_instance(ci, checks, opts))
        .collect();
    Ok(per.into_iter().flatten().collect())
}
