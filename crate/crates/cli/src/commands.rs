use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::json;

use polyconnect::classify::classify_all;
use polyconnect::connect::{
    fig1, graphic_connection, parallel_connect, perturb_connection, series_connect,
    ConnectionInstance, ConnectionKind, Digraph, GlueKind, LinkedForm,
};
use polyconnect::exactlin::{format_rational, parse_rational, write_matrix, LinkPosition};
use polyconnect::harness::{
    emit_report, generate_corpus, load_instance, sidecar_path, standard_corpus, verify_campaign,
    CampaignOptions, Check, CorpusInstance, CorpusSpec, Generator, InstanceBody, ReportFormat,
    Sizes,
};
use polyconnect::polytope::{
    build_skeleton_with, diameter, enumerate_vertices_with, estimate_diam_over_rhs_with,
    hirsch_bound, is_simple_vertices, perturb_to_simple_with, Guardrail, Sense,
};
use polyconnect::walks::{
    non_revisiting_walk, parallel_walk, s_monotone_walk, series_walk, NonRevisiting, WalkRecord,
};
use polyconnect::{Skeleton, StdPolyhedron};

use crate::{
    Command, Common, CorpusArg, DirectionArg, GlueArg, GraphFormat, Outcome, TableFormat,
    TextFormat, WalkMode,
};

pub fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("POLYCONNECT_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| anyhow!("POLYCONNECT_THREADS must be a positive integer, got {v:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .context("configuring the worker pool")?;
    Ok(())
}

pub fn run(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Connect {
            common,
            kind,
            link_a,
            link_b,
            format,
        } => connect(&common, kind, link_a, link_b, format),
        Command::Vertices { common, format } => vertices(&common, format),
        Command::Skeleton { common, perturb } => skeleton(&common, perturb),
        Command::Diameter {
            common,
            perturb,
            samples,
            seed,
            format,
        } => diameter_cmd(&common, perturb, samples, seed, format),
        Command::Classify { common, perturb } => classify(&common, perturb),
        Command::Walk {
            common,
            mode,
            from,
            to,
            direction,
            column,
            perturb,
            hirsch,
        } => walk(&common, mode, &from, to.as_deref(), direction, column, perturb, hirsch),
        Command::Verify {
            common,
            corpus,
            sizes,
            draws,
            rhs_samples,
            seed,
            checks,
            format,
            timings,
            hirsch,
        } => {
            let spec = CorpusRequest {
                corpus,
                sizes: &sizes,
                draws,
                rhs_samples,
                seed,
                hirsch,
            };
            verify(&common, &spec, &checks, format, timings)
        }
        Command::Graphic {
            common,
            kind,
            p1,
            p2,
            format,
        } => graphic(&common, kind, &p1, &p2, format),
    }
}

fn guard(common: &Common) -> Guardrail {
    common
        .max_bases
        .map(Guardrail::with_max_bases)
        .unwrap_or_default()
}

fn emit(common: &Common, text: &str) -> Result<()> {
    match &common.output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn one_input(common: &Common) -> Result<&Path> {
    match common.input.as_slice() {
        [p] => Ok(p),
        other => bail!("expected exactly one --input, got {}", other.len()),
    }
}

fn load(common: &Common) -> Result<InstanceBody> {
    let p = one_input(common)?;
    load_instance(p).with_context(|| format!("reading {}", p.display()))
}

fn body_poly(body: &InstanceBody) -> &StdPolyhedron {
    match body {
        InstanceBody::Connection(c) => &c.poly,
        InstanceBody::Plain(p) => p,
    }
}

/// Optionally replaces the instance by a simple perturbation of itself.
fn maybe_perturb(body: InstanceBody, perturb: bool, g: &Guardrail) -> Result<InstanceBody> {
    if !perturb {
        return Ok(body);
    }
    Ok(match body {
        InstanceBody::Connection(c) => InstanceBody::Connection(perturb_connection(&c, g)?.instance),
        InstanceBody::Plain(p) => InstanceBody::Plain(perturb_to_simple_with(&p, g)?.poly),
    })
}

fn strings(v: &[polyconnect::Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

/// Reads an instance file of a linked matrix and normalizes its link column.
fn linked_side(
    path: &Path,
    col: Option<usize>,
    position: LinkPosition,
) -> Result<(LinkedForm, Vec<polyconnect::Rational>)> {
    let p = StdPolyhedron::parse(&fs::read_to_string(path)?)
        .with_context(|| format!("reading {}", path.display()))?;
    let n = p.n();
    let col = col.unwrap_or(match position {
        LinkPosition::Last => n - 1,
        LinkPosition::First => 0,
    });
    if col >= n {
        bail!("link column {col} out of range for {}", path.display());
    }
    let (form, log) = LinkedForm::normalize(p.a(), col, position)?;
    Ok((form, log.apply_rhs(p.b()).to_vec()))
}

fn connect(
    common: &Common,
    kind: GlueArg,
    link_a: Option<usize>,
    link_b: Option<usize>,
    format: TextFormat,
) -> Result<Outcome> {
    let [pa, pb] = common.input.as_slice() else {
        bail!("connect needs two --input files (first and second side)");
    };
    let (abar, rhs_a) = linked_side(pa, link_a, LinkPosition::Last)?;
    let (bbar, rhs_b) = linked_side(pb, link_b, LinkPosition::First)?;
    let (c_a, ca) = rhs_a.split_at(rhs_a.len() - 1);
    let (cb, c_b) = rhs_b.split_at(1);
    let inst = match kind {
        GlueArg::Parallel => parallel_connect(&abar, c_a, &ca[0], &bbar, &cb[0], c_b)?,
        GlueArg::Series => series_connect(&abar, c_a, &ca[0], &bbar, &cb[0], c_b)?,
    };
    if inst.kind == ConnectionKind::Cartesian {
        eprintln!("note: linking rows are dependent; the series connection is a product");
    }
    let side = inst.sidecar();
    match format {
        TextFormat::Text => {
            emit(common, &inst.poly.to_text())?;
            match &common.output {
                Some(p) => fs::write(sidecar_path(p), serde_json::to_string_pretty(&side)? + "\n")?,
                None => eprintln!("note: the block split sidecar is written only with --output"),
            }
        }
        TextFormat::Json => {
            let v = json!({ "instance": inst.poly.to_text(), "split": side });
            emit(common, &(serde_json::to_string_pretty(&v)? + "\n"))?;
        }
    }
    Ok(Outcome::Ok)
}

fn vertices(common: &Common, format: TableFormat) -> Result<Outcome> {
    let body = load(common)?;
    let p = body_poly(&body);
    let vs = enumerate_vertices_with(p, &guard(common))?;
    let simple = !vs.is_empty() && is_simple_vertices(&vs, p.m())?;
    let text = match format {
        TableFormat::Json => {
            let v = json!({
                "vertices": vs.iter().map(|v| strings(&v.coords)).collect::<Vec<_>>(),
                "bases": vs.iter().map(|v| v.bases.clone()).collect::<Vec<_>>(),
                "simple": simple,
            });
            serde_json::to_string_pretty(&v)? + "\n"
        }
        TableFormat::Csv => {
            let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
            let mut header = vec!["vertex".to_string()];
            header.extend((0..p.n()).map(|j| format!("x{j}")));
            header.push("bases".into());
            w.write_record(&header)?;
            for (i, v) in vs.iter().enumerate() {
                let mut row = vec![i.to_string()];
                row.extend(strings(&v.coords));
                row.push(v.bases.len().to_string());
                w.write_record(&row)?;
            }
            String::from_utf8(w.into_inner()?)?
        }
    };
    emit(common, &text)?;
    Ok(Outcome::Ok)
}

fn skeleton_of(body: &InstanceBody, g: &Guardrail) -> Result<Skeleton> {
    Ok(build_skeleton_with(body_poly(body), g)?)
}

fn skeleton(common: &Common, perturb: bool) -> Result<Outcome> {
    let g = guard(common);
    let body = maybe_perturb(load(common)?, perturb, &g)?;
    let skel = skeleton_of(&body, &g)?;
    emit(common, &(serde_json::to_string_pretty(&skel.to_json())? + "\n"))?;
    Ok(Outcome::Ok)
}

fn diameter_cmd(
    common: &Common,
    perturb: bool,
    samples: Option<usize>,
    seed: u64,
    format: TextFormat,
) -> Result<Outcome> {
    let g = guard(common);
    let body = maybe_perturb(load(common)?, perturb, &g)?;
    let p = body_poly(&body);
    let text = if let Some(k) = samples {
        let est = estimate_diam_over_rhs_with(p.a(), k, seed, &g)?;
        match format {
            TextFormat::Text => format!("diameter lower bound {}\n", est.lower_bound),
            TextFormat::Json => {
                let v = json!({
                    "lowerBound": est.lower_bound,
                    "samples": k,
                    "seed": seed,
                    "witnesses": est.witnesses.iter().map(|w| strings(w)).collect::<Vec<_>>(),
                });
                serde_json::to_string_pretty(&v)? + "\n"
            }
        }
    } else {
        let skel = skeleton_of(&body, &g)?;
        if skel.is_empty() {
            bail!("polyhedron is empty");
        }
        let d = diameter(&skel)?;
        match format {
            TextFormat::Text => format!("diameter {d}\n"),
            TextFormat::Json => {
                let v = json!({
                    "diameter": d,
                    "vertices": skel.len(),
                    "edges": skel.edges.len(),
                    "hirsch": hirsch_bound(p),
                    "simple": skel.simple,
                });
                serde_json::to_string_pretty(&v)? + "\n"
            }
        }
    };
    emit(common, &text)?;
    Ok(Outcome::Ok)
}

fn connection(body: InstanceBody) -> Result<ConnectionInstance> {
    match body {
        InstanceBody::Connection(c) => Ok(c),
        InstanceBody::Plain(_) => {
            bail!("not a connection instance (no `<file>.split.json` sidecar next to the input)")
        }
    }
}

fn classify(common: &Common, perturb: bool) -> Result<Outcome> {
    let g = guard(common);
    let inst = connection(maybe_perturb(load(common)?, perturb, &g)?)?;
    let skel = build_skeleton_with(&inst.poly, &g)?;
    let splits = classify_all(&inst, &skel.vertices)
        .context("classification needs a simple instance; try --perturb")?;
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(["vertex", "xCount", "sBasic", "yCount", "category"])?;
    for (i, s) in splits.iter().enumerate() {
        w.write_record([
            i.to_string(),
            s.x_count.to_string(),
            u8::from(s.s_basic).to_string(),
            s.y_count.to_string(),
            s.category.to_string(),
        ])?;
    }
    emit(common, &String::from_utf8(w.into_inner()?)?)?;
    Ok(Outcome::Ok)
}

/// Vertex by index or by its comma-separated coordinates.
fn resolve_vertex(skel: &Skeleton, spec: &str) -> Result<usize> {
    let spec = spec.trim();
    if let Ok(i) = spec.parse::<usize>() {
        if i >= skel.len() {
            bail!("vertex index {i} out of range (0..{})", skel.len());
        }
        return Ok(i);
    }
    let coords: Vec<_> = spec
        .trim_matches(|c| c == '[' || c == ']' || c == '(' || c == ')')
        .split(',')
        .map(|t| parse_rational(t.trim()))
        .collect::<polyconnect::Result<_>>()?;
    skel.index_of(&coords)
        .ok_or_else(|| anyhow!("({spec}) is not a vertex"))
}

fn walk_json(skel: &Skeleton, w: &WalkRecord) -> serde_json::Value {
    json!({
        "case": w.case_label,
        "claimedBound": w.claimed_bound,
        "length": w.length,
        "vertices": w.vertices.iter().map(|&v| strings(skel.coords(v))).collect::<Vec<_>>(),
    })
}

#[allow(clippy::too_many_arguments)]
fn walk(
    common: &Common,
    mode: WalkMode,
    from: &str,
    to: Option<&str>,
    direction: DirectionArg,
    column: Option<usize>,
    perturb: bool,
    hirsch: bool,
) -> Result<Outcome> {
    let g = guard(common);
    let body = maybe_perturb(load(common)?, perturb, &g)?;
    let skel = skeleton_of(&body, &g)?;
    if skel.is_empty() {
        bail!("polyhedron is empty");
    }
    let u = resolve_vertex(&skel, from)?;
    let target = || -> Result<usize> {
        let t = to.ok_or_else(|| anyhow!("--to is required for this mode"))?;
        resolve_vertex(&skel, t)
    };
    let record = match mode {
        WalkMode::Parallel => {
            let inst = connection(body.clone())?;
            parallel_walk(&inst, &skel, u, target()?)?.record
        }
        WalkMode::Series => {
            let inst = connection(body.clone())?;
            series_walk(&inst, &skel, u, target()?, hirsch)?.record
        }
        WalkMode::Nonrevisiting => match non_revisiting_walk(&skel, u, target()?)? {
            NonRevisiting::Found(w) => w,
            NonRevisiting::None => bail!("no non-revisiting walk exists between these vertices"),
            NonRevisiting::Unknown(why) => bail!("search abandoned: {why}"),
        },
        WalkMode::Smonotone => {
            let col = match (&body, column) {
                (_, Some(c)) => c,
                (InstanceBody::Connection(c), None) => c.split.s,
                (InstanceBody::Plain(_), None) => bail!("--column is required on plain instances"),
            };
            let sense = match direction {
                DirectionArg::Max => Sense::Max,
                DirectionArg::Min => Sense::Min,
            };
            s_monotone_walk(body_poly(&body), &skel, u, col, sense)?
        }
    };
    emit(common, &(serde_json::to_string_pretty(&walk_json(&skel, &record))? + "\n"))?;
    Ok(if record.within_bound() {
        Outcome::Ok
    } else {
        Outcome::Violation
    })
}

struct CorpusRequest<'a> {
    corpus: CorpusArg,
    sizes: &'a str,
    draws: usize,
    rhs_samples: usize,
    seed: u64,
    hirsch: bool,
}

fn parse_sizes(text: &str) -> Result<Sizes> {
    let v: Vec<usize> = text
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .with_context(|| format!("bad --sizes {text:?}"))?;
    match v.as_slice() {
        [m1, n1, m2, n2] => Ok(Sizes {
            m1: *m1,
            n1: *n1,
            m2: *m2,
            n2: *n2,
        }),
        [d] => Ok(Sizes {
            m1: *d,
            n1: 2 * d,
            m2: 0,
            n2: 0,
        }),
        _ => bail!("--sizes takes `m1,n1,m2,n2` (or one cube dimension)"),
    }
}

fn build_corpus(common: &Common, req: &CorpusRequest) -> Result<Vec<CorpusInstance>> {
    if !common.input.is_empty() {
        let mut spec = CorpusSpec::new(Generator::File, parse_sizes("0,0,0,0")?, req.seed);
        spec.files = common.input.clone();
        spec.flags.hirsch_verified = req.hirsch;
        return Ok(generate_corpus(&spec)?);
    }
    let generator = match req.corpus {
        CorpusArg::Standard => return Ok(standard_corpus(req.seed)?),
        CorpusArg::RandomLinked => Generator::RandomLinked,
        CorpusArg::Graphic => Generator::Graphic,
        CorpusArg::Fig1 => Generator::Fig1,
        CorpusArg::Cube => Generator::Cube,
    };
    let spec = CorpusSpec::new(generator, parse_sizes(req.sizes)?, req.seed)
        .with_samples(req.draws, req.rhs_samples);
    Ok(generate_corpus(&spec)?)
}

fn verify(
    common: &Common,
    req: &CorpusRequest,
    checks: &str,
    format: TableFormat,
    timings: bool,
) -> Result<Outcome> {
    let checks = Check::parse_list(checks)?;
    let corpus = build_corpus(common, req)?;
    let opts = CampaignOptions {
        guard: guard(common),
        timings,
    };
    let reports = verify_campaign(&corpus, &checks, &opts)?;
    let format = match format {
        TableFormat::Csv => ReportFormat::Csv,
        TableFormat::Json => ReportFormat::Json,
    };
    let mut buf = Vec::new();
    emit_report(&reports, format, &mut buf)?;
    emit(common, &String::from_utf8(buf)?)?;
    let failed = reports.iter().filter(|r| !r.pass).count();
    let unknown = reports.iter().filter(|r| r.note.starts_with("unknown")).count();
    eprintln!(
        "{} instances, {} reports, {failed} failed, {unknown} unknown",
        corpus.len(),
        reports.len()
    );
    Ok(if failed == 0 {
        Outcome::Ok
    } else {
        Outcome::Violation
    })
}

fn graphic(
    common: &Common,
    kind: GlueArg,
    p1: &str,
    p2: &str,
    format: GraphFormat,
) -> Result<Outcome> {
    let (g1, g2) = match common.input.as_slice() {
        [] => fig1(),
        [a, b] => (read_digraph(a)?, read_digraph(b)?),
        _ => bail!("graphic takes two --input digraph files, or none for the worked example"),
    };
    let glue = match kind {
        GlueArg::Parallel => GlueKind::Parallel,
        GlueArg::Series => GlueKind::Series,
    };
    let conn = graphic_connection(&g1, p1, &g2, p2, glue)?;
    let text = match format {
        GraphFormat::Digraph => conn.graph.to_text(),
        GraphFormat::Matrix => write_matrix(&conn.incidence),
        GraphFormat::Json => {
            let rows: Vec<Vec<String>> = (0..conn.incidence.rows())
                .map(|i| strings(conn.incidence.row(i)))
                .collect();
            let v = json!({
                "graph": conn.graph,
                "incidence": rows,
                "linkArc": conn.graph.arcs[conn.link_arc].label,
            });
            serde_json::to_string_pretty(&v)? + "\n"
        }
    };
    emit(common, &text)?;
    Ok(Outcome::Ok)
}

fn read_digraph(p: &Path) -> Result<Digraph> {
    let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
    Digraph::parse(&text).with_context(|| format!("parsing {}", p.display()))
}
