use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::connect::{
    fig1, parallel_connect, series_connect, ConnectionInstance, Digraph, LinkedForm, SplitSidecar,
};
use crate::error::{Error, Result};
use crate::exactlin::{LinkPosition, Rational, RationalMatrix, RationalVector};
use crate::polytope::StdPolyhedron;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Generator {
    RandomLinked,
    Graphic,
    Fig1,
    Cube,
    File,
}

impl std::str::FromStr for Generator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "random-linked" => Generator::RandomLinked,
            "graphic" => Generator::Graphic,
            "fig1" => Generator::Fig1,
            "cube" => Generator::Cube,
            "file" => Generator::File,
            _ => return Err(Error::Input(format!("unknown generator {s:?}"))),
        })
    }
}

/// Block sizes `(m1, n1, m2, n2)`; `m1` is the dimension for cubes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sizes {
    pub m1: usize,
    pub n1: usize,
    pub m2: usize,
    pub n2: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusFlags {
    pub require_integral: bool,
    pub require_simple: bool,
    pub hirsch_verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub generator: Generator,
    pub sizes: Sizes,
    /// Right-hand sides per matrix pair.
    pub rhs_samples: usize,
    /// Matrix pairs drawn.
    pub draws: usize,
    pub seed: u64,
    pub flags: CorpusFlags,
    /// Instance files for the `file` generator.
    pub files: Vec<PathBuf>,
}

impl CorpusSpec {
    pub fn new(generator: Generator, sizes: Sizes, seed: u64) -> Self {
        CorpusSpec {
            generator,
            sizes,
            rhs_samples: 1,
            draws: 1,
            seed,
            flags: CorpusFlags {
                require_integral: generator == Generator::Graphic,
                require_simple: false,
                hirsch_verified: generator == Generator::Graphic,
            },
            files: Vec::new(),
        }
    }

    pub fn with_samples(mut self, draws: usize, rhs_samples: usize) -> Self {
        self.draws = draws;
        self.rhs_samples = rhs_samples;
        self
    }

    fn check(&self) -> Result<()> {
        let s = self.sizes;
        let sized = matches!(self.generator, Generator::RandomLinked | Generator::Graphic);
        if sized && (s.m1 == 0 || s.m2 == 0 || s.n1 < s.m1 || s.n2 < s.m2) {
            return Err(Error::Input(format!("bad block sizes {s:?}")));
        }
        if sized && (s.m1 > 6 || s.m2 > 6 || s.n1 > 10 || s.n2 > 10) {
            return Err(Error::Guardrail(format!("block sizes {s:?} above desk scale")));
        }
        if self.generator == Generator::Cube && !(1..=6).contains(&s.m1) {
            return Err(Error::Guardrail("cube dimension must be 1..=6".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub enum InstanceBody {
    Connection(ConnectionInstance),
    Plain(StdPolyhedron),
}

#[derive(Clone, Debug)]
pub struct CorpusInstance {
    pub id: String,
    pub generator: Generator,
    pub body: InstanceBody,
    /// Generated with a totally unimodular matrix and integer data.
    pub integral: bool,
    pub hirsch_verified: bool,
}

impl CorpusInstance {
    pub fn kind_name(&self) -> String {
        match &self.body {
            InstanceBody::Connection(c) => c.kind.to_string(),
            InstanceBody::Plain(_) => "plain".into(),
        }
    }

    pub fn poly(&self) -> &StdPolyhedron {
        match &self.body {
            InstanceBody::Connection(c) => &c.poly,
            InstanceBody::Plain(p) => p,
        }
    }
}

/// `[0,1]^d` in standard form: `x_i + t_i = 1`.
pub fn cube(d: usize) -> StdPolyhedron {
    let mut a = RationalMatrix::zeros(d, 2 * d);
    for i in 0..d {
        a[(i, i)] = Rational::from_integer(1.into());
        a[(i, d + i)] = Rational::from_integer(1.into());
    }
    StdPolyhedron::new(a, vec![Rational::from_integer(1.into()); d]).expect("cube")
}

const DRAW_ATTEMPTS: usize = 200;
const Z_MAX: i64 = 2;

/// Random `m x n` matrix with entries in `-2..=2` whose first row is
/// positive (so the polyhedron is bounded), brought to linked form.
fn random_linked(rng: &mut ChaCha8Rng, m: usize, n: usize, pos: LinkPosition) -> Result<LinkedForm> {
    let link = match pos {
        LinkPosition::Last => n - 1,
        LinkPosition::First => 0,
    };
    for _ in 0..DRAW_ATTEMPTS {
        let rows: Vec<Vec<Rational>> = (0..m)
            .map(|i| {
                (0..n)
                    .map(|_| {
                        let v = if i == 0 { rng.gen_range(1..=2) } else { rng.gen_range(-2..=2) };
                        Rational::from_integer(v.into())
                    })
                    .collect()
            })
            .collect();
        let mat = RationalMatrix::from_rows(rows)?;
        if let Ok((form, _)) = LinkedForm::normalize(&mat, link, pos) {
            return Ok(form);
        }
    }
    Err(Error::Input(format!("no full-rank {m}x{n} draw")))
}

fn random_z(rng: &mut ChaCha8Rng, n: usize) -> RationalVector {
    let z: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=Z_MAX)).collect();
    RationalVector::from_i64(&z)
}

/// Block right-hand sides `(c_A, c_a, c_b, c_B)` from `Abar z1`, `Bbar z2`.
fn block_rhs(
    abar: &LinkedForm,
    bbar: &LinkedForm,
    z1: &RationalVector,
    z2: &RationalVector,
) -> (Vec<Rational>, Rational, Rational, Vec<Rational>) {
    let ra = abar.matrix().mul_vec(z1);
    let rb = bbar.matrix().mul_vec(z2);
    let m1 = abar.m();
    (
        ra[..m1 - 1].to_vec(),
        ra[m1 - 1].clone(),
        rb[0].clone(),
        rb[1..].to_vec(),
    )
}

fn both_connections(
    id: &str,
    generator: Generator,
    abar: &LinkedForm,
    bbar: &LinkedForm,
    rhs: (Vec<Rational>, Rational, Rational, Vec<Rational>),
    flags: CorpusFlags,
    integral: bool,
) -> Result<Vec<CorpusInstance>> {
    let (c_a, ca, cb, c_b) = rhs;
    let par = parallel_connect(abar, &c_a, &ca, bbar, &cb, &c_b)?;
    let ser = series_connect(abar, &c_a, &ca, bbar, &cb, &c_b)?;
    Ok(vec![
        CorpusInstance {
            id: format!("{id}-par"),
            generator,
            body: InstanceBody::Connection(par),
            integral,
            hirsch_verified: flags.hirsch_verified,
        },
        CorpusInstance {
            id: format!("{id}-ser"),
            generator,
            body: InstanceBody::Connection(ser),
            integral,
            hirsch_verified: flags.hirsch_verified,
        },
    ])
}

/// Random weakly connected acyclic digraph (arcs run from lower to higher
/// node) with `nodes` nodes and `arcs` arcs; arc `mark` is labelled `p`.
pub fn random_dag(rng: &mut ChaCha8Rng, nodes: usize, arcs: usize, mark: &str) -> Result<Digraph> {
    if nodes < 2 || arcs + 1 < nodes {
        return Err(Error::Input("a connected DAG needs nodes >= 2 and arcs >= nodes - 1".into()));
    }
    let mut ends: Vec<(usize, usize)> = (1..nodes).map(|v| (rng.gen_range(0..v), v)).collect();
    while ends.len() < arcs {
        let a = rng.gen_range(0..nodes);
        let b = rng.gen_range(0..nodes);
        if a != b {
            ends.push((a.min(b), a.max(b)));
        }
    }
    let marked = rng.gen_range(0..arcs);
    let labels: Vec<String> = (0..arcs)
        .map(|i| if i == marked { mark.to_string() } else { format!("a{i}") })
        .collect();
    Digraph::new(
        nodes,
        ends.iter()
            .zip(&labels)
            .map(|(&(t, h), l)| (t, h, l.as_str()))
            .collect(),
    )
}

/// Sidecar location for an instance file.
pub fn sidecar_path(p: &std::path::Path) -> PathBuf {
    let mut s = p.as_os_str().to_owned();
    s.push(".split.json");
    PathBuf::from(s)
}

/// Reads an instance file; a `<file>.split.json` sidecar makes it a
/// connection instance.
pub fn load_instance(path: &std::path::Path) -> Result<InstanceBody> {
    let text = std::fs::read_to_string(path)?;
    let poly = StdPolyhedron::parse(&text)?;
    let side = sidecar_path(path);
    if side.exists() {
        let sc: SplitSidecar = serde_json::from_str(&std::fs::read_to_string(side)?)?;
        Ok(InstanceBody::Connection(ConnectionInstance::from_sidecar(&poly, &sc)?))
    } else {
        Ok(InstanceBody::Plain(poly))
    }
}

/// Deterministic corpus for a spec.
pub fn generate_corpus(spec: &CorpusSpec) -> Result<Vec<CorpusInstance>> {
    spec.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let s = spec.sizes;
    let mut out = Vec::new();
    match spec.generator {
        Generator::RandomLinked => {
            for d in 0..spec.draws {
                let abar = random_linked(&mut rng, s.m1, s.n1, LinkPosition::Last)?;
                let bbar = random_linked(&mut rng, s.m2, s.n2, LinkPosition::First)?;
                for k in 0..spec.rhs_samples {
                    let (z1, z2) = (random_z(&mut rng, s.n1), random_z(&mut rng, s.n2));
                    let id = format!("rl{}x{}-{}x{}-s{}-d{d:03}-r{k:02}", s.m1, s.n1, s.m2, s.n2, spec.seed);
                    let rhs = block_rhs(&abar, &bbar, &z1, &z2);
                    out.extend(both_connections(&id, spec.generator, &abar, &bbar, rhs, spec.flags, false)?);
                }
            }
        }
        Generator::Graphic => {
            for d in 0..spec.draws {
                let g1 = random_dag(&mut rng, s.m1 + 1, s.n1, "p1")?;
                let g2 = random_dag(&mut rng, s.m2 + 1, s.n2, "p2")?;
                let (abar, _) = g1.linked_form("p1", LinkPosition::Last)?;
                let (bbar, _) = g2.linked_form("p2", LinkPosition::First)?;
                for k in 0..spec.rhs_samples {
                    let (z1, z2) = (random_z(&mut rng, s.n1), random_z(&mut rng, s.n2));
                    let id = format!("gr{}x{}-{}x{}-s{}-d{d:03}-r{k:02}", s.m1, s.n1, s.m2, s.n2, spec.seed);
                    let rhs = block_rhs(&abar, &bbar, &z1, &z2);
                    out.extend(both_connections(&id, spec.generator, &abar, &bbar, rhs, spec.flags, true)?);
                }
            }
        }
        Generator::Fig1 => {
            let (g1, g2) = fig1();
            let (abar, _) = g1.linked_form("p1", LinkPosition::Last)?;
            let (bbar, _) = g2.linked_form("p2", LinkPosition::First)?;
            let ones = |n: usize| RationalVector::from_i64(&vec![1; n]);
            let rhs = block_rhs(&abar, &bbar, &ones(abar.n()), &ones(bbar.n()));
            out.extend(both_connections("fig1", spec.generator, &abar, &bbar, rhs, spec.flags, true)?);
        }
        Generator::Cube => out.push(CorpusInstance {
            id: format!("cube{}", s.m1),
            generator: Generator::Cube,
            body: InstanceBody::Plain(cube(s.m1)),
            integral: true,
            hirsch_verified: true,
        }),
        Generator::File => {
            for path in &spec.files {
                out.push(CorpusInstance {
                    id: path.display().to_string(),
                    generator: Generator::File,
                    body: load_instance(path)?,
                    integral: false,
                    hirsch_verified: spec.flags.hirsch_verified,
                });
            }
        }
    }
    if spec.flags.require_integral || spec.flags.require_simple {
        let mut kept = Vec::with_capacity(out.len());
        for inst in out {
            let vs = crate::polytope::enumerate_vertices(inst.poly())?;
            let ok_int = !spec.flags.require_integral || crate::classify::integrality_check_vertices(&vs);
            let ok_simple = !spec.flags.require_simple
                || (!vs.is_empty() && crate::polytope::is_simple_vertices(&vs, inst.poly().m())?);
            if ok_int && ok_simple {
                kept.push(inst);
            }
        }
        out = kept;
    }
    Ok(out)
}

/// The mixed corpus used by the full campaign: random linked pairs and
/// graphic pairs over several block sizes, plus the worked example and
/// small cubes. Roughly 500 instances.
pub fn standard_corpus(seed: u64) -> Result<Vec<CorpusInstance>> {
    let sz = |m1, n1, m2, n2| Sizes { m1, n1, m2, n2 };
    let mut specs = Vec::new();
    for (i, s) in [sz(2, 3, 2, 3), sz(2, 4, 2, 4), sz(2, 4, 3, 5), sz(3, 5, 2, 4), sz(3, 5, 3, 5)]
        .into_iter()
        .enumerate()
    {
        specs.push(CorpusSpec::new(Generator::RandomLinked, s, seed + i as u64).with_samples(5, 5));
    }
    for (i, s) in [sz(2, 4, 2, 4), sz(3, 5, 3, 5), sz(3, 6, 2, 4), sz(3, 5, 3, 6), sz(2, 5, 3, 5)]
        .into_iter()
        .enumerate()
    {
        specs.push(CorpusSpec::new(Generator::Graphic, s, seed + 100 + i as u64).with_samples(5, 5));
    }
    specs.push(CorpusSpec::new(Generator::Fig1, sz(0, 0, 0, 0), seed));
    for d in [3, 4] {
        specs.push(CorpusSpec::new(Generator::Cube, sz(d, 2 * d, 0, 0), seed));
    }
    let mut out = Vec::new();
    for spec in &specs {
        out.extend(generate_corpus(spec)?);
    }
    Ok(out)
}
