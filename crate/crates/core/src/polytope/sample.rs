use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::perturb::perturb_to_simple_with;
use super::poly::{Guardrail, StdPolyhedron};
use super::skeleton::{build_skeleton_with, diameter};
use crate::error::Result;
use crate::exactlin::{RationalMatrix, RationalVector};

/// Sampled lower bound on the diameter over all right-hand sides.
#[derive(Clone, Debug)]
pub struct DiamEstimate {
    /// Never claimed exact.
    pub lower_bound: usize,
    /// Right-hand sides attaining `lower_bound`.
    pub witnesses: Vec<RationalVector>,
    /// Every sampled right-hand side with its perturbed diameter.
    pub samples: Vec<(RationalVector, usize)>,
}

/// Largest `z` entry drawn when sampling `b = A z`.
pub const SAMPLE_Z_MAX: i64 = 3;

pub fn estimate_diam_over_rhs(
    a: &RationalMatrix,
    samples: usize,
    seed: u64,
) -> Result<DiamEstimate> {
    estimate_diam_over_rhs_with(a, samples, seed, &Guardrail::default())
}

pub fn estimate_diam_over_rhs_with(
    a: &RationalMatrix,
    samples: usize,
    seed: u64,
    guard: &Guardrail,
) -> Result<DiamEstimate> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = StdPolyhedron::new(a.clone(), RationalVector::zeros(a.rows()))?;
    let mut out = Vec::with_capacity(samples);
    for _ in 0..samples {
        let z: Vec<i64> = (0..a.cols())
            .map(|_| rng.gen_range(0..=SAMPLE_Z_MAX))
            .collect();
        let b = a.mul_vec(&RationalVector::from_i64(&z));
        let p = base.with_rhs(b.clone())?;
        let q = perturb_to_simple_with(&p, guard)?;
        let d = diameter(&build_skeleton_with(&q.poly, guard)?)?;
        out.push((b, d));
    }
    let lower_bound = out.iter().map(|(_, d)| *d).max().unwrap_or(0);
    let witnesses = out
        .iter()
        .filter(|(_, d)| *d == lower_bound)
        .map(|(b, _)| b.clone())
        .collect();
    Ok(DiamEstimate {
        lower_bound,
        witnesses,
        samples: out,
    })
}
