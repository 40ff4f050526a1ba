//! Standard-form polyhedra: vertices, simplicity, perturbation, skeleton and
//! diameter.

mod enumerate;
mod perturb;
mod poly;
mod sample;
mod simplex;
mod skeleton;

pub use enumerate::{
    enumerate_vertices, enumerate_vertices_with, feasible_bases, is_simple, is_simple_vertices,
    VertexRecord,
};
pub use perturb::{perturb_to_simple, perturb_to_simple_with, perturbed_rhs, Perturbation};
pub use poly::{binomial, Guardrail, StdPolyhedron};
pub use sample::{estimate_diam_over_rhs, estimate_diam_over_rhs_with, DiamEstimate, SAMPLE_Z_MAX};
pub use simplex::{
    coordinate_objective, is_bounded, optimize, phase_one, pivot_step, primal_simplex,
    BasisTableau, LpOutcome, PivotOutcome, Sense, SimplexTrace,
};
pub use skeleton::{
    are_adjacent, build_skeleton, build_skeleton_with, diameter, hirsch_bound, Skeleton,
    SkeletonJson,
};

/// Facet visit set of a walk: coordinate facets `x_i = 0` by column index.
pub type FacetVisitSet = std::collections::BTreeSet<usize>;
