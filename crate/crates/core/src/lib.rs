//! Parallel and series connections of standard-form polyhedra: exact
//! construction, vertex and edge enumeration, constructive walks and
//! diameter-bound verification.

pub mod classify;
pub mod connect;
pub mod error;
pub mod exactlin;
pub mod harness;
pub mod polytope;
pub mod walks;

pub use error::{Error, Result};
pub use exactlin::{Rational, RationalMatrix, RationalVector};
pub use polytope::{Skeleton, StdPolyhedron, VertexRecord};
