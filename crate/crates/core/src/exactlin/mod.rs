//! Exact rational scalars, vectors and matrices.
//!
//! All elimination is done fraction-free: each row is scaled to integers and
//! reduced with Bareiss' rule, so intermediate values stay minors of the input
//! and never need a gcd until the final back-substitution.

mod matrix;
mod normalize;
mod rational;
mod text;

pub use matrix::{bareiss_echelon, rank, solve_basis, RationalMatrix};
pub use normalize::{normalize_link_column, LinkPosition, Normalization, RowOp};
pub use rational::{
    as_string, format_rational, opt_as_string, parse_rational, rat, Rational, RationalVector,
};
pub use text::{
    parse_instance, parse_matrix, parse_rhs_line, read_matrix, read_rhs, write_instance,
    write_matrix, write_rhs_line, LineCursor,
};
