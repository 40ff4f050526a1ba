//! Parallel and series connections, 1- and 2-sums, graphic gluing and the
//! total-unimodularity check.

mod graphic;
mod instance;
mod linked;
mod sums;
mod tu;

pub mod fixtures;

pub use graphic::{fig1, graphic_connection, Arc, Digraph, GlueKind, GraphicConnection};
pub use instance::{
    parallel_connect, perturb_connection, series_connect, CartesianFactors, ConnectionInstance,
    ConnectionKind, ConnectionPerturbation, Split, SplitSidecar,
};
pub use linked::LinkedForm;
pub use sums::{linked_two_sum, one_sum, two_sum};
pub use tu::{integer_det, tu_check, tu_check_with, TuVerdict, TU_MAX_MINORS};
