//! Constructive edge walks on connection polyhedra.

mod lift;
pub mod monotone;
pub mod nonrevisiting;
pub mod parallel;
pub mod record;
pub mod sbounded;
pub mod series;

pub use lift::lift_walk;
pub use monotone::s_monotone_walk;
pub use nonrevisiting::{non_revisiting_walk, non_revisiting_within, NonRevisiting};
pub use parallel::{parallel_walk, table_row, ParallelContext, ParallelWalk, TableRow};
pub use record::{erase_loops, WalkRecord};
pub use sbounded::{
    s_bounded_diameter, s_bounded_diameter_with, s_bounded_distance, SBoundedResult, SLevels,
};
pub use series::{
    mirror_series, series_walk, Crossover, SeriesCase, SeriesContext, SeriesMeasures, SeriesWalk,
};
