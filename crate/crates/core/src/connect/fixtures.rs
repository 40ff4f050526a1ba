//! Small named instances used in tests, benches and the CLI.

use super::instance::{parallel_connect, series_connect, ConnectionInstance};
use super::linked::LinkedForm;
use crate::exactlin::{rat, LinkPosition, Rational};

/// `[[1,1,0],[1,2,1]]`, link column last.
pub fn fix_a() -> LinkedForm {
    LinkedForm::from_i64(&[&[1, 1, 0], &[1, 2, 1]], LinkPosition::Last).expect("fixture")
}

/// `[[1,1,0],[0,1,1]]`, link column first.
pub fn fix_b() -> LinkedForm {
    LinkedForm::from_i64(&[&[1, 1, 0], &[0, 1, 1]], LinkPosition::First).expect("fixture")
}

fn r(v: i64) -> Rational {
    rat(v, 1)
}

/// The simple pentagon: right-hand side `(2, 9/2, 1)`.
pub fn pentagon() -> ConnectionInstance {
    parallel_connect(&fix_a(), &[r(2)], &r(3), &fix_b(), &rat(3, 2), &[r(1)]).expect("fixture")
}

/// The degenerate parallel instance: right-hand side `(2, 5, 1)`.
pub fn degenerate_parallel() -> ConnectionInstance {
    parallel_connect(&fix_a(), &[r(2)], &r(3), &fix_b(), &r(2), &[r(1)]).expect("fixture")
}

/// Series connection of the two fixtures with `c_B = (c)`; `c = 2` gives a
/// segment, `c = 1` a single point.
pub fn series_fixture(c_b: i64) -> ConnectionInstance {
    series_connect(&fix_a(), &[r(2)], &r(3), &fix_b(), &r(2), &[r(c_b)]).expect("fixture")
}
