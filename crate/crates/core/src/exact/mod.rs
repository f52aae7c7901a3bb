//! Exact arithmetic substrate: rationals, polynomials, matrices, real root isolation.

pub mod matrix;
pub mod poly;
pub mod rational;
pub mod sturm;

pub use matrix::{MatrixError, QMatrix};
pub use poly::QPoly;
pub use rational::{format_rational, parse_rational, rat, ratio, Rational};
pub use sturm::{sturm_isolate_real_roots, RootInterval};
