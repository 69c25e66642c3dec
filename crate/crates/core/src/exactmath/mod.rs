//! Exact rational arithmetic, multivariate polynomials and the two
//! polynomial summation engines every counting function is built from.

pub mod compiled;
pub mod linalg;
pub mod poly;
pub mod rational;
pub mod sums;

pub use compiled::CompiledPoly;
pub use poly::{Exponent, MultiPoly};
pub use rational::Rational;
pub use sums::{power_sum_polynomial, prefix_sum_polynomial};

/// Evaluates `p` at `x`.
pub fn poly_eval(p: &MultiPoly, x: &[Rational]) -> crate::Result<Rational> {
    p.eval(x)
}

/// Composes `p` with `subs`.
pub fn poly_substitute(p: &MultiPoly, subs: &[MultiPoly]) -> crate::Result<MultiPoly> {
    p.substitute(subs)
}
