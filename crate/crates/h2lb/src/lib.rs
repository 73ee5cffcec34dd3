//! Lower and upper bounds for best rational approximation in the Hardy space
//! `H2` of the unit circle.
//!
//! Given a function `f` that is analytic outside the closed unit disk and
//! vanishes at infinity, the toolbox estimates the distance (in the `L2` norm
//! of the circle) from `f` to rational functions with at most `n` poles in the
//! disk. It produces
//!
//! * lower bounds from the singular values and singular vectors of the Hankel
//!   operator with symbol `f` (sup-norm and quotient-norm variants),
//! * lower bounds specific to Blaschke products, computed from their zeros,
//! * a lower bound obtained by minimizing a linearized error over a convex
//!   set of denominators, solved with a small dedicated interior-point method,
//! * an upper bound from a multi-start quasi-Newton search over pole
//!   configurations.
//!
//! All bounds are floating-point estimates, not certified enclosures; every
//! report carries the truncation orders, grid sizes and solver tolerances that
//! produced it.

pub mod bounds;
pub mod fourier;
pub mod funcspec;
pub mod hankel;
pub mod linearized;
pub mod polynomial;
pub mod upper;

mod error;

pub use error::Error;
pub use num_complex::Complex64;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
