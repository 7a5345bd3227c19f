//! Numerical laboratory for Dirichlet series in the Selberg class.
//!
//! The crate builds L-functions from coefficient data plus gamma-factor data
//! and then interrogates them numerically:
//!
//! * [`specfun`] — the special-function kernels everything else rests on
//!   (complex log-gamma, Bessel J and K, the Gauss hypergeometric function).
//! * [`characters`] — Dirichlet characters: enumeration, conductors, Gauss
//!   sums, and recognition of character coefficient sequences.
//! * [`lfunc`] — gamma factors, degree and conductor arithmetic, coefficient
//!   sources (zeta, Dirichlet L, the weight-12 cusp form), functional-equation
//!   residuals, and axiom audits.
//! * [`stats`] — prime-sum statistics: the `sum |a_p|^2 / p ~ n_F loglog x`
//!   law, orthogonality of distinct primitive functions, and divergence of
//!   `sum a_p / p^{1+i alpha}` at a pole.
//! * [`degree_gate`] — the machinery that rules out degrees 0 < d < 1 and
//!   constrains degree 0/1: decay profiles of inverse-Mellin coefficients,
//!   local-factor root growth, and the forced-theta computation.
//! * [`converse`] — the GL(2) converse-theorem laboratory around
//!   `f(x, y) = y^{1/2} sum a_n H_alpha(2 pi n x / sqrt(q)) K_beta(2 pi n y / sqrt(q))`
//!   and its inversion symmetry.
//!
//! All floating point work is in `f64`; routines that cannot certify their
//! truncation error at the requested tolerance return [`Error`] rather than
//! guessing.

pub mod characters;
pub mod converse;
pub mod degree_gate;
mod error;
pub mod lfunc;
pub mod specfun;
pub mod stats;

pub use error::{Error, Result};

/// Complex double used throughout.
pub type Complex = num_complex::Complex64;
