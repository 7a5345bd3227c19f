//! Special-function kernels: complex log-gamma, Bessel `J_alpha` and
//! `K_beta`, and the Gauss hypergeometric function on the negative real axis.
//!
//! Every routine either certifies its truncation/rounding error against the
//! requested [`Accuracy`] or returns an error; none silently degrade.

mod bessel_j;
mod bessel_k;
mod gamma;
mod hyp2f1;

pub use bessel_j::bessel_j;
pub use bessel_k::bessel_k;
pub use gamma::{gamma, log_gamma, log_sin_pi, sin_pi};
pub use hyp2f1::hyp2f1;

/// Tolerance/budget bundle shared by the kernels.
///
/// A result is accepted when its certified error bound is below
/// `max(abs_tol, rel_tol * |value|)`; series and quadratures refuse once
/// `max_terms` evaluations would be exceeded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Accuracy {
    /// Absolute error floor.
    pub abs_tol: f64,
    /// Relative error target.
    pub rel_tol: f64,
    /// Hard budget on series terms / refinement work.
    pub max_terms: usize,
}

impl Default for Accuracy {
    fn default() -> Self {
        Accuracy {
            abs_tol: 1e-11,
            rel_tol: 1e-10,
            max_terms: 2_000_000,
        }
    }
}

impl Accuracy {
    /// Accuracy with the given relative target and a matching absolute floor.
    pub fn rel(rel_tol: f64) -> Self {
        Accuracy {
            abs_tol: rel_tol * 1e-2,
            rel_tol,
            ..Self::default()
        }
    }

    /// True when an error bound certifies a value of the given magnitude.
    pub fn accepts(&self, bound: f64, magnitude: f64) -> bool {
        bound <= self.abs_tol.max(self.rel_tol * magnitude)
    }
}

/// Neumaier (improved Kahan) compensated accumulator for `f64`.
///
/// Used wherever a sum suffers cancellation that plain left-to-right
/// accumulation would amplify.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Compensated {
    sum: f64,
    comp: f64,
}

impl Compensated {
    pub fn add(&mut self, t: f64) {
        let tmp = self.sum + t;
        if self.sum.abs() >= t.abs() {
            self.comp += (self.sum - tmp) + t;
        } else {
            self.comp += (t - tmp) + self.sum;
        }
        self.sum = tmp;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}
