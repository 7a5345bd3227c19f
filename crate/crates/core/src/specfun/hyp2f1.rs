//! Gauss hypergeometric function `2F1(a, b; c; x)` for complex parameters
//! and real argument `x < 1/2`.
//!
//! Everything this crate needs lives on the closed negative axis (arguments
//! of the form `-a^2/b^2` or `-cot^2 theta`), plus a neighbourhood of zero.
//! Two routes cover that:
//!
//! * the defining series for `|x| < 1/2`, with a certified geometric tail
//!   bound once the term ratio is provably below one;
//! * the Pfaff transformation
//!   `2F1(a,b;c;x) = (1-x)^{-a} 2F1(a, c-b; c; x/(x-1))` for `x <= -1/2`,
//!   which maps the argument into `(0, 1)` where the series certifies.
//!
//! The Pfaff exponent is always taken on the parameter of smaller magnitude,
//! so `hyp2f1(a, b, ..)` and `hyp2f1(b, a, ..)` follow bit-identical paths
//! and the `a <-> b` symmetry holds exactly.

use super::{Accuracy, Compensated};
use crate::{Complex, Error, Result};

/// Evaluates `2F1(a, b; c; x)`.
///
/// # Errors
///
/// * parameter degeneracy when `c` is a non-positive integer (the series is
///   undefined);
/// * invalid input for `x >= 1/2` or non-finite `x`;
/// * non-convergence when the term budget is exhausted before the tail
///   certificate triggers (arguments extremely close to `x = -infinity`).
pub fn hyp2f1(a: Complex, b: Complex, c: Complex, x: f64, acc: &Accuracy) -> Result<Complex> {
    if c.im == 0.0 && c.re <= 0.0 && c.re.fract() == 0.0 {
        return Err(Error::ParameterDegeneracy {
            detail: format!("c = {c} is a non-positive integer"),
        });
    }
    if !x.is_finite() || x >= 0.5 {
        return Err(Error::InvalidInput {
            what: "hyp2f1",
            detail: format!("argument {x} outside (-inf, 1/2)"),
        });
    }
    if x == 0.0 {
        return Ok(Complex::new(1.0, 0.0));
    }
    if x > -0.5 {
        return series(a, b, c, x, acc);
    }
    // Pfaff route: pick the exponent parameter by magnitude, tie-broken
    // lexicographically, so argument order cannot change the path.
    let a_first = match a.norm_sqr().partial_cmp(&b.norm_sqr()) {
        Some(std::cmp::Ordering::Less) => true,
        Some(std::cmp::Ordering::Greater) => false,
        _ => (a.re, a.im) <= (b.re, b.im),
    };
    let (p, q) = if a_first { (a, b) } else { (b, a) };
    let w = x / (x - 1.0);
    let prefactor = (-p * (1.0 - x).ln()).exp();
    Ok(prefactor * series(p, c - q, c, w, acc)?)
}

/// Defining series with a certified tail: for every index `j >= m` the term
/// ratio is bounded by `rho = |x| (1+|a|/m)(1+|b|/m) / (1-|c|/m)` (each
/// factor is monotone decreasing in `m`), so once `rho < 0.95` the remaining
/// tail is at most `|t_m| rho / (1 - rho)`.
fn series(a: Complex, b: Complex, c: Complex, x: f64, acc: &Accuracy) -> Result<Complex> {
    let safe_from = 4.0 * (a.norm() + b.norm() + c.norm() + 2.0);
    let ax = x.abs();
    let mut term = Complex::new(1.0, 0.0);
    let mut sre = Compensated::default();
    let mut sim = Compensated::default();
    sre.add(1.0);
    let mut abs_sum = 1.0f64;
    let mut m = 0usize;
    loop {
        let mf = m as f64;
        let ratio = (a + mf) * (b + mf) / ((c + mf) * (mf + 1.0)) * x;
        term *= ratio;
        m += 1;
        sre.add(term.re);
        sim.add(term.im);
        abs_sum += term.norm();
        let k = m as f64;
        if k >= safe_from {
            let rho = ax * (1.0 + a.norm() / k) * (1.0 + b.norm() / k) / (1.0 - c.norm() / k);
            if rho > 0.0 && rho < 0.95 {
                let bound = term.norm() * rho / (1.0 - rho) + f64::EPSILON * abs_sum * 4.0;
                let value = Complex::new(sre.value(), sim.value());
                if acc.accepts(bound, value.norm()) {
                    return Ok(value);
                }
            }
        }
        if m >= acc.max_terms {
            return Err(Error::NonConvergence {
                what: "hyp2f1",
                detail: format!("series at x={x} not certified after {m} terms"),
            });
        }
    }
}
