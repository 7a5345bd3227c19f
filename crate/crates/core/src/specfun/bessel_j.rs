//! Bessel function of the first kind `J_alpha(x)` for real order
//! `alpha >= -1/2` and `x > 0`.
//!
//! Three regimes, each with a computable error bound:
//!
//! * ascending power series for moderate `x` (the bound tracks the absolute
//!   term sum, so cancellation is priced in),
//! * the large-`x` trigonometric expansion for `x >= max(12, 2 alpha^2)` —
//!   for half-odd orders the expansion terminates and is exact, which is why
//!   those orders double as cross-checks everywhere in this crate,
//! * a forward-recurrence bridge from two low-order seeds for the window in
//!   between, with the recurrence error propagated alongside the values.
//!
//! A request that certifies in no regime is refused.

use super::{Accuracy, Compensated};
use crate::{Error, Result};

/// Lower edge of the large-`x` expansion's validity.
const ASYMPTOTIC_MIN_X: f64 = 12.0;
/// Upper edge for trusting the ascending series in double precision.
const SERIES_MAX_X: f64 = 16.0;

/// Evaluates `J_alpha(x)` to the requested accuracy.
///
/// # Errors
///
/// * invalid input for `alpha < -1/2` or `x <= 0`;
/// * accuracy-not-achievable when no regime certifies `(alpha, x)` at the
///   requested tolerance (extreme orders at awkward arguments).
pub fn bessel_j(alpha: f64, x: f64, acc: &Accuracy) -> Result<f64> {
    if !(alpha >= -0.5) {
        return Err(Error::InvalidInput {
            what: "bessel_j",
            detail: format!("order {alpha} < -1/2"),
        });
    }
    if !(x > 0.0) {
        return Err(Error::InvalidInput {
            what: "bessel_j",
            detail: format!("argument {x} <= 0"),
        });
    }

    let half_odd = is_half_odd(alpha);
    let mut best: Option<(f64, f64)> = None;

    if x <= SERIES_MAX_X {
        best = tighter(best, series(alpha, x));
    }
    if half_odd {
        // Terminating expansion: exact at every x, with an honest rounding
        // bound that prices in the cancellation at small x.
        best = tighter(best, asymptotic(alpha, x, true));
    } else if x >= ASYMPTOTIC_MIN_X && x >= 2.0 * alpha * alpha {
        best = tighter(best, asymptotic(alpha, x, false));
    }
    if let Some((v, b)) = best {
        if acc.accepts(b, v.abs()) {
            return Ok(v);
        }
    }
    // Bridge window: seeds of low order, recurrence up to alpha.
    if x >= ASYMPTOTIC_MIN_X && !half_odd && alpha > 1.5 {
        best = tighter(best, bridge(alpha, x));
        if let Some((v, b)) = best {
            if acc.accepts(b, v.abs()) {
                return Ok(v);
            }
        }
    }
    let (v, b) = best.unwrap_or((f64::NAN, f64::INFINITY));
    Err(Error::AccuracyNotAchievable {
        what: "bessel_j",
        detail: format!("alpha={alpha} x={x}: best bound {b:.3e} on value {v:.6e}"),
    })
}

/// Keeps whichever candidate carries the smaller error bound.
fn tighter(best: Option<(f64, f64)>, cand: Option<(f64, f64)>) -> Option<(f64, f64)> {
    match (best, cand) {
        (Some((_, bb)), Some((v, b))) if b < bb => Some((v, b)),
        (None, c) => c,
        (b, _) => b,
    }
}

fn is_half_odd(alpha: f64) -> bool {
    let two = 2.0 * alpha;
    two.fract() == 0.0 && (two as i64) % 2 != 0
}

/// Ascending series `sum_m (-1)^m (x/2)^{2m+alpha} / (m! Gamma(m+alpha+1))`.
fn series(alpha: f64, x: f64) -> Option<(f64, f64)> {
    let lg = crate::specfun::log_gamma(num_complex::Complex64::new(alpha + 1.0, 0.0)).ok()?;
    let t0 = ((x / 2.0).ln() * alpha - lg.re).exp();
    if !t0.is_finite() {
        return None;
    }
    let q = -(x / 2.0) * (x / 2.0);
    let mut term = t0;
    let mut sum = Compensated::default();
    let mut abs_sum = t0;
    sum.add(t0);
    let mut m = 0usize;
    loop {
        let next = term * q / ((m as f64 + 1.0) * (m as f64 + 1.0 + alpha));
        m += 1;
        term = next;
        sum.add(term);
        abs_sum += term.abs();
        if term.abs() < f64::EPSILON * abs_sum * 1e-2 && (m as f64) > x / 2.0 {
            break;
        }
        if m > 400 {
            return None;
        }
    }
    // Rounding floor from the absolute term sum plus the truncation remainder
    // (terms decay faster than geometrically with ratio < 1/2 at the stop).
    let bound = f64::EPSILON * abs_sum * 4.0 + 2.0 * term.abs();
    Some((sum.value(), bound))
}

/// Large-`x` expansion
/// `J = sqrt(2/(pi x)) [cos(omega) P - sin(omega) Q]`,
/// `omega = x - alpha pi/2 - pi/4`; terminates exactly for half-odd orders.
///
/// When `terminates` is set the factor `4 alpha^2 - (2k-1)^2` reaches an
/// exact zero, so terms are summed without the monotone-decay guard (they
/// may grow first) and the truncation error is zero.
fn asymptotic(alpha: f64, x: f64, terminates: bool) -> Option<(f64, f64)> {
    let mu = 4.0 * alpha * alpha;
    let mut p = Compensated::default();
    let mut q = Compensated::default();
    let mut term = 1.0f64;
    let mut abs_sum = 1.0f64;
    p.add(1.0);
    let mut k = 0usize;
    let mut prev_abs = f64::INFINITY;
    let trunc;
    loop {
        let num = mu - (2.0 * k as f64 + 1.0) * (2.0 * k as f64 + 1.0);
        let next = term * num / (8.0 * x * (k as f64 + 1.0));
        k += 1;
        if next == 0.0 {
            trunc = 0.0; // terminated: the expansion is exact
            break;
        }
        if !terminates && (next.abs() >= prev_abs || k > 60) {
            trunc = next.abs(); // first omitted term bounds the tail
            break;
        }
        if terminates && k > 400 {
            return None; // cannot happen for half-odd orders; defensive
        }
        prev_abs = next.abs();
        term = next;
        abs_sum += term.abs();
        let signed = match k % 4 {
            0 => term,
            1 => term,
            2 => -term,
            _ => -term,
        };
        if k % 2 == 0 {
            p.add(signed);
        } else {
            q.add(signed);
        }
        if !terminates && term.abs() < f64::EPSILON * 1e-3 {
            trunc = term.abs();
            break;
        }
    }
    let omega = x - (0.5 * alpha + 0.25) * std::f64::consts::PI;
    let envelope = (2.0 / (std::f64::consts::PI * x)).sqrt();
    let value = envelope * (omega.cos() * p.value() - omega.sin() * q.value());
    let bound = envelope * (trunc + f64::EPSILON * abs_sum * 4.0)
        + f64::EPSILON * 4.0 * value.abs();
    Some((value, bound))
}

/// Forward recurrence `J_{v+1} = (2v/x) J_v - J_{v-1}` from two seeds of
/// order in `[-1/2, 3/2)`, carrying an error bound through the recurrence.
fn bridge(alpha: f64, x: f64) -> Option<(f64, f64)> {
    let steps = (alpha + 0.5).floor() as usize; // beta = alpha - steps in [-1/2, 1/2)
    let beta = alpha - steps as f64;
    let (mut jm, mut em) = asymptotic(beta, x, false)?;
    let (mut j, mut e) = asymptotic(beta + 1.0, x, false)?;
    let mut nu = beta + 1.0;
    for _ in 1..steps {
        let r = 2.0 * nu / x;
        let jn = r * j - jm;
        let en = r.abs() * e + em + f64::EPSILON * jn.abs() * 2.0;
        jm = j;
        em = e;
        j = jn;
        e = en;
        nu += 1.0;
    }
    Some((j, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn acc() -> Accuracy {
        Accuracy::default()
    }

    #[test]
    fn half_order_closed_form() {
        // J_{1/2}(x) = sqrt(2/(pi x)) sin x in every regime.
        for &x in &[0.5, 2.0, 5.0, 11.9, 12.1, 40.0, 200.0] {
            let want = (2.0 / (std::f64::consts::PI * x)).sqrt() * x.sin();
            let got = bessel_j(0.5, x, &acc()).unwrap();
            assert!(
                (got - want).abs() <= 1e-12 * want.abs().max(0.01),
                "J_1/2({x}): {got} vs {want}"
            );
        }
        // J_{-1/2}(2) = sqrt(2/(2 pi)) cos 2
        let got = bessel_j(-0.5, 2.0, &acc()).unwrap();
        assert!((got - -0.234785710406248469).abs() < 1e-13);
    }

    #[test]
    fn reference_points() {
        // (alpha, x, value): 25-digit reference evaluations.
        let cases = [
            (5.5, 10.0, -0.14012093236659252895), // series regime
            (5.5, 1.0, 7.3853119385948078433e-5), // small argument, high order
            (0.0, 8.0, 0.171650807137553906),     // series
            (0.0, 15.0, -0.0142244728267807732),  // large-x expansion
            (1.5, 2.0, 0.491293778687162345),
            (2.3, 7.1, -0.30603381632440931),  // series, fractional order
            (4.2, 30.0, -0.08911900874940945217), // bridge window (2 a^2 = 35.3)
            (6.8, 25.0, -0.05128279277491631822), // bridge window
        ];
        for &(a, x, want) in &cases {
            let got = bessel_j(a, x, &acc()).unwrap();
            assert!(
                (got - want).abs() <= 1e-10 * want.abs().max(1e-3),
                "J_{a}({x}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn three_term_recurrence() {
        // J_{a-1}(x) + J_{a+1}(x) = (2a/x) J_a(x)
        for &a in &[0.5, 1.5, 2.5, 3.5, 4.5, 5.5] {
            for &x in &[0.7, 1.0, 4.0, 17.0, 30.0, 50.0] {
                let jm = bessel_j(a - 1.0, x, &acc()).unwrap();
                let jp = bessel_j(a + 1.0, x, &acc()).unwrap();
                let j = bessel_j(a, x, &acc()).unwrap();
                let lhs = jm + jp;
                let rhs = 2.0 * a / x * j;
                assert!(
                    (lhs - rhs).abs() <= 1e-9 * lhs.abs().max(1.0),
                    "recurrence at a={a} x={x}: {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(bessel_j(-0.6, 1.0, &acc()).is_err());
        assert!(bessel_j(1.0, 0.0, &acc()).is_err());
        assert!(bessel_j(1.0, -2.0, &acc()).is_err());
    }
}
