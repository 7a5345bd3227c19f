//! Contour-based evaluation: the smoothing kernel obtained by inverting the
//! gamma factor along a vertical line, the associated coefficient series
//! transform, a direct quadrature of the completed function, and the
//! functional-equation residual that compares a candidate against its
//! reflected partner.

use crate::lfunc::{GammaFactor, SelbergFunction};
use crate::specfun::{Accuracy, Compensated};
use crate::{Complex, Error, Result};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Vertical lines used for tail bounds: `|W(t)| ≤ t^{-c} I(c)` holds for
/// every line `c` the contour can shift to, so steeper lines certify far
/// shorter summation ranges.  Evaluation itself always happens on the
/// well-conditioned line `Re s = 2`; the high lines are used only through
/// the positive magnitude integral `I(c)`, which involves no cancellation.
const TAIL_LINES: [f64; 5] = [2.0, 6.0, 12.0, 24.0, 48.0];

/// Evaluation line for kernels; low enough that the oscillatory quadrature
/// keeps its terms at the scale of the result.
const EVAL_LINE: f64 = 2.0;

/// Trapezoid node spacing on the vertical line.  The integrand is analytic
/// in a strip of width ≥ 1 around the line, so the discretization error is
/// far below the truncation budget at this spacing.
const KERNEL_STEP: f64 = 0.05;

/// The kernel `W(t) = (1/2π) ∫ γ(c + iu) t^{-c-iu} du`: the inverse Mellin
/// transform of the gamma factor along `Re s = c`, discretized once so each
/// evaluation is a single pass over fixed node weights.
pub struct WKernel {
    c: f64,
    /// Node ordinates `u_k`.
    us: Vec<f64>,
    /// Trapezoid weights `γ(c + i u_k) · h / 2π` (endpoints halved).
    weights: Vec<Complex>,
    /// `Σ |weights| ≈ (1/2π) ∫ |γ(c+iu)| du`; `|W(t)| ≤ i_bound · t^{-c}`.
    i_bound: f64,
    /// Certified bound on the discarded vertical tails, scaled by `t^{-c}`.
    tail_vert: f64,
}

impl WKernel {
    /// Builds the kernel on `Re s = c ≥ 1`.  Fails for degree-0 data, whose
    /// gamma factor does not decay along vertical lines.
    pub fn new(gamma: &GammaFactor, c: f64) -> Result<Self> {
        let d = gamma.degree();
        if d <= 0.0 {
            return Err(Error::AccuracyNotAchievable {
                what: "WKernel",
                detail: "degree 0: the gamma factor has no vertical decay".into(),
            });
        }
        if c < 1.0 {
            return Err(Error::InvalidInput {
                what: "WKernel",
                detail: format!("line Re s = {c} must be >= 1"),
            });
        }
        // March the truncation height until the integrand has decayed 18
        // orders below the largest magnitude seen on the line.
        let mag = |u: f64| -> f64 {
            gamma
                .eval_log(Complex::new(c, u))
                .map(|lg| lg.re)
                .unwrap_or(f64::NEG_INFINITY)
        };
        let mut peak = mag(0.0);
        let mut t_cut = 4.0f64;
        loop {
            let m = mag(t_cut);
            peak = peak.max(m);
            if m < peak - 18.0 * std::f64::consts::LN_10 {
                break;
            }
            t_cut += 2.0;
            if t_cut > 2000.0 {
                return Err(Error::AccuracyNotAchievable {
                    what: "WKernel",
                    detail: format!("no decay on Re s = {c} within height 2000"),
                });
            }
        }
        let steps = (2.0 * t_cut / KERNEL_STEP).ceil() as usize;
        let h = 2.0 * t_cut / steps as f64;
        let mut us = Vec::with_capacity(steps + 1);
        let mut weights = Vec::with_capacity(steps + 1);
        let mut i_bound = 0.0f64;
        for k in 0..=steps {
            let u = -t_cut + k as f64 * h;
            let g = gamma.eval(Complex::new(c, u))?;
            let mut w = g * (h / TWO_PI);
            if k == 0 || k == steps {
                w *= 0.5;
            }
            i_bound += w.norm();
            us.push(u);
            weights.push(w);
        }
        // Tail of ∫ |γ| beyond ±t_cut: local exponential decay rate πd/4,
        // with a generous safety factor for the polynomial prefactor.
        let decay = std::f64::consts::PI * d / 4.0;
        let tail_vert = 2.0 * mag(t_cut).exp() / decay / TWO_PI * 8.0;
        Ok(WKernel { c, us, weights, i_bound, tail_vert })
    }

    pub fn line(&self) -> f64 {
        self.c
    }

    /// `(1/2π) ∫ |γ(c+iu)| du` over the retained nodes.
    pub fn magnitude_integral(&self) -> f64 {
        self.i_bound
    }

    /// Kernel value and an absolute error bound at `t > 0`.
    pub fn value(&self, t: f64) -> (Complex, f64) {
        let lt = t.ln();
        let mut re = Compensated::default();
        let mut im = Compensated::default();
        for (u, w) in self.us.iter().zip(&self.weights) {
            let (s, c) = (-u * lt).sin_cos();
            let rot = Complex::new(c, s);
            let term = w * rot;
            re.add(term.re);
            im.add(term.im);
        }
        let scale = (-self.c * lt).exp();
        let value = Complex::new(re.value(), im.value()) * scale;
        // vertical truncation + discretization allowance + rounding
        let err = scale * (self.tail_vert + self.i_bound * 1e-13);
        (value, err)
    }
}

/// Certified over-estimate of `(1/2π) ∫ |γ(c+iu)| du` plus its vertical
/// tail — a positive integral, so the coarse trapezoid involves no
/// cancellation.
fn magnitude_integral_on_line(gamma: &GammaFactor, c: f64) -> Result<f64> {
    let d = gamma.degree();
    if d <= 0.0 {
        return Err(Error::AccuracyNotAchievable {
            what: "magnitude_integral_on_line",
            detail: "degree 0: no vertical decay".into(),
        });
    }
    let mag = |u: f64| -> f64 {
        gamma
            .eval_log(Complex::new(c, u))
            .map(|lg| lg.re)
            .unwrap_or(f64::NEG_INFINITY)
    };
    let mut peak = mag(0.0);
    let mut t_cut = 4.0f64;
    loop {
        let m = mag(t_cut);
        peak = peak.max(m);
        if m < peak - 14.0 * std::f64::consts::LN_10 {
            break;
        }
        t_cut += 2.0;
        if t_cut > 2000.0 {
            return Err(Error::AccuracyNotAchievable {
                what: "magnitude_integral_on_line",
                detail: format!("no decay on Re s = {c} within height 2000"),
            });
        }
    }
    let h = 0.25f64;
    let steps = (2.0 * t_cut / h).ceil() as usize;
    let mut total = 0.0f64;
    for k in 0..=steps {
        let u = -t_cut + k as f64 * (2.0 * t_cut / steps as f64);
        let w = if k == 0 || k == steps { 0.5 } else { 1.0 };
        total += w * mag(u).exp();
    }
    total *= 2.0 * t_cut / steps as f64 / TWO_PI;
    let decay = std::f64::consts::PI * d / 4.0;
    let tail = 2.0 * mag(t_cut).exp() / decay / TWO_PI * 8.0;
    Ok(total * 1.02 + tail)
}

/// `S_F(x) = Σ_{n≥1} a_n W(n x)`: the coefficient series smoothed by the
/// kernel.  Terms are evaluated on the fixed line `Re s = 2`; the number
/// of terms and the certified tail come from the steepest usable line of
/// the magnitude-integral ladder.
pub fn series_transform(f: &SelbergFunction, x: f64, acc: &Accuracy) -> Result<(Complex, f64)> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::InvalidInput {
            what: "series_transform",
            detail: format!("x = {x} must be positive"),
        });
    }
    let eps = f.ramanujan_eps();
    let cc = f.ramanujan_c();
    let n_max = f.n_max();

    // tail_c(N) = I(c) · C · x^{-c} · N^{-(c-1-eps)} / (c-1-eps); pick the
    // line whose certificate needs the fewest terms.
    let target = acc.abs_tol.max(1e-15);
    let mut best: Option<(usize, f64, f64)> = None; // (N, scale, decay)
    for &c in &TAIL_LINES {
        if c <= 1.0 + eps {
            continue;
        }
        let i_c = magnitude_integral_on_line(f.gamma(), c)?;
        let decay = c - 1.0 - eps;
        let scale = i_c * cc * x.powf(-c) / decay;
        let needed = if scale <= target {
            1usize
        } else {
            ((scale / target).powf(1.0 / decay)).ceil() as usize
        };
        let n_use = needed.min(n_max);
        let tail = scale * (n_use as f64).powf(-decay);
        let better = match &best {
            None => true,
            Some((n_best, scale_best, decay_best)) => {
                let tail_best = scale_best * (*n_best as f64).powf(-decay_best);
                n_use < *n_best || (n_use == *n_best && tail < tail_best)
            }
        };
        if better {
            best = Some((n_use, scale, decay));
        }
    }
    let (n_use, tail_scale, tail_decay) = best.ok_or(Error::AccuracyNotAchievable {
        what: "series_transform",
        detail: "no admissible vertical line for this growth exponent".into(),
    })?;
    let tail = tail_scale * (n_use as f64).powf(-tail_decay);
    if n_use > acc.max_terms {
        return Err(Error::AccuracyNotAchievable {
            what: "series_transform",
            detail: format!("needs {n_use} terms, budget {}", acc.max_terms),
        });
    }
    let kernel = WKernel::new(f.gamma(), EVAL_LINE)?;

    let mut re = Compensated::default();
    let mut im = Compensated::default();
    let mut err = tail;
    for n in 1..=n_use {
        let a = f.coeffs()[n - 1];
        if a.norm_sqr() == 0.0 {
            continue;
        }
        let (w, w_err) = kernel.value(n as f64 * x);
        let term = a * w;
        re.add(term.re);
        im.add(term.im);
        err += a.norm() * w_err;
    }
    let value = Complex::new(re.value(), im.value());
    if !acc.accepts(err, value.norm()) && err > target * 4.0 {
        return Err(Error::AccuracyNotAchievable {
            what: "series_transform",
            detail: format!("certified bound {err:.3e} exceeds the accuracy target"),
        });
    }
    Ok((value, err))
}

/// Direct quadrature of `(1/2πi) ∫ γ(s) F(s) x^{-s} ds` on `Re s = 2`,
/// with `F` evaluated by certified partial sums at every node.  This is an
/// independent route to the same quantity as [`series_transform`]; it
/// refuses degree-0 data, where the integrand does not decay.
pub fn inverse_mellin_phi(f: &SelbergFunction, x: f64, acc: &Accuracy) -> Result<(Complex, f64)> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::InvalidInput {
            what: "inverse_mellin_phi",
            detail: format!("x = {x} must be positive"),
        });
    }
    let c = 2.0;
    if f.ramanujan_eps() >= c - 1.0 {
        return Err(Error::AccuracyNotAchievable {
            what: "inverse_mellin_phi",
            detail: "growth exponent too large for the fixed line Re s = 2".into(),
        });
    }
    let kernel = WKernel::new(f.gamma(), c)?; // provides nodes + tail control
    let decay = c - 1.0 - f.ramanujan_eps();
    // Choose the series truncation so the propagated coefficient tail stays
    // inside a third of the absolute budget.
    let target = (acc.abs_tol / 3.0).max(1e-14);
    let i_bound = kernel.magnitude_integral();
    let scale = i_bound * f.ramanujan_c() * x.powf(-c) / decay;
    let needed = if scale <= target {
        1usize
    } else {
        ((scale / target).powf(1.0 / decay)).ceil() as usize
    };
    if needed > f.n_max() || needed > acc.max_terms {
        return Err(Error::AccuracyNotAchievable {
            what: "inverse_mellin_phi",
            detail: format!(
                "needs {needed} coefficients for the node-wise series tail; have {}",
                f.n_max().min(acc.max_terms)
            ),
        });
    }
    let n_use = needed;
    let tail_f = f.ramanujan_c() * (n_use as f64).powf(-decay) / decay;

    // Precompute logarithms; accumulate node-by-node.
    let logs: Vec<f64> = (1..=n_use).map(|n| (n as f64).ln()).collect();
    let lx = x.ln();
    let mut re = Compensated::default();
    let mut im = Compensated::default();
    for (u, w) in kernel.us.iter().zip(&kernel.weights) {
        // F(c + iu) by partial sum
        let mut fre = Compensated::default();
        let mut fim = Compensated::default();
        for n in 1..=n_use {
            let a = f.coeffs()[n - 1];
            if a.norm_sqr() == 0.0 {
                continue;
            }
            let ln_n = logs[n - 1];
            let (s, cs) = (-u * ln_n).sin_cos();
            let term = a * Complex::new(cs, s) * (-c * ln_n).exp();
            fre.add(term.re);
            fim.add(term.im);
        }
        let f_val = Complex::new(fre.value(), fim.value());
        let (s, cs) = (-u * lx).sin_cos();
        let rot = Complex::new(cs, s) * (-c * lx).exp();
        let term = w * f_val * rot;
        re.add(term.re);
        im.add(term.im);
    }
    let value = Complex::new(re.value(), im.value());
    // |F| on the line is at most C (1 + 1/decay); combine with the kernel's
    // vertical tail, the propagated series tail, and the step allowance.
    let f_line_bound = f.ramanujan_c() * (1.0 + 1.0 / decay);
    let err = x.powf(-c)
        * (kernel.tail_vert * f_line_bound + i_bound * tail_f + i_bound * f_line_bound * 1e-13);
    Ok((value, err))
}

/// The functional-equation residual
///
/// ```text
/// Δ(x) = S_F(x) - R(x) - x^{-1} S_{F̄}(1/x),
/// R(x) = γ(1) ρ x^{-1} - conj(γ̄(1) ρ̄)   (pole order 1; R = 0 otherwise),
/// ```
///
/// which vanishes identically (up to certified numerical error) exactly
/// when the coefficients satisfy the symmetry encoded by the gamma factor.
/// Returns the residual and the certified bound on its numerical error.
pub fn fe_residual(f: &SelbergFunction, x: f64, acc: &Accuracy) -> Result<(Complex, f64)> {
    if f.pole_order() > 1 {
        return Err(Error::InvalidInput {
            what: "fe_residual",
            detail: format!("pole order {} not supported (0 or 1 only)", f.pole_order()),
        });
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::InvalidInput {
            what: "fe_residual",
            detail: format!("x = {x} must be positive"),
        });
    }
    let (s_here, err_here) = series_transform(f, x, acc)?;
    // The conjugated partner's series at 1/x: conjugating the coefficients
    // and the gamma data conjugates the whole transform at real arguments,
    // so one evaluation suffices.
    let (s_other_raw, err_other) = series_transform(f, 1.0 / x, acc)?;
    let s_other = s_other_raw.conj();

    let r = if f.pole_order() == 1 {
        let rho = f.residue().ok_or(Error::InsufficientData {
            what: "fe_residual",
            detail: "pole order 1 but the residue at s = 1 is unknown".into(),
        })?;
        let g1 = f.gamma().eval(Complex::new(1.0, 0.0))?;
        let g1_conj_data = f.gamma().conjugated().eval(Complex::new(1.0, 0.0))?;
        g1 * rho / x - (g1_conj_data * rho.conj()).conj()
    } else {
        Complex::new(0.0, 0.0)
    };

    let residual = s_here - r - s_other / x;
    let bound = err_here + err_other / x + 1e-15 * r.norm();
    Ok((residual, bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::CharacterGroup;

    fn acc() -> Accuracy {
        Accuracy { abs_tol: 1e-11, rel_tol: 1e-10, max_terms: 2_000_000 }
    }

    #[test]
    fn kernel_of_zeta_is_a_gaussian() {
        // For the all-ones data the kernel is 2 exp(-π t²).
        let zeta = SelbergFunction::zeta(4).unwrap();
        let kernel = WKernel::new(zeta.gamma(), 2.0).unwrap();
        for &t in &[0.3, 0.7, 1.0, 1.5, 2.5] {
            let (w, err) = kernel.value(t);
            let want = 2.0 * (-std::f64::consts::PI * t * t).exp();
            assert!(
                (w.re - want).abs() < 1e-10 && w.im.abs() < 1e-12,
                "t = {t}: W = {w}, want {want}"
            );
            assert!((w.re - want).abs() <= err + 1e-12, "bound too tight at t = {t}");
        }
    }

    #[test]
    fn kernel_of_delta_is_exponential() {
        // (2π)^{-s} Γ(s + 11/2) inverts to (2π t)^{11/2} e^{-2π t}.
        let delta = SelbergFunction::ramanujan_delta(4).unwrap();
        let kernel = WKernel::new(delta.gamma(), 2.0).unwrap();
        for &t in &[0.5, 1.0, 2.0] {
            let (w, _) = kernel.value(t);
            let v = TWO_PI * t;
            let want = v.powf(5.5) * (-v).exp();
            assert!(
                (w.re - want).abs() < 1e-9 * want.max(1.0),
                "t = {t}: W = {w}, want {want}"
            );
        }
    }

    #[test]
    fn series_transform_frozen_values() {
        let zeta = SelbergFunction::zeta(1000).unwrap();
        let cases = [
            (0.7, 0.433264859372683201),
            (1.0, 0.0864348112133080146),
            (1.4, 0.00423498958147432354),
        ];
        for &(x, want) in &cases {
            let (s, err) = series_transform(&zeta, x, &acc()).unwrap();
            assert!((s.re - want).abs() < 1e-11, "S({x}) = {s}, want {want}");
            assert!((s.re - want).abs() <= err + 1e-12);
            assert!(s.im.abs() < 1e-12);
        }
    }

    #[test]
    fn degree_zero_is_refused() {
        let gamma = GammaFactor::new(Complex::new(1.0, 0.0), 2.0, vec![]).unwrap();
        assert!(matches!(
            WKernel::new(&gamma, 2.0),
            Err(Error::AccuracyNotAchievable { .. })
        ));
    }

    #[test]
    fn fe_residual_vanishes_for_zeta() {
        let zeta = SelbergFunction::zeta(1000).unwrap();
        for &x in &[0.7, 1.0, 1.4] {
            let (r, bound) = fe_residual(&zeta, x, &acc()).unwrap();
            assert!(r.norm() < 1e-9, "residual {} at x = {x}", r.norm());
            assert!(bound < 1e-7);
        }
    }

    #[test]
    fn fe_residual_vanishes_for_characters_and_delta() {
        let g3 = CharacterGroup::new(3).unwrap();
        let chi3 = g3.characters().into_iter().find(|c| !c.is_principal()).unwrap();
        let l3 = SelbergFunction::dirichlet(&chi3, 1000).unwrap();
        for &x in &[0.7, 1.3] {
            let (r, _) = fe_residual(&l3, x, &acc()).unwrap();
            assert!(r.norm() < 1e-9, "level 3 residual {} at x = {x}", r.norm());
        }

        let delta = SelbergFunction::ramanujan_delta(2000).unwrap();
        for &x in &[0.8, 1.0, 1.25] {
            let (r, _) = fe_residual(&delta, x, &acc()).unwrap();
            assert!(r.norm() < 1e-9, "delta residual {} at x = {x}", r.norm());
        }
    }

    #[test]
    fn residual_obeys_the_reflection_identity() {
        // For entire data the residual satisfies Δ(1/x) = -x conj(Δ(x))
        // even when the coefficients are wrong.
        let delta = SelbergFunction::ramanujan_delta(2000).unwrap();
        let broken = delta
            .with_perturbed_coeff(2, delta.coeff(2).unwrap() + Complex::new(0.1, 0.0))
            .unwrap();
        for &x in &[0.8, 1.25, 2.0] {
            let (r_x, _) = fe_residual(&broken, x, &acc()).unwrap();
            let (r_inv, _) = fe_residual(&broken, 1.0 / x, &acc()).unwrap();
            let predicted = -x * r_x.conj();
            assert!(
                (r_inv - predicted).norm() < 1e-9,
                "identity fails at x = {x}: {r_inv} vs {predicted}"
            );
            assert!(r_x.norm() > 1e-4, "perturbation should be visible at x = {x}");
        }
    }

    #[test]
    fn root_number_perturbation_is_detected() {
        let zeta = SelbergFunction::zeta(1000).unwrap();
        let twisted = zeta
            .with_epsilon_factor(Complex::new(0.0, 0.1).exp())
            .unwrap();
        let mut worst = 0.0f64;
        for &x in &[0.7, 1.0, 1.4] {
            let (r, _) = fe_residual(&twisted, x, &acc()).unwrap();
            worst = worst.max(r.norm());
        }
        assert!(worst > 1e-3, "perturbed root number must break the symmetry: {worst}");
    }

    #[test]
    fn the_two_transform_routes_agree() {
        // The requested tolerance scales with x: the direct route needs
        // ~x^{-2} series terms per node, so ask for less where it pays more.
        let zeta = SelbergFunction::zeta(400_000).unwrap();
        for &(x, tol) in &[(0.5, 1e-4), (1.0, 1e-5), (2.0, 1e-6)] {
            let acc = Accuracy { abs_tol: tol, rel_tol: tol, max_terms: 2_000_000 };
            let (series, err_s) = series_transform(&zeta, x, &acc).unwrap();
            let (direct, err_d) = inverse_mellin_phi(&zeta, x, &acc).unwrap();
            let gap = (series - direct).norm();
            assert!(
                gap <= (err_s + err_d).max(tol),
                "routes disagree at x = {x}: gap {gap:.3e} vs {:.3e}",
                err_s + err_d
            );
        }
    }
}
