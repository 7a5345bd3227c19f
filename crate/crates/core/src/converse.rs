//! The two-variable Bessel series attached to degree-2 data and the
//! identities that make it a converse-theorem instrument:
//!
//! * `f(x, y) = y^{1/2} Σ a_n H_α(2πnx/√q) K_β(2πny/√q)` with
//!   `H_α(t) = t^{1/2} J_α(t)` — evaluated with a certified truncation tail;
//! * the inversion symmetry `f(re^{iθ}) = conj(f(r^{-1}e^{iθ}))`, which holds
//!   exactly when the completed Dirichlet series satisfies its reflection
//!   identity;
//! * the Mellin transform of a `J·K` product against its closed form in
//!   gamma functions and a Gauss hypergeometric value;
//! * the `s ↔ 1-s` invariance of the hypergeometric combination `T(s)`;
//! * the factorization `M(s) = 2^{-3/2}(cos θ)^{1/2}(cot θ)^α Γ(1+α)^{-1}
//!   T(s) Φ(s)` of the radial Mellin transform of `f`, checked by quadrature;
//! * the holomorphic reductions: the half-odd-order closed form for
//!   `(π/2)^{1/2} x^{1/2} J_{11/2}(x)`, the weight-12 transformation
//!   `Δ(iy) = y^{-12} Δ(i/y)`, and the exponential series
//!   `g(y) = Σ a_n n^{(k-1)/2} e^{-2πny}` with `g(1/y) = y^k g(y)`;
//! * the second-order PDE `f_xx + f_yy = ((α²-1/4)/x² + (β²-1/4)/y²) f`.

use crate::lfunc::tau;
use crate::specfun::{bessel_j, bessel_k, gamma, hyp2f1, Accuracy, Compensated};
use crate::{Complex, Error, Result};

use std::f64::consts::{FRAC_PI_2, LN_2, PI, TAU};

/// 16-point Gauss–Legendre rule on `[-1, 1]`: positive abscissas and
/// weights (the rule is symmetric).
const GL16_X: [f64; 8] = [
    0.0950125098376374,
    0.2816035507792589,
    0.4580167776572274,
    0.6178762444026438,
    0.7554044083550030,
    0.8656312023878318,
    0.9445750230732326,
    0.9894009349916499,
];
const GL16_W: [f64; 8] = [
    0.1894506104550685,
    0.1826034150449236,
    0.1691565193950025,
    0.1495959888165767,
    0.1246289712555339,
    0.0951585116824928,
    0.0622535239386479,
    0.0271524594117541,
];

/// Data of a degree-2 candidate: Bessel orders `α` (real, nonnegative) and
/// `β` (real or purely imaginary), scale `q > 0`, a finite coefficient list
/// `a_1..a_N`, and a growth claim `|a_n| ≤ C n^ε` used for truncation tails
/// (verified on the realized range at construction).
#[derive(Clone, Debug)]
pub struct GL2Params {
    alpha: f64,
    beta: Complex,
    q: f64,
    coefficients: Vec<Complex>,
    growth_c: f64,
    growth_eps: f64,
}

impl GL2Params {
    pub fn new(
        alpha: f64,
        beta: Complex,
        q: f64,
        coefficients: Vec<Complex>,
        growth_c: f64,
        growth_eps: f64,
    ) -> Result<Self> {
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::InvalidInput {
                what: "GL2Params",
                detail: format!("alpha = {alpha} must be real and nonnegative"),
            });
        }
        if beta.re != 0.0 && beta.im != 0.0 {
            return Err(Error::InvalidInput {
                what: "GL2Params",
                detail: format!("beta = {beta} must be real or purely imaginary"),
            });
        }
        if !(q > 0.0) || !q.is_finite() {
            return Err(Error::InvalidInput {
                what: "GL2Params",
                detail: format!("q = {q} must be positive"),
            });
        }
        if coefficients.is_empty() {
            return Err(Error::InvalidInput {
                what: "GL2Params",
                detail: "need at least one coefficient".into(),
            });
        }
        if !(growth_c >= 0.0) || !(0.0..=3.0).contains(&growth_eps) {
            return Err(Error::InvalidInput {
                what: "GL2Params",
                detail: format!("growth claim ({growth_c}, {growth_eps}) out of range"),
            });
        }
        for (i, a) in coefficients.iter().enumerate() {
            let n = (i + 1) as f64;
            if a.norm() > growth_c * n.powf(growth_eps) * (1.0 + 1e-12) {
                return Err(Error::InvalidInput {
                    what: "GL2Params",
                    detail: format!(
                        "|a_{}| = {} violates the claimed bound {} n^{}",
                        i + 1,
                        a.norm(),
                        growth_c,
                        growth_eps
                    ),
                });
            }
        }
        Ok(GL2Params { alpha, beta, q, coefficients, growth_c, growth_eps })
    }

    /// The weight-12 cusp-form data: `α = 11/2`, `β = 1/2`, `q = 1`,
    /// `a_n = τ(n)/n^{11/2}` with the square-root growth claim.
    pub fn delta(n: usize) -> Result<Self> {
        let coeffs: Vec<Complex> = tau::tau_normalized(n)?
            .into_iter()
            .map(|a| Complex::new(a, 0.0))
            .collect();
        GL2Params::new(5.5, Complex::new(0.5, 0.0), 1.0, coeffs, 3f64.sqrt(), 0.5)
    }

    /// A single unit coefficient — the smallest object the identities act on.
    pub fn single_coefficient(alpha: f64, beta: Complex, q: f64) -> Result<Self> {
        GL2Params::new(alpha, beta, q, vec![Complex::new(1.0, 0.0)], 1.0, 0.0)
    }

    /// Same data with `a_n` shifted by `delta` (growth claim re-verified).
    pub fn with_perturbed_coeff(&self, n: usize, delta: Complex) -> Result<Self> {
        if n == 0 || n > self.coefficients.len() {
            return Err(Error::InvalidInput {
                what: "with_perturbed_coeff",
                detail: format!("index {n} outside 1..={}", self.coefficients.len()),
            });
        }
        let mut coefficients = self.coefficients.clone();
        coefficients[n - 1] += delta;
        GL2Params::new(self.alpha, self.beta, self.q, coefficients, self.growth_c, self.growth_eps)
    }

    /// Scales every coefficient by `factor`, scaling the growth claim along.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let coefficients = self.coefficients.iter().map(|a| a * factor).collect();
        GL2Params::new(
            self.alpha,
            self.beta,
            self.q,
            coefficients,
            self.growth_c * factor.abs(),
            self.growth_eps,
        )
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex {
        self.beta
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn coefficients(&self) -> &[Complex] {
        &self.coefficients
    }

    /// Real order whose `K` dominates `|K_β|` pointwise.
    fn envelope_order(&self) -> Complex {
        Complex::new(self.beta.re.abs(), 0.0)
    }

    /// Picks a truncation point `N` such that the omitted tail of the Bessel
    /// series at scales `(c_x, c_y)` is provably below `target`, using
    /// `|H_α(t)| ≤ t^{1/2}`, `|K_β(t)| ≤ K_{|Re β|}(t)`, and the monotone
    /// decay `K_b(t) ≤ K_b(t_0) e^{-(t - t_0)}`; the shift is carried in log
    /// space so the bound stays meaningful far past floating underflow.
    fn choose_truncation(
        &self,
        c_x: f64,
        c_y: f64,
        target: f64,
        acc: &Accuracy,
    ) -> Result<(usize, f64)> {
        let p = self.growth_eps + 0.5;
        let len = self.coefficients.len();
        if self.growth_c == 0.0 {
            return Ok((len, 0.0));
        }
        let k_acc = Accuracy { abs_tol: 1e-18, rel_tol: 1e-6, max_terms: acc.max_terms };
        let mut n = 4usize.min(len);
        loop {
            let t_next = c_y * (n + 1) as f64;
            let poly = poly_exp_tail(n, p, c_y);
            let log_tail = if poly.is_finite() {
                let t0 = t_next.min(30.0);
                let k0 = bessel_k(self.envelope_order(), t0, &k_acc)? * (1.0 + 2e-6) + 2e-18;
                (self.growth_c * c_x.sqrt()).ln() + k0.ln() - (t_next - t0) + poly.ln()
            } else {
                f64::INFINITY
            };
            if log_tail <= target.ln() {
                return Ok((n, log_tail.exp()));
            }
            if n == len {
                return Err(Error::AccuracyNotAchievable {
                    what: "f_xy",
                    detail: format!(
                        "series tail {:.3e} > {target:.3e} with all {len} coefficients; \
                         the y-scale is below the certifiable minimum for this list",
                        log_tail.exp()
                    ),
                });
            }
            n = (n * 2).min(len);
        }
    }
}

/// Upper bound for `Σ_{n>N} n^p e^{-c(n-N-1)}`: geometric domination with
/// ratio `e^{p/(N+1) - c}` (infinite when that ratio reaches one).
fn poly_exp_tail(n: usize, p: f64, c: f64) -> f64 {
    let n1 = (n + 1) as f64;
    let rho = (p / n1 - c).exp();
    if !(rho < 1.0) {
        return f64::INFINITY;
    }
    n1.powf(p) / (1.0 - rho)
}

/// Evaluates the Bessel series at `(x, y)`, returning the value and a
/// certified error bound (truncation tail plus evaluation noise).  The
/// truncation is driven by the absolute tolerance of `acc`.
pub fn f_xy(params: &GL2Params, x: f64, y: f64, acc: &Accuracy) -> Result<(Complex, f64)> {
    let (value, err, _) = f_xy_inner(params, x, y, acc)?;
    Ok((value, err))
}

fn f_xy_inner(
    params: &GL2Params,
    x: f64,
    y: f64,
    acc: &Accuracy,
) -> Result<(Complex, f64, usize)> {
    if !(x > 0.0) || !(y > 0.0) || !x.is_finite() || !y.is_finite() {
        return Err(Error::InvalidInput {
            what: "f_xy",
            detail: format!("need positive finite coordinates, got ({x}, {y})"),
        });
    }
    let rq = params.q.sqrt();
    let c_x = TAU * x / rq;
    let c_y = TAU * y / rq;
    let target = 0.5 * acc.abs_tol;
    let (n_used, tail) = params.choose_truncation(c_x, c_y, target, acc)?;
    let bess = Accuracy {
        abs_tol: (acc.abs_tol / (32.0 * n_used as f64)).max(2e-19),
        rel_tol: 5e-13,
        max_terms: acc.max_terms,
    };
    let mut sre = Compensated::default();
    let mut sim = Compensated::default();
    let mut noise = 0.0f64;
    for (i, &a) in params.coefficients.iter().take(n_used).enumerate() {
        if a.norm() == 0.0 {
            continue;
        }
        let nn = (i + 1) as f64;
        let tx = c_x * nn;
        let ty = c_y * nn;
        if ty > 120.0 {
            break; // remaining K factors are below 1e-52
        }
        let j = bessel_j(params.alpha, tx, &bess)?;
        let k = bessel_k(params.beta, ty, &bess)?;
        let h = tx.sqrt() * j;
        let term = a * (h * k);
        sre.add(term.re);
        sim.add(term.im);
        let ej = bess.abs_tol + 5e-13 * j.abs();
        let ek = bess.abs_tol + 5e-13 * k.abs();
        noise += a.norm() * tx.sqrt() * (ej * k.abs() + ek * j.abs() + ej * ek);
    }
    let sum = Complex::new(sre.value(), sim.value());
    let value = y.sqrt() * sum;
    let err = y.sqrt() * (tail + noise) + 1e-16 * value.norm();
    Ok((value, err, n_used))
}

/// `f(r cos θ, r sin θ) − conj(f(cos θ / r, sin θ / r))`: zero exactly when
/// the completed series has the reflection symmetry.  Returns the residual
/// and a certified bound on the evaluation error contained in it.
pub fn symmetry_residual(
    params: &GL2Params,
    r: f64,
    theta: f64,
    acc: &Accuracy,
) -> Result<(Complex, f64)> {
    let (point, _) = symmetry_point(params, r, theta, acc)?;
    Ok(point)
}

fn symmetry_point(
    params: &GL2Params,
    r: f64,
    theta: f64,
    acc: &Accuracy,
) -> Result<((Complex, f64), SymmetryPoint)> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidInput {
            what: "symmetry_residual",
            detail: format!("radius {r} must be positive"),
        });
    }
    if !(theta > 0.0 && theta < FRAC_PI_2) {
        return Err(Error::InvalidInput {
            what: "symmetry_residual",
            detail: format!("angle {theta} outside (0, π/2)"),
        });
    }
    let (ct, st) = (theta.cos(), theta.sin());
    let (here, e1, n1) = f_xy_inner(params, r * ct, r * st, acc)?;
    let (there, e2, n2) = f_xy_inner(params, ct / r, st / r, acc)?;
    let mirrored = there.conj();
    let residual = here - mirrored;
    let bound = e1 + e2;
    Ok((
        (residual, bound),
        SymmetryPoint {
            r,
            theta,
            here,
            mirrored,
            residual: residual.norm(),
            error_bound: bound,
            n_used: n1.max(n2),
        },
    ))
}

/// One grid point of the inversion-symmetry scan.
#[derive(Clone, Debug)]
pub struct SymmetryPoint {
    pub r: f64,
    pub theta: f64,
    /// `f(r cos θ, r sin θ)`
    pub here: Complex,
    /// `conj(f(cos θ / r, sin θ / r))`
    pub mirrored: Complex,
    /// `|here − mirrored|`
    pub residual: f64,
    /// Certified evaluation error inside the residual.
    pub error_bound: f64,
    /// Truncation used (max over the two series).
    pub n_used: usize,
}

/// Grid sweep of the inversion symmetry.
#[derive(Clone, Debug)]
pub struct SymmetryReport {
    pub points: Vec<SymmetryPoint>,
    pub max_residual: f64,
}

pub fn symmetry_scan(
    params: &GL2Params,
    rs: &[f64],
    thetas: &[f64],
    acc: &Accuracy,
) -> Result<SymmetryReport> {
    if rs.is_empty() || thetas.is_empty() {
        return Err(Error::InvalidInput {
            what: "symmetry_scan",
            detail: "empty grid".into(),
        });
    }
    let mut points = Vec::with_capacity(rs.len() * thetas.len());
    let mut max_residual = 0.0f64;
    for &r in rs {
        for &theta in thetas {
            let (_, point) = symmetry_point(params, r, theta, acc)?;
            max_residual = max_residual.max(point.residual);
            points.push(point);
        }
    }
    Ok(SymmetryReport { points, max_residual })
}

/// Composite 16-point Gauss–Legendre quadrature of a complex-valued
/// integrand over `[lo, hi]` split into `panels` equal panels.
fn gl_integrate<F>(f: &F, lo: f64, hi: f64, panels: usize) -> Result<Complex>
where
    F: Fn(f64) -> Result<Complex>,
{
    let w = (hi - lo) / panels as f64;
    let half = 0.5 * w;
    let mut re = Compensated::default();
    let mut im = Compensated::default();
    for p in 0..panels {
        let mid = lo + (p as f64 + 0.5) * w;
        for (&xk, &wk) in GL16_X.iter().zip(&GL16_W) {
            for sign in [-1.0, 1.0] {
                let v = f(mid + sign * half * xk)? * (wk * half);
                re.add(v.re);
                im.add(v.im);
            }
        }
    }
    Ok(Complex::new(re.value(), im.value()))
}

/// Checks the Mellin transform of `J_α(au) K_β(bu)` against its closed form
///
/// ```text
/// ∫_0^∞ J_α(au) K_β(bu) u^{s-1} du
///   = (a/b)^α b^{-s} 2^{s-2} Γ((s+α+β)/2) Γ((s+α-β)/2) / Γ(α+1)
///     · 2F1((s+α+β)/2, (s+α-β)/2; α+1; -a²/b²).
/// ```
///
/// Returns `(quadrature, closed form, |difference|)`.  The quadrature cuts
/// off where the `K` factor certifies the tail below tolerance and resolves
/// the `J` oscillation with panels of width `π/a`, refining until two
/// successive levels agree.
pub fn mellin_pair_check(
    alpha: f64,
    beta: Complex,
    a: f64,
    b: f64,
    s: Complex,
    acc: &Accuracy,
) -> Result<(Complex, Complex, f64)> {
    if !(a > 0.0) || !(b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidInput {
            what: "mellin_pair_check",
            detail: format!("scales a = {a}, b = {b} must be positive"),
        });
    }
    if s.re <= 0.0 {
        return Err(Error::InvalidInput {
            what: "mellin_pair_check",
            detail: format!("Re s = {} must be positive", s.re),
        });
    }
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(Error::InvalidInput {
            what: "mellin_pair_check",
            detail: format!("alpha = {alpha} must be nonnegative"),
        });
    }
    if beta.re != 0.0 && beta.im != 0.0 {
        return Err(Error::InvalidInput {
            what: "mellin_pair_check",
            detail: format!("beta = {beta} must be real or purely imaginary"),
        });
    }

    // Closed form.
    let c_param = Complex::new(alpha + 1.0, 0.0);
    let ha = (s + alpha + beta) * 0.5;
    let hb = (s + alpha - beta) * 0.5;
    let rhs = (a / b).powf(alpha)
        * (-s * b.ln()).exp()
        * ((s - 2.0) * LN_2).exp()
        * gamma(ha)?
        * gamma(hb)?
        / gamma(c_param)?
        * hyp2f1(ha, hb, c_param, -(a * a) / (b * b), &Accuracy::rel(1e-13))?;

    let tol = acc.abs_tol.max(acc.rel_tol * rhs.norm());
    let sigma = s.re;
    let b_env = beta.re.abs();
    // Small-u integrability of |integrand| ~ u^{σ + α - |Re β| - 1}.
    let exp1 = sigma + alpha - b_env;
    if exp1 <= 0.1 {
        return Err(Error::InvalidInput {
            what: "mellin_pair_check",
            detail: format!(
                "integral diverges (or nearly) at zero: Re s + α - |Re β| = {exp1}"
            ),
        });
    }
    let env = Complex::new(b_env, 0.0);
    let k_acc = Accuracy { abs_tol: 1e-18, rel_tol: 1e-6, max_terms: acc.max_terms };

    // Cutoff: beyond u_cut the integrand is below K_env(b u) u^{σ-1}, whose
    // integral is bounded by the value at the cutoff over the net decay.
    let mut u_cut = (8.0 / b).max((sigma + 2.0) / b).max(2.0);
    loop {
        let k_ub = bessel_k(env, b * u_cut, &k_acc)? * (1.0 + 2e-6) + 2e-18;
        let denom = b - (sigma - 1.0).max(0.0) / u_cut;
        if denom > 0.0 {
            let tail = k_ub * u_cut.powf(sigma - 1.0) / denom;
            if tail <= 0.25 * tol {
                break;
            }
        }
        u_cut *= 1.4;
        if u_cut > 1e6 {
            return Err(Error::NonConvergence {
                what: "mellin_pair_check",
                detail: format!("tail bound still above tolerance at cutoff {u_cut:.3e}"),
            });
        }
    }

    // Lower cutoff: `|J_α(t)| ≤ (t/2)^α e^{t²/4}/Γ(α+1)` and the algebraic
    // (or logarithmic, at `Re β = 0`) bound on the decaying kernel make
    // `|integrand| ≤ A u^{exp1-1}` near zero, integrated exactly.
    let gamma_a1 = gamma(c_param)?.re;
    let k_coef = if b_env > 0.0 {
        2f64.powf(b_env - 1.0) * gamma(Complex::new(b_env, 0.0))?.re * b.powf(-b_env)
    } else {
        0.0
    };
    let mut u_lo = (u_cut / 256.0).min(0.125 / a);
    loop {
        let j_coef = (a / 2.0).powf(alpha) * ((a * u_lo).powi(2) / 4.0).exp() / gamma_a1;
        let base = j_coef * u_lo.powf(exp1);
        let small = if b_env > 0.0 {
            base * k_coef / exp1
        } else {
            let a0 = ((2.0 / (b * u_lo)).ln() + 1.0).max(1.0);
            base * (a0 / exp1 + 1.0 / (exp1 * exp1))
        };
        if small <= 0.2 * tol {
            break;
        }
        u_lo *= 0.5;
        if u_lo < 1e-12 {
            return Err(Error::NonConvergence {
                what: "mellin_pair_check",
                detail: "lower cutoff for the kernel integral ran away".into(),
            });
        }
    }

    // Dyadic pieces from u_cut down to u_lo keep the logarithmic phase of
    // `u^{s-1}` bounded per piece; each is subdivided at the oscillation
    // scale of the first kernel.
    let mut pieces: Vec<(f64, f64)> = Vec::new();
    let mut hi = u_cut;
    while hi > u_lo {
        let lo = (hi / 2.0).max(u_lo);
        let m = ((a * (hi - lo)) / PI).ceil() as usize + 1;
        let w = (hi - lo) / m as f64;
        for k in 0..m {
            pieces.push((lo + k as f64 * w, lo + (k + 1) as f64 * w));
        }
        hi = lo;
    }

    let bess = Accuracy { abs_tol: 2e-15, rel_tol: 1e-13, max_terms: acc.max_terms };
    let sm1 = s - 1.0;
    let integrand = |u: f64| -> Result<Complex> {
        let j = bessel_j(alpha, a * u, &bess)?;
        let k = bessel_k(beta, b * u, &bess)?;
        Ok((sm1 * u.ln()).exp() * (j * k))
    };

    let eval_pieces = |split: usize| -> Result<Complex> {
        let mut re = Compensated::default();
        let mut im = Compensated::default();
        for &(lo, hi) in &pieces {
            let v = gl_integrate(&integrand, lo, hi, split)?;
            re.add(v.re);
            im.add(v.im);
        }
        Ok(Complex::new(re.value(), im.value()))
    };

    let mut split = 1usize;
    let mut prev = eval_pieces(split)?;
    for _ in 0..4 {
        split *= 2;
        let cur = eval_pieces(split)?;
        if (cur - prev).norm() <= 0.5 * tol {
            return Ok((cur, rhs, (cur - rhs).norm()));
        }
        prev = cur;
    }
    Err(Error::NonConvergence {
        what: "mellin_pair_check",
        detail: "kernel quadrature not settled within the refinement budget".into(),
    })
}

/// The hypergeometric combination whose `s ↔ 1-s` invariance encodes the
/// functional-equation symmetry of the radial Mellin transform:
///
/// ```text
/// T(s) = (sin θ)^{-s} 2F1((s+α+β+1/2)/2, (s+α-β+1/2)/2; α+1; -cot²θ).
/// ```
fn t_value(alpha: f64, beta: Complex, theta: f64, s: Complex) -> Result<Complex> {
    let x = -(theta.cos() / theta.sin()).powi(2);
    let pre = (-s * theta.sin().ln()).exp();
    let a = (s + alpha + beta + 0.5) * 0.5;
    let b = (s + alpha - beta + 0.5) * 0.5;
    Ok(pre * hyp2f1(a, b, Complex::new(alpha + 1.0, 0.0), x, &Accuracy::rel(1e-13))?)
}

/// Evaluates `T(s)` and `T(1-s)` and returns both with `|T(s) - T(1-s)|`.
pub fn t_symmetry_check(
    alpha: f64,
    beta: Complex,
    theta: f64,
    s: Complex,
) -> Result<(Complex, Complex, f64)> {
    if !(theta > 0.0 && theta < FRAC_PI_2) {
        return Err(Error::InvalidInput {
            what: "t_symmetry_check",
            detail: format!("angle {theta} outside (0, π/2)"),
        });
    }
    let ts = t_value(alpha, beta, theta, s)?;
    let t1 = t_value(alpha, beta, theta, Complex::new(1.0, 0.0) - s)?;
    Ok((ts, t1, (ts - t1).norm()))
}

/// Radial Mellin transform `M(s) = ∫_0^∞ f(r cos θ, r sin θ) r^{s-1/2} dr/r`
/// of the (finite) Bessel series, by panel quadrature, against the closed
/// form `2^{-3/2} (cos θ)^{1/2} (cot θ)^α Γ(1+α)^{-1} T(s) Φ(s)` where
/// `Φ(s) = (√q/π)^s Γ((α+β+1/2+s)/2) Γ((α-β+1/2+s)/2) Σ a_n n^{-s}` is
/// built from the same finite coefficient list (each term of the identity
/// holds separately, so the truncated object satisfies it exactly).
///
/// Returns `(quadrature, closed form, |difference|)`.
pub fn mellin_m_check(
    params: &GL2Params,
    theta: f64,
    s: Complex,
    acc: &Accuracy,
) -> Result<(Complex, Complex, f64)> {
    if !(theta > 0.0 && theta < FRAC_PI_2) {
        return Err(Error::InvalidInput {
            what: "mellin_m_check",
            detail: format!("angle {theta} outside (0, π/2)"),
        });
    }
    let sigma = s.re;
    let alpha = params.alpha;
    let b_env = params.beta.re.abs();
    // Small-r integrability of |integrand| ~ r^{σ + α - b - 1/2}.
    if sigma + alpha - b_env + 0.5 <= 0.1 {
        return Err(Error::InvalidInput {
            what: "mellin_m_check",
            detail: format!(
                "radial integral diverges (or nearly) at zero: Re s + α - |Re β| = {}",
                sigma + alpha - b_env
            ),
        });
    }

    let rq = params.q.sqrt();
    let (ct, st) = (theta.cos(), theta.sin());
    let c_x = TAU * ct / rq; // per unit radius
    let c_y = TAU * st / rq;
    let n_coeff = params.coefficients.len();

    // Closed form on the truncated polynomial.
    let f_poly: Complex = {
        let mut re = Compensated::default();
        let mut im = Compensated::default();
        for (i, &a) in params.coefficients.iter().enumerate() {
            let v = a * (-s * ((i + 1) as f64).ln()).exp();
            re.add(v.re);
            im.add(v.im);
        }
        Complex::new(re.value(), im.value())
    };
    let g1 = gamma((s + alpha + params.beta + 0.5) * 0.5)?;
    let g2 = gamma((s + alpha - params.beta + 0.5) * 0.5)?;
    let phi = (s * (rq / PI).ln()).exp() * g1 * g2 * f_poly;
    let closed = 2f64.powf(-1.5) * ct.sqrt() * (ct / st).powf(alpha)
        / gamma(Complex::new(alpha + 1.0, 0.0))?
        * t_value(alpha, params.beta, theta, s)?
        * phi;

    let tol = acc.abs_tol.max(acc.rel_tol * closed.norm());
    let k_acc = Accuracy { abs_tol: 1e-18, rel_tol: 1e-6, max_terms: acc.max_terms };
    let env = params.envelope_order();

    // Upper cutoff: per-term exponential decay of the K factor.
    let mut r_hi = 4.0 / c_y;
    'upper: loop {
        let mut tail = 0.0f64;
        for (i, a) in params.coefficients.iter().enumerate() {
            let an = a.norm();
            if an == 0.0 {
                continue;
            }
            let nn = (i + 1) as f64;
            let denom = c_y * nn - (sigma - 0.5).max(0.0) / r_hi;
            if denom <= 0.0 {
                tail = f64::INFINITY;
                break;
            }
            let t_arg = c_y * nn * r_hi;
            let k_ub = if t_arg > 600.0 {
                0.0
            } else {
                bessel_k(env, t_arg, &k_acc)? * (1.0 + 2e-6) + 2e-18
            };
            tail += an * st.sqrt() * (c_x * nn).sqrt() * r_hi.powf(sigma - 0.5) * k_ub / denom;
        }
        if tail <= 0.2 * tol {
            break 'upper;
        }
        r_hi *= 1.35;
        if r_hi > 1e4 {
            return Err(Error::NonConvergence {
                what: "mellin_m_check",
                detail: "upper cutoff for the radial integral ran away".into(),
            });
        }
    }

    // Lower cutoff: `|J_α(t)| ≤ (t/2)^α e^{t²/4}/Γ(α+1)` and, for the `K`
    // factor, `K_b(t) ≤ 2^{b-1} Γ(b) t^{-b}` when `b > 0`, while for `b = 0`
    // the logarithmic bound `K_0(t) ≤ max(ln(2/t), 0) + 1`, growing like
    // `ln(r_lo/r)` below the cutoff, is integrated exactly.  Per term the
    // integrand magnitude is then `A_n r^{exp1-1}` (times the log factor).
    let gamma_a1 = gamma(Complex::new(alpha + 1.0, 0.0))?.re;
    let k_coef = if b_env > 0.0 {
        2f64.powf(b_env - 1.0) * gamma(Complex::new(b_env, 0.0))?.re
    } else {
        0.0
    };
    let exp1 = sigma + alpha - b_env + 0.5;
    let mut r_lo = (r_hi / 256.0).min(0.125 / c_x);
    loop {
        let mut small = 0.0f64;
        for (i, a) in params.coefficients.iter().enumerate() {
            let an = a.norm();
            if an == 0.0 {
                continue;
            }
            let nn = (i + 1) as f64;
            let cxn = c_x * nn;
            let cyn = c_y * nn;
            let j_coef = (cxn / 2.0).powf(alpha) * ((cxn * r_lo).powi(2) / 4.0).exp() / gamma_a1;
            let base = an * st.sqrt() * cxn.sqrt() * j_coef * r_lo.powf(exp1);
            small += if b_env > 0.0 {
                base * k_coef * cyn.powf(-b_env) / exp1
            } else {
                let a0 = ((2.0 / (cyn * r_lo)).ln() + 1.0).max(1.0);
                base * (a0 / exp1 + 1.0 / (exp1 * exp1))
            };
        }
        if small <= 0.2 * tol {
            break;
        }
        r_lo *= 0.5;
        if r_lo < 1e-12 {
            return Err(Error::NonConvergence {
                what: "mellin_m_check",
                detail: "lower cutoff for the radial integral ran away".into(),
            });
        }
    }

    // Piece list: dyadic panels from r_hi down to r_lo, each subdivided at
    // the oscillation scale of the modes still alive at its left edge.
    let mut pieces: Vec<(f64, f64)> = Vec::new();
    let mut hi = r_hi;
    while hi > r_lo {
        let lo = (hi / 2.0).max(r_lo);
        let n_live = ((50.0 / (c_y * lo)).ceil() as usize).clamp(1, n_coeff);
        let m = ((c_x * n_live as f64 * (hi - lo)) / PI).ceil() as usize + 1;
        let w = (hi - lo) / m as f64;
        for k in 0..m {
            pieces.push((lo + k as f64 * w, lo + (k + 1) as f64 * w));
        }
        hi = lo;
    }

    let bess = Accuracy { abs_tol: 2e-15, rel_tol: 1e-13, max_terms: acc.max_terms };
    let sm32 = s - 1.5;
    let integrand = |r: f64| -> Result<Complex> {
        let mut re = Compensated::default();
        let mut im = Compensated::default();
        for (i, &a) in params.coefficients.iter().enumerate() {
            if a.norm() == 0.0 {
                continue;
            }
            let nn = (i + 1) as f64;
            let ty = c_y * nn * r;
            if ty > 60.0 {
                break;
            }
            let tx = c_x * nn * r;
            let h = tx.sqrt() * bessel_j(alpha, tx, &bess)?;
            let term = a * (h * bessel_k(params.beta, ty, &bess)?);
            re.add(term.re);
            im.add(term.im);
        }
        let sum = Complex::new(re.value(), im.value());
        Ok((st * r).sqrt() * sum * (sm32 * r.ln()).exp())
    };

    let eval_pieces = |split: usize| -> Result<Complex> {
        let mut re = Compensated::default();
        let mut im = Compensated::default();
        for &(lo, hi) in &pieces {
            let v = gl_integrate(&integrand, lo, hi, split)?;
            re.add(v.re);
            im.add(v.im);
        }
        Ok(Complex::new(re.value(), im.value()))
    };

    let mut split = 1usize;
    let mut prev = eval_pieces(split)?;
    for _ in 0..3 {
        split *= 2;
        let cur = eval_pieces(split)?;
        if (cur - prev).norm() <= 0.5 * tol {
            return Ok((cur, closed, (cur - closed).norm()));
        }
        prev = cur;
    }
    Err(Error::NonConvergence {
        what: "mellin_m_check",
        detail: "radial quadrature not settled within the refinement budget".into(),
    })
}

/// Terminating closed form of `(π/2)^{1/2} x^{1/2} J_{11/2}(x)` against the
/// generic Bessel evaluator.  Returns `(closed form, generic, |difference|)`.
///
/// The closed form
///
/// ```text
/// cos x (-1 + 105/x² - 945/x⁴) + sin x (15/x - 420/x³ + 945/x⁵)
/// ```
///
/// cancels catastrophically as `x → 0` (the function vanishes to sixth
/// order), so the six products are accumulated compensated; near `x = 1`
/// the achievable agreement is a few units in the tenth digit.
pub fn j_closed_form_check(x: f64) -> Result<(f64, f64, f64)> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::InvalidInput {
            what: "j_closed_form_check",
            detail: format!("argument {x} must be positive"),
        });
    }
    let (sn, cs) = x.sin_cos();
    let x2 = x * x;
    let mut acc = Compensated::default();
    acc.add(cs * -1.0);
    acc.add(cs * (105.0 / x2));
    acc.add(cs * (-945.0 / (x2 * x2)));
    acc.add(sn * (15.0 / x));
    acc.add(sn * (-420.0 / (x2 * x)));
    acc.add(sn * (945.0 / (x2 * x2 * x)));
    let closed = acc.value();
    let generic = FRAC_PI_2.sqrt() * x.sqrt() * bessel_j(5.5, x, &Accuracy::rel(1e-13))?;
    Ok((closed, generic, (closed - generic).abs()))
}

/// Exponentially weighted coefficient sum `Σ w_n e^{-2πn y}` with a
/// certified tail from the growth bound `|w_n| ≤ c n^p`.
fn exp_series<W>(weights: W, len: usize, c: f64, p: f64, y: f64) -> Result<(Complex, f64)>
where
    W: Fn(usize) -> Complex,
{
    let decay = TAU * y;
    let mut n = 8usize.min(len);
    let (n_used, tail) = loop {
        let t = c * (-decay * (n + 1) as f64).exp() * poly_exp_tail(n, p, decay);
        if t.is_finite() && t <= 1e-12 * (-decay).exp().max(1e-280) {
            break (n, t);
        }
        if n == len {
            if t.is_finite() && t <= 1e-9 * (-decay).exp() {
                // Accept a looser certificate rather than refuse outright.
                break (n, t);
            }
            return Err(Error::AccuracyNotAchievable {
                what: "exp_series",
                detail: format!("tail {t:.3e} with all {len} coefficients at y = {y}"),
            });
        }
        n = (n * 2).min(len);
    };
    let mut re = Compensated::default();
    let mut im = Compensated::default();
    let ratio = (-decay).exp();
    let mut power = 1.0f64;
    for i in 0..n_used {
        power *= ratio;
        let term = weights(i + 1) * power;
        re.add(term.re);
        im.add(term.im);
    }
    Ok((Complex::new(re.value(), im.value()), tail))
}

/// Weight-12 transformation `Δ(iy) = y^{-12} Δ(i/y)`: evaluates both sides
/// by the exponential series over exact integer coefficients (growth bound
/// `|τ(n)| ≤ n^6`, verified on the realized range) and returns
/// `(Δ(iy), y^{-12} Δ(i/y), |difference|)`.
pub fn delta_transform_check(y: f64) -> Result<(f64, f64, f64)> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::InvalidInput {
            what: "delta_transform_check",
            detail: format!("y = {y} must be positive"),
        });
    }
    let side = |yy: f64| -> Result<f64> {
        // Budget: enough terms for the slower of the two scales.
        let budget = (((46.0 + 60.0) / (TAU * yy)).ceil() as usize + 16)
            .min(tau::MAX_TAU_N);
        let taus = tau::tau_exact(budget)?;
        for (i, &t) in taus.iter().enumerate() {
            let n = (i + 1) as f64;
            if (t.unsigned_abs() as f64) > n.powi(6) {
                return Err(Error::InvalidInput {
                    what: "delta_transform_check",
                    detail: format!("coefficient growth bound fails at n = {}", i + 1),
                });
            }
        }
        let (v, _tail) = exp_series(
            |n| Complex::new(taus[n - 1] as f64, 0.0),
            budget,
            1.0,
            6.0,
            yy,
        )?;
        Ok(v.re)
    };
    let lhs = side(y)?;
    let rhs = y.powi(-12) * side(1.0 / y)?;
    Ok((lhs, rhs, (lhs - rhs).abs()))
}

/// Even-weight reduction of the Bessel series: with `β = 1/2` and
/// `α = (k-1)/2`, the series `g(y) = Σ a_n n^{(k-1)/2} e^{-2πny}` satisfies
/// `g(1/y) = y^k g(y)`.  Returns `(g(1/y), y^k g(y), |difference|)`.
pub fn g_series_check(
    params: &GL2Params,
    k: u32,
    y: f64,
) -> Result<(Complex, Complex, f64)> {
    if k == 0 || k % 2 != 0 {
        return Err(Error::InvalidInput {
            what: "g_series_check",
            detail: format!("weight k = {k} must be a positive even integer"),
        });
    }
    let half = (k as f64 - 1.0) / 2.0;
    if (params.alpha - half).abs() > 1e-12 {
        return Err(Error::InvalidInput {
            what: "g_series_check",
            detail: format!("alpha = {} does not match (k-1)/2 = {half}", params.alpha),
        });
    }
    if (params.beta - Complex::new(0.5, 0.0)).norm() > 1e-12 {
        return Err(Error::InvalidInput {
            what: "g_series_check",
            detail: format!("beta = {} must be 1/2 for the even-weight reduction", params.beta),
        });
    }
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::InvalidInput {
            what: "g_series_check",
            detail: format!("y = {y} must be positive"),
        });
    }
    let len = params.coefficients.len();
    let p = params.growth_eps + half;
    let g = |yy: f64| -> Result<Complex> {
        let (v, _tail) = exp_series(
            |n| params.coefficients[n - 1] * (n as f64).powf(half),
            len,
            params.growth_c,
            p,
            yy,
        )?;
        Ok(v)
    };
    let all_zero = params.coefficients.iter().all(|a| a.norm() == 0.0);
    if all_zero {
        return Ok((Complex::new(0.0, 0.0), Complex::new(0.0, 0.0), 0.0));
    }
    let lhs = g(1.0 / y)?;
    let rhs = (y as f64).powi(k as i32) * g(y)?;
    Ok((lhs, rhs, (lhs - rhs).norm()))
}

/// Second-order consistency of the Bessel series:
/// `f_xx + f_yy − ((α²-1/4)/x² + (β²-1/4)/y²) f` by a five-point stencil at
/// step `h`.  Every term of the series satisfies the equation exactly, so
/// the residual measures only the stencil error; the full coefficient list
/// is summed with the same truncation at all five points.
pub fn pde_residual(params: &GL2Params, x: f64, y: f64, h: f64, acc: &Accuracy) -> Result<f64> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidInput {
            what: "pde_residual",
            detail: format!("step {h} must be positive"),
        });
    }
    if x <= 2.0 * h || y <= 2.0 * h {
        return Err(Error::InvalidInput {
            what: "pde_residual",
            detail: format!("need x, y > 2h; got ({x}, {y}) with h = {h}"),
        });
    }
    let rq = params.q.sqrt();
    let n_used = params.coefficients.len();
    let bess = Accuracy { abs_tol: 2e-15, rel_tol: 1e-13, max_terms: acc.max_terms };
    let f_at = |xx: f64, yy: f64| -> Result<Complex> {
        let c_x = TAU * xx / rq;
        let c_y = TAU * yy / rq;
        let mut re = Compensated::default();
        let mut im = Compensated::default();
        for (i, &a) in params.coefficients.iter().take(n_used).enumerate() {
            if a.norm() == 0.0 {
                continue;
            }
            let nn = (i + 1) as f64;
            let tx = c_x * nn;
            let ty = c_y * nn;
            if ty > 140.0 {
                break;
            }
            let h_val = tx.sqrt() * bessel_j(params.alpha, tx, &bess)?;
            let term = a * (h_val * bessel_k(params.beta, ty, &bess)?);
            re.add(term.re);
            im.add(term.im);
        }
        Ok(yy.sqrt() * Complex::new(re.value(), im.value()))
    };
    let fc = f_at(x, y)?;
    let lap = (f_at(x + h, y)? + f_at(x - h, y)? + f_at(x, y + h)? + f_at(x, y - h)?
        - 4.0 * fc)
        / (h * h);
    let beta2 = params.beta * params.beta;
    let rhs = (Complex::new((params.alpha * params.alpha - 0.25) / (x * x), 0.0)
        + (beta2 - 0.25) / (y * y))
        * fc;
    Ok((lap - rhs).norm())
}
