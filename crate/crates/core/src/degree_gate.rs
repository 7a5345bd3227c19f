//! Non-existence mechanisms for low degree.  Three quantitative gates:
//!
//! 1. the coefficient ratio `γ(n+1) F(n+1) / (γ(-n) n!)` whose logarithm
//!    grows like `(d-1) n log n` — fitting that exponent reads off the
//!    degree from analytic data alone;
//! 2. the log-series coefficients of a local polynomial `Π (1 - R_i x)`,
//!    whose `j`-th power sums force `|b_{p^j}| ~ max|R_i|^j / j`, so any
//!    inverse root off the unit circle demands a growth exponent
//!    `θ ≥ log_p max|R_i|` — inadmissible when that hits 1/2;
//! 3. the closed constraint system for degree-0 candidates (finite
//!    Dirichlet polynomials), which pins the support to divisors of the
//!    conductor and forces `θ ≥ 1/2` for every candidate except the
//!    constant function 1.

use crate::lfunc::{multiplicativity_check, GammaFactor};
use crate::specfun::log_gamma;
use crate::{Complex, Error, Result};

/// One entry of the decay profile: either a finite log-ratio or an
/// exclusion (the reference point `γ(-n)` sat on a gamma pole).
#[derive(Clone, Debug)]
pub struct DecayEntry {
    pub n: u32,
    pub log_ratio: Option<f64>,
    pub exclusion: Option<String>,
}

/// The sequence `log |γ(n+1) F(n+1) / (γ(-n) n!)|` for `n = 1..=N`.
#[derive(Clone, Debug)]
pub struct DecayProfile {
    pub entries: Vec<DecayEntry>,
}

impl DecayProfile {
    pub fn finite_count(&self) -> usize {
        self.entries.iter().filter(|e| e.log_ratio.is_some()).count()
    }
}

/// Builds the decay profile from gamma data and the values `F(n+1)`
/// (`f_values[n-1] = F(n+1)` for `n = 1..=n_terms`).  Entries where
/// `γ(-n)` hits a pole are excluded with a reason, not fabricated.
pub fn k_decay_profile(
    gamma: &GammaFactor,
    f_values: &[Complex],
    n_terms: usize,
) -> Result<DecayProfile> {
    if f_values.len() < n_terms {
        return Err(Error::InsufficientData {
            what: "k_decay_profile",
            detail: format!("have {} values of F, need {n_terms}", f_values.len()),
        });
    }
    let mut entries = Vec::with_capacity(n_terms);
    for n in 1..=n_terms {
        let nn = n as f64;
        let num = gamma.eval_log(Complex::new(nn + 1.0, 0.0));
        let den = gamma.eval_log(Complex::new(-nn, 0.0));
        let log_factorial = log_gamma(Complex::new(nn + 1.0, 0.0))?.re;
        match (num, den) {
            (Ok(lg_num), Ok(lg_den)) => {
                let f = f_values[n - 1];
                let log_f = if f.norm() > 0.0 { f.norm().ln() } else { f64::NEG_INFINITY };
                entries.push(DecayEntry {
                    n: n as u32,
                    log_ratio: Some(lg_num.re - lg_den.re - log_factorial + log_f),
                    exclusion: None,
                });
            }
            (_, Err(Error::GammaPole { at })) => {
                entries.push(DecayEntry {
                    n: n as u32,
                    log_ratio: None,
                    exclusion: Some(format!("gamma pole at -{n} (argument {at})")),
                });
            }
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    }
    Ok(DecayProfile { entries })
}

/// Fits `log_ratio(n) ≈ A n log n + B n + C` by least squares over the
/// largest-`n` third of the finite entries and returns `A`, which tracks
/// `d - 1`.  The lower-order regressors soak up the linear and constant
/// parts that would otherwise bias a single-regressor fit.  Requires at
/// least 20 finite entries.
pub fn decay_exponent(profile: &DecayProfile) -> Result<f64> {
    let finite: Vec<(f64, f64)> = profile
        .entries
        .iter()
        .filter_map(|e| e.log_ratio.map(|v| (e.n as f64, v)))
        .collect();
    if finite.len() < 20 {
        return Err(Error::InsufficientData {
            what: "decay_exponent",
            detail: format!("{} finite entries, need at least 20", finite.len()),
        });
    }
    let start = finite.len() - finite.len() / 3;
    let window = &finite[start..];
    // Normal equations for the regressors {n log n, n, 1}.
    let mut ata = [[0.0f64; 3]; 3];
    let mut aty = [0.0f64; 3];
    for &(n, y) in window {
        let row = [n * n.ln(), n, 1.0];
        for i in 0..3 {
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
            aty[i] += row[i] * y;
        }
    }
    solve3(ata, aty)
        .map(|sol| sol[0])
        .ok_or(Error::ParameterDegeneracy {
            detail: "singular normal equations in the decay fit".into(),
        })
}

/// 3×3 linear solve with partial pivoting; `None` when singular.
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| {
            a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap()
        })?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0f64; 3];
    for row in (0..3).rev() {
        let mut acc = b[row];
        for k in row + 1..3 {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

/// A local polynomial `P(x) = Σ A_j x^j = Π (1 - R_i x)` at a prime,
/// with its inverse roots.
#[derive(Clone, Debug)]
pub struct LocalFactor {
    pub p: u64,
    pub coeffs: Vec<Complex>,
    pub roots: Vec<Complex>,
}

impl LocalFactor {
    /// `log_p max |R_i|`: the minimal growth exponent any candidate
    /// containing this factor must tolerate.
    pub fn theta_requirement(&self) -> f64 {
        let m = self.roots.iter().map(|r| r.norm()).fold(0.0f64, f64::max);
        if m <= 0.0 {
            return f64::NEG_INFINITY;
        }
        m.ln() / (self.p as f64).ln()
    }

    /// Admissible iff the forced growth exponent stays below 1/2 by more
    /// than numerical resolution — data on the boundary is not certified.
    pub fn is_admissible(&self) -> bool {
        self.theta_requirement() < 0.5 - 1e-9
    }

    /// `|B_j|^{1/j}` for `j = 1..=j_max`, where `B_j = -(1/j) Σ R_i^j` are
    /// the log-series coefficients.  Power sums are accumulated on the
    /// scale of the largest root so no intermediate overflows.
    pub fn bj_growth(&self, j_max: usize) -> BjGrowth {
        let m = self.roots.iter().map(|r| r.norm()).fold(0.0f64, f64::max);
        let mut values = Vec::with_capacity(j_max);
        if m <= 0.0 {
            values.resize(j_max, 0.0);
            return BjGrowth { values, limsup_tail: 0.0 };
        }
        let scaled: Vec<Complex> = self.roots.iter().map(|r| r / m).collect();
        let mut powers: Vec<Complex> = scaled.clone();
        for j in 1..=j_max {
            let t: Complex = powers.iter().sum();
            // |B_j|^{1/j} = M · (|t_j| / j)^{1/j}
            let v = if t.norm() > 0.0 {
                m * (t.norm() / j as f64).powf(1.0 / j as f64)
            } else {
                0.0
            };
            values.push(v);
            for (pw, s) in powers.iter_mut().zip(&scaled) {
                *pw *= s;
            }
        }
        let tail_start = j_max - (j_max / 10).max(1);
        let limsup_tail = values[tail_start..]
            .iter()
            .copied()
            .fold(0.0f64, f64::max);
        BjGrowth { values, limsup_tail }
    }
}

/// Root-scale growth of the log-series coefficients.
#[derive(Clone, Debug)]
pub struct BjGrowth {
    /// `|B_j|^{1/j}`, 1-indexed by position.
    pub values: Vec<f64>,
    /// Max over the final 10% — a finite-j stand-in for the limsup, which
    /// approaches `max |R_i|` from below.
    pub limsup_tail: f64,
}

/// Finds the inverse roots of `P(x) = Σ A_j x^j` with `A_0 = 1`: the roots
/// of the reversed monic polynomial, by simultaneous (Durand–Kerner)
/// iteration with deterministic restarts, validated by a coefficient
/// round-trip and sample-point residuals at 1e-10.
pub fn local_roots(p: u64, coeffs: &[Complex]) -> Result<LocalFactor> {
    if coeffs.is_empty() || (coeffs[0] - Complex::new(1.0, 0.0)).norm() > 1e-12 {
        return Err(Error::InvalidInput {
            what: "local_roots",
            detail: "local polynomial must start with A_0 = 1".into(),
        });
    }
    if p < 2 {
        return Err(Error::InvalidInput {
            what: "local_roots",
            detail: format!("p = {p} is not a prime"),
        });
    }
    // Trim trailing zeros (they do not change the polynomial).
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    let mut last = coeffs.len();
    while last > 1 && coeffs[last - 1].norm() <= 1e-14 * scale {
        last -= 1;
    }
    let coeffs = &coeffs[..last];
    let r = coeffs.len() - 1;
    if r == 0 {
        return Err(Error::InvalidInput {
            what: "local_roots",
            detail: "degree must be at least 1".into(),
        });
    }

    // Reversed monic: q(y) = y^r + A_1 y^{r-1} + ... + A_r, roots = R_i.
    let monic: Vec<Complex> = coeffs.to_vec();
    let eval_q = |y: Complex| -> Complex {
        let mut acc = Complex::new(1.0, 0.0);
        for k in 1..=r {
            acc = acc * y + monic[k];
        }
        acc
    };

    let seed = Complex::new(0.4, 0.9);
    let mut restart = 0usize;
    'attempt: loop {
        if restart > 5 {
            return Err(Error::NonConvergence {
                what: "local_roots",
                detail: format!("root finding failed after {restart} restarts (degree {r})"),
            });
        }
        let spin = Complex::new(0.0, 0.7 * restart as f64).exp() * (1.0 + 0.1 * restart as f64);
        let mut roots: Vec<Complex> = (1..=r).map(|k| seed.powu(k as u32) * spin).collect();
        let mut converged = false;
        for _ in 0..600 {
            let mut max_step = 0.0f64;
            for i in 0..r {
                let mut denom = Complex::new(1.0, 0.0);
                for j in 0..r {
                    if i != j {
                        denom *= roots[i] - roots[j];
                    }
                }
                if denom.norm() < 1e-280 {
                    restart += 1;
                    continue 'attempt;
                }
                let step = eval_q(roots[i]) / denom;
                roots[i] -= step;
                max_step = max_step.max(step.norm());
            }
            let scale_r = roots.iter().map(|z| z.norm()).fold(1.0f64, f64::max);
            if max_step <= 1e-14 * scale_r {
                converged = true;
                break;
            }
        }
        if converged {
            // Round-trip: rebuild the coefficients from the roots.
            let mut rebuilt = vec![Complex::new(0.0, 0.0); r + 1];
            rebuilt[0] = Complex::new(1.0, 0.0);
            for &root in &roots {
                for k in (1..=r).rev() {
                    let prev = rebuilt[k - 1];
                    rebuilt[k] = rebuilt[k] - root * prev;
                }
            }
            let coeff_scale = scale.max(1.0);
            let round_trip_ok = rebuilt
                .iter()
                .zip(coeffs)
                .all(|(a, b)| (a - b).norm() <= 1e-10 * coeff_scale);
            // Sample-point residuals of the factored form.
            let samples_ok = (0..7).all(|s| {
                let x = Complex::new(0.0, 2.0 * std::f64::consts::PI * s as f64 / 7.0).exp() * 0.17;
                let direct: Complex = {
                    let mut acc = Complex::new(0.0, 0.0);
                    for k in (0..=r).rev() {
                        acc = acc * x + coeffs[k];
                    }
                    acc
                };
                let factored: Complex = roots
                    .iter()
                    .fold(Complex::new(1.0, 0.0), |acc, &root| acc * (Complex::new(1.0, 0.0) - root * x));
                (direct - factored).norm() <= 1e-10 * (1.0 + direct.norm())
            });
            if round_trip_ok && samples_ok {
                let mut roots = roots;
                roots.sort_by(|a, b| {
                    b.norm()
                        .partial_cmp(&a.norm())
                        .unwrap()
                        .then(a.re.partial_cmp(&b.re).unwrap())
                        .then(a.im.partial_cmp(&b.im).unwrap())
                });
                return Ok(LocalFactor { p, coeffs: coeffs.to_vec(), roots });
            }
        }
        restart += 1;
    }
}

/// Verdict on a finite Dirichlet polynomial claiming degree 0.
#[derive(Clone, Debug)]
pub struct DegreeZeroReport {
    /// The conductor `Q²` rounded to an integer, when integral.
    pub conductor: Option<u64>,
    pub support_ok: bool,
    pub reflection_ok: bool,
    pub multiplicative_ok: bool,
    /// `max_p log_p max|R_i|` over the local factors (0 when no primes).
    pub theta_requirement: f64,
    /// Everything consistent and `θ < 1/2`.
    pub admissible: bool,
    /// The candidate is literally the constant function 1.
    pub is_trivial: bool,
    pub violations: Vec<String>,
}

/// Checks the closed constraint system for a degree-0 candidate with the
/// given gamma data (`degree = 0`: bare `ε` and scale `Q`) and polynomial
/// coefficients:
///
/// * the conductor `Q²` is a positive integer,
/// * nonzero coefficients sit on divisors of `Q²`,
/// * `a_{Q²/m} = ε Q conj(a_m)/m` for every divisor `m`,
/// * the coefficients are multiplicative,
/// * the per-prime inverse roots obey `θ < 1/2`.
///
/// Only the constant function 1 survives all five.
pub fn degree_zero_constraints(gamma: &GammaFactor, coeffs: &[Complex]) -> Result<DegreeZeroReport> {
    if gamma.degree() != 0.0 {
        return Err(Error::InvalidInput {
            what: "degree_zero_constraints",
            detail: format!("expected degree 0, got {}", gamma.degree()),
        });
    }
    if coeffs.is_empty() || (coeffs[0] - Complex::new(1.0, 0.0)).norm() > 1e-12 {
        return Err(Error::InvalidInput {
            what: "degree_zero_constraints",
            detail: "polynomial must have a_1 = 1".into(),
        });
    }
    let mut violations = Vec::new();
    let q_scale = gamma.q_scale();
    let epsilon = gamma.epsilon();
    let q_real = q_scale * q_scale;
    let q_round = q_real.round();
    let conductor = if (q_real - q_round).abs() <= 1e-9 && q_round >= 1.0 {
        Some(q_round as u64)
    } else {
        violations.push(format!("conductor Q² = {q_real} is not a positive integer"));
        None
    };

    let tol = 1e-10;
    let mut support_ok = true;
    let mut reflection_ok = true;
    if let Some(q) = conductor {
        for (i, a) in coeffs.iter().enumerate() {
            let n = (i + 1) as u64;
            if a.norm() > tol && (n > q || q % n != 0) {
                support_ok = false;
                violations.push(format!("a_{n} = {a} lies off the divisors of {q}"));
            }
        }
        if coeffs.len() < q as usize {
            reflection_ok = false;
            violations.push(format!(
                "polynomial has {} coefficients; need all of 1..={q} to test the reflection",
                coeffs.len()
            ));
        } else {
            let mut m = 1u64;
            while m * m <= q {
                if q % m == 0 {
                    for d in [m, q / m] {
                        let partner = q / d;
                        let lhs = coeffs[(partner - 1) as usize];
                        let rhs = epsilon * q_scale * coeffs[(d - 1) as usize].conj() / d as f64;
                        if (lhs - rhs).norm() > tol * (1.0 + rhs.norm()) {
                            reflection_ok = false;
                            violations.push(format!(
                                "reflection fails at divisor {d}: a_{partner} = {lhs}, forced {rhs}"
                            ));
                        }
                    }
                }
                m += 1;
            }
        }
    } else {
        support_ok = false;
        reflection_ok = false;
    }

    let mult_violations = multiplicativity_check(coeffs, coeffs.len());
    let multiplicative_ok = mult_violations.is_empty();
    for (m, k) in mult_violations.iter().take(5) {
        violations.push(format!("multiplicativity fails at coprime ({m}, {k})"));
    }

    // Per-prime growth requirement from the local inverse roots.
    let mut theta = 0.0f64;
    if let Some(q) = conductor {
        let mut q_left = q;
        let mut p = 2u64;
        while p * p <= q_left.max(2) && q_left > 1 {
            if q_left % p == 0 {
                while q_left % p == 0 {
                    q_left /= p;
                }
                theta = theta.max(local_theta(p, coeffs, &mut violations));
            }
            p += 1;
        }
        if q_left > 1 {
            theta = theta.max(local_theta(q_left, coeffs, &mut violations));
        }
    }

    let is_trivial = conductor == Some(1)
        && coeffs.iter().skip(1).all(|a| a.norm() <= tol);
    let admissible = support_ok
        && reflection_ok
        && multiplicative_ok
        && conductor.is_some()
        && theta < 0.5 - 1e-9;
    Ok(DegreeZeroReport {
        conductor,
        support_ok,
        reflection_ok,
        multiplicative_ok,
        theta_requirement: theta,
        admissible,
        is_trivial,
        violations,
    })
}

/// Growth requirement of the local polynomial at `p` read off `coeffs`.
fn local_theta(p: u64, coeffs: &[Complex], violations: &mut Vec<String>) -> f64 {
    let mut local = vec![Complex::new(1.0, 0.0)];
    let mut pk = p;
    while (pk as usize) <= coeffs.len() {
        local.push(coeffs[(pk - 1) as usize]);
        match pk.checked_mul(p) {
            Some(next) => pk = next,
            None => break,
        }
    }
    while local.len() > 1 && local.last().unwrap().norm() <= 1e-12 {
        local.pop();
    }
    if local.len() == 1 {
        return 0.0;
    }
    match local_roots(p, &local) {
        Ok(factor) => {
            let t = factor.theta_requirement();
            if t >= 0.5 - 1e-9 {
                violations.push(format!(
                    "local factor at {p} forces growth exponent {t:.4} ≥ 1/2"
                ));
            }
            t
        }
        Err(e) => {
            violations.push(format!("local factor at {p}: {e}"));
            1.0
        }
    }
}

/// Diagnostic for degree-1 data: the conductor `π Q'²` of any genuine
/// candidate is a positive integer, so `Q'` cannot fall below `π^{-1/2}`.
#[derive(Clone, Debug)]
pub struct QLowerBoundReport {
    pub q_prime: f64,
    pub threshold: f64,
    pub conductor: f64,
    pub above_threshold: bool,
}

/// Compares the normalized scale of degree-1 gamma data against the
/// smallest value any integral conductor permits.
pub fn q_lower_bound_probe(gamma: &GammaFactor) -> Result<QLowerBoundReport> {
    let star = gamma.normalize_to_sstar()?;
    if star.d != 1 {
        return Err(Error::InvalidInput {
            what: "q_lower_bound_probe",
            detail: format!("expected degree 1, got {}", star.d),
        });
    }
    let q_prime = (star.q / std::f64::consts::PI).sqrt();
    let threshold = std::f64::consts::PI.powf(-0.5);
    Ok(QLowerBoundReport {
        q_prime,
        threshold,
        conductor: star.q,
        above_threshold: q_prime >= threshold - 1e-12,
    })
}
