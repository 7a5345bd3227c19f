//! Release gate: eleven behavioral checks with pinned tolerances and
//! wall-clock budgets.  Each prints exactly one `[PASS]`/`[FAIL]` line;
//! the suite fails if any check misses its tolerance or budget.

use selberg_core::characters::CharacterGroup;
use selberg_core::converse::{
    delta_transform_check, g_series_check, j_closed_form_check, mellin_pair_check, pde_residual,
    symmetry_scan, t_symmetry_check, GL2Params,
};
use selberg_core::degree_gate::{
    decay_exponent, degree_zero_constraints, k_decay_profile, local_roots,
};
use selberg_core::lfunc::tau::tau_exact;
use selberg_core::lfunc::{
    euler_log_coeffs, fe_residual, product, CoefficientSource, GammaFactor, SelbergFunction,
};
use selberg_core::specfun::Accuracy;
use selberg_core::stats::{estimate_nf, geometric_checkpoints, orthogonality_sum, pole_divergence_sum};
use selberg_core::Complex;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

struct Gate {
    failures: Vec<String>,
}

impl Gate {
    fn run<F>(&mut self, idx: usize, what: &str, budget: Duration, body: F)
    where
        F: FnOnce() -> Result<String, String>,
    {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(body));
        let elapsed = start.elapsed();
        let result = match outcome {
            Ok(Ok(detail)) if elapsed <= budget => Ok(detail),
            Ok(Ok(detail)) => Err(format!(
                "{detail}; but took {elapsed:.2?}, over the {budget:.2?} budget"
            )),
            Ok(Err(detail)) => Err(detail),
            Err(payload) => {
                let msg = payload
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "panicked".into());
                Err(format!("panicked: {msg}"))
            }
        };
        match result {
            Ok(detail) => println!("[PASS] {idx:>2}. {what}: {detail} ({elapsed:.2?})"),
            Err(detail) => {
                println!("[FAIL] {idx:>2}. {what}: {detail} ({elapsed:.2?})");
                self.failures.push(format!("criterion {idx}: {detail}"));
            }
        }
    }
}

#[test]
fn acceptance_gate() {
    let mut gate = Gate { failures: Vec::new() };
    let secs = Duration::from_secs;

    // 1. Terminating half-odd closed form vs the generic Bessel evaluator.
    gate.run(1, "order-11/2 closed form matches the generic evaluator", secs(1), || {
        let mut worst = (0.0f64, 0.0f64);
        let mut x = 1.0f64;
        while x <= 60.0 + 1e-9 {
            let (_closed, generic, diff) = j_closed_form_check(x).map_err(|e| e.to_string())?;
            let rel = diff / generic.abs();
            if rel > worst.0 {
                worst = (rel, x);
            }
            x += 0.5;
        }
        if worst.0 <= 1e-9 {
            Ok(format!("max relative gap {:.2e} (at x = {}) <= 1e-9", worst.0, worst.1))
        } else {
            Err(format!("relative gap {:.2e} at x = {} exceeds 1e-9", worst.0, worst.1))
        }
    });

    // 2. s <-> 1-s invariance of the hypergeometric combination.
    gate.run(2, "radial-transform combination is reflection invariant", secs(1), || {
        let mut worst = 0.0f64;
        for &alpha in &[0.5, 5.5] {
            for &beta in &[c(0.5, 0.0), c(0.0, 0.5)] {
                for &theta in &[PI / 6.0, PI / 4.0, PI / 3.0] {
                    for &s in &[c(0.3, 0.0), c(0.3, 0.7), c(0.8, 2.0)] {
                        let (ts, _, diff) =
                            t_symmetry_check(alpha, beta, theta, s).map_err(|e| e.to_string())?;
                        let scaled = diff / ts.norm().max(1.0);
                        worst = worst.max(scaled);
                        if scaled > 1e-9 {
                            return Err(format!(
                                "gap {scaled:.2e} at alpha={alpha} beta={beta} theta={theta} s={s}"
                            ));
                        }
                    }
                }
            }
        }
        Ok(format!("36 parameter combinations, worst scaled gap {worst:.2e} <= 1e-9"))
    });

    // 3. Kernel-product quadrature against the hypergeometric closed form.
    gate.run(3, "kernel-pair integral matches its closed form", secs(10), || {
        let acc = Accuracy { abs_tol: 1e-11, rel_tol: 2e-7, max_terms: 2_000_000 };
        let mut worst = 0.0f64;
        for &alpha in &[0.5, 5.5] {
            for &(a, b) in &[(1.0, 1.0), (1.0, 2.0), (0.5, 1.0)] {
                for &s in &[c(1.0, 0.0), c(1.5, 0.5)] {
                    let (lhs, rhs, diff) =
                        mellin_pair_check(alpha, c(0.5, 0.0), a, b, s, &acc)
                            .map_err(|e| e.to_string())?;
                    let rel = diff / rhs.norm();
                    worst = worst.max(rel);
                    if rel > 1e-6 {
                        return Err(format!(
                            "relative gap {rel:.2e} at alpha={alpha} (a,b)=({a},{b}) s={s}"
                        ));
                    }
                    if alpha == 0.5 && a == 1.0 && b == 1.0 && s == c(1.0, 0.0) {
                        let spot = (lhs.re - PI / 4.0).abs().max(lhs.im.abs());
                        if spot > 1e-6 {
                            return Err(format!("classical spot value off pi/4 by {spot:.2e}"));
                        }
                    }
                }
            }
        }
        Ok(format!("12 parameter combinations, worst relative gap {worst:.2e} <= 1e-6"))
    });

    // 4. Inversion symmetry of the cusp-form Bessel series, and its loss
    //    under a coefficient perturbation.
    gate.run(4, "series inversion symmetry holds and detects tampering", secs(30), || {
        let params = GL2Params::delta(256).map_err(|e| e.to_string())?;
        let acc = Accuracy { abs_tol: 2e-9, rel_tol: 0.0, max_terms: 2_000_000 };
        let rs = [1.2, 2.0, 3.0];
        let thetas = [PI / 6.0, PI / 4.0, PI / 3.0];
        let clean = symmetry_scan(&params, &rs, &thetas, &acc).map_err(|e| e.to_string())?;
        if clean.max_residual > 1e-8 {
            return Err(format!("clean max residual {:.2e} exceeds 1e-8", clean.max_residual));
        }
        let perturbed = params
            .with_perturbed_coeff(2, c(0.1, 0.0))
            .map_err(|e| e.to_string())?;
        let broken = symmetry_scan(&perturbed, &rs, &thetas, &acc).map_err(|e| e.to_string())?;
        if broken.max_residual <= 1e-4 {
            return Err(format!(
                "perturbing a_2 left max residual {:.2e}, not above 1e-4",
                broken.max_residual
            ));
        }
        Ok(format!(
            "max residual {:.2e} <= 1e-8 on 9 points; a_2 + 0.1 drives it to {:.2e} > 1e-4",
            clean.max_residual, broken.max_residual
        ))
    });

    // 5. Weight-12 transformation law, two independent evaluation routes.
    gate.run(5, "weight-12 transformation holds along both routes", secs(5), || {
        let params = GL2Params::delta(512).map_err(|e| e.to_string())?;
        let mut worst = (0.0f64, 0.0f64);
        for &y in &[1.0, 1.5, 2.0, 3.0] {
            let (lhs, rhs, diff) = delta_transform_check(y).map_err(|e| e.to_string())?;
            let rel = diff / lhs.abs().max(rhs.abs());
            if rel > 1e-10 {
                return Err(format!("transformation gap {rel:.2e} at y = {y} exceeds 1e-10"));
            }
            // Independent route: the even-weight exponential series.
            let (g_inv, _, g_diff) =
                g_series_check(&params, 12, y).map_err(|e| e.to_string())?;
            let series_value = rhs * y.powi(12); // the y^-12-free side
            let cross = (g_inv.re - series_value).abs().max(g_inv.im.abs());
            if g_diff > 1e-9 || cross > 1e-9 {
                return Err(format!(
                    "series route disagrees at y = {y}: internal {g_diff:.2e}, cross {cross:.2e}"
                ));
            }
            worst = (worst.0.max(rel), worst.1.max(cross.max(g_diff)));
        }
        Ok(format!(
            "worst gap {:.2e} <= 1e-10 over y in {{1, 1.5, 2, 3}}; series route within {:.2e}",
            worst.0, worst.1
        ))
    });

    // 6. Completed-sum functional-equation residual, and root-number tampering.
    gate.run(6, "functional-equation residuals vanish and flag tampering", secs(60), || {
        let acc = Accuracy { abs_tol: 1e-9, rel_tol: 0.0, max_terms: 2_000_000 };
        let grid = [0.7, 1.0, 1.4];
        let mut functions: Vec<SelbergFunction> = Vec::new();
        functions.push(SelbergFunction::zeta(65_536).map_err(|e| e.to_string())?);
        for q in [3u64, 4] {
            let group = CharacterGroup::new(q).map_err(|e| e.to_string())?;
            let chi = group
                .characters()
                .into_iter()
                .find(|ch| !ch.is_principal() && ch.is_primitive())
                .ok_or("no primitive character")?;
            functions.push(SelbergFunction::dirichlet(&chi, 65_536).map_err(|e| e.to_string())?);
        }
        let mut worst = 0.0f64;
        for f in &functions {
            for &x in &grid {
                let (res, _) = fe_residual(f, x, &acc).map_err(|e| e.to_string())?;
                worst = worst.max(res.norm());
                if res.norm() > 1e-8 {
                    return Err(format!("{} residual {:.2e} at x = {x}", f.name(), res.norm()));
                }
            }
        }
        let twisted = functions[0]
            .with_epsilon_factor(Complex::from_polar(1.0, 0.1))
            .map_err(|e| e.to_string())?;
        let mut broken = 0.0f64;
        for &x in &grid {
            let (res, _) = fe_residual(&twisted, x, &acc).map_err(|e| e.to_string())?;
            broken = broken.max(res.norm());
        }
        if broken <= 1e-3 {
            return Err(format!("twisted root number left residual {broken:.2e}, not above 1e-3"));
        }
        Ok(format!(
            "3 functions x 3 scales, worst residual {worst:.2e} <= 1e-8; \
             twisting the root number raises it to {broken:.2e} > 1e-3"
        ))
    });

    // 7. Variance slope of the prime sums reads off the expected integer.
    gate.run(7, "prime-variance slopes land on the expected integers", secs(30), || {
        let x = 1_000_000u64;
        let zeta = SelbergFunction::zeta(1_000_000).map_err(|e| e.to_string())?;
        let zeta2 = product(&zeta, &zeta).map_err(|e| e.to_string())?;
        let chi5 = {
            let group = CharacterGroup::new(5).map_err(|e| e.to_string())?;
            let chi = group
                .characters()
                .into_iter()
                .find(|ch| !ch.is_principal() && ch.is_primitive())
                .ok_or("no primitive character mod 5")?;
            SelbergFunction::dirichlet(&chi, 1_000_000).map_err(|e| e.to_string())?
        };
        let delta = SelbergFunction::ramanujan_delta(1_000_000).map_err(|e| e.to_string())?;
        let cases: [(&SelbergFunction, f64, f64); 4] = [
            (&zeta, 1.0, 0.15),
            (&zeta2, 4.0, 0.6),
            (&chi5, 1.0, 0.2),
            (&delta, 1.0, 0.2),
        ];
        let mut report = Vec::new();
        for (f, want, window) in cases {
            let est = estimate_nf(f, x, 12).map_err(|e| e.to_string())?;
            if (est.slope - want).abs() > window {
                return Err(format!(
                    "{} slope {:.4} outside {want} +- {window}",
                    f.name(),
                    est.slope
                ));
            }
            report.push(format!("{} {:.3}", f.name(), est.slope));
        }
        Ok(format!("slopes [{}] within their windows", report.join(", ")))
    });

    // 8. Cross-character cancellation and single-pole divergence.
    gate.run(8, "orthogonality stays bounded while the pole sum grows", secs(30), || {
        let checkpoints = geometric_checkpoints(1_000_000, 10).map_err(|e| e.to_string())?;
        let group = CharacterGroup::new(7).map_err(|e| e.to_string())?;
        let prims: Vec<_> = group
            .characters()
            .into_iter()
            .filter(|ch| !ch.is_principal() && ch.is_primitive())
            .take(2)
            .collect();
        if prims.len() < 2 {
            return Err("fewer than two primitive characters mod 7".into());
        }
        let f = SelbergFunction::dirichlet(&prims[0], 1_000_000).map_err(|e| e.to_string())?;
        let g = SelbergFunction::dirichlet(&prims[1], 1_000_000).map_err(|e| e.to_string())?;
        let series = orthogonality_sum(&f, &g, &checkpoints).map_err(|e| e.to_string())?;
        let sup = series.partial_sums.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
        if sup > 2.0 {
            return Err(format!("orthogonality sup {sup:.4} exceeds 2.0"));
        }
        let zeta = SelbergFunction::zeta(1_000_000).map_err(|e| e.to_string())?;
        let div = pole_divergence_sum(&zeta, 0.0, &checkpoints).map_err(|e| e.to_string())?;
        let mut prev = f64::NEG_INFINITY;
        for (i, v) in div.partial_sums.iter().enumerate() {
            if v.re <= prev {
                return Err(format!("pole sum not strictly increasing at checkpoint {i}"));
            }
            prev = v.re;
        }
        Ok(format!(
            "cross-character sup {sup:.3} <= 2.0; pole sum strictly increasing to {prev:.3}"
        ))
    });

    // 9. Degree gates: decay exponents, local root growth, admissibility.
    gate.run(9, "degree gates read the right exponents and reject imposters", secs(10), || {
        let eval = |f: &SelbergFunction, n_terms: usize| -> Result<Vec<Complex>, String> {
            let acc = Accuracy { abs_tol: 1e-2, rel_tol: 1e-12, max_terms: 2_000_000 };
            (1..=n_terms)
                .map(|n| {
                    f.dirichlet_eval(c(n as f64 + 1.0, 0.0), &acc)
                        .map(|(v, _)| v)
                        .map_err(|e| e.to_string())
                })
                .collect()
        };
        let zeta = SelbergFunction::zeta(4_000).map_err(|e| e.to_string())?;
        let profile = k_decay_profile(zeta.gamma(), &eval(&zeta, 200)?, 200)
            .map_err(|e| e.to_string())?;
        let a1 = decay_exponent(&profile).map_err(|e| e.to_string())?;
        if a1.abs() > 0.05 {
            return Err(format!("degree-1 exponent {a1:.4} off 0 by more than 0.05"));
        }
        let delta = SelbergFunction::ramanujan_delta(200_000).map_err(|e| e.to_string())?;
        let profile = k_decay_profile(delta.gamma(), &eval(&delta, 200)?, 200)
            .map_err(|e| e.to_string())?;
        let a2 = decay_exponent(&profile).map_err(|e| e.to_string())?;
        if (a2 - 1.0).abs() > 0.05 {
            return Err(format!("degree-2 exponent {a2:.4} off 1 by more than 0.05"));
        }
        let gamma_half = GammaFactor::new(c(1.0, 0.0), PI.powf(-0.25), vec![(0.25, c(0.0, 0.0))])
            .map_err(|e| e.to_string())?;
        let ones = vec![c(1.0, 0.0); 200];
        let profile = k_decay_profile(&gamma_half, &ones, 200).map_err(|e| e.to_string())?;
        let ah = decay_exponent(&profile).map_err(|e| e.to_string())?;
        if (ah + 0.5).abs() > 0.05 {
            return Err(format!("degree-1/2 exponent {ah:.4} off -1/2 by more than 0.05"));
        }

        let factor = local_roots(2, &[c(1.0, 0.0), c(-2.0, 0.0)]).map_err(|e| e.to_string())?;
        if (factor.theta_requirement() - 1.0).abs() > 1e-9 || factor.is_admissible() {
            return Err("local list (1, -2) should force growth 1 and be inadmissible".into());
        }
        let growth = factor.bj_growth(500);
        let gap = (growth.values[499] - 2.0).abs() / 2.0;
        if gap > 0.02 {
            return Err(format!("|B_500|^(1/500) off its root magnitude by {gap:.4}"));
        }

        let unit_gamma = GammaFactor::new(c(1.0, 0.0), 1.0, vec![]).map_err(|e| e.to_string())?;
        let accept = degree_zero_constraints(&unit_gamma, &[c(1.0, 0.0)])
            .map_err(|e| e.to_string())?;
        if !(accept.admissible && accept.is_trivial) {
            return Err("constant function rejected by the degree-zero gate".into());
        }
        let gamma4 = GammaFactor::new(c(1.0, 0.0), 2.0, vec![]).map_err(|e| e.to_string())?;
        let r2 = 2f64.sqrt();
        let consistent = degree_zero_constraints(
            &gamma4,
            &[c(1.0, 0.0), c(r2, 0.0), c(0.0, 0.0), c(2.0, 0.0)],
        )
        .map_err(|e| e.to_string())?;
        let off_support = degree_zero_constraints(
            &gamma4,
            &[c(1.0, 0.0), c(r2, 0.0), c(0.5, 0.0), c(2.0, 0.0)],
        )
        .map_err(|e| e.to_string())?;
        let non_integral = GammaFactor::new(c(1.0, 0.0), 1.3, vec![]).map_err(|e| e.to_string())?;
        let bad_q = degree_zero_constraints(&non_integral, &[c(1.0, 0.0)])
            .map_err(|e| e.to_string())?;
        if consistent.admissible || off_support.admissible || bad_q.admissible {
            return Err("an imposter cleared the degree-zero gate".into());
        }
        Ok(format!(
            "exponents {a1:.3}/{ah:.3}/{a2:.3} for degrees 1, 1/2, 2; \
             root growth within 0.02; only the constant clears degree zero"
        ))
    });

    // 10. Five-point stencil residual shrinks at the second-order rate.
    gate.run(10, "series second-order equation verified by step halving", secs(10), || {
        let params = GL2Params::delta(64).map_err(|e| e.to_string())?;
        let acc = Accuracy::default();
        let mut ratios = Vec::new();
        for &(x, y) in &[(0.7, 0.9), (1.1, 0.8), (0.9, 1.3)] {
            let coarse = pde_residual(&params, x, y, 1e-2, &acc).map_err(|e| e.to_string())?;
            let fine = pde_residual(&params, x, y, 5e-3, &acc).map_err(|e| e.to_string())?;
            let ratio = coarse / fine;
            if !(3.5..=4.5).contains(&ratio) {
                return Err(format!("halving ratio {ratio:.3} at ({x}, {y}) outside [3.5, 4.5]"));
            }
            ratios.push(format!("{ratio:.3}"));
        }
        Ok(format!("halving ratios [{}] within [3.5, 4.5]", ratios.join(", ")))
    });

    // 11. Exact algebraic identities on coefficients and characters.
    gate.run(11, "log-series, tau, and character identities hold exactly", secs(30), || {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
        let primes = [2u64, 3, 5, 7];
        for trial in 0..8 {
            let p = primes[trial % primes.len()];
            let r = rng.gen_range(1..=4usize);
            let roots: Vec<Complex> = (0..r)
                .map(|_| {
                    let mag = rng.gen_range(0.3..2.0);
                    let arg = rng.gen_range(0.0..std::f64::consts::TAU);
                    Complex::from_polar(mag, arg)
                })
                .collect();
            let mut coeffs = vec![c(0.0, 0.0); r + 1];
            coeffs[0] = c(1.0, 0.0);
            for &root in &roots {
                for k in (1..=r).rev() {
                    let prev = coeffs[k - 1];
                    coeffs[k] -= root * prev;
                }
            }
            let mut locals = BTreeMap::new();
            locals.insert(p, coeffs.clone());
            let gamma = GammaFactor::new(c(1.0, 0.0), 1.0, vec![(0.5, c(0.0, 0.0))])
                .map_err(|e| e.to_string())?;
            let f = SelbergFunction::new(
                "local-probe",
                CoefficientSource::Euler { locals, zeta_background: true },
                gamma,
                1,
                Some(c(1.0, 0.0)),
                0.49,
                1.0,
                5_000,
            )
            .map_err(|e| e.to_string())?;
            let j_max = (5_000f64.ln() / (p as f64).ln()).floor() as u32;
            let bs = euler_log_coeffs(&f, p, j_max).map_err(|e| e.to_string())?;
            let factor = local_roots(p, &coeffs).map_err(|e| e.to_string())?;
            for j in 1..=j_max as usize {
                let power_sum: Complex = factor.roots.iter().map(|r| r.powi(j as i32)).sum();
                let b_j = power_sum / j as f64;
                let gap = (bs[j - 1] + b_j).norm();
                if gap > 1e-10 * b_j.norm().max(1.0) {
                    return Err(format!(
                        "log-series coefficient j = {j} (p = {p}, trial {trial}) off by {gap:.2e}"
                    ));
                }
            }
        }

        let taus = tau_exact(1_000).map_err(|e| e.to_string())?;
        for m in 2..=500usize {
            for n in 2..=(1_000 / m) {
                if gcd(m as u64, n as u64) != 1 {
                    continue;
                }
                if taus[m * n - 1] != taus[m - 1] * taus[n - 1] {
                    return Err(format!("tau({}) != tau({m}) tau({n})", m * n));
                }
            }
        }

        for q in 2..=40u64 {
            let group = CharacterGroup::new(q).map_err(|e| e.to_string())?;
            let chars = group.characters();
            let phi = group.num_characters() as f64;
            for (i, chi) in chars.iter().enumerate() {
                for (j, psi) in chars.iter().enumerate() {
                    let mut sum = c(0.0, 0.0);
                    for n in 1..=q {
                        if gcd(n, q) != 1 {
                            continue;
                        }
                        sum += chi.eval(n) * psi.eval(n).conj();
                    }
                    let want = if i == j { phi } else { 0.0 };
                    if (sum - want).norm() > 1e-9 * phi {
                        return Err(format!(
                            "character pair ({i}, {j}) mod {q}: sum {sum} vs {want}"
                        ));
                    }
                }
            }
        }
        Ok("8 random local factors, tau up to 1000, characters to modulus 40".into())
    });

    assert!(
        gate.failures.is_empty(),
        "acceptance gate failed:\n{}",
        gate.failures.join("\n")
    );
}
