//! Cross-module consistency checks and randomized invariants.
//!
//! These tests tie independent evaluation routes to each other: group
//! characters against their defining algebra, gamma data against its
//! half-shift normal form, series builders against each other, and the
//! special-function kernels against recurrence identities.

use proptest::prelude::*;
use selberg_core::characters::CharacterGroup;
use selberg_core::converse::GL2Params;
use selberg_core::lfunc::{
    axiom_audit, product, trivial_zeros, twist, GammaFactor, SelbergFunction,
};
use selberg_core::specfun::{bessel_j, gamma, Accuracy};
use selberg_core::Complex;

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

proptest! {
    /// Characters are completely multiplicative and unimodular on units.
    #[test]
    fn characters_are_multiplicative(q in 3u64..60, a in 1u64..1000, b in 1u64..1000) {
        let group = CharacterGroup::new(q).unwrap();
        for chi in group.characters() {
            let lhs = chi.eval(a * b);
            let rhs = chi.eval(a) * chi.eval(b);
            prop_assert!((lhs - rhs).norm() <= 1e-12, "chi mod {q} at ({a}, {b})");
            if gcd(a, q) == 1 {
                prop_assert!((chi.eval(a).norm() - 1.0).abs() <= 1e-12);
            } else {
                prop_assert!(chi.eval(a).norm() == 0.0);
            }
        }
    }

    /// The conjugate character evaluates to the complex conjugate.
    #[test]
    fn character_conjugation_commutes_with_evaluation(q in 3u64..60, n in 1u64..500) {
        let group = CharacterGroup::new(q).unwrap();
        for chi in group.characters() {
            let direct = chi.conjugate().eval(n);
            let reflected = chi.eval(n).conj();
            prop_assert!((direct - reflected).norm() <= 1e-12);
        }
    }

    /// Three-term recurrence of the oscillatory kernel across all regimes.
    #[test]
    fn bessel_recurrence_holds(a in 0.5f64..5.5, x in 1.0f64..40.0) {
        let acc = Accuracy::default();
        let jm = bessel_j(a - 0.5, x, &acc).unwrap();
        let jp = bessel_j(a + 1.5, x, &acc).unwrap();
        let j = bessel_j(a + 0.5, x, &acc).unwrap();
        let lhs = jm + jp;
        let rhs = 2.0 * (a + 0.5) / x * j;
        prop_assert!(
            (lhs - rhs).abs() <= 1e-8 * lhs.abs().max(1.0),
            "order {a}, argument {x}: {lhs} vs {rhs}"
        );
    }

    /// Reflection identity of the gamma evaluator off the real axis.
    #[test]
    fn gamma_reflection_identity(re in 0.1f64..0.9, im in -3.0f64..3.0) {
        let z = c(re, im);
        let lhs = gamma(z).unwrap() * gamma(c(1.0, 0.0) - z).unwrap() * (z * std::f64::consts::PI).sin();
        let pi = c(std::f64::consts::PI, 0.0);
        prop_assert!((lhs - pi).norm() <= 1e-10 * pi.norm());
    }

    /// A weight-1 gamma factor against its two half-shift images: the
    /// duplication identity fixes the ratio of the two routes to
    /// `2^{s + mu - 1} / sqrt(pi)` everywhere.
    #[test]
    fn weight_one_factor_splits_into_half_shifts(
        mu_re in 0.0f64..2.0,
        mu_im in -2.0f64..2.0,
        s_re in 0.2f64..1.5,
        s_im in -2.0f64..2.0,
    ) {
        let mu = c(mu_re, mu_im);
        let whole = GammaFactor::new(c(1.0, 0.0), 1.0, vec![(1.0, mu)]).unwrap();
        let split = GammaFactor::new(
            c(1.0, 0.0),
            1.0,
            vec![(0.5, mu * 0.5), (0.5, (mu + 1.0) * 0.5)],
        )
        .unwrap();
        let s = c(s_re, s_im);
        let ratio = whole.eval(s).unwrap() / split.eval(s).unwrap();
        let expected =
            ((s + mu - 1.0) * std::f64::consts::LN_2).exp() / std::f64::consts::PI.sqrt();
        prop_assert!(
            (ratio - expected).norm() <= 1e-9 * expected.norm(),
            "{ratio} vs {expected}"
        );
        prop_assert!((whole.degree() - split.degree()).abs() <= 1e-12);
    }
}

/// Twisting the constant-coefficient series by a character is the same
/// series the character builder produces.
#[test]
fn twisted_series_matches_the_character_builder() {
    let zeta = SelbergFunction::zeta(1000).unwrap();
    let group = CharacterGroup::new(3).unwrap();
    let chi = group
        .characters()
        .into_iter()
        .find(|ch| !ch.is_principal())
        .unwrap();
    let twisted = twist(&zeta, &chi);
    let direct = SelbergFunction::dirichlet(&chi, 1000).unwrap();
    assert_eq!(twisted.len(), 1000);
    for (i, (a, b)) in twisted.iter().zip(direct.coeffs()).enumerate() {
        assert!((a - b).norm() <= 1e-15, "coefficient {}", i + 1);
    }
}

/// The product construction produces divisor counts from two copies of the
/// constant series.
#[test]
fn product_of_two_constant_series_counts_divisors() {
    let zeta = SelbergFunction::zeta(200).unwrap();
    let squared = product(&zeta, &zeta).unwrap();
    for n in 1..=200u64 {
        let divisors = (1..=n).filter(|d| n % d == 0).count() as f64;
        let got = squared.coeff(n).unwrap();
        assert!(
            (got.re - divisors).abs() <= 1e-12 && got.im == 0.0,
            "d({n}) = {divisors}, got {got}"
        );
    }
    assert_eq!(squared.pole_order(), 2);
    assert!((squared.gamma().degree() - 2.0).abs() < 1e-12);
}

/// The cusp-form Bessel series and the cusp-form Dirichlet series realize
/// the same normalized coefficients.
#[test]
fn bessel_series_and_dirichlet_series_share_coefficients() {
    let params = GL2Params::delta(256).unwrap();
    let f = SelbergFunction::ramanujan_delta(256).unwrap();
    assert_eq!(params.coefficients().len(), 256);
    for n in 1..=256u64 {
        let a = params.coefficients()[(n - 1) as usize];
        let b = f.coeff(n).unwrap();
        assert!((a - b).norm() == 0.0, "coefficient {n}");
    }
    assert_eq!(params.alpha(), 5.5);
    assert_eq!(params.beta(), c(0.5, 0.0));
}

/// Gamma-factor poles force zeros at the even negative integers for the
/// classical degree-1 data; the window includes `s = 0`, whose candidate
/// zero must be eaten by the reflected image of the pole at `s = 1`.
#[test]
fn forced_zeros_of_the_classical_data() {
    let zeta = SelbergFunction::zeta(16).unwrap();
    let zeros = trivial_zeros(zeta.gamma(), zeta.pole_order(), (-10.5, 0.5));
    let locations: Vec<f64> = zeros.iter().map(|(z, _)| z.re).collect();
    assert_eq!(zeros.len(), 5, "{locations:?}");
    for (k, (z, mult)) in zeros.iter().enumerate() {
        assert!((z.re - (2.0 * k as f64 - 10.0)).abs() < 1e-12, "{locations:?}");
        assert!(z.im.abs() < 1e-12);
        assert_eq!(*mult, 1);
    }
}

/// Every built-in function clears its own axioms audit.
#[test]
fn builtins_pass_the_axioms_audit() {
    let zeta = SelbergFunction::zeta(5000).unwrap();
    assert!(axiom_audit(&zeta, 5000, 100).passed);

    let delta = SelbergFunction::ramanujan_delta(5000).unwrap();
    assert!(axiom_audit(&delta, 5000, 100).passed);

    for q in [3u64, 4, 5, 7] {
        let group = CharacterGroup::new(q).unwrap();
        for chi in group.characters() {
            if chi.is_principal() || !chi.is_primitive() {
                continue;
            }
            let f = SelbergFunction::dirichlet(&chi, 5000).unwrap();
            let audit = axiom_audit(&f, 5000, 100);
            assert!(audit.passed, "character mod {q}: {audit:?}");
        }
    }
}
