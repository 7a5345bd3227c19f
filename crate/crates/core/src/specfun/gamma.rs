//! Complex log-gamma via the Lanczos approximation, with reflection into the
//! left half-plane.

use crate::{Complex, Error, Result};

/// Lanczos parameter `g` for the 15-coefficient set below.
const LANCZOS_G: f64 = 4.7421875; // 607/128

/// Lanczos coefficients (Godfrey's 15-term set, ~15 significant digits).
const LANCZOS_C: [f64; 15] = [
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    3.3994649984811888699e-5,
    4.6523628927048575665e-5,
    -9.8374475304879564677e-5,
    1.5808870322491248884e-4,
    -2.1026444172410488319e-4,
    2.1743961811521264320e-4,
    -1.6431810653676389022e-4,
    8.4418223983852743293e-5,
    -2.6190838401581408670e-5,
    3.6899182659531622704e-6,
];

const LN_SQRT_2PI: f64 = 0.91893853320467274178;

/// `sin(pi x)` for real `x` with exact argument reduction.
///
/// Direct `sin(PI * x)` loses accuracy once `pi * x` rounds; reducing `x`
/// modulo 2 first keeps half-integer and near-integer arguments exact.
pub fn sin_pi(x: f64) -> f64 {
    let r = x.rem_euclid(2.0); // in [0, 2)
    let (r, sign) = if r >= 1.0 { (r - 1.0, -1.0) } else { (r, 1.0) };
    // r in [0, 1); fold to [0, 1/2] where sin is best conditioned
    let v = if r > 0.5 { 1.0 - r } else { r };
    sign * (std::f64::consts::PI * v).sin()
}

/// A logarithm of `sin(pi z)`, continuous in `Im z` on each half-plane and
/// exact under exponentiation: `exp(log_sin_pi(z)) == sin(pi z)`.
///
/// Stable for large `|Im z|` where `sin(pi z)` itself overflows.
pub fn log_sin_pi(z: Complex) -> Complex {
    if z.im < 0.0 {
        return log_sin_pi(z.conj()).conj();
    }
    // Reduce the real part exactly; sin(pi(m + w)) = (-1)^m sin(pi w).
    let m = z.re.floor();
    let f = z.re - m;
    let w = Complex::new(f, z.im);
    // For Im w >= 0: sin(pi w) = (i/2) e^{-i pi w} (1 - e^{2 pi i w}),
    // and |e^{2 pi i w}| = e^{-2 pi Im w} <= 1 keeps every factor tame.
    let i = Complex::new(0.0, 1.0);
    let q = (2.0 * std::f64::consts::PI * i * w).exp();
    let mut ls = (i / 2.0).ln() - i * std::f64::consts::PI * w + (Complex::new(1.0, 0.0) - q).ln();
    if (m as i64) & 1 != 0 {
        ls += Complex::new(0.0, std::f64::consts::PI);
    }
    ls
}

/// Principal-branch `log Gamma(z)`.
///
/// Lanczos in the half-plane `Re z >= 1/2`; the reflection formula
/// `Gamma(z) Gamma(1-z) = pi / sin(pi z)` otherwise. Always exact under
/// exponentiation: `exp(log_gamma(z)) = Gamma(z)`.
///
/// # Errors
///
/// [`Error::GammaPole`] at non-positive integers.
pub fn log_gamma(z: Complex) -> Result<Complex> {
    if z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 {
        return Err(Error::GammaPole { at: z.re as i64 });
    }
    if z.re >= 0.5 {
        Ok(log_gamma_lanczos(z))
    } else {
        // log Gamma(z) = log pi - log sin(pi z) - log Gamma(1 - z)
        let refl = Complex::new(std::f64::consts::PI.ln(), 0.0)
            - log_sin_pi(z)
            - log_gamma_lanczos(Complex::new(1.0, 0.0) - z);
        Ok(refl)
    }
}

fn log_gamma_lanczos(z: Complex) -> Complex {
    // Gamma(z) = sqrt(2 pi) t^{z - 1/2} e^{-t} A(z),  t = z - 1/2 + g
    let t = z + (LANCZOS_G - 0.5);
    let mut a = Complex::new(LANCZOS_C[0], 0.0);
    for (k, &c) in LANCZOS_C.iter().enumerate().skip(1) {
        a += c / (z + (k as f64 - 1.0));
    }
    LN_SQRT_2PI + (z - 0.5) * t.ln() - t + a.ln()
}

/// `Gamma(z)` as `exp(log_gamma(z))`.
///
/// # Errors
///
/// [`Error::GammaPole`] at non-positive integers.
pub fn gamma(z: Complex) -> Result<Complex> {
    Ok(log_gamma(z)?.exp())
}
