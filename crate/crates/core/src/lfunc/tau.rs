//! Exact Fourier coefficients of the weight-12 cusp form.
//!
//! The product `q Π_{n≥1} (1 - q^n)^{24}` is expanded exactly over the
//! integers: the cube of the Euler product is the sparse alternating series
//! `Σ_{k≥0} (-1)^k (2k+1) q^{k(k+1)/2}`, its square gives the 6th power
//! densely, and two further squarings (12th, 24th power) run as cyclic
//! convolutions modulo two 62/63-bit primes with 2-adic roots of unity,
//! glued by a centered Chinese-remainder lift.  All arithmetic is exact:
//! the coefficient magnitudes stay far below half the prime product for
//! every supported truncation length.
//!
//! A quadratic-time direct convolution over `i128` is provided as an
//! independent reference route for cross-checking small prefixes.

use crate::{Error, Result};

/// First working prime `29·2^57 + 1` with primitive root 3.
const P1: u64 = 4_179_340_454_199_820_289;
/// Second working prime `27·2^56 + 1` with primitive root 5.
const P2: u64 = 1_945_555_039_024_054_273;
const ROOT1: u64 = 3;
const ROOT2: u64 = 5;

/// Largest supported `n`: keeps `max |tau(n)|` comfortably below half of
/// `P1·P2 ≈ 8.1e36` (centered residue range).
pub const MAX_TAU_N: usize = 1_500_000;

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

/// In-place iterative radix-2 transform over Z/p.  `root_of_len` must be a
/// primitive `len`-th root of unity mod `p`.
fn ntt(values: &mut [u64], p: u64, root_of_len: u64) {
    let n = values.len();
    debug_assert!(n.is_power_of_two());
    // bit-reversal permutation
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            values.swap(i, j);
        }
    }
    let mut len = 2usize;
    while len <= n {
        let w_len = powmod(root_of_len, (n / len) as u64, p);
        for start in (0..n).step_by(len) {
            let mut w = 1u64;
            for k in 0..len / 2 {
                let u = values[start + k];
                let v = mulmod(values[start + k + len / 2], w, p);
                values[start + k] = if u + v >= p { u + v - p } else { u + v };
                values[start + k + len / 2] = if u >= v { u - v } else { u + p - v };
                w = mulmod(w, w_len, p);
            }
        }
        len <<= 1;
    }
}

/// Squares the polynomial with the given mod-`p` coefficients, returning
/// the first `keep` coefficients of the square.
fn square_mod(coeffs: &[i128], keep: usize, p: u64, primitive_root: u64) -> Vec<u64> {
    let need = 2 * coeffs.len() - 1;
    let n = need.next_power_of_two();
    let mut a: Vec<u64> = Vec::with_capacity(n);
    for &c in coeffs {
        let r = (c % p as i128 + p as i128) % p as i128;
        a.push(r as u64);
    }
    a.resize(n, 0);
    let root = powmod(primitive_root, (p - 1) / n as u64, p);
    ntt(&mut a, p, root);
    for v in a.iter_mut() {
        *v = mulmod(*v, *v, p);
    }
    let root_inv = invmod(root, p);
    ntt(&mut a, p, root_inv);
    let n_inv = invmod(n as u64, p);
    a.truncate(keep);
    for v in a.iter_mut() {
        *v = mulmod(*v, n_inv, p);
    }
    a
}

/// Centered two-prime reconstruction of signed integers from residues.
fn crt_centered(r1: &[u64], r2: &[u64]) -> Vec<i128> {
    let p1p2: u128 = P1 as u128 * P2 as u128;
    let half = p1p2 / 2;
    let p1_inv_mod_p2 = invmod(P1 % P2, P2);
    r1.iter()
        .zip(r2)
        .map(|(&a, &b)| {
            // x = a + P1 * ((b - a) * P1^{-1} mod P2)
            let a_mod_p2 = a % P2;
            let diff = if b >= a_mod_p2 { b - a_mod_p2 } else { b + P2 - a_mod_p2 };
            let k = mulmod(diff, p1_inv_mod_p2, P2);
            let x = a as u128 + P1 as u128 * k as u128;
            if x > half {
                -((p1p2 - x) as i128)
            } else {
                x as i128
            }
        })
        .collect()
}

/// Exact squaring of an integer polynomial (truncated), via the two-prime
/// transform route.
fn square_exact(coeffs: &[i128], keep: usize) -> Vec<i128> {
    let s1 = square_mod(coeffs, keep, P1, ROOT1);
    let s2 = square_mod(coeffs, keep, P2, ROOT2);
    crt_centered(&s1, &s2)
}

/// Coefficients of `Π (1 - q^n)^3` through degree `deg`: the sparse series
/// `Σ_{k≥0} (-1)^k (2k+1) q^{k(k+1)/2}`.
fn euler_cube(deg: usize) -> Vec<(usize, i64)> {
    let mut out = Vec::new();
    let mut k = 0usize;
    loop {
        let e = k * (k + 1) / 2;
        if e > deg {
            break;
        }
        let c = (2 * k + 1) as i64;
        out.push((e, if k % 2 == 0 { c } else { -c }));
        k += 1;
    }
    out
}

/// Dense coefficients of `Π (1 - q^n)^6` through degree `deg`, from the
/// sparse cube squared directly (quadratically many products of a sparse
/// list — cheap).
fn euler_sixth(deg: usize) -> Vec<i128> {
    let cube = euler_cube(deg);
    let mut out = vec![0i128; deg + 1];
    for (i, &(e1, c1)) in cube.iter().enumerate() {
        // diagonal term
        if 2 * e1 <= deg {
            out[2 * e1] += (c1 as i128) * (c1 as i128);
        }
        for &(e2, c2) in &cube[i + 1..] {
            let e = e1 + e2;
            if e > deg {
                break;
            }
            out[e] += 2 * (c1 as i128) * (c2 as i128);
        }
    }
    out
}

/// Exact `tau(1..=n)` through the transform route.
pub fn tau_exact(n: usize) -> Result<Vec<i128>> {
    if n == 0 || n > MAX_TAU_N {
        return Err(Error::InvalidInput {
            what: "tau_exact",
            detail: format!("n = {n} outside 1..={MAX_TAU_N}"),
        });
    }
    let deg = n - 1; // tau(m) is the degree m-1 coefficient of the 24th power
    let e6 = euler_sixth(deg);
    let e12 = square_exact(&e6, deg + 1);
    let e24 = square_exact(&e12, deg + 1);
    Ok(e24)
}

/// Exact `tau(1..=n)` through direct quadratic convolution — an
/// independent reference for cross-checking the transform route.
pub fn tau_exact_direct(n: usize) -> Result<Vec<i128>> {
    const DIRECT_CAP: usize = 8192;
    if n == 0 || n > DIRECT_CAP {
        return Err(Error::InvalidInput {
            what: "tau_exact_direct",
            detail: format!("n = {n} outside 1..={DIRECT_CAP}"),
        });
    }
    let deg = n - 1;
    let e6 = euler_sixth(deg);
    let square_direct = |c: &[i128]| -> Vec<i128> {
        let mut out = vec![0i128; deg + 1];
        for i in 0..=deg {
            if c[i] == 0 {
                continue;
            }
            // diagonal
            if 2 * i <= deg {
                out[2 * i] += c[i] * c[i];
            }
            for j in i + 1..=deg.saturating_sub(i) {
                if i + j > deg {
                    break;
                }
                out[i + j] += 2 * c[i] * c[j];
            }
        }
        out
    };
    let e12 = square_direct(&e6);
    let e24 = square_direct(&e12);
    Ok(e24)
}

/// `tau(m) / m^{11/2}` for `m = 1..=n`.
pub fn tau_normalized(n: usize) -> Result<Vec<f64>> {
    let exact = tau_exact(n)?;
    Ok(exact
        .iter()
        .enumerate()
        .map(|(i, &t)| t as f64 / ((i + 1) as f64).powf(5.5))
        .collect())
}
