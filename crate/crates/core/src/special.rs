//! Self-contained special-function kernels: ln-gamma, Gauss hypergeometric
//! 2F1, and Jacobi polynomials.

use crate::error::{Error, Result};

// Lanczos approximation, g = 607/128, 14 coefficients (Numerical Recipes
// gammln). Relative accuracy ~1e-15 over the positive axis.
const LANCZOS_G: f64 = 5.242_187_5;
const LANCZOS_COEFFS: [f64; 14] = [
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    3.399_464_998_481_189e-5,
    4.652_362_892_704_858e-5,
    -9.837_447_530_487_956e-5,
    1.580_887_032_249_125e-4,
    -2.102_644_417_241_048_8e-4,
    2.174_396_181_152_126_5e-4,
    -1.643_181_065_367_639e-4,
    8.441_822_398_385_275e-5,
    -2.619_083_840_158_140_8e-5,
    3.689_918_265_953_162_5e-6,
];
const LANCZOS_SER0: f64 = 0.999_999_999_999_997_1;
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// Natural log of the gamma function for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::DomainError(format!("ln_gamma requires x > 0, got {x}")));
    }
    let tmp = x + LANCZOS_G;
    let tmp = (x + 0.5) * tmp.ln() - tmp;
    let mut ser = LANCZOS_SER0;
    let mut y = x;
    for c in LANCZOS_COEFFS {
        y += 1.0;
        ser += c / y;
    }
    Ok(tmp + (SQRT_2PI * ser / x).ln())
}

/// Gamma function for x > 0 via exp(ln_gamma).
pub fn gamma(x: f64) -> Result<f64> {
    ln_gamma(x).map(f64::exp)
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 1e-12 && (x - x.round()).abs() < 1e-12
}

/// Gauss hypergeometric 2F1(a, b; c; z) on the principal convergence domain:
/// |z| < 1, or z = 1 with c - a - b > 0 (Gauss summation). No analytic
/// continuation is attempted; outside that domain the evaluation is rejected
/// with ConvergenceDomainError.
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if is_nonpositive_integer(c) {
        return Err(Error::DomainError(format!(
            "2F1 undefined for non-positive integer c = {c}"
        )));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    if z == 1.0 {
        let s = c - a - b;
        if s <= 0.0 {
            return Err(Error::ConvergenceDomainError);
        }
        // Gauss summation; restrict to positive gamma arguments.
        for g in [c, s, c - a, c - b] {
            if g <= 0.0 {
                return Err(Error::DomainError(format!(
                    "Gauss summation needs positive gamma arguments, got {g}"
                )));
            }
        }
        let v = ln_gamma(c)? + ln_gamma(s)? - ln_gamma(c - a)? - ln_gamma(c - b)?;
        return Ok(v.exp());
    }
    // Series domain: stay clear of the |z| = 1 boundary where the plain
    // series cannot reach 1e-12 in bounded time.
    if z.abs() >= 1.0 - 1e-4 {
        return Err(Error::ConvergenceDomainError);
    }

    // Power series with a geometric tail bound from the term ratio.
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut comp = 0.0_f64; // Kahan compensation
    let zabs = z.abs();
    for k in 0..200_000u64 {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) * z / ((c + kf) * (1.0 + kf));
        if term == 0.0 {
            return Ok(sum); // terminating (polynomial) case
        }
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        // Once the ratio has settled near |z|, bound the tail geometrically.
        let ratio_bound = zabs * (1.0 + (a.abs() + b.abs()) / (kf + 1.0));
        if ratio_bound < 1.0 {
            let tail = term.abs() * ratio_bound / (1.0 - ratio_bound);
            if tail < 1e-14 * sum.abs().max(1.0) {
                return Ok(sum);
            }
        }
    }
    Err(Error::ConvergenceDomainError)
}

/// Generalized binomial coefficient C(t, k) for real t and integer k >= 0.
fn binomial_general(t: f64, k: usize) -> f64 {
    let mut num = 1.0;
    for j in 0..k {
        num *= t - j as f64;
    }
    let mut den = 1.0;
    for j in 1..=k {
        den *= j as f64;
    }
    num / den
}

/// Jacobi polynomial P_n^{(a,b)}(x) via the explicit finite sum.
///
/// Works for arbitrary real a, b (including the degenerate negative-integer
/// combinations where the three-term recurrence divides by zero), at the cost
/// of some cancellation for x inside (-1, 1).
fn jacobi_sum(n: usize, a: f64, b: f64, x: f64) -> f64 {
    let u = 0.5 * (x - 1.0);
    let v = 0.5 * (x + 1.0);
    let mut acc = 0.0;
    for s in 0..=n {
        let c = binomial_general(n as f64 + a, n - s) * binomial_general(n as f64 + b, s);
        acc += c * u.powi(s as i32) * v.powi((n - s) as i32);
    }
    acc
}

/// Jacobi polynomial P_n^{(a,b)}(x) by the three-term recurrence, falling
/// back to the finite sum when a recurrence denominator degenerates.
pub fn jacobi_p(n: usize, a: f64, b: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let p1 = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    if n == 1 {
        return p1;
    }
    let mut pm2 = 1.0;
    let mut pm1 = p1;
    for k in 2..=n {
        let kf = k as f64;
        let den = 2.0 * kf * (kf + a + b) * (2.0 * kf + a + b - 2.0);
        if den.abs() < 1e-10 {
            return jacobi_sum(n, a, b, x);
        }
        let c1 = 2.0 * kf + a + b - 1.0;
        let c2 = (2.0 * kf + a + b) * (2.0 * kf + a + b - 2.0);
        let c3 = a * a - b * b;
        let c4 = 2.0 * (kf + a - 1.0) * (kf + b - 1.0) * (2.0 * kf + a + b);
        let p = (c1 * (c2 * x + c3) * pm1 - c4 * pm2) / den;
        pm2 = pm1;
        pm1 = p;
    }
    pm1
}

/// Jacobi polynomial evaluated from the logarithms of (x-1)/2 and (x+1)/2,
/// for arguments far outside [-1, 1] where the plain value overflows.
///
/// Returns (mantissa, ln_scale) with value = mantissa * exp(ln_scale).
/// Both log inputs must correspond to non-negative bases (x >= 1), which is
/// the regime the bound-state map z <= 0 produces.
pub fn jacobi_p_ln(n: usize, a: f64, b: f64, ln_u: f64, ln_v: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    // term_s = C(n+a, n-s) C(n+b, s) u^s v^{n-s}
    let mut ln_mag = Vec::with_capacity(n + 1);
    let mut signs = Vec::with_capacity(n + 1);
    for s in 0..=n {
        let c = binomial_general(n as f64 + a, n - s) * binomial_general(n as f64 + b, s);
        if c == 0.0 {
            ln_mag.push(f64::NEG_INFINITY);
            signs.push(1.0);
            continue;
        }
        ln_mag.push(c.abs().ln() + s as f64 * ln_u + (n - s) as f64 * ln_v);
        signs.push(c.signum());
    }
    let m = ln_mag.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return (0.0, 0.0);
    }
    let mut acc = 0.0;
    for (lm, sg) in ln_mag.iter().zip(&signs) {
        acc += sg * (lm - m).exp();
    }
    (acc, m)
}
