//! Bound-state wavefunctions assembled from the z-map factorization
//! psi = |z|^delta (1-qz)^{(1-eta H)/2} P_n^{(2 delta, -eta H)}(1-2qz),
//! normalized numerically over x. The mapped variable z = -e^{-2 alpha x}
//! is negative on the real line; the constant phase of z^delta is dropped
//! (a global phase is unphysical), so sampled values are real.

use num_complex::Complex64;

use crate::closed_form::{aux_quantities, EnergyLevel};
use crate::error::{Error, Result};
use crate::potential::PotentialParams;
use crate::special::jacobi_p_ln;

/// z = -e^{-2 alpha x}, the coordinate map onto (-inf, 0). The exponent is
/// clamped so the deep x < 0 tail saturates instead of overflowing.
pub fn map_z(alpha: f64, x: f64) -> f64 {
    -(-2.0 * alpha * x).min(700.0).exp()
}

/// Exponents and Jacobi indices of one bound level.
#[derive(Debug, Clone, PartialEq)]
pub struct WavefunctionSpec {
    pub params: PotentialParams,
    pub level: EnergyLevel,
    /// z-exponent delta = sqrt(xi - beta4) at the level energy.
    pub delta: f64,
    /// (1-qz) exponent (1 - eta H)/2.
    pub exp_b: f64,
    /// Jacobi indices (2 delta, -eta H).
    pub jacobi_a: f64,
    pub jacobi_b: f64,
}

impl WavefunctionSpec {
    pub fn new(params: &PotentialParams, level: &EnergyLevel) -> Result<Self> {
        if !level.is_real() {
            return Err(Error::DomainError("level energy is not real".into()));
        }
        let aux = aux_quantities(params, level.e_real(), level.eta);
        let delta = aux
            .delta()
            .ok_or_else(|| Error::DomainError("delta imaginary at level energy".into()))?;
        let h = aux
            .h()
            .ok_or_else(|| Error::DomainError("H imaginary for these parameters".into()))?;
        let eh = level.eta as f64 * h;
        Ok(WavefunctionSpec {
            params: *params,
            level: level.clone(),
            delta,
            exp_b: 0.5 * (1.0 - eh),
            jacobi_a: 2.0 * delta,
            jacobi_b: -eh,
        })
    }

    /// Residual between the stored exponents and ones recomputed from the
    /// auxiliary quantities at the level energy.
    pub fn consistency_residual(&self) -> f64 {
        let aux = aux_quantities(&self.params, self.level.e_real(), self.level.eta);
        let delta = aux.delta().unwrap_or(f64::NAN);
        let h = aux.h().unwrap_or(f64::NAN);
        let eh = self.level.eta as f64 * h;
        (self.delta - delta)
            .abs()
            .max((self.exp_b - 0.5 * (1.0 - eh)).abs())
            .max((self.jacobi_a - 2.0 * delta).abs())
            .max((self.jacobi_b + eh).abs())
    }
}

/// A wavefunction sampled on a strictly increasing grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledWavefunction {
    pub xs: Vec<f64>,
    pub values: Vec<Complex64>,
    /// Pre-normalization integral of |psi|^2 (1.0 after normalization of a
    /// normalized input).
    pub norm: f64,
    pub nodes: usize,
}

/// Default grid for a parameter set: [-L, L] with L = 40/alpha, 8001 points
/// (about 40 decay lengths, enough for 1e-8 tail truncation).
pub fn default_grid(p: &PotentialParams) -> Vec<f64> {
    let l = 40.0 / p.alpha.abs();
    let n = 8001usize;
    (0..n)
        .map(|i| -l + 2.0 * l * i as f64 / (n - 1) as f64)
        .collect()
}

/// Unnormalized psi on the grid, evaluated in log space so the Jacobi
/// polynomial growth and the exponential prefactor decay never overflow
/// individually.
pub fn psi_raw(spec: &WavefunctionSpec, xs: &[f64]) -> Result<SampledWavefunction> {
    let p = &spec.params;
    let n = spec.level.n as usize;
    let mut values = Vec::with_capacity(xs.len());
    let mut max_abs = 0.0_f64;
    for &x in xs {
        let s = -2.0 * p.alpha * x; // ln|z|
        // ln(1 + q e^s), stable for every s.
        let ln_one_minus_qz = if s > 30.0 {
            s + p.q.ln() + (1.0 / (p.q * s.exp().min(f64::MAX))).ln_1p()
        } else {
            (p.q * s.exp()).ln_1p()
        };
        // Jacobi argument 1 - 2qz = 1 + 2 q e^s: (arg-1)/2 = q e^s,
        // (arg+1)/2 = 1 + q e^s.
        let ln_u = p.q.ln() + s;
        let ln_v = ln_one_minus_qz;
        let (mant, ln_scale) = jacobi_p_ln(n, spec.jacobi_a, spec.jacobi_b, ln_u, ln_v);
        let ln_mag = spec.delta * s + spec.exp_b * ln_one_minus_qz + ln_scale;
        let v = if mant == 0.0 {
            0.0
        } else {
            mant * ln_mag.exp()
        };
        if !v.is_finite() {
            return Err(Error::NonFiniteValue { at: x });
        }
        max_abs = max_abs.max(v.abs());
        values.push(Complex64::new(v, 0.0));
    }
    if max_abs == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let edge = values[0].norm().max(values[values.len() - 1].norm());
    if edge / max_abs > 1e-3 {
        return Err(Error::NonDecaying);
    }
    let mut w = SampledWavefunction { xs: xs.to_vec(), values, norm: 0.0, nodes: 0 };
    w.nodes = node_count(&w);
    Ok(w)
}

fn simpson_weights(n: usize) -> impl Fn(usize) -> f64 {
    move |i: usize| {
        if i == 0 || i == n - 1 {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        }
    }
}

/// Composite-Simpson integral of |psi|^2 over the grid (odd point counts;
/// an even count falls back to a trapezoid on the last interval).
pub fn norm_integral(w: &SampledWavefunction) -> f64 {
    let n = w.xs.len();
    let h = (w.xs[n - 1] - w.xs[0]) / (n - 1) as f64;
    let m = if n % 2 == 1 { n } else { n - 1 };
    let wt = simpson_weights(m);
    let mut acc = 0.0;
    for i in 0..m {
        acc += wt(i) * w.values[i].norm_sqr();
    }
    acc *= h / 3.0;
    if n.is_multiple_of(2) {
        acc += 0.5 * h * (w.values[n - 2].norm_sqr() + w.values[n - 1].norm_sqr());
    }
    acc
}

/// Rescale so the Simpson integral of |psi|^2 is one; records the
/// pre-normalization integral in `norm`.
pub fn normalize_numeric(w: &SampledWavefunction) -> Result<SampledWavefunction> {
    let integral = norm_integral(w);
    if integral < 1e-280 {
        return Err(Error::ZeroNorm);
    }
    let scale = 1.0 / integral.sqrt();
    let values = w.values.iter().map(|v| v * scale).collect();
    let mut out = SampledWavefunction { xs: w.xs.clone(), values, norm: integral, nodes: 0 };
    out.nodes = node_count(&out);
    Ok(out)
}

/// Strict sign changes of the real part, skipping samples below 1e-9.
pub fn node_count(w: &SampledWavefunction) -> usize {
    let mut nodes = 0;
    let mut last: Option<f64> = None;
    for v in &w.values {
        let r = v.re;
        if r.abs() < 1e-9 {
            continue;
        }
        if let Some(prev) = last {
            if (prev < 0.0) != (r < 0.0) {
                nodes += 1;
            }
        }
        last = Some(r);
    }
    nodes
}

/// Simpson inner product <a, b> = int conj(a) b dx (shared grid).
pub fn inner_product(a: &SampledWavefunction, b: &SampledWavefunction) -> Result<f64> {
    if a.xs.len() != b.xs.len() || a.xs != b.xs {
        return Err(Error::GridMismatch);
    }
    let n = a.xs.len();
    let h = (a.xs[n - 1] - a.xs[0]) / (n - 1) as f64;
    let m = if n % 2 == 1 { n } else { n - 1 };
    let wt = simpson_weights(m);
    let mut acc = 0.0;
    for i in 0..m {
        acc += wt(i) * (a.values[i].conj() * b.values[i]).re;
    }
    acc *= h / 3.0;
    if n.is_multiple_of(2) {
        acc += 0.5
            * h
            * ((a.values[n - 2].conj() * b.values[n - 2]).re
                + (a.values[n - 1].conj() * b.values[n - 1]).re);
    }
    Ok(acc)
}

/// Gram matrix of Simpson inner products.
pub fn orthogonality_matrix(ws: &[SampledWavefunction]) -> Result<Vec<Vec<f64>>> {
    let mut g = vec![vec![0.0; ws.len()]; ws.len()];
    for i in 0..ws.len() {
        for j in 0..ws.len() {
            g[i][j] = inner_product(&ws[i], &ws[j])?;
        }
    }
    Ok(g)
}

/// Normalization constant sqrt(B/A) from the displayed gamma-sum and 2F1
/// expressions, evaluated verbatim. Comparison-only: the convergence domain
/// restricts it to q < 1, and the gamma arguments must all be positive.
pub fn paper_norm_constant(spec: &WavefunctionSpec, p_index: u32, r_index: u32) -> Result<f64> {
    use crate::special::{gauss_2f1, ln_gamma};
    let p = &spec.params;
    if p.q >= 1.0 {
        return Err(Error::ConvergenceDomainError);
    }
    let n = spec.level.n;
    if p_index > n || r_index > n {
        return Err(Error::DomainError("p and r must not exceed n".into()));
    }
    let nf = n as f64;
    let pf = p_index as f64;
    let rf = r_index as f64;
    let c = spec.delta;
    let d = 0.5 * spec.jacobi_b; // -eta H / 2
    let ln_fact = |k: u32| -> Result<f64> { ln_gamma(k as f64 + 1.0) };

    // Prefactor gammas.
    let args = [
        nf + 2.0 * c + 1.0,
        nf + 2.0 * d + 1.0,
        nf + 2.0 * c - pf + 1.0,
        rf + 2.0 * d + 1.0,
        2.0 * c + 2.0 * d + 1.0,
    ];
    for &g in &args {
        if g <= 0.0 {
            return Err(Error::DomainError(format!("gamma argument {g} <= 0")));
        }
    }
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let ln_pref = 2.0 * ln_gamma(args[0])? + ln_gamma(args[1])?
        - ln_gamma(args[2])?
        - ln_gamma(args[3])?
        - ln_gamma(args[4])?;

    // Sum over the display's own dummy index.
    let mut acc = 0.0;
    for p2 in 0..=n {
        let p2f = p2 as f64;
        let g1 = nf + 2.0 * c + 2.0 * d + rf + 1.0;
        let g2 = p2f + 2.0 * d + 1.0;
        if g1 <= 0.0 || g2 <= 0.0 {
            return Err(Error::DomainError(format!(
                "gamma argument {} <= 0 in sum",
                g1.min(g2)
            )));
        }
        let ln_term = (nf - p2f + rf) * p.q.ln() + ln_gamma(g1)?
            - ln_fact(p2)?
            - ln_fact(r_index)?
            - ln_fact(n - p2)?
            - ln_fact(n - r_index)?
            - ln_gamma(g2)?;
        let s = if (p2 + r_index).is_multiple_of(2) { 1.0 } else { -1.0 };
        acc += s * ln_term.exp();
    }
    let a_nq = sign * ln_pref.exp() * acc;

    // (B)^{-1} = 2F1(a', eta H - 1 - p; a'; q) / a' with a' = n + r - p + 2 delta + 1.
    let a_par = nf + rf - pf + 2.0 * c + 1.0;
    if a_par <= 0.0 {
        return Err(Error::DomainError("2F1 parameter a' <= 0".into()));
    }
    let eh = -spec.jacobi_b; // eta H
    let inv_b = gauss_2f1(a_par, eh - 1.0 - pf, a_par, p.q)? / a_par;
    if inv_b == 0.0 {
        return Err(Error::DomainError("B diverged".into()));
    }
    let ratio = (1.0 / inv_b) / a_nq;
    if ratio <= 0.0 || !ratio.is_finite() {
        return Err(Error::DomainError(format!("B/A = {ratio} not positive")));
    }
    Ok(ratio.sqrt())
}
