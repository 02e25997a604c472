//! Generic Nikiforov-Uvarov machinery for hypergeometric-type ODEs
//! psi'' + (tau~/sigma) psi' + (sigma~/sigma^2) psi = 0:
//! branch construction, quantization, Pearson weights and the Rodrigues
//! calculus, plus a numerical quantization path that re-derives the
//! spectrum without the closed-form energy expression.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::potential::PotentialParams;

/// Sign choice in front of the square root of the branch construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SqrtSign {
    Plus,
    Minus,
}

impl std::fmt::Display for SqrtSign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SqrtSign::Plus => write!(f, "+"),
            SqrtSign::Minus => write!(f, "-"),
        }
    }
}

/// The polynomial triple defining the reduced equation.
#[derive(Debug, Clone, PartialEq)]
pub struct HypergeometricODE {
    pub sigma: Poly,
    pub sigma_tilde: Poly,
    pub tau_tilde: Poly,
}

impl HypergeometricODE {
    pub fn new(sigma: Poly, sigma_tilde: Poly, tau_tilde: Poly) -> Result<Self> {
        if sigma.is_zero() {
            return Err(Error::InvalidConfig("sigma must not be zero".into()));
        }
        if sigma.degree() > 2 || sigma_tilde.degree() > 2 || tau_tilde.degree() > 1 {
            return Err(Error::InvalidConfig(
                "degrees must satisfy deg sigma <= 2, deg sigma~ <= 2, deg tau~ <= 1".into(),
            ));
        }
        Ok(HypergeometricODE { sigma, sigma_tilde, tau_tilde })
    }
}

/// One (k, pi) branch with its tau = tau~ + 2 pi.
#[derive(Debug, Clone, PartialEq)]
pub struct NUBranch {
    pub k: f64,
    pub pi: Poly,
    pub tau: Poly,
    pub sqrt_sign: SqrtSign,
}

/// Dimensionless auxiliary symbols of the combined potential.
struct Betas {
    beta: [f64; 6],
    xi: f64,
}

fn betas(p: &PotentialParams, e: f64) -> Betas {
    let s = 4.0 * p.alpha * p.alpha;
    Betas {
        beta: [p.v1 / s, p.v2 / s, p.v3 / s, p.v4 / s, p.v5 / s, p.v6 / s],
        xi: -e / s,
    }
}

/// Reduced equation of the combined potential at trial energy E:
/// tau~ = 1 - qz, sigma = z - qz^2, and sigma~ built from the three
/// bracketed beta-combinations.
pub fn make_ode(p: &PotentialParams, e: f64) -> HypergeometricODE {
    let q = p.q;
    let Betas { beta, xi } = betas(p, e);
    let b36 = beta[2] + beta[5];
    let c0 = beta[3] - xi;
    let c1 = -beta[0] - 4.0 * b36 - 2.0 * q * beta[4] + 2.0 * q * xi;
    let c2 = q * beta[0] - beta[1] - q * q * (beta[3] + beta[4] + xi);
    HypergeometricODE {
        sigma: Poly::new(vec![0.0, 1.0, -q]),
        sigma_tilde: Poly::new(vec![c0, c1, c2]),
        tau_tilde: Poly::new(vec![1.0, -q]),
    }
}

// Stable real roots of A k^2 + B k + C = 0; degenerate A handled linearly.
fn solve_k(a: f64, b: f64, c: f64) -> Result<Vec<f64>> {
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale == 0.0 {
        // Every k keeps the radicand a perfect square; nothing to enumerate.
        return Err(Error::NoRealK);
    }
    if a.abs() <= 1e-14 * scale {
        if b.abs() <= 1e-14 * scale {
            return Err(Error::NoRealK);
        }
        return Ok(vec![-c / b]);
    }
    let disc = b * b - 4.0 * a * c;
    let tol = 1e-12 * (b * b).max((4.0 * a * c).abs());
    if disc < -tol {
        return Err(Error::NoRealK);
    }
    let d = disc.max(0.0).sqrt();
    let q = -0.5 * (b + b.signum() * d);
    let (k1, k2) = if q == 0.0 {
        (0.0, 0.0)
    } else {
        (q / a, c / q)
    };
    let mut ks = vec![k1.min(k2), k1.max(k2)];
    if (ks[1] - ks[0]).abs() <= 1e-12 * ks[1].abs().max(1.0) {
        ks.truncate(1);
    }
    Ok(ks)
}

/// All (k, +-) branches obtained by forcing the radicand of the pi
/// construction to be a perfect square (discriminant = 0, a quadratic in k).
pub fn pi_branches(ode: &HypergeometricODE) -> Result<Vec<NUBranch>> {
    // base = (sigma' - tau~)/2; radicand R = base^2 - sigma~ + k sigma.
    let base = ode.sigma.derivative().sub(&ode.tau_tilde).scale(0.5);
    let u = base.mul(&base).sub(&ode.sigma_tilde);
    let s = &ode.sigma;
    let (u0, u1, u2) = (u.coeff(0), u.coeff(1), u.coeff(2));
    let (s0, s1, s2) = (s.coeff(0), s.coeff(1), s.coeff(2));

    let a_k = s1 * s1 - 4.0 * s2 * s0;
    let b_k = 2.0 * u1 * s1 - 4.0 * (u2 * s0 + u0 * s2);
    let c_k = u1 * u1 - 4.0 * u2 * u0;
    let ks = solve_k(a_k, b_k, c_k)?;

    let mut out = Vec::with_capacity(2 * ks.len());
    for k in ks {
        let r2 = u2 + k * s2;
        let r1 = u1 + k * s1;
        let r0 = u0 + k * s0;
        let scale = r2.abs().max(r1.abs()).max(r0.abs()).max(1e-300);
        // Perfect square root polynomial A z + B.
        let (root_a, root_b) = if r2.abs() > 1e-12 * scale {
            let a = r2.max(0.0).sqrt();
            (a, r1 / (2.0 * a))
        } else {
            (0.0, r0.max(0.0).sqrt())
        };
        let root = Poly::new(vec![root_b, root_a]);
        for sign in [SqrtSign::Minus, SqrtSign::Plus] {
            let pi = match sign {
                SqrtSign::Minus => base.sub(&root),
                SqrtSign::Plus => base.add(&root),
            };
            let tau = ode.tau_tilde.add(&pi.scale(2.0));
            out.push(NUBranch { k, pi, tau, sqrt_sign: sign });
        }
    }
    Ok(out)
}

/// Residual measuring how far the radicand is from a perfect square for a
/// given branch (its discriminant relative to the leading coefficient).
pub fn square_residual(ode: &HypergeometricODE, branch: &NUBranch) -> f64 {
    let base = ode.sigma.derivative().sub(&ode.tau_tilde).scale(0.5);
    let u = base.mul(&base).sub(&ode.sigma_tilde);
    let r = u.add(&ode.sigma.scale(branch.k));
    let (r0, r1, r2) = (r.coeff(0), r.coeff(1), r.coeff(2));
    let disc = r1 * r1 - 4.0 * r2 * r0;
    let scale = (r1 * r1).max((4.0 * r2 * r0).abs()).max(1e-300);
    disc.abs() / scale
}

/// Admissible-branch selection: tau' < 0, preferring a tau-root inside the
/// given support interval, then smallest k, then the minus sign.
pub fn select_branch(branches: &[NUBranch], support: Option<(f64, f64)>) -> Result<NUBranch> {
    let mut candidates: Vec<&NUBranch> =
        branches.iter().filter(|b| b.tau.coeff(1) < 0.0).collect();
    if candidates.is_empty() {
        return Err(Error::NoAdmissibleBranch);
    }
    if let Some((lo, hi)) = support {
        let inside: Vec<&NUBranch> = candidates
            .iter()
            .copied()
            .filter(|b| {
                let t1 = b.tau.coeff(1);
                if t1 == 0.0 {
                    return false;
                }
                let root = -b.tau.coeff(0) / t1;
                root > lo && root < hi
            })
            .collect();
        if !inside.is_empty() {
            candidates = inside;
        }
    }
    candidates.sort_by(|a, b| {
        a.k.partial_cmp(&b.k)
            .unwrap()
            .then_with(|| match (a.sqrt_sign, b.sqrt_sign) {
                (SqrtSign::Minus, SqrtSign::Plus) => std::cmp::Ordering::Less,
                (SqrtSign::Plus, SqrtSign::Minus) => std::cmp::Ordering::Greater,
                _ => std::cmp::Ordering::Equal,
            })
    });
    Ok(candidates[0].clone())
}

/// lambda = k + pi'.
pub fn lambda_of(branch: &NUBranch) -> f64 {
    branch.k + branch.pi.derivative().coeff(0)
}

/// lambda_n = -n tau' - n(n-1)/2 sigma''.
pub fn lambda_n(branch: &NUBranch, sigma: &Poly, n: u32) -> f64 {
    let nf = n as f64;
    -nf * branch.tau.coeff(1) - nf * (nf - 1.0) * sigma.coeff(2)
}

/// Function family P(z) z^a (1-qz)^b, closed under differentiation.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentForm {
    pub poly: Poly,
    pub a: f64,
    pub b: f64,
    pub q: f64,
}

impl ExponentForm {
    pub fn eval(&self, z: f64) -> f64 {
        self.poly.eval(z) * z.powf(self.a) * (1.0 - self.q * z).powf(self.b)
    }

    /// d/dz [P z^a (1-qz)^b] = [P' z(1-qz) + P (a(1-qz) - qbz)] z^{a-1} (1-qz)^{b-1}
    pub fn derivative(&self) -> ExponentForm {
        let zfac = Poly::new(vec![0.0, 1.0, -self.q]);
        let lin = Poly::new(vec![self.a, -self.q * (self.a + self.b)]);
        ExponentForm {
            poly: self.poly.derivative().mul(&zfac).add(&self.poly.mul(&lin)),
            a: self.a - 1.0,
            b: self.b - 1.0,
            q: self.q,
        }
    }
}

// sigma must be s1 (z - q z^2); returns (s1, q).
fn sigma_structure(sigma: &Poly) -> Result<(f64, f64)> {
    let s1 = sigma.coeff(1);
    let s2 = sigma.coeff(2);
    let scale = sigma.max_abs_coeff();
    if sigma.coeff(0).abs() > 1e-14 * scale || s1 == 0.0 || s2 == 0.0 {
        return Err(Error::UnsupportedSigma);
    }
    Ok((s1, -s2 / s1))
}

/// Weight exponents (A, B) with rho = z^A (1-qz)^B solving the Pearson
/// equation (sigma rho)' = tau rho exactly.
pub fn pearson_weight(branch: &NUBranch, sigma: &Poly) -> Result<ExponentForm> {
    let (s1, q) = sigma_structure(sigma)?;
    let diff = branch.tau.sub(&sigma.derivative());
    let a = diff.eval(0.0) / s1;
    let b = -diff.eval(1.0 / q) / s1;
    Ok(ExponentForm { poly: Poly::one(), a, b, q })
}

/// True when the weight is integrable on the mapped interval (a classical
/// orthogonality weight); Rodrigues output is formal otherwise.
pub fn weight_is_classical(w: &ExponentForm) -> bool {
    w.a > -1.0 && w.b > -1.0
}

/// Degree-n polynomial (1/rho) d^n/dz^n [sigma^n rho], computed exactly in
/// ExponentForm arithmetic.
pub fn rodrigues_polynomial(
    _branch: &NUBranch,
    sigma: &Poly,
    weight: &ExponentForm,
    n: u32,
) -> Result<Poly> {
    let (s1, q) = sigma_structure(sigma)?;
    let mut form = ExponentForm {
        poly: Poly::one(),
        a: weight.a + n as f64,
        b: weight.b + n as f64,
        q,
    };
    for _ in 0..n {
        form = form.derivative();
    }
    Ok(form.poly.scale(s1.powi(n as i32)))
}

/// Exponent pair (a, b) with phi = z^a (1-qz)^b solving pi/sigma = (ln phi)'.
pub fn phi_factor(branch: &NUBranch, sigma: &Poly) -> Result<ExponentForm> {
    let (s1, q) = sigma_structure(sigma)?;
    let a = branch.pi.eval(0.0) / s1;
    let b = -branch.pi.coeff(1) / (q * s1) - a;
    Ok(ExponentForm { poly: Poly::one(), a, b, q })
}

// Expected k for the requested eta sign (the branch-construction k value of
// the combined potential), used to pick the branch during quantization.
fn k_target(p: &PotentialParams, e: f64, eta: i8) -> Result<f64> {
    let q = p.q;
    let Betas { beta, xi } = betas(p, e);
    let d2 = xi - beta[3];
    if d2 < 0.0 {
        return Err(Error::NonRealDelta);
    }
    let h2 = 4.0 * beta[1] / (q * q) + 16.0 * (beta[2] + beta[5]) / q + 12.0 * beta[4] + 1.0;
    if h2 < 0.0 {
        return Err(Error::NoRealK);
    }
    let pre = 2.0 * q * (beta[3] - beta[4]) - 4.0 * (beta[2] + beta[5]) - beta[0];
    Ok(pre + eta as f64 * q * d2.sqrt() * h2.sqrt())
}

// The branch for the requested eta at trial energy e: k nearest the eta
// target, and pi(0) = +delta among the two root orientations (which of the
// canonical +- signs that is depends on the root polynomial's normalized
// leading coefficient).
fn eta_branch(p: &PotentialParams, e: f64, eta: i8) -> Result<NUBranch> {
    let kt = k_target(p, e, eta)?;
    let ode = make_ode(p, e);
    let branches = pi_branches(&ode)?;
    let delta = ((-e - p.v4) / (4.0 * p.alpha * p.alpha)).sqrt();
    let k_best = branches
        .iter()
        .map(|b| (b.k - kt).abs())
        .fold(f64::MAX, f64::min);
    branches
        .into_iter()
        .filter(|b| (b.k - kt).abs() <= k_best + 1e-9 * kt.abs().max(1.0))
        .min_by(|a, b| {
            let da = (a.pi.eval(0.0) - delta).abs();
            let db = (b.pi.eval(0.0) - delta).abs();
            da.partial_cmp(&db).unwrap()
        })
        .ok_or(Error::NoAdmissibleBranch)
}

/// Quantization residual lambda(E) - lambda_n(E) for the eta-selected branch.
pub fn quantization_residual(p: &PotentialParams, e: f64, n: u32, eta: i8) -> Result<f64> {
    let branch = eta_branch(p, e, eta)?;
    let sigma = Poly::new(vec![0.0, 1.0, -p.q]);
    Ok(lambda_of(&branch) - lambda_n(&branch, &sigma, n))
}

/// Bracketed root of the quantization condition lambda(E) = lambda_n(E),
/// the numerical path to the spectrum that never touches the closed form.
pub fn quantization_solve(
    p: &PotentialParams,
    n: u32,
    eta: i8,
    bracket: (f64, f64),
) -> Result<f64> {
    let (mut a, mut b) = bracket;
    if !(a < b) {
        return Err(Error::InvalidConfig("bracket must satisfy a < b".into()));
    }
    // delta is imaginary above -V4; the residual is undefined there.
    if -b / (4.0 * p.alpha * p.alpha) - p.v4 / (4.0 * p.alpha * p.alpha) < 0.0 {
        return Err(Error::NonRealDelta);
    }
    let mut ga = quantization_residual(p, a, n, eta)?;
    let gb = quantization_residual(p, b, n, eta)?;
    let gscale = ga.abs().max(gb.abs());
    if gscale < 1e-13 {
        // Degenerate quantization (the delta coefficient vanished):
        // the residual is identically zero and carries no root information.
        return Err(Error::NoSignChange);
    }
    if ga == 0.0 {
        return Ok(a);
    }
    if gb == 0.0 {
        return Ok(b);
    }
    if ga.signum() == gb.signum() {
        return Err(Error::NoSignChange);
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        let gm = quantization_residual(p, mid, n, eta)?;
        if gm == 0.0 || (b - a) <= 1e-15 * b.abs().max(1.0) {
            return Ok(mid);
        }
        if gm.signum() == ga.signum() {
            a = mid;
            ga = gm;
        } else {
            b = mid;
        }
        if (b - a) <= f64::EPSILON * b.abs().max(1.0) {
            break;
        }
    }
    let e = 0.5 * (a + b);
    let g = quantization_residual(p, e, n, eta)?;
    if g.abs() <= 1e-10 * gscale.max(1.0) {
        Ok(e)
    } else {
        Err(Error::NoSignChange)
    }
}
