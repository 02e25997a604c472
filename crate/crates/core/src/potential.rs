//! The q-deformed potential family: real evaluation, complexified (PT and
//! non-PT) evaluation, asymptotics, and the PT-symmetry check.
//!
//! Two sign conventions coexist in this family and both are exposed:
//!
//! * [`potential_value`] evaluates the displayed six-term form verbatim
//!   (all well depths entering with their displayed signs).
//! * [`nu_potential_value`] evaluates the form the closed-form spectrum
//!   actually solves: V1, V3+V6 and V4 terms negated, the V5 term positive,
//!   plus a `-V5/(1+q e^{-2ax})^2` correction. The eigensolvers cross-check
//!   against this one; the two agree when the corresponding depths vanish.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Deformed hyperbolic function selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeformedKind {
    SinhQ,
    CoshQ,
    TanhQ,
    SechQ,
    CosechQ,
    CothQ,
}

const POLE_TOL: f64 = 1e-14;

/// q-deformed hyperbolic function: sinh_q x = (e^x - q e^{-x})/2,
/// cosh_q x = (e^x + q e^{-x})/2, and the four ratios derived from them.
/// At q = 1 these are the standard functions.
pub fn deformed_hyperbolic(kind: DeformedKind, q: f64, x: f64) -> Result<f64> {
    let sinh_q = |x: f64| 0.5 * (x.exp() - q * (-x).exp());
    let cosh_q = |x: f64| 0.5 * (x.exp() + q * (-x).exp());
    match kind {
        DeformedKind::SinhQ => Ok(sinh_q(x)),
        DeformedKind::CoshQ => Ok(cosh_q(x)),
        DeformedKind::TanhQ => {
            let c = cosh_q(x);
            if c.abs() < POLE_TOL {
                return Err(Error::Pole { at: x });
            }
            Ok(sinh_q(x) / c)
        }
        DeformedKind::SechQ => {
            let c = cosh_q(x);
            if c.abs() < POLE_TOL {
                return Err(Error::Pole { at: x });
            }
            Ok(1.0 / c)
        }
        DeformedKind::CosechQ => {
            let s = sinh_q(x);
            if s.abs() < POLE_TOL {
                return Err(Error::Pole { at: x });
            }
            Ok(1.0 / s)
        }
        DeformedKind::CothQ => {
            let s = sinh_q(x);
            if s.abs() < POLE_TOL {
                return Err(Error::Pole { at: x });
            }
            Ok(cosh_q(x) / s)
        }
    }
}

/// Well depths V1..V6, deformation q and inverse range alpha
/// (units hbar = 2 mu = 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialParams {
    pub v1: f64,
    pub v2: f64,
    pub v3: f64,
    pub v4: f64,
    pub v5: f64,
    pub v6: f64,
    pub q: f64,
    pub alpha: f64,
}

impl PotentialParams {
    pub fn new(v: [f64; 6], q: f64, alpha: f64) -> Result<Self> {
        let p = PotentialParams {
            v1: v[0],
            v2: v[1],
            v3: v[2],
            v4: v[3],
            v5: v[4],
            v6: v[5],
            q,
            alpha,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.alpha == 0.0 || !self.alpha.is_finite() {
            return Err(Error::InvalidConfig("alpha must be nonzero".into()));
        }
        if self.q == 0.0 || !self.q.is_finite() {
            return Err(Error::InvalidConfig("q must be nonzero".into()));
        }
        for (i, v) in self.wells().iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::InvalidConfig(format!("V{} must be finite", i + 1)));
            }
        }
        Ok(())
    }

    pub fn wells(&self) -> [f64; 6] {
        [self.v1, self.v2, self.v3, self.v4, self.v5, self.v6]
    }

    /// True when q lies outside the stated q >= 1 validity domain
    /// (still evaluable; callers surface it as a warning).
    pub fn outside_stated_q_domain(&self) -> bool {
        self.q < 1.0
    }
}

/// Asymptotic limits of the displayed potential and the bound-state ceiling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticWindow {
    pub v_minus: f64,
    pub v_plus: f64,
    pub e_max: f64,
}

/// Limits of the displayed six-term form: v_plus = V4 - V5 as x -> +inf,
/// v_minus = V1/q + V2/q^2 - V4 - V5 as x -> -inf.
pub fn asymptotic_limits(p: &PotentialParams) -> AsymptoticWindow {
    let v_plus = p.v4 - p.v5;
    let v_minus = p.v1 / p.q + p.v2 / (p.q * p.q) - p.v4 - p.v5;
    AsymptoticWindow {
        v_minus,
        v_plus,
        e_max: v_minus.min(v_plus),
    }
}

/// Asymptotic limits of the solved form [`nu_potential_value`]:
/// -V4 as x -> +inf, -V1/q + V2/q^2 + V4 + V5 as x -> -inf.
pub fn nu_window(p: &PotentialParams) -> AsymptoticWindow {
    let v_plus = -p.v4;
    let v_minus = -p.v1 / p.q + p.v2 / (p.q * p.q) + p.v4 + p.v5;
    AsymptoticWindow {
        v_minus,
        v_plus,
        e_max: v_minus.min(v_plus),
    }
}

// Shared kernel: the five shape functions in terms of t = e^{-2 a x},
// rewritten through u = e^{+2 a x} on the x < 0 side so no exponential
// ever overflows for |x| <= 700/(2 alpha).
struct Shapes {
    f1: f64, // e^{-2ax} / (1 + q e^{-2ax})
    f2: f64, // e^{-4ax} / (1 + q e^{-2ax})^2
    f3: f64, // 1 / (1 + q e^{-2ax})^2
    t1: f64, // tanh_q(ax)
    s2: f64, // sech_q^2(ax)
}

fn shapes(q: f64, alpha: f64, x: f64) -> Result<Shapes> {
    let s = -2.0 * alpha * x; // exponent of t
    if s <= 0.0 {
        let t = s.exp(); // t <= 1
        let den = 1.0 + q * t;
        if den.abs() < 1e-300 {
            return Err(Error::Pole { at: x });
        }
        Ok(Shapes {
            f1: t / den,
            f2: (t / den) * (t / den),
            f3: 1.0 / (den * den),
            t1: (1.0 - q * t) / den,
            s2: 4.0 * t / (den * den),
        })
    } else {
        let u = (-s).exp(); // u = e^{2ax} <= 1
        let den = u + q;
        if den.abs() < 1e-300 {
            return Err(Error::Pole { at: x });
        }
        Ok(Shapes {
            f1: 1.0 / den,
            f2: 1.0 / (den * den),
            f3: (u / den) * (u / den),
            t1: (u - q) / den,
            s2: 4.0 * u / (den * den),
        })
    }
}

/// The displayed six-term potential, signs as displayed:
/// V1 f1 + V2 f2 + V3 sech_q^2 + V4 tanh_q - V5 tanh_q^2 + V6 sech_q^2.
pub fn potential_value(p: &PotentialParams, x: f64) -> Result<f64> {
    let sh = shapes(p.q, p.alpha, x)?;
    Ok(p.v1 * sh.f1
        + p.v2 * sh.f2
        + (p.v3 + p.v6) * sh.s2
        + p.v4 * sh.t1
        - p.v5 * sh.t1 * sh.t1)
}

/// The potential the closed-form spectrum solves exactly (see module docs).
pub fn nu_potential_value(p: &PotentialParams, x: f64) -> Result<f64> {
    let sh = shapes(p.q, p.alpha, x)?;
    Ok(-p.v1 * sh.f1
        + p.v2 * sh.f2
        - (p.v3 + p.v6) * sh.s2
        - p.v4 * sh.t1
        + p.v5 * sh.t1 * sh.t1
        - p.v5 * sh.f3)
}

/// Complexification mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComplexMode {
    /// alpha -> i alpha, everything else real: PT-symmetric family.
    Pt,
    /// q -> iq, alpha -> i alpha, V1 -> iV1, V3 -> iV3, V6 -> iV6.
    NonPt,
}

/// Complexified parameter set. Valid instances are produced by [`Self::pt`]
/// and [`Self::nonpt`], which apply the mode's substitution pattern to a
/// real parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexPotentialParams {
    pub v1: Complex64,
    pub v2: Complex64,
    pub v3: Complex64,
    pub v4: Complex64,
    pub v5: Complex64,
    pub v6: Complex64,
    pub q: Complex64,
    pub alpha: Complex64,
    pub mode: ComplexMode,
    /// The real parameters the substitution was applied to.
    pub base: PotentialParams,
}

impl ComplexPotentialParams {
    pub fn pt(base: &PotentialParams) -> Result<Self> {
        base.validate()?;
        let i = Complex64::i();
        Ok(ComplexPotentialParams {
            v1: base.v1.into(),
            v2: base.v2.into(),
            v3: base.v3.into(),
            v4: base.v4.into(),
            v5: base.v5.into(),
            v6: base.v6.into(),
            q: base.q.into(),
            alpha: i * base.alpha,
            mode: ComplexMode::Pt,
            base: *base,
        })
    }

    pub fn nonpt(base: &PotentialParams) -> Result<Self> {
        base.validate()?;
        let i = Complex64::i();
        Ok(ComplexPotentialParams {
            v1: i * base.v1,
            v2: base.v2.into(),
            v3: i * base.v3,
            v4: base.v4.into(),
            v5: base.v5.into(),
            v6: i * base.v6,
            q: i * base.q,
            alpha: i * base.alpha,
            mode: ComplexMode::NonPt,
            base: *base,
        })
    }

    pub fn from_mode(mode: ComplexMode, base: &PotentialParams) -> Result<Self> {
        match mode {
            ComplexMode::Pt => Self::pt(base),
            ComplexMode::NonPt => Self::nonpt(base),
        }
    }
}

/// Complex evaluation of the solved-form potential after the mode's
/// substitutions. One code path for every complexified variant; the
/// expanded trigonometric displays serve as regression oracles in tests.
pub fn potential_value_complex(p: &ComplexPotentialParams, x: f64) -> Result<Complex64> {
    let t = (-2.0 * p.alpha * x).exp();
    let den = Complex64::new(1.0, 0.0) + p.q * t;
    if den.norm() < 1e-12 {
        return Err(Error::Pole { at: x });
    }
    let f1 = t / den;
    let f2 = f1 * f1;
    let t1 = (Complex64::new(1.0, 0.0) - p.q * t) / den;
    let s2 = 4.0 * t / (den * den);
    Ok(-p.v1 * f1 + p.v2 * f2 - (p.v3 + p.v6) * s2 - p.v4 * t1 + p.v5 * t1 * t1)
}

/// Max over the sample points of |V(-x)* - V(x)| <= tol.
pub fn pt_symmetry_check(p: &ComplexPotentialParams, xs: &[f64], tol: f64) -> Result<bool> {
    let mut worst = 0.0_f64;
    for &x in xs {
        let v = potential_value_complex(p, x)?;
        let vm = potential_value_complex(p, -x)?;
        worst = worst.max((vm.conj() - v).norm());
    }
    Ok(worst <= tol)
}
