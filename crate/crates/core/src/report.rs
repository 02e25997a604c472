//! Verification pipeline: closed-form towers cross-checked against the
//! finite-difference and Numerov oracles (real mode) or the complex
//! shooting oracle (complexified modes), assembled into a serializable
//! report.

use num_complex::Complex64;
use serde::Serialize;

use crate::closed_form::{
    enumerate_bound_states, energy_complex_combined, EnergyLevel, EtaPolicy, Flag,
};
use crate::error::Result;
use crate::oracle::{complex_shoot, fd_levels_richardson, numerov_shoot, Grid};
use crate::potential::{
    nu_potential_value, nu_window, ComplexPotentialParams, PotentialParams,
    potential_value_complex,
};

pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GridMeta {
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
}

impl From<Grid> for GridMeta {
    fn from(g: Grid) -> Self {
        GridMeta { x_min: g.x_min, x_max: g.x_max, points: g.n_points }
    }
}

/// One real-mode level with its oracle cross-checks.
#[derive(Debug, Clone, Serialize)]
pub struct LevelRecord {
    pub n: u32,
    pub eta: i8,
    pub e_closed: f64,
    pub e_oracle_fd: Option<f64>,
    pub e_oracle_numerov: Option<f64>,
    pub abs_residual: Option<f64>,
    pub rel_residual: Option<f64>,
    pub admissible: bool,
    pub flags: Vec<Flag>,
}

/// One complexified-mode level with its shooting cross-check.
#[derive(Debug, Clone, Serialize)]
pub struct ComplexLevelRecord {
    pub n: u32,
    pub eta: i8,
    pub e_closed_re: f64,
    pub e_closed_im: f64,
    pub real_within_tol: bool,
    pub shoot_re: Option<f64>,
    pub shoot_im: Option<f64>,
    pub shoot_residual: Option<f64>,
    pub flags: Vec<Flag>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub toolkit_version: String,
    pub mode: String,
    pub params: PotentialParams,
    pub grid: GridMeta,
    pub q_outside_stated_domain: bool,
    /// Admissible closed-form levels matched against the oracles.
    pub levels: Vec<LevelRecord>,
    /// Candidate levels surfaced but not admissible (both branches walked).
    pub rejected: Vec<LevelRecord>,
    /// Full finite-difference spectrum below the window ceiling.
    pub oracle_levels: Vec<f64>,
    pub complex_levels: Vec<ComplexLevelRecord>,
    pub notes: Vec<String>,
}

fn record_from_level(l: &EnergyLevel) -> LevelRecord {
    LevelRecord {
        n: l.n,
        eta: l.eta,
        e_closed: l.e_real(),
        e_oracle_fd: None,
        e_oracle_numerov: None,
        abs_residual: None,
        rel_residual: None,
        admissible: l.admissible,
        flags: l.flags.clone(),
    }
}

/// Default verification grid: [-L, L] with L = 40/alpha, 8001 points.
pub fn default_verify_grid(p: &PotentialParams) -> Grid {
    let l = 40.0 / p.alpha.abs();
    Grid { x_min: -l, x_max: l, n_points: 8001 }
}

/// Real-mode verification: enumerate the policy's tower, diagonalize the
/// derivation-consistent potential, shoot each admissible level with
/// Numerov, and record residuals (reported, never gated here).
pub fn verify_real(
    p: &PotentialParams,
    policy: EtaPolicy,
    grid: Grid,
) -> Result<VerifyReport> {
    p.validate()?;
    let chosen = enumerate_bound_states(p, policy);
    let all = enumerate_bound_states(p, EtaPolicy::Both);

    let admissible: Vec<&EnergyLevel> = chosen.iter().filter(|l| l.admissible).collect();
    let mut rejected: Vec<LevelRecord> = Vec::new();
    for l in &all {
        let in_admissible = admissible
            .iter()
            .any(|a| a.n == l.n && a.eta == l.eta);
        if !in_admissible {
            rejected.push(record_from_level(l));
        }
    }
    rejected.sort_by(|a, b| (b.eta, a.n).cmp(&(a.eta, b.n)));

    let v = |x: f64| nu_potential_value(p, x).unwrap_or(f64::INFINITY);
    let e_max = nu_window(p).e_max - 1e-9;
    let oracle_levels = fd_levels_richardson(v, grid, e_max)?;

    let mut notes = Vec::new();
    notes.push(
        "oracle potential: derivation-consistent form (V1, V3+V6, V4 negated, V5 \
         tanh^2 positive, with the -V5/(1+q e^{-2 a x})^2 constant-term correction)"
            .to_string(),
    );
    if admissible.len() != oracle_levels.len() {
        notes.push(format!(
            "level count mismatch: {} admissible closed-form vs {} oracle",
            admissible.len(),
            oracle_levels.len()
        ));
    }

    let mut levels = Vec::with_capacity(admissible.len());
    for (k, l) in admissible.iter().enumerate() {
        let mut rec = record_from_level(l);
        if let Some(&e_fd) = oracle_levels.get(k) {
            rec.e_oracle_fd = Some(e_fd);
            rec.abs_residual = Some((rec.e_closed - e_fd).abs());
            rec.rel_residual = Some((rec.e_closed - e_fd).abs() / e_fd.abs().max(1e-30));
        }
        match numerov_shoot(v, grid, k) {
            Ok(e_nv) => rec.e_oracle_numerov = Some(e_nv),
            Err(e) => notes.push(format!("numerov level {k}: {}", e.name())),
        }
        levels.push(rec);
    }

    // Displayed normalization constant vs the numeric one, recorded for
    // comparison only (the display's z-interval normalization is evaluable
    // for q < 1; no equality is asserted anywhere).
    if p.q < 1.0 {
        for l in &admissible {
            if let Ok(spec) = crate::wavefunction::WavefunctionSpec::new(p, l) {
                let xs = grid.points();
                if let Ok(raw) = crate::wavefunction::psi_raw(&spec, &xs) {
                    let numeric = 1.0 / crate::wavefunction::norm_integral(&raw).sqrt();
                    match crate::wavefunction::paper_norm_constant(&spec, 0, 0) {
                        Ok(paper) => notes.push(format!(
                            "norm comparison n={} eta={}: displayed {:.6e} vs numeric {:.6e} \
                             (ratio {:.6e})",
                            l.n,
                            l.eta,
                            paper,
                            numeric,
                            paper / numeric
                        )),
                        Err(e) => notes.push(format!(
                            "norm comparison n={} eta={}: {}",
                            l.n,
                            l.eta,
                            e.name()
                        )),
                    }
                }
            }
        }
    }

    Ok(VerifyReport {
        toolkit_version: TOOLKIT_VERSION.to_string(),
        mode: "real".to_string(),
        params: *p,
        grid: grid.into(),
        q_outside_stated_domain: p.outside_stated_q_domain(),
        levels,
        rejected,
        oracle_levels,
        complex_levels: Vec::new(),
        notes,
    })
}

/// Complexified-mode verification: closed-form levels for both branch signs
/// up to n_max, each seeded into the complex shooting oracle on the
/// box-truncated grid (the complexified potentials are periodic; only
/// box spectra are reported, and the truncation is recorded).
pub fn verify_complex(
    cp: &ComplexPotentialParams,
    n_max: u32,
    grid: Grid,
) -> Result<VerifyReport> {
    let mut complex_levels = Vec::new();
    let mut notes = vec![format!(
        "complexified potential is periodic in x; spectrum is box-truncated on \
         [{}, {}] with Dirichlet ends",
        grid.x_min, grid.x_max
    )];
    let v = |x: f64| {
        potential_value_complex(cp, x).unwrap_or(Complex64::new(f64::INFINITY, 0.0))
    };
    for eta in [1i8, -1] {
        for n in 0..=n_max {
            let level = match energy_complex_combined(cp, n, eta) {
                Ok(l) => l,
                Err(_) => continue,
            };
            let mut rec = ComplexLevelRecord {
                n,
                eta,
                e_closed_re: level.e.re,
                e_closed_im: level.e.im,
                real_within_tol: level.is_real(),
                shoot_re: None,
                shoot_im: None,
                shoot_residual: None,
                flags: level.flags.clone(),
            };
            match complex_shoot(v, grid, level.e) {
                Ok(r) => {
                    rec.shoot_re = Some(r.e.re);
                    rec.shoot_im = Some(r.e.im);
                    rec.shoot_residual = Some(r.residual);
                }
                Err(e) => notes.push(format!("shoot n={n} eta={eta}: {}", e.name())),
            }
            complex_levels.push(rec);
        }
    }
    Ok(VerifyReport {
        toolkit_version: TOOLKIT_VERSION.to_string(),
        mode: match cp.mode {
            crate::potential::ComplexMode::Pt => "pt".to_string(),
            crate::potential::ComplexMode::NonPt => "nonpt".to_string(),
        },
        params: cp.base,
        grid: grid.into(),
        q_outside_stated_domain: cp.base.outside_stated_q_domain(),
        levels: Vec::new(),
        rejected: Vec::new(),
        oracle_levels: Vec::new(),
        complex_levels,
        notes,
    })
}
