//! Browser bindings for the interactive demo page: potential curves,
//! closed-form spectra with an on-the-fly finite-difference cross-check,
//! and sampled wavefunctions. Every entry point takes a flat JSON parameter
//! object and returns JSON (an `{"error": ...}` object on failure, so the
//! page never has to deal with thrown values).

use serde::{Deserialize, Serialize};
use wasm_bindgen::prelude::wasm_bindgen;

use nuspectra_core::closed_form::{enumerate_bound_states, energy_complex_combined, EtaPolicy};
use nuspectra_core::oracle::{fd_levels_richardson, Grid};
use nuspectra_core::potential::{
    nu_potential_value, nu_window, potential_value, potential_value_complex,
    pt_symmetry_check, ComplexMode, ComplexPotentialParams, PotentialParams,
};
use nuspectra_core::wavefunction::{normalize_numeric, psi_raw, WavefunctionSpec};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DemoParams {
    mode: String,
    v1: f64,
    v2: f64,
    v3: f64,
    v4: f64,
    v5: f64,
    v6: f64,
    q: f64,
    alpha: f64,
    #[serde(default)]
    half_width: Option<f64>,
    #[serde(default)]
    n_max: Option<u32>,
}

enum Mode {
    Real,
    Complex(ComplexMode),
}

impl DemoParams {
    fn parse(text: &str) -> Result<(Self, PotentialParams, Mode), String> {
        let d: DemoParams = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let p = PotentialParams::new([d.v1, d.v2, d.v3, d.v4, d.v5, d.v6], d.q, d.alpha)
            .map_err(|e| e.to_string())?;
        let mode = match d.mode.as_str() {
            "real" => Mode::Real,
            "pt" => Mode::Complex(ComplexMode::Pt),
            "nonpt" => Mode::Complex(ComplexMode::NonPt),
            other => return Err(format!("mode must be real/pt/nonpt, got {other}")),
        };
        Ok((d, p, mode))
    }

    fn half_width(&self, p: &PotentialParams) -> f64 {
        self.half_width.unwrap_or(8.0 / p.alpha.abs().min(2.0)).clamp(1.0, 60.0)
    }
}

fn err_json(msg: &str) -> String {
    serde_json::json!({ "error": msg }).to_string()
}

#[derive(Serialize)]
struct Curve {
    label: String,
    re: Vec<f64>,
    im: Vec<f64>,
}

#[derive(Serialize)]
struct CurveSet {
    xs: Vec<f64>,
    curves: Vec<Curve>,
    pt_symmetric: Option<bool>,
}

fn potential_curve_impl(cfg: &str) -> Result<String, String> {
    let (d, p, mode) = DemoParams::parse(cfg)?;
    let l = d.half_width(&p);
    let n = 801usize;
    let xs: Vec<f64> = (0..n).map(|i| -l + 2.0 * l * i as f64 / (n - 1) as f64).collect();
    let mut set = CurveSet { xs: xs.clone(), curves: Vec::new(), pt_symmetric: None };
    match mode {
        Mode::Real => {
            let displayed: Vec<f64> = xs
                .iter()
                .map(|&x| potential_value(&p, x).unwrap_or(f64::NAN))
                .collect();
            let solved: Vec<f64> = xs
                .iter()
                .map(|&x| nu_potential_value(&p, x).unwrap_or(f64::NAN))
                .collect();
            set.curves.push(Curve {
                label: "displayed form".into(),
                im: vec![0.0; displayed.len()],
                re: displayed,
            });
            set.curves.push(Curve {
                label: "solved form".into(),
                im: vec![0.0; solved.len()],
                re: solved,
            });
        }
        Mode::Complex(m) => {
            let cp = ComplexPotentialParams::from_mode(m, &p).map_err(|e| e.to_string())?;
            let mut re = Vec::with_capacity(xs.len());
            let mut im = Vec::with_capacity(xs.len());
            for &x in &xs {
                match potential_value_complex(&cp, x) {
                    Ok(v) => {
                        re.push(v.re);
                        im.push(v.im);
                    }
                    Err(_) => {
                        re.push(f64::NAN);
                        im.push(f64::NAN);
                    }
                }
            }
            set.curves.push(Curve { label: "complexified".into(), re, im });
            let probe: Vec<f64> = (0..64)
                .map(|i| -2.9 + 5.8 * i as f64 / 63.0)
                .filter(|&x| potential_value_complex(&cp, x).is_ok())
                .collect();
            set.pt_symmetric = pt_symmetry_check(&cp, &probe, 1e-12).ok();
        }
    }
    serde_json::to_string(&set).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct LevelInfo {
    n: u32,
    eta: i8,
    e_re: f64,
    e_im: f64,
    admissible: bool,
    flags: Vec<String>,
}

#[derive(Serialize)]
struct SpectrumInfo {
    levels: Vec<LevelInfo>,
    oracle: Vec<f64>,
    e_max: Option<f64>,
}

fn spectrum_impl(cfg: &str) -> Result<String, String> {
    let (d, p, mode) = DemoParams::parse(cfg)?;
    let mut info = SpectrumInfo { levels: Vec::new(), oracle: Vec::new(), e_max: None };
    match mode {
        Mode::Real => {
            for l in enumerate_bound_states(&p, EtaPolicy::Both) {
                info.levels.push(LevelInfo {
                    n: l.n,
                    eta: l.eta,
                    e_re: l.e.re,
                    e_im: l.e.im,
                    admissible: l.admissible,
                    flags: l.flags.iter().map(|f| format!("{f:?}")).collect(),
                });
            }
            // Coarse on-the-fly cross-check; enough for a plot overlay.
            let w = nu_window(&p);
            info.e_max = Some(w.e_max);
            let half = (20.0 / p.alpha.abs()).min(60.0);
            if let Ok(grid) = Grid::new(-half, half, 2001) {
                let v = |x: f64| nu_potential_value(&p, x).unwrap_or(f64::INFINITY);
                if let Ok(levels) = fd_levels_richardson(v, grid, w.e_max - 1e-9) {
                    info.oracle = levels;
                }
            }
        }
        Mode::Complex(m) => {
            let cp = ComplexPotentialParams::from_mode(m, &p).map_err(|e| e.to_string())?;
            for eta in [1i8, -1] {
                for n in 0..=d.n_max.unwrap_or(6) {
                    if let Ok(l) = energy_complex_combined(&cp, n, eta) {
                        info.levels.push(LevelInfo {
                            n,
                            eta,
                            e_re: l.e.re,
                            e_im: l.e.im,
                            admissible: l.admissible,
                            flags: l.flags.iter().map(|f| format!("{f:?}")).collect(),
                        });
                    }
                }
            }
        }
    }
    serde_json::to_string(&info).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct WavefunctionCurve {
    xs: Vec<f64>,
    psi: Vec<f64>,
    energy: f64,
    nodes: usize,
}

fn wavefunction_impl(cfg: &str, n: u32) -> Result<String, String> {
    let (_, p, mode) = DemoParams::parse(cfg)?;
    if !matches!(mode, Mode::Real) {
        return Err("wavefunctions are drawn in real mode".into());
    }
    let level = enumerate_bound_states(&p, EtaPolicy::Auto)
        .into_iter()
        .find(|l| l.n == n && l.admissible)
        .ok_or("level not found or inadmissible")?;
    let spec = WavefunctionSpec::new(&p, &level).map_err(|e| e.to_string())?;
    // Dense grid for accuracy, thinned for transfer.
    let l_box = 40.0 / p.alpha.abs();
    let dense: Vec<f64> = (0..8001)
        .map(|i| -l_box + 2.0 * l_box * i as f64 / 8000.0)
        .collect();
    let w = psi_raw(&spec, &dense)
        .and_then(|w| normalize_numeric(&w))
        .map_err(|e| e.to_string())?;
    let stride = 8;
    let out = WavefunctionCurve {
        xs: w.xs.iter().step_by(stride).copied().collect(),
        psi: w.values.iter().step_by(stride).map(|v| v.re).collect(),
        energy: level.e.re,
        nodes: w.nodes,
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

/// Sampled potential curves for the current parameters (both sign
/// conventions in real mode; re/im parts in the complexified modes, plus
/// the PT-symmetry verdict).
#[wasm_bindgen]
pub fn potential_curve(cfg: &str) -> String {
    potential_curve_impl(cfg).unwrap_or_else(|e| err_json(&e))
}

/// Closed-form levels of both branch signs with admissibility flags and a
/// coarse finite-difference cross-check (real mode).
#[wasm_bindgen]
pub fn spectrum(cfg: &str) -> String {
    spectrum_impl(cfg).unwrap_or_else(|e| err_json(&e))
}

/// Normalized bound-state wavefunction for level n.
#[wasm_bindgen]
pub fn wavefunction(cfg: &str, n: u32) -> String {
    wavefunction_impl(cfg, n).unwrap_or_else(|e| err_json(&e))
}
