//! Run configuration: one strict JSON document (unknown keys rejected).

use serde::Deserialize;

use nuspectra_core::closed_form::{EtaPolicy, SpecialCase};
use nuspectra_core::error::{Error, Result};
use nuspectra_core::oracle::Grid;
use nuspectra_core::potential::{ComplexMode, PotentialParams};

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Real,
    Pt,
    NonPt,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub half_width: Option<f64>,
    pub points: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Mode,
    pub params: PotentialParams,
    #[serde(default)]
    pub case: Option<SpecialCase>,
    #[serde(default)]
    pub eta_policy: Option<String>,
    #[serde(default)]
    pub n_max_hint: Option<u32>,
    #[serde(default)]
    pub grid: Option<GridConfig>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text)
            .map_err(|e| Error::InvalidConfig(format!("config parse failed: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if let Some(case) = self.case {
            case.check(&self.params)?;
            let mode_matches = matches!(
                (case.complex_mode(), self.mode),
                (None, Mode::Real)
                    | (Some(ComplexMode::Pt), Mode::Pt)
                    | (Some(ComplexMode::NonPt), Mode::NonPt)
            );
            if !mode_matches {
                return Err(Error::InvalidConfig(format!(
                    "case {case:?} does not match mode {:?}",
                    self.mode
                )));
            }
        }
        self.eta_policy()?;
        if let Some(g) = &self.grid {
            if let Some(w) = g.half_width {
                if !(w > 0.0) {
                    return Err(Error::InvalidConfig("grid.half_width must be > 0".into()));
                }
            }
            if let Some(p) = g.points {
                if p < 3 {
                    return Err(Error::InvalidConfig("grid.points must be >= 3".into()));
                }
            }
        }
        Ok(())
    }

    pub fn eta_policy(&self) -> Result<EtaPolicy> {
        match self.eta_policy.as_deref() {
            None | Some("auto") => Ok(EtaPolicy::Auto),
            Some("both") => Ok(EtaPolicy::Both),
            Some("+1") => Ok(EtaPolicy::Fixed(1)),
            Some("-1") => Ok(EtaPolicy::Fixed(-1)),
            Some(other) => Err(Error::InvalidConfig(format!(
                "eta_policy must be one of auto, both, +1, -1 (got {other})"
            ))),
        }
    }

    pub fn n_max(&self) -> u32 {
        self.n_max_hint.unwrap_or(8)
    }

    /// Grid from overrides, falling back to [-40/alpha, 40/alpha] x 8001.
    pub fn grid(&self, half_width_flag: Option<f64>, points_flag: Option<usize>) -> Result<Grid> {
        let default_l = 40.0 / self.params.alpha.abs();
        let l = half_width_flag
            .or(self.grid.as_ref().and_then(|g| g.half_width))
            .unwrap_or(default_l);
        let n = points_flag
            .or(self.grid.as_ref().and_then(|g| g.points))
            .unwrap_or(8001);
        Grid::new(-l, l, n)
    }
}
