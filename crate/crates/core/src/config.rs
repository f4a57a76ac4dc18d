//! Run configuration: a single TOML document, validated before any work starts.
//!
//! ```toml
//! [geometry]
//! h = 1.0
//! r0 = 1.0
//!
//! [vortices]
//! strengths = [2.0, 1.0]
//! centers = [[0.0, 0.19], [0.0, -0.19]]
//!
//! [blob]
//! epsilon = 0.01
//! periods = 2.5
//! ```
//!
//! Centers are the rescaled initial positions `P_i⁰`. Unknown keys are errors.

use std::path::Path;

use serde::Deserialize;

use crate::blob::{Scenario, DEFAULT_DELTA_FACTOR};
use crate::error::{Error, Result};
use crate::geometry::HelixGeometry;
use crate::leapfrog::LeapfrogParams;
use crate::pointvortex::{self, OdeParams, OdeState, StepConfig, DEFAULT_COLLISION_FLOOR};
use crate::vec2::Vec2;

pub const DEFAULT_BETA: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub geometry: GeometrySection,
    pub vortices: VortexSection,
    pub ode: Option<OdeSection>,
    pub blob: Option<BlobSection>,
    pub leapfrog: Option<LeapfrogSection>,
    pub sweep: Option<SweepSection>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySection {
    pub h: f64,
    pub r0: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VortexSection {
    pub strengths: Vec<f64>,
    pub centers: Vec<[f64; 2]>,
}

/// Point-vortex run. Give exactly one of `t_final`/`periods` and one of `dt`/`steps`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OdeSection {
    pub t_final: Option<f64>,
    pub periods: Option<f64>,
    pub dt: Option<f64>,
    pub steps: Option<usize>,
    pub collision_floor: Option<f64>,
    #[serde(default = "one")]
    pub output_every: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DumpMode {
    #[default]
    Single,
    PerTime,
}

/// Blob run. Give exactly one of `t_final`/`periods`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlobSection {
    pub epsilon: f64,
    #[serde(default = "default_n_side")]
    pub n_side: usize,
    #[serde(default = "default_delta_factor")]
    pub delta_factor: f64,
    pub dt: Option<f64>,
    pub t_final: Option<f64>,
    pub periods: Option<f64>,
    #[serde(default = "one")]
    pub cadence: usize,
    /// Mass-outside radii as multiples of ε.
    #[serde(default = "default_mass_radii")]
    pub mass_radii: [f64; 2],
    #[serde(default)]
    pub dump: DumpMode,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LeapfrogSection {
    /// Levels given as fractions of the critical level `C*`.
    #[serde(default)]
    pub level_fractions: Vec<f64>,
    /// Levels given as absolute `C_E`.
    #[serde(default)]
    pub levels: Vec<f64>,
    /// Periods `k` covered by the separation certificate run.
    #[serde(default = "default_periods")]
    pub periods: f64,
    #[serde(default = "default_steps_per_period")]
    pub steps_per_period: usize,
    /// Certificate radius; defaults to `beta · |P₁⁰ − P₂⁰| / 4`.
    pub rho: Option<f64>,
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default = "default_portrait_samples")]
    pub portrait_samples: usize,
    pub open_extent: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub epsilons: Vec<f64>,
}

fn one() -> usize {
    1
}
fn default_n_side() -> usize {
    16
}
fn default_delta_factor() -> f64 {
    DEFAULT_DELTA_FACTOR
}
fn default_mass_radii() -> [f64; 2] {
    [2.0, 4.0]
}
fn default_periods() -> f64 {
    3.0
}
fn default_steps_per_period() -> usize {
    4096
}
fn default_beta() -> f64 {
    DEFAULT_BETA
}
fn default_portrait_samples() -> usize {
    200
}

fn cfg_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

/// Fully resolved point-vortex run.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeRun {
    pub params: OdeParams,
    pub initial: OdeState,
    pub step: StepConfig,
    pub output_every: usize,
}

/// Fully resolved leapfrog analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct LeapfrogRun {
    pub params: LeapfrogParams,
    pub initial: OdeState,
    /// Absolute levels in request order: fractions first, then absolute values.
    pub levels: Vec<f64>,
    pub periods: f64,
    pub steps_per_period: usize,
    pub rho: f64,
    pub portrait_samples: usize,
    pub open_extent: f64,
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| cfg_err(e.to_string()))?;
        cfg.validate_common()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| cfg_err(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    fn validate_common(&self) -> Result<()> {
        self.geom()?;
        let v = &self.vortices;
        if v.strengths.is_empty() {
            return Err(cfg_err("vortices.strengths must not be empty"));
        }
        if v.strengths.len() != v.centers.len() {
            return Err(cfg_err(format!(
                "vortices: {} strengths but {} centers",
                v.strengths.len(),
                v.centers.len()
            )));
        }
        if let Some(i) = v.strengths.iter().position(|a| *a == 0.0 || !a.is_finite()) {
            return Err(cfg_err(format!("vortices.strengths[{i}] must be finite and nonzero")));
        }
        if v.centers.iter().flatten().any(|c| !c.is_finite()) {
            return Err(cfg_err("vortices.centers must be finite"));
        }
        Ok(())
    }

    pub fn geom(&self) -> Result<HelixGeometry> {
        HelixGeometry::new(self.geometry.h, self.geometry.r0).map_err(|e| cfg_err(format!("geometry: {e}")))
    }

    pub fn centers(&self) -> Vec<Vec2> {
        self.vortices.centers.iter().map(|&c| Vec2::from(c)).collect()
    }

    pub fn ode_params(&self) -> Result<OdeParams> {
        OdeParams::new(self.geom()?, self.vortices.strengths.clone()).map_err(|e| cfg_err(e.to_string()))
    }

    /// Period `T_E` of the two-vortex orbit through the configured centers.
    pub fn two_vortex_period(&self) -> Result<f64> {
        let (lf, initial) = self.leapfrog_params()?;
        let (x, _) = lf.reduce(&initial)?;
        lf.period_quadrature(lf.level_of_point(x))
            .map_err(|e| cfg_err(format!("periods requested but the configured level has no period: {e}")))
    }

    fn leapfrog_params(&self) -> Result<(LeapfrogParams, OdeState)> {
        let s = &self.vortices.strengths;
        if s.len() != 2 {
            return Err(cfg_err(format!("two vortices are required, got {}", s.len())));
        }
        let lf = LeapfrogParams::new(self.geom()?, s[0], s[1]).map_err(|e| cfg_err(e.to_string()))?;
        let initial = pointvortex::from_physical(0.0, &self.centers(), &self.ode_params()?);
        Ok((lf, initial))
    }

    fn horizon(&self, section: &str, t_final: Option<f64>, periods: Option<f64>) -> Result<f64> {
        let t = match (t_final, periods) {
            (Some(t), None) => t,
            (None, Some(k)) => {
                if !(k >= 0.0) || !k.is_finite() {
                    return Err(cfg_err(format!("{section}.periods must be >= 0")));
                }
                k * self.two_vortex_period()?
            }
            _ => return Err(cfg_err(format!("{section}: give exactly one of t_final or periods"))),
        };
        if !(t >= 0.0) || !t.is_finite() {
            return Err(cfg_err(format!("{section}.t_final must be >= 0, got {t}")));
        }
        Ok(t)
    }

    pub fn ode_run(&self) -> Result<OdeRun> {
        let sec = self.ode.as_ref().ok_or_else(|| cfg_err("missing [ode] section"))?;
        let params = self.ode_params()?;
        let t_final = self.horizon("ode", sec.t_final, sec.periods)?;
        let n_steps = match (sec.dt, sec.steps) {
            (Some(dt), None) => {
                if !(dt > 0.0) || !dt.is_finite() {
                    return Err(cfg_err(format!("ode.dt must be positive, got {dt}")));
                }
                (t_final / dt).ceil() as usize
            }
            (None, Some(n)) => n,
            _ => return Err(cfg_err("ode: give exactly one of dt or steps")),
        };
        if n_steps == 0 && t_final > 0.0 {
            return Err(cfg_err("ode.steps must be positive"));
        }
        let dt = if n_steps == 0 { sec.dt.unwrap_or(1.0) } else { t_final / n_steps as f64 };
        let floor = sec.collision_floor.unwrap_or(DEFAULT_COLLISION_FLOOR);
        if !(floor >= 0.0) {
            return Err(cfg_err("ode.collision_floor must be >= 0"));
        }
        if sec.output_every == 0 {
            return Err(cfg_err("ode.output_every must be at least 1"));
        }
        let initial = pointvortex::from_physical(0.0, &self.centers(), &params);
        Ok(OdeRun {
            params,
            initial,
            step: StepConfig {
                dt,
                n_steps,
                collision_floor: floor,
            },
            output_every: sec.output_every,
        })
    }

    pub fn blob_section(&self) -> Result<&BlobSection> {
        self.blob.as_ref().ok_or_else(|| cfg_err("missing [blob] section"))
    }

    /// Blob scenario at the configured ε.
    pub fn scenario(&self) -> Result<Scenario> {
        let eps = self.blob_section()?.epsilon;
        self.scenario_at(eps)
    }

    /// Blob scenario with ε overridden.
    pub fn scenario_at(&self, epsilon: f64) -> Result<Scenario> {
        let sec = self.blob_section()?;
        let mut s = Scenario::new(self.geom()?, self.vortices.strengths.clone(), self.centers(), epsilon);
        s.n_side = sec.n_side;
        s.delta_factor = sec.delta_factor;
        s.dt = sec.dt;
        s.t_final = self.horizon("blob", sec.t_final, sec.periods)?;
        s.cadence = sec.cadence;
        s.mass_radii = [sec.mass_radii[0] * epsilon, sec.mass_radii[1] * epsilon];
        s.validate().map_err(|e| cfg_err(format!("blob: {e}")))?;
        Ok(s)
    }

    pub fn sweep_epsilons(&self) -> Result<Vec<f64>> {
        let sec = self.sweep.as_ref().ok_or_else(|| cfg_err("missing [sweep] section"))?;
        let eps = &sec.epsilons;
        if eps.len() < 2 {
            return Err(cfg_err("sweep.epsilons needs at least two entries"));
        }
        if eps.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(cfg_err("sweep.epsilons must be strictly descending"));
        }
        for &e in eps {
            self.scenario_at(e)?;
        }
        Ok(eps.clone())
    }

    pub fn leapfrog_run(&self) -> Result<LeapfrogRun> {
        let sec = self.leapfrog.as_ref().ok_or_else(|| cfg_err("missing [leapfrog] section"))?;
        let (params, initial) = self.leapfrog_params()?;
        let mut levels = Vec::new();
        if !sec.level_fractions.is_empty() {
            let c_star = params
                .critical_level()
                .map_err(|e| cfg_err(format!("leapfrog.level_fractions: {e}")))?;
            levels.extend(sec.level_fractions.iter().map(|f| f * c_star));
        }
        levels.extend(sec.levels.iter().copied());
        if let Some(c) = levels.iter().find(|c| !(**c > 0.0) || !c.is_finite()) {
            return Err(cfg_err(format!("leapfrog levels must be positive, got {c}")));
        }
        if !(sec.periods > 0.0) || !sec.periods.is_finite() {
            return Err(cfg_err("leapfrog.periods must be positive"));
        }
        if sec.steps_per_period == 0 {
            return Err(cfg_err("leapfrog.steps_per_period must be positive"));
        }
        let centers = self.centers();
        let rho = match sec.rho {
            Some(r) => r,
            None => sec.beta * (centers[0] - centers[1]).norm() / 4.0,
        };
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(cfg_err(format!("leapfrog: certificate radius must be positive, got {rho}")));
        }
        let open_extent = match sec.open_extent {
            Some(x) => x,
            None => params.a_prime().map_or(10.0, |a| 4.0 * a.abs()),
        };
        if !(open_extent > 0.0) || !open_extent.is_finite() {
            return Err(cfg_err("leapfrog.open_extent must be positive"));
        }
        Ok(LeapfrogRun {
            params,
            initial,
            levels,
            periods: sec.periods,
            steps_per_period: sec.steps_per_period,
            rho,
            portrait_samples: sec.portrait_samples.max(2),
            open_extent,
        })
    }
}
