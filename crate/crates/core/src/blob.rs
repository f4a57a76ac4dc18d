//! Vortex-blob discretization of the reduced helical Euler equation.
//!
//! Vorticity is carried by particles with fixed circulations; particles are
//! transported by the δ-regularized singular-kernel velocity. Because that
//! velocity is an exact perpendicular gradient, the flow is divergence-free
//! and the weights never change.
//!
//! Pair sums are direct `O(N²)` over all particle pairs, parallel over target
//! particles. Every target accumulates its sources in index order, so results
//! do not depend on the number of threads.

use rayon::prelude::*;

use crate::diagnostics::{self, DiagnosticsRecord};
use crate::error::{Error, Result};
use crate::geometry::HelixGeometry;
use crate::kernel::{KernelParams, SourcePoint, TargetPoint};
use crate::pointvortex::{self, OdeParams, OdeState, StepConfig};
use crate::rk4::{self, Rk4Workspace};
use crate::vec2::Vec2;

pub const DEFAULT_DELTA_FACTOR: f64 = 1.5;
pub const DEFAULT_CFL: f64 = 0.2;
pub const MIN_N_SIDE: usize = 8;

/// Full description of a blob experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub geom: HelixGeometry,
    pub strengths: Vec<f64>,
    /// Rescaled initial centers `P_i⁰`; the physical disk centers are `x0 + P_i⁰/ln(1/ε)`.
    pub centers: Vec<Vec2>,
    pub epsilon: f64,
    /// Lattice cells across one patch diameter.
    pub n_side: usize,
    pub delta_factor: f64,
    /// Fixed timestep; `None` selects it from the initial velocities.
    pub dt: Option<f64>,
    pub t_final: f64,
    /// Steps between diagnostics records.
    pub cadence: usize,
    /// Radii for the two mass-outside columns.
    pub mass_radii: [f64; 2],
    pub dump_particles: bool,
}

impl Scenario {
    /// A scenario with default discretization settings.
    pub fn new(geom: HelixGeometry, strengths: Vec<f64>, centers: Vec<Vec2>, epsilon: f64) -> Self {
        Scenario {
            geom,
            strengths,
            centers,
            epsilon,
            n_side: 16,
            delta_factor: DEFAULT_DELTA_FACTOR,
            dt: None,
            t_final: 0.0,
            cadence: 1,
            mass_radii: [2.0 * epsilon, 4.0 * epsilon],
            dump_particles: false,
        }
    }

    pub fn log_scale(&self) -> f64 {
        (1.0 / self.epsilon).ln()
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.epsilon / self.n_side as f64
    }

    /// Physical disk center `x0 + P_i⁰ / ln(1/ε)`.
    pub fn disk_center(&self, i: usize) -> Vec2 {
        self.geom.base_point() + self.centers[i] * (1.0 / self.log_scale())
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.strengths.len();
        if n == 0 {
            return Err(Error::invalid("at least one vortex is required"));
        }
        if self.centers.len() != n {
            return Err(Error::invalid(format!(
                "{} strengths but {} centers",
                n,
                self.centers.len()
            )));
        }
        if let Some(i) = self.strengths.iter().position(|a| *a == 0.0 || !a.is_finite()) {
            return Err(Error::invalid(format!("strength a_{} must be nonzero", i + 1)));
        }
        if self.centers.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("centers must be finite"));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::invalid(format!("epsilon must lie in (0, 1), got {}", self.epsilon)));
        }
        if self.n_side < MIN_N_SIDE {
            return Err(Error::invalid(format!(
                "n_side must be at least {MIN_N_SIDE}, got {}",
                self.n_side
            )));
        }
        if !(self.delta_factor > 0.0) || !self.delta_factor.is_finite() {
            return Err(Error::invalid("delta_factor must be positive"));
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0) || !dt.is_finite() {
                return Err(Error::invalid(format!("dt must be positive, got {dt}")));
            }
        }
        if !(self.t_final >= 0.0) || !self.t_final.is_finite() {
            return Err(Error::invalid("t_final must be >= 0"));
        }
        if self.cadence == 0 {
            return Err(Error::invalid("cadence must be at least 1"));
        }
        if self.mass_radii.iter().any(|r| !(*r > 0.0)) {
            return Err(Error::invalid("mass radii must be positive"));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if self.centers[i] == self.centers[j] {
                    return Err(Error::invalid(format!(
                        "centers {} and {} coincide",
                        i + 1,
                        j + 1
                    )));
                }
                let distance = (self.disk_center(i) - self.disk_center(j)).norm();
                let limit = 2.0 * self.epsilon;
                if distance < limit {
                    return Err(Error::OverlappingDisks {
                        i: i + 1,
                        j: j + 1,
                        distance,
                        limit,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn ode_params(&self) -> Result<OdeParams> {
        OdeParams::new(self.geom, self.strengths.clone())
    }

    /// Initial state of the limiting point-vortex system, `P̃⁰ = DT(x0) P⁰`.
    pub fn ode_initial_state(&self) -> Result<OdeState> {
        Ok(pointvortex::from_physical(0.0, &self.centers, &self.ode_params()?))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParticleField {
    pub t: f64,
    pub positions: Vec<Vec2>,
    pub weights: Vec<f64>,
    /// Zero-based vortex index of each particle.
    pub component: Vec<usize>,
    pub n_components: usize,
    pub delta: f64,
    pub epsilon: f64,
    pub spacing: f64,
    pub geom: HelixGeometry,
}

impl ParticleField {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn log_scale(&self) -> f64 {
        (1.0 / self.epsilon).ln()
    }

    pub fn kernel(&self) -> KernelParams {
        KernelParams {
            geom: self.geom,
            delta: self.delta,
        }
    }

    /// Particle indices of component `i`.
    pub fn component_indices(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.component
            .iter()
            .enumerate()
            .filter(move |(_, c)| **c == i)
            .map(|(p, _)| p)
    }

    /// Sum of weights of component `i`, accumulated in particle order.
    pub fn component_mass(&self, i: usize) -> f64 {
        self.component_indices(i).map(|p| self.weights[p]).sum()
    }

    pub fn total_circulation(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Lay a uniform square lattice over each initial disk and assign weights so
/// that component `i` carries exactly `a_i / ln(1/ε)²`.
pub fn init_patches(scenario: &Scenario) -> Result<ParticleField> {
    scenario.validate()?;
    let eps = scenario.epsilon;
    let spacing = scenario.spacing();
    let log2 = scenario.log_scale().powi(2);
    let n = scenario.n_side;

    let mut positions = Vec::new();
    let mut weights = Vec::new();
    let mut component = Vec::new();
    for (i, &a) in scenario.strengths.iter().enumerate() {
        let center = scenario.disk_center(i);
        let start = positions.len();
        for ky in 0..n {
            let oy = (ky as f64 + 0.5) * spacing - eps;
            for kx in 0..n {
                let ox = (kx as f64 + 0.5) * spacing - eps;
                if ox * ox + oy * oy < eps * eps {
                    positions.push(center + Vec2::new(ox, oy));
                    component.push(i);
                }
            }
        }
        let kept = positions.len() - start;
        let gamma = a / log2;
        let w = gamma / kept as f64;
        weights.extend(std::iter::repeat_n(w, kept));
        // push the rounding residue of the sequential sum into the last particle
        for _ in 0..4 {
            let sum: f64 = weights[start..].iter().sum();
            if sum == gamma {
                break;
            }
            *weights.last_mut().unwrap() += gamma - sum;
        }
    }
    Ok(ParticleField {
        t: 0.0,
        positions,
        weights,
        component,
        n_components: scenario.strengths.len(),
        delta: scenario.delta_factor * spacing,
        epsilon: eps,
        spacing,
        geom: scenario.geom,
    })
}

/// Source data with the particle weight folded in.
#[derive(Debug, Clone, Copy)]
struct WeightedSource {
    t: Vec2,
    /// `w · |Y|^{1/2} / (2πh)`
    strength: f64,
}

fn weighted_sources(geom: &HelixGeometry, positions: &[Vec2], weights: &[f64]) -> Vec<WeightedSource> {
    positions
        .iter()
        .zip(weights)
        .map(|(y, w)| {
            let s = SourcePoint::new(geom, *y);
            WeightedSource {
                t: s.t,
                strength: w * s.scaled_sqrt_norm,
            }
        })
        .collect()
}

// v(x) = L ∇⊥|X|^{1/2} + |X|^{1/2} (DT(x) M)⊥ with
// L = Σ s_q ½ln(ρ² + δ²) and M = Σ s_q (T(x) − T(y_q)) / (ρ² + δ²).
#[inline]
fn field_at(tgt: &TargetPoint, sources: &[WeightedSource], skip: Option<usize>, delta2: f64) -> Vec2 {
    let mut log_sum = 0.0;
    let mut m = Vec2::ZERO;
    for (q, src) in sources.iter().enumerate() {
        if Some(q) == skip {
            continue;
        }
        let d = tgt.t - src.t;
        let rho2 = d.norm_sq() + delta2;
        log_sum += src.strength * rho2.ln();
        m += d * (src.strength / rho2);
    }
    let g = tgt.grad_sqrt_norm.perp() * (0.5 * log_sum);
    g + tgt.dt.mul_vec(m).perp() * tgt.sqrt_norm
}

/// Induced velocity at an arbitrary point `x`, summing over all particles.
pub fn velocity_field(field: &ParticleField, x: Vec2) -> Vec2 {
    let sources = weighted_sources(&field.geom, &field.positions, &field.weights);
    let tgt = TargetPoint::new(&field.geom, x);
    field_at(&tgt, &sources, None, field.delta * field.delta)
}

/// Velocities of the particles themselves at `positions`, excluding self-interaction.
pub fn particle_velocities(field: &ParticleField, positions: &[Vec2]) -> Vec<Vec2> {
    let mut out = vec![Vec2::ZERO; positions.len()];
    particle_velocities_into(field, positions, &mut out);
    out
}

fn particle_velocities_into(field: &ParticleField, positions: &[Vec2], out: &mut [Vec2]) {
    let geom = field.geom;
    let sources = weighted_sources(&geom, positions, &field.weights);
    let delta2 = field.delta * field.delta;
    out.par_iter_mut()
        .zip(positions.par_iter())
        .enumerate()
        .for_each(|(p, (v, x))| {
            let tgt = TargetPoint::new(&geom, *x);
            *v = field_at(&tgt, &sources, Some(p), delta2);
        });
}

/// One RK4 step of all particle positions.
pub fn step(field: &mut ParticleField, dt: f64) -> Result<()> {
    let mut ws = Rk4Workspace::new(field.len());
    step_with(field, dt, &mut ws)
}

fn step_with(field: &mut ParticleField, dt: f64, ws: &mut Rk4Workspace) -> Result<()> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::invalid(format!("dt must be positive, got {dt}")));
    }
    let mut y = std::mem::take(&mut field.positions);
    let frozen: &ParticleField = field;
    rk4::step::<Error, _>(&mut y, dt, ws, |s, out| {
        particle_velocities_into(frozen, s, out);
        Ok(())
    })?;
    let t = field.t + dt;
    if y.iter().any(|p| !p.is_finite()) {
        field.positions = y;
        return Err(Error::NonFinite { t });
    }
    field.positions = y;
    field.t = t;
    Ok(())
}

/// Default timestep: `DEFAULT_CFL · spacing / max |v|` over the initial particles.
pub fn default_dt(field: &ParticleField) -> f64 {
    let vmax = particle_velocities(field, &field.positions)
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max);
    if vmax > 0.0 {
        DEFAULT_CFL * field.spacing / vmax
    } else {
        f64::INFINITY
    }
}

/// Step count and step size for a run. A default timestep is shrunk so that
/// an integer number of steps lands exactly on `t_final`.
pub fn resolve_steps(scenario: &Scenario, field: &ParticleField) -> (f64, usize) {
    match scenario.dt {
        Some(dt) => (dt, (scenario.t_final / dt * (1.0 + 1e-12)).floor() as usize),
        None => {
            let rule = default_dt(field);
            if scenario.t_final == 0.0 {
                return (if rule.is_finite() { rule } else { 1.0 }, 0);
            }
            let n = if rule.is_finite() {
                (scenario.t_final / rule).ceil().max(1.0) as usize
            } else {
                1
            };
            (scenario.t_final / n as f64, n)
        }
    }
}

/// Particle snapshot for dumps.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleDump {
    pub t: f64,
    pub positions: Vec<Vec2>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub records: Vec<DiagnosticsRecord>,
    pub dumps: Vec<ParticleDump>,
    /// Set when the run stopped before `t_final`; records up to the failure are kept.
    pub halted: Option<Error>,
    pub dt: f64,
    pub n_steps: usize,
    pub steps_taken: usize,
    pub final_field: ParticleField,
}

impl RunOutput {
    pub fn particle_count(&self) -> usize {
        self.final_field.len()
    }

    pub fn completed(&self) -> bool {
        self.halted.is_none()
    }
}

/// Initialize, then step to `t_final`, recording diagnostics every `cadence`
/// steps against the point-vortex prediction started from the same centers.
pub fn run(scenario: &Scenario) -> Result<RunOutput> {
    let mut field = init_patches(scenario)?;
    let (dt, n_steps) = resolve_steps(scenario, &field);

    let ode_params = scenario.ode_params()?;
    let ode_init = scenario.ode_initial_state()?;
    let reference = match pointvortex::integrate_with(&ode_init, &ode_params, &StepConfig::new(dt, n_steps)) {
        Ok(traj) => traj,
        Err(halted) => halted.partial,
    };
    let reference_at = |k: usize| -> Option<Vec<Vec2>> {
        (k < reference.len()).then(|| pointvortex::to_physical(&reference.state(k), &ode_params))
    };

    let mut records = Vec::new();
    let mut dumps = Vec::new();
    let mut record = |field: &ParticleField, k: usize| {
        let reference = reference_at(k);
        records.push(diagnostics::record(field, &scenario.mass_radii, reference.as_deref()));
        if scenario.dump_particles {
            dumps.push(ParticleDump {
                t: field.t,
                positions: field.positions.clone(),
            });
        }
    };
    record(&field, 0);

    let mut ws = Rk4Workspace::new(field.len());
    let mut halted = None;
    let mut steps_taken = 0;
    for k in 1..=n_steps {
        if let Err(e) = step_with(&mut field, dt, &mut ws) {
            halted = Some(e);
            break;
        }
        // keep sample times on the exact grid
        field.t = k as f64 * dt;
        steps_taken = k;
        if k % scenario.cadence == 0 {
            record(&field, k);
        }
    }
    Ok(RunOutput {
        records,
        dumps,
        halted,
        dt,
        n_steps,
        steps_taken,
        final_field: field,
    })
}
