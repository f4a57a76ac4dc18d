//! The limiting N-vortex system in transformed coordinates `P̃ = DT(x0) P`:
//!
//! ```text
//! dP̃_i/dt = A Σ_{j≠i} a_j (P̃_i − P̃_j)⊥ / |P̃_i − P̃_j|² − a_i B (0, 1)
//! ```

use crate::error::{Error, Result};
use crate::geometry::HelixGeometry;
use crate::rk4::{self, Rk4Workspace};
use crate::vec2::Vec2;

pub const DEFAULT_COLLISION_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct OdeParams {
    pub geom: HelixGeometry,
    strengths: Vec<f64>,
}

impl OdeParams {
    pub fn new(geom: HelixGeometry, strengths: Vec<f64>) -> Result<Self> {
        if strengths.is_empty() {
            return Err(Error::invalid("at least one vortex is required"));
        }
        if let Some(i) = strengths.iter().position(|a| *a == 0.0 || !a.is_finite()) {
            return Err(Error::invalid(format!(
                "strength a_{} must be finite and nonzero, got {}",
                i + 1,
                strengths[i]
            )));
        }
        Ok(OdeParams { geom, strengths })
    }

    pub fn strengths(&self) -> &[f64] {
        &self.strengths
    }

    pub fn len(&self) -> usize {
        self.strengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strengths.is_empty()
    }
}

/// Phase point: time and transformed centers `P̃_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeState {
    pub t: f64,
    pub p_tilde: Vec<Vec2>,
}

impl OdeState {
    pub fn new(t: f64, p_tilde: Vec<Vec2>) -> Self {
        OdeState { t, p_tilde }
    }
}

fn check_len(state: &[Vec2], params: &OdeParams) -> Result<()> {
    if state.len() != params.len() {
        return Err(Error::invalid(format!(
            "state has {} centers but {} strengths were given",
            state.len(),
            params.len()
        )));
    }
    Ok(())
}

/// Writes the right-hand side for `positions` into `out`.
pub fn rhs_into(params: &OdeParams, positions: &[Vec2], t: f64, out: &mut [Vec2]) -> Result<()> {
    let a = params.geom.coupling_constant();
    let b = params.geom.drift_constant();
    let strengths = params.strengths();
    for (i, pi) in positions.iter().enumerate() {
        let mut v = Vec2::ZERO;
        for (j, pj) in positions.iter().enumerate() {
            if i == j {
                continue;
            }
            let d = *pi - *pj;
            let r2 = d.norm_sq();
            if r2 == 0.0 {
                return Err(Error::Collision {
                    i: i.min(j),
                    j: i.max(j),
                    t,
                    separation: 0.0,
                });
            }
            v += d.perp() * (strengths[j] / r2);
        }
        out[i] = Vec2::new(a * v.x, a * v.y - strengths[i] * b);
    }
    Ok(())
}

pub fn rhs(state: &OdeState, params: &OdeParams) -> Result<Vec<Vec2>> {
    check_len(&state.p_tilde, params)?;
    let mut out = vec![Vec2::ZERO; state.p_tilde.len()];
    rhs_into(params, &state.p_tilde, state.t, &mut out)?;
    Ok(out)
}

/// Physical rescaled centers `P_i = DT(x0)⁻¹ P̃_i`.
pub fn to_physical(state: &OdeState, params: &OdeParams) -> Vec<Vec2> {
    let inv = params.geom.dt0_inv();
    state.p_tilde.iter().map(|p| inv * *p).collect()
}

pub fn from_physical(t: f64, centers: &[Vec2], params: &OdeParams) -> OdeState {
    let dt0 = params.geom.dt0();
    OdeState::new(t, centers.iter().map(|p| dt0 * *p).collect())
}

/// `H_tot = (A/2) Σ_{i≠j} a_i a_j ln|P̃_i − P̃_j| − B Σ_i a_i² (P̃_i)_1`, so that
/// `a_i dP̃_i/dt = ∇⊥_{P̃_i} H_tot`.
pub fn hamiltonian_total(state: &OdeState, params: &OdeParams) -> Result<f64> {
    check_len(&state.p_tilde, params)?;
    let a = params.geom.coupling_constant();
    let b = params.geom.drift_constant();
    let s = params.strengths();
    let p = &state.p_tilde;
    let mut pair = 0.0;
    for i in 0..p.len() {
        for j in (i + 1)..p.len() {
            let r = (p[i] - p[j]).norm();
            if r == 0.0 {
                return Err(Error::Collision {
                    i,
                    j,
                    t: state.t,
                    separation: 0.0,
                });
            }
            pair += s[i] * s[j] * r.ln();
        }
    }
    let drift: f64 = s.iter().zip(p).map(|(ai, pi)| ai * ai * pi.x).sum();
    Ok(a * pair - b * drift)
}

/// Unnormalized `Σ a_i P̃_i`; always defined.
pub fn strength_weighted_sum(state: &OdeState, params: &OdeParams) -> Vec2 {
    state
        .p_tilde
        .iter()
        .zip(params.strengths())
        .fold(Vec2::ZERO, |acc, (p, a)| acc + *p * *a)
}

/// `y = Σ a_i P̃_i / Σ a_i`.
pub fn weighted_centroid(state: &OdeState, params: &OdeParams) -> Result<Vec2> {
    let total: f64 = params.strengths().iter().sum();
    if total == 0.0 {
        return Err(Error::DegenerateTotalStrength);
    }
    Ok(strength_weighted_sum(state, params) * (1.0 / total))
}

/// Smallest pairwise distance and the pair realizing it.
pub fn min_pair_distance(positions: &[Vec2]) -> Option<(usize, usize, f64)> {
    let mut best: Option<(usize, usize, f64)> = None;
    for i in 0..positions.len() {
        for j in (i + 1)..positions.len() {
            let d = (positions[i] - positions[j]).norm();
            if best.is_none_or(|(_, _, m)| d < m) {
                best = Some((i, j, d));
            }
        }
    }
    best
}

/// Dense trajectory: one sample per step, including the initial state.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<Vec2>>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last_state(&self) -> Option<OdeState> {
        Some(OdeState::new(*self.times.last()?, self.states.last()?.clone()))
    }

    pub fn state(&self, k: usize) -> OdeState {
        OdeState::new(self.times[k], self.states[k].clone())
    }
}

/// An integration that stopped early; the samples up to the failure are kept.
#[derive(Debug, Clone, PartialEq)]
pub struct Halted {
    pub partial: Trajectory,
    pub error: Error,
}

impl std::fmt::Display for Halted {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (after {} samples)", self.error, self.partial.len())
    }
}

impl std::error::Error for Halted {}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepConfig {
    pub dt: f64,
    pub n_steps: usize,
    pub collision_floor: f64,
}

impl StepConfig {
    pub fn new(dt: f64, n_steps: usize) -> Self {
        StepConfig {
            dt,
            n_steps,
            collision_floor: DEFAULT_COLLISION_FLOOR,
        }
    }
}

/// Fixed-step RK4 integration of the point-vortex system.
pub fn integrate(
    state: &OdeState,
    params: &OdeParams,
    dt: f64,
    n_steps: usize,
) -> Result<Trajectory, Halted> {
    integrate_with(state, params, &StepConfig::new(dt, n_steps))
}

pub fn integrate_with(
    state: &OdeState,
    params: &OdeParams,
    cfg: &StepConfig,
) -> Result<Trajectory, Halted> {
    let halt = |partial: Trajectory, error: Error| Halted { partial, error };
    let mut traj = Trajectory::default();
    if let Err(e) = check_len(&state.p_tilde, params) {
        return Err(halt(traj, e));
    }
    if !(cfg.dt > 0.0) || !cfg.dt.is_finite() {
        return Err(halt(traj, Error::invalid(format!("dt must be positive, got {}", cfg.dt))));
    }
    let check = |y: &[Vec2], t: f64| -> Result<()> {
        if y.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite { t });
        }
        if let Some((i, j, d)) = min_pair_distance(y) {
            if d < cfg.collision_floor {
                return Err(Error::Collision {
                    i,
                    j,
                    t,
                    separation: d,
                });
            }
        }
        Ok(())
    };
    if let Err(e) = check(&state.p_tilde, state.t) {
        return Err(halt(traj, e));
    }

    let mut y = state.p_tilde.clone();
    let mut ws = Rk4Workspace::new(y.len());
    traj.times.reserve(cfg.n_steps + 1);
    traj.states.reserve(cfg.n_steps + 1);
    traj.times.push(state.t);
    traj.states.push(y.clone());
    for k in 1..=cfg.n_steps {
        let t_prev = state.t + (k - 1) as f64 * cfg.dt;
        let t = state.t + k as f64 * cfg.dt;
        if let Err(e) = rk4::step(&mut y, cfg.dt, &mut ws, |s, out| rhs_into(params, s, t_prev, out)) {
            return Err(halt(traj, e));
        }
        if let Err(e) = check(&y, t) {
            return Err(halt(traj, e));
        }
        traj.times.push(t);
        traj.states.push(y.clone());
    }
    Ok(traj)
}
