//! Functionals of a particle field: vorticity centers, moments of inertia,
//! mass outside a disk, the singular-kernel energy and its decomposition,
//! the concentration functional, and the rescaled tracking error.
//!
//! Component indices are zero-based. All double sums exclude `p = q`.

use rayon::prelude::*;

use crate::blob::ParticleField;
use crate::error::{Error, Result};
use crate::kernel::SourcePoint;
use crate::vec2::Vec2;

/// Which blob radius the energy uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EnergyMode {
    /// The solver's δ; conserved by the regularized dynamics.
    #[default]
    Regularized,
    /// δ = 0, for post-hoc analysis. Coincident particles are an error.
    Unregularized,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyDecomposition {
    pub total: f64,
    /// `E_i`, one per component.
    pub self_energy: Vec<f64>,
    /// `(i, j, E_{i,j})` for `i > j`.
    pub pair_energy: Vec<(usize, usize, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentDiagnostics {
    pub center: Vec2,
    pub moment: f64,
    pub mass_outside: [f64; 2],
    pub self_energy: f64,
    pub concentration: f64,
    pub tracking_error: Option<f64>,
}

/// One time sample of all diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub components: Vec<ComponentDiagnostics>,
    pub pair_energy: Vec<(usize, usize, f64)>,
    pub total_energy: f64,
}

impl DiagnosticsRecord {
    pub fn max_tracking_error(&self) -> Option<f64> {
        self.components
            .iter()
            .map(|c| c.tracking_error)
            .try_fold(f64::NEG_INFINITY, |m, e| e.map(|e| m.max(e)))
    }
}

fn check_component(field: &ParticleField, i: usize) -> Result<()> {
    if i >= field.n_components {
        return Err(Error::invalid(format!(
            "component {i} out of range (field has {})",
            field.n_components
        )));
    }
    Ok(())
}

/// `B = (1/γ_i) Σ_{p∈i} w_p z_p`.
pub fn center_of_vorticity(field: &ParticleField, i: usize) -> Result<Vec2> {
    check_component(field, i)?;
    let mut mass = 0.0;
    let mut moment = Vec2::ZERO;
    for p in field.component_indices(i) {
        mass += field.weights[p];
        moment += field.positions[p] * field.weights[p];
    }
    if mass == 0.0 {
        return Err(Error::ZeroMass(i));
    }
    Ok(moment * (1.0 / mass))
}

/// `Σ_{p∈i} |w_p| |z_p − q|²` about an arbitrary point `q`.
pub fn moment_about(field: &ParticleField, i: usize, q: Vec2) -> f64 {
    field
        .component_indices(i)
        .map(|p| field.weights[p].abs() * (field.positions[p] - q).norm_sq())
        .sum()
}

/// Moment of inertia about the vorticity center; the minimum of
/// [`moment_about`] over all `q` for a single-signed component.
pub fn moment_of_inertia(field: &ParticleField, i: usize) -> Result<f64> {
    let b = center_of_vorticity(field, i)?;
    Ok(moment_about(field, i, b))
}

/// `Σ |w_p|` over particles of component `i` strictly farther than `radius` from `center`.
pub fn mass_outside(field: &ParticleField, i: usize, center: Vec2, radius: f64) -> Result<f64> {
    check_component(field, i)?;
    if !(radius >= 0.0) {
        return Err(Error::invalid(format!("radius must be non-negative, got {radius}")));
    }
    let r2 = radius * radius;
    Ok(field
        .component_indices(i)
        .filter(|p| (field.positions[*p] - center).norm_sq() > r2)
        .map(|p| field.weights[p].abs())
        .fold(0.0, |acc, w| acc + w))
}

/// Complement of [`mass_outside`].
pub fn mass_inside(field: &ParticleField, i: usize, center: Vec2, radius: f64) -> Result<f64> {
    check_component(field, i)?;
    let r2 = radius * radius;
    Ok(field
        .component_indices(i)
        .filter(|p| (field.positions[*p] - center).norm_sq() <= r2)
        .map(|p| field.weights[p].abs())
        .fold(0.0, |acc, w| acc + w))
}

/// Interaction matrix `M[i][j] = −Σ_{p∈i, q∈j, p≠q} w_p w_q G_δ(z_p, z_q)`.
fn energy_matrix(field: &ParticleField, mode: EnergyMode) -> Result<Vec<Vec<f64>>> {
    let nc = field.n_components;
    let delta2 = match mode {
        EnergyMode::Regularized => field.delta * field.delta,
        EnergyMode::Unregularized => 0.0,
    };
    let sources: Vec<SourcePoint> = field
        .positions
        .iter()
        .map(|y| SourcePoint::new(&field.geom, *y))
        .collect();
    let two_pi_h = 2.0 * std::f64::consts::PI * field.geom.pitch();
    let rows: Vec<Result<Vec<f64>>> = (0..field.len())
        .into_par_iter()
        .map(|p| {
            let mut acc = vec![0.0; nc];
            let tp = sources[p].t;
            for (q, src) in sources.iter().enumerate() {
                if q == p {
                    continue;
                }
                let rho2 = (tp - src.t).norm_sq() + delta2;
                if rho2 == 0.0 {
                    return Err(Error::invalid(format!(
                        "particles {p} and {q} coincide; unregularized energy is undefined"
                    )));
                }
                acc[field.component[q]] += field.weights[q] * src.scaled_sqrt_norm * rho2.ln();
            }
            // H(z_p, z_q) = |Z_p|^{1/2} |Z_q|^{1/2} / (2πh)
            let scale = -0.5 * field.weights[p] * sources[p].scaled_sqrt_norm * two_pi_h;
            Ok(acc.into_iter().map(|a| a * scale).collect())
        })
        .collect();
    let mut m = vec![vec![0.0; nc]; nc];
    for (p, row) in rows.into_iter().enumerate() {
        let row = row?;
        let i = field.component[p];
        for (j, v) in row.into_iter().enumerate() {
            m[i][j] += v;
        }
    }
    Ok(m)
}

/// `E = Σ E_i + 2 Σ_{i>j} E_{i,j}` with the singular kernel only.
pub fn energy_decomposition(field: &ParticleField, mode: EnergyMode) -> Result<EnergyDecomposition> {
    let m = energy_matrix(field, mode)?;
    let nc = field.n_components;
    let self_energy: Vec<f64> = (0..nc).map(|i| m[i][i]).collect();
    let mut pair_energy = Vec::new();
    for i in 0..nc {
        for j in 0..i {
            pair_energy.push((i, j, 0.5 * (m[i][j] + m[j][i])));
        }
    }
    let total = self_energy.iter().sum::<f64>() + 2.0 * pair_energy.iter().map(|e| e.2).sum::<f64>();
    Ok(EnergyDecomposition {
        total,
        self_energy,
        pair_energy,
    })
}

/// `Σ_{p≠q ∈ i, |z_p − z_q| ≥ ε/L} w_p w_q ln(L |z_p − z_q| / ε)` with `L = ln(1/ε)`.
pub fn concentration_functional(field: &ParticleField, i: usize) -> Result<f64> {
    check_component(field, i)?;
    let l = field.log_scale();
    let cutoff = field.epsilon / l;
    let members: Vec<usize> = field.component_indices(i).collect();
    let rows: Vec<f64> = members
        .par_iter()
        .map(|&p| {
            let mut acc = 0.0;
            for &q in &members {
                if q == p {
                    continue;
                }
                let r = (field.positions[p] - field.positions[q]).norm();
                if r >= cutoff {
                    acc += field.weights[q] * (l * r / field.epsilon).ln();
                }
            }
            field.weights[p] * acc
        })
        .collect();
    Ok(rows.iter().sum())
}

/// `ln(1/ε) |B_i − (x0 + P_i/ln(1/ε))|` for each component, where `reference`
/// holds the rescaled point-vortex centers `P_i` at time `t_reference`.
pub fn tracking_error(field: &ParticleField, t_reference: f64, reference: &[Vec2]) -> Result<Vec<f64>> {
    if (field.t - t_reference).abs() > 1e-12 * field.t.abs().max(1.0) {
        return Err(Error::TimeMismatch {
            field: field.t,
            reference: t_reference,
        });
    }
    if reference.len() != field.n_components {
        return Err(Error::invalid(format!(
            "reference has {} centers, field has {} components",
            reference.len(),
            field.n_components
        )));
    }
    let l = field.log_scale();
    let x0 = field.geom.base_point();
    (0..field.n_components)
        .map(|i| {
            let b = center_of_vorticity(field, i)?;
            Ok(l * (b - (x0 + reference[i] * (1.0 / l))).norm())
        })
        .collect()
}

/// All diagnostics of one sample. `reference` are the rescaled point-vortex
/// centers at `field.t`, if available.
pub fn record(field: &ParticleField, mass_radii: &[f64; 2], reference: Option<&[Vec2]>) -> DiagnosticsRecord {
    let energy = energy_decomposition(field, EnergyMode::Regularized).unwrap_or_else(|_| EnergyDecomposition {
        total: f64::NAN,
        self_energy: vec![f64::NAN; field.n_components],
        pair_energy: Vec::new(),
    });
    let tracking = reference.and_then(|r| tracking_error(field, field.t, r).ok());
    let components = (0..field.n_components)
        .map(|i| {
            let center = center_of_vorticity(field, i).unwrap_or(Vec2::new(f64::NAN, f64::NAN));
            ComponentDiagnostics {
                center,
                moment: moment_about(field, i, center),
                mass_outside: [
                    mass_outside(field, i, center, mass_radii[0]).unwrap_or(f64::NAN),
                    mass_outside(field, i, center, mass_radii[1]).unwrap_or(f64::NAN),
                ],
                self_energy: energy.self_energy[i],
                concentration: concentration_functional(field, i).unwrap_or(f64::NAN),
                tracking_error: tracking.as_ref().map(|e| e[i]),
            }
        })
        .collect();
    DiagnosticsRecord {
        t: field.t,
        components,
        pair_energy: energy.pair_energy,
        total_energy: energy.total,
    }
}
