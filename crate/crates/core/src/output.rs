//! CSV and JSON artifacts. Every row type reads back with [`read_csv`].
//!
//! Floats are written in shortest round-trip form, so reading a file back
//! reproduces the computed values bit for bit. Vortex and component indices
//! are 1-based in all files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::blob::{ParticleDump, ParticleField};
use crate::diagnostics::DiagnosticsRecord;
use crate::error::Result;
use crate::leapfrog::{CurvePart, LevelPolyline};
use crate::pointvortex::{self, OdeParams, OdeState, Trajectory};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OdeRow {
    pub t: f64,
    pub i: usize,
    #[serde(rename = "Ptilde_x")]
    pub ptilde_x: f64,
    #[serde(rename = "Ptilde_y")]
    pub ptilde_y: f64,
    #[serde(rename = "P_x")]
    pub p_x: f64,
    #[serde(rename = "P_y")]
    pub p_y: f64,
    #[serde(rename = "H_tot")]
    pub h_tot: f64,
    pub centroid_x: f64,
    pub centroid_y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRow {
    pub t: f64,
    pub i: usize,
    #[serde(rename = "Bx")]
    pub bx: f64,
    #[serde(rename = "By")]
    pub by: f64,
    #[serde(rename = "J")]
    pub j: f64,
    #[serde(rename = "mass_out_R1")]
    pub mass_out_r1: f64,
    #[serde(rename = "mass_out_R2")]
    pub mass_out_r2: f64,
    #[serde(rename = "E_self")]
    pub e_self: f64,
    #[serde(rename = "G_conc")]
    pub g_conc: f64,
    pub track_err: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRow {
    pub t: f64,
    pub i: usize,
    pub j: usize,
    #[serde(rename = "E_pair")]
    pub e_pair: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParticleRow {
    pub t: f64,
    pub component: usize,
    pub x1: f64,
    pub x2: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub epsilon: f64,
    pub t: f64,
    pub i: usize,
    pub track_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummaryRow {
    pub epsilon: f64,
    pub particles: usize,
    pub max_track_err: Option<f64>,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PortraitRow {
    pub level: usize,
    #[serde(rename = "C_E")]
    pub c_e: f64,
    pub part: String,
    pub branch: i8,
    pub x1: f64,
    pub x2: f64,
}

/// One level of the leapfrog analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelReport {
    #[serde(rename = "C_E")]
    pub c_e: f64,
    pub ratio_to_critical: Option<f64>,
    pub class: String,
    pub roots: Vec<f64>,
    #[serde(rename = "T_E")]
    pub t_e: Option<f64>,
    #[serde(rename = "T_E_asymptotic")]
    pub t_e_asymptotic: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub rho: f64,
    pub periods: f64,
    pub horizon: f64,
    pub passed: bool,
    pub min_separation: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeapfrogReport {
    #[serde(rename = "A1")]
    pub a1: f64,
    #[serde(rename = "B1")]
    pub b1: f64,
    pub a_prime: Option<f64>,
    #[serde(rename = "C_star")]
    pub c_star: Option<f64>,
    pub initial_level: LevelReport,
    pub levels: Vec<LevelReport>,
    pub certificate: Option<CertificateReport>,
    pub certificate_note: Option<String>,
}

/// Run manifest of a blob experiment. Wall-clock time lives only here.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlobManifest {
    pub epsilon: f64,
    pub particles: usize,
    pub particles_per_component: Vec<usize>,
    pub spacing: f64,
    pub delta: f64,
    pub dt: f64,
    pub n_steps: usize,
    pub steps_taken: usize,
    pub records: usize,
    pub completed: bool,
    pub halt_reason: Option<String>,
    pub wall_clock_seconds: f64,
    pub files: Vec<String>,
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Same bytes as [`write_csv`] would produce.
pub fn csv_string<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| crate::Error::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn read_csv<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path)?;
    let rows = r.deserialize().collect::<std::result::Result<Vec<T>, _>>()?;
    Ok(rows)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Rows for every `every`-th sample of a trajectory, always including the last.
pub fn ode_rows(traj: &Trajectory, params: &OdeParams, every: usize) -> Result<Vec<OdeRow>> {
    let every = every.max(1);
    let n = traj.len();
    let mut rows = Vec::with_capacity(n.div_ceil(every) * params.len());
    for k in (0..n).filter(|k| k % every == 0 || *k + 1 == n) {
        let state: OdeState = traj.state(k);
        let physical = pointvortex::to_physical(&state, params);
        let h_tot = pointvortex::hamiltonian_total(&state, params)?;
        let centroid = pointvortex::weighted_centroid(&state, params).ok();
        for (i, (pt, p)) in state.p_tilde.iter().zip(&physical).enumerate() {
            rows.push(OdeRow {
                t: state.t,
                i: i + 1,
                ptilde_x: pt.x,
                ptilde_y: pt.y,
                p_x: p.x,
                p_y: p.y,
                h_tot,
                centroid_x: centroid.map_or(f64::NAN, |c| c.x),
                centroid_y: centroid.map_or(f64::NAN, |c| c.y),
            });
        }
    }
    Ok(rows)
}

pub fn diagnostics_rows(records: &[DiagnosticsRecord]) -> Vec<DiagnosticsRow> {
    records
        .iter()
        .flat_map(|r| {
            r.components.iter().enumerate().map(move |(i, c)| DiagnosticsRow {
                t: r.t,
                i: i + 1,
                bx: c.center.x,
                by: c.center.y,
                j: c.moment,
                mass_out_r1: c.mass_outside[0],
                mass_out_r2: c.mass_outside[1],
                e_self: c.self_energy,
                g_conc: c.concentration,
                track_err: c.tracking_error,
            })
        })
        .collect()
}

pub fn pair_rows(records: &[DiagnosticsRecord]) -> Vec<PairRow> {
    records
        .iter()
        .flat_map(|r| {
            r.pair_energy.iter().map(move |&(i, j, e)| PairRow {
                t: r.t,
                i: i + 1,
                j: j + 1,
                e_pair: e,
            })
        })
        .collect()
}

/// Particle rows for one dump; weights and labels are fixed over a run.
pub fn particle_rows(dump: &ParticleDump, field: &ParticleField) -> Vec<ParticleRow> {
    dump.positions
        .iter()
        .zip(field.component.iter().zip(&field.weights))
        .map(|(x, (c, w))| ParticleRow {
            t: dump.t,
            component: c + 1,
            x1: x.x,
            x2: x.y,
            weight: *w,
        })
        .collect()
}

pub fn portrait_rows(level: usize, c_e: f64, curves: &[LevelPolyline]) -> Vec<PortraitRow> {
    curves
        .iter()
        .flat_map(|c| {
            let part = match c.part {
                CurvePart::Closed => "closed",
                CurvePart::Open => "open",
            };
            c.points.iter().map(move |p| PortraitRow {
                level,
                c_e,
                part: part.to_string(),
                branch: c.branch,
                x1: p.x,
                x2: p.y,
            })
        })
        .collect()
}
