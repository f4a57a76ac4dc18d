//! Subcommands behind the `helivort` binary.
//!
//! Each command loads and validates the config before creating any output,
//! optionally runs a self-check suite on the configured instance, and
//! returns a process exit code.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

use crate::blob::{self, RunOutput, Scenario};
use crate::config::{DumpMode, LeapfrogRun, OdeRun, RunConfig};
use crate::diagnostics::{self, EnergyMode};
use crate::error::{Error, Result};
use crate::leapfrog::{self, DomainRoots, LeapfrogParams};
use crate::output::{self, BlobManifest, CertificateReport, LeapfrogReport, LevelReport, SweepRow, SweepSummaryRow};
use crate::pointvortex::{self, Trajectory};
use crate::vec2::Vec2;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_HALT: i32 = 2;
pub const EXIT_SELF_CHECK: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Ode,
    Leapfrog,
    Blob,
    Sweep,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Options {
    pub config: PathBuf,
    pub out: PathBuf,
    pub dump_particles: bool,
    pub self_check: bool,
    pub threads: Option<usize>,
}

/// One line of a self-check suite.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Check { name, passed, detail }
    }
}

enum Failure {
    Config(Error),
    Halt(Error),
    SelfCheck,
    Io(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) => Failure::Io(e),
            e if e.is_runtime_halt() => Failure::Halt(e),
            e => Failure::Config(e),
        }
    }
}

/// Run a subcommand and return its exit code. Diagnostics go to stderr.
pub fn run(command: Command, opts: &Options) -> i32 {
    let outcome = match opts.threads {
        Some(0) => Err(Failure::Config(Error::Config("--threads must be at least 1".into()))),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(command, opts)),
            Err(e) => Err(Failure::Io(Error::Io(e.to_string()))),
        },
        None => dispatch(command, opts),
    };
    match outcome {
        Ok(code) => code,
        Err(Failure::Config(e)) | Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
        Err(Failure::Halt(e)) => {
            eprintln!("halted: {e}");
            EXIT_HALT
        }
        Err(Failure::SelfCheck) => EXIT_SELF_CHECK,
    }
}

fn dispatch(command: Command, opts: &Options) -> Result<i32, Failure> {
    let cfg = RunConfig::load(&opts.config).map_err(Failure::Config)?;
    match command {
        Command::Ode => cmd_ode(&cfg, opts),
        Command::Leapfrog => cmd_leapfrog(&cfg, opts),
        Command::Blob => cmd_blob(&cfg, opts),
        Command::Sweep => cmd_sweep(&cfg, opts),
    }
}

fn report_checks(suite: &str, checks: &[Check]) -> bool {
    for c in checks {
        let verdict = if c.passed { "PASS" } else { "FAIL" };
        eprintln!("self-check {suite}/{}: {verdict} ({})", c.name, c.detail);
    }
    checks.iter().all(|c| c.passed)
}

fn gate(opts: &Options, suite: &str, checks: impl FnOnce() -> Result<Vec<Check>>) -> Result<(), Failure> {
    if opts.self_check && !report_checks(suite, &checks()?) {
        return Err(Failure::SelfCheck);
    }
    Ok(())
}

fn prepare_out(dir: &Path) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(|e| Failure::Io(e.into()))
}

fn cmd_ode(cfg: &RunConfig, opts: &Options) -> Result<i32, Failure> {
    let run = cfg.ode_run()?;
    gate(opts, "ode", || ode_checks(&run))?;
    prepare_out(&opts.out)?;
    let (traj, halt) = match pointvortex::integrate_with(&run.initial, &run.params, &run.step) {
        Ok(t) => (t, None),
        Err(h) => (h.partial, Some(h.error)),
    };
    let rows = output::ode_rows(&traj, &run.params, run.output_every)?;
    output::write_csv(&opts.out.join("ode.csv"), &rows)?;
    match halt {
        None => Ok(EXIT_OK),
        Some(e) => Err(e.into()),
    }
}

fn cmd_leapfrog(cfg: &RunConfig, opts: &Options) -> Result<i32, Failure> {
    let run = cfg.leapfrog_run()?;
    gate(opts, "leapfrog", || leapfrog_checks(&run))?;
    let lf = &run.params;
    let (x_init, _) = lf.reduce(&run.initial)?;
    let initial_level = lf.level_of_point(x_init);

    let mut all_levels = vec![initial_level];
    all_levels.extend(&run.levels);
    let reports: Vec<LevelReport> = all_levels
        .par_iter()
        .map(|&c| level_report(lf, c))
        .collect::<Result<_>>()?;
    let curves: Vec<_> = all_levels
        .par_iter()
        .map(|&c| lf.level_curves(c, run.portrait_samples, run.open_extent))
        .collect::<Result<_>>()?;

    let (certificate, certificate_note) = match reports[0].t_e {
        Some(period) => {
            let cert = certificate_run(&run, period)?;
            (Some(cert), None)
        }
        None => (None, Some("initial level is unbounded; certificate skipped".to_string())),
    };

    let report = LeapfrogReport {
        a1: lf.coef_a1(),
        b1: lf.coef_b1(),
        a_prime: lf.a_prime(),
        c_star: lf.critical_level().ok(),
        initial_level: reports[0].clone(),
        levels: reports[1..].to_vec(),
        certificate,
        certificate_note,
    };
    prepare_out(&opts.out)?;
    output::write_json(&opts.out.join("leapfrog.json"), &report)?;
    let rows: Vec<_> = all_levels
        .iter()
        .zip(&curves)
        .enumerate()
        .flat_map(|(k, (c, cv))| output::portrait_rows(k, *c, cv))
        .collect();
    output::write_csv(&opts.out.join("portrait.csv"), &rows)?;
    Ok(EXIT_OK)
}

fn level_report(lf: &LeapfrogParams, c_e: f64) -> Result<LevelReport> {
    let roots = lf.domain_roots(c_e)?;
    let t_e = match roots {
        DomainRoots::Periodic { .. } => Some(lf.period_quadrature(c_e)?),
        DomainRoots::Unbounded { .. } => None,
    };
    Ok(LevelReport {
        c_e,
        ratio_to_critical: lf.critical_level().ok().map(|c| c_e / c),
        class: if roots.is_periodic() { "periodic" } else { "unbounded" }.to_string(),
        roots: roots.roots(),
        t_e,
        t_e_asymptotic: lf.period_asymptotic(c_e),
    })
}

/// Integrate the full two-vortex system for `k` periods and check the
/// minimum separation of the relative trajectory.
fn certificate_run(run: &LeapfrogRun, period: f64) -> Result<CertificateReport> {
    let ode = run.params.ode_params()?;
    let n_steps = (run.periods * run.steps_per_period as f64).ceil() as usize;
    let horizon = run.periods * period;
    let dt = horizon / n_steps as f64;
    let traj = pointvortex::integrate(&run.initial, &ode, dt, n_steps).map_err(|h| h.error)?;
    let rel = relative_path(&run.params, &traj)?;
    let cert = leapfrog::min_separation_certificate(&run.params.geom, &rel, run.rho)?;
    Ok(CertificateReport {
        rho: run.rho,
        periods: run.periods,
        horizon,
        passed: cert.passed,
        min_separation: cert.min_separation,
        threshold: cert.threshold,
    })
}

fn relative_path(lf: &LeapfrogParams, traj: &Trajectory) -> Result<Vec<Vec2>> {
    (0..traj.len()).map(|k| Ok(lf.reduce(&traj.state(k))?.0)).collect()
}

fn cmd_blob(cfg: &RunConfig, opts: &Options) -> Result<i32, Failure> {
    let mut scenario = cfg.scenario()?;
    scenario.dump_particles = opts.dump_particles;
    let dump_mode = cfg.blob_section()?.dump;
    gate(opts, "blob", || blob_checks(&scenario))?;
    prepare_out(&opts.out)?;

    let start = Instant::now();
    let out = blob::run(&scenario)?;
    let elapsed = start.elapsed().as_secs_f64();

    let mut files = vec!["diagnostics.csv".to_string(), "pairwise.csv".to_string()];
    output::write_csv(&opts.out.join("diagnostics.csv"), &output::diagnostics_rows(&out.records))?;
    output::write_csv(&opts.out.join("pairwise.csv"), &output::pair_rows(&out.records))?;
    if scenario.dump_particles {
        files.extend(write_dumps(&opts.out, &out, dump_mode)?);
    }
    let manifest = manifest(&scenario, &out, elapsed, files);
    output::write_json(&opts.out.join("manifest.json"), &manifest)?;
    match out.halted {
        None => Ok(EXIT_OK),
        Some(e) => Err(e.into()),
    }
}

fn write_dumps(dir: &Path, out: &RunOutput, mode: DumpMode) -> Result<Vec<String>> {
    match mode {
        DumpMode::Single => {
            let rows: Vec<_> = out
                .dumps
                .iter()
                .flat_map(|d| output::particle_rows(d, &out.final_field))
                .collect();
            output::write_csv(&dir.join("particles.csv"), &rows)?;
            Ok(vec!["particles.csv".to_string()])
        }
        DumpMode::PerTime => out
            .dumps
            .iter()
            .enumerate()
            .map(|(k, d)| {
                let name = format!("particles_{k:05}.csv");
                output::write_csv(&dir.join(&name), &output::particle_rows(d, &out.final_field))?;
                Ok(name)
            })
            .collect(),
    }
}

fn manifest(scenario: &Scenario, out: &RunOutput, elapsed: f64, files: Vec<String>) -> BlobManifest {
    let field = &out.final_field;
    BlobManifest {
        epsilon: scenario.epsilon,
        particles: field.len(),
        particles_per_component: (0..field.n_components)
            .map(|i| field.component_indices(i).count())
            .collect(),
        spacing: field.spacing,
        delta: field.delta,
        dt: out.dt,
        n_steps: out.n_steps,
        steps_taken: out.steps_taken,
        records: out.records.len(),
        completed: out.completed(),
        halt_reason: out.halted.as_ref().map(|e| e.to_string()),
        wall_clock_seconds: elapsed,
        files,
    }
}

/// Largest tracking error over a run, if the reference covered any record.
pub fn max_tracking_error(out: &RunOutput) -> Option<f64> {
    out.records
        .iter()
        .filter_map(|r| r.max_tracking_error())
        .reduce(f64::max)
}

fn cmd_sweep(cfg: &RunConfig, opts: &Options) -> Result<i32, Failure> {
    let epsilons = cfg.sweep_epsilons()?;
    let scenarios: Vec<Scenario> = epsilons.iter().map(|&e| cfg.scenario_at(e)).collect::<Result<_>>()?;
    gate(opts, "sweep", || {
        let mut all = Vec::new();
        for s in &scenarios {
            all.extend(blob_checks(s)?);
        }
        Ok(all)
    })?;
    prepare_out(&opts.out)?;

    let results: Vec<Result<RunOutput>> = scenarios.par_iter().map(blob::run).collect();
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for (eps, res) in epsilons.iter().zip(&results) {
        match res {
            Ok(out) => {
                for r in &out.records {
                    for (i, c) in r.components.iter().enumerate() {
                        if let Some(e) = c.tracking_error {
                            rows.push(SweepRow {
                                epsilon: *eps,
                                t: r.t,
                                i: i + 1,
                                track_err: e,
                            });
                        }
                    }
                }
                summary.push(SweepSummaryRow {
                    epsilon: *eps,
                    particles: out.particle_count(),
                    max_track_err: max_tracking_error(out),
                    status: match &out.halted {
                        None => "ok".to_string(),
                        Some(e) => format!("failed: {e}"),
                    },
                });
            }
            Err(e) => summary.push(SweepSummaryRow {
                epsilon: *eps,
                particles: 0,
                max_track_err: None,
                status: format!("failed: {e}"),
            }),
        }
    }
    output::write_csv(&opts.out.join("sweep.csv"), &rows)?;
    output::write_csv(&opts.out.join("sweep_summary.csv"), &summary)?;

    if summary.iter().any(|s| s.status != "ok") {
        return Ok(EXIT_HALT);
    }
    if opts.self_check {
        let errs: Vec<f64> = summary.iter().filter_map(|s| s.max_track_err).collect();
        let decreasing = errs.len() == summary.len() && errs.windows(2).all(|w| w[1] < w[0]);
        let check = Check::new("tracking_error_trend", decreasing, format!("max errors {errs:?}"));
        if !report_checks("sweep", &[check]) {
            return Ok(EXIT_SELF_CHECK);
        }
    }
    Ok(EXIT_OK)
}

/// Geometry and point-vortex invariants on the configured instance.
pub fn ode_checks(run: &OdeRun) -> Result<Vec<Check>> {
    let mut checks = geometry_checks(run)?;
    let params = &run.params;
    let n = run.step.n_steps.min(2000);
    let traj = match pointvortex::integrate_with(
        &run.initial,
        params,
        &pointvortex::StepConfig { n_steps: n, ..run.step },
    ) {
        Ok(t) => t,
        Err(h) => {
            checks.push(Check::new("short_run", false, h.error.to_string()));
            return Ok(checks);
        }
    };
    let first = traj.state(0);
    let last = traj.last_state().unwrap_or_else(|| first.clone());
    let h0 = pointvortex::hamiltonian_total(&first, params)?;
    let h1 = pointvortex::hamiltonian_total(&last, params)?;
    let s = params.strengths();
    let pair_scale: f64 = (0..s.len())
        .flat_map(|i| (i + 1..s.len()).map(move |j| (s[i] * s[j]).abs()))
        .sum::<f64>()
        * params.geom.coupling_constant();
    let drift = (h1 - h0).abs() / h0.abs().max(pair_scale).max(f64::MIN_POSITIVE);
    checks.push(Check::new(
        "hamiltonian_drift",
        drift <= 1e-6,
        format!("relative drift {drift:e} over {n} steps (limit 1e-6)"),
    ));
    let b = params.geom.drift_constant();
    let sum_a2: f64 = params.strengths().iter().map(|a| a * a).sum();
    let s0 = pointvortex::strength_weighted_sum(&first, params);
    let s1 = pointvortex::strength_weighted_sum(&last, params);
    let expected = s0 + Vec2::new(0.0, -b * sum_a2 * (last.t - first.t));
    let err = (s1 - expected).norm();
    let scale = 1.0 + s0.norm() + expected.norm();
    checks.push(Check::new(
        "weighted_sum_drift",
        err <= 1e-8 * scale,
        format!("deviation {err:e} (limit {:e})", 1e-8 * scale),
    ));
    Ok(checks)
}

fn geometry_checks(run: &OdeRun) -> Result<Vec<Check>> {
    let geom = &run.params.geom;
    let mut points = vec![geom.base_point()];
    points.extend(pointvortex::to_physical(&run.initial, &run.params));
    let mut worst_fd = 0.0f64;
    let mut worst_det = 0.0f64;
    for &x in &points {
        let jac = geom.dt_map(x);
        let step = 1e-6 * (1.0 + x.norm());
        let col = |e: Vec2| (geom.t_map(x + e * step) - geom.t_map(x - e * step)) * (0.5 / step);
        let c1 = col(Vec2::new(1.0, 0.0));
        let c2 = col(Vec2::new(0.0, 1.0));
        let scale = jac.a.abs().max(jac.d.abs());
        let diff = [jac.a - c1.x, jac.c - c1.y, jac.b - c2.x, jac.d - c2.y]
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()));
        worst_fd = worst_fd.max(diff / scale);
        let h2 = geom.pitch().powi(2);
        let det = geom.k_matrix(x).det();
        let want = h2 / (h2 + x.norm_sq());
        worst_det = worst_det.max((det - want).abs() / want);
    }
    Ok(vec![
        Check::new(
            "dt_map_vs_finite_difference",
            worst_fd <= 1e-5,
            format!("max relative deviation {worst_fd:e} (limit 1e-5)"),
        ),
        Check::new(
            "det_k_identity",
            worst_det <= 1e-12,
            format!("max relative deviation {worst_det:e} (limit 1e-12)"),
        ),
    ])
}

/// Consistency of the reduced two-vortex system with the full one, and of the
/// quadrature period with the Poincaré return time.
pub fn leapfrog_checks(run: &LeapfrogRun) -> Result<Vec<Check>> {
    let lf = &run.params;
    let ode = lf.ode_params()?;
    let v = pointvortex::rhs(&run.initial, &ode)?;
    let (x, _) = lf.reduce(&run.initial)?;
    let rel = lf.relative_velocity(x);
    let full = v[0] - v[1];
    let dev = (rel - full).norm() / full.norm().max(f64::MIN_POSITIVE);
    let mut checks = vec![Check::new(
        "reduced_velocity",
        dev <= 1e-12,
        format!("relative deviation {dev:e} (limit 1e-12)"),
    )];
    let c_e = lf.level_of_point(x);
    if let DomainRoots::Periodic { .. } = lf.domain_roots(c_e)? {
        let tq = lf.period_quadrature(c_e)?;
        let to = lf.orbit_period(x, tq / 4096.0, 3.0 * tq)?;
        let dev = ((to - tq) / tq).abs();
        checks.push(Check::new(
            "period_quadrature_vs_return_time",
            dev <= 1e-4,
            format!("T_quad {tq}, T_return {to}, relative deviation {dev:e} (limit 1e-4)"),
        ));
    }
    Ok(checks)
}

/// Initialization invariants of a blob scenario.
pub fn blob_checks(scenario: &Scenario) -> Result<Vec<Check>> {
    let field = blob::init_patches(scenario)?;
    let l = field.log_scale();
    let mut mass_dev = 0.0f64;
    let mut support = true;
    for (i, a) in scenario.strengths.iter().enumerate() {
        let gamma = a / (l * l);
        mass_dev = mass_dev.max((field.component_mass(i) - gamma).abs() / gamma.abs());
        let c = scenario.disk_center(i);
        support &= field
            .component_indices(i)
            .all(|p| (field.positions[p] - c).norm() < scenario.epsilon);
    }
    let reference = pointvortex::to_physical(&scenario.ode_initial_state()?, &scenario.ode_params()?);
    let track = diagnostics::tracking_error(&field, 0.0, &reference)?;
    let track_max = track.iter().copied().fold(0.0, f64::max);
    let track_limit = l * 0.5 * field.spacing;
    let energy = diagnostics::energy_decomposition(&field, EnergyMode::Regularized)?;
    let recomposed: f64 =
        energy.self_energy.iter().sum::<f64>() + 2.0 * energy.pair_energy.iter().map(|p| p.2).sum::<f64>();
    let e_dev = (recomposed - energy.total).abs() / energy.total.abs().max(f64::MIN_POSITIVE);
    Ok(vec![
        Check::new(
            "component_mass",
            mass_dev <= 1e-14,
            format!("eps {}: max relative deviation {mass_dev:e} (limit 1e-14)", scenario.epsilon),
        ),
        Check::new(
            "support_in_disks",
            support,
            format!("eps {}: all particles within their initial disks", scenario.epsilon),
        ),
        Check::new(
            "initial_tracking_error",
            track_max <= track_limit,
            format!("eps {}: {track_max:e} (limit {track_limit:e})", scenario.epsilon),
        ),
        Check::new(
            "energy_decomposition",
            e_dev <= 1e-12,
            format!("eps {}: relative deviation {e_dev:e} (limit 1e-12)", scenario.epsilon),
        ),
    ])
}
