//! Acceptance suite: one line per criterion, non-zero exit if any fails.

mod common;

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use helivort::blob::{self, Scenario};
use helivort::leapfrog::{self, DomainRoots, LeapfrogParams};
use helivort::pointvortex::{self, OdeParams, OdeState};
use helivort::{HelixGeometry, Vec2};

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: String) -> Verdict {
    Verdict { passed, detail }
}

/// The fixed two-vortex scenario: h = r0 = 1, a = (2, 1), small separation.
fn centers() -> Vec<Vec2> {
    vec![Vec2::new(0.0, 0.19), Vec2::new(0.0, -0.19)]
}

fn reference_geom() -> HelixGeometry {
    HelixGeometry::new(1.0, 1.0).unwrap()
}

fn two_vortex() -> (LeapfrogParams, OdeParams, OdeState, f64) {
    let geom = reference_geom();
    let lf = LeapfrogParams::new(geom, 2.0, 1.0).unwrap();
    let params = lf.ode_params().unwrap();
    let state = pointvortex::from_physical(0.0, &centers(), &params);
    let (x, _) = lf.reduce(&state).unwrap();
    let period = lf.period_quadrature(lf.level_of_point(x)).unwrap();
    (lf, params, state, period)
}

fn blob_scenario(epsilon: f64, n_side: usize, periods: f64, cadence: usize) -> Scenario {
    let (_, _, _, period) = two_vortex();
    let mut s = Scenario::new(reference_geom(), vec![2.0, 1.0], centers(), epsilon);
    s.n_side = n_side;
    s.t_final = periods * period;
    s.cadence = cadence;
    s
}

fn geometry_correctness() -> Verdict {
    let mut rng = common::rng(1);
    let mut fd = 0.0f64;
    let mut det = 0.0f64;
    for &(h, r0) in &[(1.0, 1.0), (0.5, 2.0), (3.0, 0.5), (1.0, 0.0)] {
        let g = HelixGeometry::new(h, r0).unwrap();
        for _ in 0..25 {
            let x = common::random_point(&mut rng, 3.0);
            let jac = g.dt_map(x);
            let [c1, c2] = common::fd_jacobian(|y| g.t_map(y), x, 1e-6);
            let scale = jac.a.abs().max(jac.d.abs());
            for (a, b) in [(jac.a, c1.x), (jac.c, c1.y), (jac.b, c2.x), (jac.d, c2.y)] {
                fd = fd.max((a - b).abs() / scale);
            }
            let want = h * h / (h * h + x.norm_sq());
            det = det.max((g.k_matrix(x).det() - want).abs() / want);
        }
    }
    let g = reference_geom();
    let mut tau = 0.0f64;
    for k in 0..=100 {
        let s = k as f64;
        let q = common::tau_by_quadrature(1.0, s);
        tau = tau.max((g.tau(s).unwrap() - q).abs() / q);
    }
    let a_err = (g.interaction_constant() - 1.0 / PI).abs();
    verdict(
        fd <= 1e-5 && det <= 1e-12 && tau <= 1e-10 && a_err <= 1e-12,
        format!("FD Jacobian {fd:.1e} (≤1e-5), det K {det:.1e} (≤1e-12), tau {tau:.1e} (≤1e-10), |A-1/pi| {a_err:.1e} (≤1e-12)"),
    )
}

fn ode_conservation() -> Verdict {
    let (_, params, state, period) = two_vortex();
    let n = 10 * 4096;
    let traj = pointvortex::integrate(&state, &params, period / 4096.0, n).unwrap();
    let h0 = pointvortex::hamiltonian_total(&state, &params).unwrap();
    let s0 = pointvortex::strength_weighted_sum(&state, &params);
    let b = params.geom.drift_constant();
    let sum_a2 = 5.0;
    let mut h_drift = 0.0f64;
    let mut s_drift = 0.0f64;
    for k in 0..traj.len() {
        let st = traj.state(k);
        let h = pointvortex::hamiltonian_total(&st, &params).unwrap();
        h_drift = h_drift.max(((h - h0) / h0).abs());
        let expected = s0 + Vec2::new(0.0, -b * sum_a2 * st.t);
        s_drift = s_drift.max((pointvortex::strength_weighted_sum(&st, &params) - expected).norm());
    }
    verdict(
        h_drift <= 1e-8 && s_drift <= 1e-8,
        format!("10 periods at dt = T/4096: H_tot drift {h_drift:.1e} (≤1e-8), weighted-sum deviation {s_drift:.1e} (≤1e-8)"),
    )
}

fn period_triangulation() -> Verdict {
    let (lf, ..) = two_vortex();
    let c_star = lf.critical_level().unwrap();
    let c = 0.5 * c_star;
    let DomainRoots::Periodic { eta1, .. } = lf.domain_roots(c).unwrap() else {
        return verdict(false, "C*/2 is not a periodic level".into());
    };
    let tq = lf.period_quadrature(c).unwrap();
    let to = lf.orbit_period(Vec2::new(eta1, 0.0), tq / 4096.0, 2.0 * tq).unwrap();
    let half = ((to - tq) / tq).abs();

    let c = 1e-4 * c_star;
    let ta = lf.period_asymptotic(c);
    let tq_small = lf.period_quadrature(c).unwrap();
    let DomainRoots::Periodic { eta1, .. } = lf.domain_roots(c).unwrap() else {
        return verdict(false, "1e-4 C* is not a periodic level".into());
    };
    let to_small = lf.orbit_period(Vec2::new(eta1, 0.0), tq_small / 4096.0, 2.0 * tq_small).unwrap();
    let small = ((tq_small - ta) / ta).abs().max(((to_small - ta) / ta).abs());

    let axis = LeapfrogParams::new(HelixGeometry::new(1.0, 0.0).unwrap(), 2.0, 1.0).unwrap();
    let mut exact = 0.0f64;
    for c in [0.01, 0.3, 2.0] {
        let want = 4.0 * PI * PI * c / (3.0 * axis.coef_a1());
        exact = exact.max(((axis.period_quadrature(c).unwrap() - want) / want).abs());
    }
    verdict(
        half <= 1e-4 && small <= 0.02 && exact <= 1e-8,
        format!("C*/2 quadrature vs return {half:.1e} (≤1e-4), 1e-4 C* vs asymptotic {small:.1e} (≤2e-2), r0=0 exact {exact:.1e} (≤1e-8)"),
    )
}

fn classical_limit() -> Verdict {
    let geom = HelixGeometry::new(1000.0, 1.0).unwrap();
    let circ = [1.0, 0.5];
    let init = [Vec2::new(0.2, 0.0), Vec2::new(-0.2, 0.0)];
    let params = OdeParams::new(geom, circ.to_vec()).unwrap();
    let omega = (circ[0] + circ[1]) / (2.0 * PI * 0.16);
    let period = 2.0 * PI / omega;
    let n = 4096;
    let dt = period / n as f64;
    let traj = pointvortex::integrate(&OdeState::new(0.0, init.to_vec()), &params, dt, n).unwrap();
    let classical = common::classical_trajectory(&circ, &init, dt, n);
    let ode_err = (0..=n)
        .flat_map(|k| traj.states[k].iter().zip(&classical[k]).map(|(p, q)| (*p - *q).norm()).collect::<Vec<_>>())
        .fold(0.0, f64::max);

    let strengths = vec![1.0, 0.5, -0.7];
    let mut s = Scenario::new(
        geom,
        strengths.clone(),
        vec![Vec2::new(0.0, 0.5), Vec2::new(0.4, -0.3), Vec2::new(-0.5, -0.2)],
        0.02,
    );
    s.n_side = 16;
    let f = blob::init_patches(&s).unwrap();
    let l2 = s.log_scale().powi(2);
    let gammas: Vec<f64> = strengths.iter().map(|a| a / l2).collect();
    let disks: Vec<Vec2> = (0..3).map(|i| s.disk_center(i)).collect();
    let want = common::classical_velocity(&gammas, &disks);
    let v = blob::particle_velocities(&f, &f.positions);
    let mut blob_err = 0.0f64;
    for i in 0..3 {
        let m = f.component_mass(i);
        let vc = f.component_indices(i).fold(Vec2::ZERO, |acc, p| acc + v[p] * (f.weights[p] / m));
        blob_err = blob_err.max((vc - want[i]).norm() / want[i].norm());
    }
    verdict(
        ode_err <= 1e-3 && blob_err <= 0.03,
        format!("h=1000: ODE vs classical over one period {ode_err:.1e} (≤1e-3), blob patch-center velocity {:.2}% (≤3%)", 100.0 * blob_err),
    )
}

fn blob_conservation() -> Verdict {
    let s = blob_scenario(0.01, 16, 1.0, 50);
    let out = blob::run(&s).unwrap();
    let l2 = s.log_scale().powi(2);
    let f = &out.final_field;
    let mass_exact = (0..2).all(|i| f.component_mass(i) == s.strengths[i] / l2);
    let e0 = out.records[0].total_energy;
    let drift = out.records.iter().map(|r| ((r.total_energy - e0) / e0).abs()).fold(0.0, f64::max);
    let n = out.particle_count();
    verdict(
        out.completed() && mass_exact && drift <= 1e-4 && n <= 20_000,
        format!("eps=0.01, {n} particles (≤2e4), {} steps: mass exact {mass_exact}, energy drift {drift:.1e} (≤1e-4)", out.steps_taken),
    )
}

fn convergence_trend() -> Verdict {
    let mut errs = Vec::new();
    for eps in [0.05, 0.02, 0.01] {
        let out = blob::run(&blob_scenario(eps, 10, 1.0, 10)).unwrap();
        if !out.completed() {
            return verdict(false, format!("eps={eps} halted: {:?}", out.halted));
        }
        errs.push(out.records.iter().filter_map(|r| r.max_tracking_error()).fold(0.0, f64::max));
    }
    verdict(
        errs.windows(2).all(|w| w[1] < w[0]),
        format!("max tracking error over one period at eps 0.05/0.02/0.01: {:.4} / {:.4} / {:.4} (strictly decreasing)", errs[0], errs[1], errs[2]),
    )
}

fn leapfrogging() -> Verdict {
    let (lf, params, state, period) = two_vortex();
    let (x_init, _) = lf.reduce(&state).unwrap();
    let ratio = lf.level_of_point(x_init) / lf.critical_level().unwrap();

    let s = blob_scenario(0.01, 10, 3.0, 10);
    let out = blob::run(&s).unwrap();
    let dt0 = s.geom.dt0();
    let l = s.log_scale();
    let times: Vec<f64> = out.records.iter().map(|r| r.t).collect();
    let rel: Vec<Vec2> = out
        .records
        .iter()
        .map(|r| dt0 * ((r.components[0].center - r.components[1].center) * l))
        .collect();
    let direction = lf.relative_velocity(x_init).y.signum();
    let crossings = leapfrog::section_crossings(&times, &rel, direction);
    let revs: Vec<f64> = crossings.windows(2).map(|w| w[1] - w[0]).collect();
    let worst = revs.iter().map(|r| (r / period - 1.0).abs()).fold(0.0, f64::max);

    let rho = 0.5 * (centers()[0] - centers()[1]).norm() / 4.0;
    let n = 3 * 4096;
    let traj = pointvortex::integrate(&state, &params, 3.0 * period / n as f64, n).unwrap();
    let path: Vec<Vec2> = (0..traj.len()).map(|k| lf.reduce(&traj.state(k)).unwrap().0).collect();
    let cert = leapfrog::min_separation_certificate(&lf.geom, &path, rho).unwrap();
    verdict(
        out.completed() && ratio <= 1e-2 && revs.len() >= 2 && worst <= 0.25 && cert.passed,
        format!(
            "C_E/C* {ratio:.1e} (≤1e-2), {} revolutions (≥2), worst period deviation {:.2}% vs T_E = {period:.4} (≤25%), certificate min {:.4} ≥ 4rho {:.4}: {}",
            revs.len(),
            100.0 * worst,
            cert.min_separation,
            cert.threshold,
            cert.passed
        ),
    )
}

fn determinism() -> Verdict {
    let configs: [(&str, &str); 4] = [
        ("ode", "[ode]\nperiods = 2.0\nsteps = 2048\noutput_every = 16\n"),
        ("leapfrog", "[leapfrog]\nlevel_fractions = [1e-3, 0.5, 2.0]\nportrait_samples = 100\n"),
        ("blob", "[blob]\nepsilon = 0.02\nn_side = 8\nt_final = 0.1\ncadence = 5\n"),
        ("sweep", "[blob]\nepsilon = 0.05\nn_side = 8\nt_final = 0.1\ncadence = 5\n[sweep]\nepsilons = [0.05, 0.03]\n"),
    ];
    let base = "[geometry]\nh = 1.0\nr0 = 1.0\n[vortices]\nstrengths = [2.0, 1.0]\ncenters = [[0.0, 0.19], [0.0, -0.19]]\n";
    let dir = tempfile::tempdir().unwrap();
    let mut compared = 0;
    for (sub, section) in configs {
        let cfg = dir.path().join(format!("{sub}.toml"));
        std::fs::write(&cfg, format!("{base}{section}")).unwrap();
        let mut outputs = Vec::new();
        for rep in 0..2 {
            let out = dir.path().join(format!("{sub}-{rep}"));
            let status = Command::new(env!("CARGO_BIN_EXE_helivort"))
                .args([sub, "--threads", "2", "--dump-particles", "--config"])
                .arg(&cfg)
                .arg("--out")
                .arg(&out)
                .status()
                .unwrap();
            if !status.success() {
                return verdict(false, format!("{sub} exited with {status}"));
            }
            outputs.push(out);
        }
        for name in csv_files(&outputs[0]) {
            let a = std::fs::read(outputs[0].join(&name)).unwrap();
            let b = std::fs::read(outputs[1].join(&name)).unwrap();
            if a != b {
                return verdict(false, format!("{sub}: {name} differs between runs"));
            }
            compared += 1;
        }
    }
    verdict(compared >= 7, format!("{compared} CSV files byte-identical across repeated runs of ode/leapfrog/blob/sweep"))
}

fn csv_files(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .filter_map(|e| e.ok()?.file_name().into_string().ok())
        .filter(|n| n.ends_with(".csv"))
        .collect();
    names.sort();
    names
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Verdict); 8] = [
        ("1 geometry correctness", Duration::from_secs(1), geometry_correctness),
        ("2 ODE conservation", Duration::from_secs(60), ode_conservation),
        ("3 period triangulation", Duration::from_secs(60), period_triangulation),
        ("4 classical limit", Duration::from_secs(60), classical_limit),
        ("5 blob conservation", Duration::from_secs(600), blob_conservation),
        ("6 convergence trend", Duration::from_secs(1800), convergence_trend),
        ("7 leapfrogging", Duration::from_secs(900), leapfrogging),
        ("8 determinism", Duration::from_secs(600), determinism),
    ];
    let mut failed = 0;
    for (name, budget, check) in criteria {
        let start = Instant::now();
        let v = check();
        let elapsed = start.elapsed();
        let in_budget = elapsed <= budget;
        let passed = v.passed && in_budget;
        if !passed {
            failed += 1;
        }
        println!(
            "[{}] {name}: {} [{:.2} s, budget {} s{}]",
            if passed { "PASS" } else { "FAIL" },
            v.detail,
            elapsed.as_secs_f64(),
            budget.as_secs(),
            if in_budget { "" } else { ", exceeded" }
        );
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
