//! Two concentrated helical vortices of unequal strength leapfrog: run the
//! blob solver and compare the relative revolution period of the rescaled
//! centers with the point-vortex prediction.
//!
//! cargo run --release --example blob_leapfrog -- [epsilon] [n_side] [periods]

use std::time::Instant;

use helivort::blob::{self, Scenario};
use helivort::leapfrog::{section_crossings, LeapfrogParams};
use helivort::{HelixGeometry, Vec2};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().collect();
    let epsilon: f64 = args.get(1).map_or(Ok(0.01), |s| s.parse())?;
    let n_side: usize = args.get(2).map_or(Ok(12), |s| s.parse())?;
    let periods: f64 = args.get(3).map_or(Ok(2.2), |s| s.parse())?;

    let geom = HelixGeometry::new(1.0, 1.0)?;
    let (a1, a2) = (2.0, 1.0);
    let centers = vec![Vec2::new(0.0, 0.19), Vec2::new(0.0, -0.19)];

    let lf = LeapfrogParams::new(geom, a1, a2)?;
    let dt0 = geom.dt0();
    let x_init = dt0 * centers[0] - dt0 * centers[1];
    let c_e = lf.level_of_point(x_init);
    let c_star = lf.critical_level()?;
    let period = lf.period_quadrature(c_e)?;
    println!("C_E = {c_e:.6}, C_E/C* = {:.3e}, T_E = {period:.6}", c_e / c_star);

    let mut scenario = Scenario::new(geom, vec![a1, a2], centers, epsilon);
    scenario.n_side = n_side;
    scenario.t_final = periods * period;
    scenario.cadence = 10;

    let start = Instant::now();
    let out = blob::run(&scenario)?;
    println!(
        "{} particles, dt = {:.3e}, {} steps in {:.1?}",
        out.particle_count(),
        out.dt,
        out.steps_taken,
        start.elapsed()
    );

    // relative vector of the rescaled centers, mapped to transformed coordinates
    let l = scenario.log_scale();
    let times: Vec<f64> = out.records.iter().map(|r| r.t).collect();
    let rel: Vec<Vec2> = out
        .records
        .iter()
        .map(|r| dt0 * ((r.components[0].center - r.components[1].center) * l))
        .collect();
    let direction = lf.relative_velocity(x_init).y.signum();
    let crossings = section_crossings(&times, &rel, direction);
    let revolutions: Vec<f64> = crossings.windows(2).map(|w| w[1] - w[0]).collect();
    println!("section crossings: {crossings:?}");
    for r in &revolutions {
        println!("revolution period {r:.5} ({:+.2}% vs T_E)", 100.0 * (r / period - 1.0));
    }
    let e0 = out.records[0].total_energy;
    let drift = out
        .records
        .iter()
        .map(|r| ((r.total_energy - e0) / e0).abs())
        .fold(0.0, f64::max);
    println!("max relative energy drift {drift:.3e}");
    let track = out
        .records
        .iter()
        .filter_map(|r| r.max_tracking_error())
        .fold(0.0, f64::max);
    println!("max tracking error {track:.4}");
    Ok(())
}
