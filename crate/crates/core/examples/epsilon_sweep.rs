//! Tracking error of blob centers against the point-vortex solution as the
//! core size shrinks, run in parallel over ε.
//!
//! cargo run --release --example epsilon_sweep -- [n_side] [periods]

use rayon::prelude::*;

use helivort::blob::{self, Scenario};
use helivort::leapfrog::LeapfrogParams;
use helivort::{HelixGeometry, Vec2};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().collect();
    let n_side: usize = args.get(1).map_or(Ok(10), |s| s.parse())?;
    let periods: f64 = args.get(2).map_or(Ok(1.0), |s| s.parse())?;

    let geom = HelixGeometry::new(1.0, 1.0)?;
    let centers = vec![Vec2::new(0.0, 0.19), Vec2::new(0.0, -0.19)];
    let lf = LeapfrogParams::new(geom, 2.0, 1.0)?;
    let dt0 = geom.dt0();
    let period = lf.period_quadrature(lf.level_of_point(dt0 * centers[0] - dt0 * centers[1]))?;

    let epsilons = [0.05, 0.02, 0.01];
    let results: Vec<_> = epsilons
        .par_iter()
        .map(|&eps| {
            let mut s = Scenario::new(geom, vec![2.0, 1.0], centers.clone(), eps);
            s.n_side = n_side;
            s.t_final = periods * period;
            s.cadence = 10;
            blob::run(&s).map(|out| {
                let err = out.records.iter().filter_map(|r| r.max_tracking_error()).fold(0.0, f64::max);
                (eps, out.particle_count(), err)
            })
        })
        .collect();
    for r in results {
        let (eps, n, err) = r?;
        println!("eps = {eps:<5} particles = {n:<5} max tracking error = {err:.4}");
    }
    Ok(())
}
