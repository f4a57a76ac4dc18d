//! Three helical point vortices: integrate the limiting system and report
//! conservation of the Hamiltonian and the drift of the weighted sum.
//!
//! cargo run --release --example point_vortex_orbit -- [t_final] [steps]

use helivort::pointvortex::{self, OdeParams, OdeState};
use helivort::{HelixGeometry, Vec2};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().collect();
    let t_final: f64 = args.get(1).map_or(Ok(5.0), |s| s.parse())?;
    let steps: usize = args.get(2).map_or(Ok(20_000), |s| s.parse())?;

    let geom = HelixGeometry::new(1.0, 1.0)?;
    let params = OdeParams::new(geom, vec![1.0, 0.5, -0.3])?;
    let init = OdeState::new(0.0, vec![Vec2::new(0.3, 0.0), Vec2::new(-0.2, 0.25), Vec2::new(0.0, -0.4)]);
    let traj = pointvortex::integrate(&init, &params, t_final / steps as f64, steps)?;

    let h0 = pointvortex::hamiltonian_total(&init, &params)?;
    let s0 = pointvortex::strength_weighted_sum(&init, &params);
    let drift = Vec2::new(0.0, -geom.drift_constant() * params.strengths().iter().map(|a| a * a).sum::<f64>());
    let mut worst_h = 0.0f64;
    for k in (0..traj.len()).step_by((traj.len() / 10).max(1)) {
        let st = traj.state(k);
        let h = pointvortex::hamiltonian_total(&st, &params)?;
        let s = pointvortex::strength_weighted_sum(&st, &params);
        worst_h = worst_h.max(((h - h0) / h0).abs());
        let p = pointvortex::to_physical(&st, &params);
        println!(
            "t = {:7.3}  P1 = ({:+.4}, {:+.4})  H = {h:.12}  |sum - linear| = {:.2e}",
            st.t,
            p[0].x,
            p[0].y,
            (s - (s0 + drift * st.t)).norm()
        );
    }
    println!("max relative H drift {worst_h:.2e}");
    Ok(())
}
