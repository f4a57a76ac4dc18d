//! Helical coefficients and the point-vortex constants for a few geometries.
//!
//! cargo run --example geometry_constants -- [h] [r0]

use helivort::{HelixGeometry, Vec2};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().collect();
    let h: f64 = args.get(1).map_or(Ok(1.0), |s| s.parse())?;
    let r0: f64 = args.get(2).map_or(Ok(1.0), |s| s.parse())?;
    let g = HelixGeometry::new(h, r0)?;

    println!("h = {h}, r0 = {r0}");
    println!("A = {:.15}  (1/pi = {:.15})", g.interaction_constant(), 1.0 / std::f64::consts::PI);
    println!("coupling = {:.15}", g.coupling_constant());
    println!("B = {:.15}", g.drift_constant());
    let dt0 = g.dt0();
    println!("DT(x0) = [[{:.6}, {:.6}], [{:.6}, {:.6}]]", dt0.a, dt0.b, dt0.c, dt0.d);

    println!("{:>8} {:>14} {:>14}", "s", "tau(s)", "g(s)");
    for s in [0.0, 0.5, 1.0, 4.0, 25.0, 100.0] {
        println!("{s:>8} {:>14.10} {:>14.10}", g.tau(s)?, g.g_coeff(s)?);
    }

    let x = Vec2::new(0.7, -0.4);
    let k = g.k_matrix(x);
    println!("det K({x:?}) = {:.15}, h^2/(h^2+|x|^2) = {:.15}", k.det(), h * h / (h * h + x.norm_sq()));
    println!("T({x:?}) = {:?}", g.t_map(x));
    Ok(())
}
