//! Regularized kernel: velocity induced by a unit source on a ray, split into
//! its logarithmic and Biot-Savart parts, for several blob radii.
//!
//! cargo run --example kernel_velocity

use helivort::kernel::KernelParams;
use helivort::{HelixGeometry, Vec2};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let geom = HelixGeometry::new(1.0, 1.0)?;
    let y = geom.base_point();
    for delta in [0.0, 0.01, 0.1] {
        let k = KernelParams::new(geom, delta)?;
        println!("delta = {delta}");
        println!("{:>8} {:>12} {:>12} {:>12} {:>12}", "dist", "|log|", "|biot|", "|K|", "G");
        for d in [0.005, 0.02, 0.1, 0.5, 2.0] {
            let x = y + Vec2::new(d, 0.0);
            let s = k.kernel_split(x, y)?;
            println!(
                "{d:>8} {:>12.5e} {:>12.5e} {:>12.5e} {:>12.5e}",
                s.log_term.norm(),
                s.biot_term.norm(),
                s.total().norm(),
                k.g_sing(x, y)?
            );
        }
    }
    Ok(())
}
