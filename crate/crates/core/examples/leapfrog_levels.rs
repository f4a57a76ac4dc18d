//! Two-vortex leapfrogging: constants, level classification and periods.
//!
//! cargo run --release --example leapfrog_levels

use helivort::leapfrog::{DomainRoots, LeapfrogParams};
use helivort::{HelixGeometry, Vec2};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lf = LeapfrogParams::new(HelixGeometry::new(1.0, 1.0)?, 2.0, 1.0)?;
    let c_star = lf.critical_level()?;
    println!("A1 = {:.12}, B1 = {:.12}", lf.coef_a1(), lf.coef_b1());
    println!("a' = {:?}, C* = {c_star:.10}", lf.a_prime());

    println!("{:>10} {:>12} {:>12} {:>12} {:>12}", "C/C*", "T quad", "T asym", "T orbit", "roots");
    for frac in [1e-4, 1e-3, 1e-2, 0.1, 0.5, 0.9, 1.5] {
        let c = frac * c_star;
        let roots = lf.domain_roots(c)?;
        let asym = lf.period_asymptotic(c);
        match roots {
            DomainRoots::Periodic { eta1, .. } => {
                let tq = lf.period_quadrature(c)?;
                let to = lf.orbit_period(Vec2::new(eta1, 0.0), tq / 4096.0, 2.0 * tq)?;
                println!("{frac:>10.1e} {tq:>12.6} {asym:>12.6} {to:>12.6} {:>12?}", roots.roots());
            }
            _ => println!("{frac:>10.1e} {:>12} {asym:>12.6} {:>12} {:>12?}", "-", "-", roots.roots()),
        }
    }
    Ok(())
}
