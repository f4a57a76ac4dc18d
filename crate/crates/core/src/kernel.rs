//! Desingularized singular part of the Green's function and its velocity kernel.
//!
//! The scalar kernel is `G_δ(x, y) = H(x, y) · ln sqrt(|T(x) − T(y)|² + δ²)` and
//! the velocity kernel is its exact perpendicular gradient in `x`, so every
//! induced field is divergence-free. The smooth remainder `S_K` of the full
//! Green's function has no closed form in the whole plane and is not
//! included; its contribution to the center dynamics is of lower order.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::HelixGeometry;
use crate::vec2::{Mat2, Vec2};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    pub geom: HelixGeometry,
    pub delta: f64,
}

/// The two pieces of the velocity kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSplit {
    /// `∇⊥H · ln sqrt(ρ² + δ²)`
    pub log_term: Vec2,
    /// `H · (DT(x)(T(x) − T(y)) / (ρ² + δ²))⊥`
    pub biot_term: Vec2,
}

impl KernelSplit {
    pub fn total(&self) -> Vec2 {
        self.log_term + self.biot_term
    }
}

impl KernelParams {
    pub fn new(geom: HelixGeometry, delta: f64) -> Result<Self> {
        if !(delta >= 0.0) || !delta.is_finite() {
            return Err(Error::invalid(format!("blob radius must be >= 0, got {delta}")));
        }
        Ok(KernelParams { geom, delta })
    }

    fn check_pair(&self, x: Vec2, y: Vec2) -> Result<()> {
        if self.delta == 0.0 && x == y {
            return Err(Error::invalid(
                "kernel evaluated at coincident points with zero blob radius",
            ));
        }
        Ok(())
    }

    pub fn g_sing(&self, x: Vec2, y: Vec2) -> Result<f64> {
        self.check_pair(x, y)?;
        let tgt = TargetPoint::new(&self.geom, x);
        let src = SourcePoint::new(&self.geom, y);
        Ok(scalar_from(&tgt, &src, self.delta * self.delta))
    }

    pub fn velocity_kernel(&self, x: Vec2, y: Vec2) -> Result<Vec2> {
        Ok(self.kernel_split(x, y)?.total())
    }

    pub fn kernel_split(&self, x: Vec2, y: Vec2) -> Result<KernelSplit> {
        self.check_pair(x, y)?;
        let tgt = TargetPoint::new(&self.geom, x);
        let src = SourcePoint::new(&self.geom, y);
        Ok(split_from(&tgt, &src, self.delta * self.delta))
    }
}

/// Per-source quantities reused across all targets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourcePoint {
    pub t: Vec2,
    /// `|Y|^{1/2} / (2πh)`
    pub scaled_sqrt_norm: f64,
}

impl SourcePoint {
    #[inline]
    pub fn new(geom: &HelixGeometry, y: Vec2) -> Self {
        SourcePoint {
            t: geom.t_map(y),
            scaled_sqrt_norm: geom.lifted_norm(y).sqrt() / (2.0 * PI * geom.pitch()),
        }
    }
}

/// Per-target quantities: `T(x)`, `DT(x)`, `|X|^{1/2}` and its gradient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetPoint {
    pub t: Vec2,
    pub dt: Mat2,
    pub sqrt_norm: f64,
    pub grad_sqrt_norm: Vec2,
}

impl TargetPoint {
    #[inline]
    pub fn new(geom: &HelixGeometry, x: Vec2) -> Self {
        let n = geom.lifted_norm(x);
        let sqrt_norm = n.sqrt();
        TargetPoint {
            t: geom.t_map(x),
            dt: geom.dt_map(x),
            sqrt_norm,
            grad_sqrt_norm: (0.5 / (n * sqrt_norm)) * x,
        }
    }
}

/// Regularized scalar kernel from precomputed points.
#[inline]
pub fn scalar_from(tgt: &TargetPoint, src: &SourcePoint, delta2: f64) -> f64 {
    let rho2 = (tgt.t - src.t).norm_sq() + delta2;
    tgt.sqrt_norm * src.scaled_sqrt_norm * 0.5 * rho2.ln()
}

#[inline]
pub fn split_from(tgt: &TargetPoint, src: &SourcePoint, delta2: f64) -> KernelSplit {
    let d = tgt.t - src.t;
    let rho2 = d.norm_sq() + delta2;
    let h = tgt.sqrt_norm * src.scaled_sqrt_norm;
    let grad_h = src.scaled_sqrt_norm * tgt.grad_sqrt_norm;
    KernelSplit {
        log_term: (0.5 * rho2.ln()) * grad_h.perp(),
        biot_term: (h / rho2) * tgt.dt.mul_vec(d).perp(),
    }
}

/// Velocity kernel from precomputed points; the hot loop of the blob solver.
#[inline]
pub fn velocity_from(tgt: &TargetPoint, src: &SourcePoint, delta2: f64) -> Vec2 {
    let d = tgt.t - src.t;
    let rho2 = d.norm_sq() + delta2;
    let log_coef = 0.5 * rho2.ln() * src.scaled_sqrt_norm;
    let biot_coef = tgt.sqrt_norm * src.scaled_sqrt_norm / rho2;
    let g = tgt.grad_sqrt_norm;
    let m = tgt.dt.mul_vec(d);
    Vec2::new(
        -(log_coef * g.y + biot_coef * m.y),
        log_coef * g.x + biot_coef * m.x,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(h: f64, r0: f64, delta: f64) -> KernelParams {
        KernelParams::new(HelixGeometry::new(h, r0).unwrap(), delta).unwrap()
    }

    #[test]
    fn coincident_points() {
        let p = params(1.0, 1.0, 0.05);
        let x = Vec2::new(0.9, 0.2);
        let expected = p.geom.h_weight(x, x) * 0.05_f64.ln();
        assert!((p.g_sing(x, x).unwrap() - expected).abs() < 1e-15);
        let split = p.kernel_split(x, x).unwrap();
        assert_eq!(split.biot_term, Vec2::ZERO);
        let v = p.velocity_kernel(x, x).unwrap();
        let expected = p.geom.h_weight_grad(x, x).perp() * 0.05_f64.ln();
        assert!((v - expected).norm() < 1e-15);

        let p0 = params(1.0, 1.0, 0.0);
        assert!(p0.g_sing(x, x).is_err());
        assert!(p0.velocity_kernel(x, x).is_err());
        assert!(p0.kernel_split(x, x).is_err());
        assert!(KernelParams::new(p.geom, -1.0).is_err());
    }

    #[test]
    fn unregularized_value_composes_geometry() {
        let p = params(1.0, 0.0, 0.0);
        let x = Vec2::new(1.0, 0.0);
        let y = Vec2::new(1.1, 0.0);
        let g = &p.geom;
        let expected = g.h_weight(x, y) * (g.t_map(x) - g.t_map(y)).norm().ln();
        let got = p.g_sing(x, y).unwrap();
        assert!((got - expected).abs() < 1e-14 * expected.abs());
    }

    #[test]
    fn classical_limit() {
        let p = params(1000.0, 0.0, 0.0);
        let x = Vec2::new(0.1, 0.0);
        let y = Vec2::new(-0.1, 0.0);
        let v = p.velocity_kernel(x, y).unwrap();
        let d = x - y;
        let classical = d.perp() * (1.0 / (2.0 * PI * d.norm_sq()));
        assert!((v - classical).norm() <= 1e-3 * classical.norm());
    }

    #[test]
    fn log_term_is_tangential_on_axis_helix() {
        let p = params(1.3, 0.0, 0.02);
        let x = Vec2::new(0.6, 0.0).rotate(0.7);
        let y = Vec2::new(0.6, 0.0).rotate(-1.9);
        let split = p.kernel_split(x, y).unwrap();
        // ∇H ∥ x, so ∇⊥H ⟂ x
        assert!(split.log_term.dot(x).abs() < 1e-15);
        assert!(split.log_term.norm() > 0.0);
    }
}
