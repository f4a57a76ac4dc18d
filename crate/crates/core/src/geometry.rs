//! Helical coefficient functions of the reduced plane.
//!
//! A helix of pitch `h` is described in its cross-section by the anisotropic
//! matrix `K(x)`. The radial deformation `T(x) = τ(|x|²) x` straightens the
//! singular part of the Green's function of `div(K ∇·)` into a plain
//! logarithm, and `DT(x0)` at the base point `x0 = (r0, 0)` is the linear map
//! between physical and transformed vortex centers.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::vec2::{Mat2, Vec2};

/// Pitch, base radius and the derived constants used throughout the crate.
///
/// Immutable after construction; all methods are pure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelixGeometry {
    h: f64,
    r0: f64,
    a: f64,
    coupling: f64,
    b: f64,
    c0: f64,
    c0_upper: f64,
    dt0: Mat2,
    dt0_inv: Mat2,
}

impl HelixGeometry {
    pub fn new(h: f64, r0: f64) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::invalid(format!("pitch h must be positive and finite, got {h}")));
        }
        if !(r0 >= 0.0) || !r0.is_finite() {
            return Err(Error::invalid(format!("base radius r0 must be >= 0, got {r0}")));
        }
        let (a, b) = ode_constants(h, r0)?;
        let x0 = Vec2::new(r0, 0.0);
        let dt0 = dt_map_raw(h, x0);
        // dt0 is diag(τ·U/h, τ) at x0 = (r0, 0)
        let (c0, c0_upper) = dt0.sym_eigenvalues();
        let dt0_inv = dt0
            .inverse()
            .ok_or_else(|| Error::invalid("DT(x0) is singular"))?;
        let tau0 = tau_raw(h, r0 * r0);
        Ok(HelixGeometry {
            h,
            r0,
            a,
            coupling: a * tau0 * tau0,
            b,
            c0,
            c0_upper,
            dt0,
            dt0_inv,
        })
    }

    pub fn pitch(&self) -> f64 {
        self.h
    }

    pub fn base_radius(&self) -> f64 {
        self.r0
    }

    /// `x0 = (r0, 0)`.
    pub fn base_point(&self) -> Vec2 {
        Vec2::new(self.r0, 0.0)
    }

    /// Interaction constant `A = H(x0, x0) (1 + r0² / (h² + h√(h² + r0²)))`.
    pub fn interaction_constant(&self) -> f64 {
        self.a
    }

    /// Coefficient of the mutual term in the transformed center equations,
    /// `H(x0, x0) det DT(x0) = τ(r0²)² A`.
    pub fn coupling_constant(&self) -> f64 {
        self.coupling
    }

    /// Drift constant `B` of the point-vortex system.
    pub fn drift_constant(&self) -> f64 {
        self.b
    }

    /// Smallest singular value of `DT(x0)`.
    pub fn c0(&self) -> f64 {
        self.c0
    }

    /// Largest singular value of `DT(x0)`.
    pub fn c0_upper(&self) -> f64 {
        self.c0_upper
    }

    pub fn dt0(&self) -> Mat2 {
        self.dt0
    }

    pub fn dt0_inv(&self) -> Mat2 {
        self.dt0_inv
    }

    /// `|X| = sqrt(|x|² + h²)`.
    #[inline]
    pub fn lifted_norm(&self, x: Vec2) -> f64 {
        (x.norm_sq() + self.h * self.h).sqrt()
    }

    pub fn g_coeff(&self, s: f64) -> Result<f64> {
        check_nonneg(s)?;
        Ok(g_raw(self.h, s))
    }

    /// `τ(s) = exp(∫₀ˢ g)`, evaluated in closed form.
    pub fn tau(&self, s: f64) -> Result<f64> {
        check_nonneg(s)?;
        Ok(tau_raw(self.h, s))
    }

    /// The deformation `T(x) = τ(|x|²) x`.
    #[inline]
    pub fn t_map(&self, x: Vec2) -> Vec2 {
        tau_raw(self.h, x.norm_sq()) * x
    }

    /// Jacobian of [`t_map`](Self::t_map); symmetric positive definite.
    #[inline]
    pub fn dt_map(&self, x: Vec2) -> Mat2 {
        dt_map_raw(self.h, x)
    }

    pub fn k_matrix(&self, x: Vec2) -> Mat2 {
        let h2 = self.h * self.h;
        let den = x.norm_sq() + h2;
        let off = -x.x * x.y / den;
        Mat2::new((h2 + x.y * x.y) / den, off, off, (h2 + x.x * x.x) / den)
    }

    /// Prefactor `H(x, y) = sqrt(|X||Y|) / (2πh)` of the singular Green's part.
    #[inline]
    pub fn h_weight(&self, x: Vec2, y: Vec2) -> f64 {
        (self.lifted_norm(x) * self.lifted_norm(y)).sqrt() / (2.0 * PI * self.h)
    }

    /// Gradient of [`h_weight`](Self::h_weight) with respect to `x`.
    #[inline]
    pub fn h_weight_grad(&self, x: Vec2, y: Vec2) -> Vec2 {
        let nx = self.lifted_norm(x);
        let ny = self.lifted_norm(y);
        (ny.sqrt() / (2.0 * PI * self.h * 2.0 * nx * nx.sqrt())) * x
    }
}

/// Constants `(A, B)` of the limiting point-vortex system.
pub fn ode_constants(h: f64, r0: f64) -> Result<(f64, f64)> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::invalid(format!("pitch h must be positive and finite, got {h}")));
    }
    if !(r0 >= 0.0) || !r0.is_finite() {
        return Err(Error::invalid(format!("base radius r0 must be >= 0, got {r0}")));
    }
    let u = (h * h + r0 * r0).sqrt();
    let a = u * (r0 * r0 + h * h + h * u) / (2.0 * PI * h * (h * h + h * u));
    let b = tau_raw(h, r0 * r0) * r0 / (4.0 * PI * h * u);
    Ok((a, b))
}

fn check_nonneg(s: f64) -> Result<()> {
    if s >= 0.0 && s.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("argument must be a finite non-negative number, got {s}")))
    }
}

#[inline]
fn g_raw(h: f64, s: f64) -> f64 {
    1.0 / (2.0 * (h * (s + h * h).sqrt() + h * h))
}

// ∫₀ˢ g = (U − h)/h − ln((U + h)/2h) with U = sqrt(s + h²); U − h is formed as
// s/(U + h) so small s keeps full precision.
#[inline]
pub(crate) fn tau_raw(h: f64, s: f64) -> f64 {
    let u = (s + h * h).sqrt();
    let u_minus_h = s / (u + h);
    (u_minus_h / h).exp() * (2.0 * h / (u + h))
}

#[inline]
pub(crate) fn dt_map_raw(h: f64, x: Vec2) -> Mat2 {
    let s = x.norm_sq();
    let tau = tau_raw(h, s);
    let coef = 1.0 / (h * h + h * (h * h + s).sqrt());
    let off = tau * coef * x.x * x.y;
    Mat2::new(
        tau * (1.0 + coef * x.x * x.x),
        off,
        off,
        tau * (1.0 + coef * x.y * x.y),
    )
}
