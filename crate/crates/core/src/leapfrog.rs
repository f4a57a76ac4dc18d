//! Two-vortex reduction and the geometry of its relative orbits.
//!
//! With `x = P̃₁ − P̃₂` and `y = (a₁P̃₁ + a₂P̃₂)/(a₁ + a₂)` the pair decouples into
//! a uniform drift of `y` and the one-degree-of-freedom Hamiltonian system
//! `ẋ = ∇⊥𝓗(x)` with
//!
//! ```text
//! 𝓗(x) = (a₁+a₂)/(4π) · A₁ · ln|x|² − (a₁−a₂)/(4π) · B₁ · x₁,   A₁ = 2πA,  B₁ = 4πB.
//! ```
//!
//! Level sets are `|x|² = C_E · exp(x₁/a')`. For `C_E` below the critical level
//! `C* = (2a'/e)²` the level contains a closed orbit around the origin
//! (a leapfrogging cycle); at or above it the level is an open curve.
//!
//! `A₁` here is `2πA`, which is what makes `∇⊥𝓗` reproduce the relative
//! velocity of the point-vortex system. Some published displays of `A₁` carry
//! an extra `τ²(r0²)` factor; that variant is not used.

use std::f64::consts::{E, PI};

use crate::error::{Error, Result};
use crate::geometry::HelixGeometry;
use crate::pointvortex::{OdeParams, OdeState, DEFAULT_COLLISION_FLOOR};
use crate::rk4::{self, Rk4Workspace};
use crate::vec2::Vec2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeapfrogParams {
    pub geom: HelixGeometry,
    pub a1: f64,
    pub a2: f64,
    coef_a1: f64,
    coef_b1: f64,
    a_prime: Option<f64>,
}

/// Roots of `C_E exp(x₁/a') − x₁²` describing the domain of the level curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DomainRoots {
    /// Closed orbit over `[η₁, η₂]`; `η₃` starts the outer open branch
    /// (absent when the Hamiltonian has no drift term).
    Periodic {
        eta1: f64,
        eta2: f64,
        eta3: Option<f64>,
    },
    /// Only the open branch `[η̄, ∞)`. At the critical level itself the
    /// double root at the equilibrium is reported in `tangency`.
    Unbounded { eta_bar: f64, tangency: Option<f64> },
}

impl DomainRoots {
    pub fn is_periodic(&self) -> bool {
        matches!(self, DomainRoots::Periodic { .. })
    }

    pub fn roots(&self) -> Vec<f64> {
        match *self {
            DomainRoots::Periodic { eta1, eta2, eta3 } => {
                let mut v = vec![eta1, eta2];
                v.extend(eta3);
                v
            }
            DomainRoots::Unbounded { eta_bar, tangency } => {
                let mut v = vec![eta_bar];
                v.extend(tangency);
                v
            }
        }
    }
}

/// Verdict of the minimum-separation check `min_t |DT(x0)⁻¹ x(t)| ≥ 4ρ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationCertificate {
    pub passed: bool,
    pub min_separation: f64,
    pub threshold: f64,
}

/// Which part of a level curve a polyline belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurvePart {
    Closed,
    Open,
}

/// One branch `x₂ = ±f(x₁)` of a level curve, sampled as a polyline.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelPolyline {
    pub part: CurvePart,
    pub branch: i8,
    pub points: Vec<Vec2>,
}

impl LeapfrogParams {
    pub fn new(geom: HelixGeometry, a1: f64, a2: f64) -> Result<Self> {
        if !a1.is_finite() || !a2.is_finite() || a1 == 0.0 || a2 == 0.0 {
            return Err(Error::invalid(format!(
                "strengths must be finite and nonzero, got a1 = {a1}, a2 = {a2}"
            )));
        }
        if a1 + a2 == 0.0 {
            return Err(Error::DegenerateTotalStrength);
        }
        let coef_a1 = 2.0 * PI * geom.coupling_constant();
        let coef_b1 = 4.0 * PI * geom.drift_constant();
        let denom = (a1 - a2) * coef_b1;
        let a_prime = if denom != 0.0 {
            Some((a1 + a2) * coef_a1 / denom)
        } else {
            None
        };
        Ok(LeapfrogParams {
            geom,
            a1,
            a2,
            coef_a1,
            coef_b1,
            a_prime,
        })
    }

    pub fn strengths(&self) -> (f64, f64) {
        (self.a1, self.a2)
    }

    /// The full two-vortex system these parameters reduce.
    pub fn ode_params(&self) -> Result<OdeParams> {
        OdeParams::new(self.geom, vec![self.a1, self.a2])
    }

    /// `A₁ = 2π τ(r0²)² A`.
    pub fn coef_a1(&self) -> f64 {
        self.coef_a1
    }

    /// `B₁ = 4πB`.
    pub fn coef_b1(&self) -> f64 {
        self.coef_b1
    }

    /// Equilibrium scale `a' = (a₁+a₂)A₁ / ((a₁−a₂)B₁)`; `None` when `r0 = 0` or `a₁ = a₂`.
    pub fn a_prime(&self) -> Option<f64> {
        self.a_prime
    }

    fn total(&self) -> f64 {
        self.a1 + self.a2
    }

    /// The unique equilibrium `x* = (2a', 0)` if there is one.
    pub fn equilibrium(&self) -> Option<Vec2> {
        self.a_prime.map(|ap| Vec2::new(2.0 * ap, 0.0))
    }

    /// `(x, y)` from the two transformed centers.
    pub fn reduce(&self, state: &OdeState) -> Result<(Vec2, Vec2)> {
        if state.p_tilde.len() != 2 {
            return Err(Error::invalid(format!(
                "two-vortex reduction needs exactly 2 centers, got {}",
                state.p_tilde.len()
            )));
        }
        let (p1, p2) = (state.p_tilde[0], state.p_tilde[1]);
        let x = p1 - p2;
        let y = (p1 * self.a1 + p2 * self.a2) * (1.0 / self.total());
        Ok((x, y))
    }

    /// Inverse of [`reduce`](Self::reduce).
    pub fn reconstruct(&self, x: Vec2, y: Vec2) -> [Vec2; 2] {
        let s = self.total();
        [y + x * (self.a2 / s), y - x * (self.a1 / s)]
    }

    pub fn relative_hamiltonian(&self, x: Vec2) -> Result<f64> {
        let r2 = x.norm_sq();
        if r2 == 0.0 {
            return Err(Error::invalid("relative Hamiltonian is singular at x = 0"));
        }
        Ok(self.total() / (4.0 * PI) * self.coef_a1 * r2.ln()
            - (self.a1 - self.a2) / (4.0 * PI) * self.coef_b1 * x.x)
    }

    /// `ẋ = ∇⊥𝓗(x)`.
    #[inline]
    pub fn relative_velocity(&self, x: Vec2) -> Vec2 {
        let k = self.total() * self.coef_a1 / (2.0 * PI) / x.norm_sq();
        let drift = (self.a1 - self.a2) * self.coef_b1 / (4.0 * PI);
        Vec2::new(-k * x.y, k * x.x - drift)
    }

    /// `ẏ`, constant in time.
    pub fn centroid_velocity(&self) -> Vec2 {
        let b = self.coef_b1 / (4.0 * PI);
        Vec2::new(0.0, -(self.a1 * self.a1 + self.a2 * self.a2) * b / self.total())
    }

    /// `C_E = exp(4πE / ((a₁+a₂)A₁))`.
    pub fn level_constant(&self, energy: f64) -> f64 {
        (4.0 * PI * energy / (self.total() * self.coef_a1)).exp()
    }

    /// Inverse of [`level_constant`](Self::level_constant).
    pub fn energy_of_level(&self, c_e: f64) -> f64 {
        c_e.ln() * self.total() * self.coef_a1 / (4.0 * PI)
    }

    /// `C_E` of the level through `x`: `|x|² exp(−x₁/a')`.
    pub fn level_of_point(&self, x: Vec2) -> f64 {
        match self.a_prime {
            Some(ap) => x.norm_sq() * (-x.x / ap).exp(),
            None => x.norm_sq(),
        }
    }

    /// `C* = (2a'/e)²`.
    pub fn critical_level(&self) -> Result<f64> {
        let ap = self.a_prime.ok_or(Error::NoCriticalLevel)?;
        Ok((2.0 * ap / E).powi(2))
    }

    /// `(C_E, C*)` for an energy level.
    pub fn level_constants(&self, energy: f64) -> Result<(f64, f64)> {
        Ok((self.level_constant(energy), self.critical_level()?))
    }

    /// Half-width `f(x₁) = sqrt(C_E e^{x₁/a'} − x₁²)` of the level curve, if real.
    pub fn level_half_width(&self, c_e: f64, x1: f64) -> Option<f64> {
        let v = match self.a_prime {
            Some(ap) => c_e * (x1 / ap).exp() - x1 * x1,
            None => c_e - x1 * x1,
        };
        (v >= 0.0).then(|| v.sqrt())
    }

    pub fn domain_roots(&self, c_e: f64) -> Result<DomainRoots> {
        check_level(c_e)?;
        let Some(ap) = self.a_prime else {
            let r = c_e.sqrt();
            return Ok(DomainRoots::Periodic {
                eta1: -r,
                eta2: r,
                eta3: None,
            });
        };
        // work in u = sign(a')·x₁ so the equilibrium sits at u = 2α > 0
        let sigma = ap.signum();
        let alpha = ap.abs();
        let g = |u: f64| c_e * (u / alpha).exp() - u * u;
        let c_star = (2.0 * alpha / E).powi(2);
        let sq = c_e.sqrt();
        let nu1 = bisect(g, -2.0 * sq, 0.0);
        if c_e < c_star {
            let nu2 = bisect(g, 0.0, 2.0 * alpha);
            let mut hi = 4.0 * alpha;
            while g(hi) <= 0.0 {
                hi *= 2.0;
            }
            let nu3 = bisect(g, 2.0 * alpha, hi);
            let (eta1, eta2, eta3) = (sigma * nu1, sigma * nu2, sigma * nu3);
            Ok(DomainRoots::Periodic {
                eta1,
                eta2,
                eta3: Some(eta3),
            })
        } else {
            let tangency = if (c_e - c_star).abs() <= 1e-12 * c_star {
                let dg = |u: f64| c_e / alpha * (u / alpha).exp() - 2.0 * u;
                Some(sigma * bisect(dg, alpha, 3.0 * alpha))
            } else {
                None
            };
            Ok(DomainRoots::Unbounded {
                eta_bar: sigma * nu1,
                tangency,
            })
        }
    }

    /// Small-level asymptotic `4π²C_E / (|a₁+a₂|A₁)`, exact when there is no drift term.
    pub fn period_asymptotic(&self, c_e: f64) -> f64 {
        4.0 * PI * PI * c_e / (self.total().abs() * self.coef_a1)
    }

    /// Period of the closed orbit on level `C_E`:
    ///
    /// ```text
    /// T_E = 4πC_E/(|a₁+a₂|A₁) ∫_{η₁}^{η₂} e^{x₁/a'} / sqrt(C_E e^{x₁/a'} − x₁²) dx₁
    /// ```
    ///
    /// The substitution `x₁ = m − w cos θ` absorbs both inverse-square-root
    /// endpoint singularities; the resulting integrand is smooth and even in
    /// `θ`, so the midpoint rule converges geometrically and is refined until
    /// successive estimates agree to ~1e-14.
    pub fn period_quadrature(&self, c_e: f64) -> Result<f64> {
        check_level(c_e)?;
        let Some(ap) = self.a_prime else {
            return Ok(self.period_asymptotic(c_e));
        };
        let (eta1, eta2) = match self.domain_roots(c_e)? {
            DomainRoots::Periodic { eta1, eta2, .. } => (eta1, eta2),
            DomainRoots::Unbounded { .. } => {
                return Err(Error::NoPeriod {
                    c_e,
                    c_star: self.critical_level()?,
                })
            }
        };
        let alpha = ap.abs();
        let sigma = ap.signum();
        let (nu1, nu2) = (sigma * eta1, sigma * eta2);
        let integral = endpoint_singular_integral(nu1, nu2, alpha);
        Ok(4.0 * PI * c_e / (self.total().abs() * self.coef_a1) * integral)
    }

    /// Integrate the relative system with fixed-step RK4; `n_steps + 1` samples.
    pub fn integrate_relative(&self, x_init: Vec2, dt: f64, n_steps: usize) -> Result<Vec<Vec2>> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::invalid(format!("dt must be positive, got {dt}")));
        }
        let mut out = Vec::with_capacity(n_steps + 1);
        let mut y = [x_init];
        let mut ws = Rk4Workspace::new(1);
        out.push(x_init);
        for k in 1..=n_steps {
            rk4::step::<Error, _>(&mut y, dt, &mut ws, |s, d| {
                d[0] = self.relative_velocity(s[0]);
                Ok(())
            })?;
            let t = k as f64 * dt;
            if !y[0].is_finite() {
                return Err(Error::NonFinite { t });
            }
            let sep = y[0].norm();
            if sep < DEFAULT_COLLISION_FLOOR {
                return Err(Error::Collision {
                    i: 0,
                    j: 1,
                    t,
                    separation: sep,
                });
            }
            out.push(y[0]);
        }
        Ok(out)
    }

    /// Return time to the section `{x₂ = 0}` crossed in the direction of the
    /// initial `ẋ₂`. When `x_init` lies on the section this is the first
    /// crossing; otherwise the interval between the first two crossings.
    pub fn orbit_period(&self, x_init: Vec2, dt: f64, max_time: f64) -> Result<f64> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::invalid(format!("dt must be positive, got {dt}")));
        }
        if x_init.norm_sq() == 0.0 {
            return Err(Error::invalid("initial relative vector must be nonzero"));
        }
        let dir = self.relative_velocity(x_init).y;
        if dir == 0.0 {
            return Err(Error::invalid("initial point is tangent to the section"));
        }
        let direction = dir.signum();
        let on_section = x_init.y == 0.0;
        let needed = if on_section { 1 } else { 2 };

        let mut prev = x_init;
        let mut y = [x_init];
        let mut ws = Rk4Workspace::new(1);
        let mut crossings = Vec::with_capacity(2);
        let max_steps = (max_time / dt).ceil() as usize;
        for k in 1..=max_steps {
            rk4::step::<Error, _>(&mut y, dt, &mut ws, |s, d| {
                d[0] = self.relative_velocity(s[0]);
                Ok(())
            })?;
            let t = k as f64 * dt;
            if !y[0].is_finite() {
                return Err(Error::NonFinite { t });
            }
            if let Some(tc) = crossing_time(t - dt, prev.y, t, y[0].y, direction) {
                crossings.push(tc);
                if crossings.len() == needed {
                    return Ok(if on_section {
                        crossings[0]
                    } else {
                        crossings[1] - crossings[0]
                    });
                }
            }
            prev = y[0];
        }
        Err(Error::NoReturn { horizon: max_time })
    }

    /// Polylines of the level curve `x₂ = ±f(x₁)` for `C_E`. The open branch is
    /// cut off at `open_extent` beyond its starting root.
    pub fn level_curves(&self, c_e: f64, samples: usize, open_extent: f64) -> Result<Vec<LevelPolyline>> {
        check_level(c_e)?;
        let samples = samples.max(2);
        let mut out = Vec::new();
        let mut push_branches = |part: CurvePart, xs: &[f64]| {
            for branch in [1i8, -1] {
                let pts = xs
                    .iter()
                    .map(|&x1| {
                        let f = self.level_half_width(c_e, x1).unwrap_or(0.0);
                        Vec2::new(x1, f * f64::from(branch))
                    })
                    .collect();
                out.push(LevelPolyline {
                    part,
                    branch,
                    points: pts,
                });
            }
        };
        let cosine_nodes = |lo: f64, hi: f64| -> Vec<f64> {
            (0..samples)
                .map(|k| {
                    let th = PI * k as f64 / (samples - 1) as f64;
                    0.5 * (lo + hi) - 0.5 * (hi - lo) * th.cos()
                })
                .collect()
        };
        let dir = self.a_prime.map_or(1.0, f64::signum);
        let open_nodes = |start: f64| -> Vec<f64> {
            (0..samples)
                .map(|k| start + dir * open_extent * (k as f64 / (samples - 1) as f64).powi(2))
                .collect()
        };
        match self.domain_roots(c_e)? {
            DomainRoots::Periodic { eta1, eta2, eta3 } => {
                push_branches(CurvePart::Closed, &cosine_nodes(eta1.min(eta2), eta1.max(eta2)));
                if let Some(e3) = eta3 {
                    push_branches(CurvePart::Open, &open_nodes(e3));
                }
            }
            DomainRoots::Unbounded { eta_bar, .. } => {
                push_branches(CurvePart::Open, &open_nodes(eta_bar));
            }
        }
        Ok(out)
    }
}

/// Times at which the sampled curve crosses `{y = 0}` in `direction`
/// (`+1`: upward, `−1`: downward), with linear-in-time interpolation.
pub fn section_crossings(times: &[f64], points: &[Vec2], direction: f64) -> Vec<f64> {
    times
        .windows(2)
        .zip(points.windows(2))
        .filter_map(|(t, p)| crossing_time(t[0], p[0].y, t[1], p[1].y, direction))
        .collect()
}

#[inline]
fn crossing_time(t0: f64, y0: f64, t1: f64, y1: f64, direction: f64) -> Option<f64> {
    if direction * y0 < 0.0 && direction * y1 >= 0.0 {
        Some(t0 + (t1 - t0) * (-y0) / (y1 - y0))
    } else {
        None
    }
}

/// Check `min_k |DT(x0)⁻¹ x_k| ≥ 4ρ` over a sampled relative trajectory.
pub fn min_separation_certificate(
    geom: &HelixGeometry,
    trajectory: &[Vec2],
    rho: f64,
) -> Result<SeparationCertificate> {
    if trajectory.is_empty() {
        return Err(Error::invalid("trajectory is empty"));
    }
    let inv = geom.dt0_inv();
    let min_separation = trajectory
        .iter()
        .map(|x| (inv * *x).norm())
        .fold(f64::INFINITY, f64::min);
    let threshold = 4.0 * rho;
    Ok(SeparationCertificate {
        passed: min_separation >= threshold,
        min_separation,
        threshold,
    })
}

fn check_level(c_e: f64) -> Result<()> {
    if c_e > 0.0 && c_e.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("level constant must be positive, got {c_e}")))
    }
}

/// Bisection on a sign-changing bracket, run until the bracket cannot shrink.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let f_hi = f(hi);
    if f_lo.abs() <= f_hi.abs() {
        lo
    } else {
        hi
    }
}

/// `∫_{ν₁}^{ν₂} e^{u/α} / sqrt(C e^{u/α} − u²) du` where `ν₁ < ν₂` are simple
/// roots of the radicand, so `C e^{ν/α} = ν²` at both ends.
fn endpoint_singular_integral(nu1: f64, nu2: f64, alpha: f64) -> f64 {
    let w = 0.5 * (nu2 - nu1);
    let integrand = |theta: f64| -> f64 {
        let (s, c) = (0.5 * theta).sin_cos();
        // distances to each endpoint, formed without cancellation
        let d_left = 2.0 * w * s * s;
        let d_right = 2.0 * w * c * c;
        let (u, radicand) = if theta < 0.5 * PI {
            let u = nu1 + d_left;
            (u, nu1 * nu1 * (d_left / alpha).exp_m1() - d_left * (2.0 * nu1 + d_left))
        } else {
            let u = nu2 - d_right;
            (u, nu2 * nu2 * (-d_right / alpha).exp_m1() + d_right * (2.0 * nu2 - d_right))
        };
        (u / alpha).exp() * w * theta.sin() / radicand.sqrt()
    };
    let midpoint = |n: usize| -> f64 {
        let h = PI / n as f64;
        (0..n).map(|k| integrand((k as f64 + 0.5) * h)).sum::<f64>() * h
    };
    let mut n = 32;
    let mut prev = midpoint(n);
    while n < (1 << 22) {
        n *= 2;
        let next = midpoint(n);
        if (next - prev).abs() <= 1e-14 * next.abs() {
            return next;
        }
        prev = next;
    }
    prev
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lf(h: f64, r0: f64, a1: f64, a2: f64) -> LeapfrogParams {
        LeapfrogParams::new(HelixGeometry::new(h, r0).unwrap(), a1, a2).unwrap()
    }

    #[test]
    fn constants_for_reference_helix() {
        let p = lf(1.0, 1.0, 2.0, 1.0);
        // mpmath: A1 = 3.14282316273321, B1 = 0.886400468571234,
        // a' = 10.6368056228548, C* = 61.2482202563164
        assert!((p.coef_a1() - 3.142_823_162_733_213).abs() < 1e-14);
        assert!((p.coef_b1() - 0.886_400_468_571_234).abs() < 1e-14);
        assert!((p.a_prime().unwrap() - 10.636_805_622_854_81).abs() < 1e-12);
        assert!((p.critical_level().unwrap() - 61.248_220_256_316_43).abs() < 1e-11);
        assert_eq!(lf(1.0, 0.0, 2.0, 1.0).critical_level(), Err(Error::NoCriticalLevel));
        assert_eq!(lf(1.0, 1.0, 1.5, 1.5).critical_level(), Err(Error::NoCriticalLevel));
        assert!(LeapfrogParams::new(HelixGeometry::new(1.0, 1.0).unwrap(), 1.0, -1.0).is_err());
    }

    #[test]
    fn reduce_examples() {
        let p = lf(1.0, 1.0, 1.0, 1.0);
        let q = Vec2::new(0.3, -0.7);
        let (x, y) = p.reduce(&OdeState::new(0.0, vec![q, q])).unwrap();
        assert_eq!(x, Vec2::ZERO);
        assert!((y - q).norm() < 1e-16);
        let (x, y) = p
            .reduce(&OdeState::new(0.0, vec![Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)]))
            .unwrap();
        assert_eq!(x, Vec2::new(1.0, -1.0));
        assert_eq!(y, Vec2::new(0.5, 0.5));
        assert!(p.reduce(&OdeState::new(0.0, vec![q])).is_err());
    }

    #[test]
    fn level_constant_examples() {
        let p = lf(1.0, 1.0, 2.0, 1.0);
        assert_eq!(p.level_constant(0.0), 1.0);
        let e_star = p.relative_hamiltonian(p.equilibrium().unwrap()).unwrap();
        let (c_e, c_star) = p.level_constants(e_star).unwrap();
        assert!((c_e - c_star).abs() <= 1e-12 * c_star);
        assert!(p.level_constant(1.3) > p.level_constant(0.3));
        assert!(lf(1.0, 0.0, 2.0, 1.0).level_constants(0.0).is_err());
    }

    #[test]
    fn axis_roots_and_period_are_exact() {
        let p = lf(1.0, 0.0, 1.0, 1.0);
        match p.domain_roots(0.49).unwrap() {
            DomainRoots::Periodic { eta1, eta2, eta3 } => {
                assert_eq!((eta1, eta2, eta3), (-0.7, 0.7, None));
            }
            other => panic!("{other:?}"),
        }
        let c_e = 0.3;
        let t = p.period_quadrature(c_e).unwrap();
        assert!((t - 2.0 * PI * PI * c_e).abs() < 1e-14);
        assert!(p.domain_roots(0.0).is_err());
        assert!(p.domain_roots(-1.0).is_err());
    }

    #[test]
    fn merged_roots_at_critical_level() {
        let p = lf(1.0, 1.0, 2.0, 1.0);
        let c_star = p.critical_level().unwrap();
        let two_ap = 2.0 * p.a_prime().unwrap();
        match p.domain_roots(c_star).unwrap() {
            DomainRoots::Unbounded { eta_bar, tangency } => {
                assert!(eta_bar < 0.0);
                assert!((tangency.unwrap() - two_ap).abs() < 1e-6);
            }
            other => panic!("{other:?}"),
        }
        match p.domain_roots(c_star * (1.0 - 1e-9)).unwrap() {
            DomainRoots::Periodic { eta2, eta3, .. } => {
                assert!((eta2 - two_ap).abs() < 1e-2 && (eta3.unwrap() - two_ap).abs() < 1e-2);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            p.period_quadrature(2.0 * c_star),
            Err(Error::NoPeriod { .. })
        ));
    }

    #[test]
    fn negative_a_prime_is_reflected() {
        // a1 < a2 flips the sign of a'
        let p = lf(1.0, 1.0, 1.0, 2.0);
        let ap = p.a_prime().unwrap();
        assert!(ap < 0.0);
        let c_e = 0.01 * p.critical_level().unwrap();
        match p.domain_roots(c_e).unwrap() {
            DomainRoots::Periodic { eta1, eta2, eta3 } => {
                assert!(eta1 > 0.0 && eta2 < 0.0 && eta3.unwrap() < 2.0 * ap);
                for eta in [eta1, eta2, eta3.unwrap()] {
                    let r = c_e * (eta / ap).exp() - eta * eta;
                    assert!(r.abs() <= 1e-12 * eta.powi(2).max(1.0));
                }
            }
            other => panic!("{other:?}"),
        }
        let mirrored = lf(1.0, 1.0, 2.0, 1.0);
        let t1 = p.period_quadrature(c_e).unwrap();
        let t2 = mirrored.period_quadrature(c_e).unwrap();
        assert!((t1 - t2).abs() < 1e-12 * t2);
    }

    #[test]
    fn crossings_are_interpolated() {
        let times = [0.0, 1.0, 2.0, 3.0];
        let pts = [
            Vec2::new(0.0, -1.0),
            Vec2::new(0.0, 1.0),
            Vec2::new(0.0, 3.0),
            Vec2::new(0.0, -1.0),
        ];
        assert_eq!(section_crossings(&times, &pts, 1.0), vec![0.5]);
        assert_eq!(section_crossings(&times, &pts, -1.0), vec![2.75]);
    }

    #[test]
    fn certificate_on_circle() {
        let g = HelixGeometry::new(1.0, 0.0).unwrap();
        let r = 0.8;
        let circle: Vec<Vec2> = (0..4096)
            .map(|k| Vec2::new(r, 0.0).rotate(2.0 * PI * k as f64 / 4096.0))
            .collect();
        let c = min_separation_certificate(&g, &circle, 0.1).unwrap();
        assert!(c.passed);
        assert!((c.min_separation - r).abs() < 1e-15);
        assert!(min_separation_certificate(&g, &circle, c.min_separation / 4.0).unwrap().passed);
        assert!(!min_separation_certificate(&g, &circle, r / 4.0 + 1e-9).unwrap().passed);
        assert!(min_separation_certificate(&g, &[], 0.1).is_err());
    }

    #[test]
    fn level_curves_follow_roots() {
        let p = lf(1.0, 1.0, 2.0, 1.0);
        let c_star = p.critical_level().unwrap();
        let curves = p.level_curves(0.5 * c_star, 65, 10.0).unwrap();
        assert_eq!(curves.len(), 4);
        assert_eq!(curves.iter().filter(|c| c.part == CurvePart::Closed).count(), 2);
        let curves = p.level_curves(2.0 * c_star, 65, 10.0).unwrap();
        assert!(curves.iter().all(|c| c.part == CurvePart::Open));
    }
}
