//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use helivort::Vec2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_point(rng: &mut ChaCha8Rng, radius: f64) -> Vec2 {
    Vec2::new(rng.gen_range(-radius..radius), rng.gen_range(-radius..radius))
}

/// Adaptive Simpson quadrature with a Richardson-corrected local estimate.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// `τ(s) = exp(∫₀ˢ g)` by quadrature of the definition.
pub fn tau_by_quadrature(h: f64, s: f64) -> f64 {
    let g = |z: f64| 1.0 / (2.0 * (h * (z + h * h).sqrt() + h * h));
    simpson(&g, 0.0, s, 1e-15).exp()
}

/// Classical planar point vortices: `ẋ_i = Σ_j Γ_j (x_i − x_j)⊥ / (2π|x_i − x_j|²)`.
pub fn classical_velocity(circ: &[f64], pos: &[Vec2]) -> Vec<Vec2> {
    (0..pos.len())
        .map(|i| {
            let mut v = Vec2::new(0.0, 0.0);
            for j in 0..pos.len() {
                if i != j {
                    let d = pos[i] - pos[j];
                    let r2 = d.x * d.x + d.y * d.y;
                    v += Vec2::new(-d.y, d.x) * (circ[j] / (2.0 * std::f64::consts::PI * r2));
                }
            }
            v
        })
        .collect()
}

/// Classical trajectory by classical RK4, one sample per step.
pub fn classical_trajectory(circ: &[f64], init: &[Vec2], dt: f64, n: usize) -> Vec<Vec<Vec2>> {
    let mut out = vec![init.to_vec()];
    let mut y = init.to_vec();
    let add = |y: &[Vec2], k: &[Vec2], s: f64| -> Vec<Vec2> { y.iter().zip(k).map(|(a, b)| *a + *b * s).collect() };
    for _ in 0..n {
        let k1 = classical_velocity(circ, &y);
        let k2 = classical_velocity(circ, &add(&y, &k1, 0.5 * dt));
        let k3 = classical_velocity(circ, &add(&y, &k2, 0.5 * dt));
        let k4 = classical_velocity(circ, &add(&y, &k3, dt));
        for i in 0..y.len() {
            y[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (dt / 6.0);
        }
        out.push(y.clone());
    }
    out
}

/// Centered finite-difference Jacobian columns of `f` at `x`.
pub fn fd_jacobian<F: Fn(Vec2) -> Vec2>(f: F, x: Vec2, step: f64) -> [Vec2; 2] {
    let e1 = Vec2::new(step, 0.0);
    let e2 = Vec2::new(0.0, step);
    [
        (f(x + e1) - f(x - e1)) * (0.5 / step),
        (f(x + e2) - f(x - e2)) * (0.5 / step),
    ]
}

/// Lattice cells of spacing `2ε/n` whose centers lie strictly inside the disk, counted directly.
pub fn lattice_fill(n_side: usize) -> usize {
    let mut count = 0;
    for a in 0..n_side {
        for b in 0..n_side {
            let x = (a as f64 + 0.5) / n_side as f64 * 2.0 - 1.0;
            let y = (b as f64 + 0.5) / n_side as f64 * 2.0 - 1.0;
            if x * x + y * y < 1.0 {
                count += 1;
            }
        }
    }
    count
}
