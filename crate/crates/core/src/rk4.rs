//! Classical fixed-step fourth-order Runge–Kutta for systems of planar points.

use crate::vec2::Vec2;

/// Scratch buffers for [`step`], reused across steps.
#[derive(Debug, Clone, Default)]
pub struct Rk4Workspace {
    k1: Vec<Vec2>,
    k2: Vec<Vec2>,
    k3: Vec<Vec2>,
    k4: Vec<Vec2>,
    stage: Vec<Vec2>,
}

impl Rk4Workspace {
    pub fn new(n: usize) -> Self {
        Rk4Workspace {
            k1: vec![Vec2::ZERO; n],
            k2: vec![Vec2::ZERO; n],
            k3: vec![Vec2::ZERO; n],
            k4: vec![Vec2::ZERO; n],
            stage: vec![Vec2::ZERO; n],
        }
    }

    fn resize(&mut self, n: usize) {
        for buf in [
            &mut self.k1,
            &mut self.k2,
            &mut self.k3,
            &mut self.k4,
            &mut self.stage,
        ] {
            buf.resize(n, Vec2::ZERO);
        }
    }
}

/// Advance `y` by one step of size `dt` for the autonomous system
/// `y' = f(y)`. `f` writes the derivative into its second argument.
pub fn step<E, F>(y: &mut [Vec2], dt: f64, ws: &mut Rk4Workspace, mut f: F) -> Result<(), E>
where
    F: FnMut(&[Vec2], &mut [Vec2]) -> Result<(), E>,
{
    let n = y.len();
    ws.resize(n);

    f(y, &mut ws.k1)?;
    for i in 0..n {
        ws.stage[i] = y[i] + ws.k1[i] * (0.5 * dt);
    }
    f(&ws.stage, &mut ws.k2)?;
    for i in 0..n {
        ws.stage[i] = y[i] + ws.k2[i] * (0.5 * dt);
    }
    f(&ws.stage, &mut ws.k3)?;
    for i in 0..n {
        ws.stage[i] = y[i] + ws.k3[i] * dt;
    }
    f(&ws.stage, &mut ws.k4)?;
    let sixth = dt / 6.0;
    for i in 0..n {
        y[i] += (ws.k1[i] + ws.k2[i] * 2.0 + ws.k3[i] * 2.0 + ws.k4[i]) * sixth;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_is_fourth_order() {
        // y' = y⊥ rotates at unit angular speed
        let run = |n: usize| {
            let mut y = vec![Vec2::new(1.0, 0.0)];
            let mut ws = Rk4Workspace::new(1);
            let dt = 1.0 / n as f64;
            for _ in 0..n {
                step::<(), _>(&mut y, dt, &mut ws, |s, out| {
                    out[0] = s[0].perp();
                    Ok(())
                })
                .unwrap();
            }
            (y[0] - Vec2::new(1.0_f64.cos(), 1.0_f64.sin())).norm()
        };
        let ratio = run(20) / run(40);
        assert!((ratio - 16.0).abs() < 1.0, "ratio {ratio}");
    }
}
