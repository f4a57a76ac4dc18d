use helivort::blob::{self, Scenario};
use helivort::kernel::KernelParams;
use helivort::leapfrog::LeapfrogParams;
use helivort::pointvortex::{self, OdeParams, OdeState};
use helivort::{HelixGeometry, Vec2};
use proptest::prelude::*;

fn point(r: f64) -> impl Strategy<Value = Vec2> {
    (-r..r, -r..r).prop_map(|(x, y)| Vec2::new(x, y))
}

fn strength() -> impl Strategy<Value = f64> {
    prop_oneof![0.1..3.0f64, -3.0..-0.1f64]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn k_determinant(h in 0.05..20.0f64, x in point(10.0)) {
        let g = HelixGeometry::new(h, 1.0).unwrap();
        let want = h * h / (h * h + x.norm_sq());
        prop_assert!((g.k_matrix(x).det() - want).abs() <= 1e-12 * want);
    }

    #[test]
    fn deformation_is_odd_and_radial(h in 0.05..20.0f64, x in point(5.0)) {
        let g = HelixGeometry::new(h, 0.0).unwrap();
        let t = g.t_map(x);
        prop_assert_eq!(g.t_map(-x), -t);
        prop_assert!((t.x * x.y - t.y * x.x).abs() <= 1e-14 * t.norm() * x.norm());
        prop_assert!(t.norm() >= x.norm());
    }

    #[test]
    fn tau_is_increasing(h in 0.05..20.0f64, s in 0.0..100.0f64, ds in 1e-3..10.0f64) {
        let g = HelixGeometry::new(h, 0.0).unwrap();
        prop_assert!(g.tau(s + ds).unwrap() > g.tau(s).unwrap());
        prop_assert!(g.tau(s).unwrap() >= 1.0);
    }

    #[test]
    fn kernel_split_adds_up(h in 0.2..5.0f64, x in point(2.0), y in point(2.0), delta in 0.0..0.1f64) {
        prop_assume!((x - y).norm() > 1e-3);
        let k = KernelParams::new(HelixGeometry::new(h, 1.0).unwrap(), delta).unwrap();
        let split = k.kernel_split(x, y).unwrap();
        let v = k.velocity_kernel(x, y).unwrap();
        prop_assert!((split.total() - v).norm() <= 1e-14 * (1.0 + v.norm()));
    }

    #[test]
    fn weighted_velocity_is_pure_drift(
        h in 0.3..3.0f64,
        r0 in 0.0..2.0f64,
        a in proptest::collection::vec(strength(), 2..6),
        seed in proptest::collection::vec(point(1.0), 6),
    ) {
        let geom = HelixGeometry::new(h, r0).unwrap();
        let params = OdeParams::new(geom, a.clone()).unwrap();
        let p: Vec<Vec2> = seed.iter().take(a.len()).enumerate().map(|(i, q)| *q + Vec2::new(i as f64 * 3.0, 0.0)).collect();
        let v = pointvortex::rhs(&OdeState::new(0.0, p), &params).unwrap();
        let s = v.iter().zip(&a).fold(Vec2::ZERO, |acc, (vi, ai)| acc + *vi * *ai);
        let sum_a2: f64 = a.iter().map(|x| x * x).sum();
        let scale: f64 = v.iter().zip(&a).map(|(vi, ai)| vi.norm() * ai.abs()).sum();
        prop_assert!((s - Vec2::new(0.0, -geom.drift_constant() * sum_a2)).norm() <= 1e-12 * (1.0 + scale));
    }

    #[test]
    fn hamiltonian_is_invariant_along_the_drift(
        a in proptest::collection::vec(strength(), 2..5),
        shift in -4.0..4.0f64,
    ) {
        let geom = HelixGeometry::new(1.0, 1.0).unwrap();
        let params = OdeParams::new(geom, a.clone()).unwrap();
        let p: Vec<Vec2> = (0..a.len()).map(|i| Vec2::new(0.25 * i as f64, 0.5 - 0.125 * i as f64)).collect();
        let moved: Vec<Vec2> = p.iter().map(|q| *q + Vec2::new(0.0, shift)).collect();
        let h0 = pointvortex::hamiltonian_total(&OdeState::new(0.0, p), &params).unwrap();
        let h1 = pointvortex::hamiltonian_total(&OdeState::new(0.0, moved), &params).unwrap();
        prop_assert!((h0 - h1).abs() <= 1e-12 * (1.0 + h0.abs()));
    }

    #[test]
    fn reduce_and_reconstruct_are_inverse(a1 in strength(), a2 in strength(), p in point(3.0), q in point(3.0)) {
        prop_assume!((a1 + a2).abs() > 0.05);
        let lf = LeapfrogParams::new(HelixGeometry::new(1.0, 1.0).unwrap(), a1, a2).unwrap();
        let (x, y) = lf.reduce(&OdeState::new(0.0, vec![p, q])).unwrap();
        let [p2, q2] = lf.reconstruct(x, y);
        let tol = 1e-12 * (1.0 + p.norm() + q.norm()) * (a1.abs() + a2.abs()) / (a1 + a2).abs();
        prop_assert!((p2 - p).norm() <= tol && (q2 - q).norm() <= tol);
    }

    #[test]
    fn relative_velocity_is_hamiltonian(a1 in 0.5..3.0f64, a2 in 0.5..3.0f64, x in point(2.0)) {
        prop_assume!(x.norm() > 0.1);
        let lf = LeapfrogParams::new(HelixGeometry::new(1.0, 1.0).unwrap(), a1, a2).unwrap();
        let step = 1e-6;
        let hx = |d: Vec2| lf.relative_hamiltonian(x + d).unwrap();
        let dx1 = (hx(Vec2::new(step, 0.0)) - hx(Vec2::new(-step, 0.0))) / (2.0 * step);
        let dx2 = (hx(Vec2::new(0.0, step)) - hx(Vec2::new(0.0, -step))) / (2.0 * step);
        let v = lf.relative_velocity(x);
        prop_assert!((v - Vec2::new(-dx2, dx1)).norm() <= 1e-6 * (1.0 + v.norm()));
    }

    #[test]
    fn level_of_a_level_point(frac in 0.01..0.95f64, t in 0.0..1.0f64) {
        let lf = LeapfrogParams::new(HelixGeometry::new(1.0, 1.0).unwrap(), 2.0, 1.0).unwrap();
        let c = frac * lf.critical_level().unwrap();
        let roots = lf.domain_roots(c).unwrap().roots();
        let x1 = roots[0] + t * (roots[1] - roots[0]);
        let f = lf.level_half_width(c, x1).unwrap_or(0.0);
        let x = Vec2::new(x1, f);
        prop_assume!(x.norm() > 0.0);
        prop_assert!(((lf.level_of_point(x) - c) / c).abs() <= 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn patches_carry_exact_circulation(
        a1 in strength(),
        a2 in strength(),
        eps in 0.005..0.05f64,
        n_side in 8usize..18,
    ) {
        let geom = HelixGeometry::new(1.0, 1.0).unwrap();
        let mut s = Scenario::new(geom, vec![a1, a2], vec![Vec2::new(0.0, 0.3), Vec2::new(0.0, -0.3)], eps);
        s.n_side = n_side;
        let f = blob::init_patches(&s).unwrap();
        let l2 = s.log_scale().powi(2);
        prop_assert_eq!(f.component_mass(0), a1 / l2);
        prop_assert_eq!(f.component_mass(1), a2 / l2);
        for i in 0..2 {
            let c = s.disk_center(i);
            prop_assert!(f.component_indices(i).all(|p| (f.positions[p] - c).norm() < eps));
        }
    }
}
