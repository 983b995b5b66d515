//! Property tests across modules: symmetries of T, Monte Carlo against
//! quadrature, and the stationary-shape relations for random parameters.

use hyperthick::geometry::build_grid;
use hyperthick::properties::{body_properties, relative_identity_residual};
use hyperthick::stationary::{
    cylindrical_radius_squared, e_from_mu, factorization_residual, mu_from_ecc, profile_residual, radial_profile,
    support_interval,
};
use hyperthick::thickness::{average_thickness, thickness_montecarlo, volume};
use hyperthick::{HarmonicPerturbation, StarShape, StationaryParams};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn blob(n: usize, seed: u64, amplitude: f64) -> StarShape {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    HarmonicPerturbation::random(n, 1, &mut rng).star(amplitude)
}

// Rotation by `angle` in the (x_i, x_j) plane, row-major.
fn givens(n: usize, i: usize, j: usize, angle: f64) -> Vec<f64> {
    let mut q = vec![0.0; n * n];
    for k in 0..n {
        q[k * n + k] = 1.0;
    }
    let (s, c) = angle.sin_cos();
    q[i * n + i] = c;
    q[j * n + j] = c;
    q[i * n + j] = -s;
    q[j * n + i] = s;
    q
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn thickness_scales_as_c_to_the_m(seed in any::<u64>(), c in 0.3f64..3.0, m in 1usize..3) {
        let grid = build_grid(3, 40).unwrap();
        let shape = blob(3, seed, 0.3);
        let base = average_thickness(&shape, m, &grid).unwrap();
        let scaled = average_thickness(&shape.scaled(c), m, &grid).unwrap();
        prop_assert!((scaled / (c.powi(m as i32) * base) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn thickness_and_volume_are_rotation_invariant(seed in any::<u64>(), angle in 0.0f64..std::f64::consts::TAU) {
        let grid = build_grid(3, 64).unwrap();
        let shape = blob(3, seed, 0.3);
        let turned = shape.rotated(&givens(3, 0, 2, angle)).unwrap();
        let (t0, t1) = (average_thickness(&shape, 2, &grid).unwrap(), average_thickness(&turned, 2, &grid).unwrap());
        let (v0, v1) = (volume(&shape, &grid).unwrap(), volume(&turned, &grid).unwrap());
        prop_assert!((t1 / t0 - 1.0).abs() < 1e-9, "T {} vs {}", t0, t1);
        prop_assert!((v1 / v0 - 1.0).abs() < 1e-9, "V {} vs {}", v0, v1);
    }

    #[test]
    fn eccentricity_round_trips(k in 1usize..9, lambda in 0.1f64..10.0, e in 0.0f64..3.0) {
        let mu = mu_from_ecc(k, lambda, e);
        prop_assert!(mu <= 0.0);
        prop_assert!((e_from_mu(k, lambda, mu) - e).abs() <= 1e-13 * e.max(1.0));
    }

    #[test]
    fn boundary_roots_solve_the_stationary_equation(
        k in 1usize..9, lambda in 0.2f64..5.0, e in 0.0f64..1.0, theta in 0.0f64..std::f64::consts::PI,
    ) {
        let q = StationaryParams::new(k + 1, 1, lambda, e).unwrap();
        let r = radial_profile(&q, theta).unwrap();
        prop_assert!(r > 0.0);
        // Each term is O(1) on the boundary, so the residual is an absolute error.
        prop_assert!(profile_residual(&q, theta, r).abs() < 1e-12);
    }

    #[test]
    fn support_endpoints_close_the_meridian(k in 1usize..9, lambda in 0.2f64..5.0, e in 0.0f64..=1.0) {
        let q = StationaryParams::new(k + 1, 1, lambda, e).unwrap();
        let (lo, hi) = support_interval(&q).unwrap();
        prop_assert!(lo < 0.0 && hi > 0.0);
        let scale = hi * hi;
        for z in [lo, hi] {
            prop_assert!(cylindrical_radius_squared(&q, z).unwrap().abs() < 1e-10 * scale);
        }
        prop_assert!(cylindrical_radius_squared(&q, 0.5 * (lo + hi)).unwrap() > 0.0);
    }

    #[test]
    fn factorization_holds_everywhere(k in 1usize..9, w in -3.0f64..3.0) {
        prop_assert!(factorization_residual(k, w) < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn montecarlo_agrees_with_quadrature(seed in any::<u64>(), m in 1usize..3) {
        let grid = build_grid(3, 48).unwrap();
        let shape = blob(3, seed, 0.4);
        let exact = average_thickness(&shape, m, &grid).unwrap();
        let est = thickness_montecarlo(&shape.to_indicator(1.4), m, 400_000, seed).unwrap();
        prop_assert!((est.value - exact).abs() < 5.0 * est.stderr, "{} +- {} vs {}", est.value, est.stderr, exact);
    }

    #[test]
    fn identity_holds_for_random_eggs(k in 1usize..6, m in 1usize..3, lambda in 0.3f64..3.0, e in 0.05f64..=1.0) {
        let q = StationaryParams::new(k + m, m, lambda, e).unwrap();
        let b = body_properties(&q, 256).unwrap();
        prop_assert!(relative_identity_residual(&b, &q).abs() < 1e-7);
    }
}

#[test]
fn critical_shapes_are_wider_than_the_sphere() {
    for k in 1..=6 {
        let sphere = body_properties(&StationaryParams::new(k + 1, 1, 1.0, 0.0).unwrap(), 256).unwrap();
        let critical = body_properties(&StationaryParams::new(k + 1, 1, 1.0, 1.0).unwrap(), 256).unwrap();
        assert!(critical.volume > sphere.volume, "k = {k}");
        assert!(critical.moment > 0.0, "k = {k}");
    }
}
