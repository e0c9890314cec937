use num_complex::Complex64;
use proptest::prelude::*;
use szego_lab::hankel::rank_identity_residual;
use szego_lab::integrator::evolve;
use szego_lab::invariants::{energy, mass, momentum};
use szego_lab::{compose_with_blaschke, szego_project, BlaschkeProduct, FourierState, GridPlan, TwoSided};

fn coeffs(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| Complex64::new(a, b)), n)
}

fn disc_point(r_max: f64) -> impl Strategy<Value = Complex64> {
    (0.0..r_max, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn dist(a: &FourierState, b: &FourierState) -> f64 {
    a.l2_distance(b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projection_is_idempotent(c in coeffs(17)) {
        let two = TwoSided::symmetric(8, |k| c[(k + 8) as usize]);
        let once = szego_project(&two);
        let back = TwoSided::symmetric(8, |k| if k >= 0 { once.coeff(k as usize) } else { Complex64::default() });
        prop_assert_eq!(szego_project(&back), once.clone());
        prop_assert_eq!(once.truncation(), 9);
        prop_assert_eq!(once.coeff(3), c[11]);
    }

    #[test]
    fn grid_round_trip(c in coeffs(16)) {
        let u = FourierState::new(c).unwrap();
        let plan = GridPlan::new(16, 64).unwrap();
        let back = plan.from_grid(&plan.to_grid(&u));
        for k in 0..16 {
            prop_assert!((back.at(k) - u.coeff(k as usize)).norm() < 1e-13);
        }
        prop_assert!(back.negative_amplitude() < 1e-13);
    }

    #[test]
    fn cubic_term_matches_direct_convolution(c in coeffs(6)) {
        let n = 6;
        let u = FourierState::new(c.clone()).unwrap();
        let plan = GridPlan::new(n, 32).unwrap();
        let fast = plan.cubic(&u);
        for k in 0..n {
            let mut s = Complex64::default();
            for a in 0..n {
                for b in 0..n {
                    // a + b − d = k
                    if let Some(d) = (a + b).checked_sub(k) {
                        if d < n {
                            s += c[a] * c[b] * c[d].conj();
                        }
                    }
                }
            }
            prop_assert!((fast.coeff(k) - s).norm() < 1e-12, "mode {}: {} vs {}", k, fast.coeff(k), s);
        }
    }

    #[test]
    fn blaschke_products_are_unimodular(zeros in prop::collection::vec(disc_point(0.95), 0..5), angle in 0.0..6.3f64) {
        let psi = BlaschkeProduct::new(angle, zeros).unwrap();
        prop_assert!(psi.unimodularity_defect(256) < 1e-12);
        prop_assert!(psi.eval(Complex64::default()).norm() <= 1.0 + 1e-14);
    }

    #[test]
    fn rank_identity_holds(c in coeffs(12)) {
        let u = FourierState::new(c).unwrap().resized(32);
        prop_assert!(rank_identity_residual(&u, 32).unwrap() < 1e-12);
    }

    #[test]
    fn composing_with_z_spreads_modes(c in coeffs(8)) {
        let u = FourierState::new(c).unwrap();
        let chi = BlaschkeProduct::z();
        let lifted = compose_with_blaschke(&u, &chi, &szego_lab::blaschke::lift_plan(8, &chi)).unwrap();
        prop_assert_eq!(lifted.truncation(), 16);
        for k in 0..16 {
            let want = if k % 2 == 0 { u.coeff(k / 2) } else { Complex64::default() };
            prop_assert!((lifted.coeff(k) - want).norm() < 1e-13);
        }
    }

    #[test]
    fn short_evolution_conserves_mass_momentum_energy(c in coeffs(4), alpha in -2.0f64..2.0) {
        let u = FourierState::new(c).unwrap().scaled(Complex64::from(0.5)).resized(32);
        let plan = GridPlan::new(32, 128).unwrap();
        let v = evolve(&u, alpha, &plan, 0.3, 1e-11, 1e-13).unwrap();
        prop_assert!((mass(&v) - mass(&u)).abs() < 1e-10);
        prop_assert!((momentum(&v) - momentum(&u)).abs() < 1e-10);
        prop_assert!((energy(&v, alpha, &plan) - energy(&u, alpha, &plan)).abs() < 1e-10);
        // reversibility
        let w = evolve(&v, alpha, &plan, -0.3, 1e-11, 1e-13).unwrap();
        prop_assert!(dist(&w, &u) < 1e-9);
    }
}
