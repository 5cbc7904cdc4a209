use proptest::prelude::*;
use spinmeter_core::qmcore::density_matrix;
use spinmeter_core::trotter::{
    decode_m, encode_m, enumerate_paths_1d, path_sum_sectors, path_time_average, PathAverage,
    PathRecord,
};
use spinmeter_core::zeeman1d::{
    asymptotic_spin, evolve_packet_1d, green_function, green_spec, local_velocity, mode_propagator,
};
use spinmeter_core::{observables_of, rashba2d, Grid, Mat2, MeasurementSetup, SpinState};
use std::f64::consts::PI;

fn spin() -> impl Strategy<Value = SpinState> {
    (0.0..PI, -PI..PI).prop_map(|(b, p)| SpinState::new(b, p))
}

fn zeeman_setup() -> impl Strategy<Value = MeasurementSetup> {
    (0.05..PI - 0.05, 0.5..2.0f64, prop_oneof![Just(0.0), 0.0..0.8f64])
        .prop_map(|(th, w, v)| MeasurementSetup::zeeman_units(th, w, v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mode_propagators_are_unitary(k in -50.0..50.0f64, t in 0.0..100.0f64, s in zeeman_setup()) {
        prop_assert!(mode_propagator(k, t, &s).unitarity_defect() < 1e-12);
        let r = MeasurementSetup::new(1.0, 0.0, 0.0, s.w, t, s.v_sp).unwrap();
        prop_assert!(rashba2d::mode_propagator([k, 0.3 * k - 1.0], t, &r).unitarity_defect() < 1e-12);
    }

    #[test]
    fn su2_exponentials_compose(t1 in -3.0..3.0f64, t2 in -3.0..3.0f64, d in prop::array::uniform3(-2.0..2.0f64)) {
        let a = Mat2::su2_exp(t1, d) * Mat2::su2_exp(t2, d);
        prop_assert!(a.max_abs_diff(&Mat2::su2_exp(t1 + t2, d)) < 1e-13);
    }

    #[test]
    fn green_function_is_symmetric(x in -5.0..5.0f64, t in 0.0..6.0f64, s in zeeman_setup()) {
        let g = green_function(x, t, &s, green_spec(&s)).unwrap();
        prop_assert_eq!(g.matrix.0[0][1], g.matrix.0[1][0]);
    }

    #[test]
    fn encoding_round_trips(mx in prop_oneof![Just(-1i8), Just(1i8)], my in prop_oneof![Just(-1i8), Just(1i8)]) {
        prop_assert_eq!(decode_m(encode_m(mx, my).unwrap()), (mx, my));
    }

    #[test]
    fn path_averages_are_bounded(steps in prop::collection::vec(prop_oneof![Just(-1i8), Just(1i8)], 1..40)) {
        let l = steps.len() as i64;
        let p = PathRecord::new_1d(steps, 0.1).unwrap();
        let (n, _) = p.delta_n();
        prop_assert!(n.abs() <= l);
        prop_assert_eq!((n - l).rem_euclid(2), 0);
        let PathAverage::OneD { sigma_z } = path_time_average(&p) else { unreachable!() };
        prop_assert!((-1.0..=1.0).contains(&sigma_z));
    }

    #[test]
    fn asymptotic_spin_lies_in_bloch_ball(sp in spin(), s in zeeman_setup()) {
        let a = asymptotic_spin(&sp, &s).unwrap();
        let r2 = a.sigma_parallel_inf.powi(2) + a.sigma_perp_inf.powi(2);
        prop_assert!(r2 <= 1.0 + 1e-9);
        prop_assert_eq!(a.sigma_y_inf, 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn evolution_preserves_norm_and_bounds_purity(sp in spin(), s in zeeman_setup(), t in 0.0..20.0f64) {
        let g = Grid::sized_1d(s.w, s.alpha * t, s.spread_width(t)).unwrap();
        let f = evolve_packet_1d(&sp, &s, &g, t).unwrap();
        prop_assert!((f.norm() - 1.0).abs() < 1e-10);
        let o = observables_of(&f, &s).unwrap();
        prop_assert!(o.purity <= 1.0 + 1e-10);
        prop_assert!(o.purity >= 0.5 - 1e-10);
        let rho = density_matrix(&f);
        let bloch: f64 = rho.bloch().iter().map(|v| v * v).sum();
        prop_assert!((bloch - (2.0 * rho.purity() - 1.0)).abs() < 1e-8);
        prop_assert!(rho.check().is_ok());
        for v in local_velocity(&f, &s).into_iter().flatten() {
            prop_assert!(v.abs() <= s.alpha);
        }
    }

    #[test]
    fn path_sums_are_unitary(th in 0.0..PI, delta in 0.0..3.0f64, t in 0.1..4.0f64, k in -5.0..5.0f64, steps in 1usize..10) {
        let s = MeasurementSetup::new(1.0, delta, th, 1.0, t, 0.0).unwrap();
        let sectors = path_sum_sectors(&enumerate_paths_1d(steps, &s).unwrap(), 1.0).unwrap();
        prop_assert!(sectors.propagator(k).unitarity_defect() < 1e-10);
    }

    #[test]
    fn rashba_evolution_preserves_norm(sp in spin(), w in 0.1..0.3f64) {
        let s = MeasurementSetup::rashba_units(w).unwrap();
        let g = Grid::sized_2d(w, s.r_so()).unwrap();
        let f = rashba2d::evolve_packet_2d(&sp, &s, &g).unwrap();
        prop_assert!((f.norm() - 1.0).abs() < 1e-10);
        let rho = density_matrix(&f);
        prop_assert!((0.5 - 1e-10..=1.0 + 1e-10).contains(&rho.purity()));
    }
}
