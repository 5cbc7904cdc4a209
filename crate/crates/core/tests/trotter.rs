mod common;

use common::direct_product;
use spinmeter_core::rashba2d::{evolve_packet_2d, pointer_moments};
use spinmeter_core::trotter::{
    decode_m, encode_m, enumerate_paths_1d, path_sum_sectors, path_time_average,
    trotter_convergence_1d, trotter_step_product_2d, MEncoding, PathAverage, PathRecord,
    SplitOrder,
};
use spinmeter_core::qmcore::Axis;
use spinmeter_core::{make_gaussian_state, Grid, MeasurementSetup, SpinState, SpinorField};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

#[test]
fn figure_one_paths() {
    use MEncoding as M;
    let m = |v| M::from_value(v).unwrap();
    // upper path: σ_y = +1 throughout, σ_x = +1 once
    let upper: Vec<M> = [2, -1, -1, -1, -1, -1, -1, -1].map(m).to_vec();
    let p = PathRecord::from_encoded(&upper, 0.125).unwrap();
    assert_eq!(
        path_time_average(&p),
        PathAverage::TwoD {
            sigma_x: -0.75,
            sigma_y: 1.0
        }
    );
    // lower path: σ_x = +1 twice
    let lower: Vec<M> = [-2, 1, -2, -1, -1, 1, -2, -1].map(m).to_vec();
    let p = PathRecord::from_encoded(&lower, 0.125).unwrap();
    match path_time_average(&p) {
        PathAverage::TwoD { sigma_x, .. } => assert_eq!(sigma_x, -0.5),
        other => panic!("{other:?}"),
    }
    assert_eq!(p.encoded().unwrap(), lower);
}

#[test]
fn encoding_is_a_bijection() {
    let mut seen = Vec::new();
    for mx in [-1, 1] {
        for my in [-1, 1] {
            let e = encode_m(mx, my).unwrap();
            assert_eq!(decode_m(e), (mx, my));
            seen.push(e.value());
        }
    }
    seen.sort();
    assert_eq!(seen, vec![-2, -1, 1, 2]);
}

#[test]
fn exhaustive_path_sum_equals_matrix_product() {
    let s = MeasurementSetup::new(1.0, 1.0 / FRAC_PI_4.sin(), FRAC_PI_4, 1.0, PI, 0.0).unwrap();
    for steps in [4, 9, 12] {
        let sectors = path_sum_sectors(&enumerate_paths_1d(steps, &s).unwrap(), s.alpha).unwrap();
        for &k in &[-2.3, -0.4, 0.0, 0.77, 3.1] {
            let d = sectors.propagator(k).max_abs_diff(&direct_product(k, steps, &s));
            assert!(d < 1e-12, "L = {steps}, k = {k}: {d:e}");
            assert!(sectors.propagator(k).unitarity_defect() < 1e-10);
        }
    }
}

#[test]
fn sector_amplitudes_scale_with_products() {
    let a = MeasurementSetup::new(1.0, 1.4, 0.6, 1.0, 2.0, 0.0).unwrap();
    let b = MeasurementSetup::new(2.0, 2.8, 0.6, 1.0, 1.0, 0.0).unwrap();
    let sa = path_sum_sectors(&enumerate_paths_1d(10, &a).unwrap(), a.alpha).unwrap();
    let sb = path_sum_sectors(&enumerate_paths_1d(10, &b).unwrap(), b.alpha).unwrap();
    assert!(sa.max_abs_diff(&sb) < 1e-14);
    for j in 0..=10 {
        assert!((sa.displacement(j) - sb.displacement(j)).abs() < 1e-14);
    }
}

#[test]
fn product_formula_converges_at_first_order() {
    let s = MeasurementSetup::zeeman_units(FRAC_PI_4, 1.0, 0.0).unwrap();
    let t = PI;
    let g = Grid::sized_1d(1.0, t, 1.0).unwrap();
    let rows = trotter_convergence_1d(&[16, 32, 64, 128], &s, &SpinState::UP, &g, t).unwrap();
    for w in rows.windows(2) {
        assert!(w[1].error < w[0].error);
    }
    let ratio = rows[3].ratio.unwrap();
    assert!((1.7..=2.3).contains(&ratio), "{ratio}");
}

#[test]
fn commuting_split_is_exact() {
    let s = MeasurementSetup::zeeman_units(0.0, 1.0, 0.0).unwrap();
    let g = Grid::sized_1d(1.0, 4.0, 1.0).unwrap();
    let rows = trotter_convergence_1d(&[1, 2, 8, 64], &s, &SpinState::new(1.2, 0.4), &g, 4.0).unwrap();
    for r in rows {
        assert!(r.error < 1e-12, "L = {}: {:e}", r.steps, r.error);
    }
}

fn rashba_packet(w: f64, spin: SpinState) -> (SpinorField, MeasurementSetup, Grid) {
    let s = MeasurementSetup::rashba_units(w).unwrap();
    let g = Grid::sized_2d(w, s.r_so()).unwrap();
    (make_gaussian_state(&s, &spin, &g).unwrap(), s, g)
}

#[test]
fn two_dimensional_product_converges() {
    let spin = SpinState::new(FRAC_PI_2, 0.3);
    let (f, s, g) = rashba_packet(0.2, spin);
    let exact = evolve_packet_2d(&spin, &s, &g).unwrap();
    let err = |l, o| trotter_step_product_2d(l, &s, &f, o).unwrap().l2_distance(&exact);
    for o in [SplitOrder::AsWritten, SplitOrder::Reversed] {
        let r = err(32, o) / err(64, o);
        assert!((1.7..2.3).contains(&r), "{o:?}: {r}");
    }
    let one = trotter_step_product_2d(64, &s, &f, SplitOrder::AsWritten).unwrap();
    assert!((one.norm() - 1.0).abs() < 1e-10);
}

#[test]
fn sigma_y_eigenstate_shifts_rigidly() {
    // a y-independent envelope on a lattice that has two rows in y
    let s = MeasurementSetup::rashba_units(0.2).unwrap();
    let ax = Axis::sized(2.0 * (s.r_so() + 1.6), 12.0 / 0.2).unwrap();
    let g = Grid::from_axes(vec![ax, Axis::new(2, ax.extent).unwrap()]).unwrap();
    let xi = SpinState::new(FRAC_PI_2, FRAC_PI_2).spinor();
    let mk = |shift: f64| {
        let env: Vec<f64> = (0..g.len())
            .map(|i| (-(g.position(i)[0] - shift).powi(2) / 0.08).exp())
            .collect();
        let c = (env.iter().map(|e| e * e).sum::<f64>() * g.cell()).sqrt().recip();
        let up = env.iter().map(|&e| xi[0] * e * c).collect();
        let down = env.iter().map(|&e| xi[1] * e * c).collect();
        SpinorField::new(g.clone(), up, down).unwrap()
    };
    let f0 = mk(0.0);
    let want = mk(s.r_so());
    for l in [1, 3, 16] {
        let out = trotter_step_product_2d(l, &s, &f0, SplitOrder::AsWritten).unwrap();
        assert!(out.max_abs_diff(&want) < 1e-10, "L = {l}");
    }
    let m = pointer_moments(&want).unwrap();
    assert!((m.mean_x - s.r_so()).abs() < 1e-10);
}
