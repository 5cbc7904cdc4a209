mod common;

use common::{commuting_green, factorized_green};
use spinmeter_core::zeeman1d::{
    asymptotic_spin, continuity_residual, evolve_packet_1d, green_function, green_spec,
    local_velocity, time_series,
};
use spinmeter_core::{Grid, Mat2, MeasurementSetup, SpinState};
use std::f64::consts::{FRAC_PI_4, PI};

fn worst_green_deviation(s: &MeasurementSetup, t: f64, exact: impl Fn(f64) -> Mat2) -> f64 {
    let mut worst = 0.0f64;
    for i in -40..=40 {
        let x = s.alpha * t * i as f64 / 30.0;
        let g = green_function(x, t, s, green_spec(s)).unwrap();
        assert!(g.warnings.is_empty());
        worst = worst.max(g.matrix.max_abs_diff(&exact(x)));
    }
    worst
}

#[test]
fn commuting_limit_green_function() {
    let s = MeasurementSetup::new(1.0, 0.8, 0.0, 1.0, 0.0, 0.3).unwrap();
    let t = 3.0;
    let worst = worst_green_deviation(&s, t, |x| commuting_green(x, t, &s));
    assert!(worst < 1e-8, "{worst:e}");
}

#[test]
fn no_coupling_green_function_factorizes() {
    let s = MeasurementSetup::new(0.0, 1.3, 1.0, 0.7, 0.0, 0.2).unwrap();
    let t = 2.2;
    let mut worst = 0.0f64;
    for i in -30..=30 {
        let x = i as f64 * 0.1;
        let g = green_function(x, t, &s, green_spec(&s)).unwrap();
        worst = worst.max(g.matrix.max_abs_diff(&factorized_green(x, t, &s)));
    }
    assert!(worst < 1e-8, "{worst:e}");
}

#[test]
fn green_function_reproduces_grid_evolution() {
    let s = MeasurementSetup::zeeman_units(FRAC_PI_4, 1.0, 0.4).unwrap();
    let t = 2.0 * PI;
    let spin = SpinState::new(0.9, 0.5);
    let g = Grid::sized_1d(s.w, s.alpha * t, s.spread_width(t)).unwrap();
    let f = evolve_packet_1d(&spin, &s, &g, t).unwrap();
    let xi = spin.spinor();
    let mut worst = 0.0f64;
    for i in (0..g.len()).step_by(g.len() / 64) {
        let x = g.position(i)[0];
        let want = green_function(x, t, &s, green_spec(&s)).unwrap().matrix.apply(&xi);
        let got = f.value(i);
        worst = worst.max((want[0] - got[0]).norm()).max((want[1] - got[1]).norm());
    }
    assert!(worst < 1e-8, "{worst:e}");
}

#[test]
fn short_time_diagonal_form() {
    // for t ≪ 1/Δ̃ the off-diagonal part is O(tΔ̃)
    let s = MeasurementSetup::zeeman_units(FRAC_PI_4, 1.0, 0.0).unwrap();
    for &t in &[0.01, 0.02] {
        let mut off = 0.0f64;
        for i in -10..=10 {
            let g = green_function(i as f64 * 0.2, t, &s, green_spec(&s)).unwrap();
            off = off.max(g.matrix.0[0][1].norm());
        }
        let peak = PI.powf(-0.25);
        assert!(off < t * peak, "t = {t}: {off}");
        assert!(off > 0.25 * t * peak);
    }
}

#[test]
fn larmor_precession_without_coupling() {
    let s = MeasurementSetup::new(0.0, 1.0, 1.1, 1.0, 0.0, 0.0).unwrap();
    let spin = SpinState::new(0.3, 0.2);
    let g = Grid::sized_1d(1.0, 0.0, 1.0).unwrap();
    let t = 1.7;
    let f = evolve_packet_1d(&spin, &s, &g, t).unwrap();
    let b = s.field_direction();
    let u = Mat2::su2_exp(t, [0.5 * b[0], 0.0, 0.5 * b[2]]);
    let xi = u.apply(&spin.spinor());
    // the spinor is the same at every point
    for i in 0..g.len() {
        let v = f.value(i);
        let env = PI.powf(-0.25) * (-0.5 * g.position(i)[0].powi(2)).exp();
        assert!((v[0] - xi[0] * env).norm() < 1e-12);
        assert!((v[1] - xi[1] * env).norm() < 1e-12);
    }
}

#[test]
fn short_time_velocity_is_alpha() {
    let s = MeasurementSetup::zeeman_units(FRAC_PI_4, 1.0, 0.0).unwrap();
    let g = Grid::sized_1d(1.0, 1.0, 1.0).unwrap();
    let times: Vec<f64> = (0..=30).map(|i| i as f64 * 0.01).collect();
    let ts = time_series(&SpinState::UP, &s, &g, &times).unwrap();
    let slope = ts.short_time_slope(0.3).unwrap();
    assert!((slope - 1.0).abs() < 0.01, "{slope}");
}

#[test]
fn velocity_profile_has_structure_at_two_pi() {
    let s = MeasurementSetup::zeeman_units(FRAC_PI_4, 1.0, 0.0).unwrap();
    let t = 2.0 * PI;
    let g = Grid::sized_1d(1.0, t, 1.0).unwrap();
    let f = evolve_packet_1d(&SpinState::UP, &s, &g, t).unwrap();
    let v: Vec<f64> = local_velocity(&f, &s).into_iter().flatten().collect();
    assert!(v.iter().all(|v| v.abs() <= 1.0));
    let (lo, hi) = v.iter().fold((1f64, -1f64), |(a, b), &x| (a.min(x), b.max(x)));
    assert!(hi - lo > 0.5, "velocity range {lo}..{hi}");
}

#[test]
fn continuity_residual_is_second_order() {
    let s = MeasurementSetup::zeeman_units(FRAC_PI_4, 1.0, 0.0).unwrap();
    let t = 2.0 * PI;
    let g = Grid::sized_1d(1.0, t + 0.01, 1.0).unwrap();
    let spin = SpinState::UP;
    let res = |dt: f64| {
        let f = |tt| evolve_packet_1d(&spin, &s, &g, tt).unwrap();
        continuity_residual(&f(t - dt), &f(t), &f(t + dt), dt, &s).unwrap()
    };
    let (r1, r2) = (res(1e-3), res(5e-4));
    let peak = evolve_packet_1d(&spin, &s, &g, t)
        .unwrap()
        .density()
        .into_iter()
        .fold(0.0, f64::max);
    assert!(r1 < 1e-3 * peak);
    let ratio = r1 / r2;
    assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
}

#[test]
fn continuity_at_theta_zero_is_rigid() {
    let s = MeasurementSetup::zeeman_units(0.0, 1.0, 0.0).unwrap();
    let g = Grid::sized_1d(1.0, 3.0, 1.0).unwrap();
    let spin = SpinState::new(1.0, 0.0);
    let f = |tt| evolve_packet_1d(&spin, &s, &g, tt).unwrap();
    let dt = 1e-3;
    let r = continuity_residual(&f(2.0 - dt), &f(2.0), &f(2.0 + dt), dt, &s).unwrap();
    assert!(r < 1e-6, "{r:e}");
}

#[test]
fn time_series_splits_and_broadens() {
    let times = [0.0, 0.3, PI];
    for &w in &[0.5, 1.0, 2.0] {
        let s = MeasurementSetup::zeeman_units(FRAC_PI_4, w, 0.0).unwrap();
        let g = Grid::sized_1d(w, PI, w).unwrap();
        let ts = time_series(&SpinState::UP, &s, &g, &times).unwrap();
        let growth = |i: usize| ts.records[i].width / ts.records[0].width - 1.0;
        assert!(growth(1) < 0.01);
        if w == 1.0 {
            assert!(growth(2) > 0.05);
        }
        for r in &ts.records {
            assert!(r.purity <= 1.0 + 1e-10);
        }
    }
}

#[test]
fn asymptote_is_reached_on_average() {
    let s = MeasurementSetup::zeeman_units(FRAC_PI_4, 1.0, 0.0).unwrap();
    let a = asymptotic_spin(&SpinState::UP, &s).unwrap();
    let g = Grid::sized_1d(1.0, 200.0, 1.0).unwrap();
    let times: Vec<f64> = (0..=100).map(|i| 150.0 + i as f64 * 0.5).collect();
    let ts = time_series(&SpinState::UP, &s, &g, &times).unwrap();
    let n = ts.records.len() as f64;
    let mean_par = ts.records.iter().map(|r| r.sigma_parallel).sum::<f64>() / n;
    let mean_perp = ts.records.iter().map(|r| r.sigma_perp).sum::<f64>() / n;
    assert!((mean_par - a.sigma_parallel_inf).abs() < 5e-3);
    assert!((mean_perp - a.sigma_perp_inf).abs() < 5e-3);
    assert!(ts.records.last().unwrap().sigma_y.abs() < 0.02);
}
