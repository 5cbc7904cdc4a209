//! Scenario orchestration: build setups from a config, call the library and
//! collect tables, scalar results and accuracy checks.

use crate::config::{Scenario, ScenarioConfig};
use crate::output::{Column, DataTable};
use serde_json::{json, Map, Value};
use spinmeter_core::rashba2d::{
    accuracy_report, evolve_packet_2d, pointer_moments, probability_outside, propagator_elements,
    ring_profile, PointerMoments,
};
use spinmeter_core::trotter::{
    enumerate_paths_1d, path_sum_sectors, transfer_sectors_1d, trotter_convergence_1d,
};
use spinmeter_core::zeeman1d::{
    asymptotic_spin, evolve_packet_1d, local_velocity, time_series, SpiralSummary, TimeSeries,
};
use spinmeter_core::{Error, Grid, MeasurementSetup, Result, SpinState, SpinorField};
use std::f64::consts::PI;

const NORM_TOLERANCE: f64 = 1e-10;
/// Paths enumerated for the brute-force oracle in `trotter_check` (2^10 paths).
const ORACLE_STEPS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `value <= limit`.
    pub fn at_most(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Check {
            name: name.into(),
            value,
            limit,
            passed: value <= limit,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"name": self.name, "value": self.value, "limit": self.limit, "passed": self.passed})
    }
}

#[derive(Debug, Default)]
pub struct Outcome {
    pub tables: Vec<DataTable>,
    pub results: Map<String, Value>,
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn norm_check(&mut self, label: &str, field: &SpinorField) {
        self.checks.push(Check::at_most(
            format!("norm conservation ({label})"),
            (field.norm() - 1.0).abs(),
            NORM_TOLERANCE,
        ));
    }
}

pub fn run(cfg: &ScenarioConfig) -> Result<Outcome> {
    match cfg.scenario {
        Scenario::RingProfile => ring(cfg),
        Scenario::Moments2D => moments(cfg),
        Scenario::Density1D => density(cfg),
        Scenario::Spread1D => spread(cfg),
        Scenario::Trajectory1D => trajectory(cfg),
        Scenario::Spiral1D => spiral(cfg),
        Scenario::Asymptotics => asymptotics(cfg),
        Scenario::TrotterCheck => trotter(cfg),
    }
}

fn spin(cfg: &ScenarioConfig) -> SpinState {
    SpinState::new(cfg.beta, cfg.phi)
}

fn setup_1d(cfg: &ScenarioConfig, w: f64, v_sp: f64) -> Result<MeasurementSetup> {
    let delta = cfg.delta.unwrap_or_else(|| 1.0 / cfg.theta.sin());
    MeasurementSetup::new(cfg.alpha, delta, cfg.theta, w, 0.0, v_sp)
}

fn grid_override(cfg: &ScenarioConfig, auto: Grid) -> Result<Grid> {
    if cfg.grid_points.is_none() && cfg.grid_extent.is_none() {
        return Ok(auto);
    }
    let a = auto.axis(0);
    let points = cfg.grid_points.unwrap_or(a.points);
    let extent = cfg.grid_extent.unwrap_or(a.extent);
    if auto.dim() == 1 {
        Grid::new_1d(points, extent)
    } else {
        Grid::new_2d(points, extent)
    }
}

fn grid_json(g: &Grid) -> Value {
    let a = g.axis(0);
    json!({"dim": g.dim(), "points": a.points, "extent": a.extent, "spacing": a.spacing()})
}

/// Value label used in column names and file stems.
fn tag(v: f64) -> String {
    format!("{v}")
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn time_grid(t: f64, dt: f64) -> Vec<f64> {
    let n = (t / dt).round().max(1.0) as usize;
    linspace(0.0, t, n + 1)
}

fn x_column(g: &Grid) -> Column {
    Column::new("x", "length", (0..g.len()).map(|i| g.position(i)[0]).collect())
}

fn opt_values(v: Vec<Option<f64>>) -> Vec<f64> {
    v.into_iter().map(|o| o.unwrap_or(f64::NAN)).collect()
}

/// Local minimum of `rho` on the forward side (x ≥ 0) closest to `front`,
/// ignoring the tails below 1e-3 of the peak.
fn dip(x: &[f64], rho: &[f64], front: f64) -> Option<(f64, f64)> {
    let peak = rho.iter().copied().fold(0.0, f64::max);
    (1..rho.len().saturating_sub(1))
        .filter(|&i| x[i] >= 0.0 && rho[i] < rho[i - 1] && rho[i] < rho[i + 1] && rho[i] > 1e-3 * peak)
        .min_by(|&a, &b| (x[a] - front).abs().total_cmp(&(x[b] - front).abs()))
        .map(|i| (x[i], rho[i]))
}

/// Auto-sized 1D grid refined 4x for output tables, unless overridden.
fn output_grid_1d(cfg: &ScenarioConfig, auto: Grid) -> Result<Grid> {
    if cfg.grid_points.is_some() || cfg.grid_extent.is_some() {
        return grid_override(cfg, auto);
    }
    let a = auto.axis(0);
    Grid::new_1d(4 * a.points, a.extent)
}

fn ring(cfg: &ScenarioConfig) -> Result<Outcome> {
    let setup = MeasurementSetup::rashba_units(cfg.w_over_rso)?;
    let (big_r, w) = (setup.r_so(), setup.w);
    let lo = (big_r - 12.0 * w).max(0.5 * big_r);
    let radii = linspace(lo, big_r + 12.0 * w, cfg.samples);
    let p = ring_profile(&setup, &radii)?;
    let (imax, imin) = (p.argmax(), p.argmin());
    let peak = p.values[imax].abs().max(p.values[imin].abs());

    let mut out = Outcome::default();
    // spot check against the full propagator integrals
    let mut worst = 0.0f64;
    for j in -5..=5 {
        let r = big_r + j as f64 * w;
        let u = propagator_elements(r, 0.0, &setup)?;
        out.warnings.extend(u.warnings.iter().cloned());
        let f = ring_profile(&setup, &[r])?.values[0];
        worst = worst.max((u.diagonal - f).abs()).max((u.off_diagonal_radial - f).abs());
    }
    out.checks.push(Check::at_most(
        "ring profile vs full integrals, |r - R_so| <= 5w (relative to peak)",
        worst / peak,
        0.05,
    ));
    let far = ring_profile(&setup, &[big_r + 7.0 * w, big_r - 7.0 * w])?.values;
    out.results.insert("r_so".into(), json!(big_r));
    out.results.insert("w".into(), json!(w));
    out.results.insert("r_at_max".into(), json!(p.radii[imax]));
    out.results.insert("f_max".into(), json!(p.values[imax]));
    out.results.insert("r_at_min".into(), json!(p.radii[imin]));
    out.results.insert("f_min".into(), json!(p.values[imin]));
    out.results.insert("max_offset_over_w".into(), json!((p.radii[imax] - big_r) / w));
    out.results.insert("min_offset_over_w".into(), json!((p.radii[imin] - big_r) / w));
    out.results.insert("abs_f_7w_outside".into(), json!(far[0].abs()));
    out.results.insert("abs_f_7w_inside".into(), json!(far[1].abs()));
    out.tables.push(DataTable::new(
        "ring_profile",
        format!("F(r|T), w/R_so = {}", cfg.w_over_rso),
        vec![
            Column::new("r_over_rso", "R_so", p.radii.iter().map(|r| r / big_r).collect()),
            Column::new("F", "1/R_so", p.values),
        ],
    ));
    Ok(out)
}

fn moments(cfg: &ScenarioConfig) -> Result<Outcome> {
    let setup = MeasurementSetup::rashba_units(cfg.w_over_rso)?;
    let spin0 = spin(cfg);
    let grid = grid_override(cfg, Grid::sized_2d(setup.w, setup.r_so())?)?;
    let field = evolve_packet_2d(&spin0, &setup, &grid)?;
    let mut out = Outcome::default();
    out.norm_check("2D grid", &field);

    // grid values at nodes across the ring against quadrature of the propagator
    let xi = spin0.spinor();
    let n = grid.axis(0).points;
    let c = n / 2;
    let dx = grid.axis(0).spacing();
    let ring_node = c + (setup.r_so() / dx).round() as usize;
    let mut worst = 0.0f64;
    for off in [-2i64, 0, 2] {
        let i = (ring_node as i64 + off).clamp(0, n as i64 - 1) as usize;
        for idx in [grid.index(i, c), grid.index(c, i)] {
            let [x, y] = grid.position(idx);
            let u = propagator_elements(x.hypot(y), y.atan2(x), &setup)?;
            out.warnings.extend(u.warnings.iter().cloned());
            let want = u.matrix.apply(&xi);
            let got = field.value(idx);
            worst = worst.max((want[0] - got[0]).norm()).max((want[1] - got[1]).norm());
        }
    }
    out.checks.push(Check::at_most("grid vs quadrature on the ring", worst, 1e-6));

    let m = pointer_moments(&field)?;
    let p = PointerMoments::predicted(&spin0, &setup);
    let acc = accuracy_report(&setup);
    let moments_json = |m: &PointerMoments| {
        json!({"mean_x": m.mean_x, "mean_y": m.mean_y, "mean_x2": m.mean_x2, "mean_y2": m.mean_y2})
    };
    out.results.insert("r_so".into(), json!(setup.r_so()));
    out.results.insert("grid".into(), grid_json(&grid));
    out.results.insert("measured".into(), moments_json(&m));
    out.results.insert("predicted".into(), moments_json(&p));
    out.results.insert(
        "probability_outside_r_so_plus_5w".into(),
        json!(probability_outside(&field, setup.r_so() + 5.0 * setup.w)),
    );
    out.results.insert(
        "accuracy".into(),
        json!({"split_ratio": acc.split_ratio, "well_split": acc.cond_split}),
    );

    let rho = field.density();
    let xs: Vec<f64> = (0..n).map(|i| grid.axis(0).coord(i)).collect();
    out.tables.push(DataTable::new(
        "moments_2d_cuts",
        format!("density cuts through the origin, w/R_so = {}", cfg.w_over_rso),
        vec![
            Column::new("coordinate", "R_so", xs),
            Column::new("rho_along_x", "1/R_so^2", (0..n).map(|i| rho[grid.index(i, c)]).collect()),
            Column::new("rho_along_y", "1/R_so^2", (0..n).map(|j| rho[grid.index(c, j)]).collect()),
        ],
    ));
    Ok(out)
}

fn density(cfg: &ScenarioConfig) -> Result<Outcome> {
    let v_sp = cfg.v_sp_values[0];
    let setups = cfg
        .w_values
        .iter()
        .map(|&w| setup_1d(cfg, w, v_sp))
        .collect::<Result<Vec<_>>>()?;
    let w_min = cfg.w_values.iter().copied().fold(f64::INFINITY, f64::min);
    let spread = setups.iter().map(|s| s.spread_width(cfg.t)).fold(0.0, f64::max);
    let grid = output_grid_1d(cfg, Grid::sized_1d(w_min, cfg.alpha * cfg.t, spread)?)?;
    let spin0 = spin(cfg);

    let mut out = Outcome::default();
    let xcol = x_column(&grid);
    let mut columns = vec![xcol.clone()];
    let mut per_w = Map::new();
    for s in &setups {
        let field = evolve_packet_1d(&spin0, s, &grid, cfg.t)?;
        out.norm_check(&format!("w = {}", s.w), &field);
        let rho = field.density();
        let d = dip(&xcol.values, &rho, cfg.alpha * cfg.t);
        per_w.insert(
            format!("w={}", tag(s.w)),
            json!({
                "dip_x": d.map(|p| p.0),
                "dip_density": d.map(|p| p.1),
                "dip_x_over_alpha_t": d.map(|p| p.0 / (cfg.alpha * cfg.t)),
            }),
        );
        columns.push(Column::new(format!("rho_w{}", tag(s.w)), "1/length", rho));
        columns.push(Column::new(
            format!("velocity_w{}", tag(s.w)),
            "length/time",
            opt_values(local_velocity(&field, s)),
        ));
    }
    out.results.insert("grid".into(), grid_json(&grid));
    out.results.insert("widths".into(), Value::Object(per_w));
    out.tables.push(DataTable::new(
        "density_1d",
        format!("density and local velocity at t = {:.4}", cfg.t),
        columns,
    ));
    Ok(out)
}

fn spread(cfg: &ScenarioConfig) -> Result<Outcome> {
    let w = cfg.w_values[0];
    let setups = cfg
        .v_sp_values
        .iter()
        .map(|&v| setup_1d(cfg, w, v))
        .collect::<Result<Vec<_>>>()?;
    let spread = setups.iter().map(|s| s.spread_width(cfg.t)).fold(0.0, f64::max);
    let grid = output_grid_1d(cfg, Grid::sized_1d(w, cfg.alpha * cfg.t, spread)?)?;
    let spin0 = spin(cfg);

    let mut out = Outcome::default();
    let mut density_cols = vec![x_column(&grid)];
    let mut sx_cols = vec![x_column(&grid)];
    let mut per_v = Map::new();
    for s in &setups {
        let field = evolve_packet_1d(&spin0, s, &grid, cfg.t)?;
        out.norm_check(&format!("v_sp = {}", s.v_sp), &field);
        let (a, b) = (field.component(0), field.component(1));
        let sx: Vec<f64> = a.iter().zip(b).map(|(u, d)| 2.0 * (u.conj() * d).re).collect();
        let obs = spinmeter_core::observables_of(&field, s)?;
        per_v.insert(
            format!("v_sp={}", tag(s.v_sp)),
            json!({
                "mean_x": obs.mean_x,
                "width": obs.width,
                "free_width": s.spread_width(cfg.t),
                "sigma_x": obs.sigma_x,
                "sigma_z": obs.sigma_z,
                "purity": obs.purity,
            }),
        );
        density_cols.push(Column::new(format!("rho_vsp{}", tag(s.v_sp)), "1/length", field.density()));
        sx_cols.push(Column::new(format!("sigma_x_density_vsp{}", tag(s.v_sp)), "1/length", sx));
    }
    out.results.insert("grid".into(), grid_json(&grid));
    out.results.insert("spreading_speeds".into(), Value::Object(per_v));
    out.tables.push(DataTable::new(
        "spread_1d_density",
        format!("density at t = {:.4}, w = {w}", cfg.t),
        density_cols,
    ));
    out.tables.push(DataTable::new(
        "spread_1d_sigma_x",
        format!("sigma_x density at t = {:.4}, w = {w}", cfg.t),
        sx_cols,
    ));
    Ok(out)
}

fn series_for(cfg: &ScenarioConfig, w: f64) -> Result<(MeasurementSetup, Grid, TimeSeries)> {
    let s = setup_1d(cfg, w, cfg.v_sp_values[0])?;
    let grid = grid_override(cfg, Grid::sized_1d(w, cfg.alpha * cfg.t, s.spread_width(cfg.t))?)?;
    let ts = time_series(&spin(cfg), &s, &grid, &time_grid(cfg.t, cfg.dt))?;
    Ok((s, grid, ts))
}

fn trajectory(cfg: &ScenarioConfig) -> Result<Outcome> {
    let mut out = Outcome::default();
    let mut per_w = Map::new();
    for &w in &cfg.w_values {
        let (s, grid, ts) = series_for(cfg, w)?;
        let defect = ts.velocity_spin_defect(s.alpha);
        out.checks.push(Check::at_most(
            format!("|d<x>/dt - alpha <sigma_z>| (w = {w})"),
            defect,
            1e-3 * s.alpha.max(f64::MIN_POSITIVE),
        ));
        let slope = ts.short_time_slope(0.3);
        let w0 = ts.records[0].width;
        let growth = |t: f64| (t <= cfg.t).then(|| ts.at(t).map(|r| r.width / w0 - 1.0)).flatten();
        per_w.insert(
            format!("w={}", tag(w)),
            json!({
                "grid": grid_json(&grid),
                "short_time_slope": slope,
                "short_time_slope_over_alpha": slope.map(|v| v / s.alpha),
                "velocity_spin_defect": defect,
                "width_growth_at_0.3": growth(0.3),
                "width_growth_at_pi": growth(PI),
                "final": {
                    "mean_x": ts.records.last().map(|r| r.mean_x),
                    "sigma_z": ts.records.last().map(|r| r.sigma_z),
                    "purity": ts.records.last().map(|r| r.purity),
                },
            }),
        );
        let col = |name: &str, unit: &'static str, f: fn(&spinmeter_core::ObservableSet) -> f64| {
            Column::new(name, unit, ts.records.iter().map(f).collect())
        };
        out.tables.push(DataTable::new(
            format!("trajectory_1d_w{}", tag(w)),
            format!("observables vs time, w = {w}"),
            vec![
                Column::new("t", "time", ts.times.clone()),
                col("mean_x", "length", |r| r.mean_x),
                col("width", "length", |r| r.width),
                col("sigma_x", "1", |r| r.sigma_x),
                col("sigma_y", "1", |r| r.sigma_y),
                col("sigma_z", "1", |r| r.sigma_z),
                col("sigma_parallel", "1", |r| r.sigma_parallel),
                col("sigma_perp", "1", |r| r.sigma_perp),
                col("purity", "1", |r| r.purity),
            ],
        ));
    }
    out.results.insert("widths".into(), Value::Object(per_w));
    Ok(out)
}

fn spiral(cfg: &ScenarioConfig) -> Result<Outcome> {
    let mut out = Outcome::default();
    let mut per_w = Map::new();
    let mut displacements = Vec::new();
    for &w in &cfg.w_values {
        let (s, _, ts) = series_for(cfg, w)?;
        let a = asymptotic_spin(&spin(cfg), &s)?;
        out.warnings.extend(a.warnings.iter().cloned());
        let fixed = [a.sigma_y_inf, a.sigma_perp_inf];
        let sp = SpiralSummary::from_series(&ts, fixed)
            .ok_or_else(|| Error::Config("spiral_1d needs at least 8 time samples".into()))?;
        displacements.push((w, sp.displacement));
        per_w.insert(
            format!("w={}", tag(w)),
            json!({
                "initial": sp.initial,
                "final_point": sp.final_point,
                "fixed_point": sp.fixed_point,
                "displacement": sp.displacement,
                "early_radius": sp.early_radius,
                "late_radius": sp.late_radius,
                "turns": sp.turns,
                "winds_inward": sp.winds_inward(),
            }),
        );
        out.tables.push(DataTable::new(
            format!("spiral_1d_w{}", tag(w)),
            format!("spin trajectory, w = {w}"),
            vec![
                Column::new("sigma_y", "1", ts.records.iter().map(|r| r.sigma_y).collect()),
                Column::new("sigma_perp", "1", ts.records.iter().map(|r| r.sigma_perp).collect()),
                Column::new("t", "time", ts.times.clone()),
            ],
        ).plot_first(2));
    }
    displacements.sort_by(|a, b| a.0.total_cmp(&b.0));
    let monotone = displacements.windows(2).all(|p| p[1].1 > p[0].1);
    out.results.insert("widths".into(), Value::Object(per_w));
    out.results.insert("displacement_increases_with_w".into(), json!(monotone));
    Ok(out)
}

fn asymptotics(cfg: &ScenarioConfig) -> Result<Outcome> {
    let base = setup_1d(cfg, 1.0, 0.0)?;
    let ratio_per_w = base.delta_tilde() / cfg.alpha;
    let widths: Vec<f64> = if cfg.w_values.is_empty() {
        // coupling wΔ̃/α from 1e-2 to 1e2 on a log scale
        linspace(-2.0, 2.0, cfg.samples)
            .into_iter()
            .map(|e| 10f64.powf(e) / ratio_per_w.max(f64::MIN_POSITIVE))
            .collect()
    } else {
        cfg.w_values.clone()
    };
    let spin0 = spin(cfg);
    let (st, ct) = cfg.theta.sin_cos();
    let (sb, cb) = cfg.beta.sin_cos();
    let strong = (ct * cb, st * cb);
    let weak = ct * cb + st * cfg.phi.cos() * sb;

    let mut out = Outcome::default();
    let mut cols: [Vec<f64>; 5] = Default::default();
    for &w in &widths {
        let a = asymptotic_spin(&spin0, &base.with_w(w))?;
        out.warnings.extend(a.warnings.iter().cloned());
        for (c, v) in cols
            .iter_mut()
            .zip([w * ratio_per_w, w, a.sigma_parallel_inf, a.sigma_perp_inf, a.sigma_y_inf])
        {
            c.push(v);
        }
    }
    let n = widths.len();
    let [coupling, ws, par, perp, sy] = cols;
    out.results.insert(
        "limits".into(),
        json!({"strong_parallel": strong.0, "strong_perp": strong.1, "weak_parallel": weak}),
    );
    out.results.insert(
        "smallest_coupling".into(),
        json!({"coupling": coupling[0], "sigma_parallel_inf": par[0], "sigma_perp_inf": perp[0]}),
    );
    out.results.insert(
        "largest_coupling".into(),
        json!({"coupling": coupling[n - 1], "sigma_parallel_inf": par[n - 1], "sigma_perp_inf": perp[n - 1]}),
    );
    out.tables.push(DataTable::new(
        "asymptotics",
        "long-time spin vs coupling w Delta~/alpha",
        vec![
            Column::new("coupling", "1", coupling),
            Column::new("sigma_parallel_inf", "1", par),
            Column::new("sigma_perp_inf", "1", perp),
            Column::new("sigma_y_inf", "1", sy),
            Column::new("strong_parallel", "1", vec![strong.0; n]),
            Column::new("strong_perp", "1", vec![strong.1; n]),
            Column::new("weak_parallel", "1", vec![weak; n]),
            Column::new("w", "length", ws),
        ],
    )
    .plot_first(7));
    Ok(out)
}

fn trotter(cfg: &ScenarioConfig) -> Result<Outcome> {
    let w = cfg.w_values[0];
    let s = setup_1d(cfg, w, 0.0)?.with_duration(cfg.t);
    let grid = grid_override(cfg, Grid::sized_1d(w, cfg.alpha * cfg.t, w)?)?;
    let rows = trotter_convergence_1d(&cfg.steps, &s, &spin(cfg), &grid, cfg.t)?;

    let mut out = Outcome::default();
    let paths = enumerate_paths_1d(ORACLE_STEPS, &s)?;
    let oracle = path_sum_sectors(&paths, s.alpha)?.max_abs_diff(&transfer_sectors_1d(ORACLE_STEPS, cfg.t, &s)?);
    out.checks.push(Check::at_most(
        format!("path sum vs transfer matrix at L = {ORACLE_STEPS}"),
        oracle,
        1e-12,
    ));
    out.results.insert("grid".into(), grid_json(&grid));
    out.results.insert("oracle_max_abs_diff".into(), json!(oracle));
    out.results.insert(
        "last_ratio".into(),
        json!(rows.iter().rev().find_map(|r| r.ratio)),
    );
    out.tables.push(DataTable::new(
        "trotter_check",
        format!("product-formula error at t = {:.4}", cfg.t),
        vec![
            Column::new("steps", "1", rows.iter().map(|r| r.steps as f64).collect()),
            Column::new("l2_error", "1", rows.iter().map(|r| r.error).collect()),
            Column::new("ratio", "1", rows.iter().map(|r| r.ratio.unwrap_or(f64::NAN)).collect()),
        ],
    ).plot_first(2));
    Ok(out)
}
