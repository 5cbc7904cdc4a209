use super::PathRecord;
use crate::error::{config, Error, Result};
use crate::exec;
use crate::mat2::Mat2;
use crate::qmcore::{make_gaussian_state, Grid, MeasurementSetup, SpinState, SpinorField};
use crate::zeeman1d::evolve_packet_1d;
use num_complex::Complex64;

/// Exhaustive enumeration is limited to 2^14 paths.
pub const MAX_ENUMERATION_STEPS: usize = 14;

/// One 1D path with its spin operator and the displacement it causes.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSample {
    pub path: PathRecord,
    /// Π_{j=1}^{L−1} ⟨s_{j+1}| Z |s_j⟩.
    pub amplitude: Complex64,
    /// P_{s_L} Z P_{s_{L−1}} Z ⋯ P_{s_1} Z = amplitude · |s_L⟩⟨s_1| Z.
    pub operator: Mat2,
    /// α ε Σ s_j = α⟨σ_z⟩_T T.
    pub displacement: f64,
}

/// Spin operators summed per displacement sector.
///
/// Sector `j` collects the paths with Σ s = 2j − L and displaces by α ε (2j − L).
#[derive(Debug, Clone, PartialEq)]
pub struct Sectors1D {
    pub steps: usize,
    pub epsilon: f64,
    pub alpha: f64,
    pub matrices: Vec<Mat2>,
}

impl Sectors1D {
    pub fn displacement(&self, j: usize) -> f64 {
        self.alpha * self.epsilon * (2 * j as i64 - self.steps as i64) as f64
    }

    /// Σ_j M_j e^{−ik d_j}: the L-step product propagator of mode k.
    pub fn propagator(&self, k: f64) -> Mat2 {
        self.matrices
            .iter()
            .enumerate()
            .fold(Mat2::zero(), |acc, (j, m)| {
                acc + m.scale_c(Complex64::from_polar(1.0, -k * self.displacement(j)))
            })
    }

    pub fn max_abs_diff(&self, other: &Sectors1D) -> f64 {
        self.matrices
            .iter()
            .zip(&other.matrices)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }
}

/// Zeeman factor of one slice, exp(−iεΔ(b·σ)/2).
fn zeeman_step(epsilon: f64, setup: &MeasurementSetup) -> Mat2 {
    let b = setup.field_direction();
    let h = 0.5 * setup.delta;
    Mat2::su2_exp(epsilon, [h * b[0], h * b[1], h * b[2]])
}

fn sigma_index(s: i8) -> usize {
    if s > 0 {
        0
    } else {
        1
    }
}

fn check_steps(steps: usize) -> Result<()> {
    if steps == 0 {
        return config("at least one Trotter step is required");
    }
    Ok(())
}

/// All 2^L σ_z paths of an L-slice product over the pulse duration.
///
/// Bit `j` of the path index sets s_{j+1} = +1.
pub fn enumerate_paths_1d(steps: usize, setup: &MeasurementSetup) -> Result<Vec<PathSample>> {
    check_steps(steps)?;
    if steps > MAX_ENUMERATION_STEPS {
        return Err(Error::Resource(format!(
            "exhaustive enumeration of 2^{steps} paths exceeds the limit of 2^{MAX_ENUMERATION_STEPS}"
        )));
    }
    let eps = setup.duration / steps as f64;
    if !(eps > 0.0) {
        return config("path enumeration needs a positive duration");
    }
    let z = zeeman_step(eps, setup);
    let alpha = setup.alpha;
    let samples = exec::map_range(1usize << steps, |idx| {
        let s: Vec<i8> = (0..steps)
            .map(|j| if idx >> j & 1 == 1 { 1 } else { -1 })
            .collect();
        let mut amp = Complex64::new(1.0, 0.0);
        for w in s.windows(2) {
            amp *= z.0[sigma_index(w[1])][sigma_index(w[0])];
        }
        let first = sigma_index(s[0]);
        let last = sigma_index(s[steps - 1]);
        // |s_L⟩⟨s_1| Z keeps row `first` of Z in row `last`
        let mut op = Mat2::zero();
        op.0[last] = [z.0[first][0] * amp, z.0[first][1] * amp];
        let n: i64 = s.iter().map(|&v| i64::from(v)).sum();
        PathSample {
            path: PathRecord {
                steps_x: s,
                steps_y: Vec::new(),
                epsilon: eps,
            },
            amplitude: amp,
            operator: op,
            displacement: alpha * eps * n as f64,
        }
    });
    Ok(samples)
}

/// Group enumerated paths by displacement, summing in path-index order.
pub fn path_sum_sectors(samples: &[PathSample], alpha: f64) -> Result<Sectors1D> {
    let first = samples
        .first()
        .ok_or_else(|| Error::Domain("no paths to sum".into()))?;
    let steps = first.path.steps();
    let mut matrices = vec![Mat2::zero(); steps + 1];
    for s in samples {
        let (n, _) = s.path.delta_n();
        let j = ((n + steps as i64) / 2) as usize;
        matrices[j] = matrices[j] + s.operator;
    }
    Ok(Sectors1D {
        steps,
        epsilon: first.path.epsilon,
        alpha,
        matrices,
    })
}

/// Sector operators by transfer matrices: after each slice the sector of
/// Σ s = n feeds n ± 1 through P_± Z.
pub fn transfer_sectors_1d(steps: usize, t: f64, setup: &MeasurementSetup) -> Result<Sectors1D> {
    check_steps(steps)?;
    let eps = t / steps as f64;
    let z = zeeman_step(eps, setup);
    let up = Mat2::projector(2, 1) * z;
    let down = Mat2::projector(2, -1) * z;
    // sector j after `l` slices holds Σ s = 2j − l
    let mut cur = vec![Mat2::identity()];
    for _ in 0..steps {
        let mut next = vec![Mat2::zero(); cur.len() + 1];
        for (j, m) in cur.iter().enumerate() {
            next[j] = next[j] + down * *m;
            next[j + 1] = next[j + 1] + up * *m;
        }
        cur = next;
    }
    Ok(Sectors1D {
        steps,
        epsilon: eps,
        alpha: setup.alpha,
        matrices: cur,
    })
}

/// ψ₀ξ evolved to `t` by the L-slice product, applied as sector shifts.
pub fn split_evolve_1d(
    steps: usize,
    spin: &SpinState,
    setup: &MeasurementSetup,
    grid: &Grid,
    t: f64,
) -> Result<SpinorField> {
    if setup.v_sp != 0.0 {
        return config("the product formula is applied at infinite mass (v_sp = 0)");
    }
    grid.check_for(setup.w, setup.alpha * t)?;
    let sectors = transfer_sectors_1d(steps, t, setup)?;
    let psi0 = make_gaussian_state(setup, spin, grid)?;
    Ok(psi0.apply_mode_operator(|k| sectors.propagator(k[0])))
}

/// Distance between the L-slice and exact evolutions for one L.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub steps: usize,
    /// L² norm of the difference.
    pub error: f64,
    /// error(L/2) / error(L) when the previous row has half the steps.
    pub ratio: Option<f64>,
}

pub fn trotter_convergence_1d(
    steps: &[usize],
    setup: &MeasurementSetup,
    spin: &SpinState,
    grid: &Grid,
    t: f64,
) -> Result<Vec<ConvergenceRow>> {
    let exact = evolve_packet_1d(spin, setup, grid, t)?;
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(steps.len());
    for &l in steps {
        let error = split_evolve_1d(l, spin, setup, grid, t)?.l2_distance(&exact);
        let ratio = rows
            .last()
            .filter(|p| 2 * p.steps == l)
            .map(|p| p.error / error);
        rows.push(ConvergenceRow {
            steps: l,
            error,
            ratio,
        });
    }
    Ok(rows)
}
