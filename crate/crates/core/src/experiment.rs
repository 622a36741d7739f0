//! Numerical studies: single-stage landscapes, QW-vs-QAOA dominance,
//! reduced-parameter multi-stage scans, product-formula error scaling and
//! schedule profiles.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{build_diagonal, solve_ground_state, DiagonalEnergies, GroundStateRecord, SpinGlassInstance};
use crate::num::{Complex, Float, ScheduleScalar};
use crate::propagate::{
    converged_anneal_unitary, driver_in_place, hamiltonian_matrix, phase_in_place, AnnealSchedule,
    QwCache, QwPropagator,
};
use crate::protocol::{
    gamma_sequence, map_gamma_to_qaoa, measure_amplitudes, time_averaged_metrics, DecayKind,
    Protocol, TimeWindow,
};
use crate::state::{check_qubits, DenseUnitary, StateVector, MAX_DENSE_QUBITS};

/// An instance prepared for simulation: energy table plus ground-state record.
#[derive(Clone, Debug)]
pub struct Problem<T: Float> {
    pub instance_id: String,
    pub diag: DiagonalEnergies<T>,
    pub ground: GroundStateRecord<T>,
}

impl<T: Float> Problem<T> {
    pub fn from_instance(instance: &SpinGlassInstance) -> Self {
        let diag = build_diagonal(instance);
        let ground = solve_ground_state(instance.id(), &diag);
        Problem {
            instance_id: instance.id().to_string(),
            diag,
            ground,
        }
    }

    pub fn n(&self) -> usize {
        self.diag.n()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

impl Axis {
    /// `points` evenly spaced values from `lo` to `hi` inclusive.
    pub fn linspace(name: &str, lo: f64, hi: f64, points: usize) -> Result<Self> {
        if points == 0 {
            return Err(Error::Usage(format!("axis {name} needs at least one point")));
        }
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Usage(format!("axis {name} bounds must be finite")));
        }
        let values = if points == 1 {
            vec![lo]
        } else {
            (0..points)
                .map(|k| lo + (hi - lo) * k as f64 / (points - 1) as f64)
                .collect()
        };
        Ok(Axis {
            name: name.to_string(),
            values,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub axis1: Axis,
    pub axis2: Axis,
}

pub const DEFAULT_GRID_POINTS: usize = 20;

impl GridSpec {
    /// `gamma in [0, gamma_max] x t in [0, t_max]`.
    pub fn quantum_walk(gamma_max: f64, t_max: f64, points: usize) -> Result<Self> {
        Ok(GridSpec {
            axis1: Axis::linspace("gamma", 0.0, gamma_max, points)?,
            axis2: Axis::linspace("t", 0.0, t_max, points)?,
        })
    }

    /// `alpha in [0, alpha_max] x beta in [0, beta_max]`.
    pub fn qaoa(alpha_max: f64, beta_max: f64, points: usize) -> Result<Self> {
        Ok(GridSpec {
            axis1: Axis::linspace("alpha", 0.0, alpha_max, points)?,
            axis2: Axis::linspace("beta", 0.0, beta_max, points)?,
        })
    }

    /// 20 x 20 over `[0, 4] x [0, 6]`.
    pub fn quantum_walk_default() -> Self {
        Self::quantum_walk(4.0, 6.0, DEFAULT_GRID_POINTS).expect("static grid")
    }

    /// 20 x 20 over `[0, pi/2]^2`.
    pub fn qaoa_default() -> Self {
        let h = std::f64::consts::FRAC_PI_2;
        Self::qaoa(h, h, DEFAULT_GRID_POINTS).expect("static grid")
    }

    pub fn for_protocol_default(protocol: Protocol) -> Self {
        match protocol {
            Protocol::Msqw => Self::quantum_walk_default(),
            Protocol::Qaoa => Self::qaoa_default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridOptimum {
    pub i: usize,
    pub j: usize,
    pub axis1: f64,
    pub axis2: f64,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridScanResult {
    pub axis1: Axis,
    pub axis2: Axis,
    /// Row-major over `(axis1, axis2)`.
    pub energy: Vec<f64>,
    pub success_prob: Vec<f64>,
    /// Standard errors, present for time-averaged scans.
    pub energy_se: Option<Vec<f64>>,
    pub success_prob_se: Option<Vec<f64>>,
    pub protocol: Protocol,
    pub stages: usize,
    pub instance_id: String,
    pub seed: u64,
}

impl GridScanResult {
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.axis2.len() + j
    }

    pub fn energy_at(&self, i: usize, j: usize) -> f64 {
        self.energy[self.index(i, j)]
    }

    pub fn success_prob_at(&self, i: usize, j: usize) -> f64 {
        self.success_prob[self.index(i, j)]
    }

    fn optimum(&self, values: &[f64], better: impl Fn(f64, f64) -> bool) -> GridOptimum {
        let mut best = 0;
        for k in 1..values.len() {
            if better(values[k], values[best]) {
                best = k;
            }
        }
        let (i, j) = (best / self.axis2.len(), best % self.axis2.len());
        GridOptimum {
            i,
            j,
            axis1: self.axis1.values[i],
            axis2: self.axis2.values[j],
            value: values[best],
        }
    }

    /// Lowest energy on the grid (first in row-major order on ties).
    pub fn min_energy(&self) -> GridOptimum {
        self.optimum(&self.energy, |a, b| a < b)
    }

    /// Highest success probability on the grid.
    pub fn max_success_prob(&self) -> GridOptimum {
        self.optimum(&self.success_prob, |a, b| a > b)
    }
}

/// One deterministic run per grid point. Axes are `(gamma, t)` for the
/// quantum walk and `(alpha, beta)` for QAOA.
pub fn scan_single_stage<T: Float>(
    problem: &Problem<T>,
    protocol: Protocol,
    grid: &GridSpec,
    seed: u64,
) -> Result<GridScanResult> {
    let n = problem.n();
    let diag = &problem.diag;
    let rows: Vec<Vec<(f64, f64)>> = grid
        .axis1
        .values
        .par_iter()
        .map(|&a1| -> Result<Vec<(f64, f64)>> {
            let plus = StateVector::<T>::plus(n)?;
            match protocol {
                Protocol::Msqw => {
                    let prop = QwPropagator::for_hopping_rate(diag, T::lit(a1))?;
                    let mut scratch = vec![Complex::zero(); plus.dim()];
                    grid.axis2
                        .values
                        .iter()
                        .map(|&t| {
                            let mut amps = plus.amplitudes().to_vec();
                            prop.propagate_in_place(&mut amps, &mut scratch, T::lit(t));
                            let m = measure_amplitudes(&amps, diag, &problem.ground);
                            Ok((m.energy.to_f64_lossy(), m.success_prob.to_f64_lossy()))
                        })
                        .collect()
                }
                Protocol::Qaoa => grid
                    .axis2
                    .values
                    .iter()
                    .map(|&beta| {
                        let mut amps = plus.amplitudes().to_vec();
                        phase_in_place(&mut amps, diag.energies(), T::lit(beta));
                        driver_in_place(&mut amps, n, T::lit(a1));
                        let m = measure_amplitudes(&amps, diag, &problem.ground);
                        Ok((m.energy.to_f64_lossy(), m.success_prob.to_f64_lossy()))
                    })
                    .collect(),
            }
        })
        .collect::<Result<_>>()?;
    let (energy, success_prob) = rows.into_iter().flatten().unzip();
    Ok(GridScanResult {
        axis1: grid.axis1.clone(),
        axis2: grid.axis2.clone(),
        energy,
        success_prob,
        energy_se: None,
        success_prob_se: None,
        protocol,
        stages: 1,
        instance_id: problem.instance_id.clone(),
        seed,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DominanceRow {
    pub instance_id: String,
    pub qw_best_energy: f64,
    pub qaoa_best_energy: f64,
    pub qw_best_prob: f64,
    pub qaoa_best_prob: f64,
}

impl DominanceRow {
    pub fn qw_wins_energy(&self) -> bool {
        self.qw_best_energy < self.qaoa_best_energy
    }

    pub fn qw_wins_prob(&self) -> bool {
        self.qw_best_prob > self.qaoa_best_prob
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DominanceReport {
    pub rows: Vec<DominanceRow>,
    pub qw_energy_wins: usize,
    pub qw_prob_wins: usize,
    pub qw_both_wins: usize,
}

impl DominanceReport {
    pub fn both_win_fraction(&self) -> f64 {
        self.qw_both_wins as f64 / self.rows.len() as f64
    }
}

/// Grid-optimal single-stage QW against grid-optimal single-stage QAOA on each instance.
pub fn dominance_study<T: Float>(
    problems: &[Problem<T>],
    qw_grid: &GridSpec,
    qaoa_grid: &GridSpec,
) -> Result<DominanceReport> {
    if problems.len() < 2 {
        return Err(Error::Usage("dominance study needs at least 2 instances".into()));
    }
    let rows: Vec<DominanceRow> = problems
        .par_iter()
        .map(|p| -> Result<DominanceRow> {
            let qw = scan_single_stage(p, Protocol::Msqw, qw_grid, 0)?;
            let qa = scan_single_stage(p, Protocol::Qaoa, qaoa_grid, 0)?;
            Ok(DominanceRow {
                instance_id: p.instance_id.clone(),
                qw_best_energy: qw.min_energy().value,
                qaoa_best_energy: qa.min_energy().value,
                qw_best_prob: qw.max_success_prob().value,
                qaoa_best_prob: qa.max_success_prob().value,
            })
        })
        .collect::<Result<_>>()?;
    let qw_energy_wins = rows.iter().filter(|r| r.qw_wins_energy()).count();
    let qw_prob_wins = rows.iter().filter(|r| r.qw_wins_prob()).count();
    let qw_both_wins = rows
        .iter()
        .filter(|r| r.qw_wins_energy() && r.qw_wins_prob())
        .count();
    Ok(DominanceReport {
        rows,
        qw_energy_wins,
        qw_prob_wins,
        qw_both_wins,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiStageSpec {
    pub protocol: Protocol,
    pub p: usize,
    /// `gamma_1` for `p = 2`, the initial `gamma` otherwise.
    pub axis1: Axis,
    /// `gamma_2` for `p = 2`, the decay parameter `dgamma` otherwise.
    pub axis2: Axis,
    pub decay: DecayKind,
    pub window: TimeWindow,
}

impl MultiStageSpec {
    /// Axes `[0, 4]^2` for two stages, `[0, 4] x [0, 0.5]` beyond.
    pub fn standard(protocol: Protocol, p: usize, points: usize, window: TimeWindow) -> Result<Self> {
        let (axis1, axis2) = if p == 2 {
            (
                Axis::linspace("gamma1", 0.0, 4.0, points)?,
                Axis::linspace("gamma2", 0.0, 4.0, points)?,
            )
        } else {
            (
                Axis::linspace("gamma", 0.0, 4.0, points)?,
                Axis::linspace("dgamma", 0.0, 0.5, points)?,
            )
        };
        Ok(MultiStageSpec {
            protocol,
            p,
            axis1,
            axis2,
            decay: DecayKind::Geometric,
            window,
        })
    }

    /// Per-stage hopping rates at one grid point.
    pub fn gammas(&self, a1: f64, a2: f64) -> Vec<f64> {
        if self.p == 2 {
            vec![a1, a2]
        } else {
            gamma_sequence(a1, a2, self.p, self.decay).gammas
        }
    }
}

/// Time-averaged scan over a two-parameter reduction of a `p`-stage schedule.
pub fn scan_multistage<T: Float>(problem: &Problem<T>, spec: &MultiStageSpec) -> Result<GridScanResult> {
    if spec.p < 2 {
        return Err(Error::Usage("multi-stage scans need p >= 2".into()));
    }
    spec.window.validate()?;
    if spec.p > 2 && spec.axis2.values.iter().any(|&d| !(0.0..1.0).contains(&d)) {
        return Err(Error::Usage("dgamma values must lie in [0, 1)".into()));
    }
    // Two-stage grids revisit the same hopping rates, so they share one cache.
    let shared = QwCache::new(&problem.diag);
    let points: Vec<(f64, f64)> = spec
        .axis1
        .values
        .iter()
        .flat_map(|&a| spec.axis2.values.iter().map(move |&b| (a, b)))
        .collect();
    let results = points
        .par_iter()
        .map(|&(a1, a2)| {
            let gammas: Vec<T> = spec.gammas(a1, a2).into_iter().map(T::lit).collect();
            if spec.p == 2 {
                time_averaged_metrics(&shared, &problem.ground, spec.protocol, &gammas, &spec.window)
            } else {
                let local = QwCache::new(&problem.diag);
                time_averaged_metrics(&local, &problem.ground, spec.protocol, &gammas, &spec.window)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GridScanResult {
        axis1: spec.axis1.clone(),
        axis2: spec.axis2.clone(),
        energy: results.iter().map(|r| r.energy.mean).collect(),
        success_prob: results.iter().map(|r| r.success_prob.mean).collect(),
        energy_se: Some(results.iter().map(|r| r.energy.std_err).collect()),
        success_prob_se: Some(results.iter().map(|r| r.success_prob.std_err).collect()),
        protocol: spec.protocol,
        stages: spec.p,
        instance_id: problem.instance_id.clone(),
        seed: spec.window.seed,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalingMethod {
    /// First-order product: phase then driver per segment.
    Qaoa1,
    /// Symmetric half-driver, phase, half-driver per segment.
    Qaoa2,
    /// Exact evolution under the segment-averaged Hamiltonian.
    Msqw,
}

impl ScalingMethod {
    pub const ALL: [ScalingMethod; 3] = [ScalingMethod::Qaoa1, ScalingMethod::Qaoa2, ScalingMethod::Msqw];
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceConfig {
    pub start_steps: usize,
    pub max_steps: usize,
    pub tol: f64,
}

impl Default for ReferenceConfig {
    fn default() -> Self {
        ReferenceConfig {
            start_steps: 512,
            max_steps: 1 << 20,
            tol: 1e-8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingConfig {
    pub p_values: Vec<usize>,
    pub schedule: AnnealSchedule<f64>,
    pub methods: BTreeSet<ScalingMethod>,
    pub reference: ReferenceConfig,
}

impl ScalingConfig {
    /// `p = 4..128` by doubling, linear ramp with total time 2, all methods.
    pub fn standard() -> Self {
        ScalingConfig {
            p_values: vec![4, 8, 16, 32, 64, 128],
            schedule: AnnealSchedule::linear_ramp(2.0).expect("static schedule"),
            methods: ScalingMethod::ALL.into_iter().collect(),
            reference: ReferenceConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct FittedSlopes {
    pub qaoa1: Option<f64>,
    pub qaoa2: Option<f64>,
    pub msqw: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub instance_id: String,
    pub n: usize,
    pub p_values: Vec<usize>,
    pub err_qaoa1: Option<Vec<f64>>,
    pub err_qaoa2: Option<Vec<f64>>,
    pub err_msqw: Option<Vec<f64>>,
    pub h_max: f64,
    pub hdot_max: f64,
    pub commutator_norm: f64,
    pub fitted_slopes: FittedSlopes,
    pub reference_steps: usize,
    pub reference_change: f64,
    pub schedule: AnnealSchedule<f64>,
}

impl ScalingReport {
    pub fn errors(&self, method: ScalingMethod) -> Option<&[f64]> {
        match method {
            ScalingMethod::Qaoa1 => self.err_qaoa1.as_deref(),
            ScalingMethod::Qaoa2 => self.err_qaoa2.as_deref(),
            ScalingMethod::Msqw => self.err_msqw.as_deref(),
        }
    }

    pub fn slope(&self, method: ScalingMethod) -> Option<f64> {
        match method {
            ScalingMethod::Qaoa1 => self.fitted_slopes.qaoa1,
            ScalingMethod::Qaoa2 => self.fitted_slopes.qaoa2,
            ScalingMethod::Msqw => self.fitted_slopes.msqw,
        }
    }

    /// Errors over the largest four `p` values never increase.
    pub fn tail_non_increasing(&self, method: ScalingMethod) -> bool {
        self.errors(method).is_none_or(|e| {
            let tail = &e[e.len().saturating_sub(4)..];
            tail.windows(2).all(|w| w[1] <= w[0])
        })
    }
}

/// Errors below this are treated as reference noise and excluded from slope fits.
pub const SLOPE_ERROR_FLOOR: f64 = 1e-10;

/// Least-squares slope of `log2(err)` against `log2(p)` over the largest
/// half of the `p` values, skipping errors below [`SLOPE_ERROR_FLOOR`].
pub fn fit_log_log_slope(p_values: &[usize], errors: &[f64]) -> Option<f64> {
    let keep = p_values.len().div_ceil(2);
    let start = p_values.len() - keep;
    let pts: Vec<(f64, f64)> = p_values[start..]
        .iter()
        .zip(&errors[start..])
        .filter(|(_, &e)| e >= SLOPE_ERROR_FLOOR)
        .map(|(&p, &e)| ((p as f64).log2(), e.log2()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    Some(sxy / sxx)
}

fn symmetric_norm<T: Float>(m: DMatrix<T>) -> T {
    SymmetricEigen::new(m)
        .eigenvalues
        .iter()
        .fold(T::zero(), |acc, &x| if x.abs() > acc { x.abs() } else { acc })
}

/// `(H_max, Hdot_max)` over a 1001-point grid of the schedule, the
/// derivative taken by forward differences.
pub fn schedule_norm_constants<T: Float>(diag: &DiagonalEnergies<T>, schedule: &AnnealSchedule<T>) -> (T, T) {
    const GRID: usize = 1001;
    let ham = |k: usize| {
        let s = T::lit(k as f64 / (GRID - 1) as f64);
        hamiltonian_matrix(diag, schedule.a.eval(s), schedule.b.eval(s))
    };
    let mut h_max = T::zero();
    let mut hdot_max = T::zero();
    let dt = schedule.t_total / T::lit((GRID - 1) as f64);
    let mut prev = ham(0);
    for k in 0..GRID {
        let cur = if k == 0 { prev.clone() } else { ham(k) };
        let h = symmetric_norm(cur.clone());
        if h > h_max {
            h_max = h;
        }
        if k > 0 && dt > T::zero() {
            let d = symmetric_norm((&cur - &prev) / dt);
            if d > hdot_max {
                hdot_max = d;
            }
        }
        prev = cur;
    }
    (h_max, hdot_max)
}

/// Spectral norm of `[H_d, H_P]`.
pub fn commutator_norm<T: Float>(diag: &DiagonalEnergies<T>) -> T {
    let hd = hamiltonian_matrix(diag, T::one(), T::zero());
    let hp = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(diag.energies()));
    let c = &hd * &hp - &hp * &hd;
    c.singular_values()
        .iter()
        .fold(T::zero(), |acc, &s| if s > acc { s } else { acc })
}

/// Dense operator of a `p`-segment approximant of the annealing schedule.
pub fn product_formula_unitary<T: Float>(
    diag: &DiagonalEnergies<T>,
    schedule: &AnnealSchedule<T>,
    p: usize,
    method: ScalingMethod,
) -> Result<DenseUnitary<T>> {
    check_qubits(diag.n(), MAX_DENSE_QUBITS)?;
    if p == 0 {
        return Err(Error::Usage("segment count must be at least 1".into()));
    }
    let dim = diag.dim();
    let n = diag.n();
    let dt = schedule.t_total / T::lit(p as f64);
    let half = T::lit(0.5);
    let mut u = DMatrix::<Complex<T>>::identity(dim, dim);
    match method {
        ScalingMethod::Msqw => {
            for j in 0..p {
                let (a, b) = schedule.segment_averages(j, p);
                u = QwPropagator::new(diag, a, b)?.unitary(dt) * u;
            }
        }
        ScalingMethod::Qaoa1 | ScalingMethod::Qaoa2 => {
            let segs: Vec<(T, T)> = (0..p).map(|j| schedule.segment_averages(j, p)).collect();
            for z in 0..dim {
                let mut col = vec![Complex::zero(); dim];
                col[z] = Complex::new(T::one(), T::zero());
                for &(a, b) in &segs {
                    if method == ScalingMethod::Qaoa1 {
                        phase_in_place(&mut col, diag.energies(), b * dt);
                        driver_in_place(&mut col, n, a * dt);
                    } else {
                        driver_in_place(&mut col, n, a * dt * half);
                        phase_in_place(&mut col, diag.energies(), b * dt);
                        driver_in_place(&mut col, n, a * dt * half);
                    }
                }
                u.set_column(z, &nalgebra::DVector::from_vec(col));
            }
        }
    }
    DenseUnitary::from_matrix(n, u)
}

/// Spectral-norm distance of each product formula to the converged
/// annealing evolution, per segment count.
pub fn scaling_study(problem: &Problem<f64>, config: &ScalingConfig) -> Result<ScalingReport> {
    let diag = &problem.diag;
    check_qubits(diag.n(), MAX_DENSE_QUBITS)?;
    if config.p_values.is_empty() || config.p_values.contains(&0) {
        return Err(Error::Usage("p_values must be non-empty and positive".into()));
    }
    if config.p_values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Usage("p_values must be strictly increasing".into()));
    }
    let schedule = &config.schedule;
    let reference = converged_anneal_unitary(
        diag,
        schedule,
        config.reference.start_steps,
        config.reference.max_steps,
        config.reference.tol,
    )?;
    let errors_for = |method: ScalingMethod| -> Result<Option<Vec<f64>>> {
        if !config.methods.contains(&method) {
            return Ok(None);
        }
        config
            .p_values
            .par_iter()
            .map(|&p| product_formula_unitary(diag, schedule, p, method)?.distance(&reference.unitary))
            .collect::<Result<Vec<_>>>()
            .map(Some)
    };
    let err_qaoa1 = errors_for(ScalingMethod::Qaoa1)?;
    let err_qaoa2 = errors_for(ScalingMethod::Qaoa2)?;
    let err_msqw = errors_for(ScalingMethod::Msqw)?;
    let slope = |e: &Option<Vec<f64>>| e.as_ref().and_then(|e| fit_log_log_slope(&config.p_values, e));
    let (h_max, hdot_max) = schedule_norm_constants(diag, schedule);
    Ok(ScalingReport {
        instance_id: problem.instance_id.clone(),
        n: diag.n(),
        p_values: config.p_values.clone(),
        fitted_slopes: FittedSlopes {
            qaoa1: slope(&err_qaoa1),
            qaoa2: slope(&err_qaoa2),
            msqw: slope(&err_msqw),
        },
        err_qaoa1,
        err_qaoa2,
        err_msqw,
        h_max,
        hdot_max,
        commutator_norm: commutator_norm(diag),
        reference_steps: reference.steps,
        reference_change: reference.last_change,
        schedule: schedule.clone(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow<S> {
    /// 1-based stage index.
    pub stage: usize,
    pub alpha_over_t: S,
    pub beta_over_t: S,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleProfile<S> {
    pub rows: Vec<ProfileRow<S>>,
    pub clamped: bool,
}

impl<S: ScheduleScalar> ScheduleProfile<S> {
    pub fn alpha_strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].alpha_over_t < w[0].alpha_over_t)
    }

    pub fn beta_strictly_increasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].beta_over_t > w[0].beta_over_t)
    }

    /// Sign changes of `alpha/t - beta/t` across consecutive stages; stages
    /// where the two are equal are skipped.
    pub fn crossings(&self) -> usize {
        let signs: Vec<bool> = self
            .rows
            .iter()
            .filter(|r| r.alpha_over_t != r.beta_over_t)
            .map(|r| r.alpha_over_t > r.beta_over_t)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }
}

/// Normalized QAOA coefficients `(alpha_j / t, beta_j / t)` induced by a
/// hopping-rate decay rule at a fixed stage duration `t`.
pub fn emit_schedule_profile<S: ScheduleScalar>(
    gamma0: S,
    delta_gamma: S,
    p: usize,
    decay: DecayKind,
    t: S,
) -> Result<ScheduleProfile<S>> {
    if p == 0 {
        return Err(Error::Usage("profile needs at least one stage".into()));
    }
    if !(t > S::zero()) {
        return Err(Error::Usage("stage duration must be positive".into()));
    }
    if gamma0 < S::zero() || delta_gamma < S::zero() || delta_gamma >= S::one() {
        return Err(Error::Usage("need gamma0 >= 0 and dgamma in [0, 1)".into()));
    }
    let seq = gamma_sequence(gamma0, delta_gamma, p, decay);
    let rows = seq
        .gammas
        .into_iter()
        .enumerate()
        .map(|(j, g)| {
            let (alpha, beta) = map_gamma_to_qaoa(g, t.clone())?;
            Ok(ProfileRow {
                stage: j + 1,
                alpha_over_t: alpha / t.clone(),
                beta_over_t: beta / t.clone(),
            })
        })
        .collect::<Result<_>>()?;
    Ok(ScheduleProfile {
        rows,
        clamped: seq.clamped,
    })
}
