//! Time-evolution operators.
//!
//! * [`phase_propagate`]: `exp(-i beta H_P)`, diagonal and exact.
//! * [`driver_propagate`]: `exp(-i alpha H_d) = prod_j exp(+i alpha X_j)`,
//!   exact because the `X_j` commute.
//! * [`QwPropagator`]: `exp(-i (a H_d + b H_P) t)` through a dense real
//!   symmetric eigendecomposition, reusable for any `t`.
//! * [`anneal_propagate`]: the time-ordered evolution under
//!   `A(s) H_d + B(s) H_P`, approximated by piecewise-constant sub-steps with
//!   midpoint coefficients. Each sub-step is an exact quantum-walk step, so
//!   the approximation stays unitary and its error is `O(dt^2)`.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::DiagonalEnergies;
use crate::num::{Complex, Float};
use crate::state::{check_qubits, DenseUnitary, StateVector, MAX_DENSE_QUBITS};

/// Largest register diagonalized densely for quantum-walk evolution.
pub const MAX_QW_QUBITS: usize = 12;

fn check_register<T: Float>(state: &StateVector<T>, diag: &DiagonalEnergies<T>) -> Result<()> {
    if state.n() != diag.n() {
        return Err(Error::Usage(format!(
            "{}-qubit state with {}-qubit problem Hamiltonian",
            state.n(),
            diag.n()
        )));
    }
    Ok(())
}

fn check_finite<T: Float>(name: &str, x: T) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::Usage(format!("{name} must be finite, got {x}")));
    }
    Ok(())
}

pub(crate) fn phase_in_place<T: Float>(amps: &mut [Complex<T>], energies: &[T], beta: T) {
    for (a, &e) in amps.iter_mut().zip(energies) {
        let (s, c) = (-beta * e).sin_cos();
        *a *= Complex::new(c, s);
    }
}

pub(crate) fn driver_in_place<T: Float>(amps: &mut [Complex<T>], n: usize, alpha: T) {
    let (s, c) = alpha.sin_cos();
    let is = Complex::new(T::zero(), s);
    for j in 0..n {
        let bit = 1usize << j;
        for z in 0..amps.len() {
            if z & bit != 0 {
                continue;
            }
            let lo = amps[z];
            let hi = amps[z | bit];
            amps[z] = lo.scale(c) + is * hi;
            amps[z | bit] = is * lo + hi.scale(c);
        }
    }
}

/// `exp(-i beta H_P) |psi>`.
pub fn phase_propagate<T: Float>(
    state: &StateVector<T>,
    diag: &DiagonalEnergies<T>,
    beta: T,
) -> Result<StateVector<T>> {
    check_register(state, diag)?;
    check_finite("beta", beta)?;
    let mut out = state.clone();
    phase_in_place(out.amplitudes_mut(), diag.energies(), beta);
    Ok(out)
}

/// `exp(-i alpha H_d) |psi>` with `H_d = -sum_j X_j`.
pub fn driver_propagate<T: Float>(state: &StateVector<T>, alpha: T) -> Result<StateVector<T>> {
    check_finite("alpha", alpha)?;
    let mut out = state.clone();
    let n = out.n();
    driver_in_place(out.amplitudes_mut(), n, alpha);
    Ok(out)
}

/// Dense real symmetric matrix of `a H_d + b H_P`.
pub fn hamiltonian_matrix<T: Float>(diag: &DiagonalEnergies<T>, a: T, b: T) -> DMatrix<T> {
    let dim = diag.dim();
    let mut h = DMatrix::<T>::zeros(dim, dim);
    for z in 0..dim {
        h[(z, z)] = b * diag.energies()[z];
        for j in 0..diag.n() {
            h[(z, z ^ (1 << j))] = -a;
        }
    }
    h
}

/// Eigendecomposition of a time-independent transverse-field Hamiltonian
/// `a H_d + b H_P`, applied as `V exp(-i Lambda t) V^T`.
#[derive(Clone, Debug)]
pub struct QwPropagator<T: Float> {
    n: usize,
    eigenvalues: Vec<T>,
    eigenvectors: DMatrix<T>,
}

impl<T: Float> QwPropagator<T> {
    pub fn new(diag: &DiagonalEnergies<T>, driver_coeff: T, problem_coeff: T) -> Result<Self> {
        check_qubits(diag.n(), MAX_QW_QUBITS)?;
        check_finite("driver coefficient", driver_coeff)?;
        check_finite("problem coefficient", problem_coeff)?;
        let h = hamiltonian_matrix(diag, driver_coeff, problem_coeff);
        let eig = SymmetricEigen::new(h);
        Ok(QwPropagator {
            n: diag.n(),
            eigenvalues: eig.eigenvalues.iter().copied().collect(),
            eigenvectors: eig.eigenvectors,
        })
    }

    /// Quantum-walk Hamiltonian `gamma H_d + H_P`.
    pub fn for_hopping_rate(diag: &DiagonalEnergies<T>, gamma: T) -> Result<Self> {
        if gamma < T::zero() {
            return Err(Error::Usage(format!("hopping rate must be non-negative, got {gamma}")));
        }
        Self::new(diag, gamma, T::one())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    /// Evolves `amps` in place for duration `t`. `scratch` must have the same length.
    pub fn propagate_in_place(&self, amps: &mut [Complex<T>], scratch: &mut [Complex<T>], t: T) {
        let v = &self.eigenvectors;
        let dim = amps.len();
        // scratch = exp(-i Lambda t) V^T amps
        for k in 0..dim {
            let col = v.column(k);
            let mut acc = Complex::<T>::zero();
            for (z, a) in amps.iter().enumerate() {
                acc += a.scale(col[z]);
            }
            let (s, c) = (-self.eigenvalues[k] * t).sin_cos();
            scratch[k] = acc * Complex::new(c, s);
        }
        // amps = V scratch
        amps.iter_mut().for_each(|a| *a = Complex::zero());
        for k in 0..dim {
            let col = v.column(k);
            let w = scratch[k];
            for (z, a) in amps.iter_mut().enumerate() {
                *a += w.scale(col[z]);
            }
        }
    }

    pub fn propagate(&self, state: &StateVector<T>, t: T) -> Result<StateVector<T>> {
        if state.n() != self.n {
            return Err(Error::Usage(format!(
                "{}-qubit state with {}-qubit propagator",
                state.n(),
                self.n
            )));
        }
        check_finite("t", t)?;
        let mut out = state.clone();
        let mut scratch = vec![Complex::zero(); out.dim()];
        self.propagate_in_place(out.amplitudes_mut(), &mut scratch, t);
        Ok(out)
    }

    /// The dense evolution operator `V exp(-i Lambda t) V^T`.
    pub fn unitary(&self, t: T) -> DMatrix<Complex<T>> {
        let dim = self.eigenvalues.len();
        let mut scaled = DMatrix::<Complex<T>>::zeros(dim, dim);
        for k in 0..dim {
            let (s, c) = (-self.eigenvalues[k] * t).sin_cos();
            let ph = Complex::new(c, s);
            for z in 0..dim {
                scaled[(z, k)] = ph.scale(self.eigenvectors[(z, k)]);
            }
        }
        let vt = self.eigenvectors.transpose().map(|x| Complex::new(x, T::zero()));
        scaled * vt
    }
}

/// Per-instance cache of quantum-walk eigendecompositions keyed by hopping rate.
///
/// Insertion is idempotent: two workers racing on the same key compute the
/// same decomposition and one of them wins.
pub struct QwCache<'a, T: Float> {
    diag: &'a DiagonalEnergies<T>,
    entries: RwLock<HashMap<u64, Arc<QwPropagator<T>>>>,
}

impl<'a, T: Float> QwCache<'a, T> {
    pub fn new(diag: &'a DiagonalEnergies<T>) -> Self {
        QwCache {
            diag,
            entries: RwLock::new(HashMap::new()),
        }
    }

    pub fn diag(&self) -> &DiagonalEnergies<T> {
        self.diag
    }

    pub fn get(&self, gamma: T) -> Result<Arc<QwPropagator<T>>> {
        let key = gamma.to_f64_lossy().to_bits();
        if let Some(p) = self.entries.read().expect("cache lock").get(&key) {
            return Ok(Arc::clone(p));
        }
        let p = Arc::new(QwPropagator::for_hopping_rate(self.diag, gamma)?);
        let mut w = self.entries.write().expect("cache lock");
        Ok(Arc::clone(w.entry(key).or_insert(p)))
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `exp(-i (gamma H_d + H_P) t) |psi>`.
pub fn qw_propagate<T: Float>(
    state: &StateVector<T>,
    diag: &DiagonalEnergies<T>,
    gamma: T,
    t: T,
) -> Result<StateVector<T>> {
    check_register(state, diag)?;
    if t < T::zero() {
        return Err(Error::Usage(format!("duration must be non-negative, got {t}")));
    }
    QwPropagator::for_hopping_rate(diag, gamma)?.propagate(state, t)
}

/// Polynomial coefficient function of normalized time `s in [0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coefficient<T> {
    /// Power-series coefficients, lowest order first.
    pub poly: Vec<T>,
}

impl<T: Float> Coefficient<T> {
    pub fn constant(c: T) -> Self {
        Coefficient { poly: vec![c] }
    }

    /// Straight line from `start` at `s = 0` to `end` at `s = 1`.
    pub fn linear(start: T, end: T) -> Self {
        Coefficient {
            poly: vec![start, end - start],
        }
    }

    pub fn eval(&self, s: T) -> T {
        self.poly.iter().rev().fold(T::zero(), |acc, &c| acc * s + c)
    }

    pub fn derivative(&self, s: T) -> T {
        self.poly
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(T::zero(), |acc, (k, &c)| acc * s + c * T::lit(k as f64))
    }

    /// Mean value over `[s0, s1]`, integrated exactly.
    pub fn average(&self, s0: T, s1: T) -> T {
        if s1 == s0 {
            return self.eval(s0);
        }
        let antideriv = |s: T| {
            self.poly
                .iter()
                .enumerate()
                .rev()
                .fold(T::zero(), |acc, (k, &c)| acc * s + c / T::lit(k as f64 + 1.0))
                * s
        };
        (antideriv(s1) - antideriv(s0)) / (s1 - s0)
    }

    fn is_finite(&self) -> bool {
        self.poly.iter().all(|c| c.is_finite())
    }
}

/// `H(t) = A(t/T) H_d + B(t/T) H_P` for `t in [0, T]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnealSchedule<T> {
    pub a: Coefficient<T>,
    pub b: Coefficient<T>,
    pub t_total: T,
}

impl<T: Float> AnnealSchedule<T> {
    pub fn new(a: Coefficient<T>, b: Coefficient<T>, t_total: T) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::Config("schedule coefficients must be finite".into()));
        }
        if !(t_total >= T::zero()) || !t_total.is_finite() {
            return Err(Error::Config(format!("total time must be finite and >= 0, got {t_total}")));
        }
        Ok(AnnealSchedule { a, b, t_total })
    }

    /// `A(s) = 1 - s`, `B(s) = s`.
    pub fn linear_ramp(t_total: T) -> Result<Self> {
        Self::new(
            Coefficient::linear(T::one(), T::zero()),
            Coefficient::linear(T::zero(), T::one()),
            t_total,
        )
    }

    /// Time-independent `A H_d + B H_P`.
    pub fn constant(a: T, b: T, t_total: T) -> Result<Self> {
        Self::new(Coefficient::constant(a), Coefficient::constant(b), t_total)
    }

    /// `(A, B)` at the midpoint of sub-interval `k` of `steps`.
    pub fn midpoint_coefficients(&self, k: usize, steps: usize) -> (T, T) {
        let s = (T::lit(k as f64) + T::lit(0.5)) / T::lit(steps as f64);
        (self.a.eval(s), self.b.eval(s))
    }

    /// Interval means of `A` and `B` over segment `j` of `p` equal segments.
    pub fn segment_averages(&self, j: usize, p: usize) -> (T, T) {
        let s0 = T::lit(j as f64) / T::lit(p as f64);
        let s1 = T::lit((j + 1) as f64) / T::lit(p as f64);
        (self.a.average(s0, s1), self.b.average(s0, s1))
    }
}

/// Midpoint-rule approximation of the annealing evolution applied to one state.
pub fn anneal_propagate<T: Float>(
    state: &StateVector<T>,
    diag: &DiagonalEnergies<T>,
    schedule: &AnnealSchedule<T>,
    steps: usize,
) -> Result<StateVector<T>> {
    check_register(state, diag)?;
    if steps == 0 {
        return Err(Error::Usage("anneal_propagate needs at least one step".into()));
    }
    let dt = schedule.t_total / T::lit(steps as f64);
    let mut out = state.clone();
    let mut scratch = vec![Complex::zero(); out.dim()];
    for k in 0..steps {
        let (a, b) = schedule.midpoint_coefficients(k, steps);
        let prop = QwPropagator::new(diag, a, b)?;
        prop.propagate_in_place(out.amplitudes_mut(), &mut scratch, dt);
    }
    Ok(out)
}

/// Full operator of [`anneal_propagate`] at a given step count, built by
/// multiplying the dense sub-step unitaries.
pub fn anneal_unitary<T: Float>(
    diag: &DiagonalEnergies<T>,
    schedule: &AnnealSchedule<T>,
    steps: usize,
) -> Result<DenseUnitary<T>> {
    check_qubits(diag.n(), MAX_DENSE_QUBITS)?;
    if steps == 0 {
        return Err(Error::Usage("anneal_unitary needs at least one step".into()));
    }
    let dt = schedule.t_total / T::lit(steps as f64);
    let dim = diag.dim();
    let mut u = DMatrix::<Complex<T>>::identity(dim, dim);
    for k in 0..steps {
        let (a, b) = schedule.midpoint_coefficients(k, steps);
        let step = QwPropagator::new(diag, a, b)?.unitary(dt);
        u = step * u;
    }
    DenseUnitary::from_matrix(diag.n(), u)
}

#[derive(Clone, Debug)]
pub struct ConvergedReference<T: Float> {
    pub unitary: DenseUnitary<T>,
    pub steps: usize,
    /// Spectral norm of the difference to the half-step-count result.
    pub last_change: T,
}

/// Doubles the midpoint step count from `start_steps` until successive
/// operators differ by less than `tol` in spectral norm.
pub fn converged_anneal_unitary<T: Float>(
    diag: &DiagonalEnergies<T>,
    schedule: &AnnealSchedule<T>,
    start_steps: usize,
    max_steps: usize,
    tol: T,
) -> Result<ConvergedReference<T>> {
    let mut steps = start_steps.max(1);
    let mut prev = anneal_unitary(diag, schedule, steps)?;
    let mut history = Vec::new();
    while steps * 2 <= max_steps {
        steps *= 2;
        let next = anneal_unitary(diag, schedule, steps)?;
        let change = next.distance(&prev)?;
        history.push((steps, change));
        if change < tol {
            return Ok(ConvergedReference {
                unitary: next,
                steps,
                last_change: change,
            });
        }
        prev = next;
    }
    let trail: Vec<String> = history
        .iter()
        .map(|(s, c)| format!("{s}:{:.3e}", c.to_f64_lossy()))
        .collect();
    Err(Error::Convergence(format!(
        "no two successive step counts within {} up to {max_steps} steps (steps:change {})",
        tol.to_f64_lossy(),
        trail.join(" ")
    )))
}

/// Builds the dense matrix of a linear state map by propagating every basis
/// state; column `z` is the image of `|z>`.
pub fn build_dense_unitary<T, F>(n: usize, propagate: F) -> Result<DenseUnitary<T>>
where
    T: Float,
    F: Fn(&StateVector<T>) -> Result<StateVector<T>>,
{
    check_qubits(n, MAX_DENSE_QUBITS)?;
    let dim = 1usize << n;
    let mut m = DMatrix::<Complex<T>>::zeros(dim, dim);
    for z in 0..dim {
        let out = propagate(&StateVector::basis(n, z)?)?;
        if out.n() != n {
            return Err(Error::Usage("propagator changed the register size".into()));
        }
        m.set_column(z, &nalgebra::DVector::from_column_slice(out.amplitudes()));
    }
    DenseUnitary::from_matrix(n, m)
}
