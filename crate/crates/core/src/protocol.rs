//! QAOA and multi-stage quantum walk (MSQW) runners, the hopping-rate to
//! QAOA-angle mapping, heuristic decay schedules and time-averaged metrics.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rand::distr::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{DiagonalEnergies, GroundStateRecord};
use crate::num::{Complex, Float, ScheduleScalar};
use crate::propagate::{driver_in_place, phase_in_place, QwCache};
use crate::state::StateVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    Msqw,
    Qaoa,
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Protocol::Msqw => "msqw",
            Protocol::Qaoa => "qaoa",
        })
    }
}

impl FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "msqw" => Ok(Protocol::Msqw),
            "qaoa" => Ok(Protocol::Qaoa),
            other => Err(Error::Usage(format!(
                "unknown protocol '{other}' (expected msqw or qaoa)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MsqwStage<S> {
    pub gamma: S,
    pub t: S,
}

/// Stages `(gamma_j, t_j)`, applied in order `j = 1..p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MsqwSchedule<S> {
    stages: Vec<MsqwStage<S>>,
}

impl<S: ScheduleScalar> MsqwSchedule<S> {
    pub fn new(stages: Vec<MsqwStage<S>>) -> Result<Self> {
        if stages.is_empty() {
            return Err(Error::Usage("schedule needs at least one stage".into()));
        }
        for (j, st) in stages.iter().enumerate() {
            if st.gamma < S::zero() || st.t < S::zero() {
                return Err(Error::Usage(format!(
                    "stage {}: gamma and t must be non-negative (got {:?}, {:?})",
                    j + 1,
                    st.gamma,
                    st.t
                )));
            }
        }
        Ok(MsqwSchedule { stages })
    }

    pub fn from_pairs(pairs: &[(S, S)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|(g, t)| MsqwStage {
                    gamma: g.clone(),
                    t: t.clone(),
                })
                .collect(),
        )
    }
}

impl<S> MsqwSchedule<S> {
    pub fn stages(&self) -> &[MsqwStage<S>] {
        &self.stages
    }

    pub fn p(&self) -> usize {
        self.stages.len()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QaoaStage<S> {
    /// Driver duration.
    pub alpha: S,
    /// Problem-phase duration.
    pub beta: S,
}

/// QAOA angles `(alpha_j, beta_j)`. Within each stage the problem phase acts
/// first, then the driver rotation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QaoaSchedule<S> {
    stages: Vec<QaoaStage<S>>,
}

impl<S: ScheduleScalar> QaoaSchedule<S> {
    pub fn new(stages: Vec<QaoaStage<S>>) -> Result<Self> {
        if stages.is_empty() {
            return Err(Error::Usage("schedule needs at least one stage".into()));
        }
        for (j, st) in stages.iter().enumerate() {
            if st.alpha < S::zero() || st.beta < S::zero() {
                return Err(Error::Usage(format!(
                    "stage {}: alpha and beta must be non-negative (got {:?}, {:?})",
                    j + 1,
                    st.alpha,
                    st.beta
                )));
            }
        }
        Ok(QaoaSchedule { stages })
    }

    pub fn from_pairs(pairs: &[(S, S)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|(a, b)| QaoaStage {
                    alpha: a.clone(),
                    beta: b.clone(),
                })
                .collect(),
        )
    }
}

impl<S> QaoaSchedule<S> {
    pub fn stages(&self) -> &[QaoaStage<S>] {
        &self.stages
    }

    pub fn p(&self) -> usize {
        self.stages.len()
    }
}

/// QAOA stage with the same total time and driver/problem ratio as a
/// quantum-walk stage: `alpha = gamma t / (1 + gamma)`, `beta = t / (1 + gamma)`.
pub fn map_gamma_to_qaoa<S: ScheduleScalar>(gamma: S, t: S) -> Result<(S, S)> {
    if gamma < S::zero() {
        return Err(Error::Usage(format!("hopping rate must be non-negative, got {gamma:?}")));
    }
    let denom = S::one() + gamma.clone();
    let beta = t.clone() / denom.clone();
    let alpha = gamma * t / denom;
    Ok((alpha, beta))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecayKind {
    /// `gamma_{j+1} = gamma_j (1 - dgamma)`.
    Geometric,
    /// `gamma_k = gamma - k dgamma / gamma`, `k` from 0, clamped at 0.
    Linear,
}

impl fmt::Display for DecayKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecayKind::Geometric => "geometric",
            DecayKind::Linear => "linear",
        })
    }
}

impl FromStr for DecayKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "geometric" => Ok(DecayKind::Geometric),
            "linear" => Ok(DecayKind::Linear),
            other => Err(Error::Usage(format!(
                "unknown decay '{other}' (expected geometric or linear)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeuristicScheduleParams<S> {
    pub gamma0: S,
    pub delta_gamma: S,
    pub p: usize,
    pub decay: DecayKind,
    pub t_min: S,
    pub t_max: S,
    pub samples: usize,
}

impl<S: ScheduleScalar> HeuristicScheduleParams<S> {
    pub fn validate(&self) -> Result<()> {
        if self.p == 0 {
            return Err(Error::Usage("stage count p must be at least 1".into()));
        }
        if self.gamma0 < S::zero() {
            return Err(Error::Usage(format!("gamma0 must be non-negative, got {:?}", self.gamma0)));
        }
        if self.delta_gamma < S::zero() || self.delta_gamma >= S::one() {
            return Err(Error::Usage(format!(
                "delta_gamma must lie in [0, 1), got {:?}",
                self.delta_gamma
            )));
        }
        if !(self.t_min > S::zero()) || self.t_min > self.t_max {
            return Err(Error::Usage(format!(
                "runtime window must satisfy 0 < t_min <= t_max, got [{:?}, {:?}]",
                self.t_min, self.t_max
            )));
        }
        if self.samples == 0 {
            return Err(Error::Usage("samples must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaSequence<S> {
    pub gammas: Vec<S>,
    /// True when a linear decay crossed zero and was clamped.
    pub clamped: bool,
}

/// Per-stage hopping rates for a decay rule.
pub fn gamma_sequence<S: ScheduleScalar>(
    gamma0: S,
    delta_gamma: S,
    p: usize,
    decay: DecayKind,
) -> GammaSequence<S> {
    let mut gammas = Vec::with_capacity(p);
    let mut clamped = false;
    match decay {
        DecayKind::Geometric => {
            let ratio = S::one() - delta_gamma;
            let mut g = gamma0;
            for _ in 0..p {
                gammas.push(g.clone());
                g = g * ratio.clone();
            }
        }
        DecayKind::Linear => {
            // gamma0 = 0 has nothing to decay; the step dgamma/gamma is undefined there.
            let step = if gamma0.is_zero() {
                S::zero()
            } else {
                delta_gamma / gamma0.clone()
            };
            let mut g = gamma0;
            for _ in 0..p {
                if g < S::zero() {
                    clamped = true;
                    gammas.push(S::zero());
                } else {
                    gammas.push(g.clone());
                }
                g = g - step.clone();
            }
        }
    }
    GammaSequence { gammas, clamped }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeuristicSchedule<S> {
    pub msqw: MsqwSchedule<S>,
    pub qaoa: QaoaSchedule<S>,
    pub clamped: bool,
}

/// MSQW stages `(gamma_j, t_j)` and the induced QAOA stages for given runtimes.
pub fn build_heuristic_schedule<S: ScheduleScalar>(
    params: &HeuristicScheduleParams<S>,
    runtimes: &[S],
) -> Result<HeuristicSchedule<S>> {
    params.validate()?;
    if runtimes.len() != params.p {
        return Err(Error::Usage(format!(
            "{} runtimes supplied for {} stages",
            runtimes.len(),
            params.p
        )));
    }
    let seq = gamma_sequence(
        params.gamma0.clone(),
        params.delta_gamma.clone(),
        params.p,
        params.decay,
    );
    let mut msqw = Vec::with_capacity(params.p);
    let mut qaoa = Vec::with_capacity(params.p);
    for (g, t) in seq.gammas.iter().zip(runtimes) {
        let (alpha, beta) = map_gamma_to_qaoa(g.clone(), t.clone())?;
        msqw.push(MsqwStage {
            gamma: g.clone(),
            t: t.clone(),
        });
        qaoa.push(QaoaStage { alpha, beta });
    }
    Ok(HeuristicSchedule {
        msqw: MsqwSchedule::new(msqw)?,
        qaoa: QaoaSchedule::new(qaoa)?,
        clamped: seq.clamped,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricSample<T> {
    /// `<psi|H_P|psi>`.
    pub energy: T,
    /// Total probability on all ground-state minimizers.
    pub success_prob: T,
}

pub fn measure_metrics<T: Float>(
    state: &StateVector<T>,
    diag: &DiagonalEnergies<T>,
    gs: &GroundStateRecord<T>,
) -> MetricSample<T> {
    measure_amplitudes(state.amplitudes(), diag, gs)
}

pub(crate) fn measure_amplitudes<T: Float>(
    amps: &[Complex<T>],
    diag: &DiagonalEnergies<T>,
    gs: &GroundStateRecord<T>,
) -> MetricSample<T> {
    let energy = diag
        .energies()
        .iter()
        .zip(amps)
        .fold(T::zero(), |acc, (e, a)| acc + *e * a.norm_sqr());
    let success_prob = gs
        .minimizers
        .iter()
        .fold(T::zero(), |acc, &z| acc + amps[z].norm_sqr());
    MetricSample {
        energy,
        success_prob,
    }
}

fn to_float<S: ScheduleScalar, T: Float>(x: &S) -> T {
    T::lit(x.approx_f64())
}

/// Runs the MSQW stages from `|s>`, each an exact quantum-walk evolution.
pub fn run_msqw<T: Float>(
    diag: &DiagonalEnergies<T>,
    schedule: &MsqwSchedule<T>,
) -> Result<StateVector<T>> {
    let cache = QwCache::new(diag);
    run_msqw_cached(&cache, schedule)
}

pub fn run_msqw_cached<T: Float>(
    cache: &QwCache<'_, T>,
    schedule: &MsqwSchedule<T>,
) -> Result<StateVector<T>> {
    let mut state = StateVector::plus(cache.diag().n())?;
    let mut scratch = vec![Complex::zero(); state.dim()];
    for st in schedule.stages() {
        let prop = cache.get(st.gamma)?;
        prop.propagate_in_place(state.amplitudes_mut(), &mut scratch, st.t);
    }
    Ok(state)
}

/// Runs QAOA from `|s>`: per stage, `exp(-i beta H_P)` then `exp(-i alpha H_d)`.
pub fn run_qaoa<T: Float>(
    diag: &DiagonalEnergies<T>,
    schedule: &QaoaSchedule<T>,
) -> Result<StateVector<T>> {
    let mut state = StateVector::plus(diag.n())?;
    let n = diag.n();
    for st in schedule.stages() {
        phase_in_place(state.amplitudes_mut(), diag.energies(), st.beta);
        driver_in_place(state.amplitudes_mut(), n, st.alpha);
    }
    Ok(state)
}

/// Runs either protocol for the schedule implied by hopping rates and runtimes.
pub fn run_gamma_schedule<T: Float>(
    cache: &QwCache<'_, T>,
    protocol: Protocol,
    gammas: &[T],
    runtimes: &[T],
) -> Result<StateVector<T>> {
    let pairs: Vec<(T, T)> = gammas.iter().copied().zip(runtimes.iter().copied()).collect();
    match protocol {
        Protocol::Msqw => run_msqw_cached(cache, &MsqwSchedule::from_pairs(&pairs)?),
        Protocol::Qaoa => {
            let stages = pairs
                .iter()
                .map(|&(g, t)| map_gamma_to_qaoa(g, t).map(|(alpha, beta)| QaoaStage { alpha, beta }))
                .collect::<Result<Vec<_>>>()?;
            run_qaoa(cache.diag(), &QaoaSchedule::new(stages)?)
        }
    }
}

/// Runtime sampling window for time-averaged metrics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeWindow {
    pub t_min: f64,
    pub t_max: f64,
    pub samples: usize,
    pub seed: u64,
}

impl TimeWindow {
    /// `[0.1, 0.5]` with 2000 samples.
    pub fn standard(seed: u64) -> Self {
        TimeWindow {
            t_min: 0.1,
            t_max: 0.5,
            samples: 2000,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::Usage("samples must be at least 1".into()));
        }
        if !(self.t_min > 0.0) || !(self.t_min <= self.t_max) || !self.t_max.is_finite() {
            return Err(Error::Usage(format!(
                "runtime window must satisfy 0 < t_min <= t_max, got [{}, {}]",
                self.t_min, self.t_max
            )));
        }
        Ok(())
    }

    /// The `p` runtimes of sample `index`. Each sample has its own ChaCha
    /// stream, so draws do not depend on evaluation order.
    pub fn runtimes(&self, index: usize, p: usize) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        let dist = Uniform::new_inclusive(self.t_min, self.t_max).expect("validated window");
        (0..p).map(|_| dist.sample(&mut rng)).collect()
    }
}

/// Mean and standard error of the mean.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_err: f64,
}

impl Estimate {
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let std_err = if xs.len() > 1 {
            let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
            (var / n).sqrt()
        } else {
            0.0
        };
        Estimate { mean, std_err }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeAveragedMetrics {
    pub energy: Estimate,
    pub success_prob: Estimate,
    /// Mean energy after each stage `1..=p`; the last entry equals `energy`.
    pub stage_energies: Vec<Estimate>,
    pub window: TimeWindow,
}

impl TimeAveragedMetrics {
    pub fn as_sample(&self) -> MetricSample<f64> {
        MetricSample {
            energy: self.energy.mean,
            success_prob: self.success_prob.mean,
        }
    }
}

/// Averages final energy and success probability over runs whose stage
/// durations are drawn i.i.d. uniform on `[t_min, t_max]`.
pub fn time_averaged_metrics<T: Float>(
    cache: &QwCache<'_, T>,
    gs: &GroundStateRecord<T>,
    protocol: Protocol,
    gammas: &[T],
    window: &TimeWindow,
) -> Result<TimeAveragedMetrics> {
    window.validate()?;
    if gammas.is_empty() {
        return Err(Error::Usage("at least one stage is required".into()));
    }
    if let Some(g) = gammas.iter().find(|g| !(**g >= T::zero())) {
        return Err(Error::Usage(format!("hopping rates must be non-negative, got {g}")));
    }
    let diag = cache.diag();
    let n = diag.n();
    let p = gammas.len();
    // Decompositions are shared by every sample.
    let props = match protocol {
        Protocol::Msqw => gammas.iter().map(|&g| cache.get(g)).collect::<Result<Vec<_>>>()?,
        Protocol::Qaoa => Vec::new(),
    };

    let per_sample: Vec<(Vec<f64>, f64)> = (0..window.samples)
        .into_par_iter()
        .map(|i| {
            let runtimes = window.runtimes(i, p);
            let mut state = StateVector::<T>::plus(n).expect("validated register");
            let mut scratch = vec![Complex::zero(); state.dim()];
            let mut stage_e = Vec::with_capacity(p);
            for (j, (&g, &t)) in gammas.iter().zip(&runtimes).enumerate() {
                let t = T::lit(t);
                match protocol {
                    Protocol::Msqw => {
                        props[j].propagate_in_place(state.amplitudes_mut(), &mut scratch, t)
                    }
                    Protocol::Qaoa => {
                        let (alpha, beta) = map_gamma_to_qaoa(g, t).expect("non-negative gamma");
                        phase_in_place(state.amplitudes_mut(), diag.energies(), beta);
                        driver_in_place(state.amplitudes_mut(), n, alpha);
                    }
                }
                stage_e.push(diag.expectation(&state).to_f64_lossy());
            }
            let m = measure_metrics(&state, diag, gs);
            (stage_e, m.success_prob.to_f64_lossy())
        })
        .collect();

    let stage_energies = (0..p)
        .map(|j| Estimate::from_samples(&per_sample.iter().map(|s| s.0[j]).collect::<Vec<_>>()))
        .collect::<Vec<_>>();
    let probs: Vec<f64> = per_sample.iter().map(|s| s.1).collect();
    Ok(TimeAveragedMetrics {
        energy: stage_energies[p - 1],
        success_prob: Estimate::from_samples(&probs),
        stage_energies,
        window: *window,
    })
}

/// Convenience for `f64` callers holding only the schedule scalars.
pub fn gammas_as<S: ScheduleScalar, T: Float>(gammas: &[S]) -> Vec<T> {
    gammas.iter().map(to_float).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_diagonal, generate_instance, solve_ground_state};
    use crate::propagate::qw_propagate;
    use approx::assert_abs_diff_eq;
    use num_rational::BigRational;

    #[test]
    fn gamma_mapping_examples() {
        let (a, b) = map_gamma_to_qaoa(3.0, 0.4).unwrap();
        assert_abs_diff_eq!(a, 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(b, 0.1, epsilon = 1e-15);
        assert_eq!(map_gamma_to_qaoa(0.0, 0.7).unwrap(), (0.0, 0.7));
        assert_eq!(map_gamma_to_qaoa(1.0, 0.5).unwrap(), (0.25, 0.25));
        assert!(map_gamma_to_qaoa(-1.0, 0.5).is_err());
    }

    #[test]
    fn gamma_mapping_exact_in_rationals() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let (a, b) = map_gamma_to_qaoa(r(3, 1), r(2, 5)).unwrap();
        assert_eq!(a, r(3, 10));
        assert_eq!(b, r(1, 10));
        assert_eq!(a.clone() + b.clone(), r(2, 5));
        assert_eq!(a / b, r(3, 1));
    }

    fn params(g0: f64, dg: f64, p: usize, decay: DecayKind) -> HeuristicScheduleParams<f64> {
        HeuristicScheduleParams {
            gamma0: g0,
            delta_gamma: dg,
            p,
            decay,
            t_min: 0.1,
            t_max: 0.5,
            samples: 10,
        }
    }

    #[test]
    fn geometric_sequence() {
        let s = gamma_sequence(4.0, 0.2, 5, DecayKind::Geometric);
        let want = [4.0, 3.2, 2.56, 2.048, 1.6384];
        for (g, w) in s.gammas.iter().zip(want) {
            assert_abs_diff_eq!(*g, w, epsilon = 1e-12);
        }
        assert!(!s.clamped);
    }

    #[test]
    fn linear_sequence_and_clamp() {
        let s = gamma_sequence(2.0, 0.5, 3, DecayKind::Linear);
        assert_eq!(s.gammas, vec![2.0, 1.75, 1.5]);
        let s = gamma_sequence(0.5, 0.9, 3, DecayKind::Linear);
        // step 1.8: 0.5, -1.3 -> 0, -3.1 -> 0
        assert_eq!(s.gammas, vec![0.5, 0.0, 0.0]);
        assert!(s.clamped);
        let s = gamma_sequence(0.0, 0.3, 3, DecayKind::Linear);
        assert_eq!(s.gammas, vec![0.0; 3]);
    }

    #[test]
    fn zero_decay_is_constant() {
        for kind in [DecayKind::Geometric, DecayKind::Linear] {
            assert_eq!(gamma_sequence(2.5, 0.0, 4, kind).gammas, vec![2.5; 4]);
        }
    }

    #[test]
    fn heuristic_schedule_stages() {
        let p = params(3.0, 0.2, 3, DecayKind::Geometric);
        let sched = build_heuristic_schedule(&p, &[0.2, 0.3, 0.4]).unwrap();
        assert_eq!(sched.msqw.p(), 3);
        for (m, q) in sched.msqw.stages().iter().zip(sched.qaoa.stages()) {
            assert_abs_diff_eq!(q.alpha + q.beta, m.t, epsilon = 1e-12);
            assert_abs_diff_eq!(q.alpha, m.gamma * q.beta, epsilon = 1e-12);
        }
        assert!(build_heuristic_schedule(&p, &[0.2]).is_err());
        let bad = params(3.0, 1.0, 3, DecayKind::Geometric);
        assert!(build_heuristic_schedule(&bad, &[0.2; 3]).is_err());
    }

    #[test]
    fn protocol_parsing() {
        assert_eq!("msqw".parse::<Protocol>().unwrap(), Protocol::Msqw);
        assert_eq!("qaoa".parse::<Protocol>().unwrap(), Protocol::Qaoa);
        assert!("anneal".parse::<Protocol>().is_err());
        assert!("cubic".parse::<DecayKind>().is_err());
    }

    #[test]
    fn single_stage_msqw_is_walk() {
        let inst = generate_instance(4, 12).unwrap();
        let d = build_diagonal::<f64>(&inst);
        let s = StateVector::plus(4).unwrap();
        let a = run_msqw(&d, &MsqwSchedule::from_pairs(&[(1.3, 0.8)]).unwrap()).unwrap();
        let b = qw_propagate(&s, &d, 1.3, 0.8).unwrap();
        assert!(a.distance(&b).unwrap() < 1e-12);
        let two = run_msqw(&d, &MsqwSchedule::from_pairs(&[(1.3, 0.3), (1.3, 0.5)]).unwrap()).unwrap();
        assert!(two.distance(&a).unwrap() < 1e-9);
    }

    #[test]
    fn qaoa_trivial_limits() {
        let inst = generate_instance(5, 6).unwrap();
        let d = build_diagonal::<f64>(&inst);
        let gs = solve_ground_state(inst.id(), &d);
        let phase_only = run_qaoa(&d, &QaoaSchedule::from_pairs(&[(0.0, 0.9)]).unwrap()).unwrap();
        for p in phase_only.probabilities() {
            assert_abs_diff_eq!(p, 1.0 / 32.0, epsilon = 1e-14);
        }
        let driver_only = run_qaoa(&d, &QaoaSchedule::from_pairs(&[(0.7, 0.0)]).unwrap()).unwrap();
        let m = measure_metrics(&driver_only, &d, &gs);
        assert_abs_diff_eq!(m.energy, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn metrics_of_simple_states() {
        let inst = generate_instance(4, 2).unwrap();
        let d = build_diagonal::<f64>(&inst);
        let gs = solve_ground_state(inst.id(), &d);
        let s = StateVector::plus(4).unwrap();
        let m = measure_metrics(&s, &d, &gs);
        assert_abs_diff_eq!(m.energy, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(m.success_prob, gs.degeneracy as f64 / 16.0, epsilon = 1e-14);
        let z = StateVector::basis(4, gs.z_star).unwrap();
        let m = measure_metrics(&z, &d, &gs);
        assert_eq!(m.energy, gs.e0);
        assert_eq!(m.success_prob, 1.0);
    }

    #[test]
    fn degenerate_interval_matches_single_run() {
        let inst = generate_instance(4, 5).unwrap();
        let d = build_diagonal::<f64>(&inst);
        let gs = solve_ground_state(inst.id(), &d);
        let cache = QwCache::new(&d);
        let w = TimeWindow {
            t_min: 0.35,
            t_max: 0.35,
            samples: 1,
            seed: 3,
        };
        for protocol in [Protocol::Msqw, Protocol::Qaoa] {
            let avg = time_averaged_metrics(&cache, &gs, protocol, &[2.0, 1.0], &w).unwrap();
            let st = run_gamma_schedule(&cache, protocol, &[2.0, 1.0], &[0.35, 0.35]).unwrap();
            let m = measure_metrics(&st, &d, &gs);
            assert_abs_diff_eq!(avg.energy.mean, m.energy, epsilon = 1e-14);
            assert_abs_diff_eq!(avg.success_prob.mean, m.success_prob, epsilon = 1e-14);
        }
    }

    #[test]
    fn zero_gamma_msqw_keeps_zero_energy() {
        let inst = generate_instance(5, 7).unwrap();
        let d = build_diagonal::<f64>(&inst);
        let gs = solve_ground_state(inst.id(), &d);
        let cache = QwCache::new(&d);
        let w = TimeWindow::standard(1);
        let avg = time_averaged_metrics(&cache, &gs, Protocol::Msqw, &[0.0; 3], &w).unwrap();
        assert!(avg.energy.mean.abs() < 1e-10);
    }

    #[test]
    fn window_validation() {
        let bad = TimeWindow {
            t_min: 0.0,
            t_max: 0.5,
            samples: 10,
            seed: 0,
        };
        assert!(bad.validate().is_err());
        let bad = TimeWindow {
            t_min: 0.6,
            t_max: 0.5,
            samples: 10,
            seed: 0,
        };
        assert!(bad.validate().is_err());
        let w = TimeWindow::standard(9);
        assert_eq!(w.runtimes(17, 5), w.runtimes(17, 5));
        assert_ne!(w.runtimes(17, 5), w.runtimes(18, 5));
        assert!(w.runtimes(3, 50).iter().all(|t| (0.1..=0.5).contains(t)));
    }
}
