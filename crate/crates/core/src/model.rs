//! Sherrington-Kirkpatrick spin-glass instances and the two Hamiltonians.
//!
//! Spin convention: bit value 0 of qubit `b` is spin `s_b = +1`, bit value 1
//! is `s_b = -1` (`Z|0> = +|0>`). Energies are in units of the coupling
//! standard deviation, which is fixed to 1.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{Complex, Float};
use crate::state::{check_qubits, StateVector, MAX_QUBITS};

/// Name of the generator recorded in instance metadata: ChaCha8 seeded with
/// `seed_from_u64(seed)`, standard normals via the Ziggurat sampler in
/// `rand_distr`, couplings drawn first in `(a, b)` lexicographic order with
/// `a < b`, then the `n` fields.
pub const GENERATOR: &str = "chacha8-ziggurat-normal/v1";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coupling {
    pub a: usize,
    pub b: usize,
    pub j: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpinGlassInstance {
    id: String,
    n: usize,
    seed: u64,
    couplings: Vec<Coupling>,
    fields: Vec<f64>,
}

impl SpinGlassInstance {
    /// Builds an instance, validating index ranges, ordering and finiteness.
    pub fn new(
        id: impl Into<String>,
        n: usize,
        seed: u64,
        couplings: Vec<Coupling>,
        fields: Vec<f64>,
    ) -> Result<Self> {
        check_qubits(n, MAX_QUBITS)?;
        if fields.len() != n {
            return Err(Error::Usage(format!(
                "{} fields given for {n} spins",
                fields.len()
            )));
        }
        if let Some(h) = fields.iter().find(|h| !h.is_finite()) {
            return Err(Error::Usage(format!("non-finite field {h}")));
        }
        let mut seen = std::collections::HashSet::new();
        for c in &couplings {
            if c.a >= c.b || c.b >= n {
                return Err(Error::Usage(format!(
                    "coupling ({}, {}) must satisfy a < b < {n}",
                    c.a, c.b
                )));
            }
            if !c.j.is_finite() {
                return Err(Error::Usage(format!("non-finite coupling J_{}{}", c.a, c.b)));
            }
            if !seen.insert((c.a, c.b)) {
                return Err(Error::Usage(format!("duplicate coupling ({}, {})", c.a, c.b)));
            }
        }
        Ok(SpinGlassInstance {
            id: id.into(),
            n,
            seed,
            couplings,
            fields,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn couplings(&self) -> &[Coupling] {
        &self.couplings
    }

    pub fn fields(&self) -> &[f64] {
        &self.fields
    }

    /// Classical energy of one bit-string, evaluated term by term.
    pub fn energy_of(&self, z: usize) -> f64 {
        let spin = |b: usize| if (z >> b) & 1 == 0 { 1.0 } else { -1.0 };
        let pair: f64 = self
            .couplings
            .iter()
            .map(|c| c.j * spin(c.a) * spin(c.b))
            .sum();
        let zeeman: f64 = self.fields.iter().enumerate().map(|(b, h)| h * spin(b)).sum();
        -pair - zeeman
    }
}

pub fn instance_id(n: usize, seed: u64) -> String {
    format!("sk-n{n}-s{seed}")
}

/// Draws a fully connected SK instance with unit-variance normal couplings and fields.
pub fn generate_instance(n: usize, seed: u64) -> Result<SpinGlassInstance> {
    if n < 2 {
        return Err(Error::Config(format!("SK instances need at least 2 spins, got {n}")));
    }
    check_qubits(n, MAX_QUBITS)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut couplings = Vec::with_capacity(n * (n - 1) / 2);
    for a in 0..n {
        for b in a + 1..n {
            let j: f64 = StandardNormal.sample(&mut rng);
            couplings.push(Coupling { a, b, j });
        }
    }
    let fields = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
    SpinGlassInstance::new(instance_id(n, seed), n, seed, couplings, fields)
}

/// The problem Hamiltonian as a table of basis-state energies.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalEnergies<T: Float> {
    n: usize,
    energies: Vec<T>,
}

impl<T: Float> DiagonalEnergies<T> {
    pub fn from_energies(n: usize, energies: Vec<T>) -> Result<Self> {
        check_qubits(n, MAX_QUBITS)?;
        if energies.len() != 1usize << n {
            return Err(Error::Usage(format!(
                "{} energies for {n} qubits",
                energies.len()
            )));
        }
        Ok(DiagonalEnergies { n, energies })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[T] {
        &self.energies
    }

    pub fn max_energy(&self) -> T {
        self.energies
            .iter()
            .copied()
            .fold(T::min_value().unwrap(), |m, e| if e > m { e } else { m })
    }

    /// `<psi|H_P|psi>` for an arbitrary (not necessarily normalized) state.
    pub fn expectation(&self, state: &StateVector<T>) -> T {
        self.energies
            .iter()
            .zip(state.amplitudes())
            .fold(T::zero(), |acc, (e, a)| acc + *e * a.norm_sqr())
    }
}

/// Tabulates `E_P(z)` for every basis state.
pub fn build_diagonal<T: Float>(instance: &SpinGlassInstance) -> DiagonalEnergies<T> {
    let n = instance.n();
    let couplings: Vec<(usize, usize, T)> = instance
        .couplings()
        .iter()
        .map(|c| (c.a, c.b, T::lit(c.j)))
        .collect();
    let fields: Vec<T> = instance.fields().iter().map(|&h| T::lit(h)).collect();
    let energies = (0..1usize << n)
        .map(|z| {
            let spin = |b: usize| if (z >> b) & 1 == 0 { T::one() } else { -T::one() };
            let mut e = T::zero();
            for &(a, b, j) in &couplings {
                e -= j * spin(a) * spin(b);
            }
            for (b, &h) in fields.iter().enumerate() {
                e -= h * spin(b);
            }
            e
        })
        .collect();
    DiagonalEnergies { n, energies }
}

/// `H_d |psi>` with `H_d = -sum_j X_j`. The result is not normalized.
pub fn apply_driver<T: Float>(state: &StateVector<T>) -> StateVector<T> {
    let n = state.n();
    let amps = state.amplitudes();
    let out: Vec<Complex<T>> = (0..amps.len())
        .map(|z| {
            let mut acc = Complex::new(T::zero(), T::zero());
            for j in 0..n {
                acc += amps[z ^ (1 << j)];
            }
            -acc
        })
        .collect();
    StateVector::from_amplitudes(n, out).expect("same register")
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroundStateRecord<T: Float> {
    pub instance_id: String,
    /// Lowest index among the minimizers.
    pub z_star: usize,
    pub e0: T,
    pub e1: T,
    pub degeneracy: usize,
    /// Every basis index attaining `e0`, ascending.
    pub minimizers: Vec<usize>,
}

fn tie_tolerance<T: Float>(scale: T) -> T {
    T::default_epsilon() * T::lit(64.0) * (T::one() + scale.abs())
}

/// Exhaustive scan for the ground energy, its minimizers and the first excited level.
pub fn solve_ground_state<T: Float>(
    instance_id: &str,
    diag: &DiagonalEnergies<T>,
) -> GroundStateRecord<T> {
    let e = diag.energies();
    let mut e0 = e[0];
    for &x in e {
        if x < e0 {
            e0 = x;
        }
    }
    let tol = tie_tolerance(e0);
    let minimizers: Vec<usize> = (0..e.len()).filter(|&z| e[z] - e0 <= tol).collect();
    let e1 = e
        .iter()
        .copied()
        .filter(|&x| x - e0 > tol)
        .fold(None, |m: Option<T>, x| Some(m.map_or(x, |m| if x < m { x } else { m })))
        .unwrap_or(e0);
    GroundStateRecord {
        instance_id: instance_id.to_string(),
        z_star: minimizers[0],
        e0,
        e1,
        degeneracy: minimizers.len(),
        minimizers,
    }
}
