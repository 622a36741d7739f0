//! Complex state vectors over the computational basis and dense operators.
//!
//! Amplitudes are stored in a flat array indexed by the integer value of the
//! bit-string; bit `b` of the index is the measurement outcome of qubit `b`.

use nalgebra::DMatrix;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::num::{Complex, Float};

/// Largest register the state-vector routines accept.
pub const MAX_QUBITS: usize = 14;
/// Largest register for which full `2^n x 2^n` operators are built.
pub const MAX_DENSE_QUBITS: usize = 8;

pub(crate) fn check_qubits(n: usize, cap: usize) -> Result<()> {
    if n == 0 || n > cap {
        return Err(Error::Config(format!(
            "qubit count {n} outside supported range 1..={cap}"
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T: Float> {
    n: usize,
    amps: Vec<Complex<T>>,
}

impl<T: Float> StateVector<T> {
    /// The uniform superposition `|+>^n`, ground state of the transverse-field driver.
    pub fn plus(n: usize) -> Result<Self> {
        check_qubits(n, MAX_QUBITS)?;
        let dim = 1usize << n;
        let a = T::one() / T::lit(dim as f64).sqrt();
        Ok(StateVector {
            n,
            amps: vec![Complex::new(a, T::zero()); dim],
        })
    }

    /// Computational basis state `|z>`.
    pub fn basis(n: usize, z: usize) -> Result<Self> {
        check_qubits(n, MAX_QUBITS)?;
        let dim = 1usize << n;
        if z >= dim {
            return Err(Error::Usage(format!("basis index {z} out of range for {n} qubits")));
        }
        let mut amps = vec![Complex::zero(); dim];
        amps[z] = Complex::one();
        Ok(StateVector { n, amps })
    }

    /// Wraps raw amplitudes. No normalization is applied.
    pub fn from_amplitudes(n: usize, amps: Vec<Complex<T>>) -> Result<Self> {
        check_qubits(n, MAX_QUBITS)?;
        if amps.len() != 1usize << n {
            return Err(Error::Usage(format!(
                "{} amplitudes supplied for {n} qubits (expected {})",
                amps.len(),
                1usize << n
            )));
        }
        Ok(StateVector { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amps
    }

    pub fn norm(&self) -> T {
        self.amps
            .iter()
            .fold(T::zero(), |acc, a| acc + a.norm_sqr())
            .sqrt()
    }

    /// Returns a copy scaled to unit norm.
    pub fn normalized(&self) -> Self {
        let inv = T::one() / self.norm();
        StateVector {
            n: self.n,
            amps: self.amps.iter().map(|a| a.scale(inv)).collect(),
        }
    }

    pub fn probabilities(&self) -> Vec<T> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        inner_product(self, other)
    }

    /// L2 distance `||self - other||`.
    pub fn distance(&self, other: &Self) -> Result<T> {
        same_register(self, other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .fold(T::zero(), |acc, (a, b)| acc + (*a - *b).norm_sqr())
            .sqrt())
    }
}

fn same_register<T: Float>(a: &StateVector<T>, b: &StateVector<T>) -> Result<()> {
    if a.n != b.n {
        return Err(Error::Usage(format!(
            "state dimension mismatch: {} vs {} qubits",
            a.n, b.n
        )));
    }
    Ok(())
}

/// `|+>^n`.
pub fn make_plus_state<T: Float>(n: usize) -> Result<StateVector<T>> {
    StateVector::plus(n)
}

/// `<a|b> = sum_i conj(a_i) b_i`.
pub fn inner_product<T: Float>(a: &StateVector<T>, b: &StateVector<T>) -> Result<Complex<T>> {
    same_register(a, b)?;
    Ok(a
        .amps
        .iter()
        .zip(&b.amps)
        .fold(Complex::zero(), |acc, (x, y)| acc + x.conj() * y))
}

/// A full `2^n x 2^n` operator, typically a propagator built column by column.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseUnitary<T: Float> {
    n: usize,
    matrix: DMatrix<Complex<T>>,
}

impl<T: Float> DenseUnitary<T> {
    pub fn identity(n: usize) -> Result<Self> {
        check_qubits(n, MAX_DENSE_QUBITS)?;
        let dim = 1usize << n;
        Ok(DenseUnitary {
            n,
            matrix: DMatrix::identity(dim, dim),
        })
    }

    pub fn from_matrix(n: usize, matrix: DMatrix<Complex<T>>) -> Result<Self> {
        check_qubits(n, MAX_DENSE_QUBITS)?;
        let dim = 1usize << n;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::Usage(format!(
                "{}x{} matrix supplied for {n} qubits",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(DenseUnitary { n, matrix })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<Complex<T>> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex<T>> {
        self.matrix
    }

    /// Applies the operator to a state.
    pub fn apply(&self, state: &StateVector<T>) -> Result<StateVector<T>> {
        if state.n != self.n {
            return Err(Error::Usage(format!(
                "operator on {} qubits applied to {}-qubit state",
                self.n, state.n
            )));
        }
        let v = nalgebra::DVector::from_column_slice(&state.amps);
        let out = &self.matrix * v;
        Ok(StateVector {
            n: self.n,
            amps: out.as_slice().to_vec(),
        })
    }

    /// `self` followed by `later`, i.e. the product `later * self`.
    pub fn then(&self, later: &Self) -> Result<Self> {
        if later.n != self.n {
            return Err(Error::Usage("operator size mismatch".into()));
        }
        Ok(DenseUnitary {
            n: self.n,
            matrix: &later.matrix * &self.matrix,
        })
    }

    /// Largest entry of `|U^dagger U - I|`.
    pub fn unitarity_defect(&self) -> T {
        let g = self.matrix.adjoint() * &self.matrix;
        let mut worst = T::zero();
        for (i, j) in (0..g.nrows()).flat_map(|i| (0..g.ncols()).map(move |j| (i, j))) {
            let target = if i == j { Complex::one() } else { Complex::zero() };
            let d = (g[(i, j)] - target).norm_sqr().sqrt();
            if d > worst {
                worst = d;
            }
        }
        worst
    }

    /// Spectral norm of `self - other`.
    pub fn distance(&self, other: &Self) -> Result<T> {
        if other.n != self.n {
            return Err(Error::Usage("operator size mismatch".into()));
        }
        spectral_norm(&(&self.matrix - &other.matrix))
    }
}

/// Largest singular value of a square complex matrix.
pub fn spectral_norm<T: Float>(m: &DMatrix<Complex<T>>) -> Result<T> {
    if m.nrows() != m.ncols() {
        return Err(Error::Usage(format!(
            "spectral norm of non-square {}x{} matrix",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.nrows() == 0 {
        return Ok(T::zero());
    }
    let sv = m.clone().singular_values();
    Ok(sv.iter().fold(T::zero(), |acc, &s| if s > acc { s } else { acc }))
}
