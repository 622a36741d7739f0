//! Dense-matrix oracles written independently of the library kernels.
#![allow(dead_code)]

use msqw_core::num::Complex;
use msqw_core::model::SpinGlassInstance;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type C = Complex<f64>;

pub fn c(re: f64, im: f64) -> C {
    Complex::new(re, im)
}

pub fn kron(a: &DMatrix<C>, b: &DMatrix<C>) -> DMatrix<C> {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    DMatrix::from_fn(ar * br, ac * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

pub fn pauli_x() -> DMatrix<C> {
    DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
}

pub fn pauli_z() -> DMatrix<C> {
    DMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
}

/// `I x .. x op x .. x I` with `op` on qubit `q`. Qubit 0 is the least
/// significant bit of the basis index, so it sits rightmost in the product.
pub fn single_site(op: &DMatrix<C>, q: usize, n: usize) -> DMatrix<C> {
    let id = DMatrix::<C>::identity(2, 2);
    let mut m = DMatrix::<C>::identity(1, 1);
    for site in (0..n).rev() {
        m = kron(&m, if site == q { op } else { &id });
    }
    m
}

/// `-sum_j X_j`.
pub fn driver_matrix(n: usize) -> DMatrix<C> {
    let dim = 1 << n;
    (0..n).fold(DMatrix::zeros(dim, dim), |acc, j| acc - single_site(&pauli_x(), j, n))
}

/// `-sum_{a<b} J_ab Z_a Z_b - sum_b h_b Z_b` built from Pauli products.
pub fn problem_matrix(inst: &SpinGlassInstance) -> DMatrix<C> {
    let n = inst.n();
    let dim = 1 << n;
    let mut h = DMatrix::<C>::zeros(dim, dim);
    for cp in inst.couplings() {
        let zz = single_site(&pauli_z(), cp.a, n) * single_site(&pauli_z(), cp.b, n);
        h -= zz * c(cp.j, 0.0);
    }
    for (b, &hb) in inst.fields().iter().enumerate() {
        h -= single_site(&pauli_z(), b, n) * c(hb, 0.0);
    }
    h
}

/// `exp(m)` by Taylor series with scaling and squaring.
pub fn expm(m: &DMatrix<C>) -> DMatrix<C> {
    let norm1 = (0..m.ncols())
        .map(|j| m.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut squarings = 0;
    let mut scale = 1.0;
    while norm1 * scale > 0.5 {
        scale *= 0.5;
        squarings += 1;
    }
    let a = m * c(scale, 0.0);
    let dim = m.nrows();
    let mut term = DMatrix::<C>::identity(dim, dim);
    let mut sum = term.clone();
    for k in 1..=30 {
        term = &term * &a * c(1.0 / k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// `exp(-i H t)`.
pub fn evolution(h: &DMatrix<C>, t: f64) -> DMatrix<C> {
    expm(&(h * c(0.0, -t)))
}

/// Largest singular value via power iteration on `M^dagger M`.
pub fn power_norm(m: &DMatrix<C>) -> f64 {
    let g = m.adjoint() * m;
    let mut rng = ChaCha8Rng::seed_from_u64(12345);
    let mut v = DVector::<C>::from_fn(m.ncols(), |_, _| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
    let mut lambda = 0.0;
    for _ in 0..5000 {
        let w = &g * &v;
        let nw = w.norm();
        if nw == 0.0 {
            return 0.0;
        }
        let next = nw / v.norm();
        v = w / c(nw, 0.0);
        if (next - lambda).abs() <= 1e-15 * next {
            lambda = next;
            break;
        }
        lambda = next;
    }
    lambda.sqrt()
}

pub fn random_state(rng: &mut impl Rng, n: usize) -> Vec<C> {
    let v: Vec<C> = (0..1 << n)
        .map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

pub fn l2(a: &[C], b: &[C]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

pub fn apply(m: &DMatrix<C>, v: &[C]) -> Vec<C> {
    (m * DVector::from_column_slice(v)).as_slice().to_vec()
}
