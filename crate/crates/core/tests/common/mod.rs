//! Random test fixtures and implementation-independent reference routines.

#![allow(dead_code)]

use num_complex::Complex64;
use qroute_core::linalg::ComplexMatrix;
use qroute_core::DensityMatrix;
use rand::Rng;

pub type C = Complex64;

pub fn c(re: f64, im: f64) -> C {
    Complex64::new(re, im)
}

pub fn random_complex<R: Rng>(rng: &mut R) -> C {
    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_vector<R: Rng>(rng: &mut R, dim: usize) -> Vec<C> {
    (0..dim).map(|_| random_complex(rng)).collect()
}

pub fn normalize(v: &[C]) -> Vec<C> {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter().map(|z| z / n).collect()
}

pub fn random_state<R: Rng>(rng: &mut R, dim: usize) -> Vec<C> {
    normalize(&random_vector(rng, dim))
}

pub fn dot(u: &[C], v: &[C]) -> C {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// Columns of a random unitary, by modified Gram-Schmidt on random vectors.
pub fn random_unitary<R: Rng>(rng: &mut R, dim: usize) -> Vec<Vec<C>> {
    let mut cols: Vec<Vec<C>> = Vec::new();
    while cols.len() < dim {
        let mut v = random_vector(rng, dim);
        for u in &cols {
            let p = dot(u, &v);
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= p * ui;
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-3 {
            cols.push(v.iter().map(|z| z / n).collect());
        }
    }
    cols
}

pub fn outer(u: &[C], v: &[C]) -> ComplexMatrix {
    ComplexMatrix::outer(u, v)
}

/// `sum_k values[k] |u_k><u_k|`
pub fn from_spectrum(values: &[f64], basis: &[Vec<C>]) -> ComplexMatrix {
    let n = basis[0].len();
    values
        .iter()
        .zip(basis)
        .fold(ComplexMatrix::zeros(n), |acc, (&v, u)| {
            &acc + &outer(u, u).scale_real(v)
        })
}

pub fn random_hermitian<R: Rng>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        m[(i, i)] = c(rng.gen_range(-2.0..2.0), 0.0);
        for j in i + 1..dim {
            let z = random_complex(rng);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// Random observable with a random eigenbasis and integer eigenvalues drawn
/// from a small range, so degeneracies are common.
pub fn random_degenerate_observable<R: Rng>(
    rng: &mut R,
    dim: usize,
) -> (ComplexMatrix, Vec<f64>, Vec<Vec<C>>) {
    let basis = random_unitary(rng, dim);
    let values: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1..=1) as f64).collect();
    (from_spectrum(&values, &basis), values, basis)
}

/// Random mixed state: a random convex mixture of random pure states.
pub fn random_density<R: Rng>(rng: &mut R, dim: usize) -> DensityMatrix {
    let k = rng.gen_range(1..=dim);
    let weights: Vec<f64> = (0..k).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut m = ComplexMatrix::zeros(dim);
    for w in weights {
        let psi = random_state(rng, dim);
        m = &m + &outer(&psi, &psi).scale_real(w / total);
    }
    DensityMatrix::new(m).expect("random mixture is a density matrix")
}

/// Eigenvalues of a 3x3 Hermitian matrix from the closed-form trigonometric
/// solution of its characteristic cubic, descending.
pub fn eigenvalues_3x3(m: &ComplexMatrix) -> [f64; 3] {
    let a = |i: usize, j: usize| m[(i, j)];
    let q = (a(0, 0).re + a(1, 1).re + a(2, 2).re) / 3.0;
    let p1 = a(0, 1).norm_sqr() + a(0, 2).norm_sqr() + a(1, 2).norm_sqr();
    let p2 = (a(0, 0).re - q).powi(2) + (a(1, 1).re - q).powi(2) + (a(2, 2).re - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    if p == 0.0 {
        return [q; 3];
    }
    // B = (A - qI)/p, r = det(B)/2
    let b = |i: usize, j: usize| {
        let z = if i == j { a(i, j) - c(q, 0.0) } else { a(i, j) };
        z / p
    };
    let det = b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1))
        - b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0))
        + b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
    let r = (det.re / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let e1 = q + 2.0 * p * phi.cos();
    let e3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    let e2 = 3.0 * q - e1 - e3;
    [e1, e2, e3]
}

/// Trace distance for 3x3 states through [`eigenvalues_3x3`].
pub fn trace_distance_3x3(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    0.5 * eigenvalues_3x3(&(a - b)).iter().map(|v| v.abs()).sum::<f64>()
}

/// Random `(alpha, beta, gamma)` with independent phases, normalized.
pub fn random_amplitudes<R: Rng>(rng: &mut R) -> [C; 3] {
    let v = normalize(
        &(0..3)
            .map(|_| {
                let r: f64 = rng.gen_range(0.05..1.0);
                let phase: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                Complex64::from_polar(r, phase)
            })
            .collect::<Vec<_>>(),
    );
    [v[0], v[1], v[2]]
}
