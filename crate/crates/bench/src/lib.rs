//! Deterministic fixtures for the benchmarks.

use qroute_core::linalg::{hermitian_eigendecomposition, normalized, DEFAULT_TOL};
use qroute_core::{ComplexMatrix, ComplexScalar, DensityMatrix, Observable};

/// Dense Hermitian matrix with entries from fixed trig patterns; `seed`
/// shifts the pattern.
pub fn hermitian(dim: usize, seed: u32) -> ComplexMatrix {
    let s = f64::from(seed);
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        let x = i as f64;
        m[(i, i)] = ComplexScalar::new(2.0 * (0.7 * x + s).sin(), 0.0);
        for j in i + 1..dim {
            let y = j as f64;
            let z = ComplexScalar::new((x + 2.0 * y + s).sin(), (3.0 * x - y + 2.0 * s).cos());
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// Projector onto half of the eigenbasis of `hermitian(dim, seed)`: both
/// eigenvalues 0 and 1 are degenerate once `dim >= 4`.
pub fn degenerate_observable(label: &str, dim: usize, seed: u32) -> Observable {
    let pairs =
        hermitian_eigendecomposition(&hermitian(dim, seed), DEFAULT_TOL).expect("fixture is Hermitian");
    let m = pairs
        .iter()
        .take(dim / 2)
        .fold(ComplexMatrix::zeros(dim), |acc, p| {
            &acc + &ComplexMatrix::projector(&p.vector)
        });
    Observable::new(label, m).expect("fixture observable")
}

pub fn pure_state(dim: usize) -> Vec<ComplexScalar> {
    let v: Vec<ComplexScalar> = (0..dim)
        .map(|k| ComplexScalar::new(1.0 + (k as f64).cos(), (k as f64 * 1.3).sin()))
        .collect();
    normalized(&v).expect("nonzero fixture state")
}

pub fn density(dim: usize) -> DensityMatrix {
    DensityMatrix::from_pure(&pure_state(dim)).expect("normalized fixture state")
}
