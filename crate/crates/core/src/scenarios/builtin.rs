use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{default_tolerance, InitialState, Scenario};
use crate::error::{Error, Result};
use crate::linalg::{norm, normalized, pauli_x, pauli_y, ComplexMatrix, ComplexScalar, DensityMatrix};
use crate::measurement::ProjectionRule;
use crate::routes::Route;

/// Built-in scenario names with one-line descriptions, alphabetical.
pub const BUILTINS: &[(&str, &str)] = &[
    (
        "nondegenerate-counterexample",
        "qutrit with non-degenerate commuting D1, D2, D3 = D1*D2; all routes agree",
    ),
    (
        "qutrit-paper",
        "qutrit with degenerate A, B and C = AB; direct and sequential routes differ under Lüders",
    ),
    (
        "two-qubit-rafasala",
        "two qubits, M1 = X⊗I, M2 = I⊗Y, M3 = X⊗Y on (|00>+|11>)/sqrt2; M3 vs M1 then M2",
    ),
];

pub fn builtin_names() -> impl Iterator<Item = &'static str> {
    BUILTINS.iter().map(|(name, _)| *name)
}

fn description(name: &str) -> String {
    BUILTINS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, d)| (*d).to_owned())
        .unwrap_or_default()
}

/// Looks up a built-in scenario with its default initial state.
pub fn builtin(name: &str) -> Result<Scenario> {
    match name {
        "qutrit-paper" => {
            let s = c(3f64.sqrt().recip());
            qutrit_paper(s, s, s)
        }
        "nondegenerate-counterexample" => {
            let s = c(3f64.sqrt().recip());
            nondegenerate_counterexample(s, s, s)
        }
        "two-qubit-rafasala" => {
            let s = c(0.5f64.sqrt());
            let zero = c(0.0);
            two_qubit_rafasala(vec![s, zero, zero, s])
        }
        other => Err(Error::UnknownScenario(other.to_owned())),
    }
}

fn c(x: f64) -> ComplexScalar {
    Complex64::new(x, 0.0)
}

fn check_pure(psi: &[ComplexScalar]) -> Result<()> {
    DensityMatrix::from_pure(psi).map(|_| ())
}

/// `A = diag(1,1,0)`, `B = diag(0,1,1)`, `C = AB = diag(0,1,0)` on the state
/// `alpha|1> + beta|2> + gamma|3>`, with routes `[C]`, `[A, B]` and `[B, A]`.
pub fn qutrit_paper(alpha: ComplexScalar, beta: ComplexScalar, gamma: ComplexScalar) -> Result<Scenario> {
    let psi = vec![alpha, beta, gamma];
    check_pure(&psi)?;
    let rule = ProjectionRule::Luders;
    let observables = BTreeMap::from([
        (
            "A".to_owned(),
            ComplexMatrix::from_real_diagonal(&[1.0, 1.0, 0.0]),
        ),
        (
            "B".to_owned(),
            ComplexMatrix::from_real_diagonal(&[0.0, 1.0, 1.0]),
        ),
        (
            "C".to_owned(),
            ComplexMatrix::from_real_diagonal(&[0.0, 1.0, 0.0]),
        ),
    ]);
    Ok(Scenario {
        name: "qutrit-paper".into(),
        description: description("qutrit-paper"),
        system_dim: 3,
        initial_state: InitialState::Vector(psi),
        observables,
        routes: vec![
            Route::new("C", ["C"], rule),
            Route::new("AB", ["A", "B"], rule),
            Route::new("BA", ["B", "A"], rule),
        ],
        target: "C".into(),
        rule,
        tolerance: default_tolerance(),
    })
}

/// The normalized common eigenbasis `d1, d2, d3` of the non-degenerate
/// observables, from `(1, -1+√3, 1)`, `(1, -1-√3, 1)` and `(-1, 0, 1)`.
pub fn nondegenerate_basis() -> [Vec<ComplexScalar>; 3] {
    let s3 = 3f64.sqrt();
    let raw = [[1.0, -1.0 + s3, 1.0], [1.0, -1.0 - s3, 1.0], [-1.0, 0.0, 1.0]];
    raw.map(|v| normalized(&v.map(c)).expect("non-zero basis vector"))
}

fn spectral_sum(values: [f64; 3], basis: &[Vec<ComplexScalar>; 3]) -> ComplexMatrix {
    values
        .iter()
        .zip(basis)
        .fold(ComplexMatrix::zeros(3), |acc, (&v, d)| {
            &acc + &ComplexMatrix::projector(d).scale_real(v)
        })
}

/// `D1`, `D2` and `D3 = D1 D2`, all non-degenerate and diagonal in
/// [`nondegenerate_basis`], on `a1|d1> + a2|d2> + a3|d3>`, with routes
/// `[D3]`, `[D1, D2]` and `[D2, D1]`.
pub fn nondegenerate_counterexample(
    a1: ComplexScalar,
    a2: ComplexScalar,
    a3: ComplexScalar,
) -> Result<Scenario> {
    let basis = nondegenerate_basis();
    let amplitudes = [a1, a2, a3];
    let psi: Vec<ComplexScalar> = (0..3)
        .map(|k| amplitudes.iter().zip(&basis).map(|(a, d)| a * d[k]).sum())
        .collect();
    let deviation = (norm(&psi).powi(2) - 1.0).abs();
    if deviation.is_nan() || deviation > crate::linalg::DEFAULT_TOL {
        return Err(Error::Normalization { deviation });
    }
    let s3 = 3f64.sqrt();
    let rule = ProjectionRule::Luders;
    let observables = BTreeMap::from([
        ("D1".to_owned(), spectral_sum([1.0 + s3, 1.0 - s3, 0.0], &basis)),
        ("D2".to_owned(), spectral_sum([s3, -s3, 1.0], &basis)),
        ("D3".to_owned(), spectral_sum([3.0 + s3, 3.0 - s3, 0.0], &basis)),
    ]);
    Ok(Scenario {
        name: "nondegenerate-counterexample".into(),
        description: description("nondegenerate-counterexample"),
        system_dim: 3,
        initial_state: InitialState::Vector(psi),
        observables,
        routes: vec![
            Route::new("D3", ["D3"], rule),
            Route::new("D1D2", ["D1", "D2"], rule),
            Route::new("D2D1", ["D2", "D1"], rule),
        ],
        target: "D3".into(),
        rule,
        tolerance: default_tolerance(),
    })
}

/// `M1 = σx⊗I`, `M2 = I⊗σy` and `M3 = σx⊗σy` with routes `[M3]` and
/// `[M1, M2]` on a two-qubit pure state.
pub fn two_qubit_rafasala(psi: Vec<ComplexScalar>) -> Result<Scenario> {
    if psi.len() != 4 {
        return Err(Error::Dimension(format!(
            "two-qubit state needs 4 amplitudes, got {}",
            psi.len()
        )));
    }
    check_pure(&psi)?;
    let id = ComplexMatrix::identity(2);
    let rule = ProjectionRule::Luders;
    let observables = BTreeMap::from([
        ("M1".to_owned(), pauli_x().tensor(&id)?),
        ("M2".to_owned(), id.tensor(&pauli_y())?),
        ("M3".to_owned(), pauli_x().tensor(&pauli_y())?),
    ]);
    Ok(Scenario {
        name: "two-qubit-rafasala".into(),
        description: description("two-qubit-rafasala"),
        system_dim: 4,
        initial_state: InitialState::Vector(psi),
        observables,
        routes: vec![
            Route::new("M3", ["M3"], rule),
            Route::new("M1M2", ["M1", "M2"], rule),
        ],
        target: "M3".into(),
        rule,
        tolerance: default_tolerance(),
    })
}
