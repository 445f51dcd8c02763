use num_complex::Complex64;

use super::{hermitian_eigenvalues, norm, ComplexMatrix, ComplexScalar, DEFAULT_TOL};
use crate::error::{Error, Result};

/// A Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates `mat` at the default tolerance.
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(mat, DEFAULT_TOL)
    }

    pub fn with_tolerance(mat: ComplexMatrix, tol: f64) -> Result<Self> {
        check_density(&mat, tol)?;
        Ok(Self { mat })
    }

    /// Wraps a matrix produced by a trace- and positivity-preserving map
    /// applied to a valid density matrix.
    pub(crate) fn from_valid(mat: ComplexMatrix) -> Self {
        debug_assert!(mat.is_hermitian(1e-8));
        Self { mat }
    }

    /// `|psi><psi|` for a normalized vector.
    pub fn from_pure(psi: &[ComplexScalar]) -> Result<Self> {
        if psi.is_empty() {
            return Err(Error::dim("state vector must be non-empty"));
        }
        let deviation = (norm(psi).powi(2) - 1.0).abs();
        if deviation.is_nan() || deviation > DEFAULT_TOL {
            return Err(Error::Normalization { deviation });
        }
        Ok(Self {
            mat: ComplexMatrix::projector(psi),
        })
    }

    /// `I/d`
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            mat: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    /// Re-runs the density-matrix checks.
    pub fn validate(&self, tol: f64) -> Result<()> {
        check_density(&self.mat, tol)
    }

    /// `tr(rho^2)`
    pub fn purity(&self) -> f64 {
        self.mat.matmul(&self.mat).map(|m| m.trace().re).unwrap_or(0.0)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&hermitian_part(&self.mat), f64::INFINITY)
            .map(|v| v.last().copied().unwrap_or(0.0))
            .unwrap_or(f64::NAN)
    }

    /// `tr(op rho)`
    pub fn expectation(&self, op: &ComplexMatrix) -> Result<ComplexScalar> {
        Ok(op.matmul(&self.mat)?.trace())
    }
}

fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + &m.adjoint()).scale_real(0.5)
}

fn check_density(mat: &ComplexMatrix, tol: f64) -> Result<()> {
    let defect = mat.hermiticity_defect();
    if defect > tol {
        return Err(Error::InvalidDensity(format!(
            "not Hermitian (max |rho - rho^dagger| = {defect:.3e})"
        )));
    }
    let trace = mat.trace();
    if (trace - Complex64::new(1.0, 0.0)).norm() > tol {
        return Err(Error::InvalidDensity(format!("trace is {trace}, expected 1")));
    }
    let values = hermitian_eigenvalues(&hermitian_part(mat), f64::INFINITY)?;
    let min = values.last().copied().unwrap_or(0.0);
    if min < -tol {
        return Err(Error::InvalidDensity(format!("negative eigenvalue {min:.3e}")));
    }
    Ok(())
}

/// `(1/2) sum |lambda_i|` over the eigenvalues of `a - b`.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::dim(format!(
            "trace distance between {}-dimensional and {}-dimensional states",
            a.dim(),
            b.dim()
        )));
    }
    let diff = hermitian_part(&(&a.mat - &b.mat));
    let values = hermitian_eigenvalues(&diff, f64::INFINITY)?;
    let d = 0.5 * values.iter().map(|v| v.abs()).sum::<f64>();
    Ok(d.clamp(0.0, 1.0))
}
