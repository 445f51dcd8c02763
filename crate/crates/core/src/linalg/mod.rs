//! Dense complex linear algebra for small Hilbert spaces.
//!
//! Everything here works on square, row-major [`ComplexMatrix`] values and
//! plain `Vec<ComplexScalar>` state vectors. Dimensions are small (a few
//! dozen at most) so the routines favour clarity over blocking or SIMD.

mod density;
mod eigen;

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use density::{trace_distance, DensityMatrix};
pub(crate) use eigen::canonical_basis;
pub use eigen::{hermitian_eigendecomposition, hermitian_eigenvalues, EigenPair};

pub type ComplexScalar = Complex64;

/// Default tolerance for Hermiticity, trace and positivity checks.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Largest dimension [`ComplexMatrix::tensor`] will produce.
pub const MAX_TENSOR_DIM: usize = 1024;

pub const ZERO: ComplexScalar = Complex64::new(0.0, 0.0);
pub const ONE: ComplexScalar = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<ComplexScalar>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from rows; every row must have as many entries as
    /// there are rows.
    pub fn from_rows(rows: Vec<Vec<ComplexScalar>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::dim("matrix must have at least one row"));
        }
        let mut data = Vec::with_capacity(dim * dim);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != dim {
                return Err(Error::dim(format!(
                    "row {i} has {} entries, expected {dim}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Self::from_row_major(dim, data)
    }

    pub fn from_row_major(dim: usize, data: Vec<ComplexScalar>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::dim(format!(
                "{} entries do not form a {dim}x{dim} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn from_diagonal(diag: &[ComplexScalar]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d: Vec<_> = diag.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_diagonal(&d)
    }

    /// `|u><v|`
    pub fn outer(u: &[ComplexScalar], v: &[ComplexScalar]) -> Self {
        assert_eq!(u.len(), v.len(), "outer product of vectors of unequal length");
        let dim = u.len();
        let mut data = Vec::with_capacity(dim * dim);
        for a in u {
            for b in v {
                data.push(a * b.conj());
            }
        }
        Self { dim, data }
    }

    /// `|v><v|`, not normalized.
    pub fn projector(v: &[ComplexScalar]) -> Self {
        Self::outer(v, v)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[ComplexScalar] {
        &self.data
    }

    pub fn rows(&self) -> impl Iterator<Item = &[ComplexScalar]> {
        self.data.chunks(self.dim)
    }

    pub fn to_rows(&self) -> Vec<Vec<ComplexScalar>> {
        self.rows().map(<[_]>::to_vec).collect()
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other, "matmul")?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    /// Kronecker product; `self` indexes the coarse blocks.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let dim = self.dim * other.dim;
        if dim > MAX_TENSOR_DIM {
            return Err(Error::Capacity {
                dim,
                limit: MAX_TENSOR_DIM,
            });
        }
        let (n, m) = (self.dim, other.dim);
        let mut out = Self::zeros(dim);
        for i in 0..n {
            for j in 0..n {
                let a = self.data[i * n + j];
                if a == ZERO {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        out.data[(i * m + k) * dim + j * m + l] = a * other.data[k * m + l];
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> ComplexScalar {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    pub fn scale(&self, factor: ComplexScalar) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_dim(other, "max_abs_diff")?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// `max |M - M^dagger|`
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let d = (self.data[i * n + j] - self.data[j * n + i].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// `AB - BA`
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other, "commutator")?;
        Ok(&self.mul_unchecked(other) - &other.mul_unchecked(self))
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[ComplexScalar]) -> Result<Vec<ComplexScalar>> {
        if v.len() != self.dim {
            return Err(Error::dim(format!(
                "vector of length {} applied to a {}x{} matrix",
                v.len(),
                self.dim,
                self.dim
            )));
        }
        Ok(self
            .rows()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// `A rho A^dagger`-style sandwich `self * m * self`, used with Hermitian
    /// projectors where `self^dagger == self`.
    pub(crate) fn sandwich(&self, m: &Self) -> Self {
        self.mul_unchecked(m).mul_unchecked(self)
    }

    fn check_same_dim(&self, other: &Self, op: &str) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::dim(format!(
                "{op}: {}x{} vs {}x{}",
                self.dim, self.dim, other.dim, other.dim
            )));
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = ComplexScalar;

    fn index(&self, (i, j): (usize, usize)) -> &ComplexScalar {
        assert!(i < self.dim && j < self.dim);
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut ComplexScalar {
        assert!(i < self.dim && j < self.dim);
        &mut self.data[i * self.dim + j]
    }
}

// The operator impls panic on a dimension mismatch; use `matmul` and friends
// for checked arithmetic.
impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix add");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix sub");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix mul");
        self.mul_unchecked(rhs)
    }
}

/// Traces out every subsystem except `keep`.
///
/// `dims` lists the subsystem dimensions in tensor order; their product must
/// equal `m.dim()`.
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], keep: usize) -> Result<ComplexMatrix> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::dim("subsystem dimensions must be positive"));
    }
    let total: usize = dims.iter().product();
    if total != m.dim() {
        return Err(Error::dim(format!(
            "subsystem dimensions {dims:?} multiply to {total}, matrix is {}x{}",
            m.dim(),
            m.dim()
        )));
    }
    if keep >= dims.len() {
        return Err(Error::dim(format!(
            "subsystem index {keep} out of range for {} subsystems",
            dims.len()
        )));
    }
    // View the index as (outer, kept, inner).
    let kept = dims[keep];
    let outer: usize = dims[..keep].iter().product();
    let inner: usize = dims[keep + 1..].iter().product();
    let n = m.dim();
    let mut out = ComplexMatrix::zeros(kept);
    for a in 0..kept {
        for b in 0..kept {
            let mut acc = ZERO;
            for o in 0..outer {
                for i in 0..inner {
                    let row = (o * kept + a) * inner + i;
                    let col = (o * kept + b) * inner + i;
                    acc += m.data[row * n + col];
                }
            }
            out[(a, b)] = acc;
        }
    }
    Ok(out)
}

pub fn inner(u: &[ComplexScalar], v: &[ComplexScalar]) -> ComplexScalar {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm(v: &[ComplexScalar]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Returns `v / |v|`, or `None` for the zero vector.
pub fn normalized(v: &[ComplexScalar]) -> Option<Vec<ComplexScalar>> {
    let n = norm(v);
    if n == 0.0 || !n.is_finite() {
        return None;
    }
    Some(v.iter().map(|z| z / n).collect())
}

pub fn basis_vector(dim: usize, index: usize) -> Vec<ComplexScalar> {
    let mut v = vec![ZERO; dim];
    v[index] = ONE;
    v
}

/// Kronecker product of two vectors.
pub fn tensor_vectors(u: &[ComplexScalar], v: &[ComplexScalar]) -> Vec<ComplexScalar> {
    u.iter().flat_map(|a| v.iter().map(move |b| a * b)).collect()
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_rows(vec![
        vec![ZERO, Complex64::new(0.0, -1.0)],
        vec![Complex64::new(0.0, 1.0), ZERO],
    ])
    .unwrap()
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real_diagonal(&[1.0, -1.0])
}
