//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary and then applies the classical real plane rotation, so the
//! working matrix stays Hermitian throughout and the accumulated rotations
//! form a unitary eigenvector matrix.

use num_complex::Complex64;

use super::{norm, ComplexMatrix, ComplexScalar, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Component magnitude below which an eigenvector entry counts as zero when
/// fixing phases and ordering degenerate vectors.
const NEGLIGIBLE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<ComplexScalar>,
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues come out in descending order. Eigenvalues within `tol` of
/// each other are treated as one degenerate eigenspace: its basis is rebuilt
/// from the eigenspace projector by pivoted Gram-Schmidt, so the result does
/// not depend on the rotation sequence. Every vector has its first
/// non-negligible component real and positive, and vectors of a degenerate
/// eigenspace are ordered by the index of that component.
pub fn hermitian_eigendecomposition(m: &ComplexMatrix, tol: f64) -> Result<Vec<EigenPair>> {
    check_hermitian(m, tol)?;
    let (values, vectors) = jacobi(m);
    let n = m.dim();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));

    let mut out = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[order[end - 1]] - values[order[end]] <= tol {
            end += 1;
        }
        let cluster = &order[start..end];
        if cluster.len() == 1 {
            let mut v = column(&vectors, cluster[0]);
            fix_phase(&mut v);
            out.push(EigenPair {
                value: values[cluster[0]],
                vector: v,
            });
        } else {
            let mean = cluster.iter().map(|&k| values[k]).sum::<f64>() / cluster.len() as f64;
            let mut projector = ComplexMatrix::zeros(n);
            for &k in cluster {
                let v = column(&vectors, k);
                projector = &projector + &ComplexMatrix::projector(&v);
            }
            for vector in canonical_basis(&projector, cluster.len()) {
                out.push(EigenPair { value: mean, vector });
            }
        }
        start = end;
    }
    Ok(out)
}

/// Eigenvalues only, descending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix, tol: f64) -> Result<Vec<f64>> {
    check_hermitian(m, tol)?;
    let (mut values, _) = jacobi(m);
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

fn check_hermitian(m: &ComplexMatrix, tol: f64) -> Result<()> {
    let defect = m.hermiticity_defect();
    if defect > tol {
        return Err(Error::Hermiticity { defect, tol });
    }
    Ok(())
}

/// Orthonormal basis of the range of the orthogonal projector `projector`,
/// which must have rank `rank`.
///
/// Columns of the projector are picked greedily by largest residual norm
/// (earliest column among near ties) and orthogonalized twice. The output is
/// phase-fixed and ordered by first non-negligible component.
pub(crate) fn canonical_basis(projector: &ComplexMatrix, rank: usize) -> Vec<Vec<ComplexScalar>> {
    let n = projector.dim();
    let columns: Vec<Vec<ComplexScalar>> = (0..n).map(|k| column(projector, k)).collect();
    let mut used = vec![false; n];
    let mut basis: Vec<Vec<ComplexScalar>> = Vec::with_capacity(rank);

    for _ in 0..rank {
        let mut best: Option<(usize, Vec<ComplexScalar>, f64)> = None;
        for (k, col) in columns.iter().enumerate() {
            if used[k] {
                continue;
            }
            let mut r = col.clone();
            for _ in 0..2 {
                for b in &basis {
                    let coeff = super::inner(b, &r);
                    for (ri, bi) in r.iter_mut().zip(b) {
                        *ri -= coeff * bi;
                    }
                }
            }
            let len = norm(&r);
            let better = match &best {
                None => true,
                Some((_, _, best_len)) => len > best_len + 1e-9,
            };
            if better {
                best = Some((k, r, len));
            }
        }
        let Some((k, r, len)) = best else { break };
        if len == 0.0 {
            break;
        }
        used[k] = true;
        let mut v: Vec<_> = r.iter().map(|z| z / len).collect();
        fix_phase(&mut v);
        basis.push(v);
    }
    basis.sort_by_key(|v| leading_index(v));
    basis
}

fn leading_index(v: &[ComplexScalar]) -> usize {
    v.iter().position(|z| z.norm() > NEGLIGIBLE).unwrap_or(v.len())
}

fn fix_phase(v: &mut [ComplexScalar]) {
    if let Some(&lead) = v.iter().find(|z| z.norm() > NEGLIGIBLE) {
        let phase = lead.conj() / lead.norm();
        for z in v.iter_mut() {
            *z *= phase;
        }
        let i = leading_index(v);
        v[i] = Complex64::new(v[i].norm(), 0.0);
    }
}

fn column(m: &ComplexMatrix, k: usize) -> Vec<ComplexScalar> {
    (0..m.dim()).map(|i| m[(i, k)]).collect()
}

/// Returns unsorted eigenvalues and the unitary whose columns are the
/// matching eigenvectors.
fn jacobi(m: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let n = m.dim();
    // Work on the exactly Hermitian part.
    let mut a = (m + &m.adjoint()).scale_real(0.5);
    let mut v = ComplexMatrix::identity(n);

    let scale = a.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let threshold = (f64::EPSILON * scale).powi(2);

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off <= threshold || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let values = (0..n).map(|i| a[(i, i)].re).collect();
    (values, v)
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let n = a.dim();
    let e = apq / r;
    let ec = e.conj();
    let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * r);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // a <- a V with V_pp = c, V_pq = s, V_qp = -s e*, V_qq = c e*.
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * ec * s;
        a[(k, q)] = akp * s + akq * ec * c;
    }
    // a <- V^dagger a
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * e * s;
        a[(q, k)] = apk * s + aqk * e * c;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * ec * s;
        v[(k, q)] = vkp * s + vkq * ec * c;
    }
}
