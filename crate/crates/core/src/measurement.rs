//! Spectral decomposition of observables and projective state update.
//!
//! [`luders_update`] projects with one projector per distinct eigenvalue and
//! keeps coherence inside each eigenspace. [`von_neumann_update`] projects
//! onto each stored eigenvector separately and dephases inside eigenspaces as
//! well. The two coincide when every eigenvalue is non-degenerate.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    canonical_basis, hermitian_eigendecomposition, ComplexMatrix, ComplexScalar, DensityMatrix, DEFAULT_TOL,
};

/// Eigenvalues closer than this are one degenerate eigenvalue.
pub const DEFAULT_GROUP_TOL: f64 = 1e-8;

/// Probabilities at or below this cannot be conditioned on.
pub const MIN_PROBABILITY: f64 = 1e-12;

/// One distinct eigenvalue with its eigenspace.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenGroup {
    pub eigenvalue: f64,
    pub degeneracy: usize,
    /// Orthogonal projector onto the eigenspace.
    pub projector: ComplexMatrix,
    /// Orthonormal basis of the eigenspace; the von Neumann rule projects
    /// onto these individually.
    pub basis: Vec<Vec<ComplexScalar>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    label: String,
    matrix: ComplexMatrix,
    groups: Vec<EigenGroup>,
}

impl Observable {
    /// Decomposes `matrix` with the default grouping tolerance.
    pub fn new(label: impl Into<String>, matrix: ComplexMatrix) -> Result<Self> {
        let mut obs = spectral_decompose(&matrix, DEFAULT_GROUP_TOL)?;
        obs.label = label.into();
        Ok(obs)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Eigen-groups in descending eigenvalue order.
    pub fn groups(&self) -> &[EigenGroup] {
        &self.groups
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.groups.iter().map(|g| g.eigenvalue).collect()
    }

    pub fn is_degenerate(&self) -> bool {
        self.groups.iter().any(|g| g.degeneracy > 1)
    }

    /// Eigenvalues repeated by degeneracy, descending.
    pub fn spectrum(&self) -> Vec<f64> {
        self.groups
            .iter()
            .flat_map(|g| std::iter::repeat_n(g.eigenvalue, g.degeneracy))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum ProjectionRule {
    #[default]
    #[serde(rename = "luders")]
    Luders,
    #[serde(rename = "von-neumann")]
    VonNeumann,
}

impl ProjectionRule {
    pub fn apply(self, rho: &DensityMatrix, obs: &Observable) -> Result<DensityMatrix> {
        match self {
            ProjectionRule::Luders => luders_update(rho, obs),
            ProjectionRule::VonNeumann => von_neumann_update(rho, obs),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ProjectionRule::Luders => "luders",
            ProjectionRule::VonNeumann => "von-neumann",
        }
    }
}

impl fmt::Display for ProjectionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProjectionRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "luders" | "lüders" | "lueders" => Ok(ProjectionRule::Luders),
            "von-neumann" | "vonneumann" | "von_neumann" => Ok(ProjectionRule::VonNeumann),
            other => Err(Error::InvalidArgument(format!(
                "unknown projection rule `{other}` (expected `luders` or `von-neumann`)"
            ))),
        }
    }
}

/// Groups the spectrum of a Hermitian matrix into distinct eigenvalues.
///
/// Neighbouring eigenvalues no more than `group_tol` apart are merged. A gap
/// strictly between `group_tol` and `10 * group_tol` is rejected as
/// ambiguous.
pub fn spectral_decompose(m: &ComplexMatrix, group_tol: f64) -> Result<Observable> {
    let pairs = hermitian_eigendecomposition(m, DEFAULT_TOL)?;
    let n = m.dim();

    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for (i, pair) in pairs.iter().enumerate() {
        match clusters.last_mut() {
            Some(cluster) => {
                let prev = pairs[*cluster.last().unwrap()].value;
                let gap = prev - pair.value;
                if gap <= group_tol {
                    cluster.push(i);
                } else if gap < 10.0 * group_tol {
                    return Err(Error::AmbiguousGrouping { gap, group_tol });
                } else {
                    clusters.push(vec![i]);
                }
            }
            None => clusters.push(vec![i]),
        }
    }

    let groups = clusters
        .into_iter()
        .map(|members| {
            let eigenvalue = members.iter().map(|&i| pairs[i].value).sum::<f64>() / members.len() as f64;
            let projector = members.iter().fold(ComplexMatrix::zeros(n), |acc, &i| {
                &acc + &ComplexMatrix::projector(&pairs[i].vector)
            });
            let basis = if members.len() == 1 {
                vec![pairs[members[0]].vector.clone()]
            } else {
                canonical_basis(&projector, members.len())
            };
            EigenGroup {
                eigenvalue,
                degeneracy: members.len(),
                projector,
                basis,
            }
        })
        .collect();

    Ok(Observable {
        label: String::new(),
        matrix: m.clone(),
        groups,
    })
}

fn check_dims(rho: &DensityMatrix, obs: &Observable) -> Result<()> {
    if rho.dim() != obs.dim() {
        return Err(Error::Dimension(format!(
            "state is {}-dimensional, observable `{}` is {}-dimensional",
            rho.dim(),
            obs.label,
            obs.dim()
        )));
    }
    Ok(())
}

/// `rho' = sum_n P_n rho P_n`
pub fn luders_update(rho: &DensityMatrix, obs: &Observable) -> Result<DensityMatrix> {
    check_dims(rho, obs)?;
    let out = obs.groups.iter().fold(ComplexMatrix::zeros(rho.dim()), |acc, g| {
        &acc + &g.projector.sandwich(rho.matrix())
    });
    Ok(DensityMatrix::from_valid(out))
}

/// `rho' = sum_{n,i} |chi_n^i><chi_n^i| rho |chi_n^i><chi_n^i|` over the
/// stored eigenbasis of every group.
pub fn von_neumann_update(rho: &DensityMatrix, obs: &Observable) -> Result<DensityMatrix> {
    check_dims(rho, obs)?;
    let mut out = ComplexMatrix::zeros(rho.dim());
    for chi in obs.groups.iter().flat_map(|g| &g.basis) {
        // <chi| rho |chi> |chi><chi|
        let weight = crate::linalg::inner(chi, &rho.matrix().apply(chi)?);
        out = &out + &ComplexMatrix::projector(chi).scale(weight);
    }
    Ok(DensityMatrix::from_valid(out))
}

/// Outcome of conditioning on one eigen-group.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectiveOutcome {
    pub probability: f64,
    pub post_state: DensityMatrix,
}

/// `p = tr(P_n rho)` and `P_n rho P_n / p`.
pub fn selective_outcome(
    rho: &DensityMatrix,
    obs: &Observable,
    group_index: usize,
) -> Result<SelectiveOutcome> {
    let probability = outcome_probability(rho, obs, group_index)?;
    if probability <= MIN_PROBABILITY {
        return Err(Error::ZeroProbability { probability });
    }
    let projected = obs.groups[group_index].projector.sandwich(rho.matrix());
    Ok(SelectiveOutcome {
        probability,
        post_state: DensityMatrix::from_valid(projected.scale_real(1.0 / probability)),
    })
}

/// `tr(P_n rho)`, clamped to `[0, 1]`.
pub fn outcome_probability(rho: &DensityMatrix, obs: &Observable, group_index: usize) -> Result<f64> {
    check_dims(rho, obs)?;
    let group = obs.groups.get(group_index).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "group index {group_index} out of range for `{}` with {} groups",
            obs.label,
            obs.groups.len()
        ))
    })?;
    Ok(rho.expectation(&group.projector)?.re.clamp(0.0, 1.0))
}

/// Outcome probabilities for every group, in group order.
pub fn outcome_distribution(rho: &DensityMatrix, obs: &Observable) -> Result<Vec<f64>> {
    (0..obs.groups.len())
        .map(|i| outcome_probability(rho, obs, i))
        .collect()
}
