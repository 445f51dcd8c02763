//! System plus pointer-register model of a measurement sequence.
//!
//! Each measurement stage appends an orthonormal pointer register with one
//! basis state per distinct eigenvalue of the measured observable. The
//! interaction maps `|Psi>` to `sum_n |n> (I_probe ⊗ P_n) |Psi>`, an isometry
//! that records the outcome in the register. Tracing the registers out
//! reproduces the Lüders update of the system alone.
//!
//! Storage order is `stage_0 ⊗ stage_1 ⊗ ... ⊗ system`, so composite labels
//! read left to right in measurement order.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{norm, ComplexMatrix, ComplexScalar, DensityMatrix, DEFAULT_TOL, ZERO};
use crate::measurement::Observable;
use crate::routes::{Registry, Route};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PointerRegister {
    stages: Vec<Vec<String>>,
}

impl PointerRegister {
    /// Basis labels of each stage, in measurement order.
    pub fn stages(&self) -> &[Vec<String>] {
        &self.stages
    }

    pub fn stage_dims(&self) -> Vec<usize> {
        self.stages.iter().map(Vec::len).collect()
    }

    /// Total register dimension; 1 with no stages.
    pub fn dim(&self) -> usize {
        self.stages.iter().map(Vec::len).product()
    }

    fn separator(&self) -> &'static str {
        if self.stages.iter().flatten().all(|l| l.chars().count() == 1) {
            ""
        } else {
            ","
        }
    }

    /// Label of every register basis state, in storage order.
    pub fn composite_labels(&self) -> Vec<String> {
        let sep = self.separator();
        let mut labels = vec![String::new()];
        for (k, stage) in self.stages.iter().enumerate() {
            labels = labels
                .iter()
                .flat_map(|prefix| {
                    stage.iter().map(move |l| {
                        if k == 0 {
                            l.clone()
                        } else {
                            format!("{prefix}{sep}{l}")
                        }
                    })
                })
                .collect();
        }
        labels
    }

    /// Register basis vector for a composite label.
    pub fn basis_vector(&self, label: &str) -> Option<Vec<ComplexScalar>> {
        let index = self.composite_labels().iter().position(|l| l == label)?;
        Some(crate::linalg::basis_vector(self.dim(), index))
    }
}

/// Label for one eigenvalue: its decimal rendering when it is (within
/// `1e-9`) a number with at most six decimals.
fn eigenvalue_label(value: f64) -> Option<String> {
    let rounded = (value * 1e6).round() / 1e6;
    if (rounded - value).abs() > 1e-9 {
        return None;
    }
    let rounded = if rounded == 0.0 { 0.0 } else { rounded };
    Some(format!("{rounded}"))
}

/// Stage labels for an observable, falling back to `g<k>` when any
/// eigenvalue has no short decimal name or two names collide.
pub fn stage_labels(obs: &Observable) -> Vec<String> {
    let named: Option<Vec<String>> = obs.eigenvalues().into_iter().map(eigenvalue_label).collect();
    match named {
        Some(names) if names.iter().collect::<std::collections::BTreeSet<_>>().len() == names.len() => names,
        _ => (0..obs.groups().len()).map(|k| format!("g{k}")).collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TotalState {
    vector: Vec<ComplexScalar>,
    probe: PointerRegister,
    system_dim: usize,
}

/// Wraps a normalized system state with an empty register.
pub fn init_total(system: &[ComplexScalar]) -> Result<TotalState> {
    if system.is_empty() {
        return Err(Error::dim("system state must be non-empty"));
    }
    let deviation = (norm(system).powi(2) - 1.0).abs();
    if deviation.is_nan() || deviation > DEFAULT_TOL {
        return Err(Error::Normalization { deviation });
    }
    Ok(TotalState {
        vector: system.to_vec(),
        probe: PointerRegister::default(),
        system_dim: system.len(),
    })
}

impl TotalState {
    pub fn vector(&self) -> &[ComplexScalar] {
        &self.vector
    }

    pub fn probe(&self) -> &PointerRegister {
        &self.probe
    }

    pub fn system_dim(&self) -> usize {
        self.system_dim
    }

    /// Amplitude of `|label>_probe ⊗ |s>_system`.
    pub fn amplitude(&self, label: &str, s: usize) -> Option<ComplexScalar> {
        let p = self.probe.composite_labels().iter().position(|l| l == label)?;
        self.vector.get(p * self.system_dim + s).copied()
    }

    /// Couples a fresh pointer stage to the system through `obs`.
    pub fn interact(&self, obs: &Observable) -> Result<TotalState> {
        if obs.dim() != self.system_dim {
            return Err(Error::Dimension(format!(
                "observable `{}` is {}-dimensional, system is {}-dimensional",
                obs.label(),
                obs.dim(),
                self.system_dim
            )));
        }
        let sd = self.system_dim;
        let old_probe = self.probe.dim();
        let k = obs.groups().len();
        let mut vector = vec![ZERO; old_probe * k * sd];
        for p in 0..old_probe {
            let block = &self.vector[p * sd..(p + 1) * sd];
            for (n, group) in obs.groups().iter().enumerate() {
                let projected = group.projector.apply(block)?;
                let offset = (p * k + n) * sd;
                vector[offset..offset + sd].copy_from_slice(&projected);
            }
        }
        let mut probe = self.probe.clone();
        probe.stages.push(stage_labels(obs));
        Ok(TotalState {
            vector,
            probe,
            system_dim: sd,
        })
    }

    /// Partial trace over every pointer stage.
    pub fn reduced_system_state(&self) -> DensityMatrix {
        let sd = self.system_dim;
        let mut rho = ComplexMatrix::zeros(sd);
        for block in self.vector.chunks(sd) {
            for s in 0..sd {
                for t in 0..sd {
                    rho[(s, t)] += block[s] * block[t].conj();
                }
            }
        }
        DensityMatrix::from_valid(rho)
    }

    /// Probability of reading each composite pointer label.
    pub fn probe_signal_distribution(&self) -> Result<BTreeMap<String, f64>> {
        if self.probe.stages.is_empty() {
            return Err(Error::NoStage);
        }
        let sd = self.system_dim;
        Ok(self
            .probe
            .composite_labels()
            .into_iter()
            .zip(self.vector.chunks(sd))
            .map(|(label, block)| (label, block.iter().map(|z| z.norm_sqr()).sum()))
            .collect())
    }

    pub fn norm(&self) -> f64 {
        norm(&self.vector)
    }
}

/// Interacts a fresh register with each step of `route` in order. The
/// route's projection rule is not consulted: the register model realizes
/// the Lüders update.
pub fn probe_route(system: &[ComplexScalar], route: &Route, registry: &Registry) -> Result<TotalState> {
    route.steps.iter().try_fold(init_total(system)?, |state, label| {
        let obs = registry
            .get(label)
            .ok_or_else(|| Error::UnknownLabel(label.clone()))?;
        state.interact(obs)
    })
}
