//! Scenario definitions: an initial state, a set of observables, and the
//! routes to compare. Scenarios come from the built-in catalogue or from
//! TOML files.

mod builtin;
mod file;

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result, ValidationIssue};
use crate::linalg::{norm, ComplexMatrix, ComplexScalar, DensityMatrix, DEFAULT_TOL};
use crate::measurement::{Observable, ProjectionRule};
use crate::routes::{compare_routes, ComparisonReport, Registry, Route, DEFAULT_EQUALITY_TOL};

pub use builtin::{
    builtin, builtin_names, nondegenerate_basis, nondegenerate_counterexample, qutrit_paper,
    two_qubit_rafasala, BUILTINS,
};
pub use file::{parse_scenario, serialize_scenario};

/// Largest system dimension a scenario may declare.
pub const MAX_SYSTEM_DIM: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    Vector(Vec<ComplexScalar>),
    Density(ComplexMatrix),
}

impl InitialState {
    fn dim(&self) -> usize {
        match self {
            InitialState::Vector(v) => v.len(),
            InitialState::Density(m) => m.dim(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub description: String,
    pub system_dim: usize,
    pub initial_state: InitialState,
    pub observables: BTreeMap<String, ComplexMatrix>,
    pub routes: Vec<Route>,
    pub target: String,
    pub rule: ProjectionRule,
    /// Trace-distance threshold for EQUAL verdicts.
    pub tolerance: f64,
}

impl Scenario {
    /// Every invariant violation, each tagged with its field path.
    pub fn issues(&self) -> Vec<ValidationIssue> {
        let mut issues = Vec::new();
        let mut push = |field: String, message: String| issues.push(ValidationIssue::new(field, message));

        if self.name.trim().is_empty() {
            push("name".into(), "must not be empty".into());
        }
        if self.system_dim == 0 || self.system_dim > MAX_SYSTEM_DIM {
            push(
                "system_dim".into(),
                format!("{} is outside 1..={MAX_SYSTEM_DIM}", self.system_dim),
            );
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            push(
                "tolerance".into(),
                format!("{} is not a positive number", self.tolerance),
            );
        }

        if self.initial_state.dim() != self.system_dim {
            push(
                "initial_state".into(),
                format!(
                    "has dimension {}, system_dim is {}",
                    self.initial_state.dim(),
                    self.system_dim
                ),
            );
        } else {
            match &self.initial_state {
                InitialState::Vector(v) => {
                    let deviation = (norm(v).powi(2) - 1.0).abs();
                    if deviation.is_nan() || deviation > DEFAULT_TOL {
                        push(
                            "initial_state.vector".into(),
                            format!("not normalized: |norm^2 - 1| = {deviation:.3e}"),
                        );
                    }
                }
                InitialState::Density(m) => {
                    if let Err(e) = DensityMatrix::new(m.clone()) {
                        push("initial_state.density".into(), e.to_string());
                    }
                }
            }
        }

        for (label, m) in &self.observables {
            let field = format!("observables.{label}");
            if m.dim() != self.system_dim {
                push(
                    field,
                    format!("is {}x{}, system_dim is {}", m.dim(), m.dim(), self.system_dim),
                );
                continue;
            }
            if let Err(e) = Observable::new(label.clone(), m.clone()) {
                push(field, format!("observable `{label}`: {e}"));
            }
        }

        if self.routes.len() < 2 {
            push(
                "routes".into(),
                format!("need at least two routes, found {}", self.routes.len()),
            );
        }
        let mut names = BTreeSet::new();
        for (i, route) in self.routes.iter().enumerate() {
            let field = format!("routes[{i}]");
            if !names.insert(route.name.as_str()) {
                push(
                    format!("{field}.name"),
                    format!("duplicate route name `{}`", route.name),
                );
            }
            if route.steps.is_empty() {
                push(format!("{field}.steps"), "must not be empty".into());
            }
            for step in &route.steps {
                if !self.observables.contains_key(step) {
                    push(format!("{field}.steps"), format!("unresolved label {step}"));
                }
            }
        }
        if !self.observables.contains_key(&self.target) {
            push("target".into(), format!("unresolved label {}", self.target));
        }
        issues
    }

    pub fn validate(&self) -> Result<()> {
        let issues = self.issues();
        if issues.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation { issues })
        }
    }

    pub fn initial_density(&self) -> Result<DensityMatrix> {
        match &self.initial_state {
            InitialState::Vector(v) => DensityMatrix::from_pure(v),
            InitialState::Density(m) => DensityMatrix::new(m.clone()),
        }
    }

    pub fn initial_vector(&self) -> Option<&[ComplexScalar]> {
        match &self.initial_state {
            InitialState::Vector(v) => Some(v),
            InitialState::Density(_) => None,
        }
    }

    pub fn registry(&self) -> Result<Registry> {
        self.observables
            .iter()
            .map(|(label, m)| Ok((label.clone(), Observable::new(label.clone(), m.clone())?)))
            .collect()
    }

    /// Sets the rule of the scenario and of every route.
    pub fn with_rule(mut self, rule: ProjectionRule) -> Self {
        self.rule = rule;
        for route in &mut self.routes {
            route.rule = rule;
        }
        self
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    /// Replaces the initial state with a pure state. The vector must be
    /// normalized and match `system_dim`.
    pub fn with_initial_vector(mut self, psi: Vec<ComplexScalar>) -> Result<Self> {
        if psi.len() != self.system_dim {
            return Err(Error::Dimension(format!(
                "state has {} amplitudes, scenario `{}` is {}-dimensional",
                psi.len(),
                self.name,
                self.system_dim
            )));
        }
        DensityMatrix::from_pure(&psi)?;
        self.initial_state = InitialState::Vector(psi);
        Ok(self)
    }

    /// Runs and compares all routes.
    pub fn compare(&self) -> Result<ComparisonReport> {
        let registry = self.registry()?;
        compare_routes(
            &self.initial_density()?,
            &self.routes,
            &registry,
            &self.target,
            self.tolerance,
        )
    }

    /// Structural equality with numeric payloads compared to within `tol`.
    pub fn approx_eq(&self, other: &Scenario, tol: f64) -> bool {
        let close =
            |a: &ComplexMatrix, b: &ComplexMatrix| a.max_abs_diff(b).map(|d| d <= tol).unwrap_or(false);
        let states = match (&self.initial_state, &other.initial_state) {
            (InitialState::Vector(a), InitialState::Vector(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
            }
            (InitialState::Density(a), InitialState::Density(b)) => close(a, b),
            _ => false,
        };
        self.name == other.name
            && self.description == other.description
            && self.system_dim == other.system_dim
            && self.routes == other.routes
            && self.target == other.target
            && self.rule == other.rule
            && (self.tolerance - other.tolerance).abs() <= tol * self.tolerance.abs().max(1.0)
            && states
            && self.observables.len() == other.observables.len()
            && self
                .observables
                .iter()
                .zip(&other.observables)
                .all(|((la, a), (lb, b))| la == lb && close(a, b))
    }
}

pub(crate) fn default_tolerance() -> f64 {
    DEFAULT_EQUALITY_TOL
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;

    #[test]
    fn issues_name_offending_fields() {
        let mut s = qutrit_paper_default();
        s.observables.insert(
            "N".into(),
            ComplexMatrix::from_real_rows(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 0.0], &[0.0, 0.0, 0.0]]).unwrap(),
        );
        s.routes.push(Route::new("bad", ["X"], ProjectionRule::Luders));
        s.initial_state = InitialState::Vector(vec![Complex64::new(1.0, 0.0); 3]);
        let issues = s.issues();
        let fields: Vec<_> = issues.iter().map(|i| i.field.as_str()).collect();
        assert!(fields.contains(&"observables.N"), "{issues:?}");
        assert!(fields.contains(&"routes[3].steps"));
        assert!(fields.contains(&"initial_state.vector"));
        assert!(issues.iter().any(|i| i.message == "unresolved label X"));
        assert!(issues.iter().any(|i| i.message.contains("observable `N`")));
    }

    #[test]
    fn state_override_checks_shape() {
        let s = qutrit_paper_default();
        assert!(matches!(
            s.clone().with_initial_vector(vec![Complex64::new(1.0, 0.0); 2]),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            s.with_initial_vector(vec![Complex64::new(1.0, 0.0); 3]),
            Err(Error::Normalization { .. })
        ));
    }

    #[test]
    fn rule_override_reaches_routes() {
        let s = qutrit_paper_default().with_rule(ProjectionRule::VonNeumann);
        assert!(s.routes.iter().all(|r| r.rule == ProjectionRule::VonNeumann));
        assert!(s.compare().unwrap().all_equal());
    }

    fn qutrit_paper_default() -> Scenario {
        builtin("qutrit-paper").unwrap()
    }
}
