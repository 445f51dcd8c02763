//! Measurement routes: alternative procedures for measuring one observable,
//! run on the same initial state and compared through the states they
//! leave behind.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{trace_distance, DensityMatrix};
use crate::measurement::DEFAULT_GROUP_TOL;
use crate::measurement::{outcome_distribution, spectral_decompose, Observable, ProjectionRule};

/// Default trace-distance threshold for an EQUAL verdict.
pub const DEFAULT_EQUALITY_TOL: f64 = 1e-8;

/// Tolerance for treating a commutator as zero when forming products.
pub const COMMUTATION_TOL: f64 = 1e-10;

pub type Registry = BTreeMap<String, Observable>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Route {
    pub name: String,
    pub steps: Vec<String>,
    pub rule: ProjectionRule,
}

impl Route {
    pub fn new<S: Into<String>>(
        name: impl Into<String>,
        steps: impl IntoIterator<Item = S>,
        rule: ProjectionRule,
    ) -> Self {
        Self {
            name: name.into(),
            steps: steps.into_iter().map(Into::into).collect(),
            rule,
        }
    }

    pub fn with_rule(mut self, rule: ProjectionRule) -> Self {
        self.rule = rule;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Equal,
    Distinct,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Equal => "EQUAL",
            Verdict::Distinct => "DISTINCT",
        })
    }
}

/// `true` iff `max |AB - BA| <= tol`.
pub fn commutes(a: &Observable, b: &Observable, tol: f64) -> Result<bool> {
    Ok(a.matrix().commutator(b.matrix())?.max_abs() <= tol)
}

/// The observable `AB` for commuting `A` and `B`, labelled `A*B`.
pub fn product_observable(a: &Observable, b: &Observable) -> Result<Observable> {
    let defect = a.matrix().commutator(b.matrix())?.max_abs();
    if defect > COMMUTATION_TOL {
        return Err(Error::NonCommuting {
            a: a.label().to_owned(),
            b: b.label().to_owned(),
            defect,
        });
    }
    let product = a.matrix() * b.matrix();
    // Symmetrize away the rounding in the product before decomposing.
    let product = (&product + &product.adjoint()).scale_real(0.5);
    Ok(spectral_decompose(&product, DEFAULT_GROUP_TOL)?.with_label(format!("{}*{}", a.label(), b.label())))
}

/// Applies each step's update in order.
pub fn run_route(initial: &DensityMatrix, route: &Route, registry: &Registry) -> Result<DensityMatrix> {
    if route.steps.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "route `{}` has no steps",
            route.name
        )));
    }
    route.steps.iter().try_fold(initial.clone(), |rho, label| {
        let obs = registry
            .get(label)
            .ok_or_else(|| Error::UnknownLabel(label.clone()))?;
        route.rule.apply(&rho, obs)
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub route_names: Vec<String>,
    pub final_states: Vec<DensityMatrix>,
    pub pairwise_trace_distance: Vec<Vec<f64>>,
    pub pairwise_max_abs_diff: Vec<Vec<f64>>,
    pub verdicts: Vec<Vec<Verdict>>,
    /// Trace-distance threshold the verdicts were taken at.
    pub tolerance: f64,
    pub target: String,
    /// Distinct eigenvalues of the target, descending.
    pub target_eigenvalues: Vec<f64>,
    /// Per route, the target's outcome distribution on the final state,
    /// aligned with `target_eigenvalues`.
    pub final_observable_statistics: Vec<Vec<f64>>,
    pub warnings: Vec<String>,
}

impl ComparisonReport {
    pub fn len(&self) -> usize {
        self.route_names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.route_names.is_empty()
    }

    pub fn index_of(&self, route: &str) -> Option<usize> {
        self.route_names.iter().position(|n| n == route)
    }

    pub fn distance(&self, a: &str, b: &str) -> Option<f64> {
        Some(self.pairwise_trace_distance[self.index_of(a)?][self.index_of(b)?])
    }

    pub fn verdict(&self, a: &str, b: &str) -> Option<Verdict> {
        Some(self.verdicts[self.index_of(a)?][self.index_of(b)?])
    }

    pub fn all_equal(&self) -> bool {
        self.verdicts.iter().flatten().all(|v| *v == Verdict::Equal)
    }

    /// Unordered route pairs `(i, j)` with `i < j`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.len();
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
    }
}

/// Runs every route from `initial` and compares the final states.
///
/// A warning (not an error) is recorded for each route that neither ends
/// with `target` nor has a step product equal to `target`.
pub fn compare_routes(
    initial: &DensityMatrix,
    routes: &[Route],
    registry: &Registry,
    target: &str,
    tol: f64,
) -> Result<ComparisonReport> {
    if routes.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "comparison needs at least two routes, got {}",
            routes.len()
        )));
    }
    let target_obs = registry
        .get(target)
        .ok_or_else(|| Error::UnknownLabel(target.to_owned()))?;

    let final_states = routes
        .iter()
        .map(|r| run_route(initial, r, registry))
        .collect::<Result<Vec<_>>>()?;

    let mut warnings = Vec::new();
    for route in routes {
        if !measures_target(route, registry, target_obs)? {
            warnings.push(format!(
                "route `{}` neither ends with `{target}` nor multiplies out to it",
                route.name
            ));
        }
    }

    let n = routes.len();
    let mut distance = vec![vec![0.0; n]; n];
    let mut max_diff = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = trace_distance(&final_states[i], &final_states[j])?;
            let m = final_states[i].matrix().max_abs_diff(final_states[j].matrix())?;
            distance[i][j] = d;
            distance[j][i] = d;
            max_diff[i][j] = m;
            max_diff[j][i] = m;
        }
    }
    let verdicts = distance
        .iter()
        .map(|row| {
            row.iter()
                .map(|&d| {
                    if d <= tol {
                        Verdict::Equal
                    } else {
                        Verdict::Distinct
                    }
                })
                .collect()
        })
        .collect();

    let final_observable_statistics = final_states
        .iter()
        .map(|rho| outcome_distribution(rho, target_obs))
        .collect::<Result<Vec<_>>>()?;

    Ok(ComparisonReport {
        route_names: routes.iter().map(|r| r.name.clone()).collect(),
        final_states,
        pairwise_trace_distance: distance,
        pairwise_max_abs_diff: max_diff,
        verdicts,
        tolerance: tol,
        target: target.to_owned(),
        target_eigenvalues: target_obs.eigenvalues(),
        final_observable_statistics,
        warnings,
    })
}

fn measures_target(route: &Route, registry: &Registry, target: &Observable) -> Result<bool> {
    if route.steps.last().map(String::as_str) == Some(target.label()) {
        return Ok(true);
    }
    let mut product: Option<crate::linalg::ComplexMatrix> = None;
    for label in &route.steps {
        let m = registry
            .get(label)
            .ok_or_else(|| Error::UnknownLabel(label.clone()))?
            .matrix();
        product = Some(match product {
            None => m.clone(),
            Some(p) => p.matmul(m)?,
        });
    }
    match product {
        Some(p) => Ok(p.max_abs_diff(target.matrix())? <= DEFAULT_EQUALITY_TOL),
        None => Ok(false),
    }
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;
    use crate::linalg::{pauli_x, pauli_y, ComplexMatrix};

    fn diag_obs(label: &str, d: &[f64]) -> Observable {
        Observable::new(label, ComplexMatrix::from_real_diagonal(d)).unwrap()
    }

    fn qutrit_registry() -> Registry {
        [
            diag_obs("A", &[1.0, 1.0, 0.0]),
            diag_obs("B", &[0.0, 1.0, 1.0]),
            diag_obs("C", &[0.0, 1.0, 0.0]),
        ]
        .into_iter()
        .map(|o| (o.label().to_owned(), o))
        .collect()
    }

    fn eta(a: f64, b: f64, g: f64) -> DensityMatrix {
        DensityMatrix::from_pure(&[a, b, g].map(|x| Complex64::new(x, 0.0))).unwrap()
    }

    #[test]
    fn commutation_examples() {
        let a = diag_obs("A", &[1.0, 1.0, 0.0]);
        let b = diag_obs("B", &[0.0, 1.0, 1.0]);
        assert!(commutes(&a, &b, 1e-10).unwrap());

        let id = ComplexMatrix::identity(2);
        let m1 = Observable::new("M1", pauli_x().tensor(&id).unwrap()).unwrap();
        let m2 = Observable::new("M2", id.tensor(&pauli_y()).unwrap()).unwrap();
        assert!(commutes(&m1, &m2, 1e-10).unwrap());

        let x = Observable::new("X", pauli_x()).unwrap();
        let y = Observable::new("Y", pauli_y()).unwrap();
        assert!(!commutes(&x, &y, 1e-10).unwrap());
        assert!(matches!(commutes(&a, &x, 1e-10), Err(Error::Dimension(_))));
    }

    #[test]
    fn products() {
        let reg = qutrit_registry();
        let ab = product_observable(&reg["A"], &reg["B"]).unwrap();
        assert_eq!(ab.matrix(), reg["C"].matrix());
        assert_eq!(ab.label(), "A*B");

        let id = ComplexMatrix::identity(2);
        let m1 = Observable::new("M1", pauli_x().tensor(&id).unwrap()).unwrap();
        let m2 = Observable::new("M2", id.tensor(&pauli_y()).unwrap()).unwrap();
        let m3 = product_observable(&m1, &m2).unwrap();
        assert_eq!(m3.matrix(), &pauli_x().tensor(&pauli_y()).unwrap());

        let x = Observable::new("X", pauli_x()).unwrap();
        let y = Observable::new("Y", pauli_y()).unwrap();
        assert!(matches!(
            product_observable(&x, &y),
            Err(Error::NonCommuting { .. })
        ));
    }

    #[test]
    fn qutrit_routes() {
        let reg = qutrit_registry();
        let (a, b, g) = (0.48, 0.6, 0.64);
        let rho = eta(a, b, g);
        let rule = ProjectionRule::Luders;
        let rho_c = run_route(&rho, &Route::new("C", ["C"], rule), &reg).unwrap();
        let mut expected = ComplexMatrix::from_real_diagonal(&[a * a, b * b, g * g]);
        expected[(0, 2)] = Complex64::new(a * g, 0.0);
        expected[(2, 0)] = Complex64::new(a * g, 0.0);
        assert!(rho_c.matrix().max_abs_diff(&expected).unwrap() < 1e-15);

        let diag = ComplexMatrix::from_real_diagonal(&[a * a, b * b, g * g]);
        let ab = run_route(&rho, &Route::new("AB", ["A", "B"], rule), &reg).unwrap();
        let ba = run_route(&rho, &Route::new("BA", ["B", "A"], rule), &reg).unwrap();
        assert!(ab.matrix().max_abs_diff(&diag).unwrap() < 1e-15);
        assert!(ba.matrix().max_abs_diff(&diag).unwrap() < 1e-15);
    }

    #[test]
    fn run_route_errors() {
        let reg = qutrit_registry();
        let rho = eta(1.0, 0.0, 0.0);
        let err = run_route(&rho, &Route::new("bad", ["X"], ProjectionRule::Luders), &reg).unwrap_err();
        assert_eq!(err, Error::UnknownLabel("X".into()));
        let empty: Route = Route::new("empty", Vec::<String>::new(), ProjectionRule::Luders);
        assert!(run_route(&rho, &empty, &reg).is_err());
        let small = DensityMatrix::maximally_mixed(2);
        assert!(matches!(
            run_route(&small, &Route::new("C", ["C"], ProjectionRule::Luders), &reg),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn comparison_discriminates_qutrit_routes() {
        let reg = qutrit_registry();
        let s = 0.5f64.sqrt();
        let rho = eta(s, 0.0, s);
        let rule = ProjectionRule::Luders;
        let routes = [
            Route::new("C", ["C"], rule),
            Route::new("AB", ["A", "B"], rule),
            Route::new("BA", ["B", "A"], rule),
        ];
        let report = compare_routes(&rho, &routes, &reg, "C", DEFAULT_EQUALITY_TOL).unwrap();
        assert!((report.distance("C", "AB").unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(report.verdict("C", "AB"), Some(Verdict::Distinct));
        assert_eq!(report.verdict("AB", "BA"), Some(Verdict::Equal));
        assert!(report.warnings.is_empty());
        for i in 0..3 {
            assert_eq!(report.pairwise_trace_distance[i][i], 0.0);
            assert_eq!(report.verdicts[i][i], Verdict::Equal);
        }

        let vn: Vec<_> = routes
            .iter()
            .cloned()
            .map(|r| r.with_rule(ProjectionRule::VonNeumann))
            .collect();
        let report = compare_routes(&rho, &vn, &reg, "C", DEFAULT_EQUALITY_TOL).unwrap();
        assert!(report.all_equal());
    }

    #[test]
    fn comparison_warns_on_unrelated_route() {
        let reg = qutrit_registry();
        let rho = eta(1.0, 0.0, 0.0);
        let routes = [
            Route::new("C", ["C"], ProjectionRule::Luders),
            Route::new("A", ["A"], ProjectionRule::Luders),
        ];
        let report = compare_routes(&rho, &routes, &reg, "C", DEFAULT_EQUALITY_TOL).unwrap();
        assert_eq!(report.warnings.len(), 1);
        assert!(report.warnings[0].contains("`A`"));
    }

    #[test]
    fn comparison_needs_two_routes() {
        let reg = qutrit_registry();
        let rho = eta(1.0, 0.0, 0.0);
        let routes = [Route::new("C", ["C"], ProjectionRule::Luders)];
        assert!(matches!(
            compare_routes(&rho, &routes, &reg, "C", DEFAULT_EQUALITY_TOL),
            Err(Error::InvalidArgument(_))
        ));
    }
}
