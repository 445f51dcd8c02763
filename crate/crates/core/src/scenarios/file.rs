//! TOML scenario files.
//!
//! Complex numbers are `[re, im]` pairs (a bare real number is also
//! accepted on input); matrices are row-major arrays of rows. Floats are
//! written in shortest round-trip form, so serializing and parsing again
//! reproduces every numeric field exactly.
//!
//! ```toml
//! name = "qutrit-paper"
//! system_dim = 3
//! rule = "luders"
//! tolerance = 1e-8
//! target = "C"
//!
//! [initial_state]
//! vector = [[0.6, 0.0], [0.0, 0.0], [0.8, 0.0]]
//!
//! [[observables]]
//! label = "C"
//! matrix = [[0, 0, 0], [0, 1, 0], [0, 0, 0]]
//!
//! [[routes]]
//! name = "C"
//! steps = ["C"]
//! ```

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{default_tolerance, InitialState, Scenario};
use crate::error::{Error, Result, ValidationIssue};
use crate::linalg::{ComplexMatrix, ComplexScalar};
use crate::measurement::ProjectionRule;
use crate::routes::Route;

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
enum Scalar {
    Complex([f64; 2]),
    Real(f64),
}

impl From<Scalar> for ComplexScalar {
    fn from(s: Scalar) -> Self {
        match s {
            Scalar::Complex([re, im]) => Complex64::new(re, im),
            Scalar::Real(re) => Complex64::new(re, 0.0),
        }
    }
}

impl From<ComplexScalar> for Scalar {
    fn from(z: ComplexScalar) -> Self {
        Scalar::Complex([z.re, z.im])
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioDoc {
    name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    description: String,
    system_dim: usize,
    #[serde(default)]
    rule: ProjectionRule,
    #[serde(default = "default_tolerance")]
    tolerance: f64,
    target: String,
    initial_state: InitialStateDoc,
    #[serde(default)]
    observables: Vec<ObservableDoc>,
    #[serde(default)]
    routes: Vec<RouteDoc>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InitialStateDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vector: Option<Vec<Scalar>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    density: Option<Vec<Vec<Scalar>>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObservableDoc {
    label: String,
    matrix: Vec<Vec<Scalar>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RouteDoc {
    name: String,
    steps: Vec<String>,
    /// Defaults to the scenario rule.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rule: Option<ProjectionRule>,
}

fn to_matrix(rows: Vec<Vec<Scalar>>) -> Result<ComplexMatrix> {
    ComplexMatrix::from_rows(
        rows.into_iter()
            .map(|r| r.into_iter().map(Into::into).collect())
            .collect(),
    )
}

fn from_matrix(m: &ComplexMatrix) -> Vec<Vec<Scalar>> {
    m.rows().map(|r| r.iter().map(|&z| z.into()).collect()).collect()
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let doc: ScenarioDoc = toml::from_str(text).map_err(|e| Error::Syntax {
        line: e.span().map(|s| line_of(text, s.start)),
        message: e.message().to_owned(),
    })?;

    let mut issues = Vec::new();
    let initial_state = match (doc.initial_state.vector, doc.initial_state.density) {
        (Some(v), None) => Some(InitialState::Vector(v.into_iter().map(Into::into).collect())),
        (None, Some(rows)) => match to_matrix(rows) {
            Ok(m) => Some(InitialState::Density(m)),
            Err(e) => {
                issues.push(ValidationIssue::new("initial_state.density", e.to_string()));
                None
            }
        },
        _ => {
            issues.push(ValidationIssue::new(
                "initial_state",
                "exactly one of `vector` or `density` is required",
            ));
            None
        }
    };

    let mut observables = BTreeMap::new();
    for obs in doc.observables {
        let field = format!("observables.{}", obs.label);
        match to_matrix(obs.matrix) {
            Ok(m) => {
                if observables.insert(obs.label.clone(), m).is_some() {
                    issues.push(ValidationIssue::new(field, "duplicate observable label"));
                }
            }
            Err(e) => issues.push(ValidationIssue::new(field, e.to_string())),
        }
    }

    let routes = doc
        .routes
        .into_iter()
        .map(|r| Route {
            name: r.name,
            steps: r.steps,
            rule: r.rule.unwrap_or(doc.rule),
        })
        .collect();

    let Some(initial_state) = initial_state else {
        return Err(Error::Validation { issues });
    };
    let scenario = Scenario {
        name: doc.name,
        description: doc.description,
        system_dim: doc.system_dim,
        initial_state,
        observables,
        routes,
        target: doc.target,
        rule: doc.rule,
        tolerance: doc.tolerance,
    };
    issues.extend(scenario.issues());
    if issues.is_empty() {
        Ok(scenario)
    } else {
        Err(Error::Validation { issues })
    }
}

/// Renders a scenario as a TOML document accepted by [`parse_scenario`].
pub fn serialize_scenario(s: &Scenario) -> String {
    let initial_state = match &s.initial_state {
        InitialState::Vector(v) => InitialStateDoc {
            vector: Some(v.iter().map(|&z| z.into()).collect()),
            density: None,
        },
        InitialState::Density(m) => InitialStateDoc {
            vector: None,
            density: Some(from_matrix(m)),
        },
    };
    let doc = ScenarioDoc {
        name: s.name.clone(),
        description: s.description.clone(),
        system_dim: s.system_dim,
        rule: s.rule,
        tolerance: s.tolerance,
        target: s.target.clone(),
        initial_state,
        observables: s
            .observables
            .iter()
            .map(|(label, m)| ObservableDoc {
                label: label.clone(),
                matrix: from_matrix(m),
            })
            .collect(),
        routes: s
            .routes
            .iter()
            .map(|r| RouteDoc {
                name: r.name.clone(),
                steps: r.steps.clone(),
                rule: (r.rule != s.rule).then_some(r.rule),
            })
            .collect(),
    };
    toml::to_string(&doc).expect("scenario documents always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::builtin;

    const QUTRIT: &str = r#"
name = "qutrit-paper"
description = "qutrit with degenerate A, B and C = AB; direct and sequential routes differ under Lüders"
system_dim = 3
target = "C"

[initial_state]
vector = [0.5773502691896258, 0.5773502691896258, 0.5773502691896258]

[[observables]]
label = "A"
matrix = [[1, 0, 0], [0, 1, 0], [0, 0, 0]]

[[observables]]
label = "B"
matrix = [[0, 0, 0], [0, 1, 0], [0, 0, 1]]

[[observables]]
label = "C"
matrix = [[0, 0, 0], [0, 1, 0], [0, 0, 0]]

[[routes]]
name = "C"
steps = ["C"]

[[routes]]
name = "AB"
steps = ["A", "B"]

[[routes]]
name = "BA"
steps = ["B", "A"]
"#;

    #[test]
    fn hand_written_document_matches_builtin() {
        let parsed = parse_scenario(QUTRIT).unwrap();
        assert!(parsed.approx_eq(&builtin("qutrit-paper").unwrap(), 1e-12));
    }

    #[test]
    fn builtins_round_trip() {
        for name in crate::scenarios::builtin_names() {
            let s = builtin(name).unwrap();
            let text = serialize_scenario(&s);
            let back = parse_scenario(&text).unwrap();
            assert!(back.approx_eq(&s, 1e-12), "{name}:\n{text}");
            assert_eq!(back, s, "exact round trip for {name}");
        }
    }

    #[test]
    fn non_hermitian_observable_is_named() {
        let text = QUTRIT.replace(
            "matrix = [[0, 0, 0], [0, 1, 0], [0, 0, 1]]",
            "matrix = [[0, 1, 0], [0, 1, 0], [0, 0, 1]]",
        );
        let Err(Error::Validation { issues }) = parse_scenario(&text) else {
            panic!("expected validation error");
        };
        assert!(issues.iter().any(|i| i.field == "observables.B"), "{issues:?}");
    }

    #[test]
    fn unresolved_route_label() {
        let text = QUTRIT.replace(r#"steps = ["A", "B"]"#, r#"steps = ["A", "X"]"#);
        let Err(Error::Validation { issues }) = parse_scenario(&text) else {
            panic!("expected validation error");
        };
        assert!(issues.iter().any(|i| i.message == "unresolved label X"));
    }

    #[test]
    fn syntax_errors_carry_a_line() {
        let text = "name = \"x\"\nsystem_dim = [\n";
        let Err(Error::Syntax { line, .. }) = parse_scenario(text) else {
            panic!("expected syntax error");
        };
        assert!(line.is_some());

        let Err(Error::Syntax { .. }) = parse_scenario("name = 3") else {
            panic!("wrong type should be a syntax error");
        };
    }

    #[test]
    fn ragged_matrix_is_reported() {
        let text = QUTRIT.replace(
            "matrix = [[1, 0, 0], [0, 1, 0], [0, 0, 0]]",
            "matrix = [[1, 0, 0], [0, 1], [0, 0, 0]]",
        );
        let Err(Error::Validation { issues }) = parse_scenario(&text) else {
            panic!("expected validation error");
        };
        assert!(issues.iter().any(|i| i.field == "observables.A"));
    }

    #[test]
    fn density_initial_state() {
        let text = QUTRIT.replace(
            "vector = [0.5773502691896258, 0.5773502691896258, 0.5773502691896258]",
            "density = [[0.5, 0, 0], [0, 0.5, 0], [0, 0, 0]]",
        );
        let s = parse_scenario(&text).unwrap();
        assert!(matches!(s.initial_state, InitialState::Density(_)));
        let back = parse_scenario(&serialize_scenario(&s)).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn per_route_rule_survives_round_trip() {
        let mut s = builtin("qutrit-paper").unwrap();
        s.routes[0].rule = ProjectionRule::VonNeumann;
        let text = serialize_scenario(&s);
        assert!(text.contains("von-neumann"));
        assert_eq!(parse_scenario(&text).unwrap(), s);
    }
}
