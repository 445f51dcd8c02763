//! Run reports and their text and JSON renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Duration;

use qroute_core::scenarios::InitialState;
use qroute_core::{ComplexMatrix, ComplexScalar, ProjectionRule, Scenario, Verdict};
use serde::Serialize;
use serde_json::Value;

pub type Matrix = Vec<Vec<[f64; 2]>>;

pub fn matrix_payload(m: &ComplexMatrix) -> Matrix {
    m.rows()
        .map(|r| r.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

fn vector_payload(v: &[ComplexScalar]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialStatePayload {
    Vector(Vec<[f64; 2]>),
    Density(Matrix),
}

#[derive(Debug, Clone, Serialize)]
pub struct RoutePayload {
    pub name: String,
    pub steps: Vec<String>,
    pub rule: ProjectionRule,
}

/// The scenario as it was run, after command-line overrides.
#[derive(Debug, Clone, Serialize)]
pub struct ScenarioPayload {
    pub name: String,
    pub description: String,
    pub system_dim: usize,
    pub initial_state: InitialStatePayload,
    pub observables: BTreeMap<String, Matrix>,
    pub routes: Vec<RoutePayload>,
    pub target: String,
}

impl From<&Scenario> for ScenarioPayload {
    fn from(s: &Scenario) -> Self {
        ScenarioPayload {
            name: s.name.clone(),
            description: s.description.clone(),
            system_dim: s.system_dim,
            initial_state: match &s.initial_state {
                InitialState::Vector(v) => InitialStatePayload::Vector(vector_payload(v)),
                InitialState::Density(m) => InitialStatePayload::Density(matrix_payload(m)),
            },
            observables: s
                .observables
                .iter()
                .map(|(k, m)| (k.clone(), matrix_payload(m)))
                .collect(),
            routes: s
                .routes
                .iter()
                .map(|r| RoutePayload {
                    name: r.name.clone(),
                    steps: r.steps.clone(),
                    rule: r.rule,
                })
                .collect(),
            target: s.target.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Tolerances {
    /// Trace-distance threshold for the EQUAL verdict.
    pub equality: f64,
    /// Eigenvalue grouping tolerance.
    pub grouping: f64,
    /// Reduced-state deviation allowed by the probe cross-check.
    pub probe: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RouteResult {
    pub name: String,
    pub final_state: Matrix,
    pub purity: f64,
    /// Distribution of the target observable, one entry per eigenvalue.
    pub target_statistics: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairComparison {
    pub a: String,
    pub b: String,
    pub trace_distance: f64,
    pub max_abs_diff: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeCheck {
    pub route: String,
    /// Max entry deviation between the probe-model reduced state and the
    /// Lüders run of the same route.
    pub max_deviation: f64,
    pub consistent: bool,
    pub signal_distribution: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub scenario: ScenarioPayload,
    pub rule: ProjectionRule,
    pub tolerances: Tolerances,
    pub target: String,
    pub target_eigenvalues: Vec<f64>,
    pub routes: Vec<RouteResult>,
    pub comparisons: Vec<PairComparison>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe: Option<Vec<ProbeCheck>>,
    pub warnings: Vec<String>,
    /// Invariant violations; non-empty means exit code 3.
    pub violations: Vec<String>,
    /// Wall-clock time; shown in text output only so JSON stays byte-stable.
    #[serde(skip)]
    pub duration: Duration,
}

/// Fixed six-decimal rendering without negative zeros.
pub fn fixed(x: f64) -> String {
    let s = format!("{x:.6}");
    if s.trim_start_matches('-').bytes().all(|b| b == b'0' || b == b'.') {
        s.trim_start_matches('-').to_owned()
    } else {
        s
    }
}

fn complex(z: [f64; 2]) -> String {
    let im = fixed(z[1]);
    match im.strip_prefix('-') {
        Some(abs) => format!("{}-{abs}i", fixed(z[0])),
        None => format!("{}+{im}i", fixed(z[0])),
    }
}

fn write_matrix(out: &mut String, m: &Matrix) {
    let cells: Vec<Vec<String>> = m
        .iter()
        .map(|r| r.iter().map(|&z| complex(z)).collect())
        .collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(0);
    for row in cells {
        let row: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        let _ = writeln!(out, "    [ {} ]", row.join("  "));
    }
}

/// Shortest decimal form of an eigenvalue for labels: `1`, `-0.5`.
fn short(x: f64) -> String {
    let s = fixed(x);
    s.trim_end_matches('0').trim_end_matches('.').to_owned()
}

fn distribution(label: &str, values: &[f64], probs: &[f64]) -> String {
    values
        .iter()
        .zip(probs)
        .map(|(v, p)| format!("P({label}={}) = {}", short(*v), fixed(*p)))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn render_text(r: &RunReport) -> String {
    let mut out = String::new();
    let s = &r.scenario;
    let _ = writeln!(out, "scenario: {}", s.name);
    if !s.description.is_empty() {
        let _ = writeln!(out, "  {}", s.description);
    }
    let _ = writeln!(out, "rule: {}", r.rule);
    let _ = writeln!(
        out,
        "tolerances: equality {:e}, grouping {:e}, probe {:e}",
        r.tolerances.equality, r.tolerances.grouping, r.tolerances.probe
    );
    match &s.initial_state {
        InitialStatePayload::Vector(v) => {
            let amps: Vec<String> = v.iter().map(|&z| complex(z)).collect();
            let _ = writeln!(out, "initial state: [{}]", amps.join(", "));
        }
        InitialStatePayload::Density(m) => {
            let _ = writeln!(out, "initial state (density):");
            write_matrix(&mut out, m);
        }
    }

    let _ = writeln!(out, "\nfinal states");
    for (route, res) in s.routes.iter().zip(&r.routes) {
        let _ = writeln!(
            out,
            "  {} [{}] ({}), purity {}",
            route.name,
            route.steps.join(", "),
            route.rule,
            fixed(res.purity)
        );
        write_matrix(&mut out, &res.final_state);
    }

    let _ = writeln!(out, "\ncomparisons");
    for c in &r.comparisons {
        let _ = writeln!(
            out,
            "  {} vs {}: trace distance {}, max |diff| {}, {}",
            c.a,
            c.b,
            fixed(c.trace_distance),
            fixed(c.max_abs_diff),
            c.verdict
        );
    }

    let _ = writeln!(out, "\ntarget statistics");
    for res in &r.routes {
        let stats = distribution(&r.target, &r.target_eigenvalues, &res.target_statistics);
        let _ = writeln!(out, "  {}: {stats}", res.name);
    }

    if let Some(checks) = &r.probe {
        let _ = writeln!(out, "\nprobe model");
        for c in checks {
            let signals: Vec<String> = c
                .signal_distribution
                .iter()
                .map(|(label, p)| format!("{label}: {}", fixed(*p)))
                .collect();
            let _ = writeln!(
                out,
                "  {}: {} (max deviation {:.3e}), signals {}",
                c.route,
                if c.consistent {
                    "consistent"
                } else {
                    "INCONSISTENT"
                },
                c.max_deviation,
                signals.join(", ")
            );
        }
    }

    for w in &r.warnings {
        let _ = writeln!(out, "\nwarning: {w}");
    }
    for v in &r.violations {
        let _ = writeln!(out, "\ninvariant violation: {v}");
    }
    let _ = writeln!(out, "\nelapsed: {:.3} ms", r.duration.as_secs_f64() * 1e3);
    out
}

/// Nesting depth of arrays; `None` if the value contains an object.
fn array_depth(v: &Value) -> Option<usize> {
    match v {
        Value::Array(items) => items
            .iter()
            .try_fold(0, |d, item| array_depth(item).map(|i| d.max(i)))
            .map(|d| d + 1),
        Value::Object(_) => None,
        _ => Some(0),
    }
}

fn write_json(out: &mut String, v: &Value, indent: usize) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        // Vectors and matrix rows stay on one line.
        Value::Array(items) if array_depth(v).is_some_and(|d| d <= 2) => {
            out.push_str(
                &serde_json::to_string(v)
                    .expect("json values serialize")
                    .replace(',', ", "),
            );
        }
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) => {
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_json(out, item, indent + 1);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (k, (key, item)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(key).expect("keys serialize"));
                out.push_str(": ");
                write_json(out, item, indent + 1);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        scalar => out.push_str(&serde_json::to_string(scalar).expect("json values serialize")),
    }
}

/// Deterministic JSON: keys sorted, floats in shortest round-trip form.
pub fn render_json(r: &RunReport) -> String {
    let value = serde_json::to_value(r).expect("reports always serialize");
    let mut out = String::new();
    write_json(&mut out, &value, 0);
    out.push('\n');
    out
}
