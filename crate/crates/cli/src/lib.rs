//! Command implementations behind the `qroute` binary.
//!
//! Each command returns a value plus a [`CliError`] on failure; the binary
//! maps errors to exit codes (2 for bad input, 3 for numerical invariant
//! violations).

pub mod report;
pub mod state;

use std::fmt;
use std::path::Path;
use std::time::Instant;

use qroute_core::measurement::{outcome_distribution, DEFAULT_GROUP_TOL};
use qroute_core::probe::probe_route;
use qroute_core::routes::{commutes, run_route, COMMUTATION_TOL};
use qroute_core::scenarios::{builtin, builtin_names, parse_scenario, BUILTINS};
use qroute_core::{Error, ProjectionRule, Scenario};

pub use report::{render_json, render_text, RunReport};

/// Reduced-state agreement required between the probe model and the
/// projective route.
pub const PROBE_TOL: f64 = 1e-10;

/// Tolerance for re-checking final states against the density invariants.
const STATE_TOL: f64 = 1e-9;

#[derive(Debug)]
pub enum CliError {
    /// Bad input: unreadable file, parse or validation failure, bad flag.
    Input(String),
    /// A numerical invariant failed after the input was accepted.
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Numerical(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

fn describe(e: &Error) -> String {
    match e {
        Error::Validation { issues } => issues
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("\n"),
        Error::Syntax {
            line: Some(line),
            message,
        } => format!("line {line}: {message}"),
        other => other.to_string(),
    }
}

/// Resolves a builtin name or a scenario file path.
pub fn load_scenario(source: &str) -> Result<Scenario, CliError> {
    if let Ok(s) = builtin(source) {
        return Ok(s);
    }
    let path = Path::new(source);
    if !path.exists() {
        return Err(CliError::Input(format!(
            "`{source}` is neither a builtin scenario ({}) nor a readable file",
            builtin_names().collect::<Vec<_>>().join(", ")
        )));
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_scenario(&text).map_err(|e| CliError::Input(format!("{}:\n{}", path.display(), describe(&e))))
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub scenario: String,
    pub rule: Option<ProjectionRule>,
    /// Comma-separated amplitudes; normalized before use.
    pub state: Option<String>,
    pub tolerance: Option<f64>,
    pub probe: bool,
}

pub fn cmd_run(opts: &RunOptions) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let mut scenario = load_scenario(&opts.scenario)?;
    let mut warnings = Vec::new();

    if let Some(rule) = opts.rule {
        scenario = scenario.with_rule(rule);
    }
    if let Some(tol) = opts.tolerance {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(CliError::Input(format!(
                "--tol must be a positive number, got {tol}"
            )));
        }
        scenario = scenario.with_tolerance(tol);
    }
    if let Some(text) = &opts.state {
        let psi = state::parse_state(text).map_err(CliError::Input)?;
        let (psi, norm) = state::normalize(psi).map_err(CliError::Input)?;
        if (norm - 1.0).abs() > 1e-12 {
            warnings.push(format!("--state had norm {norm}; normalized"));
        }
        scenario = scenario
            .with_initial_vector(psi)
            .map_err(|e| CliError::Input(describe(&e)))?;
    }
    scenario.validate().map_err(|e| CliError::Input(describe(&e)))?;
    if opts.probe && scenario.initial_vector().is_none() {
        return Err(CliError::Input(
            "--probe needs a pure initial state (vector), but the scenario gives a density matrix".into(),
        ));
    }

    let numerical = |e: Error| CliError::Numerical(e.to_string());
    let comparison = scenario.compare().map_err(numerical)?;
    let registry = scenario.registry().map_err(numerical)?;
    warnings.extend(comparison.warnings.iter().cloned());

    let mut violations = Vec::new();
    let routes = comparison
        .route_names
        .iter()
        .zip(&comparison.final_states)
        .zip(&comparison.final_observable_statistics)
        .map(|((name, rho), stats)| {
            if let Err(e) = rho.validate(STATE_TOL) {
                violations.push(format!("final state of route {name}: {e}"));
            }
            report::RouteResult {
                name: name.clone(),
                final_state: report::matrix_payload(rho.matrix()),
                purity: rho.purity(),
                target_statistics: stats.clone(),
            }
        })
        .collect();

    let comparisons = comparison
        .pairs()
        .map(|(i, j)| report::PairComparison {
            a: comparison.route_names[i].clone(),
            b: comparison.route_names[j].clone(),
            trace_distance: comparison.pairwise_trace_distance[i][j],
            max_abs_diff: comparison.pairwise_max_abs_diff[i][j],
            verdict: comparison.verdicts[i][j],
        })
        .collect();

    let probe = if opts.probe {
        let psi = scenario.initial_vector().expect("checked above");
        let initial = initial_density(&scenario)?;
        let mut checks = Vec::new();
        for route in &scenario.routes {
            let total = probe_route(psi, route, &registry).map_err(numerical)?;
            let luders = route.clone().with_rule(ProjectionRule::Luders);
            let expected = run_route(&initial, &luders, &registry).map_err(numerical)?;
            let max_deviation = total
                .reduced_system_state()
                .matrix()
                .max_abs_diff(expected.matrix())
                .map_err(numerical)?;
            let consistent = max_deviation <= PROBE_TOL;
            if !consistent {
                violations.push(format!(
                    "probe model disagrees with the Lüders run of route {} by {max_deviation:e}",
                    route.name
                ));
            }
            checks.push(report::ProbeCheck {
                route: route.name.clone(),
                max_deviation,
                consistent,
                signal_distribution: total.probe_signal_distribution().map_err(numerical)?,
            });
        }
        Some(checks)
    } else {
        None
    };

    // Lüders steps that commute with the target cannot change its statistics.
    let target = &registry[&scenario.target];
    let baseline = outcome_distribution(&initial_density(&scenario)?, target).map_err(numerical)?;
    for (route, stats) in scenario
        .routes
        .iter()
        .zip(&comparison.final_observable_statistics)
    {
        let mut protected = route.rule == ProjectionRule::Luders;
        for step in &route.steps {
            protected &= commutes(&registry[step], target, COMMUTATION_TOL).map_err(numerical)?;
        }
        let drift = stats
            .iter()
            .zip(&baseline)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if protected && drift > STATE_TOL {
            violations.push(format!(
                "route {} changed the statistics of {} by {drift:e}",
                route.name, scenario.target
            ));
        }
    }

    Ok(RunReport {
        scenario: (&scenario).into(),
        rule: scenario.rule,
        tolerances: report::Tolerances {
            equality: scenario.tolerance,
            grouping: DEFAULT_GROUP_TOL,
            probe: PROBE_TOL,
        },
        target: comparison.target.clone(),
        target_eigenvalues: comparison.target_eigenvalues.clone(),
        routes,
        comparisons,
        probe,
        warnings,
        violations,
        duration: start.elapsed(),
    })
}

fn initial_density(s: &Scenario) -> Result<qroute_core::DensityMatrix, CliError> {
    s.initial_density()
        .map_err(|e| CliError::Numerical(e.to_string()))
}

/// Alphabetical listing of the builtin scenarios.
pub fn cmd_list() -> String {
    let width = BUILTINS.iter().map(|(n, _)| n.len()).max().unwrap_or(0);
    BUILTINS
        .iter()
        .map(|(name, desc)| format!("{name:<width$}  {desc}\n"))
        .collect()
}

/// Validates a scenario file, returning `"OK"` or every issue found.
pub fn cmd_validate(path: &Path) -> Result<String, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_scenario(&text)
        .map(|_| "OK".to_owned())
        .map_err(|e| CliError::Input(describe(&e)))
}

/// A builtin scenario as a scenario file.
pub fn cmd_export(name: &str) -> Result<String, CliError> {
    builtin(name)
        .map(|s| qroute_core::scenarios::serialize_scenario(&s))
        .map_err(|e| CliError::Input(e.to_string()))
}
