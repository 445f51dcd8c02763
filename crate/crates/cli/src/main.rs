use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qroute_cli::{
    cmd_export, cmd_list, cmd_run, cmd_validate, render_json, render_text, CliError, RunOptions,
};
use qroute_core::ProjectionRule;

/// Compare measurement routes on small quantum systems.
#[derive(Debug, Parser)]
#[command(name = "qroute", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the builtin scenarios.
    List,
    /// Run a scenario and compare its routes.
    Run(RunArgs),
    /// Check a scenario file without running it.
    Validate { file: PathBuf },
    /// Print a builtin scenario as a scenario file.
    Export { name: String },
}

#[derive(Debug, clap::Args)]
struct RunArgs {
    /// Builtin scenario name or path to a scenario file.
    scenario: String,
    /// Override the projection rule of the scenario and all of its routes.
    #[arg(long, value_enum)]
    rule: Option<RuleArg>,
    /// Initial pure state as comma-separated amplitudes, e.g. "0.6,0,0.8i".
    /// Normalized before use.
    #[arg(long, allow_hyphen_values = true)]
    state: Option<String>,
    /// Trace-distance threshold for the EQUAL verdict.
    #[arg(long)]
    tol: Option<f64>,
    /// Also run the probe model and cross-check it against the routes.
    #[arg(long)]
    probe: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RuleArg {
    Luders,
    VonNeumann,
}

impl From<RuleArg> for ProjectionRule {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::Luders => ProjectionRule::Luders,
            RuleArg::VonNeumann => ProjectionRule::VonNeumann,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::List => emit(&cmd_list(), None),
        Command::Validate { file } => emit(&(cmd_validate(&file)? + "\n"), None),
        Command::Export { name } => emit(&cmd_export(&name)?, None),
        Command::Run(args) => {
            let report = cmd_run(&RunOptions {
                scenario: args.scenario,
                rule: args.rule.map(Into::into),
                state: args.state,
                tolerance: args.tol,
                probe: args.probe,
            })?;
            let text = match args.format {
                Format::Text => render_text(&report),
                Format::Json => render_json(&report),
            };
            emit(&text, args.out.as_ref())?;
            if report.violations.is_empty() {
                Ok(())
            } else {
                Err(CliError::Numerical(report.violations.join("\n")))
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
