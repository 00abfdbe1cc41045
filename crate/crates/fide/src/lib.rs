//! Command-line front end for `fide-core`: reads problem configurations,
//! solves, runs convergence sweeps and exports operational matrices.
//!
//! Exit codes: 0 on success, 2 for configuration or usage errors, 3 when the
//! solver fails.

pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fide_core::solver::{
    builtin_example, convergence_study, l2_error, max_error, solve_fide, ExampleVariant, ProblemSpec, BUILTIN_IDS,
};
use fide_core::{CaputoOrder, OperationalMatrix, SolveOptions};

use config::{ProblemConfig, Sweep};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Solver(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Solver(_) => 3,
        }
    }
}

/// Problem set-up errors (bad expressions, N below n) are the caller's fault;
/// everything else comes from the numerics.
fn solver_error(e: fide_core::Error) -> CliError {
    match e {
        fide_core::Error::InvalidArgument(m) => CliError::Config(m),
        other => CliError::Solver(other.to_string()),
    }
}

#[derive(Debug, Parser)]
#[command(name = "fide", version, about = "Spectral tau solver for fractional integro-differential equations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one problem at a fixed truncation N.
    Solve {
        #[command(flatten)]
        source: Source,
        /// Truncation degree; overrides N from the config.
        #[arg(long = "N", value_name = "N")]
        n: Option<usize>,
        /// Write the solution JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the effective problem configuration here.
        #[arg(long = "emit-config", value_name = "PATH")]
        emit_config: Option<PathBuf>,
    },
    /// Error norms over a range of truncations against the exact solution.
    Convergence {
        #[command(flatten)]
        source: Source,
        /// from:to:step; overrides N_sweep from the config.
        #[arg(long = "N-sweep", value_name = "FROM:TO:STEP")]
        sweep: Option<String>,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Export the Caputo operational matrix in the shifted Legendre basis.
    Opmatrix {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long = "N", value_name = "N")]
        n: usize,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// List the built-in examples.
    Examples,
}

#[derive(Debug, Args)]
pub struct Source {
    #[command(flatten)]
    pub input: Input,
    /// Forcing of a built-in example: as published, or derived from its exact solution.
    #[arg(long, value_enum, default_value_t = Variant::Corrected)]
    pub variant: Variant,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Input {
    /// Problem configuration (JSON).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Built-in example id.
    #[arg(long)]
    pub example: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Printed,
    Corrected,
}

impl From<Variant> for ExampleVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Printed => ExampleVariant::Printed,
            Variant::Corrected => ExampleVariant::Corrected,
        }
    }
}

/// Parses `args` and runs the command; usage errors exit through clap with code 2.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn load_config(source: &Source) -> Result<ProblemConfig, CliError> {
    if let Some(path) = &source.input.config {
        return ProblemConfig::load(path);
    }
    let id = source.input.example.as_deref().expect("clap enforces one source");
    let example = builtin_example(id, source.variant.into()).map_err(|_| {
        CliError::Config(format!("unknown example {id:?}; available: {}", BUILTIN_IDS.join(", ")))
    })?;
    if let Some(note) = example.discrepancy {
        match source.variant {
            Variant::Corrected => eprintln!("warning: example {id} uses the corrected forcing: {note}"),
            Variant::Printed => eprintln!("warning: example {id} uses the printed forcing, which is inconsistent: {note}"),
        }
    }
    Ok(ProblemConfig::from_spec(&example.spec))
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Config(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Config(format!("cannot write to stdout: {e}"))),
    }
}

fn exact_of(spec: &ProblemSpec) -> Result<Option<fide_core::solver::RealFn>, CliError> {
    spec.exact_solution().map_err(solver_error)
}

/// Status lines go to stdout when the data goes to a file, to stderr otherwise.
fn report(to_stdout: bool, line: &str) {
    if to_stdout {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Solve { source, n, out, emit_config } => {
            let mut cfg = load_config(&source)?;
            let n = n.or(cfg.truncation).ok_or_else(|| {
                CliError::Config("no truncation given; pass --N or set N in the config".into())
            })?;
            if n < cfg.n {
                return Err(CliError::Config(format!("N = {n} is below the derivative order n = {}", cfg.n)));
            }
            if let Some(path) = &emit_config {
                let emitted = ProblemConfig { truncation: Some(n), sweep: None, ..cfg.clone() };
                write_output(Some(path), &emitted.to_json())?;
            }
            cfg.truncation = Some(n);
            let spec = cfg.to_spec();
            let problem = spec.build().map_err(solver_error)?;
            let solution = solve_fide(&problem, n).map_err(solver_error)?;
            write_output(out.as_deref(), &output::solution_json(&solution, &cfg.digest()))?;
            let to_stdout = out.is_some();
            report(to_stdout, &format!("solved {} at N = {n}, condition estimate {:.3e}", cfg.name, solution.condition_estimate()));
            if let Some(exact) = exact_of(&spec)? {
                report(
                    to_stdout,
                    &format!("L2 error {:.6e}, max error {:.6e}", l2_error(&solution, &*exact), max_error(&solution, &*exact)),
                );
            }
            Ok(())
        }
        Command::Convergence { source, sweep, csv } => {
            let cfg = load_config(&source)?;
            let sweep = match sweep {
                Some(text) => Sweep::parse(&text)?,
                None => cfg.sweep.ok_or_else(|| {
                    CliError::Config("no sweep given; pass --N-sweep or set N_sweep in the config".into())
                })?,
            };
            let ns = sweep.values();
            if ns[0] < cfg.n {
                return Err(CliError::Config(format!("N = {} is below the derivative order n = {}", ns[0], cfg.n)));
            }
            let spec = cfg.to_spec();
            let exact = exact_of(&spec)?.ok_or_else(|| {
                CliError::Config("no exact solution known; give mms_exact or exact in the config".into())
            })?;
            let problem = spec.build().map_err(solver_error)?;
            let report_data =
                convergence_study(&problem, &*exact, &ns, &SolveOptions::default()).map_err(solver_error)?;
            let failures: Vec<String> = report_data
                .entries
                .iter()
                .filter_map(|e| e.outcome.as_ref().err().map(|err| format!("N = {}: {err}", e.n)))
                .collect();
            if failures.len() == report_data.entries.len() {
                return Err(CliError::Solver(format!("every N failed: {}", failures.join("; "))));
            }
            write_output(csv.as_deref(), &output::convergence_csv(&report_data))?;
            let to_stdout = csv.is_some();
            for f in &failures {
                eprintln!("warning: {f}");
            }
            report(to_stdout, &format!("decay: {}", report_data.fitted_decay));
            Ok(())
        }
        Command::Opmatrix { alpha, n, csv } => {
            let order = CaputoOrder::new(alpha).map_err(|e| CliError::Config(e.to_string()))?;
            let m = OperationalMatrix::caputo(order, n);
            if !m.matrix().is_finite() {
                return Err(CliError::Solver(format!("operational matrix for alpha = {alpha}, N = {n} is not finite")));
            }
            write_output(csv.as_deref(), &output::matrix_csv(m.matrix()))
        }
        Command::Examples => {
            let mut text = String::new();
            for id in BUILTIN_IDS {
                let ex = builtin_example(id, ExampleVariant::Corrected).map_err(solver_error)?;
                let s = &ex.spec;
                text.push_str(&format!(
                    "{id}: n = {}, alpha = {}, kernel {}, exact {}\n",
                    s.n(),
                    s.alpha,
                    s.kernel,
                    s.exact.as_deref().unwrap_or("(manufactured)")
                ));
                if let Some(note) = ex.discrepancy {
                    text.push_str(&format!("    printed forcing differs: {note}\n"));
                }
            }
            write_output(None, &text)
        }
    }
}
