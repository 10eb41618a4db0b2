//! Subcommand grammar, dispatch, shared table plumbing, and the exit-code
//! contract:
//!
//! | code | meaning                    |
//! |------|----------------------------|
//! | 0    | success, report emitted    |
//! | 1    | any other failure          |
//! | 2    | usage error                |
//! | 3    | malformed FEN              |
//! | 4    | missing or corrupt table   |
//! | 5    | unsupported material set   |

mod dynamics;
mod evaluate;
mod tb;
mod traj;

use std::cell::RefCell;
use std::fs;
use std::path::{Path, PathBuf};

use chessdyn_core::dynamics::DynamicsError;
use chessdyn_core::evaluator::EvalError;
use chessdyn_core::kernel::{FenError, GameState};
use chessdyn_core::solver::{
    build_tablebase, load_table, MaterialSig, ProbeSource, SolverError, StrategyEntry,
    StrategyTable, TableStore, SUPPORTED_MATERIALS,
};
use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::config::{load_config, CliConfig, ConfigError};
use crate::report::{Report, ReportEnvelope, ReportFormat};

#[derive(Parser)]
#[command(
    name = "chessdyn",
    version,
    about = "Endgame tablebases and the dynamics of exact chess strategies"
)]
pub struct Cli {
    /// Key=value config file supplying flag defaults.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Build and probe strategy tables.
    #[command(subcommand)]
    Tb(tb::TbCommand),
    /// Run trajectories of the exact strategy.
    #[command(subcommand)]
    Traj(traj::TrajCommand),
    /// Measure divergence and nonlinearity of the control map.
    #[command(subcommand, name = "dyn")]
    Dyn(dynamics::DynCommand),
    /// Audit, fit, and stress static evaluators.
    #[command(subcommand)]
    Eval(evaluate::EvalCommand),
}

/// Errors on their way to an exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Usage(#[from] clap::Error),
    #[error("{message}")]
    Domain { code: u8, message: String },
}

impl CliError {
    pub fn other(message: impl ToString) -> CliError {
        CliError::Domain {
            code: 1,
            message: message.to_string(),
        }
    }

    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain { code, .. } => *code,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(err: ConfigError) -> CliError {
        CliError::other(err)
    }
}

impl From<FenError> for CliError {
    fn from(err: FenError) -> CliError {
        CliError::Domain {
            code: 3,
            message: err.to_string(),
        }
    }
}

impl From<SolverError> for CliError {
    fn from(err: SolverError) -> CliError {
        let code = match &err {
            SolverError::UnsupportedMaterial(_) => 5,
            SolverError::Io(_)
            | SolverError::Parse(_)
            | SolverError::MaterialMismatch { .. }
            | SolverError::Uncovered(_) => 4,
            SolverError::InvalidState(_) | SolverError::NoMove => 1,
        };
        CliError::Domain {
            code,
            message: err.to_string(),
        }
    }
}

impl From<DynamicsError> for CliError {
    fn from(err: DynamicsError) -> CliError {
        match err {
            DynamicsError::Solver(inner) => inner.into(),
            other => CliError::other(other),
        }
    }
}

impl From<EvalError> for CliError {
    fn from(err: EvalError) -> CliError {
        match err {
            EvalError::Solver(inner) => inner.into(),
            other => CliError::other(other),
        }
    }
}

/// Parses `args` and runs the selected subcommand.
pub fn run(args: &[String]) -> Result<(), CliError> {
    let cli = Cli::try_parse_from(args)?;
    let config = load_config(cli.config.as_deref())?;
    let ctx = Context {
        config,
        echo: command_echo(args),
    };
    match cli.command {
        Command::Tb(command) => command.run(&ctx),
        Command::Traj(command) => command.run(&ctx),
        Command::Dyn(command) => command.run(&ctx),
        Command::Eval(command) => command.run(&ctx),
    }
}

/// Everything a subcommand needs besides its own flags.
pub struct Context {
    pub config: CliConfig,
    pub echo: String,
}

impl Context {
    /// Loads every `--tb` file, consulting the configured table directory
    /// for relative paths that do not resolve directly.
    fn load_store(&self, paths: &[PathBuf]) -> Result<TableStore, CliError> {
        let mut store = TableStore::new();
        for path in paths {
            let resolved = self.resolve_table_path(path);
            let table = load_table(&resolved).map_err(|err| {
                let inner = CliError::from(err);
                CliError::Domain {
                    code: inner.code(),
                    message: format!("table {}: {}", resolved.display(), inner),
                }
            })?;
            store.push(table);
        }
        Ok(store)
    }

    fn resolve_table_path(&self, path: &Path) -> PathBuf {
        if path.is_relative() && !path.exists() {
            if let Some(dir) = &self.config.tablebase_dir {
                let candidate = dir.join(path);
                if candidate.exists() {
                    return candidate;
                }
            }
        }
        path.to_path_buf()
    }

    fn format(&self, flag: Option<ReportFormat>) -> ReportFormat {
        flag.unwrap_or(self.config.report_format)
    }

    fn seed(&self, flag: Option<u64>) -> u64 {
        flag.unwrap_or(self.config.default_seed)
    }

    fn ply_cap(&self, flag: Option<u32>) -> u32 {
        flag.unwrap_or(self.config.ply_cap).max(1)
    }

    /// Renders the envelope, prints it to stdout, and mirrors it to
    /// `out` when given.
    fn emit<P: Report>(
        &self,
        payload: P,
        seed: u64,
        format: ReportFormat,
        out: Option<&Path>,
    ) -> Result<(), CliError> {
        let envelope = ReportEnvelope::new(self.echo.clone(), seed, payload);
        let text = envelope.render(format);
        if let Some(path) = out {
            fs::write(path, &text)
                .map_err(|err| CliError::other(format!("write {}: {err}", path.display())))?;
        }
        print!("{text}");
        Ok(())
    }
}

fn command_echo(args: &[String]) -> String {
    let mut parts = vec!["chessdyn".to_string()];
    parts.extend(args.iter().skip(1).cloned());
    parts.join(" ")
}

/// A probe source that starts from the loaded tables and quietly solves
/// any further supported material a probe wanders into. Solved tables
/// live only in memory; input files are never touched.
pub struct LazySolvingSource<'a> {
    base: &'a TableStore,
    extra: RefCell<Vec<StrategyTable>>,
}

impl<'a> LazySolvingSource<'a> {
    pub fn new(base: &'a TableStore) -> LazySolvingSource<'a> {
        LazySolvingSource {
            base,
            extra: RefCell::new(Vec::new()),
        }
    }
}

impl ProbeSource for LazySolvingSource<'_> {
    fn probe(&self, state: &GameState) -> Result<StrategyEntry, SolverError> {
        if self.base.covers(state) {
            return self.base.probe(state);
        }
        {
            let extra = self.extra.borrow();
            for table in extra.iter() {
                if table.covers(state) {
                    return table.probe(state);
                }
            }
        }
        state.validate().map_err(SolverError::InvalidState)?;
        let id = MaterialSig::of_state(state).id();
        if !SUPPORTED_MATERIALS.contains(&id.as_str()) {
            return Err(SolverError::UnsupportedMaterial(id));
        }
        let table = build_tablebase(&id)?;
        let entry = table.probe(state);
        self.extra.borrow_mut().push(table);
        entry
    }
}
