use std::path::PathBuf;

use chessdyn_core::kernel::parse_fen;
use chessdyn_core::solver::{build_tablebase, save_table, MaterialSig, ProbeSource, Wdl};
use clap::{Args, Subcommand};
use serde::Serialize;

use crate::commands::{CliError, Context};
use crate::report::{scalar_rows, Report, ReportFormat};

#[derive(Subcommand)]
pub enum TbCommand {
    /// Solve a material set and write its table to a file.
    Build(BuildArgs),
    /// Look one position up in the given tables.
    Probe(ProbeArgs),
}

#[derive(Args)]
pub struct BuildArgs {
    /// Material set to solve, e.g. KQvK.
    #[arg(long)]
    material: String,
    /// Destination table file.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    format: Option<ReportFormat>,
}

#[derive(Args)]
pub struct ProbeArgs {
    /// Table file; repeat the flag to consult several.
    #[arg(long = "tb", required = true)]
    tb: Vec<PathBuf>,
    /// Position to look up.
    #[arg(long)]
    fen: String,
    #[arg(long)]
    format: Option<ReportFormat>,
    /// Also write the report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl TbCommand {
    pub fn run(self, ctx: &Context) -> Result<(), CliError> {
        match self {
            TbCommand::Build(args) => build(args, ctx),
            TbCommand::Probe(args) => probe(args, ctx),
        }
    }
}

#[derive(Serialize)]
struct BuildPayload {
    material: String,
    out: String,
    slots: u64,
    index_scheme: String,
}

impl Report for BuildPayload {
    fn notes(&self) -> Vec<(String, String)> {
        Vec::new()
    }

    fn header(&self) -> Vec<String> {
        scalar_rows(&[]).0
    }

    fn rows(&self) -> Vec<Vec<String>> {
        scalar_rows(&[
            ("material", self.material.clone()),
            ("out", self.out.clone()),
            ("slots", self.slots.to_string()),
            ("index_scheme", self.index_scheme.clone()),
        ])
        .1
    }
}

fn build(args: BuildArgs, ctx: &Context) -> Result<(), CliError> {
    let table = build_tablebase(&args.material)?;
    save_table(&table, &args.out).map_err(|err| {
        CliError::other(format!("write {}: {err}", args.out.display()))
    })?;
    let payload = BuildPayload {
        material: table.material_id(),
        out: args.out.display().to_string(),
        slots: table.slot_count(),
        index_scheme: table.index_scheme(),
    };
    ctx.emit(payload, 0, ctx.format(args.format), None)
}

#[derive(Serialize)]
struct ProbePayload {
    fen: String,
    material: String,
    wdl: Wdl,
    dtm_plies: Option<u16>,
    best_move: Option<String>,
    terminal: bool,
}

impl Report for ProbePayload {
    fn notes(&self) -> Vec<(String, String)> {
        Vec::new()
    }

    fn header(&self) -> Vec<String> {
        scalar_rows(&[]).0
    }

    fn rows(&self) -> Vec<Vec<String>> {
        scalar_rows(&[
            ("fen", self.fen.clone()),
            ("material", self.material.clone()),
            ("wdl", format!("{:?}", self.wdl)),
            (
                "dtm_plies",
                self.dtm_plies.map(|d| d.to_string()).unwrap_or_default(),
            ),
            ("best_move", self.best_move.clone().unwrap_or_default()),
            ("terminal", self.terminal.to_string()),
        ])
        .1
    }
}

fn probe(args: ProbeArgs, ctx: &Context) -> Result<(), CliError> {
    let state = parse_fen(&args.fen)?;
    let store = ctx.load_store(&args.tb)?;
    let entry = store.probe(&state)?;
    let payload = ProbePayload {
        fen: state.to_fen(),
        material: MaterialSig::of_state(&state).id(),
        wdl: entry.wdl,
        dtm_plies: entry.dtm_plies,
        best_move: entry.best_move.map(|mv| mv.to_string()),
        terminal: entry.terminal,
    };
    ctx.emit(payload, 0, ctx.format(args.format), args.out.as_deref())
}
