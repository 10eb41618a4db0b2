use std::path::PathBuf;

use chessdyn_core::dynamics::{run_trajectory, TrajectoryEnd};
use chessdyn_core::kernel::parse_fen;
use clap::{Args, Subcommand};
use serde::Serialize;

use crate::commands::{CliError, Context, LazySolvingSource};
use crate::report::{Report, ReportFormat};

#[derive(Subcommand)]
pub enum TrajCommand {
    /// Play the exact strategy forward from a position.
    Run(RunArgs),
}

#[derive(Args)]
pub struct RunArgs {
    /// Table file; repeat the flag to consult several.
    #[arg(long = "tb", required = true)]
    tb: Vec<PathBuf>,
    /// Start position.
    #[arg(long)]
    fen: String,
    /// Stop after this many plies if nothing else ends the run.
    #[arg(long)]
    ply_cap: Option<u32>,
    #[arg(long)]
    format: Option<ReportFormat>,
    /// Also write the report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl TrajCommand {
    pub fn run(self, ctx: &Context) -> Result<(), CliError> {
        match self {
            TrajCommand::Run(args) => run(args, ctx),
        }
    }
}

#[derive(Serialize)]
struct StepRow {
    ply: u32,
    side: String,
    mv: String,
}

#[derive(Serialize)]
struct TrajPayload {
    fen: String,
    ply_cap: u32,
    plies: u64,
    terminal: TrajectoryEnd,
    final_fen: String,
    steps: Vec<StepRow>,
}

impl Report for TrajPayload {
    fn notes(&self) -> Vec<(String, String)> {
        vec![
            ("fen".to_string(), self.fen.clone()),
            ("ply_cap".to_string(), self.ply_cap.to_string()),
            ("plies".to_string(), self.plies.to_string()),
            ("terminal".to_string(), self.terminal.to_string()),
            ("final_fen".to_string(), self.final_fen.clone()),
        ]
    }

    fn header(&self) -> Vec<String> {
        ["ply", "side", "move"].map(String::from).to_vec()
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.steps
            .iter()
            .map(|step| vec![step.ply.to_string(), step.side.clone(), step.mv.clone()])
            .collect()
    }
}

fn run(args: RunArgs, ctx: &Context) -> Result<(), CliError> {
    let state = parse_fen(&args.fen)?;
    let store = ctx.load_store(&args.tb)?;
    let source = LazySolvingSource::new(&store);
    let ply_cap = ctx.ply_cap(args.ply_cap);
    let trajectory = run_trajectory(&source, &state, ply_cap)?;
    let steps = trajectory
        .steps
        .iter()
        .enumerate()
        .map(|(i, step)| StepRow {
            ply: i as u32 + 1,
            side: step.side.to_string(),
            mv: step.mv.to_string(),
        })
        .collect();
    let payload = TrajPayload {
        fen: state.to_fen(),
        ply_cap,
        plies: trajectory.steps.len() as u64,
        terminal: trajectory.terminal,
        final_fen: trajectory.final_state().to_fen(),
        steps,
    };
    ctx.emit(payload, 0, ctx.format(args.format), args.out.as_deref())
}
