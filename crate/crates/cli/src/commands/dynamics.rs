use std::path::PathBuf;

use chessdyn_core::dynamics::{
    divergence, divergence_campaign, nonlinearity_test, perturb, DynamicsError, PerturbationMode,
};
use chessdyn_core::embedding::Metric;
use chessdyn_core::kernel::parse_fen;
use chessdyn_core::solver::ProbeSource;
use chessdyn_core::Scalar;
use clap::{Args, Subcommand};
use serde::Serialize;

use crate::commands::{CliError, Context, LazySolvingSource};
use crate::report::{scalar_rows, Report, ReportFormat};

#[derive(Subcommand)]
pub enum DynCommand {
    /// Compare the trajectory of a position against a one-change
    /// perturbation of it.
    Diverge(DivergeArgs),
    /// Aggregate divergence statistics over many sampled perturbations.
    Campaign(CampaignArgs),
    /// Measure how far the control map is from affine.
    Nonlinearity(NonlinearityArgs),
}

#[derive(Args)]
pub struct DivergeArgs {
    /// Table file; repeat the flag to consult several.
    #[arg(long = "tb", required = true)]
    tb: Vec<PathBuf>,
    /// Position to perturb.
    #[arg(long)]
    fen: String,
    /// Perturbation family: retype, relocate, or flagtoggle.
    #[arg(long)]
    mode: PerturbationMode,
    #[arg(long)]
    metric: Option<Metric>,
    #[arg(long)]
    ply_cap: Option<u32>,
    #[arg(long)]
    format: Option<ReportFormat>,
    /// Also write the report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
pub struct CampaignArgs {
    /// Table file; the first one is sampled, all are probed.
    #[arg(long = "tb", required = true)]
    tb: Vec<PathBuf>,
    /// Perturbation family: retype, relocate, or flagtoggle.
    #[arg(long)]
    mode: PerturbationMode,
    /// Number of (state, perturbation) pairs to measure.
    #[arg(long, default_value_t = 100)]
    samples: u64,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    metric: Option<Metric>,
    #[arg(long)]
    ply_cap: Option<u32>,
    #[arg(long)]
    format: Option<ReportFormat>,
    /// Also write the report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
pub struct NonlinearityArgs {
    /// Table file; the first one is sampled, all are probed.
    #[arg(long = "tb", required = true)]
    tb: Vec<PathBuf>,
    /// Number of sampled trajectories to harvest steps from.
    #[arg(long, default_value_t = 200)]
    samples: u64,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    format: Option<ReportFormat>,
    /// Also write the report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl DynCommand {
    pub fn run(self, ctx: &Context) -> Result<(), CliError> {
        match self {
            DynCommand::Diverge(args) => diverge(args, ctx),
            DynCommand::Campaign(args) => campaign(args, ctx),
            DynCommand::Nonlinearity(args) => nonlinearity(args, ctx),
        }
    }
}

#[derive(Serialize)]
struct DivergePayload {
    fen: String,
    perturbed_fen: String,
    mode: PerturbationMode,
    metric: Metric,
    ply_cap: u32,
    d0: Scalar,
    series: Vec<Scalar>,
    first_separation_ply: Option<u32>,
    outcome_flip: bool,
    move_path_flip: bool,
    effective_exponent: Option<Scalar>,
}

impl Report for DivergePayload {
    fn notes(&self) -> Vec<(String, String)> {
        vec![
            ("fen".to_string(), self.fen.clone()),
            ("perturbed_fen".to_string(), self.perturbed_fen.clone()),
            ("mode".to_string(), self.mode.to_string()),
            ("metric".to_string(), self.metric.to_string()),
            ("ply_cap".to_string(), self.ply_cap.to_string()),
            (
                "first_separation_ply".to_string(),
                option_text(self.first_separation_ply),
            ),
            ("outcome_flip".to_string(), self.outcome_flip.to_string()),
            (
                "move_path_flip".to_string(),
                self.move_path_flip.to_string(),
            ),
            (
                "effective_exponent".to_string(),
                option_text(self.effective_exponent),
            ),
        ]
    }

    fn header(&self) -> Vec<String> {
        ["n", "d_n"].map(String::from).to_vec()
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let mut rows = vec![vec!["0".to_string(), self.d0.to_string()]];
        for (i, d) in self.series.iter().enumerate() {
            rows.push(vec![(i + 1).to_string(), d.to_string()]);
        }
        rows
    }
}

fn diverge(args: DivergeArgs, ctx: &Context) -> Result<(), CliError> {
    let state = parse_fen(&args.fen)?;
    let store = ctx.load_store(&args.tb)?;
    let source = LazySolvingSource::new(&store);
    let perturbed = perturb(&state, args.mode)
        .into_iter()
        .find(|candidate| source.covers(candidate))
        .ok_or(DynamicsError::NoPerturbations)?;
    let metric = args.metric.unwrap_or(ctx.config.default_metric);
    let ply_cap = ctx.ply_cap(args.ply_cap);
    let report = divergence(&source, &state, &perturbed, ply_cap, metric)?;
    let payload = DivergePayload {
        fen: state.to_fen(),
        perturbed_fen: perturbed.to_fen(),
        mode: args.mode,
        metric,
        ply_cap,
        d0: report.d0,
        series: report.series,
        first_separation_ply: report.first_separation_ply,
        outcome_flip: report.outcome_flip,
        move_path_flip: report.move_path_flip,
        effective_exponent: report.effective_exponent,
    };
    ctx.emit(payload, 0, ctx.format(args.format), args.out.as_deref())
}

#[derive(Serialize)]
struct CampaignPayload {
    mode: PerturbationMode,
    metric: Metric,
    ply_cap: u32,
    seed: u64,
    pairs: u64,
    outcome_flip_fraction: Scalar,
    move_path_flip_fraction: Scalar,
    exponent_mean: Option<Scalar>,
    exponent_max: Option<Scalar>,
    no_separation_count: u64,
    first_separation_histogram: Vec<(u32, u64)>,
}

impl Report for CampaignPayload {
    fn notes(&self) -> Vec<(String, String)> {
        vec![
            ("mode".to_string(), self.mode.to_string()),
            ("metric".to_string(), self.metric.to_string()),
            ("ply_cap".to_string(), self.ply_cap.to_string()),
            ("pairs".to_string(), self.pairs.to_string()),
            (
                "outcome_flip_fraction".to_string(),
                self.outcome_flip_fraction.to_string(),
            ),
            (
                "move_path_flip_fraction".to_string(),
                self.move_path_flip_fraction.to_string(),
            ),
            ("exponent_mean".to_string(), option_text(self.exponent_mean)),
            ("exponent_max".to_string(), option_text(self.exponent_max)),
            (
                "no_separation_count".to_string(),
                self.no_separation_count.to_string(),
            ),
        ]
    }

    fn header(&self) -> Vec<String> {
        ["first_separation_ply", "pairs"].map(String::from).to_vec()
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.first_separation_histogram
            .iter()
            .map(|(ply, count)| vec![ply.to_string(), count.to_string()])
            .collect()
    }
}

fn campaign(args: CampaignArgs, ctx: &Context) -> Result<(), CliError> {
    let store = ctx.load_store(&args.tb)?;
    let source = LazySolvingSource::new(&store);
    let table = &store.tables()[0];
    let metric = args.metric.unwrap_or(ctx.config.default_metric);
    let ply_cap = ctx.ply_cap(args.ply_cap);
    let seed = ctx.seed(args.seed);
    let report = divergence_campaign(
        table,
        &source,
        args.mode,
        args.samples,
        ply_cap,
        metric,
        seed,
    )?;
    let payload = CampaignPayload {
        mode: args.mode,
        metric,
        ply_cap,
        seed: report.seed,
        pairs: report.pairs,
        outcome_flip_fraction: report.outcome_flip_fraction,
        move_path_flip_fraction: report.move_path_flip_fraction,
        exponent_mean: report.exponent_mean,
        exponent_max: report.exponent_max,
        no_separation_count: report.no_separation_count,
        first_separation_histogram: report.first_separation_histogram,
    };
    ctx.emit(payload, seed, ctx.format(args.format), args.out.as_deref())
}

#[derive(Serialize)]
struct NonlinearityPayload {
    seed: u64,
    samples: u64,
    relative_residual: Scalar,
}

impl Report for NonlinearityPayload {
    fn notes(&self) -> Vec<(String, String)> {
        Vec::new()
    }

    fn header(&self) -> Vec<String> {
        scalar_rows(&[]).0
    }

    fn rows(&self) -> Vec<Vec<String>> {
        scalar_rows(&[
            ("seed", self.seed.to_string()),
            ("samples", self.samples.to_string()),
            ("relative_residual", self.relative_residual.to_string()),
        ])
        .1
    }
}

fn nonlinearity(args: NonlinearityArgs, ctx: &Context) -> Result<(), CliError> {
    let store = ctx.load_store(&args.tb)?;
    let source = LazySolvingSource::new(&store);
    let table = &store.tables()[0];
    let seed = ctx.seed(args.seed);
    let report = nonlinearity_test(table, &source, args.samples, seed)?;
    let payload = NonlinearityPayload {
        seed: report.seed,
        samples: report.samples,
        relative_residual: report.relative_residual,
    };
    ctx.emit(payload, seed, ctx.format(args.format), args.out.as_deref())
}

fn option_text<T: ToString>(value: Option<T>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}
