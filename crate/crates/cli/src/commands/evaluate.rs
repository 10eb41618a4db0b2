use std::fs;
use std::path::PathBuf;

use chessdyn_core::evaluator::{
    audit_evaluator, fit_evaluator, horizon_experiment, Counterexample, EvalFamily,
    EvaluatorSpec, HorizonRow, StaticEval,
};
use chessdyn_core::solver::StrategyTable;
use chessdyn_core::Scalar;
use clap::{Args, Subcommand};
use serde::Serialize;

use crate::commands::{CliError, Context};
use crate::report::{scalar_rows, Report, ReportFormat};

#[derive(Subcommand)]
pub enum EvalCommand {
    /// Grade an evaluator's win/draw/loss calls against a solved table.
    Audit(AuditArgs),
    /// Fit linear evaluator weights to a solved table.
    Fit(FitArgs),
    /// Sweep search depth and count thrown-away wins.
    Horizon(HorizonArgs),
}

#[derive(Args)]
pub struct AuditArgs {
    /// Table file holding the audited states.
    #[arg(long = "tb", required = true)]
    tb: Vec<PathBuf>,
    /// Evaluator family: material, material-psq, fitted, or oracle.
    #[arg(long, conflicts_with = "spec")]
    family: Option<EvalFamily>,
    /// JSON evaluator description, e.g. one written by eval fit.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Scores above this count as a win call, below the negation a loss.
    #[arg(long, default_value_t = 0.5)]
    threshold: Scalar,
    #[arg(long)]
    format: Option<ReportFormat>,
    /// Also write the report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
pub struct FitArgs {
    /// Table file holding the training states.
    #[arg(long = "tb", required = true)]
    tb: Vec<PathBuf>,
    /// Evaluator family: material, material-psq, or fitted.
    #[arg(long)]
    family: EvalFamily,
    /// Largest parameter count the fit may use.
    #[arg(long)]
    budget: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Write the fitted evaluator description to this JSON file.
    #[arg(long)]
    spec_out: Option<PathBuf>,
    #[arg(long)]
    format: Option<ReportFormat>,
    /// Also write the report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
pub struct HorizonArgs {
    /// Table file holding the sampled states.
    #[arg(long = "tb", required = true)]
    tb: Vec<PathBuf>,
    /// Evaluator family: material, material-psq, fitted, or oracle.
    #[arg(long, conflicts_with = "spec")]
    family: Option<EvalFamily>,
    /// JSON evaluator description, e.g. one written by eval fit.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Shallowest search depth in the sweep.
    #[arg(long, default_value_t = 1)]
    depth_min: u32,
    /// Deepest search depth in the sweep.
    #[arg(long, default_value_t = 4)]
    depth_max: u32,
    /// Number of winning states to sample.
    #[arg(long, default_value_t = 50)]
    samples: u64,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    format: Option<ReportFormat>,
    /// Also write the report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl EvalCommand {
    pub fn run(self, ctx: &Context) -> Result<(), CliError> {
        match self {
            EvalCommand::Audit(args) => audit(args, ctx),
            EvalCommand::Fit(args) => fit(args, ctx),
            EvalCommand::Horizon(args) => horizon(args, ctx),
        }
    }
}

fn resolve_spec(
    family: Option<EvalFamily>,
    spec_path: Option<&PathBuf>,
) -> Result<EvaluatorSpec, CliError> {
    if let Some(path) = spec_path {
        let text = fs::read_to_string(path)
            .map_err(|err| CliError::other(format!("spec {}: {err}", path.display())))?;
        return serde_json::from_str(&text)
            .map_err(|err| CliError::other(format!("spec {}: {err}", path.display())));
    }
    match family.unwrap_or(EvalFamily::MaterialOnly) {
        EvalFamily::MaterialOnly => Ok(EvaluatorSpec::material_only()),
        EvalFamily::MaterialPlusPieceSquare => Ok(EvaluatorSpec::material_plus_piece_square()),
        EvalFamily::TablebaseOracle => Ok(EvaluatorSpec::tablebase_oracle()),
        EvalFamily::FittedLinear => Err(CliError::other(
            "the fitted family has no canonical weights: pass --spec with a fitted description",
        )),
    }
}

fn subject_table<'a>(store: &'a chessdyn_core::solver::TableStore) -> &'a StrategyTable {
    &store.tables()[0]
}

#[derive(Serialize)]
struct AuditPayload {
    family: EvalFamily,
    threshold: Scalar,
    states_examined: u64,
    wdl_misclassified: u64,
    misclassification_rate: Scalar,
    counterexamples: Vec<Counterexample>,
}

impl Report for AuditPayload {
    fn notes(&self) -> Vec<(String, String)> {
        vec![
            ("family".to_string(), self.family.to_string()),
            ("threshold".to_string(), self.threshold.to_string()),
            (
                "states_examined".to_string(),
                self.states_examined.to_string(),
            ),
            (
                "wdl_misclassified".to_string(),
                self.wdl_misclassified.to_string(),
            ),
            (
                "misclassification_rate".to_string(),
                self.misclassification_rate.to_string(),
            ),
        ]
    }

    fn header(&self) -> Vec<String> {
        ["fen", "predicted", "truth"].map(String::from).to_vec()
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.counterexamples
            .iter()
            .map(|c| {
                vec![
                    c.fen.clone(),
                    format!("{:?}", c.predicted),
                    format!("{:?}", c.truth),
                ]
            })
            .collect()
    }
}

fn audit(args: AuditArgs, ctx: &Context) -> Result<(), CliError> {
    let store = ctx.load_store(&args.tb)?;
    let table = subject_table(&store);
    let spec = resolve_spec(args.family, args.spec.as_ref())?;
    let eval = StaticEval::new(&spec, Some(table))?;
    let report = audit_evaluator(table, &eval, args.threshold)?;
    let payload = AuditPayload {
        family: spec.family,
        threshold: args.threshold,
        states_examined: report.states_examined,
        wdl_misclassified: report.wdl_misclassified,
        misclassification_rate: report.misclassification_rate,
        counterexamples: report.counterexamples,
    };
    ctx.emit(payload, 0, ctx.format(args.format), args.out.as_deref())
}

#[derive(Serialize)]
struct FitPayload {
    family: EvalFamily,
    parameter_budget: usize,
    seed: u64,
    states_fitted: u64,
    misclassification_rate: Scalar,
    spec: EvaluatorSpec,
}

impl Report for FitPayload {
    fn notes(&self) -> Vec<(String, String)> {
        Vec::new()
    }

    fn header(&self) -> Vec<String> {
        scalar_rows(&[]).0
    }

    fn rows(&self) -> Vec<Vec<String>> {
        scalar_rows(&[
            ("family", self.family.to_string()),
            ("parameter_budget", self.parameter_budget.to_string()),
            ("seed", self.seed.to_string()),
            ("states_fitted", self.states_fitted.to_string()),
            (
                "misclassification_rate",
                self.misclassification_rate.to_string(),
            ),
            ("parameters", self.spec.parameters.len().to_string()),
        ])
        .1
    }
}

fn fit(args: FitArgs, ctx: &Context) -> Result<(), CliError> {
    let store = ctx.load_store(&args.tb)?;
    let table = subject_table(&store);
    let seed = ctx.seed(args.seed);
    let (spec, report) = fit_evaluator(table, args.family, args.budget, seed)?;
    if let Some(path) = &args.spec_out {
        let mut text = serde_json::to_string_pretty(&spec).expect("specs are plain data");
        text.push('\n');
        fs::write(path, text)
            .map_err(|err| CliError::other(format!("write {}: {err}", path.display())))?;
    }
    let payload = FitPayload {
        family: args.family,
        parameter_budget: args.budget,
        seed: report.seed,
        states_fitted: report.states_fitted,
        misclassification_rate: report.misclassification_rate,
        spec,
    };
    ctx.emit(payload, seed, ctx.format(args.format), args.out.as_deref())
}

#[derive(Serialize)]
struct HorizonPayload {
    family: EvalFamily,
    samples_requested: u64,
    seed: u64,
    rows: Vec<HorizonRow>,
}

impl Report for HorizonPayload {
    fn notes(&self) -> Vec<(String, String)> {
        vec![
            ("family".to_string(), self.family.to_string()),
            (
                "samples_requested".to_string(),
                self.samples_requested.to_string(),
            ),
        ]
    }

    fn header(&self) -> Vec<String> {
        ["depth", "blunder_rate", "samples"]
            .map(String::from)
            .to_vec()
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|row| {
                vec![
                    row.depth.to_string(),
                    row.blunder_rate.to_string(),
                    row.samples.to_string(),
                ]
            })
            .collect()
    }
}

fn horizon(args: HorizonArgs, ctx: &Context) -> Result<(), CliError> {
    let store = ctx.load_store(&args.tb)?;
    let table = subject_table(&store);
    let spec = resolve_spec(args.family, args.spec.as_ref())?;
    let eval = StaticEval::new(&spec, Some(table))?;
    let seed = ctx.seed(args.seed);
    let report = horizon_experiment(
        table,
        &eval,
        args.depth_min..=args.depth_max,
        args.samples,
        seed,
    )?;
    let payload = HorizonPayload {
        family: spec.family,
        samples_requested: args.samples,
        seed: report.seed,
        rows: report.rows,
    };
    ctx.emit(payload, seed, ctx.format(args.format), args.out.as_deref())
}
