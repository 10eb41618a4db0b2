//! Static evaluators and depth-limited search, measured against exact
//! strategy tables.
//!
//! A game program splits into a look-ahead part and a static evaluator
//! that scores leaf states with no further calculation. This module
//! provides a few linear evaluator families plus an exact probing one,
//! a negamax search over them, an exhaustive audit of evaluator WDL
//! predictions against a solved table, least-squares weight fitting, and
//! a depth-sweep experiment that measures how often a shallow search
//! picks a move the tablebase refutes.

mod audit;
mod fit;
mod horizon;
mod search;
mod spec;

use thiserror::Error;

use crate::kernel::KernelError;
use crate::solver::SolverError;

pub use audit::{audit_evaluator, Counterexample, EvalAuditReport};
pub use fit::{fit_evaluator, fit_labeled, FitReport};
pub use horizon::{horizon_experiment, HorizonReport, HorizonRow};
pub use search::{search, MATE_SCORE};
pub use spec::{classify, feature_vector, EvalFamily, EvaluatorSpec, StaticEval, FEATURE_COUNT};

/// Failures of evaluator construction, search, and the experiments.
#[derive(Debug, Error)]
pub enum EvalError {
    /// The family has a fixed or bounded parameter count.
    #[error("the {family} family expects {expected} parameters, got {got}")]
    ParameterCount {
        family: EvalFamily,
        expected: &'static str,
        got: usize,
    },
    /// More parameters than the declared budget.
    #[error("parameter count {count} exceeds the budget {budget}")]
    OverBudget { count: usize, budget: usize },
    /// The probing evaluator was built without a table.
    #[error("the oracle evaluator needs a tablebase to probe")]
    MissingTable,
    /// Fitting needs the budget to cover the family's features.
    #[error("budget {budget} is below the {minimum} features the {family} family needs")]
    BudgetTooSmall {
        family: EvalFamily,
        minimum: usize,
        budget: usize,
    },
    /// The oracle family has no weights to fit.
    #[error("the oracle family has no parameters to fit")]
    UnfittableFamily,
    /// Search needs at least one ply of look-ahead.
    #[error("search needs a depth of at least 1")]
    ZeroDepth,
    /// The searched state has no legal moves.
    #[error("the game is already over: no move to search")]
    TerminalSearch,
    /// No decided, winner-to-move states exist to sample.
    #[error("the table has no winning states to sample")]
    NoWinningStates,
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}
