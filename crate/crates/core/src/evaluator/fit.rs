use serde::Serialize;

use crate::evaluator::spec::sparse_features;
use crate::evaluator::{classify, EvalError, EvalFamily, EvaluatorSpec, FEATURE_COUNT};
use crate::kernel::GameState;
use crate::linalg::solve_spd;
use crate::solver::{StrategyTable, Wdl};
use crate::Scalar;

/// In-sample summary of a least-squares fit.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitReport {
    pub seed: u64,
    pub states_fitted: u64,
    pub misclassification_rate: Scalar,
}

const FIT_THRESHOLD: Scalar = 0.5;
const RIDGE: Scalar = 1e-8;

/// Least-squares fit of a linear evaluator to the solved WDL values of
/// every state in `table`, targeting +1/0/-1.
///
/// The learned weight count is the family's feature count, clamped to
/// the budget for the fitted family. The in-sample misclassification
/// rate is measured at threshold 0.5.
pub fn fit_evaluator(
    table: &StrategyTable,
    family: EvalFamily,
    parameter_budget: usize,
    seed: u64,
) -> Result<(EvaluatorSpec, FitReport), EvalError> {
    let mut rows = Vec::new();
    for slot in 0..table.slot_count() {
        if let Some(state) = table.state_at(slot) {
            rows.push((state, table.entry_at(slot).wdl));
        }
    }
    fit_labeled(&rows, family, parameter_budget, seed)
}

/// The same fit over caller-supplied labeled states.
pub fn fit_labeled(
    rows: &[(GameState, Wdl)],
    family: EvalFamily,
    parameter_budget: usize,
    seed: u64,
) -> Result<(EvaluatorSpec, FitReport), EvalError> {
    let n = fitted_feature_count(family, parameter_budget)?;
    let mut gram = vec![vec![0.0; n]; n];
    let mut moments = vec![0.0; n];
    let mut features = Vec::with_capacity(rows.len());
    for (state, wdl) in rows {
        let active: Vec<(usize, Scalar)> = sparse_features(state)
            .into_iter()
            .filter(|&(index, _)| index < n)
            .collect();
        let target = target_of(*wdl);
        for &(i, vi) in &active {
            moments[i] += target * vi;
            for &(j, vj) in &active {
                gram[i][j] += vi * vj;
            }
        }
        features.push((active, *wdl));
    }
    let scale = gram
        .iter()
        .enumerate()
        .map(|(i, row)| row[i].abs())
        .fold(1.0, Scalar::max);
    for (i, row) in gram.iter_mut().enumerate() {
        row[i] += scale * RIDGE;
    }
    let solved = solve_spd(&gram, &[moments])
        .expect("the ridge term keeps the normal equations positive definite");
    let weights = solved.into_iter().next().expect("one system was posed");

    let mut misclassified = 0u64;
    for (active, wdl) in &features {
        let score: Scalar = active.iter().map(|&(i, v)| weights[i] * v).sum();
        if classify(score, FIT_THRESHOLD) != *wdl {
            misclassified += 1;
        }
    }
    let states_fitted = rows.len() as u64;
    let misclassification_rate = if states_fitted == 0 {
        0.0
    } else {
        misclassified as Scalar / states_fitted as Scalar
    };
    let spec = EvaluatorSpec {
        family,
        parameters: weights,
        parameter_budget,
    };
    spec.validate()?;
    Ok((
        spec,
        FitReport {
            seed,
            states_fitted,
            misclassification_rate,
        },
    ))
}

fn fitted_feature_count(family: EvalFamily, budget: usize) -> Result<usize, EvalError> {
    let minimum = match family {
        EvalFamily::MaterialOnly => 5,
        EvalFamily::MaterialPlusPieceSquare => FEATURE_COUNT,
        EvalFamily::FittedLinear => 1,
        EvalFamily::TablebaseOracle => return Err(EvalError::UnfittableFamily),
    };
    if budget < minimum {
        return Err(EvalError::BudgetTooSmall {
            family,
            minimum,
            budget,
        });
    }
    Ok(match family {
        EvalFamily::FittedLinear => budget.min(FEATURE_COUNT),
        _ => minimum,
    })
}

fn target_of(wdl: Wdl) -> Scalar {
    match wdl {
        Wdl::WhiteWin => 1.0,
        Wdl::Draw => 0.0,
        Wdl::BlackWin => -1.0,
    }
}
