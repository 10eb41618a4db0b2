use serde::Serialize;

use crate::evaluator::{classify, EvalError, StaticEval};
use crate::solver::{StrategyTable, Wdl};
use crate::Scalar;

/// One state the evaluator got wrong.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub fen: String,
    pub predicted: Wdl,
    pub truth: Wdl,
}

/// Exhaustive comparison of an evaluator's WDL classification against
/// solved truth.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvalAuditReport {
    pub states_examined: u64,
    pub wdl_misclassified: u64,
    pub misclassification_rate: Scalar,
    pub counterexamples: Vec<Counterexample>,
}

const COUNTEREXAMPLE_CAP: usize = 10;

/// Classifies every decided-or-drawn state in `table` with `eval` at
/// the given score threshold and tallies disagreements with the stored
/// WDL values.
///
/// States where the game is already over by mate or stalemate are not
/// scored; everything else in the table is.
pub fn audit_evaluator(
    table: &StrategyTable,
    eval: &StaticEval<'_>,
    threshold: Scalar,
) -> Result<EvalAuditReport, EvalError> {
    let mut states_examined = 0u64;
    let mut wdl_misclassified = 0u64;
    let mut counterexamples = Vec::new();
    for slot in 0..table.slot_count() {
        let Some(state) = table.state_at(slot) else {
            continue;
        };
        let entry = table.entry_at(slot);
        if entry.terminal && state.board().piece_count() > 2 {
            continue;
        }
        states_examined += 1;
        let predicted = classify(eval.score(&state)?, threshold);
        let truth = entry.wdl;
        if predicted != truth {
            wdl_misclassified += 1;
            if counterexamples.len() < COUNTEREXAMPLE_CAP {
                counterexamples.push(Counterexample {
                    fen: state.to_fen(),
                    predicted,
                    truth,
                });
            }
        }
    }
    let misclassification_rate = if states_examined == 0 {
        0.0
    } else {
        wdl_misclassified as Scalar / states_examined as Scalar
    };
    Ok(EvalAuditReport {
        states_examined,
        wdl_misclassified,
        misclassification_rate,
        counterexamples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluator::EvaluatorSpec;
    use crate::solver::build_tablebase;

    #[test]
    fn bare_kings_are_audited_and_always_classified_right() {
        let table = build_tablebase("KvK").unwrap();
        let spec = EvaluatorSpec::material_only();
        let eval = StaticEval::new(&spec, None).unwrap();
        let report = audit_evaluator(&table, &eval, 0.5).unwrap();
        assert_eq!(report.states_examined, 7224);
        assert_eq!(report.wdl_misclassified, 0);
        assert_eq!(report.misclassification_rate, 0.0);
        assert!(report.counterexamples.is_empty());
    }

    #[test]
    fn a_skewed_evaluator_is_caught_with_a_capped_sample() {
        let table = build_tablebase("KvK").unwrap();
        let mut weights = vec![0.0; 326];
        weights[325] = 1.0;
        let spec = EvaluatorSpec::fitted(weights);
        let eval = StaticEval::new(&spec, None).unwrap();
        let report = audit_evaluator(&table, &eval, 0.25).unwrap();
        assert_eq!(report.states_examined, 7224);
        assert_eq!(report.wdl_misclassified, 236);
        assert_eq!(report.counterexamples.len(), 10);
        for counterexample in &report.counterexamples {
            assert_ne!(counterexample.predicted, counterexample.truth);
            assert_eq!(counterexample.truth, Wdl::Draw);
        }
    }
}
