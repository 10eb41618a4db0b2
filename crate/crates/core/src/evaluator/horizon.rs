use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::evaluator::{search, EvalError, StaticEval};
use crate::solver::{StrategyTable, Wdl};
use crate::Scalar;

/// Blunder frequency of a depth-limited search at one depth.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HorizonRow {
    pub depth: u32,
    pub blunder_rate: Scalar,
    pub samples: u64,
}

/// Blunder frequencies across a sweep of search depths on a shared
/// sample of winning positions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HorizonReport {
    pub seed: u64,
    pub rows: Vec<HorizonRow>,
}

const BARREN_DRAW_LIMIT: u32 = 1000;

/// Samples states where the side to move has a tablebase win, then for
/// every depth in the sweep asks the search for a move and counts a
/// blunder whenever that move throws the win away.
///
/// The same sampled states are reused for every depth, so rows differ
/// only in what the deeper search sees.
pub fn horizon_experiment(
    table: &StrategyTable,
    eval: &StaticEval<'_>,
    depths: RangeInclusive<u32>,
    samples: u64,
    seed: u64,
) -> Result<HorizonReport, EvalError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = Vec::new();
    let mut dry_draws = 0u32;
    while (picked.len() as u64) < samples {
        let slot = rng.gen_range(0..table.slot_count());
        let accepted = table.state_at(slot).and_then(|state| {
            let wdl = table.entry_at(slot).wdl;
            (wdl == Wdl::win_for(state.side_to_move())).then_some((state, wdl))
        });
        match accepted {
            Some(pick) => {
                picked.push(pick);
                dry_draws = 0;
            }
            None => {
                dry_draws += 1;
                if dry_draws >= BARREN_DRAW_LIMIT {
                    return Err(EvalError::NoWinningStates);
                }
            }
        }
    }

    let mut rows = Vec::new();
    for depth in depths {
        let mut blunders = 0u64;
        for (state, wdl) in &picked {
            let (mv, _) = search(state, depth, eval)?;
            if table.probe(&state.apply_legal(mv))?.wdl != *wdl {
                blunders += 1;
            }
        }
        let blunder_rate = if picked.is_empty() {
            0.0
        } else {
            blunders as Scalar / picked.len() as Scalar
        };
        rows.push(HorizonRow {
            depth,
            blunder_rate,
            samples: picked.len() as u64,
        });
    }
    Ok(HorizonReport { seed, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluator::EvaluatorSpec;
    use crate::solver::build_tablebase;

    #[test]
    fn a_drawn_table_has_no_states_to_sample() {
        let table = build_tablebase("KvK").unwrap();
        let spec = EvaluatorSpec::material_only();
        let eval = StaticEval::new(&spec, None).unwrap();
        assert!(matches!(
            horizon_experiment(&table, &eval, 1..=2, 5, 0),
            Err(EvalError::NoWinningStates)
        ));
    }
}
