use crate::evaluator::{EvalError, StaticEval};
use crate::kernel::{GameState, Move};
use crate::Scalar;

/// Score of delivering checkmate at the root; deeper mates score less.
pub const MATE_SCORE: Scalar = 1_000_000.0;

/// Fixed-depth minimax with alpha-beta pruning over the legal moves of
/// `state`, scoring leaves with `eval` from the mover's point of view.
///
/// Returns the best move together with its score for the side to move.
/// Ties break toward the smallest move in `(from, to, promotion)` order,
/// the same order the move generator emits.
pub fn search(
    state: &GameState,
    depth: u32,
    eval: &StaticEval<'_>,
) -> Result<(Move, Scalar), EvalError> {
    if depth == 0 {
        return Err(EvalError::ZeroDepth);
    }
    let moves = state.legal_moves()?;
    let Some(&first) = moves.first() else {
        return Err(EvalError::TerminalSearch);
    };
    let mut best = (first, Scalar::NEG_INFINITY);
    let mut alpha = Scalar::NEG_INFINITY;
    for mv in moves {
        let child = state.apply_legal(mv);
        let score = -negamax(&child, depth - 1, 1, Scalar::NEG_INFINITY, -alpha, eval)?;
        if score > best.1 {
            best = (mv, score);
            alpha = alpha.max(score);
        }
    }
    Ok(best)
}

fn negamax(
    state: &GameState,
    depth_left: u32,
    ply: u32,
    mut alpha: Scalar,
    beta: Scalar,
    eval: &StaticEval<'_>,
) -> Result<Scalar, EvalError> {
    if state.board().piece_count() == 2 {
        return Ok(0.0);
    }
    let moves = state.legal_moves_unchecked();
    if moves.is_empty() {
        return Ok(if state.in_check() {
            -(MATE_SCORE - Scalar::from(ply))
        } else {
            0.0
        });
    }
    if depth_left == 0 {
        let sign = Scalar::from(state.side_to_move().sign());
        return Ok(sign * eval.score(state)?);
    }
    let mut best = Scalar::NEG_INFINITY;
    for mv in moves {
        let child = state.apply_legal(mv);
        let score = -negamax(&child, depth_left - 1, ply + 1, -beta, -alpha, eval)?;
        if score > best {
            best = score;
            alpha = alpha.max(score);
            if alpha >= beta {
                break;
            }
        }
    }
    Ok(best)
}
