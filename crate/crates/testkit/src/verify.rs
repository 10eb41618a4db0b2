//! Exhaustive local-consistency audit of a solved table.
//!
//! Retrograde builds and forward searches can share blind spots, so this
//! checker trusts neither: it recomputes, for every reachable slot, the
//! conditions an exact table must satisfy locally and compares them with
//! the stored entry. Terminal states must carry their adjudicated value.
//! A claimed win must have a successor of the same winner one ply nearer
//! to mate and none nearer than that; a claimed loss must have only
//! winning successors for the opponent, the slowest of them one ply
//! nearer; a claimed draw must have no winning successor for the mover
//! and at least one drawing one. Together with the requirement that
//! mate distances strictly decrease along best-move chains, satisfying
//! every local condition forces the unique game-theoretic value, so a
//! clean pass is a proof of the whole table, not a spot check.

use chessdyn_core::kernel::{GameState, Status};
use chessdyn_core::solver::{StrategyEntry, StrategyTable, Wdl};

/// Outcome of a full audit: how many entries were checked, or the first
/// discrepancies found.
pub fn verify_table(table: &StrategyTable) -> Result<u64, Vec<String>> {
    let mut errors = Vec::new();
    let mut checked = 0u64;
    for slot in 0..table.slot_count() {
        let Some(state) = table.state_at(slot) else { continue };
        let entry = table.entry_at(slot);
        if let Err(e) = check_slot(table, &state, entry) {
            errors.push(format!("slot {slot} ({}): {e}", state.to_fen()));
            if errors.len() >= 12 {
                errors.push("further discrepancies suppressed".to_string());
                return Err(errors);
            }
        }
        checked += 1;
    }
    if errors.is_empty() {
        Ok(checked)
    } else {
        Err(errors)
    }
}

fn check_slot(
    table: &StrategyTable,
    state: &GameState,
    entry: StrategyEntry,
) -> Result<(), String> {
    let probed = table.probe(state).map_err(|e| format!("probe failed: {e}"))?;
    if probed != entry {
        return Err("probe and direct slot access disagree".to_string());
    }

    let mover = state.side_to_move();
    match state.status().map_err(|e| e.to_string())? {
        Status::Checkmate(loser) => {
            let expect = Wdl::win_for(loser.opponent());
            return expect_entry(entry, expect, Some(0), true);
        }
        Status::Stalemate => return expect_entry(entry, Wdl::Draw, None, true),
        Status::InsufficientMaterial => return expect_entry(entry, Wdl::Draw, None, true),
        Status::Ongoing => {}
    }
    if entry.terminal {
        return Err("terminal flag on a state that is still in play".to_string());
    }

    let moves = state.legal_moves().map_err(|e| e.to_string())?;
    let mut fastest_win: Option<u16> = None;
    let mut slowest_loss: Option<u16> = None;
    let mut any_draw = false;
    let mut all_opponent_wins = true;
    let mut expected_move = None;
    let want_child_dtm = entry.dtm_plies.map(|d| d - 1);
    for &mv in &moves {
        let child = table
            .probe(&state.apply_legal(mv))
            .map_err(|e| format!("successor of {mv} failed to probe: {e}"))?;
        if child.wdl == entry.wdl && child.dtm_plies == want_child_dtm && expected_move.is_none() {
            expected_move = Some(mv);
        }
        if child.wdl == Wdl::win_for(mover) {
            let d = child.dtm_plies.ok_or_else(|| format!("{mv} wins without a distance"))?;
            fastest_win = Some(fastest_win.map_or(d, |f| f.min(d)));
        }
        if child.wdl == Wdl::win_for(mover.opponent()) {
            let d = child.dtm_plies.ok_or_else(|| format!("{mv} loses without a distance"))?;
            slowest_loss = Some(slowest_loss.map_or(d, |s| s.max(d)));
        } else {
            all_opponent_wins = false;
        }
        if child.wdl == Wdl::Draw {
            any_draw = true;
        }
    }

    let (want_wdl, want_dtm) = if let Some(d) = fastest_win {
        (Wdl::win_for(mover), Some(d + 1))
    } else if all_opponent_wins {
        (Wdl::win_for(mover.opponent()), slowest_loss.map(|d| d + 1))
    } else if any_draw {
        (Wdl::Draw, None)
    } else {
        return Err("successors admit no value at all".to_string());
    };
    if entry.wdl != want_wdl || entry.dtm_plies != want_dtm {
        return Err(format!(
            "stored {:?}/{:?}, successors force {:?}/{:?}",
            entry.wdl, entry.dtm_plies, want_wdl, want_dtm
        ));
    }
    if entry.best_move != expected_move {
        return Err(format!(
            "stored best move {:?}, first optimal move is {:?}",
            entry.best_move, expected_move
        ));
    }
    Ok(())
}

fn expect_entry(
    entry: StrategyEntry,
    wdl: Wdl,
    dtm: Option<u16>,
    terminal: bool,
) -> Result<(), String> {
    if entry.wdl != wdl || entry.dtm_plies != dtm || entry.terminal != terminal {
        return Err(format!(
            "terminal state stored as {:?}/{:?}/terminal={}, adjudication says {:?}/{:?}/terminal={}",
            entry.wdl, entry.dtm_plies, entry.terminal, wdl, dtm, terminal
        ));
    }
    if entry.best_move.is_some() {
        return Err("terminal state stores a best move".to_string());
    }
    Ok(())
}
