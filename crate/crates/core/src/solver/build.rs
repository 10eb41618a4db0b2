//! Retrograde construction of strategy tables.
//!
//! Backward induction over the whole closure: classify terminal slots,
//! wire up a predecessor graph by running every legal move forward, then
//! peel mate-distance layers outward from the checkmates. A state becomes
//! a win the first time some move reaches a resolved loss; it becomes a
//! loss when its last unresolved move resolves to an opponent win (the
//! per-state move counter reaching zero detects this). Whatever survives
//! all layers is a draw. A final pass stores the strategy move each
//! non-terminal state plays.
//!
//! Every pass walks slots in ascending order and moves in the kernel's
//! sorted order, so two builds of the same material are bit-identical.

use crate::kernel::{GameState, Move};

use super::material::{MaterialSig, SUPPORTED_MATERIALS};
use super::table::{StrategyTable, Wdl, DTM_NONE, FLAG_INVALID, FLAG_TERMINAL};
use super::SolverError;

/// Solves a supported material set and everything it can turn into.
pub fn build_tablebase(material_id: &str) -> Result<StrategyTable, SolverError> {
    let sig = MaterialSig::parse(material_id)?;
    if !SUPPORTED_MATERIALS.contains(&sig.id().as_str()) {
        return Err(SolverError::UnsupportedMaterial(sig.id()));
    }
    Ok(build(sig))
}

/// `value` code for draws settled during enumeration (stalemate, bare
/// kings); 0 doubles as unresolved-then-draw, 1 and 2 are the `Wdl` bits.
const SETTLED_DRAW: u8 = 3;

struct Slots {
    value: Vec<u8>,
    dtm: Vec<u16>,
    terminal: Vec<bool>,
    invalid: Vec<bool>,
    /// Unresolved legal moves left; the loss detector counts these down.
    moves_left: Vec<u16>,
}

fn wdl_bits(value: u8) -> u8 {
    if value == SETTLED_DRAW {
        0
    } else {
        value
    }
}

fn build(material: MaterialSig) -> StrategyTable {
    let mut table = StrategyTable::skeleton(material);
    let total = table.slot_count() as usize;

    let mut slots = Slots {
        value: vec![0; total],
        dtm: vec![DTM_NONE; total],
        terminal: vec![false; total],
        invalid: vec![false; total],
        moves_left: vec![0; total],
    };
    let mut mate_layer: Vec<u32> = Vec::new();

    for slot in 0..total as u64 {
        let i = slot as usize;
        let Some(state) = table.state_at(slot) else {
            slots.invalid[i] = true;
            continue;
        };
        let moves = state.legal_moves_unchecked();
        if moves.is_empty() {
            slots.terminal[i] = true;
            if state.in_check() {
                let winner = state.side_to_move().opponent();
                slots.value[i] = Wdl::win_for(winner).bits();
                slots.dtm[i] = 0;
                mate_layer.push(slot as u32);
            } else {
                slots.value[i] = SETTLED_DRAW;
            }
        } else if state.board().piece_count() == 2 {
            slots.terminal[i] = true;
            slots.value[i] = SETTLED_DRAW;
        } else {
            slots.moves_left[i] = moves.len() as u16;
        }
    }

    let preds = predecessor_graph(&table, &slots);
    propagate(&table, &mut slots, &preds, mate_layer);
    store_strategy_moves(&mut table, &slots);

    for i in 0..total {
        table.flags[i] = if slots.invalid[i] {
            FLAG_INVALID
        } else {
            wdl_bits(slots.value[i]) | if slots.terminal[i] { FLAG_TERMINAL } else { 0 }
        };
        table.dtm[i] = slots.dtm[i];
    }
    table
}

/// Compressed predecessor lists: for each slot, the slots with a legal
/// move into it. Built in two forward passes: degree count, then fill.
struct PredGraph {
    offsets: Vec<u32>,
    preds: Vec<u32>,
}

impl PredGraph {
    fn of(&self, slot: u32) -> &[u32] {
        let (lo, hi) = (self.offsets[slot as usize], self.offsets[slot as usize + 1]);
        &self.preds[lo as usize..hi as usize]
    }
}

fn successor_slot(table: &StrategyTable, state: &GameState, mv: Move) -> u32 {
    let next = state.apply_legal(mv);
    table
        .global_slot(&next)
        .expect("successor material stays inside the closure") as u32
}

fn for_each_edge(table: &StrategyTable, slots: &Slots, mut visit: impl FnMut(u32, u32)) {
    for slot in 0..table.slot_count() {
        let i = slot as usize;
        if slots.invalid[i] || slots.terminal[i] {
            continue;
        }
        let state = table.state_at(slot).expect("valid slot");
        for mv in state.legal_moves_unchecked() {
            visit(slot as u32, successor_slot(table, &state, mv));
        }
    }
}

fn predecessor_graph(table: &StrategyTable, slots: &Slots) -> PredGraph {
    let total = table.slot_count() as usize;
    let mut offsets = vec![0u32; total + 1];
    for_each_edge(table, slots, |_, succ| offsets[succ as usize + 1] += 1);
    for i in 1..=total {
        offsets[i] += offsets[i - 1];
    }
    let mut cursor = offsets.clone();
    let mut preds = vec![0u32; offsets[total] as usize];
    for_each_edge(table, slots, |slot, succ| {
        preds[cursor[succ as usize] as usize] = slot;
        cursor[succ as usize] += 1;
    });
    PredGraph { offsets, preds }
}

/// Peels mate-distance layers outward, starting from the checkmates.
fn propagate(table: &StrategyTable, slots: &mut Slots, preds: &PredGraph, mate_layer: Vec<u32>) {
    let mut layer = mate_layer;
    let mut dist: u16 = 0;
    while !layer.is_empty() {
        let mut next = Vec::new();
        for &t in &layer {
            let winner_bits = slots.value[t as usize];
            let mover = table.side_at(t as u64);
            let mover_loses = winner_bits == Wdl::win_for(mover.opponent()).bits();
            for &p in preds.of(t) {
                let pi = p as usize;
                if slots.value[pi] != 0 {
                    continue;
                }
                if mover_loses {
                    // The predecessor's mover reaches a lost opponent.
                    slots.value[pi] = winner_bits;
                    slots.dtm[pi] = dist + 1;
                    next.push(p);
                } else {
                    slots.moves_left[pi] -= 1;
                    if slots.moves_left[pi] == 0 {
                        // Every move now runs into an opponent win; the
                        // last one to resolve is the longest stall.
                        slots.value[pi] = winner_bits;
                        slots.dtm[pi] = dist + 1;
                        next.push(p);
                    }
                }
            }
        }
        layer = next;
        dist += 1;
    }
}

/// Stores the move each non-terminal state plays: the first legal move,
/// in sorted order, whose successor keeps the state's verdict and (for
/// decisive states) sits exactly one ply closer to the mate. For the
/// losing side that successor is automatically the longest-stalling one.
fn store_strategy_moves(table: &mut StrategyTable, slots: &Slots) {
    for slot in 0..table.slot_count() {
        let i = slot as usize;
        if slots.invalid[i] || slots.terminal[i] {
            continue;
        }
        let state = table.state_at(slot).expect("valid slot");
        let own_bits = wdl_bits(slots.value[i]);
        let want_dtm = if slots.dtm[i] == DTM_NONE { DTM_NONE } else { slots.dtm[i] - 1 };
        let mut chosen = Move::PACKED_NONE;
        for mv in state.legal_moves_unchecked() {
            let succ = successor_slot(table, &state, mv) as usize;
            if wdl_bits(slots.value[succ]) == own_bits && slots.dtm[succ] == want_dtm {
                chosen = mv.to_packed();
                break;
            }
        }
        debug_assert_ne!(chosen, Move::PACKED_NONE, "strategy move missing at slot {slot}");
        table.mv[i] = chosen;
    }
}
