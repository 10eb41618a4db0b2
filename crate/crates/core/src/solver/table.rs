//! Solved strategy tables and the move rule they induce.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::embedding::{encode, DeltaVector};
use crate::kernel::{Color, GameState, Move, PieceKind};

use super::index::MaterialIndex;
use super::material::{material_closure, MaterialSig};
use super::SolverError;

/// Game-theoretic classification of a state.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Wdl {
    WhiteWin,
    Draw,
    BlackWin,
}

impl Wdl {
    pub fn win_for(color: Color) -> Wdl {
        match color {
            Color::White => Wdl::WhiteWin,
            Color::Black => Wdl::BlackWin,
        }
    }

    pub fn winner(self) -> Option<Color> {
        match self {
            Wdl::WhiteWin => Some(Color::White),
            Wdl::BlackWin => Some(Color::Black),
            Wdl::Draw => None,
        }
    }

    pub(crate) fn bits(self) -> u8 {
        match self {
            Wdl::Draw => 0,
            Wdl::WhiteWin => 1,
            Wdl::BlackWin => 2,
        }
    }

    pub(crate) fn from_bits(bits: u8) -> Option<Wdl> {
        Some(match bits {
            0 => Wdl::Draw,
            1 => Wdl::WhiteWin,
            2 => Wdl::BlackWin,
            _ => return None,
        })
    }
}

/// Everything the table knows about one state.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct StrategyEntry {
    pub wdl: Wdl,
    /// Plies to checkmate under optimal play; `None` for draws.
    pub dtm_plies: Option<u16>,
    /// Move the strategy plays here; `None` for terminal states.
    pub best_move: Option<Move>,
    /// Play stops or the value is settled on the spot: checkmate,
    /// stalemate, or bare kings.
    pub terminal: bool,
}

pub(crate) const FLAG_INVALID: u8 = 1 << 2;
pub(crate) const FLAG_TERMINAL: u8 = 1 << 3;
pub(crate) const DTM_NONE: u16 = u16::MAX;

/// Cheap material fingerprint: a count per (color, kind letter), kings
/// skipped, en-passant flags folded into the pawn count.
pub(crate) fn material_key(state: &GameState) -> u64 {
    let mut key = 0u64;
    for (_, piece) in state.board().pieces() {
        if piece.kind.is_king() {
            continue;
        }
        let kind = if piece.kind.is_pawn() { PieceKind::Pawn } else { piece.kind };
        let lane = (kind.code() - 2) as u64 + 5 * u64::from(piece.color == Color::Black);
        key += 1 << (4 * lane);
    }
    key
}

#[derive(Clone)]
pub(crate) struct Block {
    pub(crate) sig: MaterialSig,
    pub(crate) key: u64,
    pub(crate) index: MaterialIndex,
    pub(crate) base: u64,
}

/// Dense solved table for one supported material set and every set it can
/// turn into by captures or promotions. Entries for all those sets live in
/// one array, block by block, so a trajectory never walks off the table.
#[derive(Clone)]
pub struct StrategyTable {
    material: MaterialSig,
    blocks: Vec<Block>,
    pub(crate) flags: Vec<u8>,
    pub(crate) dtm: Vec<u16>,
    pub(crate) mv: Vec<u16>,
}

impl StrategyTable {
    pub(crate) fn skeleton(material: MaterialSig) -> StrategyTable {
        let mut blocks = Vec::new();
        let mut base = 0u64;
        for sig in material_closure(&material) {
            let index = MaterialIndex::new(&sig);
            let size = index.size();
            let key = block_key(&sig);
            blocks.push(Block { sig, key, index, base });
            base += size;
        }
        let total = base as usize;
        StrategyTable {
            material,
            blocks,
            flags: vec![0; total],
            dtm: vec![DTM_NONE; total],
            mv: vec![Move::PACKED_NONE; total],
        }
    }

    pub fn material_id(&self) -> String {
        self.material.id()
    }

    /// Layout of every block, e.g.
    /// `KQvK[stm(2) x wK(64) x wQ(64) x bK(64)] + KvK[...]`.
    pub fn index_scheme(&self) -> String {
        self.blocks
            .iter()
            .map(|b| format!("{}[{}]", b.sig.id(), b.index.describe()))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Total number of slots across all blocks, legal or not.
    pub fn slot_count(&self) -> u64 {
        self.flags.len() as u64
    }

    /// The state a slot stands for, `None` for invalid slots.
    pub fn state_at(&self, slot: u64) -> Option<GameState> {
        let block = self.block_of(slot)?;
        block.index.slot_to_state(slot - block.base)
    }

    /// Raw entry of a slot, valid or not.
    pub fn entry_at(&self, slot: u64) -> StrategyEntry {
        let i = slot as usize;
        StrategyEntry {
            wdl: Wdl::from_bits(self.flags[i] & 0b11).expect("entry wdl bits"),
            dtm_plies: (self.dtm[i] != DTM_NONE).then_some(self.dtm[i]),
            best_move: Move::from_packed(self.mv[i]),
            terminal: self.flags[i] & FLAG_TERMINAL != 0,
        }
    }

    pub(crate) fn block_of(&self, slot: u64) -> Option<&Block> {
        self.blocks
            .iter()
            .rev()
            .find(|b| slot >= b.base)
            .filter(|_| slot < self.slot_count())
    }

    /// Side to move at a slot, derivable from the layout alone.
    pub(crate) fn side_at(&self, slot: u64) -> Color {
        let block = self.block_of(slot).expect("slot in range");
        if (slot - block.base) < block.index.size() / 2 {
            Color::White
        } else {
            Color::Black
        }
    }

    /// Global slot of a state, `None` when no block matches its material
    /// or the state is not representable (castling-flagged kings).
    pub(crate) fn global_slot(&self, state: &GameState) -> Option<u64> {
        let key = material_key(state);
        let block = self.blocks.iter().find(|b| b.key == key)?;
        Some(block.base + block.index.state_to_slot(state)?)
    }

    pub fn covers(&self, state: &GameState) -> bool {
        self.global_slot(state).is_some()
    }

    /// Exact value, mate distance, and strategy move for the state.
    pub fn probe(&self, state: &GameState) -> Result<StrategyEntry, SolverError> {
        state.validate().map_err(SolverError::InvalidState)?;
        let key = material_key(state);
        let block = self
            .blocks
            .iter()
            .find(|b| b.key == key)
            .ok_or_else(|| SolverError::MaterialMismatch {
                table: self.material_id(),
                state: MaterialSig::of_state(state).id(),
            })?;
        let slot = block
            .index
            .state_to_slot(state)
            .ok_or_else(|| SolverError::Uncovered(state.to_fen()))?;
        Ok(self.entry_at(block.base + slot))
    }
}

fn block_key(sig: &MaterialSig) -> u64 {
    let mut key = 0u64;
    for color in [Color::White, Color::Black] {
        for &kind in sig.side(color) {
            let lane = (kind.code() - 2) as u64 + 5 * u64::from(color == Color::Black);
            key += 1 << (4 * lane);
        }
    }
    key
}

impl PartialEq for StrategyTable {
    fn eq(&self, other: &Self) -> bool {
        self.material == other.material
            && self.flags == other.flags
            && self.dtm == other.dtm
            && self.mv == other.mv
    }
}

impl Eq for StrategyTable {}

impl fmt::Debug for StrategyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StrategyTable")
            .field("material", &self.material_id())
            .field("slots", &self.slot_count())
            .finish_non_exhaustive()
    }
}

/// Anything that can answer exact probes: one table, or several tables
/// searched in order.
pub trait ProbeSource {
    fn probe(&self, state: &GameState) -> Result<StrategyEntry, SolverError>;

    fn covers(&self, state: &GameState) -> bool {
        self.probe(state).is_ok()
    }
}

impl ProbeSource for StrategyTable {
    fn probe(&self, state: &GameState) -> Result<StrategyEntry, SolverError> {
        StrategyTable::probe(self, state)
    }

    fn covers(&self, state: &GameState) -> bool {
        StrategyTable::covers(self, state)
    }
}

/// Several tables probed as one source; the first covering table answers.
#[derive(Default)]
pub struct TableStore {
    tables: Vec<StrategyTable>,
}

impl TableStore {
    pub fn new() -> TableStore {
        TableStore::default()
    }

    pub fn push(&mut self, table: StrategyTable) {
        self.tables.push(table);
    }

    pub fn tables(&self) -> &[StrategyTable] {
        &self.tables
    }
}

impl ProbeSource for TableStore {
    fn probe(&self, state: &GameState) -> Result<StrategyEntry, SolverError> {
        state.validate().map_err(SolverError::InvalidState)?;
        for table in &self.tables {
            if table.covers(state) {
                return table.probe(state);
            }
        }
        Err(SolverError::MaterialMismatch {
            table: self
                .tables
                .iter()
                .map(StrategyTable::material_id)
                .collect::<Vec<_>>()
                .join(", "),
            state: MaterialSig::of_state(state).id(),
        })
    }

    fn covers(&self, state: &GameState) -> bool {
        self.tables.iter().any(|t| t.covers(state))
    }
}

/// The strategy as a transition function: the winner heads for the fastest
/// mate, the loser for the slowest, and drawn states keep the draw, ties
/// always broken by the smallest (from, to, promotion).
pub fn pure_strategy_f<P: ProbeSource + ?Sized>(
    source: &P,
    state: &GameState,
) -> Result<GameState, SolverError> {
    Ok(state.apply_legal(pure_strategy_move(source, state)?))
}

/// The move [`pure_strategy_f`] plays at this state.
pub fn pure_strategy_move<P: ProbeSource + ?Sized>(
    source: &P,
    state: &GameState,
) -> Result<Move, SolverError> {
    let entry = source.probe(state)?;
    if let Some(mv) = entry.best_move {
        return Ok(mv);
    }
    let moves = state.legal_moves().expect("probe validated the state");
    if moves.is_empty() {
        return Err(SolverError::NoMove);
    }
    // Entries without a stored move that can still move are the bare-kings
    // kind of draw; any draw-preserving move continues the game.
    for mv in moves {
        let next = state.apply_legal(mv);
        if source.probe(&next)?.wdl == Wdl::Draw {
            return Ok(mv);
        }
    }
    unreachable!("a drawn state always has a draw-preserving move")
}

/// Change of the configuration vector under one strategy move.
pub fn control_g<P: ProbeSource + ?Sized>(
    source: &P,
    state: &GameState,
) -> Result<DeltaVector, SolverError> {
    let next = pure_strategy_f(source, state)?;
    Ok(encode(&next) - encode(state))
}
