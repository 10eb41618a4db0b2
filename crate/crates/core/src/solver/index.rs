//! Dense mixed-radix indexing of piece placements.
//!
//! A slot packs (side to move, one digit per piece) with side to move as
//! the most significant digit. Piece order is fixed: White king, White
//! non-kings strongest first, Black king, Black non-kings. Kings and
//! ordinary pieces use a square digit of radix 64; pawns use radix 128 so
//! the en-passant flag rides along as digit = square + 64 * flag.
//!
//! Not every slot is a legal state (pieces may collide, kings may touch,
//! pawns may sit on back ranks); such slots decode to `None` and their
//! table entries are marked invalid.

use crate::kernel::{Board, Color, GameState, Piece, PieceKind, Square};

use super::material::MaterialSig;

#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct MaterialIndex {
    pieces: Vec<(Color, PieceKind)>,
    size: u64,
}

fn radix(kind: PieceKind) -> u64 {
    if kind == PieceKind::Pawn {
        128
    } else {
        64
    }
}

impl MaterialIndex {
    pub(crate) fn new(sig: &MaterialSig) -> MaterialIndex {
        let mut pieces = Vec::new();
        for color in [Color::White, Color::Black] {
            pieces.push((color, PieceKind::KingNoCastle));
            pieces.extend(sig.side(color).iter().map(|&k| (color, k)));
        }
        let size = 2 * pieces.iter().map(|&(_, k)| radix(k)).product::<u64>();
        MaterialIndex { pieces, size }
    }

    pub(crate) fn size(&self) -> u64 {
        self.size
    }

    /// Human-readable layout, e.g. `stm(2) x wK(64) x wQ(64) x bK(64)`.
    pub(crate) fn describe(&self) -> String {
        let mut parts = vec!["stm(2)".to_string()];
        for &(color, kind) in &self.pieces {
            let side = if color == Color::White { 'w' } else { 'b' };
            let letter = match kind {
                PieceKind::Queen => 'Q',
                PieceKind::Rook => 'R',
                PieceKind::Bishop => 'B',
                PieceKind::Knight => 'N',
                PieceKind::Pawn | PieceKind::PawnEpCapturable => 'P',
                PieceKind::KingCastle | PieceKind::KingNoCastle => 'K',
            };
            parts.push(format!("{side}{letter}({})", radix(kind)));
        }
        parts.join(" x ")
    }

    /// Slot of a state whose material matches. `None` when the state is
    /// not representable: castling-flagged kings, or material that turns
    /// out not to match piece by piece.
    pub(crate) fn state_to_slot(&self, state: &GameState) -> Option<u64> {
        if state.board().piece_count() != self.pieces.len() {
            return None;
        }
        let mut used = [false; 64];
        let mut slot = match state.side_to_move() {
            Color::White => 0u64,
            Color::Black => 1,
        };
        for &(color, kind) in &self.pieces {
            let mut digit = None;
            for (sq, piece) in state.board().pieces() {
                if used[sq.index()] || piece.color != color {
                    continue;
                }
                let matched = match kind {
                    PieceKind::Pawn => piece.kind.is_pawn(),
                    k => piece.kind == k,
                };
                if matched {
                    let flag = u64::from(piece.kind == PieceKind::PawnEpCapturable);
                    used[sq.index()] = true;
                    digit = Some(sq.index() as u64 + 64 * flag);
                    break;
                }
            }
            slot = slot * radix(kind) + digit?;
        }
        Some(slot)
    }

    /// State at a slot, or `None` for slots that violate placement or
    /// game-state invariants.
    pub(crate) fn slot_to_state(&self, slot: u64) -> Option<GameState> {
        debug_assert!(slot < self.size);
        let mut rest = slot;
        let mut digits = vec![0u64; self.pieces.len()];
        for (i, &(_, kind)) in self.pieces.iter().enumerate().rev() {
            digits[i] = rest % radix(kind);
            rest /= radix(kind);
        }
        let stm = if rest == 0 { Color::White } else { Color::Black };

        let mut board = Board::empty();
        for (&(color, kind), &digit) in self.pieces.iter().zip(&digits) {
            let sq = Square::from_index((digit % 64) as u8).unwrap();
            if board.piece_at(sq).is_some() {
                return None;
            }
            let kind = if kind == PieceKind::Pawn && digit >= 64 {
                PieceKind::PawnEpCapturable
            } else {
                kind
            };
            board.set(sq, Some(Piece::new(color, kind)));
        }
        let ply = u32::from(stm == Color::Black);
        GameState::new(board, stm, ply).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::parse_fen;

    fn index(id: &str) -> MaterialIndex {
        MaterialIndex::new(&MaterialSig::parse(id).unwrap())
    }

    #[test]
    fn sizes_follow_the_radices() {
        assert_eq!(index("KvK").size(), 8192);
        assert_eq!(index("KQvK").size(), 524288);
        assert_eq!(index("KRvK").size(), 524288);
        assert_eq!(index("KPvK").size(), 1048576);
    }

    #[test]
    fn layout_descriptions() {
        assert_eq!(index("KQvK").describe(), "stm(2) x wK(64) x wQ(64) x bK(64)");
        assert_eq!(index("KPvK").describe(), "stm(2) x wK(64) x wP(128) x bK(64)");
    }

    #[test]
    fn every_valid_slot_round_trips() {
        let idx = index("KvK");
        let mut valid = 0u64;
        for slot in 0..idx.size() {
            if let Some(state) = idx.slot_to_state(slot) {
                assert_eq!(idx.state_to_slot(&state), Some(slot));
                valid += 1;
            }
        }
        // 3612 king pairs (non-adjacent, distinct) per side to move.
        assert_eq!(valid, 2 * 3612);
    }

    #[test]
    fn states_round_trip_through_slots() {
        let idx = index("KPvK");
        let plain = parse_fen("4k3/8/8/8/8/8/4P3/4K3 w - - 0 1").unwrap();
        let flagged = parse_fen("4k3/8/8/8/4P3/8/8/4K3 b - e3 0 1").unwrap();
        let unflagged = parse_fen("4k3/8/8/8/4P3/8/8/4K3 b - - 0 1").unwrap();
        for state in [plain, flagged, unflagged] {
            let slot = idx.state_to_slot(&state).unwrap();
            assert_eq!(idx.slot_to_state(slot), Some(state));
        }
        // The en-passant flag occupies the high half of the pawn digit, so
        // the flagged and unflagged placements get distinct slots.
        assert_ne!(idx.state_to_slot(&flagged), idx.state_to_slot(&unflagged));
    }

    #[test]
    fn castling_kings_are_not_representable() {
        let idx = index("KRvK");
        let state = parse_fen("4k3/8/8/8/8/8/8/4K2R w K - 0 1").unwrap();
        assert_eq!(idx.state_to_slot(&state), None);
    }
}
