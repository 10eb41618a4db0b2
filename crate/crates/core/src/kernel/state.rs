use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::movegen;
use super::piece::{Color, Piece, PieceKind};
use super::square::Square;

/// Piece placement: one optional piece per square.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Board {
    squares: [Option<Piece>; 64],
}

impl Board {
    pub fn empty() -> Board {
        Board { squares: [None; 64] }
    }

    pub fn piece_at(&self, sq: Square) -> Option<Piece> {
        self.squares[sq.index()]
    }

    pub fn set(&mut self, sq: Square, piece: Option<Piece>) {
        self.squares[sq.index()] = piece;
    }

    pub fn king_square(&self, color: Color) -> Option<Square> {
        self.pieces()
            .find(|(_, p)| p.color == color && p.kind.is_king())
            .map(|(sq, _)| sq)
    }

    /// Occupied squares with their pieces, in square order.
    pub fn pieces(&self) -> impl Iterator<Item = (Square, Piece)> + '_ {
        Square::all().filter_map(|sq| self.piece_at(sq).map(|p| (sq, p)))
    }

    pub fn piece_count(&self) -> usize {
        self.squares.iter().flatten().count()
    }
}

/// A move: source, destination, and promotion piece for pawns reaching the
/// last rank. Castling does not exist at this level and en-passant capture
/// is implied by a pawn moving diagonally onto an empty square.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Move {
    pub from: Square,
    pub to: Square,
    pub promotion: Option<PieceKind>,
}

impl Move {
    pub fn new(from: Square, to: Square) -> Move {
        Move { from, to, promotion: None }
    }

    pub fn promoting(from: Square, to: Square, promotion: PieceKind) -> Move {
        Move { from, to, promotion: Some(promotion) }
    }

    /// Total order used everywhere ties are broken: ascending
    /// (from, to, promotion code), no promotion first.
    pub fn sort_key(self) -> (usize, usize, i8) {
        (
            self.from.index(),
            self.to.index(),
            self.promotion.map_or(0, PieceKind::code),
        )
    }

    /// Packs into 16 bits: from | to << 6 | promotion << 12 with promotion
    /// encoded 0 = none, 1 = knight, 2 = bishop, 3 = rook, 4 = queen.
    /// `0xFFFF` is reserved for "no move" (a real move never has from == to).
    pub fn to_packed(self) -> u16 {
        let promo = match self.promotion {
            None => 0u16,
            Some(PieceKind::Knight) => 1,
            Some(PieceKind::Bishop) => 2,
            Some(PieceKind::Rook) => 3,
            Some(PieceKind::Queen) => 4,
            Some(other) => unreachable!("promotion to {other:?}"),
        };
        self.from.index() as u16 | (self.to.index() as u16) << 6 | promo << 12
    }

    pub fn from_packed(raw: u16) -> Option<Move> {
        if raw == Move::PACKED_NONE {
            return None;
        }
        let from = Square::from_index((raw & 0x3F) as u8)?;
        let to = Square::from_index((raw >> 6 & 0x3F) as u8)?;
        let promotion = match raw >> 12 {
            0 => None,
            1 => Some(PieceKind::Knight),
            2 => Some(PieceKind::Bishop),
            3 => Some(PieceKind::Rook),
            4 => Some(PieceKind::Queen),
            _ => return None,
        };
        Some(Move { from, to, promotion })
    }

    pub const PACKED_NONE: u16 = 0xFFFF;
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.from, self.to)?;
        if let Some(kind) = self.promotion {
            write!(f, "{}", kind.letter())?;
        }
        Ok(())
    }
}

impl FromStr for Move {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.len() != 4 && s.len() != 5 {
            return Err(format!("bad move {s:?}"));
        }
        let from = s[0..2].parse()?;
        let to = s[2..4].parse()?;
        let promotion = match s.as_bytes().get(4) {
            None => None,
            Some(b'n') => Some(PieceKind::Knight),
            Some(b'b') => Some(PieceKind::Bishop),
            Some(b'r') => Some(PieceKind::Rook),
            Some(b'q') => Some(PieceKind::Queen),
            Some(_) => return Err(format!("bad promotion in {s:?}")),
        };
        Ok(Move { from, to, promotion })
    }
}

/// Game status of a state.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Status {
    Ongoing,
    /// Side to move is mated; the payload names the loser.
    Checkmate(Color),
    Stalemate,
    /// Bare kings: no mate is ever reachable. The position still has legal
    /// moves; it is a draw by value, not a halt of the move relation.
    InsufficientMaterial,
}

/// Why a board + side to move is not a valid state.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Error)]
pub enum ValidationError {
    #[error("{color} has {count} kings")]
    KingCount { color: Color, count: usize },
    #[error("pawn on back rank at {0}")]
    PawnOnBackRank(Square),
    #[error("side not to move is in check")]
    SideNotToMoveInCheck,
    #[error("more than one en-passant-capturable pawn")]
    EpPawnMultiple,
    #[error("en-passant-capturable pawn at {0} belongs to the side to move")]
    EpPawnOwnership(Square),
    #[error("en-passant-capturable pawn at {0} on impossible rank")]
    EpPawnRank(Square),
    #[error("en-passant-capturable pawn at {0} has occupied origin or transit square")]
    EpPawnBlocked(Square),
    #[error("ply index parity does not match side to move")]
    PlyParity,
}

/// Rule named when a move is rejected.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Error)]
pub enum IllegalMoveRule {
    #[error("source square is empty")]
    FromEmpty,
    #[error("piece on the source square belongs to the opponent")]
    NotMoversPiece,
    #[error("source equals destination")]
    FromEqualsTo,
    #[error("destination holds a piece of the mover")]
    CapturesOwnPiece,
    #[error("piece cannot reach the destination")]
    BadGeometry,
    #[error("promotion missing or not allowed for this move")]
    BadPromotion,
    #[error("mover's king would be attacked")]
    LeavesKingInCheck,
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum KernelError {
    #[error("invalid state: {0}")]
    InvalidState(ValidationError),
    #[error("illegal move {mv}: {rule}")]
    IllegalMove { mv: Move, rule: IllegalMoveRule },
}

/// Full game state: placement, side to move, and the ply counter.
///
/// The ply counter is trajectory bookkeeping; White moves at even plies.
/// Equality and hashing ignore it, because board plus side to move is the
/// whole Markov state.
#[derive(Clone, Copy, Debug)]
pub struct GameState {
    board: Board,
    side_to_move: Color,
    ply_index: u32,
}

impl PartialEq for GameState {
    fn eq(&self, other: &Self) -> bool {
        self.board == other.board && self.side_to_move == other.side_to_move
    }
}

impl Eq for GameState {}

impl Hash for GameState {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.board.hash(state);
        self.side_to_move.hash(state);
    }
}

impl GameState {
    /// Validates all state invariants and the ply/side parity convention.
    pub fn new(board: Board, side_to_move: Color, ply_index: u32) -> Result<GameState, ValidationError> {
        let even = ply_index % 2 == 0;
        if even != (side_to_move == Color::White) {
            return Err(ValidationError::PlyParity);
        }
        validate(&board, side_to_move)?;
        Ok(GameState { board, side_to_move, ply_index })
    }

    /// Skips validation; callers must uphold the invariants themselves.
    /// Legality filtering relies on this to build transient states whose
    /// mover is still in check.
    pub(crate) fn from_parts_unchecked(board: Board, side_to_move: Color, ply_index: u32) -> GameState {
        GameState { board, side_to_move, ply_index }
    }

    pub fn board(&self) -> &Board {
        &self.board
    }

    pub fn side_to_move(&self) -> Color {
        self.side_to_move
    }

    pub fn ply_index(&self) -> u32 {
        self.ply_index
    }

    pub fn validate(&self) -> Result<(), ValidationError> {
        validate(&self.board, self.side_to_move)
    }

    /// All legal moves, sorted ascending by (from, to, promotion code).
    pub fn legal_moves(&self) -> Result<Vec<Move>, KernelError> {
        self.validate().map_err(KernelError::InvalidState)?;
        Ok(movegen::legal_moves_unchecked(self))
    }

    pub(crate) fn legal_moves_unchecked(&self) -> Vec<Move> {
        movegen::legal_moves_unchecked(self)
    }

    /// Applies a legal move; rejects anything else naming the violated rule.
    pub fn apply_move(&self, mv: Move) -> Result<GameState, KernelError> {
        self.validate().map_err(KernelError::InvalidState)?;
        if movegen::legal_moves_unchecked(self).contains(&mv) {
            Ok(movegen::apply_move_unchecked(self, mv))
        } else {
            Err(KernelError::IllegalMove { mv, rule: movegen::classify_illegal(self, mv) })
        }
    }

    /// Applies a move taken from [`Self::legal_moves`] of this exact state,
    /// skipping revalidation and the legality check. Feeding it any other
    /// move silently produces a garbage state.
    pub fn apply_legal(&self, mv: Move) -> GameState {
        movegen::apply_move_unchecked(self, mv)
    }

    /// Game status. Checkmate and stalemate are exactly the no-legal-move
    /// states; bare kings report `InsufficientMaterial`.
    pub fn status(&self) -> Result<Status, KernelError> {
        self.validate().map_err(KernelError::InvalidState)?;
        Ok(movegen::status_unchecked(self))
    }

    /// True when the side to move has no legal move (mate or stalemate).
    /// This, not `InsufficientMaterial`, is what halts play.
    pub fn is_halted(&self) -> bool {
        movegen::legal_moves_unchecked(self).is_empty()
    }

    pub fn in_check(&self) -> bool {
        movegen::in_check(&self.board, self.side_to_move)
    }

    /// FEN-subset rendering; inverse of [`super::parse_fen`] up to the
    /// documented castling lossiness.
    pub fn to_fen(&self) -> String {
        super::fen::emit_fen(self)
    }
}

/// Shared state validation: king counts, pawn ranks, en-passant
/// consistency, and the side not to move being safe from capture.
pub(crate) fn validate(board: &Board, side_to_move: Color) -> Result<(), ValidationError> {
    for color in [Color::White, Color::Black] {
        let count = board
            .pieces()
            .filter(|(_, p)| p.color == color && p.kind.is_king())
            .count();
        if count != 1 {
            return Err(ValidationError::KingCount { color, count });
        }
    }
    for (sq, piece) in board.pieces() {
        if piece.kind.is_pawn() && (sq.rank() == 0 || sq.rank() == 7) {
            return Err(ValidationError::PawnOnBackRank(sq));
        }
    }
    let ep_pawns: Vec<(Square, Piece)> = board
        .pieces()
        .filter(|(_, p)| p.kind == PieceKind::PawnEpCapturable)
        .collect();
    if ep_pawns.len() > 1 {
        return Err(ValidationError::EpPawnMultiple);
    }
    if let Some(&(sq, piece)) = ep_pawns.first() {
        // Only the side that just moved can have a double-stepped pawn, and
        // the squares it came through must still be empty.
        if piece.color == side_to_move {
            return Err(ValidationError::EpPawnOwnership(sq));
        }
        let expected_rank = match piece.color {
            Color::White => 3,
            Color::Black => 4,
        };
        if sq.rank() != expected_rank {
            return Err(ValidationError::EpPawnRank(sq));
        }
        let back = piece.color.forward();
        for steps in [1, 2] {
            let behind = sq
                .offset(0, -back * steps)
                .expect("double-step origin on board");
            if board.piece_at(behind).is_some() {
                return Err(ValidationError::EpPawnBlocked(sq));
            }
        }
    }
    if movegen::in_check(board, side_to_move.opponent()) {
        return Err(ValidationError::SideNotToMoveInCheck);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn move_text_round_trip() {
        for text in ["h7a7", "e2e4", "e7e8q", "a7a8n"] {
            let mv: Move = text.parse().unwrap();
            assert_eq!(mv.to_string(), text);
            assert_eq!(Move::from_packed(mv.to_packed()), Some(mv));
        }
        assert_eq!(Move::from_packed(Move::PACKED_NONE), None);
    }

    #[test]
    fn move_order_breaks_ties_by_promotion_code() {
        let mut moves: Vec<Move> = ["e7e8q", "e7e8n", "e7e8r", "e7e8b"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        moves.sort_by_key(|m| m.sort_key());
        let text: Vec<String> = moves.iter().map(Move::to_string).collect();
        assert_eq!(text, ["e7e8n", "e7e8b", "e7e8r", "e7e8q"]);
    }

    #[test]
    fn equality_ignores_ply() {
        let a = super::super::parse_fen("8/8/8/8/8/8/8/K6k w - - 0 1").unwrap();
        let b = super::super::parse_fen("8/8/8/8/8/8/8/K6k w - - 0 40").unwrap();
        assert_ne!(a.ply_index(), b.ply_index());
        assert_eq!(a, b);
    }

    #[test]
    fn parity_enforced() {
        let board = super::super::parse_fen("8/8/8/8/8/8/8/K6k w - - 0 1")
            .unwrap()
            .board()
            .to_owned();
        assert_eq!(
            GameState::new(board, Color::White, 1).unwrap_err(),
            ValidationError::PlyParity
        );
        assert!(GameState::new(board, Color::White, 4).is_ok());
    }
}
