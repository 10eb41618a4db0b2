//! Rules engine for chess restricted to small material subsets.
//!
//! The kernel is exact about the rules that matter to the configuration
//! encoding: en-passant capturability and castling rights are part of the
//! piece kind, not side-band state, so a board plus side to move is the
//! whole Markov state. Draw adjudication rules that need history (fifty
//! moves, threefold repetition) are deliberately absent: play is
//! mate-or-unbounded, and the dynamics layer detects cycles instead.
//!
//! Full chess positions are accepted for encoding and search. Castling
//! moves themselves are never generated: the state only records whether a
//! side retains *some* castling right, per-wing detail is unrepresentable,
//! and exact solving is restricted to material sets where castling is moot.

mod fen;
mod movegen;
mod piece;
mod square;
mod state;

pub use fen::{parse_fen, FenError};
pub use movegen::perft;
pub use piece::{Color, Piece, PieceKind};
pub use square::Square;
pub use state::{Board, GameState, IllegalMoveRule, KernelError, Move, Status, ValidationError};
