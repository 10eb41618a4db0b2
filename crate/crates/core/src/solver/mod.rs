//! Exact play over small material sets.
//!
//! A retrograde pass over every position of a material set (and of every
//! set reachable from it by captures and promotions) labels each position
//! win, draw, or loss, attaches the distance to mate in plies, and records
//! one canonical best move. [`pure_strategy_f`] then plays that move,
//! which makes the successor of any solved position a pure function of the
//! position itself.

mod build;
mod index;
mod io;
mod material;
mod table;

use thiserror::Error;

use crate::kernel::ValidationError;

pub use build::build_tablebase;
pub use io::{load_table, save_table};
pub use material::{material_closure, MaterialSig, SUPPORTED_MATERIALS};
pub use table::{
    control_g, pure_strategy_f, pure_strategy_move, ProbeSource, StrategyEntry, StrategyTable,
    TableStore, Wdl,
};

/// Failures while building, storing, or consulting tablebases.
#[derive(Debug, Error)]
pub enum SolverError {
    /// The material set has no solver support (only a few endgames do).
    #[error("unsupported material set {0}")]
    UnsupportedMaterial(String),
    /// The probed state belongs to a different material set than the table.
    #[error("state with material {state} probed against table {table}")]
    MaterialMismatch { table: String, state: String },
    /// The state's material matches but its configuration is not indexed
    /// (castling-capable kings cannot occur in solved endgames).
    #[error("state not covered by the table: {0}")]
    Uncovered(String),
    /// The probed state fails basic board validation.
    #[error("invalid state: {0}")]
    InvalidState(#[from] ValidationError),
    /// A strategy move was requested for a state with no legal moves.
    #[error("no move exists: the state is checkmate or stalemate")]
    NoMove,
    #[error("table file: {0}")]
    Io(#[from] std::io::Error),
    #[error("table file: {0}")]
    Parse(#[from] TableParseError),
}

/// Structural problems in a tablebase file.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum TableParseError {
    /// The magic bytes are missing or wrong.
    #[error("unrecognized format")]
    UnrecognizedFormat,
    /// The format version is not one this build can read.
    #[error("unsupported format version {0}")]
    Version(u8),
    /// The file length disagrees with the declared entry count.
    #[error("expected {expected} bytes, found {actual}")]
    Truncated { expected: u64, actual: u64 },
    /// The embedded material id is not well formed.
    #[error("malformed material id")]
    MaterialId,
    /// The declared entry count disagrees with the material's slot count.
    #[error("entry count {found} does not match material {material} ({expected} slots)")]
    EntryCount {
        material: String,
        expected: u64,
        found: u64,
    },
    /// An entry holds a bit pattern no writer produces.
    #[error("corrupt entry at slot {0}")]
    Entry(u64),
}
