use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::embedding::{encode, ConfigVector};
use crate::kernel::{GameState, Piece, PieceKind, Square};
use crate::solver::{MaterialSig, SUPPORTED_MATERIALS};

/// Families of smallest edits that turn a state into a nearby one.
///
/// These are state edits, not chess moves; they produce the neighboring
/// points whose trajectories divergence measurements compare.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PerturbationMode {
    /// Change one non-king piece into a different kind on its square.
    Retype,
    /// Lift one piece and put it on an empty square, flags intact.
    Relocate,
    /// Flip one flag code: plain pawn 1↔2, king castling 7↔8.
    FlagToggle,
}

impl FromStr for PerturbationMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "retype" => Ok(PerturbationMode::Retype),
            "relocate" => Ok(PerturbationMode::Relocate),
            "flagtoggle" => Ok(PerturbationMode::FlagToggle),
            other => Err(format!(
                "unknown perturbation mode {other:?} (retype, relocate, flagtoggle)"
            )),
        }
    }
}

impl fmt::Display for PerturbationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PerturbationMode::Retype => "retype",
            PerturbationMode::Relocate => "relocate",
            PerturbationMode::FlagToggle => "flagtoggle",
        })
    }
}

const RETYPE_TARGETS: [PieceKind; 5] = [
    PieceKind::Pawn,
    PieceKind::Knight,
    PieceKind::Bishop,
    PieceKind::Rook,
    PieceKind::Queen,
];

/// All valid single edits of `state` under `mode`, with the same side to
/// move, deduplicated and sorted by their configuration encoding.
///
/// Retype changes one coordinate (Hamming distance 1) and must land in the
/// same material set or one a tablebase exists for. Kings are never
/// retyped, in or out, so every output keeps exactly two kings. Relocate
/// changes two coordinates and FlagToggle one; both keep the material set.
pub fn perturb(state: &GameState, mode: PerturbationMode) -> Vec<GameState> {
    let mut boards = Vec::new();
    match mode {
        PerturbationMode::Retype => {
            for (sq, piece) in state.board().pieces() {
                if piece.kind.is_king() {
                    continue;
                }
                for kind in RETYPE_TARGETS {
                    if kind == piece.kind || (kind.is_pawn() && piece.kind.is_pawn()) {
                        continue;
                    }
                    let mut board = *state.board();
                    board.set(sq, Some(Piece::new(piece.color, kind)));
                    boards.push(board);
                }
            }
        }
        PerturbationMode::Relocate => {
            for (sq, piece) in state.board().pieces() {
                for target in Square::all() {
                    if state.board().piece_at(target).is_some() {
                        continue;
                    }
                    let mut board = *state.board();
                    board.set(sq, None);
                    board.set(target, Some(piece));
                    boards.push(board);
                }
            }
        }
        PerturbationMode::FlagToggle => {
            for (sq, piece) in state.board().pieces() {
                let flipped = match piece.kind {
                    PieceKind::Pawn => PieceKind::PawnEpCapturable,
                    PieceKind::PawnEpCapturable => PieceKind::Pawn,
                    PieceKind::KingCastle => PieceKind::KingNoCastle,
                    PieceKind::KingNoCastle => PieceKind::KingCastle,
                    _ => continue,
                };
                let mut board = *state.board();
                board.set(sq, Some(Piece::new(piece.color, flipped)));
                boards.push(board);
            }
        }
    }

    let side = state.side_to_move();
    let ply = state.ply_index();
    let original_material = MaterialSig::of_state(state).id();
    let mut found: Vec<(ConfigVector, GameState)> = Vec::new();
    for board in boards {
        let Ok(candidate) = GameState::new(board, side, ply) else {
            continue;
        };
        let material = MaterialSig::of_state(&candidate).id();
        if material != original_material && !SUPPORTED_MATERIALS.contains(&material.as_str()) {
            continue;
        }
        found.push((encode(&candidate), candidate));
    }
    found.sort_by_key(|(vector, _)| *vector);
    found.dedup_by_key(|(vector, _)| *vector);
    found.into_iter().map(|(_, candidate)| candidate).collect()
}
