//! FEN-subset parsing and emission.
//!
//! Accepted fields: piece placement, side to move, castling availability,
//! en-passant target square. Halfmove and fullmove counters are parsed for
//! the ply counter's benefit but carry no game meaning here.
//!
//! Castling rights map onto the king's piece kind, which only records
//! whether *some* right remains. Parsing therefore requires the king and a
//! matching rook on their home squares; emission reconstructs the letters
//! from home-square rook presence, the one place the mapping is lossy.

use thiserror::Error;

use super::piece::{Color, Piece, PieceKind};
use super::square::Square;
use super::state::{Board, GameState, ValidationError};

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum FenError {
    #[error("expected at least 4 FEN fields, found {0}")]
    FieldCount(usize),
    #[error("bad piece placement: {0}")]
    Placement(String),
    #[error("bad side to move {0:?}")]
    SideToMove(String),
    #[error("bad castling field: {0}")]
    Castling(String),
    #[error("bad en-passant field: {0}")]
    EnPassant(String),
    #[error("bad move counter {0:?}")]
    Counter(String),
    #[error("invalid state: {0}")]
    InvalidState(ValidationError),
}

fn parse_placement(field: &str) -> Result<Board, FenError> {
    let mut board = Board::empty();
    let ranks: Vec<&str> = field.split('/').collect();
    if ranks.len() != 8 {
        return Err(FenError::Placement(format!("{} ranks", ranks.len())));
    }
    for (row, part) in ranks.iter().enumerate() {
        let rank = 7 - row as u8;
        let mut file = 0u8;
        for ch in part.chars() {
            if let Some(skip) = ch.to_digit(10) {
                if skip == 0 || skip > 8 {
                    return Err(FenError::Placement(format!("bad run length {ch}")));
                }
                file += skip as u8;
                continue;
            }
            let color = if ch.is_ascii_uppercase() { Color::White } else { Color::Black };
            let kind = match ch.to_ascii_lowercase() {
                'p' => PieceKind::Pawn,
                'n' => PieceKind::Knight,
                'b' => PieceKind::Bishop,
                'r' => PieceKind::Rook,
                'q' => PieceKind::Queen,
                'k' => PieceKind::KingNoCastle,
                other => return Err(FenError::Placement(format!("bad piece {other:?}"))),
            };
            let sq = Square::from_file_rank(file, rank)
                .ok_or_else(|| FenError::Placement(format!("rank overflow at {ch}")))?;
            board.set(sq, Some(Piece::new(color, kind)));
            file += 1;
        }
        if file != 8 {
            return Err(FenError::Placement(format!("rank {} has {file} files", rank + 1)));
        }
    }
    Ok(board)
}

fn home_squares(color: Color) -> (Square, Square, Square) {
    let rank = if color == Color::White { 0 } else { 7 };
    let sq = |file| Square::from_file_rank(file, rank).unwrap();
    (sq(4), sq(0), sq(7))
}

fn apply_castling(board: &mut Board, field: &str) -> Result<(), FenError> {
    if field == "-" {
        return Ok(());
    }
    if field.is_empty() || field.len() > 4 {
        return Err(FenError::Castling(field.to_string()));
    }
    for ch in field.chars() {
        let (color, kingside) = match ch {
            'K' => (Color::White, true),
            'Q' => (Color::White, false),
            'k' => (Color::Black, true),
            'q' => (Color::Black, false),
            other => return Err(FenError::Castling(format!("bad flag {other:?}"))),
        };
        let (king_home, a_rook, h_rook) = home_squares(color);
        let rook_home = if kingside { h_rook } else { a_rook };
        let king_ok = board
            .piece_at(king_home)
            .is_some_and(|p| p.color == color && p.kind.is_king());
        let rook_ok = board
            .piece_at(rook_home)
            .is_some_and(|p| p == Piece::new(color, PieceKind::Rook));
        if !king_ok || !rook_ok {
            return Err(FenError::Castling(format!(
                "flag {ch} without king and rook on home squares"
            )));
        }
        board.set(king_home, Some(Piece::new(color, PieceKind::KingCastle)));
    }
    Ok(())
}

fn apply_en_passant(board: &mut Board, field: &str, side_to_move: Color) -> Result<(), FenError> {
    if field == "-" {
        return Ok(());
    }
    let target: Square = field
        .parse()
        .map_err(|_| FenError::EnPassant(field.to_string()))?;
    // The target is the square behind the double-stepped pawn of the side
    // that just moved.
    let mover = side_to_move.opponent();
    let expected_rank = if mover == Color::White { 2 } else { 5 };
    if target.rank() != expected_rank {
        return Err(FenError::EnPassant(format!("{target} on wrong rank")));
    }
    let pawn_sq = target
        .offset(0, mover.forward())
        .expect("pawn square on board");
    if board.piece_at(pawn_sq) != Some(Piece::new(mover, PieceKind::Pawn)) {
        return Err(FenError::EnPassant(format!("no pawn in front of {target}")));
    }
    board.set(pawn_sq, Some(Piece::new(mover, PieceKind::PawnEpCapturable)));
    Ok(())
}

/// Parses the FEN subset into a validated state.
pub fn parse_fen(text: &str) -> Result<GameState, FenError> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    if fields.len() < 4 {
        return Err(FenError::FieldCount(fields.len()));
    }
    let mut board = parse_placement(fields[0])?;
    let side_to_move = match fields[1] {
        "w" => Color::White,
        "b" => Color::Black,
        other => return Err(FenError::SideToMove(other.to_string())),
    };
    apply_castling(&mut board, fields[2])?;
    apply_en_passant(&mut board, fields[3], side_to_move)?;
    let fullmove = match fields.get(5) {
        None => 1,
        Some(raw) => raw
            .parse::<u32>()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| FenError::Counter(raw.to_string()))?,
    };
    let ply = (fullmove - 1) * 2 + u32::from(side_to_move == Color::Black);
    GameState::new(board, side_to_move, ply).map_err(FenError::InvalidState)
}

pub(crate) fn emit_fen(state: &GameState) -> String {
    let board = state.board();
    let mut placement = String::new();
    for rank in (0..8).rev() {
        let mut empty = 0;
        for file in 0..8 {
            let sq = Square::from_file_rank(file, rank).unwrap();
            match board.piece_at(sq) {
                None => empty += 1,
                Some(piece) => {
                    if empty > 0 {
                        placement.push_str(&empty.to_string());
                        empty = 0;
                    }
                    let letter = piece.kind.letter();
                    placement.push(match piece.color {
                        Color::White => letter.to_ascii_uppercase(),
                        Color::Black => letter,
                    });
                }
            }
        }
        if empty > 0 {
            placement.push_str(&empty.to_string());
        }
        if rank > 0 {
            placement.push('/');
        }
    }

    let mut castling = String::new();
    for (color, letters) in [(Color::White, ['K', 'Q']), (Color::Black, ['k', 'q'])] {
        let (king_home, a_rook, h_rook) = home_squares(color);
        let has_rights = board
            .piece_at(king_home)
            .is_some_and(|p| p.color == color && p.kind == PieceKind::KingCastle);
        if has_rights {
            for (rook_sq, letter) in [(h_rook, letters[0]), (a_rook, letters[1])] {
                if board.piece_at(rook_sq) == Some(Piece::new(color, PieceKind::Rook)) {
                    castling.push(letter);
                }
            }
        }
    }
    if castling.is_empty() {
        castling.push('-');
    }

    let ep = board
        .pieces()
        .find(|(_, p)| p.kind == PieceKind::PawnEpCapturable)
        .map(|(sq, p)| sq.offset(0, -p.color.forward()).unwrap().to_string())
        .unwrap_or_else(|| "-".to_string());

    let side = if state.side_to_move() == Color::White { 'w' } else { 'b' };
    let fullmove = state.ply_index() / 2 + 1;
    format!("{placement} {side} {castling} {ep} 0 {fullmove}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_plain_positions() {
        for fen in [
            "k7/7Q/1K6/8/8/8/8/8 w - - 0 1",
            "k7/2K5/1Q6/8/8/8/8/8 b - - 0 1",
            "4k3/8/8/8/4Pp2/8/8/4K3 b - e3 0 1",
            "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1",
            "4k3/8/8/8/8/8/8/4K2R w K - 0 9",
        ] {
            let state = parse_fen(fen).unwrap();
            assert_eq!(state.to_fen(), fen, "{fen}");
        }
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(parse_fen("k7/8 w - -"), Err(FenError::Placement(_))));
        assert!(matches!(
            parse_fen("k7/8/8/8/8/8/8/K7 x - -"),
            Err(FenError::SideToMove(_))
        ));
        assert!(matches!(
            parse_fen("k7/8/8/8/8/8/8/K7 w K -"),
            Err(FenError::Castling(_))
        ));
        assert!(matches!(
            parse_fen("k7/8/8/8/8/8/8/K7 w - e3"),
            Err(FenError::EnPassant(_))
        ));
        assert!(matches!(parse_fen("k7/8/8/8/8/8/8/K7"), Err(FenError::FieldCount(1))));
    }

    #[test]
    fn rejects_invalid_states() {
        // Two white kings.
        assert!(matches!(
            parse_fen("k7/8/8/8/8/8/8/KK6 w - - 0 1"),
            Err(FenError::InvalidState(ValidationError::KingCount { .. }))
        ));
        // Side not to move in check.
        assert!(matches!(
            parse_fen("k7/Q7/1K6/8/8/8/8/8 w - - 0 1"),
            Err(FenError::InvalidState(ValidationError::SideNotToMoveInCheck))
        ));
        // Pawn on the back rank.
        assert!(matches!(
            parse_fen("k7/8/8/8/8/8/8/K6P w - - 0 1"),
            Err(FenError::InvalidState(ValidationError::PawnOnBackRank(_)))
        ));
    }

    #[test]
    fn ep_field_flags_the_pawn_and_round_trips() {
        let state = parse_fen("4k3/8/8/8/4Pp2/8/8/4K3 b - e3 0 1").unwrap();
        let piece = state.board().piece_at("e4".parse().unwrap()).unwrap();
        assert_eq!(piece.kind, PieceKind::PawnEpCapturable);
        assert_eq!(state.to_fen(), "4k3/8/8/8/4Pp2/8/8/4K3 b - e3 0 1");
    }

    #[test]
    fn ply_counter_follows_fullmove_and_side() {
        assert_eq!(parse_fen("k7/8/8/8/8/8/8/K7 w - - 0 1").unwrap().ply_index(), 0);
        assert_eq!(parse_fen("k7/8/8/8/8/8/8/K7 b - - 0 1").unwrap().ply_index(), 1);
        assert_eq!(parse_fen("k7/8/8/8/8/8/8/K7 w - - 3 7").unwrap().ply_index(), 12);
    }
}
