use std::fmt;

use serde::{Deserialize, Serialize};

/// Side to move or piece owner.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Color {
    White,
    Black,
}

impl Color {
    pub fn opponent(self) -> Color {
        match self {
            Color::White => Color::Black,
            Color::Black => Color::White,
        }
    }

    /// Encoding sign: White coordinates are positive.
    pub fn sign(self) -> i8 {
        match self {
            Color::White => 1,
            Color::Black => -1,
        }
    }

    /// Pawn push direction as a rank delta.
    pub(crate) fn forward(self) -> i8 {
        match self {
            Color::White => 1,
            Color::Black => -1,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::White => "white",
            Color::Black => "black",
        })
    }
}

/// Piece category. En-passant capturability and castling rights are part of
/// the kind so that the board alone carries the whole game state.
///
/// The discriminants are the configuration-space codes: a White piece
/// contributes `+code` to its square's coordinate, a Black piece `-code`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum PieceKind {
    /// Pawn that just made a double step and can be captured en passant.
    PawnEpCapturable = 1,
    /// Any other pawn.
    Pawn = 2,
    Knight = 3,
    Bishop = 4,
    Rook = 5,
    Queen = 6,
    /// King whose side retains at least one castling right.
    KingCastle = 7,
    /// King with no castling rights.
    KingNoCastle = 8,
}

impl PieceKind {
    /// Configuration-space code, 1..=8.
    pub fn code(self) -> i8 {
        self as i8
    }

    pub fn from_code(code: i8) -> Option<PieceKind> {
        Some(match code {
            1 => PieceKind::PawnEpCapturable,
            2 => PieceKind::Pawn,
            3 => PieceKind::Knight,
            4 => PieceKind::Bishop,
            5 => PieceKind::Rook,
            6 => PieceKind::Queen,
            7 => PieceKind::KingCastle,
            8 => PieceKind::KingNoCastle,
            _ => return None,
        })
    }

    pub fn is_pawn(self) -> bool {
        matches!(self, PieceKind::Pawn | PieceKind::PawnEpCapturable)
    }

    pub fn is_king(self) -> bool {
        matches!(self, PieceKind::KingCastle | PieceKind::KingNoCastle)
    }

    /// Valid promotion targets in move order.
    pub const PROMOTIONS: [PieceKind; 4] = [
        PieceKind::Knight,
        PieceKind::Bishop,
        PieceKind::Rook,
        PieceKind::Queen,
    ];

    /// Letter used in FEN and move text (lowercase).
    pub(crate) fn letter(self) -> char {
        match self {
            PieceKind::Pawn | PieceKind::PawnEpCapturable => 'p',
            PieceKind::Knight => 'n',
            PieceKind::Bishop => 'b',
            PieceKind::Rook => 'r',
            PieceKind::Queen => 'q',
            PieceKind::KingCastle | PieceKind::KingNoCastle => 'k',
        }
    }
}

/// A colored piece.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Piece {
    pub color: Color,
    pub kind: PieceKind,
}

impl Piece {
    pub fn new(color: Color, kind: PieceKind) -> Piece {
        Piece { color, kind }
    }

    /// Signed coordinate value of this piece.
    pub fn code(self) -> i8 {
        self.color.sign() * self.kind.code()
    }

    pub fn from_code(code: i8) -> Option<Piece> {
        let color = if code > 0 { Color::White } else { Color::Black };
        PieceKind::from_code(code.abs()).map(|kind| Piece { color, kind })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_round_trip() {
        for code in 1..=8i8 {
            for sign in [1, -1] {
                let piece = Piece::from_code(sign * code).unwrap();
                assert_eq!(piece.code(), sign * code);
            }
        }
        assert_eq!(Piece::from_code(0), None);
        assert_eq!(Piece::from_code(9), None);
        assert_eq!(Piece::from_code(-9), None);
    }

    #[test]
    fn category_values() {
        assert_eq!(PieceKind::PawnEpCapturable.code(), 1);
        assert_eq!(PieceKind::Pawn.code(), 2);
        assert_eq!(PieceKind::Queen.code(), 6);
        assert_eq!(PieceKind::KingCastle.code(), 7);
        assert_eq!(PieceKind::KingNoCastle.code(), 8);
    }
}
