//! The configuration-space embedding.
//!
//! A position is a point in Z^64: coordinate `i` describes square `i`
//! (index `rank * 8 + file`, a1 = 0) with value 0 for empty and the signed
//! piece code otherwise (positive White, negative Black; pawn capturable en
//! passant 1, pawn 2, knight 3, bishop 4, rook 5, queen 6, king with
//! castling rights 7, king without 8). One move changes at most four
//! coordinates: source, destination, a capture removal, and an expiring
//! en-passant flag.

use std::fmt;
use std::ops::{Add, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::{Board, Color, GameState, Piece, Square, ValidationError};
use crate::scalar::Real;

/// A point of the configuration space.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConfigVector {
    coords: [i8; 64],
}

/// Difference of two configuration points; the control function's value.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct DeltaVector {
    coords: [i8; 64],
}

// Both vectors serialize as their canonical text form: 64 comma-separated
// integers in index order.
impl Serialize for ConfigVector {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_text())
    }
}

impl<'de> Deserialize<'de> for ConfigVector {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        ConfigVector::from_text(&text).map_err(serde::de::Error::custom)
    }
}

impl Serialize for DeltaVector {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_text())
    }
}

impl<'de> Deserialize<'de> for DeltaVector {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        let parsed = ConfigVector::from_text(&text).map_err(serde::de::Error::custom)?;
        Ok(DeltaVector { coords: parsed.coords })
    }
}

/// Distance on the configuration space.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    /// Number of differing coordinates.
    Hamming,
    /// Sum of absolute coordinate differences.
    L1,
    /// Euclidean length of the difference.
    L2,
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "hamming" => Ok(Metric::Hamming),
            "l1" => Ok(Metric::L1),
            "l2" => Ok(Metric::L2),
            other => Err(format!("unknown metric {other:?} (hamming, l1, l2)")),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Hamming => "hamming",
            Metric::L1 => "l1",
            Metric::L2 => "l2",
        })
    }
}

/// Why a vector fails to decode into a valid state.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Error)]
pub enum DecodeError {
    #[error("coordinate {0} holds an out-of-range code")]
    InvalidCode(Square),
    #[error("king count is not one per color")]
    KingCount,
    #[error("pawn on rank 1 or 8")]
    PawnRank,
    #[error("side not to move is in check")]
    IllegalCheck,
    #[error("inconsistent en-passant pawn: {0}")]
    EpPawn(ValidationError),
}

impl ConfigVector {
    pub fn zero() -> ConfigVector {
        ConfigVector { coords: [0; 64] }
    }

    pub fn from_coords(coords: [i8; 64]) -> ConfigVector {
        ConfigVector { coords }
    }

    pub fn coords(&self) -> &[i8; 64] {
        &self.coords
    }

    pub fn coord(&self, sq: Square) -> i8 {
        self.coords[sq.index()]
    }

    /// Canonical text form: 64 comma-separated integers in index order.
    pub fn to_text(&self) -> String {
        let parts: Vec<String> = self.coords.iter().map(i8::to_string).collect();
        parts.join(",")
    }

    pub fn from_text(text: &str) -> Result<ConfigVector, String> {
        let mut coords = [0i8; 64];
        let mut count = 0;
        for (i, part) in text.split(',').enumerate() {
            if i >= 64 {
                return Err("more than 64 coordinates".to_string());
            }
            coords[i] = part
                .trim()
                .parse()
                .map_err(|_| format!("bad coordinate {part:?}"))?;
            count = i + 1;
        }
        if count != 64 {
            return Err(format!("expected 64 coordinates, found {count}"));
        }
        Ok(ConfigVector { coords })
    }
}

impl fmt::Debug for ConfigVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ConfigVector({})", self.to_text())
    }
}

impl DeltaVector {
    pub fn zero() -> DeltaVector {
        DeltaVector { coords: [0; 64] }
    }

    pub fn coords(&self) -> &[i8; 64] {
        &self.coords
    }

    pub fn coord(&self, sq: Square) -> i8 {
        self.coords[sq.index()]
    }

    pub fn nonzero_count(&self) -> usize {
        self.coords.iter().filter(|&&c| c != 0).count()
    }

    pub fn to_text(&self) -> String {
        let parts: Vec<String> = self.coords.iter().map(i8::to_string).collect();
        parts.join(",")
    }
}

impl Sub for ConfigVector {
    type Output = DeltaVector;

    /// Exact integer difference; all values stay within i8.
    fn sub(self, rhs: ConfigVector) -> DeltaVector {
        let mut coords = [0i8; 64];
        for i in 0..64 {
            coords[i] = self.coords[i] - rhs.coords[i];
        }
        DeltaVector { coords }
    }
}

impl Add<DeltaVector> for ConfigVector {
    type Output = ConfigVector;

    fn add(self, rhs: DeltaVector) -> ConfigVector {
        let mut coords = [0i8; 64];
        for i in 0..64 {
            coords[i] = self.coords[i] + rhs.coords[i];
        }
        ConfigVector { coords }
    }
}

/// Embeds a state into the configuration space. Injective for states that
/// share a side to move: the board is reconstructible coordinate by
/// coordinate (castling wings being out of scope of the state itself).
pub fn encode(state: &GameState) -> ConfigVector {
    let mut coords = [0i8; 64];
    for (sq, piece) in state.board().pieces() {
        coords[sq.index()] = piece.code();
    }
    ConfigVector { coords }
}

/// Inverse of [`encode`] given the side to move. Validates every state
/// invariant; the ply counter is seeded to the parity convention (0 for
/// White to move, 1 for Black).
pub fn decode(vector: &ConfigVector, side_to_move: Color) -> Result<GameState, DecodeError> {
    let mut board = Board::empty();
    for sq in Square::all() {
        let code = vector.coord(sq);
        if code == 0 {
            continue;
        }
        let piece = Piece::from_code(code).ok_or(DecodeError::InvalidCode(sq))?;
        board.set(sq, Some(piece));
    }
    let ply = u32::from(side_to_move == Color::Black);
    GameState::new(board, side_to_move, ply).map_err(|err| match err {
        ValidationError::KingCount { .. } => DecodeError::KingCount,
        ValidationError::PawnOnBackRank(_) => DecodeError::PawnRank,
        ValidationError::SideNotToMoveInCheck => DecodeError::IllegalCheck,
        ep @ (ValidationError::EpPawnMultiple
        | ValidationError::EpPawnOwnership(_)
        | ValidationError::EpPawnRank(_)
        | ValidationError::EpPawnBlocked(_)) => DecodeError::EpPawn(ep),
        ValidationError::PlyParity => unreachable!("parity seeded from side to move"),
    })
}

/// Distance between two configuration points under the chosen metric.
pub fn distance<R: Real>(a: &ConfigVector, b: &ConfigVector, metric: Metric) -> R {
    match metric {
        Metric::Hamming => {
            let count = a
                .coords
                .iter()
                .zip(&b.coords)
                .filter(|(x, y)| x != y)
                .count();
            R::from_count(count)
        }
        Metric::L1 => {
            let sum: i64 = a
                .coords
                .iter()
                .zip(&b.coords)
                .map(|(&x, &y)| (i64::from(x) - i64::from(y)).abs())
                .sum();
            R::from_int(sum)
        }
        Metric::L2 => {
            let sum: i64 = a
                .coords
                .iter()
                .zip(&b.coords)
                .map(|(&x, &y)| (i64::from(x) - i64::from(y)).pow(2))
                .sum();
            R::from_int(sum).sqrt()
        }
    }
}
