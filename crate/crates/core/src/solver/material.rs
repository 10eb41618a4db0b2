//! Material signatures and the capture/promotion closure.

use std::fmt;

use crate::kernel::{Color, GameState, PieceKind};

use super::SolverError;

/// Non-king material of both sides, e.g. `KQvK`. The letters use the
/// conventional strongest-first order; en-passant flags do not change a
/// pawn's material letter.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MaterialSig {
    white: Vec<PieceKind>,
    black: Vec<PieceKind>,
}

/// Sets the solver accepts as build roots. Everything a game can reach
/// from these by captures and promotions is solved along with them.
pub const SUPPORTED_MATERIALS: [&str; 4] = ["KvK", "KQvK", "KRvK", "KPvK"];

fn letter(kind: PieceKind) -> char {
    match kind {
        PieceKind::Queen => 'Q',
        PieceKind::Rook => 'R',
        PieceKind::Bishop => 'B',
        PieceKind::Knight => 'N',
        PieceKind::Pawn | PieceKind::PawnEpCapturable => 'P',
        PieceKind::KingCastle | PieceKind::KingNoCastle => 'K',
    }
}

fn kind_of_letter(ch: char) -> Option<PieceKind> {
    Some(match ch {
        'Q' => PieceKind::Queen,
        'R' => PieceKind::Rook,
        'B' => PieceKind::Bishop,
        'N' => PieceKind::Knight,
        'P' => PieceKind::Pawn,
        _ => return None,
    })
}

/// Strongest first, pawns last; the material letter order.
fn sort_kinds(kinds: &mut [PieceKind]) {
    kinds.sort_by_key(|k| std::cmp::Reverse(k.code()));
}

impl MaterialSig {
    pub(crate) fn from_kinds(mut white: Vec<PieceKind>, mut black: Vec<PieceKind>) -> MaterialSig {
        sort_kinds(&mut white);
        sort_kinds(&mut black);
        MaterialSig { white, black }
    }

    /// Parses an id like `KQvK`. Each side must lead with its king.
    pub fn parse(id: &str) -> Result<MaterialSig, SolverError> {
        let bad = || SolverError::UnsupportedMaterial(id.to_string());
        let (white, black) = id.split_once('v').ok_or_else(bad)?;
        let mut sides = Vec::new();
        for part in [white, black] {
            let mut chars = part.chars();
            if chars.next() != Some('K') {
                return Err(bad());
            }
            let kinds: Option<Vec<PieceKind>> = chars.map(kind_of_letter).collect();
            sides.push(kinds.ok_or_else(bad)?);
        }
        let black = sides.pop().unwrap();
        let white = sides.pop().unwrap();
        Ok(MaterialSig::from_kinds(white, black))
    }

    /// The material actually on the board, flags ignored.
    pub fn of_state(state: &GameState) -> MaterialSig {
        let mut white = Vec::new();
        let mut black = Vec::new();
        for (_, piece) in state.board().pieces() {
            if piece.kind.is_king() {
                continue;
            }
            let kind = if piece.kind.is_pawn() { PieceKind::Pawn } else { piece.kind };
            match piece.color {
                Color::White => white.push(kind),
                Color::Black => black.push(kind),
            }
        }
        MaterialSig::from_kinds(white, black)
    }

    pub fn id(&self) -> String {
        let side = |kinds: &[PieceKind]| {
            let mut s = String::from("K");
            s.extend(kinds.iter().map(|&k| letter(k)));
            s
        };
        format!("{}v{}", side(&self.white), side(&self.black))
    }

    pub(crate) fn side(&self, color: Color) -> &[PieceKind] {
        match color {
            Color::White => &self.white,
            Color::Black => &self.black,
        }
    }

    fn successors(&self) -> Vec<MaterialSig> {
        let mut out = Vec::new();
        for color in [Color::White, Color::Black] {
            let own = self.side(color).to_vec();
            for (i, &kind) in own.iter().enumerate() {
                // Capture: the piece disappears.
                let mut captured = own.clone();
                captured.remove(i);
                out.push(self.with_side(color, captured));
                // Promotion: a pawn becomes a stronger piece.
                if kind == PieceKind::Pawn {
                    for target in PieceKind::PROMOTIONS {
                        let mut promoted = own.clone();
                        promoted[i] = target;
                        out.push(self.with_side(color, promoted));
                    }
                }
            }
        }
        out
    }

    fn with_side(&self, color: Color, kinds: Vec<PieceKind>) -> MaterialSig {
        match color {
            Color::White => MaterialSig::from_kinds(kinds, self.black.clone()),
            Color::Black => MaterialSig::from_kinds(self.white.clone(), kinds),
        }
    }
}

impl fmt::Display for MaterialSig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

/// All material sets reachable from `root` by captures and promotions,
/// root first and the rest ordered by id, the block order of a table.
pub fn material_closure(root: &MaterialSig) -> Vec<MaterialSig> {
    let mut seen = vec![root.clone()];
    let mut queue = vec![root.clone()];
    while let Some(sig) = queue.pop() {
        for next in sig.successors() {
            if !seen.contains(&next) {
                seen.push(next.clone());
                queue.push(next);
            }
        }
    }
    let (root, mut deps) = (seen.remove(0), seen);
    deps.sort_by_key(|s| s.id());
    std::iter::once(root).chain(deps).collect()
}
