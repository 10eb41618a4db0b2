//! Naive move generation by exhaustive square-pair scanning.
//!
//! For every (from, to, promotion) candidate this asks, from scratch,
//! "does the rulebook allow that?": geometric reachability from file/rank
//! arithmetic, path emptiness walked square by square, en-passant and
//! promotion conditions spelled out longhand, and king safety checked by
//! scanning all 64 squares for an attacker. It shares no generation logic
//! with the kernel; agreement is the point of the comparison.

use chessdyn_core::kernel::{Board, Color, GameState, Move, Piece, PieceKind, Square};

/// True when a piece of `kind` standing on `from` could move to `to` given
/// the current occupancy, ignoring king safety.
fn geometry_allows(
    state: &GameState,
    kind: PieceKind,
    color: Color,
    from: Square,
    to: Square,
) -> bool {
    let df = to.file() as i8 - from.file() as i8;
    let dr = to.rank() as i8 - from.rank() as i8;
    let path_clear = || {
        let (sf, sr) = (df.signum(), dr.signum());
        let steps = df.abs().max(dr.abs());
        (1..steps).all(|i| {
            let sq = from.offset(sf * i, sr * i).unwrap();
            state.board().piece_at(sq).is_none()
        })
    };
    match kind {
        PieceKind::Knight => (df.abs() == 1 && dr.abs() == 2) || (df.abs() == 2 && dr.abs() == 1),
        PieceKind::KingCastle | PieceKind::KingNoCastle => {
            df.abs() <= 1 && dr.abs() <= 1 && (df, dr) != (0, 0)
        }
        PieceKind::Rook => (df == 0) != (dr == 0) && path_clear(),
        PieceKind::Bishop => df.abs() == dr.abs() && df != 0 && path_clear(),
        PieceKind::Queen => {
            ((df == 0) != (dr == 0) || (df.abs() == dr.abs() && df != 0)) && path_clear()
        }
        PieceKind::Pawn | PieceKind::PawnEpCapturable => {
            let forward = color.sign();
            let start_rank = if color == Color::White { 1 } else { 6 };
            let target = state.board().piece_at(to);
            if df == 0 {
                if target.is_some() {
                    return false;
                }
                dr == forward || (dr == 2 * forward && from.rank() == start_rank && path_clear())
            } else if df.abs() == 1 && dr == forward {
                match target {
                    Some(p) => p.color != color,
                    // En passant: an enemy double-stepped pawn stands on
                    // the square the capturer passes beside.
                    None => {
                        let beside = Square::from_file_rank(to.file(), from.rank()).unwrap();
                        state.board().piece_at(beside)
                            == Some(Piece::new(color.opponent(), PieceKind::PawnEpCapturable))
                    }
                }
            } else {
                false
            }
        }
    }
}

/// Replays a move onto a plain piece list, spelling out every bit of
/// bookkeeping the rules demand.
fn replay(state: &GameState, mv: Move) -> GameState {
    let us = state.side_to_move();
    let moving = state.board().piece_at(mv.from).unwrap();

    // Capture victim: whatever stands on the target, or the passed-by pawn.
    let captured_square = if state.board().piece_at(mv.to).is_some() {
        Some(mv.to)
    } else if moving.kind.is_pawn() && mv.from.file() != mv.to.file() {
        Some(Square::from_file_rank(mv.to.file(), mv.from.rank()).unwrap())
    } else {
        None
    };

    let landed = if moving.kind.is_pawn() {
        match mv.promotion {
            Some(kind) => kind,
            None if mv.from.rank().abs_diff(mv.to.rank()) == 2 => PieceKind::PawnEpCapturable,
            None => PieceKind::Pawn,
        }
    } else if moving.kind == PieceKind::KingCastle {
        PieceKind::KingNoCastle
    } else {
        moving.kind
    };

    let mut board = Board::empty();
    for (sq, piece) in state.board().pieces() {
        if sq == mv.from || Some(sq) == captured_square {
            continue;
        }
        // The opponent's en-passant window closes after our reply.
        let piece = if piece.color != us && piece.kind == PieceKind::PawnEpCapturable {
            Piece::new(piece.color, PieceKind::Pawn)
        } else {
            piece
        };
        board.set(sq, Some(piece));
    }
    board.set(mv.to, Some(Piece::new(us, landed)));
    GameState::new(board, us.opponent(), state.ply_index() + 1).expect("replayed state invalid")
}

fn king_attacked_after(state: &GameState, mv: Move) -> bool {
    let us = state.side_to_move();
    let moving = state.board().piece_at(mv.from).unwrap();
    let mut board = *state.board();
    if state.board().piece_at(mv.to).is_none()
        && moving.kind.is_pawn()
        && mv.from.file() != mv.to.file()
    {
        let beside = Square::from_file_rank(mv.to.file(), mv.from.rank()).unwrap();
        board.set(beside, None);
    }
    board.set(mv.from, None);
    board.set(mv.to, Some(moving));
    let king = if moving.kind.is_king() {
        mv.to
    } else {
        board.king_square(us).expect("mover has a king")
    };
    square_attacked(&board, king, us.opponent())
}

/// Attack scan from first principles: try every square as an attacker.
fn square_attacked(board: &Board, target: Square, by: Color) -> bool {
    for (from, piece) in board.pieces() {
        if piece.color != by || from == target {
            continue;
        }
        let df = target.file() as i8 - from.file() as i8;
        let dr = target.rank() as i8 - from.rank() as i8;
        let path_clear = || {
            let (sf, sr) = (df.signum(), dr.signum());
            let steps = df.abs().max(dr.abs());
            (1..steps).all(|i| board.piece_at(from.offset(sf * i, sr * i).unwrap()).is_none())
        };
        let attacks = match piece.kind {
            PieceKind::Pawn | PieceKind::PawnEpCapturable => df.abs() == 1 && dr == by.sign(),
            PieceKind::Knight => {
                (df.abs() == 1 && dr.abs() == 2) || (df.abs() == 2 && dr.abs() == 1)
            }
            PieceKind::KingCastle | PieceKind::KingNoCastle => df.abs() <= 1 && dr.abs() <= 1,
            PieceKind::Rook => (df == 0) != (dr == 0) && path_clear(),
            PieceKind::Bishop => df.abs() == dr.abs() && path_clear(),
            PieceKind::Queen => ((df == 0) != (dr == 0) || df.abs() == dr.abs()) && path_clear(),
        };
        if attacks {
            return true;
        }
    }
    false
}

/// All legal moves by exhaustive candidate scanning, in ascending
/// (from, to, promotion code) order.
pub fn slow_legal_moves(state: &GameState) -> Vec<Move> {
    let us = state.side_to_move();
    let last_rank = if us == Color::White { 7 } else { 0 };
    let mut out = Vec::new();
    for from in Square::all() {
        let Some(piece) = state.board().piece_at(from) else { continue };
        if piece.color != us {
            continue;
        }
        for to in Square::all() {
            if to == from {
                continue;
            }
            if state.board().piece_at(to).is_some_and(|p| p.color == us) {
                continue;
            }
            if !geometry_allows(state, piece.kind, us, from, to) {
                continue;
            }
            let promotions: &[Option<PieceKind>] =
                if piece.kind.is_pawn() && to.rank() == last_rank {
                    &[
                        Some(PieceKind::Knight),
                        Some(PieceKind::Bishop),
                        Some(PieceKind::Rook),
                        Some(PieceKind::Queen),
                    ]
                } else {
                    &[None]
                };
            for &promotion in promotions {
                let mv = Move { from, to, promotion };
                if !king_attacked_after(state, mv) {
                    out.push(mv);
                }
            }
        }
    }
    out.sort_by_key(|m| m.sort_key());
    out
}

/// Applies a move found by [`slow_legal_moves`], with its own bookkeeping.
pub fn slow_apply(state: &GameState, mv: Move) -> GameState {
    replay(state, mv)
}

/// Node count over the naive generator and replay.
pub fn slow_perft(state: &GameState, depth: u32) -> u64 {
    if depth == 0 {
        return 1;
    }
    slow_legal_moves(state)
        .into_iter()
        .map(|mv| slow_perft(&replay(state, mv), depth - 1))
        .sum()
}
