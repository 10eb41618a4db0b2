//! Move generation, move application, and status classification.

use super::piece::{Color, Piece, PieceKind};
use super::square::Square;
use super::state::{Board, GameState, IllegalMoveRule, Move, Status};

const KING_STEPS: [(i8, i8); 8] = [
    (-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1),
];
const KNIGHT_JUMPS: [(i8, i8); 8] = [
    (-2, -1), (-1, -2), (1, -2), (2, -1), (-2, 1), (-1, 2), (1, 2), (2, 1),
];
const ROOK_RAYS: [(i8, i8); 4] = [(0, 1), (0, -1), (1, 0), (-1, 0)];
const BISHOP_RAYS: [(i8, i8); 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];

/// True when `by` attacks `target` (occupation of `target` is irrelevant).
pub(crate) fn is_attacked(board: &Board, target: Square, by: Color) -> bool {
    // Pawns: a pawn on (file +- 1, rank - forward) attacks the target.
    for df in [-1, 1] {
        if let Some(sq) = target.offset(df, -by.forward()) {
            if board.piece_at(sq).is_some_and(|p| p.color == by && p.kind.is_pawn()) {
                return true;
            }
        }
    }
    for &(df, dr) in &KNIGHT_JUMPS {
        if let Some(sq) = target.offset(df, dr) {
            if board
                .piece_at(sq)
                .is_some_and(|p| p.color == by && p.kind == PieceKind::Knight)
            {
                return true;
            }
        }
    }
    for &(df, dr) in &KING_STEPS {
        if let Some(sq) = target.offset(df, dr) {
            if board.piece_at(sq).is_some_and(|p| p.color == by && p.kind.is_king()) {
                return true;
            }
        }
    }
    for &(df, dr) in ROOK_RAYS.iter().chain(&BISHOP_RAYS) {
        let diagonal = df != 0 && dr != 0;
        let mut sq = target;
        while let Some(next) = sq.offset(df, dr) {
            sq = next;
            match board.piece_at(sq) {
                None => continue,
                Some(p) => {
                    let slides = match p.kind {
                        PieceKind::Queen => true,
                        PieceKind::Rook => !diagonal,
                        PieceKind::Bishop => diagonal,
                        _ => false,
                    };
                    if p.color == by && slides {
                        return true;
                    }
                    break;
                }
            }
        }
    }
    false
}

pub(crate) fn in_check(board: &Board, color: Color) -> bool {
    match board.king_square(color) {
        Some(sq) => is_attacked(board, sq, color.opponent()),
        None => false,
    }
}

fn push_pawn_targets(out: &mut Vec<Move>, from: Square, to: Square, color: Color) {
    let last_rank = if color == Color::White { 7 } else { 0 };
    if to.rank() == last_rank {
        for kind in PieceKind::PROMOTIONS {
            out.push(Move::promoting(from, to, kind));
        }
    } else {
        out.push(Move::new(from, to));
    }
}

fn pseudo_moves(state: &GameState) -> Vec<Move> {
    let board = state.board();
    let us = state.side_to_move();
    let mut out = Vec::with_capacity(32);
    for (from, piece) in board.pieces() {
        if piece.color != us {
            continue;
        }
        match piece.kind {
            PieceKind::Pawn | PieceKind::PawnEpCapturable => {
                let fwd = us.forward();
                if let Some(to) = from.offset(0, fwd) {
                    if board.piece_at(to).is_none() {
                        push_pawn_targets(&mut out, from, to, us);
                        let start_rank = if us == Color::White { 1 } else { 6 };
                        if from.rank() == start_rank {
                            let two = from.offset(0, 2 * fwd).expect("double step on board");
                            if board.piece_at(two).is_none() {
                                out.push(Move::new(from, two));
                            }
                        }
                    }
                }
                for df in [-1, 1] {
                    let Some(to) = from.offset(df, fwd) else { continue };
                    match board.piece_at(to) {
                        Some(p) if p.color != us => push_pawn_targets(&mut out, from, to, us),
                        Some(_) => {}
                        None => {
                            // En passant: the capturable pawn sits beside us,
                            // on the square behind the diagonal target.
                            let beside = Square::from_file_rank(to.file(), from.rank())
                                .expect("ep victim square on board");
                            if board.piece_at(beside).is_some_and(|p| {
                                p.color != us && p.kind == PieceKind::PawnEpCapturable
                            }) {
                                out.push(Move::new(from, to));
                            }
                        }
                    }
                }
            }
            PieceKind::Knight | PieceKind::KingCastle | PieceKind::KingNoCastle => {
                let steps: &[(i8, i8)] = if piece.kind == PieceKind::Knight {
                    &KNIGHT_JUMPS
                } else {
                    &KING_STEPS
                };
                for &(df, dr) in steps {
                    if let Some(to) = from.offset(df, dr) {
                        if board.piece_at(to).is_none_or(|p| p.color != us) {
                            out.push(Move::new(from, to));
                        }
                    }
                }
            }
            PieceKind::Bishop | PieceKind::Rook | PieceKind::Queen => {
                let rays: &[(i8, i8)] = match piece.kind {
                    PieceKind::Bishop => &BISHOP_RAYS,
                    PieceKind::Rook => &ROOK_RAYS,
                    _ => &[ROOK_RAYS[0], ROOK_RAYS[1], ROOK_RAYS[2], ROOK_RAYS[3],
                           BISHOP_RAYS[0], BISHOP_RAYS[1], BISHOP_RAYS[2], BISHOP_RAYS[3]],
                };
                for &(df, dr) in rays {
                    let mut sq = from;
                    while let Some(to) = sq.offset(df, dr) {
                        sq = to;
                        match board.piece_at(to) {
                            None => out.push(Move::new(from, to)),
                            Some(p) => {
                                if p.color != us {
                                    out.push(Move::new(from, to));
                                }
                                break;
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

pub(crate) fn legal_moves_unchecked(state: &GameState) -> Vec<Move> {
    let us = state.side_to_move();
    let mut moves: Vec<Move> = pseudo_moves(state)
        .into_iter()
        .filter(|&mv| {
            let next = apply_move_unchecked(state, mv);
            !in_check(next.board(), us)
        })
        .collect();
    moves.sort_by_key(|m| m.sort_key());
    moves
}

/// Applies a pseudo-legal move with full bookkeeping: en-passant removal,
/// double-step flagging, promotion, castling-right loss on king moves, and
/// reversion of the opponent's expired en-passant flag.
pub(crate) fn apply_move_unchecked(state: &GameState, mv: Move) -> GameState {
    let us = state.side_to_move();
    let mut board = *state.board();
    let piece = board.piece_at(mv.from).expect("move from an occupied square");
    debug_assert_eq!(piece.color, us);

    if piece.kind.is_pawn() && mv.from.file() != mv.to.file() && board.piece_at(mv.to).is_none() {
        let victim = Square::from_file_rank(mv.to.file(), mv.from.rank())
            .expect("ep victim square on board");
        debug_assert!(board
            .piece_at(victim)
            .is_some_and(|p| p.color != us && p.kind == PieceKind::PawnEpCapturable));
        board.set(victim, None);
    }

    let landed_kind = if piece.kind.is_pawn() {
        match mv.promotion {
            Some(kind) => kind,
            None if mv.from.rank().abs_diff(mv.to.rank()) == 2 => PieceKind::PawnEpCapturable,
            None => PieceKind::Pawn,
        }
    } else if piece.kind == PieceKind::KingCastle {
        PieceKind::KingNoCastle
    } else {
        piece.kind
    };
    board.set(mv.from, None);
    board.set(mv.to, Some(Piece::new(us, landed_kind)));

    // The opponent's double-step window closes as soon as we reply.
    for sq in Square::all() {
        if sq != mv.to {
            if let Some(p) = board.piece_at(sq) {
                if p.kind == PieceKind::PawnEpCapturable && p.color != us {
                    board.set(sq, Some(Piece::new(p.color, PieceKind::Pawn)));
                }
            }
        }
    }

    GameState::from_parts_unchecked(board, us.opponent(), state.ply_index() + 1)
}

pub(crate) fn status_unchecked(state: &GameState) -> Status {
    if legal_moves_unchecked(state).is_empty() {
        if state.in_check() {
            Status::Checkmate(state.side_to_move())
        } else {
            Status::Stalemate
        }
    } else if state.board().piece_count() == 2 {
        Status::InsufficientMaterial
    } else {
        Status::Ongoing
    }
}

/// Names the first rule a rejected move violates, in a fixed check order.
pub(crate) fn classify_illegal(state: &GameState, mv: Move) -> IllegalMoveRule {
    let board = state.board();
    let us = state.side_to_move();
    let Some(piece) = board.piece_at(mv.from) else {
        return IllegalMoveRule::FromEmpty;
    };
    if piece.color != us {
        return IllegalMoveRule::NotMoversPiece;
    }
    if mv.from == mv.to {
        return IllegalMoveRule::FromEqualsTo;
    }
    if board.piece_at(mv.to).is_some_and(|p| p.color == us) {
        return IllegalMoveRule::CapturesOwnPiece;
    }
    let last_rank = if us == Color::White { 7 } else { 0 };
    let needs_promotion = piece.kind.is_pawn() && mv.to.rank() == last_rank;
    let promotes_ok = mv
        .promotion
        .is_none_or(|k| PieceKind::PROMOTIONS.contains(&k));
    if needs_promotion != mv.promotion.is_some() || !promotes_ok {
        return IllegalMoveRule::BadPromotion;
    }
    let stripped = Move { promotion: None, ..mv };
    let reachable = pseudo_moves(state)
        .iter()
        .any(|m| Move { promotion: None, ..*m } == stripped);
    if !reachable {
        return IllegalMoveRule::BadGeometry;
    }
    IllegalMoveRule::LeavesKingInCheck
}

/// Leaf count of the legal move tree at the given depth.
pub fn perft(state: &GameState, depth: u32) -> u64 {
    if depth == 0 {
        return 1;
    }
    legal_moves_unchecked(state)
        .into_iter()
        .map(|mv| perft(&apply_move_unchecked(state, mv), depth - 1))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::super::parse_fen;
    use super::*;

    fn moves_of(fen: &str) -> Vec<String> {
        parse_fen(fen)
            .unwrap()
            .legal_moves()
            .unwrap()
            .iter()
            .map(Move::to_string)
            .collect()
    }

    #[test]
    fn cornered_king_has_three_moves() {
        assert_eq!(moves_of("7k/8/8/8/8/8/8/K7 w - - 0 1"), ["a1b1", "a1a2", "a1b2"]);
    }

    #[test]
    fn queen_and_king_make_twenty_seven() {
        let state = parse_fen("k7/7Q/1K6/8/8/8/8/8 w - - 0 1").unwrap();
        let moves = state.legal_moves().unwrap();
        assert_eq!(moves.len(), 27);
        let king_moves = moves.iter().filter(|m| m.from.index() == 41).count();
        let queen_moves = moves.iter().filter(|m| m.from.index() == 55).count();
        assert_eq!((king_moves, queen_moves), (6, 21));
        // Squares beside the enemy king are unreachable for the king.
        assert!(!moves.contains(&"b6a7".parse().unwrap()));
        assert!(!moves.contains(&"b6b7".parse().unwrap()));
    }

    #[test]
    fn stalemate_has_no_moves() {
        let state = parse_fen("k7/2K5/1Q6/8/8/8/8/8 b - - 0 1").unwrap();
        assert_eq!(state.legal_moves().unwrap(), []);
        assert_eq!(state.status().unwrap(), Status::Stalemate);
    }

    #[test]
    fn checkmate_names_the_loser() {
        let state = parse_fen("k7/Q7/1K6/8/8/8/8/8 b - - 0 1").unwrap();
        assert_eq!(state.status().unwrap(), Status::Checkmate(Color::Black));
    }

    #[test]
    fn bare_kings_insufficient_but_mobile() {
        let state = parse_fen("7k/8/8/8/8/8/8/K7 w - - 0 1").unwrap();
        assert_eq!(state.status().unwrap(), Status::InsufficientMaterial);
        assert!(!state.is_halted());
    }

    #[test]
    fn double_step_flags_the_pawn() {
        let state = parse_fen("4k3/8/8/8/8/8/4P3/4K3 w - - 0 1").unwrap();
        let next = state.apply_move("e2e4".parse().unwrap()).unwrap();
        assert_eq!(
            next.board().piece_at("e4".parse().unwrap()),
            Some(Piece::new(Color::White, PieceKind::PawnEpCapturable))
        );
        // Any reply reverts the flag.
        let after = next.apply_move("e8d8".parse().unwrap()).unwrap();
        assert_eq!(
            after.board().piece_at("e4".parse().unwrap()),
            Some(Piece::new(Color::White, PieceKind::Pawn))
        );
    }

    #[test]
    fn en_passant_capture_removes_the_victim() {
        let state = parse_fen("4k3/8/8/8/4Pp2/8/8/4K3 b - e3 0 1").unwrap();
        let next = state.apply_move("f4e3".parse().unwrap()).unwrap();
        assert_eq!(next.board().piece_at("e4".parse().unwrap()), None);
        assert_eq!(
            next.board().piece_at("e3".parse().unwrap()),
            Some(Piece::new(Color::Black, PieceKind::Pawn))
        );
    }

    #[test]
    fn illegal_moves_name_their_rule() {
        let state = parse_fen("k7/7Q/1K6/8/8/8/8/8 w - - 0 1").unwrap();
        let cases = [
            ("e4e5", IllegalMoveRule::FromEmpty),
            ("a8a7", IllegalMoveRule::NotMoversPiece),
            ("h7h7", IllegalMoveRule::FromEqualsTo),
            ("b6c4", IllegalMoveRule::BadGeometry),
            ("h7h8q", IllegalMoveRule::BadPromotion),
            ("b6b7", IllegalMoveRule::LeavesKingInCheck),
        ];
        for (text, rule) in cases {
            let mv: Move = text.parse().unwrap();
            match state.apply_move(mv) {
                Err(super::super::KernelError::IllegalMove { rule: got, .. }) => {
                    assert_eq!(got, rule, "{text}");
                }
                other => panic!("{text}: expected rejection, got {other:?}"),
            }
        }
    }

    #[test]
    fn king_move_drops_castling_rights() {
        let state = parse_fen("4k3/8/8/8/8/8/8/4K2R w K - 0 1").unwrap();
        assert_eq!(
            state.board().piece_at("e1".parse().unwrap()).unwrap().kind,
            PieceKind::KingCastle
        );
        let next = state.apply_move("e1d1".parse().unwrap()).unwrap();
        assert_eq!(
            next.board().piece_at("d1".parse().unwrap()).unwrap().kind,
            PieceKind::KingNoCastle
        );
    }

    #[test]
    fn startpos_perft_matches_published_counts() {
        let state =
            parse_fen("rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1").unwrap();
        assert_eq!(perft(&state, 1), 20);
        assert_eq!(perft(&state, 2), 400);
        assert_eq!(perft(&state, 3), 8_902);
    }
}
