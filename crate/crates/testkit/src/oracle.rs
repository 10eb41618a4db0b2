//! Forward mate search: iterative-deepening full-width minimax.
//!
//! This resolves game values by searching forward from the probed state,
//! the opposite direction from a retrograde table build. Results are exact:
//! a returned mate distance is proven minimal for the winner and maximal
//! for the defender by the bounded-depth induction the memo encodes.

use std::collections::HashMap;

use chessdyn_core::kernel::{Color, GameState, PieceKind};

/// Game value as the forward search proves it.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OracleValue {
    /// `winner` forces checkmate in exactly `dtm_plies` plies with best
    /// play by both sides (the defender stalls as long as possible).
    Win { winner: Color, dtm_plies: u16 },
    Draw,
}

/// Mover-relative resolved value.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Res {
    Win(u16),
    Loss(u16),
    Draw,
}

enum Memo {
    /// Budget-independent: once proven, proven forever.
    Exact(Res),
    /// Searching this state with the given ply budget settled nothing.
    NoMateWithin(u16),
}

/// Memoized forward searcher. One instance can serve many probes; exact
/// results accumulate across calls.
pub struct MateOracle {
    memo: HashMap<u64, Memo>,
}

impl MateOracle {
    pub fn new() -> MateOracle {
        MateOracle { memo: HashMap::new() }
    }

    /// Number of states with settled exact values so far.
    pub fn solved_states(&self) -> usize {
        self.memo
            .values()
            .filter(|m| matches!(m, Memo::Exact(_)))
            .count()
    }

    /// Resolves the state by deepening the ply budget 1, 2, ... `cap`.
    ///
    /// `cap` must exceed the longest forced mate reachable from the
    /// state's material set (see [`recommended_cap`]); under that premise
    /// a search that exhausts the cap without finding a forced mate has
    /// proven a draw.
    pub fn value(&mut self, state: &GameState, cap: u16) -> OracleValue {
        let mover = state.side_to_move();
        for budget in 1..=cap {
            match self.solve(state, budget) {
                Some(Res::Win(d)) => return OracleValue::Win { winner: mover, dtm_plies: d },
                Some(Res::Loss(d)) => {
                    return OracleValue::Win { winner: mover.opponent(), dtm_plies: d }
                }
                Some(Res::Draw) => return OracleValue::Draw,
                None => {}
            }
        }
        OracleValue::Draw
    }

    /// Bounded minimax. Returns the exact value when it is provable
    /// within `budget` plies, `None` otherwise.
    ///
    /// Exactness rests on: a state whose true mate distance is d resolves
    /// at every budget >= d (induction over budget), so an unresolved
    /// sibling can only hide a slower mate than any resolved one.
    fn solve(&mut self, state: &GameState, budget: u16) -> Option<Res> {
        let k = key(state);
        match self.memo.get(&k) {
            Some(Memo::Exact(r)) => return Some(*r),
            Some(Memo::NoMateWithin(b)) if *b >= budget => return None,
            _ => {}
        }

        let moves = state.legal_moves().expect("oracle probed with invalid state");
        if moves.is_empty() {
            let r = if state.in_check() { Res::Loss(0) } else { Res::Draw };
            self.memo.insert(k, Memo::Exact(r));
            return Some(r);
        }
        if state.board().piece_count() == 2 {
            self.memo.insert(k, Memo::Exact(Res::Draw));
            return Some(Res::Draw);
        }
        if budget == 0 {
            return None;
        }

        let mut fastest_win: Option<u16> = None;
        let mut slowest_loss: u16 = 0;
        let mut all_exact = true;
        let mut any_draw = false;
        for mv in moves {
            let child = state.apply_legal(mv);
            match self.solve(&child, budget - 1) {
                Some(Res::Loss(d)) => {
                    let win = d + 1;
                    fastest_win = Some(fastest_win.map_or(win, |w| w.min(win)));
                }
                Some(Res::Win(d)) => slowest_loss = slowest_loss.max(d + 1),
                Some(Res::Draw) => any_draw = true,
                None => all_exact = false,
            }
        }

        // A child left unresolved at budget-1 has a mate distance beyond
        // budget-1, so it cannot beat a resolved win of at most `budget`
        // plies. Wins claimed from memoized deeper results may only stand
        // when every sibling resolved, otherwise an unresolved sibling
        // could still hide a faster mate.
        let proven_win = fastest_win.filter(|&d| all_exact || d <= budget);
        let res = if let Some(d) = proven_win {
            Some(Res::Win(d))
        } else if !all_exact {
            None
        } else if any_draw {
            Some(Res::Draw)
        } else {
            Some(Res::Loss(slowest_loss))
        };
        match res {
            Some(r) => {
                self.memo.insert(k, Memo::Exact(r));
            }
            None => {
                let bound = match self.memo.get(&k) {
                    Some(Memo::NoMateWithin(b)) => (*b).max(budget),
                    _ => budget,
                };
                self.memo.insert(k, Memo::NoMateWithin(bound));
            }
        }
        res
    }
}

impl Default for MateOracle {
    fn default() -> Self {
        MateOracle::new()
    }
}

/// Ply cap comfortably above the longest forced mate for the piece mix of
/// `state`: queen endings need at most 20 plies, rook endings 32, pawn
/// endings (which promote into the former) roughly 56.
pub fn recommended_cap(state: &GameState) -> u16 {
    let mut cap = 2;
    for (_, piece) in state.board().pieces() {
        let needed = match piece.kind {
            PieceKind::Queen => 24,
            PieceKind::Rook => 36,
            PieceKind::Pawn | PieceKind::PawnEpCapturable => 64,
            PieceKind::Knight | PieceKind::Bishop => 4,
            PieceKind::KingCastle | PieceKind::KingNoCastle => 2,
        };
        cap = cap.max(needed);
    }
    cap
}

/// Packs up to five pieces (square, signed kind) plus side to move into a
/// u64 memo key. Pieces come out of the board in square order, so the
/// packing is injective.
fn key(state: &GameState) -> u64 {
    let mut k: u64 = match state.side_to_move() {
        Color::White => 0,
        Color::Black => 1,
    };
    let mut shift = 1;
    for (sq, piece) in state.board().pieces() {
        assert!(shift + 11 <= 64, "forward oracle supports at most five pieces");
        let code = (piece.code() + 9) as u64;
        k |= ((sq.index() as u64) << 5 | code) << shift;
        shift += 11;
    }
    k
}
