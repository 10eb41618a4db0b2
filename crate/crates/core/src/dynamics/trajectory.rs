use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::dynamics::DynamicsError;
use crate::embedding::{encode, ConfigVector, DeltaVector};
use crate::kernel::{Color, GameState, Move, Status};
use crate::solver::{pure_strategy_move, ProbeSource};

/// Why a trajectory stopped.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrajectoryEnd {
    /// The side to move has no legal reply and is in check.
    Checkmate,
    /// The side to move has no legal reply and is not in check.
    Stalemate,
    /// A capture left only the two kings on the board.
    InsufficientMaterial,
    /// The (vector, side to move) pair was seen earlier in the same run,
    /// so play has entered a loop it can never leave.
    CycleDetected,
    /// The requested number of plies was reached.
    PlyCapReached,
}

impl fmt::Display for TrajectoryEnd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            TrajectoryEnd::Checkmate => "checkmate",
            TrajectoryEnd::Stalemate => "stalemate",
            TrajectoryEnd::InsufficientMaterial => "insufficient_material",
            TrajectoryEnd::CycleDetected => "cycle_detected",
            TrajectoryEnd::PlyCapReached => "ply_cap_reached",
        };
        f.write_str(name)
    }
}

/// One ply of a trajectory.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TrajectoryStep {
    /// Configuration after the move.
    pub vector: ConfigVector,
    /// Who moved.
    pub side: Color,
    /// The move the strategy chose.
    pub mv: Move,
    /// Control step for this ply: the new vector minus the old one.
    pub delta: DeltaVector,
}

/// A run of the system from one start state.
#[derive(Clone, Debug)]
pub struct Trajectory {
    /// Configuration at ply 0.
    pub start: ConfigVector,
    /// Side to move at ply 0.
    pub start_side: Color,
    /// Plies actually played, in order.
    pub steps: Vec<TrajectoryStep>,
    /// Why the run stopped.
    pub terminal: TrajectoryEnd,
    /// The cap the run was given.
    pub ply_cap: u32,
    final_state: GameState,
}

impl Trajectory {
    /// State the run stopped in.
    pub fn final_state(&self) -> GameState {
        self.final_state
    }

    /// Configuration the run stopped in.
    pub fn final_vector(&self) -> ConfigVector {
        self.steps.last().map_or(self.start, |step| step.vector)
    }

    /// Configuration after `ply` plies; `None` past the end of the run.
    pub fn vector_at(&self, ply: usize) -> Option<ConfigVector> {
        if ply == 0 {
            Some(self.start)
        } else {
            self.steps.get(ply - 1).map(|step| step.vector)
        }
    }
}

/// Plays the strategy from `start` until the game ends, play repeats a
/// configuration, or `ply_cap` plies have been made.
///
/// Bare-kings positions end the run only when a capture creates them
/// mid-run; a bare-kings start keeps shuffling kings until it cycles or
/// hits the cap.
pub fn run_trajectory<P: ProbeSource + ?Sized>(
    source: &P,
    start: &GameState,
    ply_cap: u32,
) -> Result<Trajectory, DynamicsError> {
    source.probe(start)?;
    let start_vector = encode(start);
    let mut seen: HashSet<(ConfigVector, Color)> = HashSet::new();
    seen.insert((start_vector, start.side_to_move()));

    let mut state = *start;
    let mut vector = start_vector;
    let mut steps = Vec::new();
    let terminal = loop {
        match state.status().expect("states along a trajectory stay valid") {
            Status::Checkmate(_) => break TrajectoryEnd::Checkmate,
            Status::Stalemate => break TrajectoryEnd::Stalemate,
            Status::Ongoing | Status::InsufficientMaterial => {}
        }
        if steps.len() as u32 >= ply_cap {
            break TrajectoryEnd::PlyCapReached;
        }
        let mv = pure_strategy_move(source, &state)?;
        let side = state.side_to_move();
        let before = state.board().piece_count();
        state = state.apply_legal(mv);
        let next_vector = encode(&state);
        steps.push(TrajectoryStep {
            vector: next_vector,
            side,
            mv,
            delta: next_vector - vector,
        });
        vector = next_vector;
        if state.board().piece_count() == 2 && before > 2 {
            break TrajectoryEnd::InsufficientMaterial;
        }
        if !seen.insert((vector, state.side_to_move())) {
            break TrajectoryEnd::CycleDetected;
        }
    };

    Ok(Trajectory {
        start: start_vector,
        start_side: start.side_to_move(),
        steps,
        terminal,
        ply_cap,
        final_state: state,
    })
}
