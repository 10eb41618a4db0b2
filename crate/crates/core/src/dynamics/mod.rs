//! Play under the exact strategy as a discrete dynamical system.
//!
//! One ply advances the configuration vector by the control step
//! `g(x) = f(x) - x`, so a game is a trajectory of an autonomous system
//! with unit time steps. This module generates those trajectories,
//! produces minimal perturbations of a start state, measures how fast
//! perturbed trajectories separate, estimates effective per-ply expansion
//! exponents, and fits the best affine approximation to `g` to quantify
//! how far the control is from linear.

mod campaign;
mod divergence;
mod nonlinearity;
mod perturb;
mod trajectory;

use thiserror::Error;

use crate::solver::SolverError;

pub use campaign::{divergence_campaign, CampaignReport};
pub use divergence::{divergence, exponent_estimate, DivergenceReport};
pub use nonlinearity::{affine_residual, nonlinearity_test, NonlinearityReport};
pub use perturb::{perturb, PerturbationMode};
pub use trajectory::{run_trajectory, Trajectory, TrajectoryEnd, TrajectoryStep};

/// Failures of trajectory and measurement operations.
#[derive(Debug, Error)]
pub enum DynamicsError {
    /// Divergence needs two distinct starts; equal starts have distance 0.
    #[error("divergence requires two different start states")]
    IdenticalStarts,
    /// Both starts must have the same side to move.
    #[error("start states must share the side to move")]
    SideMismatch,
    /// Every ply in the window had distance 0 or the window missed the
    /// series entirely.
    #[error("no usable plies in the exponent window")]
    EmptyExponentWindow,
    /// Too few independent samples to fix a 64-dimensional affine map.
    #[error("{have} independent samples cannot fix an affine map on 64 coordinates (need at least 65 rows spanning every input direction)")]
    Underdetermined { have: usize },
    /// No sampled state produced any usable perturbation pair.
    #[error("sampled states admit no perturbations under the requested mode")]
    NoPerturbations,
    #[error(transparent)]
    Solver(#[from] SolverError),
}
