use std::ops::RangeInclusive;

use serde::Serialize;

use crate::dynamics::trajectory::run_trajectory;
use crate::dynamics::DynamicsError;
use crate::embedding::{distance, Metric};
use crate::kernel::GameState;
use crate::solver::ProbeSource;
use crate::Scalar;

/// How two nearby starts drift apart under the strategy.
#[derive(Clone, Debug, Serialize)]
pub struct DivergenceReport {
    /// Distance between the two starts; always positive.
    pub d0: Scalar,
    /// Distance after each ply: `series[k]` compares the configurations
    /// `k + 1` plies in, up to the shorter trajectory.
    pub series: Vec<Scalar>,
    /// First ply, counted from 1, where the two runs chose different
    /// moves.
    pub first_separation_ply: Option<u32>,
    /// The two starts have different game-theoretic outcomes.
    pub outcome_flip: bool,
    /// The two runs did not play the same move sequence.
    pub move_path_flip: bool,
    /// Mean per-ply expansion rate over the default window, when any ply
    /// in it is usable.
    pub effective_exponent: Option<Scalar>,
}

/// Runs both starts to at most `ply_cap` plies and measures their
/// distance after every ply.
///
/// The starts must differ and share the side to move. Flip indicators
/// compare the tablebase outcomes of the starts and the chosen move
/// sequences.
pub fn divergence<P: ProbeSource + ?Sized>(
    source: &P,
    a: &GameState,
    b: &GameState,
    ply_cap: u32,
    metric: Metric,
) -> Result<DivergenceReport, DynamicsError> {
    if a.side_to_move() != b.side_to_move() {
        return Err(DynamicsError::SideMismatch);
    }
    if a == b {
        return Err(DynamicsError::IdenticalStarts);
    }
    let outcome_flip = source.probe(a)?.wdl != source.probe(b)?.wdl;
    let run_a = run_trajectory(source, a, ply_cap)?;
    let run_b = run_trajectory(source, b, ply_cap)?;

    let d0: Scalar = distance(&run_a.start, &run_b.start, metric);
    let plies = run_a.steps.len().min(run_b.steps.len());
    let series: Vec<Scalar> = (0..plies)
        .map(|k| distance(&run_a.steps[k].vector, &run_b.steps[k].vector, metric))
        .collect();
    let first_separation_ply = run_a
        .steps
        .iter()
        .zip(&run_b.steps)
        .position(|(step_a, step_b)| step_a.mv != step_b.mv)
        .map(|k| k as u32 + 1);

    let mut report = DivergenceReport {
        d0,
        series,
        first_separation_ply,
        outcome_flip,
        move_path_flip: first_separation_ply.is_some(),
        effective_exponent: None,
    };
    let window_end = report.series.len().min(8) as u32;
    if window_end >= 1 {
        report.effective_exponent = exponent_estimate(&report, 1..=window_end).ok();
    }
    Ok(report)
}

/// Mean of `ln(d_n / d0) / n` over the plies of `window`, skipping plies
/// where the distance is zero or the series has ended.
///
/// This is an effective expansion rate, not a limit: the state space is
/// finite, so only short windows say anything. Callers must ensure
/// `d0 > 0`, which [`divergence`] reports always satisfy.
pub fn exponent_estimate(
    report: &DivergenceReport,
    window: RangeInclusive<u32>,
) -> Result<Scalar, DynamicsError> {
    let mut sum = 0.0;
    let mut used = 0u32;
    for n in window {
        if n == 0 {
            continue;
        }
        let Some(&dn) = report.series.get(n as usize - 1) else {
            continue;
        };
        if dn <= 0.0 {
            continue;
        }
        sum += (dn / report.d0).ln() / Scalar::from(n);
        used += 1;
    }
    if used == 0 {
        return Err(DynamicsError::EmptyExponentWindow);
    }
    Ok(sum / Scalar::from(used))
}
