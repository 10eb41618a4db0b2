use std::collections::{BTreeMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dynamics::trajectory::run_trajectory;
use crate::dynamics::DynamicsError;
use crate::embedding::ConfigVector;
use crate::kernel::{Color, Status};
use crate::linalg::solve_spd;
use crate::solver::{ProbeSource, StrategyTable};
use crate::Scalar;

/// How far the control step is from the best affine map of the
/// configuration.
#[derive(Clone, Debug, Serialize)]
pub struct NonlinearityReport {
    /// Seed the sampling ran under.
    pub seed: u64,
    /// Independent sample rows the fit used.
    pub samples: u64,
    /// `sqrt(sum of squared fit errors / sum of squared control steps)`.
    /// Zero means the control is exactly affine on the sampled set.
    pub relative_residual: Scalar,
}

/// Plies each sampled trajectory may contribute.
const HARVEST_PLY_CAP: u32 = 64;

/// Draws with no new sample rows before harvesting gives up.
const STALE_DRAW_LIMIT: u64 = 1000;

/// Samples trajectories from `table`, collects one `(x, g(x))` row per
/// distinct visited state, fits the best affine map to the rows, and
/// reports the relative residual.
///
/// Harvesting stops once `samples` distinct rows exist or fresh draws
/// stop producing new states. Fewer than 65 rows cannot fix a 64-input
/// affine map and yield [`DynamicsError::Underdetermined`]. The same
/// seed always produces the identical report.
pub fn nonlinearity_test<P: ProbeSource + ?Sized>(
    table: &StrategyTable,
    source: &P,
    samples: u64,
    seed: u64,
) -> Result<NonlinearityReport, DynamicsError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: BTreeMap<(ConfigVector, Color), [Scalar; 64]> = BTreeMap::new();
    let mut stale = 0u64;
    while (rows.len() as u64) < samples && stale < STALE_DRAW_LIMIT {
        let slot = rng.gen_range(0..table.slot_count());
        let grown = harvest(table, source, slot, &mut rows)?;
        if grown {
            stale = 0;
        } else {
            stale += 1;
        }
    }

    let data: Vec<([Scalar; 64], [Scalar; 64])> = rows
        .into_iter()
        .map(|((vector, _), step)| (widen(vector.coords()), step))
        .collect();
    let relative_residual = affine_residual(&data)?;
    Ok(NonlinearityReport {
        seed,
        samples: data.len() as u64,
        relative_residual,
    })
}

fn harvest<P: ProbeSource + ?Sized>(
    table: &StrategyTable,
    source: &P,
    slot: u64,
    rows: &mut BTreeMap<(ConfigVector, Color), [Scalar; 64]>,
) -> Result<bool, DynamicsError> {
    let Some(state) = table.state_at(slot) else {
        return Ok(false);
    };
    let status = state.status().expect("indexed states are valid");
    if matches!(status, Status::Checkmate(_) | Status::Stalemate) {
        return Ok(false);
    }
    let run = run_trajectory(source, &state, HARVEST_PLY_CAP)?;
    let before = rows.len();
    let mut x = run.start;
    for step in &run.steps {
        rows.entry((x, step.side)).or_insert_with(|| widen(step.delta.coords()));
        x = step.vector;
    }
    Ok(rows.len() > before)
}

fn widen(coords: &[i8; 64]) -> [Scalar; 64] {
    let mut out = [0.0; 64];
    for (slot, &c) in out.iter_mut().zip(coords) {
        *slot = Scalar::from(c);
    }
    out
}

/// Fits `y = A x + b` to the rows by least squares and returns the
/// relative residual `sqrt(sum ‖y - fit(x)‖² / sum ‖y‖²)`.
///
/// Bit-identical duplicate rows are dropped first, so repeating a sample
/// cannot move the fit. Needs 65 rows spanning all input directions;
/// anything less is [`DynamicsError::Underdetermined`].
pub fn affine_residual(rows: &[([Scalar; 64], [Scalar; 64])]) -> Result<Scalar, DynamicsError> {
    let mut seen: HashSet<([u64; 64], [u64; 64])> = HashSet::new();
    let mut kept: Vec<&([Scalar; 64], [Scalar; 64])> = Vec::new();
    for row in rows {
        if seen.insert((row.0.map(Scalar::to_bits), row.1.map(Scalar::to_bits))) {
            kept.push(row);
        }
    }
    let have = kept.len();
    if have < 65 {
        return Err(DynamicsError::Underdetermined { have });
    }

    // Normal equations over design rows z = [x, 1].
    let mut gram = vec![vec![0.0f64; 65]; 65];
    let mut moments = vec![vec![0.0f64; 65]; 64];
    for (x, y) in &kept {
        let mut z = [0.0f64; 65];
        z[..64].copy_from_slice(x);
        z[64] = 1.0;
        for p in 0..65 {
            for q in p..65 {
                gram[p][q] += z[p] * z[q];
            }
            for (j, moment) in moments.iter_mut().enumerate() {
                moment[p] += z[p] * y[j];
            }
        }
    }
    for p in 0..65 {
        for q in 0..p {
            gram[p][q] = gram[q][p];
        }
    }

    let coeffs = solve_spd(&gram, &moments).ok_or(DynamicsError::Underdetermined { have })?;

    let mut error_sq = 0.0;
    let mut signal_sq = 0.0;
    for (x, y) in &kept {
        for (j, w) in coeffs.iter().enumerate() {
            let fit: Scalar = (0..64).map(|p| w[p] * x[p]).sum::<Scalar>() + w[64];
            error_sq += (y[j] - fit) * (y[j] - fit);
            signal_sq += y[j] * y[j];
        }
    }
    if signal_sq == 0.0 {
        return Ok(0.0);
    }
    Ok((error_sq / signal_sq).sqrt())
}
