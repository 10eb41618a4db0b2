use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dynamics::divergence::divergence;
use crate::dynamics::perturb::{perturb, PerturbationMode};
use crate::dynamics::DynamicsError;
use crate::embedding::Metric;
use crate::kernel::Status;
use crate::solver::{ProbeSource, StrategyTable};
use crate::Scalar;

/// Aggregate divergence statistics over many sampled perturbation pairs.
#[derive(Clone, Debug, Serialize)]
pub struct CampaignReport {
    /// Seed the sampling ran under.
    pub seed: u64,
    /// Number of (state, perturbed state) pairs measured.
    pub pairs: u64,
    /// Fraction of pairs whose starts have different outcomes.
    pub outcome_flip_fraction: Scalar,
    /// Fraction of pairs that played different move sequences.
    pub move_path_flip_fraction: Scalar,
    /// Mean effective exponent over pairs that produced one.
    pub exponent_mean: Option<Scalar>,
    /// Largest effective exponent seen.
    pub exponent_max: Option<Scalar>,
    /// Count of pairs by first separation ply, ascending; pairs that
    /// never separated are counted in `no_separation_count` instead.
    pub first_separation_histogram: Vec<(u32, u64)>,
    /// Pairs whose runs played identical move sequences throughout.
    pub no_separation_count: u64,
}

/// How many states may be drawn without yielding a single pair before
/// the campaign concludes the mode produces nothing on this table.
const BARREN_DRAW_LIMIT: u64 = 1000;

/// Measures divergence for `samples` perturbation pairs drawn from
/// `table` and aggregates the results.
///
/// States are sampled uniformly from the table's index, rejecting
/// unoccupied slots and states with no legal move. Each accepted state
/// contributes one pair per perturbation that `source` covers, until the
/// quota is met. `source` must cover `table` itself and should cover the
/// other solved material sets so retypes across materials stay in play.
/// The same seed always produces the identical report.
pub fn divergence_campaign<P: ProbeSource + ?Sized>(
    table: &StrategyTable,
    source: &P,
    mode: PerturbationMode,
    samples: u64,
    ply_cap: u32,
    metric: Metric,
    seed: u64,
) -> Result<CampaignReport, DynamicsError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = 0u64;
    let mut draws = 0u64;
    let mut outcome_flips = 0u64;
    let mut move_path_flips = 0u64;
    let mut exponent_sum = 0.0;
    let mut exponent_count = 0u64;
    let mut exponent_max: Option<Scalar> = None;
    let mut histogram: BTreeMap<u32, u64> = BTreeMap::new();
    let mut no_separation = 0u64;

    while pairs < samples {
        if pairs == 0 && draws >= BARREN_DRAW_LIMIT {
            return Err(DynamicsError::NoPerturbations);
        }
        draws += 1;
        let slot = rng.gen_range(0..table.slot_count());
        let Some(state) = table.state_at(slot) else {
            continue;
        };
        let status = state.status().expect("indexed states are valid");
        if matches!(status, Status::Checkmate(_) | Status::Stalemate) {
            continue;
        }
        for perturbed in perturb(&state, mode) {
            if pairs >= samples {
                break;
            }
            if !source.covers(&perturbed) {
                continue;
            }
            let report = divergence(source, &state, &perturbed, ply_cap, metric)?;
            pairs += 1;
            if report.outcome_flip {
                outcome_flips += 1;
            }
            if report.move_path_flip {
                move_path_flips += 1;
            }
            if let Some(exponent) = report.effective_exponent {
                exponent_sum += exponent;
                exponent_count += 1;
                exponent_max = Some(exponent_max.map_or(exponent, |m: Scalar| m.max(exponent)));
            }
            match report.first_separation_ply {
                Some(ply) => *histogram.entry(ply).or_insert(0) += 1,
                None => no_separation += 1,
            }
        }
    }

    let fraction = |count: u64| {
        if pairs == 0 {
            0.0
        } else {
            count as Scalar / pairs as Scalar
        }
    };
    Ok(CampaignReport {
        seed,
        pairs,
        outcome_flip_fraction: fraction(outcome_flips),
        move_path_flip_fraction: fraction(move_path_flips),
        exponent_mean: (exponent_count > 0).then(|| exponent_sum / exponent_count as Scalar),
        exponent_max,
        first_separation_histogram: histogram.into_iter().collect(),
        no_separation_count: no_separation,
    })
}
