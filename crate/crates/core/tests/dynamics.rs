//! Trajectories, perturbation pairs, and the divergence and nonlinearity
//! measurements, exercised against freshly built tables. Expected values
//! come from hand analysis of one-move endings.

use std::sync::OnceLock;

use chessdyn_core::dynamics::{
    divergence, divergence_campaign, nonlinearity_test, perturb, run_trajectory, DynamicsError,
    PerturbationMode, TrajectoryEnd,
};
use chessdyn_core::embedding::{encode, Metric};
use chessdyn_core::kernel::parse_fen;
use chessdyn_core::solver::{build_tablebase, StrategyTable, TableStore, Wdl};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn kvk() -> &'static StrategyTable {
    static T: OnceLock<StrategyTable> = OnceLock::new();
    T.get_or_init(|| build_tablebase("KvK").expect("bare kings solve"))
}

fn kqk() -> &'static StrategyTable {
    static T: OnceLock<StrategyTable> = OnceLock::new();
    T.get_or_init(|| build_tablebase("KQvK").expect("queen endgame solves"))
}

fn krk() -> &'static StrategyTable {
    static T: OnceLock<StrategyTable> = OnceLock::new();
    T.get_or_init(|| build_tablebase("KRvK").expect("rook endgame solves"))
}

fn store() -> &'static TableStore {
    static S: OnceLock<TableStore> = OnceLock::new();
    S.get_or_init(|| {
        let mut store = TableStore::new();
        store.push(kvk().clone());
        store.push(kqk().clone());
        store.push(krk().clone());
        store
    })
}

const MATE_IN_ONE: &str = "k7/7Q/1K6/8/8/8/8/8 w - - 0 1";

#[test]
fn a_mate_in_one_run_is_a_single_checkmate_step() {
    let start = parse_fen(MATE_IN_ONE).unwrap();
    let run = run_trajectory(kqk(), &start, 100).unwrap();
    assert_eq!(run.terminal, TrajectoryEnd::Checkmate);
    assert_eq!(run.steps.len(), 1);
    assert_eq!(run.steps[0].mv, "h7a7".parse().unwrap());
    assert_eq!(run.start + run.steps[0].delta, run.steps[0].vector);
    assert_eq!(encode(&run.final_state()), run.final_vector());
}

#[test]
fn bare_king_runs_never_end_the_game() {
    for fen in [
        "7k/8/8/8/8/8/8/K7 w - - 0 1",
        "4k3/8/8/8/8/8/8/4K3 w - - 0 1",
        "8/8/3k4/8/8/4K3/8/8 b - - 0 1",
    ] {
        let start = parse_fen(fen).unwrap();
        let run = run_trajectory(kvk(), &start, 50).unwrap();
        assert!(
            matches!(
                run.terminal,
                TrajectoryEnd::CycleDetected | TrajectoryEnd::PlyCapReached
            ),
            "{fen} ended {}",
            run.terminal
        );
        assert!(run.steps.len() <= 50);
    }
}

#[test]
fn a_forced_queen_capture_bares_the_kings_and_halts() {
    let start = parse_fen("k7/1Q6/8/8/8/8/8/K7 b - - 0 1").unwrap();
    assert_eq!(kqk().probe(&start).unwrap().wdl, Wdl::Draw);
    let run = run_trajectory(kqk(), &start, 50).unwrap();
    assert_eq!(run.terminal, TrajectoryEnd::InsufficientMaterial);
    assert_eq!(run.steps.len(), 1);
    assert_eq!(run.steps[0].mv, "a8b7".parse().unwrap());
    assert_eq!(run.final_state().board().piece_count(), 2);
}

#[test]
fn winning_starts_reach_checkmate_in_exactly_the_stored_distance() {
    let table = kqk();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 40 {
        let slot = rng.gen_range(0..table.slot_count());
        let Some(state) = table.state_at(slot) else {
            continue;
        };
        let entry = table.entry_at(slot);
        if entry.wdl != Wdl::WhiteWin || entry.terminal {
            continue;
        }
        let dtm = u32::from(entry.dtm_plies.unwrap());
        let run = run_trajectory(table, &state, dtm + 8).unwrap();
        assert_eq!(run.terminal, TrajectoryEnd::Checkmate, "slot {slot}");
        assert_eq!(run.steps.len() as u32, dtm, "slot {slot}");
        checked += 1;
    }
}

#[test]
fn runs_are_deterministic() {
    let start = parse_fen("8/8/8/3k4/8/8/8/KQ6 b - - 0 1").unwrap();
    let first = run_trajectory(kqk(), &start, 60).unwrap();
    let second = run_trajectory(kqk(), &start, 60).unwrap();
    assert_eq!(first.steps, second.steps);
    assert_eq!(first.terminal, second.terminal);
}

#[test]
fn terminal_names_serialize_in_snake_case() {
    let json = serde_json::to_string(&TrajectoryEnd::CycleDetected).unwrap();
    assert_eq!(json, "\"cycle_detected\"");
    assert_eq!(TrajectoryEnd::PlyCapReached.to_string(), "ply_cap_reached");
}

#[test]
fn the_queen_to_rook_retype_separates_at_the_mating_move() {
    let a = parse_fen(MATE_IN_ONE).unwrap();
    let b = parse_fen("k7/7R/1K6/8/8/8/8/8 w - - 0 1").unwrap();
    assert!(perturb(&a, PerturbationMode::Retype).contains(&b));

    let report = divergence(store(), &a, &b, 100, Metric::Hamming).unwrap();
    assert_eq!(report.d0, 1.0);
    assert_eq!(report.series, vec![2.0]);
    assert_eq!(report.first_separation_ply, Some(1));
    assert!(report.move_path_flip);
    assert!(!report.outcome_flip, "both sides of the pair are won");
    let exponent = report.effective_exponent.unwrap();
    assert!((exponent - 2.0f64.ln()).abs() < 1e-12);
}

#[test]
fn degenerate_divergence_inputs_are_rejected() {
    let a = parse_fen(MATE_IN_ONE).unwrap();
    assert!(matches!(
        divergence(store(), &a, &a, 10, Metric::Hamming),
        Err(DynamicsError::IdenticalStarts)
    ));
    let other_side = parse_fen("k7/2K5/1Q6/8/8/8/8/8 b - - 0 1").unwrap();
    assert!(matches!(
        divergence(store(), &a, &other_side, 10, Metric::Hamming),
        Err(DynamicsError::SideMismatch)
    ));
}

#[test]
fn a_zero_ply_cap_leaves_no_series_and_no_exponent() {
    let a = parse_fen(MATE_IN_ONE).unwrap();
    let b = parse_fen("k7/7R/1K6/8/8/8/8/8 w - - 0 1").unwrap();
    let report = divergence(store(), &a, &b, 0, Metric::Hamming).unwrap();
    assert_eq!(report.d0, 1.0);
    assert!(report.series.is_empty());
    assert_eq!(report.first_separation_ply, None);
    assert!(!report.move_path_flip);
    assert_eq!(report.effective_exponent, None);
}

#[test]
fn campaigns_are_reproducible_and_internally_consistent() {
    let first = divergence_campaign(
        kqk(),
        store(),
        PerturbationMode::Retype,
        40,
        40,
        Metric::Hamming,
        7,
    )
    .unwrap();
    let second = divergence_campaign(
        kqk(),
        store(),
        PerturbationMode::Retype,
        40,
        40,
        Metric::Hamming,
        7,
    )
    .unwrap();
    assert_eq!(
        serde_json::to_string(&first).unwrap(),
        serde_json::to_string(&second).unwrap()
    );

    assert_eq!(first.pairs, 40);
    assert!((0.0..=1.0).contains(&first.outcome_flip_fraction));
    assert!((0.0..=1.0).contains(&first.move_path_flip_fraction));
    let separated: u64 = first.first_separation_histogram.iter().map(|(_, n)| n).sum();
    assert_eq!(separated + first.no_separation_count, first.pairs);
    if let (Some(mean), Some(max)) = (first.exponent_mean, first.exponent_max) {
        assert!(mean <= max);
    }
}

#[test]
fn bare_king_campaigns_never_flip_the_outcome() {
    let report = divergence_campaign(
        kvk(),
        kvk(),
        PerturbationMode::Relocate,
        30,
        30,
        Metric::L1,
        3,
    )
    .unwrap();
    assert_eq!(report.pairs, 30);
    assert_eq!(report.outcome_flip_fraction, 0.0);
}

#[test]
fn a_table_with_no_usable_perturbations_is_reported() {
    assert!(matches!(
        divergence_campaign(kvk(), kvk(), PerturbationMode::Retype, 5, 10, Metric::Hamming, 0),
        Err(DynamicsError::NoPerturbations)
    ));
}

#[test]
fn the_queen_endgame_control_is_far_from_affine() {
    let first = nonlinearity_test(kqk(), kqk(), 400, 5).unwrap();
    let second = nonlinearity_test(kqk(), kqk(), 400, 5).unwrap();
    assert_eq!(
        serde_json::to_string(&first).unwrap(),
        serde_json::to_string(&second).unwrap()
    );
    assert!(first.samples >= 65);
    assert!(first.relative_residual.is_finite());
    assert!(
        first.relative_residual > 0.05,
        "measured residual {}",
        first.relative_residual
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn every_step_obeys_the_update_identity(slot in 0u64..524288, cap in 1u32..60) {
        let Some(state) = kqk().state_at(slot) else {
            return Ok(());
        };
        let run = run_trajectory(kqk(), &state, cap).unwrap();
        let mut at = run.start;
        let mut side = run.start_side;
        for step in &run.steps {
            prop_assert_eq!(at + step.delta, step.vector);
            prop_assert_eq!(step.side, side);
            side = side.opponent();
            at = step.vector;
        }
        prop_assert_eq!(at, run.final_vector());
        prop_assert!(run.steps.len() as u32 <= cap);
    }

    #[test]
    fn divergence_reads_the_same_from_either_start(slot in 0u64..524288, pick in 0usize..4096) {
        let Some(state) = kqk().state_at(slot) else {
            return Ok(());
        };
        let options = perturb(&state, PerturbationMode::Relocate);
        prop_assume!(!options.is_empty());
        let other = options[pick % options.len()];
        let ab = divergence(kqk(), &state, &other, 30, Metric::L2).unwrap();
        let ba = divergence(kqk(), &other, &state, 30, Metric::L2).unwrap();
        prop_assert_eq!(ab.d0, ba.d0);
        prop_assert_eq!(ab.series, ba.series);
        prop_assert_eq!(ab.first_separation_ply, ba.first_separation_ply);
        prop_assert_eq!(ab.outcome_flip, ba.outcome_flip);
        prop_assert_eq!(ab.move_path_flip, ba.move_path_flip);
    }
}
