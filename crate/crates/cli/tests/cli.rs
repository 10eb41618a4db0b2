//! Black-box tests driving the compiled binary the way a shell user would.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::OnceLock;

use serde_json::Value;
use tempfile::TempDir;

const MATE_IN_ONE: &str = "k7/7Q/1K6/8/8/8/8/8 w - - 0 1";

fn run_with(cwd: Option<&Path>, envs: &[(&str, &str)], args: &[&str]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_chessdyn"));
    cmd.args(args);
    cmd.env_remove("CHESSDYN_TB_DIR");
    cmd.env_remove("CHESSDYN_TIMESTAMP");
    for (key, value) in envs {
        cmd.env(key, value);
    }
    if let Some(dir) = cwd {
        cmd.current_dir(dir);
    }
    cmd.output().expect("the binary runs")
}

fn run(args: &[&str]) -> Output {
    run_with(None, &[], args)
}

fn stdout_text(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("the process was not signalled")
}

fn envelope(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).expect("stdout is a JSON envelope")
}

fn payload(output: &Output) -> Value {
    envelope(output)["payload"].clone()
}

fn stderr_error(output: &Output) -> Value {
    serde_json::from_slice(&output.stderr).expect("stderr is a JSON error line")
}

fn tables() -> &'static Path {
    static DIR: OnceLock<TempDir> = OnceLock::new();
    DIR.get_or_init(|| {
        let dir = tempfile::tempdir().expect("tempdir");
        for (material, file) in [("KvK", "kvk.cstb"), ("KQvK", "kqvk.cstb")] {
            let out = dir.path().join(file);
            let output = run(&["tb", "build", "--material", material, "--out", path_str(&out)]);
            assert!(output.status.success(), "building {material} failed");
        }
        dir
    })
    .path()
}

fn kvk() -> PathBuf {
    tables().join("kvk.cstb")
}

fn kqk() -> PathBuf {
    tables().join("kqvk.cstb")
}

fn path_str(path: &Path) -> &str {
    path.to_str().expect("paths in this suite are UTF-8")
}

#[test]
fn building_a_table_reports_its_shape_and_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bare.cstb");
    let output = run(&["tb", "build", "--material", "KvK", "--out", path_str(&out)]);
    assert_eq!(exit_code(&output), 0);

    let bytes = fs::read(&out).unwrap();
    assert_eq!(&bytes[..4], b"CSTB");

    let report = envelope(&output);
    assert_eq!(report["tool_version"], "0.1.0");
    assert_eq!(report["seed"], 0);
    assert_eq!(report["timestamp"], "");
    assert!(report["command"]
        .as_str()
        .unwrap()
        .starts_with("chessdyn tb build --material KvK"));
    assert_eq!(report["payload"]["material"], "KvK");
    assert_eq!(report["payload"]["slots"], 8192);
    assert_eq!(report["payload"]["index_scheme"], "KvK[stm(2) x wK(64) x bK(64)]");
}

#[test]
fn probing_the_mate_in_one_reports_the_winning_move() {
    let output = run(&["tb", "probe", "--tb", path_str(&kqk()), "--fen", MATE_IN_ONE]);
    assert_eq!(exit_code(&output), 0);

    let probe = payload(&output);
    assert_eq!(probe["fen"], MATE_IN_ONE);
    assert_eq!(probe["material"], "KQvK");
    assert_eq!(probe["wdl"], "WhiteWin");
    assert_eq!(probe["dtm_plies"], 1);
    assert_eq!(probe["best_move"], "h7a7");
    assert_eq!(probe["terminal"], false);
}

#[test]
fn csv_probe_reports_are_key_value_tables() {
    let output = run(&[
        "tb", "probe", "--tb", path_str(&kqk()), "--fen", MATE_IN_ONE, "--format", "csv",
    ]);
    assert_eq!(exit_code(&output), 0);

    let text = stdout_text(&output);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# tool_version=0.1.0");
    assert!(lines[1].starts_with("# command=chessdyn tb probe"));
    assert_eq!(lines[2], "# seed=0");
    assert_eq!(lines[3], "# timestamp=");
    assert_eq!(lines[4], "key,value");
    assert!(lines.contains(&"wdl,WhiteWin"));
    assert!(lines.contains(&"dtm_plies,1"));
    assert!(lines.contains(&"best_move,h7a7"));
}

#[test]
fn the_retype_neighbor_of_the_mate_separates_at_distance_one() {
    let table = kqk();
    let before = fs::read(&table).unwrap();
    let output = run(&[
        "dyn", "diverge", "--tb", path_str(&table), "--fen", MATE_IN_ONE,
        "--mode", "retype", "--format", "csv",
    ]);
    assert_eq!(exit_code(&output), 0);
    assert_eq!(fs::read(&table).unwrap(), before, "the input table file must not change");

    let text = stdout_text(&output);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines.contains(&"# perturbed_fen=k7/7P/1K6/8/8/8/8/8 w - - 0 1"));
    assert!(lines.contains(&"# mode=retype"));
    assert!(lines.contains(&"# metric=hamming"));
    assert!(lines.contains(&"# first_separation_ply=1"));
    assert!(lines.contains(&"# move_path_flip=true"));
    let header = lines.iter().position(|l| *l == "n,d_n").expect("series header");
    assert_eq!(lines[header + 1], "0,1");
}

#[test]
fn relocation_divergence_honors_an_explicit_metric() {
    let output = run(&[
        "dyn", "diverge", "--tb", path_str(&kqk()), "--fen", MATE_IN_ONE,
        "--mode", "relocate", "--metric", "l2",
    ]);
    assert_eq!(exit_code(&output), 0);

    let report = payload(&output);
    assert_eq!(report["mode"], "relocate");
    assert_eq!(report["metric"], "l2");
    assert_eq!(report["fen"], MATE_IN_ONE);
    assert_ne!(report["perturbed_fen"], MATE_IN_ONE);
    assert!(report["d0"].as_f64().unwrap() > 0.0);
}

#[test]
fn the_config_file_feeds_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("chessdyn.conf");
    fs::write(&cfg, "# suite defaults\ndefault_seed = 9\nreport_format = csv\ndefault_metric = l2\nply_cap = 64\n").unwrap();

    let defaults = run(&[
        "dyn", "campaign", "--tb", path_str(&kqk()), "--mode", "relocate",
        "--samples", "5", "--config", path_str(&cfg),
    ]);
    assert_eq!(exit_code(&defaults), 0);
    let text = stdout_text(&defaults);
    assert!(text.starts_with("# tool_version="), "config format should apply");
    assert!(text.lines().any(|l| l == "# seed=9"));
    assert!(text.lines().any(|l| l == "# metric=l2"));
    assert!(text.lines().any(|l| l == "# ply_cap=64"));

    let overridden = run(&[
        "dyn", "campaign", "--tb", path_str(&kqk()), "--mode", "relocate",
        "--samples", "5", "--config", path_str(&cfg),
        "--seed", "3", "--metric", "hamming", "--format", "json",
    ]);
    assert_eq!(exit_code(&overridden), 0);
    let report = envelope(&overridden);
    assert_eq!(report["seed"], 3);
    assert_eq!(report["payload"]["metric"], "hamming");
    assert_eq!(report["payload"]["ply_cap"], 64);

    let broken = dir.path().join("broken.conf");
    fs::write(&broken, "default_seed = 1\ncolour = blue\n").unwrap();
    let rejected = run(&[
        "tb", "probe", "--tb", path_str(&kqk()), "--fen", MATE_IN_ONE,
        "--config", path_str(&broken),
    ]);
    assert_eq!(exit_code(&rejected), 1);
    let error = stderr_error(&rejected);
    assert_eq!(error["code"], 1);
    assert!(error["error"].as_str().unwrap().contains("line 2"));
}

#[test]
fn bare_table_names_resolve_against_the_configured_directory() {
    let elsewhere = tempfile::tempdir().unwrap();
    let decoy = tempfile::tempdir().unwrap();
    let table_dir = path_str(tables()).to_string();
    let probe_args = ["tb", "probe", "--tb", "kqvk.cstb", "--fen", MATE_IN_ONE];

    let unresolved = run_with(Some(elsewhere.path()), &[], &probe_args);
    assert_eq!(exit_code(&unresolved), 4);

    let via_env = run_with(
        Some(elsewhere.path()),
        &[("CHESSDYN_TB_DIR", table_dir.as_str())],
        &probe_args,
    );
    assert_eq!(exit_code(&via_env), 0);

    let cfg = elsewhere.path().join("dirs.conf");
    fs::write(&cfg, format!("tablebase_dir = {table_dir}\n")).unwrap();
    let mut with_config = probe_args.to_vec();
    with_config.extend(["--config", path_str(&cfg)]);
    let config_beats_env = run_with(
        Some(elsewhere.path()),
        &[("CHESSDYN_TB_DIR", path_str(decoy.path()))],
        &with_config,
    );
    assert_eq!(exit_code(&config_beats_env), 0);
    assert_eq!(payload(&config_beats_env)["wdl"], "WhiteWin");
}

#[test]
fn usage_errors_exit_two_and_help_exits_zero() {
    assert_eq!(exit_code(&run(&["bogus"])), 2);
    assert_eq!(exit_code(&run(&[])), 2);
    assert_eq!(exit_code(&run(&["tb", "probe", "--fen", MATE_IN_ONE])), 2);
    assert_eq!(
        exit_code(&run(&[
            "tb", "probe", "--tb", path_str(&kvk()), "--fen", MATE_IN_ONE, "--format", "yaml",
        ])),
        2
    );
    assert_eq!(exit_code(&run(&["--help"])), 0);
    assert_eq!(exit_code(&run(&["--version"])), 0);
    assert_eq!(exit_code(&run(&["eval", "fit", "--help"])), 0);
}

#[test]
fn malformed_fens_exit_three() {
    let output = run(&["tb", "probe", "--tb", path_str(&kvk()), "--fen", "not a position"]);
    assert_eq!(exit_code(&output), 3);
    assert_eq!(stderr_error(&output)["code"], 3);
    assert!(output.stdout.is_empty());
}

#[test]
fn missing_mismatched_or_corrupt_tables_exit_four() {
    let dir = tempfile::tempdir().unwrap();

    let missing = dir.path().join("nowhere.cstb");
    let output = run(&["tb", "probe", "--tb", path_str(&missing), "--fen", MATE_IN_ONE]);
    assert_eq!(exit_code(&output), 4);
    assert_eq!(stderr_error(&output)["code"], 4);

    let output = run(&["tb", "probe", "--tb", path_str(&kvk()), "--fen", MATE_IN_ONE]);
    assert_eq!(exit_code(&output), 4, "a bare-kings table does not cover KQvK");
    let message = stderr_error(&output)["error"].as_str().unwrap().to_string();
    assert!(message.contains("KQvK"));

    let corrupt = dir.path().join("corrupt.cstb");
    fs::write(&corrupt, b"CSTBnot really a table").unwrap();
    let output = run(&["tb", "probe", "--tb", path_str(&corrupt), "--fen", MATE_IN_ONE]);
    assert_eq!(exit_code(&output), 4);
}

#[test]
fn unsupported_material_exits_five() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("knvkb.cstb");
    let output = run(&["tb", "build", "--material", "KNvKB", "--out", path_str(&out)]);
    assert_eq!(exit_code(&output), 5);
    assert_eq!(stderr_error(&output)["code"], 5);
    assert!(!out.exists());
}

#[test]
fn equal_seeds_give_byte_identical_reports() {
    let table = kqk();
    let base = [
        "dyn", "campaign", "--tb", path_str(&table), "--mode", "relocate",
        "--samples", "20", "--ply-cap", "64", "--seed",
    ];
    let with_seed = |seed| [&base[..], &[seed]].concat();

    let first = run(&with_seed("7"));
    let second = run(&with_seed("7"));
    let other = run(&with_seed("8"));
    assert_eq!(exit_code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
    assert_ne!(first.stdout, other.stdout, "a different seed should resample");

    let report = payload(&first);
    assert_eq!(report["seed"], 7);
    assert_eq!(report["pairs"], 20);
}

#[test]
fn reports_mirror_to_the_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let copy = dir.path().join("probe.json");
    let output = run(&[
        "tb", "probe", "--tb", path_str(&kqk()), "--fen", MATE_IN_ONE,
        "--out", path_str(&copy),
    ]);
    assert_eq!(exit_code(&output), 0);
    assert_eq!(fs::read(&copy).unwrap(), output.stdout);
}

#[test]
fn fitting_writes_a_description_the_auditor_accepts() {
    let dir = tempfile::tempdir().unwrap();
    let description = dir.path().join("fitted.json");
    let fit = run(&[
        "eval", "fit", "--tb", path_str(&kvk()), "--family", "fitted",
        "--budget", "8", "--seed", "4", "--spec-out", path_str(&description),
    ]);
    assert_eq!(exit_code(&fit), 0);
    let report = payload(&fit);
    assert_eq!(report["family"], "fitted");
    assert_eq!(report["parameter_budget"], 8);
    assert_eq!(report["states_fitted"], 7224);
    assert_eq!(report["misclassification_rate"], 0.0);

    let saved: Value = serde_json::from_str(&fs::read_to_string(&description).unwrap()).unwrap();
    assert_eq!(saved["family"], "fitted");
    assert_eq!(saved["parameters"].as_array().unwrap().len(), 8);

    let audit = run(&[
        "eval", "audit", "--tb", path_str(&kvk()), "--spec", path_str(&description),
    ]);
    assert_eq!(exit_code(&audit), 0);
    let graded = payload(&audit);
    assert_eq!(graded["family"], "fitted");
    assert_eq!(graded["states_examined"], 7224);
    assert_eq!(graded["wdl_misclassified"], 0);

    let oracle = run(&["eval", "audit", "--tb", path_str(&kvk()), "--family", "oracle"]);
    assert_eq!(exit_code(&oracle), 0);
    assert_eq!(payload(&oracle)["wdl_misclassified"], 0);

    let weightless = run(&["eval", "audit", "--tb", path_str(&kvk()), "--family", "fitted"]);
    assert_eq!(exit_code(&weightless), 1);
}

#[test]
fn the_horizon_sweep_covers_the_requested_depths() {
    let output = run(&[
        "eval", "horizon", "--tb", path_str(&kqk()), "--family", "material",
        "--depth-min", "1", "--depth-max", "2", "--samples", "4", "--seed", "3",
    ]);
    assert_eq!(exit_code(&output), 0);

    let report = payload(&output);
    assert_eq!(report["family"], "material");
    assert_eq!(report["seed"], 3);
    let rows = report["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    for (row, depth) in rows.iter().zip([1, 2]) {
        assert_eq!(row["depth"], depth);
        assert_eq!(row["samples"], 4);
        let rate = row["blunder_rate"].as_f64().unwrap();
        assert!((0.0..=1.0).contains(&rate));
    }
}

#[test]
fn the_mate_trajectory_halts_at_checkmate() {
    let output = run(&["traj", "run", "--tb", path_str(&kqk()), "--fen", MATE_IN_ONE]);
    assert_eq!(exit_code(&output), 0);

    let report = payload(&output);
    assert_eq!(report["plies"], 1);
    assert_eq!(report["terminal"], "checkmate");
    assert!(report["final_fen"].as_str().unwrap().starts_with("k7/Q7/1K6/8/8/8/8/8 b"));
    let steps = report["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 1);
    assert_eq!(steps[0]["ply"], 1);
    assert_eq!(steps[0]["side"], "white");
    assert_eq!(steps[0]["mv"], "h7a7");

    let capped = run(&[
        "traj", "run", "--tb", path_str(&kqk()),
        "--fen", "8/8/8/3k4/8/8/5Q2/K7 w - - 0 1", "--ply-cap", "3",
    ]);
    assert_eq!(exit_code(&capped), 0);
    let truncated = payload(&capped);
    assert_eq!(truncated["plies"], 3);
    assert_eq!(truncated["terminal"], "ply_cap_reached");
}

#[test]
fn the_nonlinearity_probe_reports_a_residual() {
    let output = run(&[
        "dyn", "nonlinearity", "--tb", path_str(&kqk()), "--samples", "400", "--seed", "5",
    ]);
    assert_eq!(exit_code(&output), 0);

    let report = payload(&output);
    assert_eq!(report["seed"], 5);
    let residual = report["relative_residual"].as_f64().unwrap();
    assert!(residual.is_finite());
    assert!(residual >= 0.0);
}
