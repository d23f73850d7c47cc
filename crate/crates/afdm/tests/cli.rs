//! End-to-end checks of the command-line surface: config parsing, dotted-key
//! overrides, output files, and exit codes (0 ok, 1 selftest fail, 2 config,
//! 3 runtime).

use afdm::cli::run_args;
use std::fs;
use std::path::PathBuf;

fn write_config(dir: &tempfile::TempDir, name: &str, json: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, json).unwrap();
    path
}

const FIG4_JSON: &str = r#"{
    "n": 8,
    "schemes": ["afdm"],
    "profile": {"l_max": 1, "alpha_max": 1},
    "path_layout": [
        {"delay": 0, "doppler": -1},
        {"delay": 1, "doppler": 1}
    ],
    "constellation": "bpsk",
    "detector": "ml",
    "snr_db_grid": [0, 8],
    "trials": 2000,
    "seed": 5,
    "min_errors": 50
}"#;

#[test]
fn guard_count_prints_known_value() {
    let code = run_args([
        "afdm",
        "guard-count",
        "--scheme",
        "afdm",
        "--l-max",
        "2",
        "--alpha-max",
        "3",
    ]);
    assert_eq!(code, 0);
    let code = run_args(["afdm", "guard-count", "--scheme", "lte", "--l-max", "1", "--alpha-max", "1"]);
    assert_eq!(code, 2);
}

#[test]
fn ber_sweep_writes_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "fig4.json", FIG4_JSON);
    let csv_path = dir.path().join("out.csv");
    let json_path = dir.path().join("out.json");
    let code = run_args([
        "afdm",
        "ber-sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--output",
        csv_path.to_str().unwrap(),
        "--json-output",
        json_path.to_str().unwrap(),
        "--workers",
        "2",
    ]);
    assert_eq!(code, 0);

    let csv = fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "scheme,snr_db,trials,bit_errors,bits_total,ber,ci95"
    );
    assert_eq!(lines.count(), 2); // one scheme, two SNR points

    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&json_path).unwrap()).unwrap();
    assert!(summary["version"].as_str().unwrap().starts_with("afdm-"));
    // config echo carries resolved defaults
    assert_eq!(summary["config"]["n"], 8);
    assert_eq!(summary["config"]["min_errors"], 50);
    assert_eq!(summary["points"].as_array().unwrap().len(), 2);
}

#[test]
fn ber_sweep_is_deterministic_across_worker_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "fig4.json", FIG4_JSON);
    let one = dir.path().join("w1.csv");
    let eight = dir.path().join("w8.csv");
    for (path, workers) in [(&one, "1"), (&eight, "8")] {
        let code = run_args([
            "afdm",
            "ber-sweep",
            "--config",
            cfg.to_str().unwrap(),
            "--output",
            path.to_str().unwrap(),
            "--workers",
            workers,
        ]);
        assert_eq!(code, 0);
    }
    assert_eq!(fs::read(&one).unwrap(), fs::read(&eight).unwrap());
}

#[test]
fn overrides_take_precedence_and_reject_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "fig4.json", FIG4_JSON);
    let json_path = dir.path().join("out.json");
    let code = run_args([
        "afdm",
        "ber-sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--set",
        "trials=512",
        "--set",
        "snr_db_grid=[4]",
        "--output",
        dir.path().join("x.csv").to_str().unwrap(),
        "--json-output",
        json_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(summary["config"]["trials"], 512);

    // unknown top-level key
    let code = run_args([
        "afdm",
        "ber-sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--set",
        "trails=512",
    ]);
    assert_eq!(code, 2);
    // unknown nested key
    let code = run_args([
        "afdm",
        "heff-inspect",
        "--config",
        cfg.to_str().unwrap(),
        "--set",
        "profile.alpha=2",
    ]);
    assert_eq!(code, 2);
}

#[test]
fn heff_inspect_reports_placements() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "fig4.json", FIG4_JSON);
    let out = dir.path().join("heff.json");
    let code = run_args([
        "afdm",
        "heff-inspect",
        "--config",
        cfg.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["scheme"], "afdm");
    assert_eq!(report["paths"][0]["loc"], -1);
    assert_eq!(report["paths"][0]["position_row0"], 7);
    assert_eq!(report["paths"][1]["loc"], 4);
    let support = report["support"].as_array().unwrap();
    assert_eq!(support.len(), 8);
    for row in support {
        assert_eq!(row.as_array().unwrap().len(), 2, "two positions per row");
    }

    // CSV variant lists the nonzero entries
    let out_csv = dir.path().join("heff.csv");
    let code = run_args([
        "afdm",
        "heff-inspect",
        "--config",
        cfg.to_str().unwrap(),
        "--format",
        "csv",
        "--output",
        out_csv.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let csv = fs::read_to_string(&out_csv).unwrap();
    assert!(csv.starts_with("row,col,re,im\n"));
    assert_eq!(csv.lines().count(), 1 + 16);
}

#[test]
fn rank_analysis_reports_full_diversity() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "fig4.json", FIG4_JSON);
    let out = dir.path().join("rank.json");
    let code = run_args([
        "afdm",
        "rank-analysis",
        "--config",
        cfg.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["min_rank"], 2);
    assert_eq!(report["full_diversity"], true);
    assert_eq!(report["mode"], "exhaustive");
    assert_eq!(report["p"], 2);
    assert_eq!(report["n"], 8);
    assert_eq!(
        report["rank_histogram"].as_object().unwrap()["2"]
            .as_u64()
            .unwrap(),
        (3u64.pow(8) - 1) / 2
    );

    // sampled mode is labeled as an estimate
    let out2 = dir.path().join("rank_sampled.json");
    let code = run_args([
        "afdm",
        "rank-analysis",
        "--config",
        cfg.to_str().unwrap(),
        "--samples",
        "500",
        "--output",
        out2.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&out2).unwrap()).unwrap();
    assert_eq!(report["mode"], "estimate");

    // budget exhaustion is a runtime error suggesting the sampled mode
    let code = run_args([
        "afdm",
        "rank-analysis",
        "--config",
        cfg.to_str().unwrap(),
        "--budget",
        "100",
    ]);
    assert_eq!(code, 3);
}

#[test]
fn selftest_passes_and_filters() {
    assert_eq!(run_args(["afdm", "selftest"]), 0);
    assert_eq!(run_args(["afdm", "selftest", "--filter", "unitarity"]), 0);
    assert_eq!(run_args(["afdm", "selftest", "--filter", "no-such-suite"]), 1);
}

#[test]
fn config_errors_exit_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    // missing file
    assert_eq!(
        run_args(["afdm", "ber-sweep", "--config", "/nonexistent/cfg.json"]),
        2
    );
    // unknown scheme tag
    let bad = write_config(
        &dir,
        "bad.json",
        &FIG4_JSON.replace("\"afdm\"", "\"cdma\""),
    );
    assert_eq!(
        run_args(["afdm", "ber-sweep", "--config", bad.to_str().unwrap()]),
        2
    );
    // empty SNR grid is a sweep config error
    let empty = write_config(
        &dir,
        "empty.json",
        &FIG4_JSON.replace("[0, 8]", "[]"),
    );
    assert_eq!(
        run_args(["afdm", "ber-sweep", "--config", empty.to_str().unwrap()]),
        2
    );
    // heff-inspect needs exactly one scheme
    let two = write_config(
        &dir,
        "two.json",
        &FIG4_JSON.replace("[\"afdm\"]", "[\"afdm\", \"ocdm\"]"),
    );
    assert_eq!(
        run_args(["afdm", "heff-inspect", "--config", two.to_str().unwrap()]),
        2
    );
}
