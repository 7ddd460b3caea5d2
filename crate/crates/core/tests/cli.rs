use std::process::{Command, Output};

use serde_json::Value;

fn symmap(args: &[&str], dir: &std::path::Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symmap"))
        .args(args)
        .current_dir(dir)
        .env_remove("SYMMAP_SEED")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

#[test]
fn map_dicke_reports_amplitudes_and_rank() {
    let dir = tempfile::tempdir().unwrap();
    let doc = json_of(&symmap(&["map", "--dicke", "4,1"], dir.path()));
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    let entries = &doc["result"]["amplitudes"]["entries"];
    assert!((entries[0][1][0].as_f64().unwrap() - s2).abs() < 1e-15);
    assert!((entries[1][0][0].as_f64().unwrap() - s2).abs() < 1e-15);
    assert_eq!(doc["manifest"]["command"], "map");
    assert_eq!(doc["manifest"]["version"], env!("CARGO_PKG_VERSION"));

    let doc = json_of(&symmap(&["map", "--ghz", "6"], dir.path()));
    assert_eq!(doc["result"]["schmidt"]["rank"], 2);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = symmap(&["map", "--dicke", "5,1"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unsupported parity"));

    let out = symmap(&["map", "--coeffs", "0.5,oops"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("column 5"));

    let out = symmap(
        &["detect", "--n", "6", "--threshold", "--lo", "0.5"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));

    let out = symmap(&["gm"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn detect_point_and_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let low = json_of(&symmap(
        &["detect", "--n", "6", "--family", "w-mix", "--p", "0.01"],
        dir.path(),
    ));
    assert_eq!(low["result"]["verdict"], "PPT");
    let high = json_of(&symmap(
        &["detect", "--n", "6", "--family", "w-mix", "--p", "1.0"],
        dir.path(),
    ));
    assert_eq!(high["result"]["verdict"], "NPT");
    let t = json_of(&symmap(
        &["detect", "--n", "6", "--family", "w-mix", "--threshold"],
        dir.path(),
    ));
    let p = t["result"]["threshold"]["threshold"].as_f64().unwrap();
    assert!((p - 0.034).abs() < 5e-4, "{p}");
}

#[test]
fn state_output_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let first = symmap(
        &[
            "gm",
            "--coeffs",
            "0.3,-0.2,0.7,0.1,-0.5,0.2,0.4",
            "--output",
            "gm.json",
        ],
        dir.path(),
    );
    assert!(first.status.success());
    assert!(first.stdout.is_empty());
    let text = std::fs::read_to_string(dir.path().join("gm.json")).unwrap();
    let a: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(a["manifest"]["output"], "gm.json");

    let b = json_of(&symmap(&["gm", "--coeffs-file", "gm.json"], dir.path()));
    let (ea, eb) = (
        a["result"]["geometric_measure"]["value"].as_f64().unwrap(),
        b["result"]["geometric_measure"]["value"].as_f64().unwrap(),
    );
    assert!((ea - eb).abs() < 1e-12);
    assert_eq!(a["result"]["state"], b["result"]["state"]);
}

#[test]
fn seed_comes_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_symmap"))
        .args(["gm", "--ghz", "4"])
        .env("SYMMAP_SEED", "99")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(json_of(&out)["manifest"]["seed"], 99);
    let out = Command::new(env!("CARGO_BIN_EXE_symmap"))
        .args(["gm", "--ghz", "4", "--seed", "5"])
        .env("SYMMAP_SEED", "99")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(json_of(&out)["manifest"]["seed"], 5);
}

#[test]
fn search_appends_json_lines() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "search",
        "--n",
        "4",
        "--restarts",
        "10",
        "--seed",
        "3",
        "--log",
        "runs.jsonl",
    ];
    let a = json_of(&symmap(&args, dir.path()));
    let b = json_of(&symmap(&args, dir.path()));
    let log = std::fs::read_to_string(dir.path().join("runs.jsonl")).unwrap();
    let lines: Vec<Value> = log
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 4);
    assert!(lines
        .iter()
        .all(|l| l["omega_star"].as_array().unwrap().len() == 5));
    let value = a["result"]["best"]["geometric_value"].as_f64().unwrap();
    assert!((value - 0.667).abs() < 2e-3);
    assert_eq!(
        a["result"]["best"]["omega_star"],
        b["result"]["best"]["omega_star"]
    );
}

#[test]
fn subspace_csv_layout() {
    let dir = tempfile::tempdir().unwrap();
    let out = symmap(&["subspace", "--dmax", "4", "--seed", "1"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "d,g_d,hat_dim,antisym_bound");
    assert_eq!(lines[1], "2,NA,0,0.5");
    let g3: f64 = lines[2].split(',').nth(1).unwrap().parse().unwrap();
    assert!((g3 - 2.0 / 3.0).abs() < 1e-9);
    assert!(lines[3].starts_with("4,0.54999") || lines[3].starts_with("4,0.55"));
    assert!(lines[3].ends_with(",3,0.5"));
}

#[test]
fn rank_table_and_verify_subset() {
    let dir = tempfile::tempdir().unwrap();
    let doc = json_of(&symmap(&["rank", "--n", "8"], dir.path()));
    for row in doc["result"]["dicke"].as_array().unwrap() {
        assert_eq!(row["closed_form"], row["numerical"]);
    }
    assert_eq!(doc["result"]["w"], 2);

    let out = symmap(
        &["verify", "--only", "1,4", "--output", "verify.json"],
        dir.path(),
    );
    assert!(out.status.success());
    let table = String::from_utf8(out.stdout).unwrap();
    assert!(table.contains("2 of 2 checks passed"));
    let doc: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("verify.json")).unwrap())
            .unwrap();
    assert_eq!(doc["result"]["seed"], 42);
    assert_eq!(doc["result"]["checks"].as_array().unwrap().len(), 2);
}
