use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hadamard-weak"))
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(experiment: &str, config: &Path, extra: &[&str]) -> Output {
    bin().arg(experiment).arg("--config").arg(config).args(extra).output().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: stderr {}", String::from_utf8_lossy(&out.stderr));
    })
}

fn temp_config(dir: &tempfile::TempDir, doc: &Value) -> PathBuf {
    let path = dir.path().join("config.json");
    std::fs::write(&path, serde_json::to_vec(doc).unwrap()).unwrap();
    path
}

#[test]
fn spike_weakconv_converges() {
    let out = run("weakconv", &configs().join("weakconv-spike.json"), &[]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_of(&out);
    let keys: Vec<&str> = report.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["config", "metadata", "mismatches", "traces", "verdict", "witnesses"]);
    assert_eq!(report["verdict"]["status"], "converged_within");
    assert!(report["verdict"]["index"].as_u64().unwrap() <= 11);
    let strong = report["traces"]["strong"].as_array().unwrap();
    for (n, d) in strong.iter().enumerate() {
        assert_eq!(d.as_f64().unwrap(), (n + 1) as f64);
    }
    assert_eq!(report["config"]["params"]["epsilon"], 1e-6);
}

#[test]
fn book_witness_for_c1_is_page_two() {
    let out = run("book-witness", &configs().join("book-witness.json"), &[]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_of(&out);
    assert_eq!(report["verdict"]["n"], 2.0);
    assert_eq!(report["witnesses"][0]["kind"], "tw_ne_tg_witness");
    assert_eq!(report["witnesses"][0]["points"]["C_n"], json!({"page": 2, "u": 0.0, "v": 1.0}));
}

#[test]
fn euclidean_preimage_identity_has_no_mismatches() {
    let out = run("preimage-identity", &configs().join("preimage-euclidean.json"), &[]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_of(&out);
    assert_eq!(report["mismatches"], json!([]));
    assert_eq!(report["metadata"]["summary"]["checked"], 10000);
}

#[test]
fn unexpected_counterexample_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let doc = json!({
        "space": {"kind": "book", "pages": 8, "leg": 1.0},
        "seed": 1,
        "params": {"property": "n", "budget": 500}
    });
    let out = run("property-search", &temp_config(&dir, &doc), &[]);
    assert_eq!(out.status.code(), Some(1));
    let report = json_of(&out);
    assert!(!report["witnesses"].as_array().unwrap().is_empty());
    assert_eq!(report["metadata"]["exit_code"], 1);
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        // Randomized experiment without a seed.
        ("property-search", json!({"space": {"kind": "halfplane"}, "params": {"property": "q4", "budget": 10}})),
        // Unknown param.
        ("book-witness", json!({"space": {"kind": "book", "pages": 6, "leg": 1.0}, "params": {"probez": []}})),
        // Wrong space for the experiment.
        ("book-witness", json!({"space": {"kind": "halfplane"}, "params": {"kind": "property_n"}})),
        // Experiment named in the config disagrees with the command line.
        ("project", json!({"experiment": "weakconv", "space": {"kind": "halfplane"}})),
        // x inside the convex body.
        ("convex-complement", json!({
            "space": {"kind": "euclidean", "dim": 2},
            "params": {"center": [0.0, 0.0], "radius": 1.0, "x": [0.5, 0.0], "samples": [[0.1, 0.1]]}
        })),
        // Invalid point for the space.
        ("project", json!({
            "space": {"kind": "spike", "branches": 3},
            "params": {"geodesic": [{"branch": 1, "s": 0.0}, {"branch": 2, "s": 2.0}], "points": [{"branch": 1, "s": 5.0}]}
        })),
    ];
    for (experiment, doc) in cases {
        let out = run(experiment, &temp_config(&dir, &doc), &[]);
        assert_eq!(out.status.code(), Some(2), "{experiment} {doc}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
    let missing = run("project", &dir.path().join("absent.json"), &[]);
    assert_eq!(missing.status.code(), Some(2));
    let unwritable = run(
        "book-witness",
        &configs().join("book-witness.json"),
        &["--output", "/nonexistent-dir/report.json"],
    );
    assert_eq!(unwritable.status.code(), Some(2));
    let bad_flag = bin().args(["teleport", "--config", "x.json"]).output().unwrap();
    assert_eq!(bad_flag.status.code(), Some(2));
}

#[test]
fn seed_flag_overrides_document() {
    let config = configs().join("project-halfplane.json");
    let a = json_of(&run("project", &config, &[]));
    let b = json_of(&run("project", &config, &["--seed", "8"]));
    assert_eq!(a["config"]["seed"], 7);
    assert_eq!(b["config"]["seed"], 8);
    assert_ne!(a["traces"], b["traces"]);
}

#[test]
fn csv_has_one_row_per_probe_and_index() {
    let out = run("weakconv", &configs().join("weakconv-spike.json"), &["--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(reader.headers().unwrap(), vec!["probe", "index", "value"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 10 * 50 + 50);
    // Probe 3 sees x_3 at its own midpoint and x_4.. at the origin.
    let probe3: Vec<f64> = rows.iter().filter(|r| &r[0] == "3").map(|r| r[2].parse().unwrap()).collect();
    assert_eq!(probe3[2], 1.5);
    assert!(probe3[3..].iter().all(|v| *v == 0.0));
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let config = configs().join("elementary-plane.json");
    let to_file = run("elementary", &config, &["--output", path.to_str().unwrap(), "--threads", "2"]);
    assert_eq!(to_file.status.code(), Some(0));
    assert!(to_file.stdout.is_empty());
    let to_stdout = run("elementary", &config, &[]);
    assert_eq!(std::fs::read(&path).unwrap(), to_stdout.stdout);
}

#[test]
fn reports_embed_resolved_defaults() {
    let report = json_of(&run("cone-cover", &configs().join("cone-cover-halfplane.json"), &[]));
    assert_eq!(report["verdict"]["status"], "certified");
    let params = &report["config"]["params"];
    assert_eq!(params["covering_samples"], 4096);
    assert_eq!(params["net_fraction"], 0.25);
    assert_eq!(report["config"]["tolerances"]["tol_point"], 1e-9);
    assert_eq!(report["config"]["format"], "json");
}
