//! The command-line front end, driven through `cli::run`.

use std::fs;
use std::path::Path;
use std::sync::Mutex;

use polrig::cli::{
    parse_manifest, run, serialize_manifest, EXIT_FAIL, EXIT_INPUT, EXIT_OK, EXIT_UNSUPPORTED,
    THREADS_ENV,
};

// tests touching the environment must not overlap with other runs
static ENV: Mutex<()> = Mutex::new(());

fn polrig(args: &[&str]) -> (i32, String, String) {
    let _guard = ENV.lock().unwrap_or_else(|e| e.into_inner());
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(
        std::iter::once("polrig").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn manifest(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn invariants_in_every_format() {
    let dir = tempfile::tempdir().unwrap();
    let m = manifest(
        dir.path(),
        "m.json",
        r#"[{"family":"projective_space","n":2,"twist":2},{"family":"hypersurface","n":2,"degree":3}]"#,
    );
    let (code, table, _) = polrig(&["invariants", "--manifest", &m]);
    assert_eq!(code, EXIT_OK);
    assert!(table.lines().next().unwrap().starts_with("family"));
    assert!(table.contains("genus_one_boundary (del Pezzo)"), "{table}");

    let (code, csv, _) = polrig(&["invariants", "--manifest", &m, "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = csv.split("\r\n").collect();
    assert_eq!(
        lines[0],
        "family,params,n,d,g,delta,h0,sigma_bar_sq_exact,sigma_bar_sq_decimal,l2_ratio,r_min,tag"
    );
    assert!(
        lines[1].starts_with("projective_space,n=2;twist=2,2,4,0,0,6,3,3.0,12,3,"),
        "{}",
        lines[1]
    );

    let (code, json, _) = polrig(&["invariants", "--manifest", &m, "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v[1]["sigma_bar_sq_exact"], "4");
    assert_eq!(v[1]["del_pezzo"], true);
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = manifest(dir.path(), "bad.json", r#"{"family":"scroll","a":[0,2]}"#);
    let (code, _, err) = polrig(&["invariants", "--manifest", &bad]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("a[0] must be ≥ 1"), "{err}");

    let missing = dir.path().join("nope.json");
    let (code, _, err) = polrig(&["invariants", "--manifest", missing.to_str().unwrap()]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("cannot read manifest"));

    assert_eq!(
        polrig(&["scan", "--n", "0", "--max-degree", "4"]).0,
        EXIT_INPUT
    );
    assert_eq!(
        polrig(&[
            "scan",
            "--family",
            "grassmannian",
            "--n",
            "2",
            "--max-degree",
            "4"
        ])
        .0,
        EXIT_INPUT
    );
    assert_eq!(polrig(&["calibrate"]).0, EXIT_INPUT);
    assert_eq!(polrig(&["frobnicate"]).0, EXIT_INPUT);
    let ok = manifest(
        dir.path(),
        "ok.json",
        r#"{"family":"projective_space","n":1}"#,
    );
    assert_eq!(
        polrig(&["verify", "--manifest", &ok, "--samples", "10"]).0,
        EXIT_INPUT
    );
}

#[test]
fn verify_without_a_chart_exits_three_before_sampling() {
    let dir = tempfile::tempdir().unwrap();
    let m = manifest(
        dir.path(),
        "m.json",
        r#"[{"family":"projective_space","n":1},{"family":"hypersurface","n":2,"degree":3}]"#,
    );
    let (code, out, err) = polrig(&["verify", "--manifest", &m, "--samples", "10000"]);
    assert_eq!(code, EXIT_UNSUPPORTED);
    assert!(out.is_empty());
    assert!(
        err.contains("numerics unsupported for hypersurface"),
        "{err}"
    );
}

#[test]
fn verify_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let m = manifest(
        dir.path(),
        "m.json",
        r#"[{"family":"scroll","a":[1,2]},{"family":"product","factors":[1,1],"multidegree":[1,2]}]"#,
    );
    let args = [
        "verify",
        "--manifest",
        &m,
        "--samples",
        "20000",
        "--seed",
        "7",
        "--format",
        "json",
    ];
    let (code, first, _) = polrig(&args);
    assert_eq!(code, EXIT_OK, "{first}");
    let (_, second, _) = polrig(&args);
    assert_eq!(first, second);
    let v: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v[0]["verification"]["samples"], 20000);
    assert_eq!(v[0]["verification"]["pass"], true);

    let (code, csv, _) = polrig(&[
        "verify",
        "--manifest",
        &m,
        "--samples",
        "20000",
        "--format",
        "csv",
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(csv.lines().nth(1).unwrap().ends_with(",PASS"));
}

#[test]
fn verify_fails_at_an_absurd_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let m = manifest(
        dir.path(),
        "m.json",
        r#"{"family":"projective_space","n":2,"twist":2}"#,
    );
    let (code, out, _) = polrig(&[
        "verify",
        "--manifest",
        &m,
        "--samples",
        "10000",
        "--tolerance-sigma",
        "1e-9",
    ]);
    assert_eq!(code, EXIT_FAIL);
    assert!(out.contains("FAIL"));
}

#[test]
fn scan_output_and_gap_footer() {
    let (code, csv, err) = polrig(&[
        "scan",
        "--family",
        "scroll",
        "--n",
        "3",
        "--max-degree",
        "5",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(csv.split("\r\n").filter(|l| !l.is_empty()).count(), 1 + 4);
    assert!(
        err.contains("gap (3, 4) empty: true; least value above 3: 4"),
        "{err}"
    );

    let (_, table, _) = polrig(&["scan", "--n", "2", "--max-degree", "4", "--format", "table"]);
    assert!(table
        .trim_end()
        .ends_with("gap check skipped (requires n ≥ 3)"));

    let (_, json, _) = polrig(&["scan", "--n", "4", "--max-degree", "6", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["gap"]["least_above_n"], "6");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let (code, out, _) = polrig(&[
        "scan",
        "--n",
        "3",
        "--max-degree",
        "6",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("rows written"));
    let (_, again, _) = polrig(&["scan", "--n", "3", "--max-degree", "6"]);
    assert_eq!(fs::read_to_string(&path).unwrap(), again);
}

#[test]
fn scan_rows_round_trip_through_a_manifest() {
    let (_, json, _) = polrig(&["scan", "--n", "2", "--max-degree", "5", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    let rows = v["rows"].as_array().unwrap();
    // rebuild the pairs from family and params, then compare invariants
    let dir = tempfile::tempdir().unwrap();
    let pairs = polrig::catalog::scan(polrig::catalog::FamilyFilter::All, 2, 5).unwrap();
    let text = serialize_manifest(&pairs.iter().map(|(p, _)| p.clone()).collect::<Vec<_>>());
    assert_eq!(serialize_manifest(&parse_manifest(&text).unwrap()), text);
    let m = manifest(dir.path(), "all.json", &text);
    let (code, again, _) = polrig(&["invariants", "--manifest", &m, "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let again: serde_json::Value = serde_json::from_str(&again).unwrap();
    assert_eq!(again.as_array().unwrap(), rows);
}

#[test]
fn calibrate_passes_and_catches_a_wrong_normalization() {
    let (code, out, _) = polrig(&["calibrate", "--n", "2"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("PASS"));
    let (code, out, _) = polrig(&["calibrate", "--n", "2", "--kappa", "1"]);
    assert_eq!(code, EXIT_FAIL);
    assert!(out.contains("mean S                12.0"), "{out}");
    let (code, json, _) = polrig(&[
        "calibrate",
        "--n",
        "1",
        "--step",
        "1e-2",
        "--format",
        "json",
    ]);
    assert_eq!(code, EXIT_FAIL);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    let ratio = v["convergence_ratio"].as_f64().unwrap();
    assert!((3.5..=4.5).contains(&ratio), "{ratio}");
}

#[test]
fn thread_variable_is_validated() {
    let _guard = ENV.lock().unwrap_or_else(|e| e.into_inner());
    std::env::set_var(THREADS_ENV, "zero");
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(["polrig", "calibrate", "--n", "1"], &mut out, &mut err);
    std::env::set_var(THREADS_ENV, "2");
    let ok = run(
        ["polrig", "calibrate", "--n", "1"],
        &mut out,
        &mut Vec::new(),
    );
    std::env::remove_var(THREADS_ENV);
    assert_eq!(code, EXIT_INPUT);
    assert!(String::from_utf8(err).unwrap().contains(THREADS_ENV));
    assert_eq!(ok, EXIT_OK);
}
