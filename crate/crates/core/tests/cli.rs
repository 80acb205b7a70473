//! End-to-end runs of the `pil` binary.

use std::process::{Command, Output};

fn pil(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pil"))
        .args(args)
        .env_remove("PIL_NMAX")
        .env_remove("PIL_FORMAT")
        .env_remove("PIL_KSET")
        .env_remove("PIL_BSET")
        .env_remove("PIL_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn count_prints_exact_integers() {
    let o = pil(&["count", "O", "1", "2", "1", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "4\n");
    assert_eq!(stdout(&pil(&["count", "D", "3", "2", "2", "29"])), "8\n");
    assert_eq!(stdout(&pil(&["count", "O1u", "1", "2", "1", "5", "--u", "1"])), "3\n");
    assert_eq!(stdout(&pil(&["count", "O_t", "0", "2", "1", "5", "--t", "1", "--m", "3"])), "1\n");
}

#[test]
fn count_json_and_csv() {
    let o = pil(&["count", "O", "1", "2", "1", "5", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["value"], 4);
    assert_eq!(v["family"], "O");
    let o = pil(&["count", "D", "0", "2", "1", "--range", "1..3", "--format", "csv"]);
    assert_eq!(
        stdout(&o),
        "family,j,k,b,t,m,n,value\nD,0,2,1,,,1,1\nD,0,2,1,,,2,1\nD,0,2,1,,,3,2\n"
    );
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["count", "Z", "1", "2", "1", "5"],
        vec!["count", "O1u", "2", "2", "1", "5", "--u", "1"],
        vec!["gf", "O_t", "2", "1", "5", "10"],
        vec!["map", "phi", "3^x", "2", "1"],
        vec!["verify", "beck", "--k", "1"],
        vec!["verify", "nope"],
        vec!["frobnicate"],
    ] {
        let o = pil(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn parse_errors_name_the_token() {
    let o = pil(&["map", "phi", "1 2^0x 3", "2", "1"]);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("2^0x"), "{err}");
}

#[test]
fn table29_matches_golden_file() {
    let golden = include_str!("golden/table29.txt");
    let o = pil(&["table29"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden);
    // stable across runs
    assert_eq!(stdout(&pil(&["table29"])), golden);
}

#[test]
fn gf_dump_and_coefficient() {
    assert_eq!(stdout(&pil(&["gf", "O", "2", "1", "10", "--coeff", "0", "-", "5"])), "3\n");
    assert_eq!(stdout(&pil(&["gf", "O", "2", "1", "0"])), "0: [ (0,0,1) ]\n");
    let dump = stdout(&pil(&["gf", "O", "2", "1", "3"]));
    assert_eq!(dump, "0: [ (0,0,1) ]\n1: [ (0,0,1) ]\n2: [ (0,0,1), (1,0,1) ]\n3: [ (0,0,2), (1,0,1) ]\n");
    assert_eq!(stdout(&pil(&["gf", "O", "2", "1", "3"])), dump);
    // coefficient grid agrees with counting
    for n in 0..=12u64 {
        for j in 0..=2u64 {
            let c = stdout(&pil(&["gf", "O", "3", "2", "12", "--coeff", &j.to_string(), "-", &n.to_string()]));
            let d = stdout(&pil(&["count", "D", &j.to_string(), "3", "2", &n.to_string()]));
            assert_eq!(c, d, "j={j} n={n}");
        }
    }
}

#[test]
fn map_reports_classification() {
    let o = pil(&["map", "psi", "4^5 6 12^7 18^8 24^9 36", "2", "6", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["image"], "4^5 6^7 18^2 24^3 36^4 48^4");
    assert_eq!(v["source"]["j"], 3);
    assert_eq!(v["target"]["j"], 3);
    assert_eq!(v["target"]["n"], 506);
}

#[test]
fn verify_reports_and_exit_status() {
    let o = pil(&["verify", "beck", "--nmax", "12", "--no-timing"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["check"], "beck");
    // deterministic bytes without timing
    assert_eq!(o.stdout, pil(&["verify", "beck", "--nmax", "12", "--no-timing"]).stdout);

    let o = pil(&["verify", "main", "--nmax", "10", "--kset", "2,3", "--bset", "1"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["elapsed_ms"].is_u64());
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn env_vars_fill_in_and_flags_win() {
    let run = |env: &[(&str, &str)], args: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_pil"));
        c.args(args);
        for (k, v) in env {
            c.env(k, v);
        }
        c.output().unwrap()
    };
    let o = run(&[("PIL_FORMAT", "json")], &["count", "O", "1", "2", "1", "5"]);
    assert!(stdout(&o).starts_with('{'));
    let o = run(&[("PIL_FORMAT", "json")], &["count", "O", "1", "2", "1", "5", "--format", "text"]);
    assert_eq!(stdout(&o), "4\n");
    let o = run(&[("PIL_NMAX", "6")], &["verify", "bijection", "--no-timing"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let max_n = v["grid"].as_array().unwrap().iter().map(|c| c["n"].as_u64().unwrap()).max();
    assert_eq!(max_n, Some(6));
}

#[test]
fn cache_file_is_written_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("counts.csv");
    let p = path.to_str().unwrap();
    assert_eq!(stdout(&pil(&["count", "O", "1", "2", "1", "5", "--cache", p])), "4\n");
    assert_eq!(stdout(&pil(&["count", "D", "3", "2", "2", "29", "--cache", p])), "8\n");
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text, "family,j,k,b,t,m,n,value\nO,1,2,1,,,5,4\nD,3,2,2,,,29,8\n");
    // a cached value is served as stored
    std::fs::write(&path, "family,j,k,b,t,m,n,value\nO,1,2,1,,,5,99\n").unwrap();
    assert_eq!(stdout(&pil(&["count", "O", "1", "2", "1", "5", "--cache", p])), "99\n");
}
