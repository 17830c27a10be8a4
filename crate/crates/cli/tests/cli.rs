use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn ncup(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncup"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ncup_env(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncup"))
        .args(args)
        .env("NCUP_THREADS", threads)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn f(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

#[test]
fn fixtures_match_generator() {
    let cases: [(&str, &[&str]); 5] = [
        ("c4_standard.json", &["frame", "--kind", "standard", "--d", "4"]),
        ("c4_fourier.json", &["frame", "--kind", "fourier", "--d", "4"]),
        ("c4_comb.json", &["vector", "--kind", "comb", "--d", "4"]),
        (
            "m2_4_comb.json",
            &["vector", "--kind", "comb", "--algebra", "M2", "--d", "4"],
        ),
        (
            "cm2_3_random.json",
            &[
                "frame",
                "--kind",
                "random",
                "--algebra",
                "C+M2",
                "--d",
                "3",
                "--n",
                "5",
                "--seed",
                "11",
            ],
        ),
    ];
    for (name, args) in cases {
        let out = ncup(args);
        assert!(out.status.success(), "{}", stderr(&out));
        let expected = std::fs::read(fixture(name)).unwrap();
        assert_eq!(out.stdout, expected, "{name} is stale");
    }
}

#[test]
fn certify_comb_is_tight() {
    let out = ncup(&[
        "certify",
        "--frame-tau",
        &f("c4_standard.json"),
        "--frame-omega",
        &f("c4_fourier.json"),
        "--vector",
        &f("c4_comb.json"),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = json(&out);
    assert_eq!(r["status"], "ok");
    assert_eq!(r["tool"], "ncup");
    assert_eq!(r["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(r["result"]["certificate"]["product_lhs"], 4);
    assert_eq!(r["result"]["certificate"]["rhs"].as_f64(), Some(4.0));
    assert_eq!(r["tolerances"]["rel_tol"].as_f64(), Some(1e-8));
    assert_eq!(r["result"]["proof_chain"].as_array().unwrap().len(), 7);
}

#[test]
fn builtin_frames_over_a_matrix_algebra() {
    let out = ncup(&[
        "certify",
        "--frame-tau",
        "standard",
        "--frame-omega",
        "fourier",
        "--vector",
        &f("m2_4_comb.json"),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = json(&out);
    assert_eq!(r["result"]["algebra"], serde_json::json!([2]));
    assert_eq!(r["result"]["certificate"]["product_lhs"], 4);
}

#[test]
fn audit_is_byte_identical_across_runs_and_thread_counts() {
    let args = [
        "audit",
        "--algebra",
        "C+M2",
        "--d",
        "3",
        "--trials",
        "1000",
        "--seed",
        "7",
    ];
    let a = ncup_env(&args, "1");
    let b = ncup_env(&args, "4");
    let c = ncup(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1001);
    let summary: Value = serde_json::from_str(lines[1000]).unwrap();
    assert_eq!(summary["result"]["trials"], 1000);
    assert_eq!(summary["result"]["violations"], 0);
    for (i, line) in lines[..1000].iter().enumerate() {
        let record: Value = serde_json::from_str(line).unwrap();
        assert_eq!(record["trial"], i);
    }
}

#[test]
fn audit_seed_changes_output() {
    let a = ncup(&["audit", "--trials", "20", "--seed", "1"]);
    let b = ncup(&["audit", "--trials", "20", "--seed", "2"]);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn tao_exhaustive_p5() {
    let out = ncup(&["tao", "--p", "5", "--mode", "exhaustive"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = json(&out);
    assert_eq!(r["result"]["min_sum"], 6);
    assert_eq!(r["result"]["mode"], "exhaustive");
}

#[test]
fn tao_sampled_and_cap() {
    let out = ncup(&[
        "tao",
        "--p",
        "11",
        "--mode",
        "sampled",
        "--samples",
        "2000",
        "--seed",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(json(&out)["result"]["min_sum"], 12);

    let out = ncup(&["tao", "--p", "11"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--p 11"), "{}", stderr(&out));
}

#[test]
fn conjecture_report() {
    let out = ncup(&[
        "conjecture",
        "--algebra",
        "M2",
        "--p",
        "3",
        "--trials",
        "500",
        "--seed",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = json(&out);
    assert_eq!(r["status"], "ok");
    assert_eq!(r["result"]["delta_sum"], 4);
    assert!(r["result"]["structured"].is_object());
}

#[test]
fn coherence_of_builtins() {
    let out = ncup(&[
        "coherence",
        "--frame-tau",
        "standard",
        "--frame-omega",
        "fourier",
        "--algebra",
        "C",
        "--d",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = json(&out);
    assert!((r["result"]["mu"].as_f64().unwrap() - 0.5).abs() < 1e-12);

    let out = ncup(&["coherence", "--frame-tau", "standard", "--frame-omega", "fourier"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--algebra and --d"));
}

#[test]
fn parsevalize_output_feeds_back_in() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("p.json");
    let out = ncup(&[
        "parsevalize",
        "--frame-tau",
        &f("c4_scaled_standard.json"),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report: Value = serde_json::from_slice(&std::fs::read(&out_path).unwrap()).unwrap();
    assert!(report["result"]["output_deviation"].as_f64().unwrap() <= 1e-8);
    assert_eq!(report["result"]["input"]["verified_parseval"], false);

    let out = ncup(&[
        "certify",
        "--frame-tau",
        out_path.to_str().unwrap(),
        "--frame-omega",
        &f("c4_fourier.json"),
        "--vector",
        &f("c4_comb.json"),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(json(&out)["result"]["certificate"]["product_lhs"], 4);
}

#[test]
fn reports_round_trip_byte_identically() {
    let runs: [&[&str]; 4] = [
        &["tao", "--p", "3"],
        &[
            "coherence",
            "--frame-tau",
            "standard",
            "--frame-omega",
            "fourier",
            "--algebra",
            "C+M2",
            "--d",
            "3",
        ],
        &["parsevalize", "--frame-tau", &f("cm2_3_random.json")],
        &["conjecture", "--p", "2", "--trials", "50"],
    ];
    for args in runs {
        let out = ncup(args);
        assert!(out.status.success(), "{}", stderr(&out));
        let value: Value = serde_json::from_slice(&out.stdout).unwrap();
        let mut again = serde_json::to_string_pretty(&value).unwrap();
        again.push('\n');
        assert_eq!(again.as_bytes(), &out.stdout[..], "{args:?}");
    }
    let audit = ncup(&["audit", "--trials", "30", "--seed", "9"]);
    for line in String::from_utf8(audit.stdout).unwrap().lines() {
        let value: Value = serde_json::from_str(line).unwrap();
        assert_eq!(serde_json::to_string(&value).unwrap(), line);
    }
}

#[test]
fn malformed_json_exits_2_with_location() {
    let out = ncup(&[
        "certify",
        "--frame-tau",
        "standard",
        "--frame-omega",
        "fourier",
        "--vector",
        &f("malformed_vector.json"),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(
        err.contains("--vector") && err.contains("malformed_vector.json") && err.contains("line"),
        "{err}"
    );
}

#[test]
fn non_parseval_frame_exits_2() {
    let out = ncup(&[
        "certify",
        "--frame-tau",
        &f("c4_scaled_standard.json"),
        "--frame-omega",
        &f("c4_fourier.json"),
        "--vector",
        &f("c4_comb.json"),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("--frame-tau") && err.contains("not Parseval"), "{err}");
}

#[test]
fn shape_mismatch_exits_2() {
    let out = ncup(&[
        "certify",
        "--frame-tau",
        &f("c4_standard.json"),
        "--frame-omega",
        &f("c4_fourier.json"),
        "--vector",
        &f("m2_4_comb.json"),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("lives in"), "{}", stderr(&out));
}

#[test]
fn invalid_flags_exit_2() {
    for args in [
        &["audit", "--rel-tol", "0"][..],
        &["audit", "--rel-tol", "1.5"],
        &["tao", "--p", "4"],
        &["audit", "--algebra", "M0"],
        &["audit", "--d", "3", "--n-tau", "2"],
        &[
            "certify",
            "--frame-tau",
            "standard",
            "--frame-omega",
            "fourier",
            "--vector",
            "/nonexistent.json",
        ],
    ] {
        let out = ncup(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
    }
    let out = ncup_env(&["tao", "--p", "2"], "zero");
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("NCUP_THREADS"));
}

#[test]
fn zero_vector_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z.json");
    let zero =
        r#"{"shape":[1],"entries":[{"shape":[1],"blocks":[[[[0.0,0.0]]]]},{"shape":[1],"blocks":[[[[0.0,0.0]]]]}]}"#;
    std::fs::write(&path, zero).unwrap();
    let out = ncup(&[
        "certify",
        "--frame-tau",
        "standard",
        "--frame-omega",
        "fourier",
        "--vector",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("zero vector"), "{}", stderr(&out));
}
