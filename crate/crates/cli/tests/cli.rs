use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const H_PRIME: &str = r#"{"kind":"array","q":5,"r0":3,"n0":5,"delta":[0,1,2]}"#;
const H_DOUBLE_PRIME: &str = r#"{"kind":"array","q":7,"r0":3,"n0":5,"delta":[0,1,2]}"#;
const C5: &str = r#"{"kind":"array","q":71,"r0":4,"n0":16,"delta":[0,11,37,70]}"#;
const C1: &str = r#"{"kind":"array","q":43,"r0":3,"n0":30,"delta":[0,1,2]}"#;
const REGULAR_3_6: &str = r#"{"kind":"array","q":7,"r0":3,"n0":6,"delta":[0,1,2]}"#;

fn spec(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_acldpc"))
        .args(args)
        .env_remove("ACLDPC_WORKERS")
        .output()
        .unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn manifest_lines(dir: &Path) -> Vec<serde_json::Value> {
    fs::read_to_string(dir.join("manifest.jsonl"))
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn construct_prints_exponents_and_writes_artifacts() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out");
    let o = run(&[
        "construct",
        s(&spec(&dir, "a.json", H_PRIME)),
        "--out",
        s(&out),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(o.stdout).unwrap(),
        "0 0 0 0 0\n0 1 2 3 4\n0 2 4 1 3\n"
    );
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("validation.json")).unwrap()).unwrap();
    assert_eq!(report["four_cycle_free"], true);
    assert_eq!(report["dimension"], 12);
    assert!(fs::read_to_string(out.join("H.alist"))
        .unwrap()
        .starts_with("25 15\n"));
    let m = manifest_lines(&out);
    assert_eq!(m.len(), 1);
    assert_eq!(m[0]["command"], "construct");
    assert_eq!(m[0]["spec_digest"].as_str().unwrap().len(), 64);
    let outputs: Vec<&str> = m[0]["outputs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert_eq!(outputs, ["exponents.json", "H.alist", "validation.json"]);
}

#[test]
fn invalid_specs_exit_with_validation_status() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out");
    let bad = spec(
        &dir,
        "bad.json",
        r#"{"kind":"array","q":6,"r0":3,"n0":5,"delta":[0,1,2]}"#,
    );
    assert_eq!(
        run(&["construct", s(&bad), "--out", s(&out)]).status.code(),
        Some(2)
    );
    let garbled = spec(&dir, "g.json", "{ not json");
    assert_eq!(
        run(&["construct", s(&garbled), "--out", s(&out)])
            .status
            .code(),
        Some(2)
    );
    let missing = dir.path().join("missing.json");
    assert_eq!(
        run(&["unwrap", s(&missing), "--out", s(&out)])
            .status
            .code(),
        Some(2)
    );
    let c1 = spec(&dir, "c1.json", C1);
    let o = run(&[
        "simulate",
        s(&c1),
        "--out",
        s(&out),
        "--ebno-grid",
        "3",
        "--block-bits",
        "6001",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(
        run(&["analyze", s(&c1), "--out", s(&out)]).status.code(),
        Some(2)
    );
}

#[test]
fn unwrap_reports_constraint_lengths() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out");
    let o = run(&["unwrap", s(&spec(&dir, "c5.json", C5)), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let m: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("metrics_felstrom.json")).unwrap())
            .unwrap();
    assert_eq!(
        (m["m_s"].as_u64(), m["v_s"].as_u64()),
        (Some(71), Some(1136))
    );

    let o = run(&[
        "unwrap",
        s(&spec(&dir, "b.json", H_DOUBLE_PRIME)),
        "--method",
        "tanner",
        "--out",
        s(&out),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let dump = fs::read_to_string(out.join("former_tanner.txt")).unwrap();
    assert_eq!(dump.lines().count(), 21);
    assert_eq!(dump.lines().last(), Some("1 1 1 1 1"));
    let m: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("metrics_tanner.json")).unwrap())
            .unwrap();
    assert_eq!((m["m_s"].as_u64(), m["v_s"].as_u64()), (Some(7), Some(35)));
}

#[test]
fn simulate_is_reproducible_across_runs_and_workers() {
    let dir = TempDir::new().unwrap();
    let b = spec(&dir, "b.json", H_DOUBLE_PRIME);
    let sim = |out: &Path, workers: &str| {
        let o = run(&[
            "simulate",
            s(&b),
            "--out",
            s(out),
            "--ebno-grid",
            "1:1:3",
            "--block-bits",
            "350",
            "--seed",
            "7",
            "--min-frame-errors",
            "20",
            "--max-frames",
            "2000",
            "--workers",
            workers,
        ]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&o.stderr)
        );
        fs::read(out.join("ber.csv")).unwrap()
    };
    let first = sim(&dir.path().join("a"), "1");
    assert_eq!(first, sim(&dir.path().join("b"), "1"));
    assert_eq!(first, sim(&dir.path().join("c"), "2"));
    let text = String::from_utf8(first).unwrap();
    assert!(text.starts_with("ebno_db,rate,frames,bit_errors,frame_errors,ber,fer,seed\n"));
    let ber: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(5).unwrap().parse().unwrap())
        .collect();
    assert_eq!(ber.len(), 3);
    assert!(ber.windows(2).all(|w| w[1] <= w[0]), "{ber:?}");
}

#[test]
fn high_snr_gives_zero_error_rows() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out");
    let o = run(&[
        "simulate",
        s(&spec(&dir, "c1.json", C1)),
        "--out",
        s(&out),
        "--ebno-grid",
        "9",
        "--block-bits",
        "3000",
        "--max-frames",
        "20",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(out.join("ber.csv")).unwrap();
    assert_eq!(csv.lines().nth(1), Some("9.0,0.9,20,0,0,0.0,0.0,1"));
}

#[test]
fn brute_force_spectrum_and_bound_are_reproducible() {
    let dir = TempDir::new().unwrap();
    let a = spec(&dir, "a.json", H_PRIME);
    let analyze = |out: &Path| {
        let o = run(&[
            "analyze",
            s(&a),
            "--out",
            s(out),
            "--distance",
            "brute",
            "--termination",
            "tail-biting",
            "--periods",
            "5",
            "--rate",
            "actual",
            "--tub",
            "--ebno-grid",
            "2:1:6",
        ]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&o.stderr)
        );
        (
            fs::read(out.join("spectrum_brute.json")).unwrap(),
            fs::read(out.join("tub_ber.csv")).unwrap(),
        )
    };
    let first = analyze(&dir.path().join("x"));
    assert_eq!(first, analyze(&dir.path().join("y")));
    let spectrum: serde_json::Value = serde_json::from_slice(&first.0).unwrap();
    assert_eq!(spectrum["exhaustive"], true);
    assert_eq!(spectrum["entries"][0]["d"], 6);
    let total: u64 = spectrum["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["A"].as_u64().unwrap())
        .sum();
    assert_eq!(total, (1 << 12) - 1);
}

#[test]
fn oversized_brute_force_is_a_resource_abort() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out");
    let o = run(&[
        "analyze",
        s(&spec(&dir, "c1.json", C1)),
        "--out",
        s(&out),
        "--distance",
        "brute",
        "--periods",
        "20",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn ga_threshold_of_three_six_ensemble() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out");
    let o = run(&[
        "analyze",
        s(&spec(&dir, "r.json", REGULAR_3_6)),
        "--out",
        s(&out),
        "--threshold",
        "ga",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("threshold_ga.json")).unwrap()).unwrap();
    assert_eq!((r["dv"].as_u64(), r["dc"].as_u64()), (Some(3), Some(6)));
    let t = r["threshold_db"].as_f64().unwrap();
    assert!((1.0..1.3).contains(&t), "{t}");
}

#[test]
fn manifests_are_appended() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out");
    let a = spec(&dir, "a.json", H_PRIME);
    for _ in 0..2 {
        assert_eq!(
            run(&["unwrap", s(&a), "--out", s(&out)]).status.code(),
            Some(0)
        );
    }
    let m = manifest_lines(&out);
    assert_eq!(m.len(), 2);
    assert_eq!(m[0]["spec_digest"], m[1]["spec_digest"]);
    assert_eq!(m[0]["parameters"]["method"], "felstrom");
}
