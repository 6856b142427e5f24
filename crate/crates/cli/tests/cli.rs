//! Binary-level tests: exit codes, artifact formats, determinism, and
//! round-trips through the crate's own parsers.

use fareylab_core::congruence::ResidueSystem;
use fareylab_core::farey::enumerate;
use fareylab_core::oracles::totient_sum;
use fareylab_core::report::{read_census_csv, read_farey_csv};
use std::process::{Command, Output};

fn fareylab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fareylab"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn farey_count_matches_totient_oracle() {
    let out = fareylab(&["farey", "count", "--n", "1", "--q", "100"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("json");
    assert_eq!(v["count"].as_u64().unwrap(), totient_sum(100));
    assert_eq!(v["schema_version"].as_u64().unwrap(), 1);
    assert!(v["ratio"].as_f64().unwrap() > 0.9);
}

#[test]
fn farey_list_round_trips() {
    let out = fareylab(&[
        "farey",
        "list",
        "--n",
        "1",
        "--q",
        "20",
        "--modulus",
        "2",
        "--class",
        "0,1",
    ]);
    assert!(out.status.success());
    let rows = read_farey_csv(out.stdout.as_slice()).expect("csv parses");
    let sys = ResidueSystem::new(1, 2, &[vec![0, 1]]).unwrap();
    let set = enumerate(&sys, 20).unwrap();
    assert_eq!(rows.len(), set.len());
    for (i, (q, p)) in rows.iter().enumerate() {
        let (ep, eq) = set.point(i);
        assert_eq!((*q, p.as_slice()), (eq, ep));
    }
}

#[test]
fn identical_config_and_seed_is_byte_identical() {
    let args = [
        "stats",
        "p",
        "--n",
        "1",
        "--q",
        "300",
        "--window",
        "box:0,0.5",
        "--samples",
        "5000",
        "--seed",
        "11",
    ];
    let a = fareylab(&args);
    let b = fareylab(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    // a different seed must change the artifact
    let c = fareylab(&[
        "stats",
        "p",
        "--n",
        "1",
        "--q",
        "300",
        "--window",
        "box:0,0.5",
        "--samples",
        "5000",
        "--seed",
        "12",
    ]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn stats_report_parses_back() {
    let out = fareylab(&[
        "stats",
        "p0",
        "--n",
        "1",
        "--q",
        "100",
        "--window",
        "box:-0.5,0.5",
        "--kmax",
        "8",
    ]);
    assert!(out.status.success());
    let rep: fareylab_core::spacing::SpacingReport =
        serde_json::from_slice(&out.stdout).expect("round-trip");
    assert_eq!(rep.q, 100);
    assert!((rep.total_mass() - 1.0).abs() < 1e-12);
}

#[test]
fn invalid_ratio_names_the_flag() {
    let out = fareylab(&[
        "dio", "est", "--n", "1", "--q", "100", "--alpha", "0.5", "--c", "1.0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("--c"), "stderr: {stderr}");
}

#[test]
fn modulus_without_class_is_a_validation_error() {
    let out = fareylab(&[
        "stats",
        "p",
        "--n",
        "1",
        "--q",
        "100",
        "--modulus",
        "2",
        "--window",
        "box:0,0.5",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("--class"), "stderr: {stderr}");
}

#[test]
fn overflow_exits_with_code_three() {
    // 2^40: the prime-power order formula overflows u128 at k = 4
    let out = fareylab(&[
        "congr",
        "--n",
        "3",
        "--modulus",
        "1099511627776",
        "--class",
        "0,0,0,1",
    ]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn frobenius_number_command() {
    let out = fareylab(&["frob", "number", "--a", "6,9,20"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("json");
    assert_eq!(v["f"].as_i64().unwrap(), 43);

    let bad = fareylab(&["frob", "number", "--a", "4,6"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn census_csv_parses_back() {
    let out = fareylab(&[
        "frob",
        "census",
        "--n",
        "2",
        "--t",
        "20",
        "--domain",
        "0,1;0,1;0,1",
        "--modulus",
        "2",
        "--class",
        "0,0,1",
        "--rgrid",
        "0:2:0.25",
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rows = read_census_csv(out.stdout.as_slice()).expect("csv parses");
    assert_eq!(rows.len(), 9);
    assert!(rows.windows(2).all(|w| w[0].full_tail >= w[1].full_tail));
    assert!(rows.iter().all(|r| r.restricted_tail <= r.full_tail));
}

#[test]
fn congr_bruteforce_agrees() {
    let out = fareylab(&[
        "congr",
        "--n",
        "1",
        "--modulus",
        "2",
        "--class",
        "0,1",
        "--bruteforce",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("json");
    assert_eq!(v["orbit"]["astar"].as_u64().unwrap(), 2);
    assert_eq!(v["orbit"]["index"].as_u64().unwrap(), 6);
    assert!(v["bruteforce_agrees"].as_bool().unwrap());
}

#[test]
fn out_dir_env_resolves_relative_paths() {
    let dir = std::env::temp_dir().join(format!("fareylab-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_fareylab"))
        .args([
            "farey",
            "count",
            "--n",
            "1",
            "--q",
            "10",
            "--out",
            "count.json",
        ])
        .env("FAREYLAB_OUT_DIR", &dir)
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let written = std::fs::read(dir.join("count.json")).expect("artifact in out dir");
    let v: serde_json::Value = serde_json::from_slice(&written).expect("json");
    assert_eq!(v["count"].as_u64().unwrap(), totient_sum(10));
    std::fs::remove_dir_all(&dir).ok();
}
