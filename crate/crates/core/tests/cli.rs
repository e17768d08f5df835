//! End-to-end tests of the `starkindex verify` command: exit codes,
//! output formats, determinism, and per-record isolation.

use std::path::PathBuf;
use std::process::Command;

use starkindex::record::to_record_file;
use starkindex::synth::{rng_from_seed, synth_record};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_starkindex"))
}

fn write_synthetic(dir: &std::path::Path, name: &str, m: usize, seed: u64) -> PathBuf {
    let mut rng = rng_from_seed(seed);
    let record = synth_record(m, 2, &mut rng);
    let file = to_record_file(&record);
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_vec_pretty(&file).unwrap()).unwrap();
    path
}

#[test]
fn verify_passes_on_synthetic_records() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = Vec::new();
    for (m, seed) in [(1usize, 21u64), (2, 22), (3, 23)] {
        args.push(write_synthetic(dir.path(), &format!("m{m}.json"), m, seed));
    }
    let out = bin().arg("verify").args(&args).output().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0), "stdout:\n{stdout}");
    assert_eq!(stdout.matches("overall: PASS").count(), 3);
    assert!(stdout.contains("P1: "));
    assert!(stdout.contains("product-formula"));
    assert!(stdout.contains("squareness"));
}

#[test]
fn empty_file_list_is_ok() {
    let out = bin().arg("verify").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
}

#[test]
fn json_reports_are_machine_readable_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_synthetic(dir.path(), "rec.json", 2, 99);
    let run = || {
        bin()
            .arg("verify")
            .arg("--json")
            .arg(&path)
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout, "reports must be deterministic");
    for line in String::from_utf8(a.stdout).unwrap().lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["overall"], "PASS");
        assert!(v["p1"]["index"].is_string());
        assert!(v["p2"].as_array().unwrap().len() > 4);
    }
}

#[test]
fn schema_violation_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, b"{\"group\": {\"two_m\": \"nope\"}}").unwrap();
    let out = bin().arg("verify").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("two_m"), "stderr: {stderr}");
}

#[test]
fn consistency_violation_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_synthetic(dir.path(), "rec.json", 1, 5);
    // Break the γ-action order: identity instead of −1.
    let text = std::fs::read_to_string(&path).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["minus_units"]["gamma_action"] = serde_json::json!([[1]]);
    std::fs::write(&path, serde_json::to_vec(&v).unwrap()).unwrap();
    let out = bin().arg("verify").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn sextic_without_f_block_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_synthetic(dir.path(), "rec.json", 3, 31);
    let text = std::fs::read_to_string(&path).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["sub_extension_F"] = serde_json::Value::Null;
    std::fs::write(&path, serde_json::to_vec(&v).unwrap()).unwrap();
    let out = bin().arg("verify").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verification_failure_exits_1_and_is_isolated() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_synthetic(dir.path(), "good.json", 1, 41);
    let bad = write_synthetic(dir.path(), "bad.json", 1, 42);
    // Corrupt the L-value so the product formula genuinely fails while the
    // record still ingests.
    let text = std::fs::read_to_string(&bad).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let re = v["l_values"][0]["re"].as_f64().unwrap();
    v["l_values"][0]["re"] = serde_json::json!(re * 3.0);
    std::fs::write(&bad, serde_json::to_vec(&v).unwrap()).unwrap();

    let out = bin().arg("verify").arg(&good).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8(out.stdout).unwrap();
    // The good record still verifies; the bad one fails in isolation.
    assert_eq!(stdout.matches("overall: PASS").count(), 1);
    assert_eq!(stdout.matches("overall: FAIL").count(), 1);
}

#[test]
fn inconsistent_log_rows_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_synthetic(dir.path(), "rec.json", 2, 71);
    let text = std::fs::read_to_string(&path).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    // Corrupt a derived log row so it no longer matches the γ-action.
    let old = v["minus_units"]["log_embeddings"][1][0].as_f64().unwrap();
    v["minus_units"]["log_embeddings"][1][0] = serde_json::json!(old + 0.25);
    std::fs::write(&path, serde_json::to_vec(&v).unwrap()).unwrap();
    let out = bin().arg("verify").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("log_embeddings"), "stderr: {stderr}");
}

#[test]
fn strict_flag_turns_inconclusive_into_failure() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_synthetic(dir.path(), "rec.json", 1, 61);
    // Degrade the stated log precision so float checks become
    // unresolvable at the default tolerance.
    let text = std::fs::read_to_string(&path).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["minus_units"]["precision"] = serde_json::json!(1e-2);
    std::fs::write(&path, serde_json::to_vec(&v).unwrap()).unwrap();

    let lax = bin().arg("verify").arg(&path).output().unwrap();
    assert_eq!(lax.status.code(), Some(0), "inconclusive is not a failure");
    let stdout = String::from_utf8(lax.stdout).unwrap();
    assert!(stdout.contains("INCONCLUSIVE"), "stdout: {stdout}");

    let strict = bin()
        .arg("verify")
        .arg("--strict")
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(strict.status.code(), Some(1));
}

#[test]
fn bound_violation_rejected_at_ingest() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_synthetic(dir.path(), "rec.json", 2, 55);
    let text = std::fs::read_to_string(&path).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    // d = 4 forces e ≥ (d−1)·2−2 = 4; keep e small to trip the bound.
    v["group"]["d"] = serde_json::json!(4);
    v["field_summary"]["e"] = serde_json::json!(0);
    std::fs::write(&path, serde_json::to_vec(&v).unwrap()).unwrap();
    let out = bin().arg("verify").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("e ≥"), "stderr: {stderr}");
}
