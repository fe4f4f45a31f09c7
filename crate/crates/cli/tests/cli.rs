//! End-to-end tests of the `cyclo` binary: report content, exit codes,
//! determinism and cache behavior.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cyclo"));
    cmd.current_dir(workspace_root());
    cmd
}

fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_lines(output: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&output.stdout)
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).expect("JSON line"))
        .collect()
}

/// Lines with the timing field blanked, for determinism comparisons.
fn without_duration(output: &Output) -> Vec<String> {
    json_lines(output)
        .into_iter()
        .map(|mut v| {
            v["duration_ms"] = Value::from(0);
            v.to_string()
        })
        .collect()
}

#[test]
fn quad_class_131_matches_paper() {
    let out = run(&["quad-class", "-p", "131"]);
    assert!(out.status.success());
    let lines = json_lines(&out);
    assert_eq!(lines.len(), 1);
    let report = &lines[0];
    assert_eq!(report["check"], "quad_class");
    assert_eq!(report["status"], "pass");
    assert_eq!(report["witnesses"]["alternating_sum"], "-655");
    assert_eq!(report["witnesses"]["h_dirichlet"], "5");
    assert_eq!(report["witnesses"]["h_oracle"], "5");
}

#[test]
fn annihilator_137_17_matches_paper() {
    let out = run(&["annihilator", "-p", "137", "--h", "17"]);
    assert!(out.status.success());
    let report = &json_lines(&out)[0];
    assert_eq!(report["status"], "pass");
    assert_eq!(report["witnesses"]["d"], "8");
    let roots = report["witnesses"]["roots"].as_str().unwrap();
    assert!(roots.split(',').any(|r| r == "9"), "−8 ≡ 9 missing from {roots}");
}

#[test]
fn regular_check_7_is_regular() {
    let out = run(&["regular-check", "-p", "7"]);
    assert!(out.status.success());
    let report = &json_lines(&out)[0];
    assert_eq!(report["witnesses"]["verdict"], "regular");
}

#[test]
fn gauss_desk_pair_reports() {
    let out = run(&["gauss", "-p", "5", "-q", "11"]);
    assert!(out.status.success());
    let lines = json_lines(&out);
    let by_check = |name: &str| {
        lines
            .iter()
            .find(|l| l["check"] == name)
            .unwrap_or_else(|| panic!("missing {name}"))
            .clone()
    };
    assert_eq!(by_check("tau_eigenvalue")["witnesses"]["rho"], "3");
    assert_eq!(by_check("gp1_valuation")["witnesses"]["valuation"], "5");
    assert_eq!(by_check("gauss_projection")["witnesses"]["g_pow_p_in_base_ring"], "true");
    assert!(lines.iter().all(|l| l["status"] == "pass"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["quad-class", "-p", "8"]).status.code(), Some(2));
    assert_eq!(run(&["quad-class", "-p", "13"]).status.code(), Some(2)); // 13 ≢ 3 mod 4
    assert_eq!(run(&["psi", "-p", "5", "-q", "13"]).status.code(), Some(2)); // q ≢ 1 mod p
    assert_eq!(
        run(&["annihilator", "-p", "131", "--h", "15"]).status.code(),
        Some(2)
    ); // composite h
    assert_eq!(
        run(&["gauss", "-p", "5", "-q", "11", "--v", "4"]).status.code(),
        Some(2)
    ); // 4 is not primitive mod 5
    assert_eq!(run(&["scan", "--task", "nope", "--p-range", "5..7"]).status.code(), Some(2));
}

#[test]
fn byte_identical_reruns() {
    let a = run(&["gauss", "-p", "5", "-q", "31"]);
    let b = run(&["gauss", "-p", "5", "-q", "31"]);
    assert_eq!(without_duration(&a), without_duration(&b));
    let a = run(&["scan", "--task", "quad-class", "--p-range", "7..60"]);
    let b = run(&["scan", "--task", "quad-class", "--p-range", "7..60"]);
    assert_eq!(without_duration(&a), without_duration(&b));
}

#[test]
fn cache_is_reused_and_correct() {
    let dir = std::env::temp_dir().join(format!("cyclo-cache-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cache = dir.join("results.jsonl");
    let cache_arg = cache.to_str().unwrap();

    let fresh = run(&["psi", "-p", "5", "-q", "11", "--out", cache_arg]);
    assert!(fresh.status.success());
    let lines_after_first = std::fs::read_to_string(&cache).unwrap().lines().count();
    assert_eq!(lines_after_first, json_lines(&fresh).len());

    // second run replays the cache: same reports, no new file lines
    let cached = run(&["psi", "-p", "5", "-q", "11", "--out", cache_arg]);
    assert_eq!(without_duration(&fresh), without_duration(&cached));
    let lines_after_second = std::fs::read_to_string(&cache).unwrap().lines().count();
    assert_eq!(lines_after_first, lines_after_second);

    // --no-cache recomputes and appends; fresh results must agree
    let nocache = run(&["psi", "-p", "5", "-q", "11", "--out", cache_arg, "--no-cache"]);
    assert_eq!(without_duration(&fresh), without_duration(&nocache));
    let lines_after_third = std::fs::read_to_string(&cache).unwrap().lines().count();
    assert_eq!(lines_after_third, 2 * lines_after_first);

    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn csv_mode_emits_rows() {
    let json_out = run(&["quad-class", "-p", "23"]);
    let csv_out = run(&["quad-class", "-p", "23", "--csv"]);
    assert!(csv_out.status.success());
    let csv = String::from_utf8_lossy(&csv_out.stdout);
    assert_eq!(csv.lines().count(), json_lines(&json_out).len());
    assert!(csv.starts_with("quad_class,pass,p=23,"));
}

#[test]
fn verify_tables_reproduces_everything() {
    let out = run(&["verify-tables"]);
    assert!(out.status.success(), "verify-tables failed: {out:?}");
    let lines = json_lines(&out);
    // 8 irregular-pair primes + 49 quadratic rows + 11 annihilator rows
    assert!(lines.len() >= 60, "unexpected row count {}", lines.len());
    assert!(
        lines.iter().all(|l| l["status"] == "pass"),
        "some table row failed"
    );
    // every annihilator row matched the paper value literally
    assert!(lines
        .iter()
        .filter(|l| l["check"] == "table_annihilator")
        .all(|l| l["witnesses"]["nu_match"] == "literal" || l["witnesses"]["nu_expected"].is_null()));
}

#[test]
fn scan_gauss_skips_beyond_budget_loudly() {
    let out = run(&["scan", "--task", "gauss", "--p-range", "13..13", "--q-max", "30"]);
    assert!(out.status.success());
    let lines = json_lines(&out);
    // q=23 has f=6 for p=13: 23^6 is far beyond the budget
    let skipped: Vec<_> = lines
        .iter()
        .filter(|l| l["status"] == "inapplicable")
        .collect();
    assert!(
        skipped
            .iter()
            .any(|l| l["params"]["q"] == "23" && l["witnesses"]["scope"]
                .as_str()
                .unwrap()
                .contains("budget")),
        "expected a loud inapplicable report for (13, 23)"
    );
}

#[test]
fn failing_table_row_exits_1() {
    // a corrupted reference table must produce a fail report and exit 1
    let dir = std::env::temp_dir().join(format!("cyclo-badtable-{}", std::process::id()));
    let data = dir.join("data");
    std::fs::create_dir_all(&data).unwrap();
    std::fs::write(data.join("irregular_pairs.csv"), "p,k\n37,34\n").unwrap();
    std::fs::write(data.join("quad_class.csv"), "p,h\n23,4\n").unwrap();
    std::fs::write(data.join("annihilator_examples.csv"), "p,h,beta,rho,d,nu\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_cyclo"))
        .current_dir(&dir)
        .arg("verify-tables")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(1));
    let lines = json_lines(&out);
    assert!(lines.iter().all(|l| l["status"] == "fail"), "{lines:?}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn singular_profile_desk_case() {
    let out = run(&["singular-profile", "-p", "5", "-q", "11"]);
    assert!(out.status.success());
    let lines = json_lines(&out);
    let profile = lines.iter().find(|l| l["check"] == "singular_profile").unwrap();
    assert_eq!(profile["status"], "pass");
    let identity = lines.iter().find(|l| l["check"] == "stickelberger_power").unwrap();
    assert_eq!(identity["status"], "pass");
}
