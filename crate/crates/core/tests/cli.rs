use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn workspace_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

/// Runs the binary from the workspace root; returns (exit code, stdout, stderr).
fn aelab(args: &[&str], env_caps: Option<&str>) -> (i32, String, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_aelab"));
    cmd.current_dir(workspace_root()).args(args).env_remove(aelab::cli::CAPS_ENV);
    if let Some(caps) = env_caps {
        cmd.env(aelab::cli::CAPS_ENV, caps);
    }
    let out = cmd.output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn report(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = aelab(args, None);
    let json = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: stdout={out} stderr={err}"));
    (code, json)
}

fn kernels(v: &Value) -> Vec<Vec<String>> {
    v["expansions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["kernel"].as_array().unwrap().iter().map(|a| a.as_str().unwrap().to_string()).collect())
        .collect()
}

#[test]
fn stable_prints_the_four_models() {
    let (code, v) = report(&["stable", "corpus/ex2_2.lp"]);
    assert_eq!(code, 0);
    assert_eq!(
        kernels(&v),
        vec![
            vec!["p(a)", "p(b)", "q(a)", "q(b)"],
            vec!["p(a)", "p(b)", "q(a)", "r(b)"],
            vec!["p(a)", "p(b)", "q(b)", "r(a)"],
            vec!["p(a)", "p(b)", "r(a)", "r(b)"],
        ]
    );
    assert_eq!(v["exactness"], serde_json::json!(["exact"]));
    assert_eq!(v["timing"], Value::Null);
    for key in ["config", "inputs", "expansions", "verdicts", "witnesses", "exactness", "timing"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn expand_without_unique_names_in_any_mode() {
    let (code, v) = report(&["expand", "--variant", "hp", "--no-una", "--mode", "any", "corpus/ex4_8.lp"]);
    assert_eq!(code, 0);
    assert_eq!(kernels(&v), vec![vec!["p(n1)", "r(n2)"]]);
    assert_eq!(v["expansions"][0]["source"], "hp-minus");
    assert_eq!(v["exactness"], serde_json::json!(["bounded(4)"]));

    let (_, v) = report(&["expand", "--variant", "hp", "--no-una", "--mode", "all", "corpus/ex4_8.lp"]);
    assert_eq!(kernels(&v), vec![vec!["p(n1)", "q", "r(n2)"]]);
}

#[test]
fn compare_reports_a_witness_and_exits_one() {
    let (code, v) = report(&["compare", "--level", "oga", "--variant", "hp,eb", "corpus/p68_4.fot", "corpus/p68_4.lp"]);
    assert_eq!(code, 1);
    assert_eq!(v["verdicts"][0]["holds"], false);
    assert_eq!(v["witnesses"][0]["probe"], "s");
    assert!(v["verdicts"][0].get("exactness").is_some());
}

#[test]
fn compare_holds_exits_zero() {
    let (code, v) = report(&["compare", "--level", "og", "--variant", "eb,eh", "corpus/ex5_1.lp"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["verdicts"][0]["holds"], true);
}

#[test]
fn embed_prints_theory_text() {
    let (code, out, _) = aelab(&["embed", "--variant", "eh-v", "corpus/ex2_2.lp"], None);
    assert_eq!(code, 0);
    assert!(out.ends_with('\n'));
    assert!(out.contains("forall X. p(X) & L p(X) & -L s(X) -> q(X) & L q(X) | r(X) & L r(X).\n"));
    assert!(out.contains("-L(a = b) -> a != b."));
    let (_, minus, _) = aelab(&["embed", "--variant", "eh-v", "--no-una", "corpus/ex2_2.lp"], None);
    assert!(!minus.contains("a != b"));
}

#[test]
fn member_with_inline_probes() {
    let (code, v) = report(&["member", "--variant", "hp", "--probe", "b -> a", "corpus/ex5_1.lp"]);
    assert_eq!(code, 0, "{v}");
    let (code, _) = report(&["member", "--variant", "eb", "--probe", "b -> a", "corpus/ex5_1.lp"]);
    assert_eq!(code, 1);
}

#[test]
fn section_checks_exit_codes() {
    let (code, _) = report(&["closed-domain", "--variant", "hp", "corpus/ex5_4.lp"]);
    assert_eq!(code, 1);
    let (code, _) = report(&["closed-domain", "--variant", "eb", "corpus/ex5_4.lp"]);
    assert_eq!(code, 0);
    let (code, _) = report(&["invariance", "--variant", "eb", "corpus/ex5_1.lp"]);
    assert_eq!(code, 0);
}

#[test]
fn check_table_reports_the_cell() {
    let (code, v) = report(&["check-table1", "--theory", "corpus/p68_1.fot", "--program", "corpus/p68_1.lp"]);
    assert_eq!(code, 0, "{v}");
    let text = v.to_string();
    assert!(text.contains("Prop"), "{text}");
}

#[test]
fn usage_and_parse_errors_exit_two() {
    assert_eq!(aelab(&["frobnicate"], None).0, 2);
    assert_eq!(aelab(&["stable"], None).0, 2);
    assert_eq!(aelab(&["stable", "corpus/does-not-exist.lp"], None).0, 2);
    assert_eq!(aelab(&["--mode", "some", "stable", "corpus/ex2_2.lp"], None).0, 2);
    assert_eq!(aelab(&["--space", "bounded:0", "stable", "corpus/ex2_2.lp"], None).0, 2);
    let (code, _, err) = aelab(&["parse", "corpus/witnesses.fot", "corpus/ex2_2.lp", "Cargo.toml"], None);
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"), "{err}");
    assert_eq!(aelab(&["embed", "--variant", "hp", "corpus/ex4_13.lp"], None).0, 2, "not normal");
}

#[test]
fn cap_violations_exit_three() {
    let (code, _, err) = aelab(&["--caps", "kernels=2", "expand", "--variant", "hp-v", "corpus/ex2_2.lp"], None);
    assert_eq!(code, 3, "{err}");
    assert!(err.contains("cap exceeded"));
}

#[test]
fn caps_flag_wins_over_environment() {
    let args = ["expand", "--variant", "hp-v", "corpus/ex2_2.lp"];
    assert_eq!(aelab(&args, Some("kernels=2")).0, 3);
    let mut with_flag = vec!["--caps", "kernels=1000000"];
    with_flag.extend(args);
    let (code, out, _) = aelab(&with_flag, Some("kernels=2"));
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["config"]["caps"]["kernels"], 1_000_000);
    // unrelated environment overrides are kept
    let (_, out, _) = aelab(&with_flag, Some("atoms=19"));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["config"]["caps"]["atoms"], 19);
    assert_eq!(aelab(&args, Some("bogus=1")).0, 2);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for args in [
        vec!["expand", "--variant", "eb-v", "corpus/ex2_2.lp"],
        vec!["compare", "--level", "o", "--variant", "hp,eb", "corpus/ex5_4.lp"],
        vec!["closed-domain", "--variant", "hp", "corpus/ex5_4.lp"],
    ] {
        let first = aelab(&args, None);
        let second = aelab(&args, None);
        assert_eq!(first, second, "{args:?}");
    }
}

#[test]
fn timing_is_reported_only_on_request() {
    let (_, v) = report(&["--timing", "stable", "corpus/ex2_2.lp"]);
    assert!(v["timing"]["total_ms"].is_number());
}

#[test]
fn in_process_entry_point_matches_binary() {
    let (code, out, _) = aelab::cli::run_to_string(["aelab", "stable", "../../corpus/ex2_2.lp"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(kernels(&v).len(), 4);
}
