use std::path::PathBuf;
use std::process::{Command, Output};

use hnn_forge::analysis::{EvidenceReport, UniqueTrace, Verdict};

fn hnn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hnn-forge")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn first_line(o: &Output) -> String {
    stdout(o).lines().next().unwrap_or_default().to_string()
}

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

#[test]
fn nf_collapses_bs_pinch() {
    let o = hnn(&["--instance", "bs:2,3", "nf", "T g^4 t"]);
    assert!(o.status.success());
    assert_eq!(first_line(&o), "g^6");
    assert!(stdout(&o).contains("length: 0"));
}

#[test]
fn nf_output_is_a_fixed_point() {
    for (inst, word) in [
        ("bs:2,3", "g t g^5 T g^-1 T T g^2"),
        ("example5", "g1 t h(0,1,1,0) T g0 T h(1,0)"),
        ("finite:s3", "(12) t (13) T (123) t"),
    ] {
        let once = first_line(&hnn(&["--instance", inst, "nf", word]));
        let twice = first_line(&hnn(&["--instance", inst, "nf", &once]));
        assert_eq!(once, twice, "{inst}: {word}");
    }
}

#[test]
fn nf_json_has_stats() {
    let o = hnn(&["--instance", "bs:2,3", "nf", "g t g", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["length"], 1);
    assert_eq!(v["type"], 1);
    assert_eq!(v["normal_form"], "g^1 t g^1");
}

#[test]
fn invalid_instance_exits_3() {
    assert_eq!(hnn(&["--instance", "bs:2,0", "nf", "t"]).status.code(), Some(3));
    assert_eq!(hnn(&["--instance", "bogus", "nf", "t"]).status.code(), Some(3));
    assert_eq!(hnn(&["--instance", "finite:/nonexistent/instance.json", "nf", "t"]).status.code(), Some(3));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(hnn(&["--instance", "example5", "analyze", "--tau-length", "9"]).status.code(), Some(2));
    assert_eq!(hnn(&["--instance", "bs:2,3", "tree", "--radius", "7"]).status.code(), Some(2));
    assert_eq!(hnn(&["--instance", "bs:2,3", "nf", "q"]).status.code(), Some(2));
    assert_eq!(hnn(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(hnn(&["nf", "t"]).status.code(), Some(2));
}

#[test]
fn bad_thread_count_is_a_usage_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_hnn-forge"))
        .env("HNN_FORGE_THREADS", "0")
        .args(["--instance", "bs:2,3", "nf", "t"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn analyze_example5_is_stable_and_schema_valid() {
    let a = hnn(&["--instance", "example5", "analyze"]);
    let b = hnn(&["--instance", "example5", "analyze"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let report = EvidenceReport::from_json(&stdout(&a)).unwrap();
    assert_eq!(report.verdict, Verdict::NotCSimpleCertified);
    assert_eq!(report.unique_trace, UniqueTrace::UniqueTraceEvidence);
    assert_eq!(report.elapsed_ms, None);
}

#[test]
fn analyze_timing_fills_elapsed() {
    let o = hnn(&["--instance", "finite:z4", "analyze", "--timing"]);
    let report = EvidenceReport::from_json(&stdout(&o)).unwrap();
    assert!(report.elapsed_ms.is_some());
    assert_eq!(report.verdict, Verdict::NotCSimpleCertified);
}

#[test]
fn analyze_finite_file_instances() {
    let s3 = hnn(&["--instance", &format!("finite:{}", data("s3.json")), "analyze"]);
    assert!(s3.status.success(), "{}", String::from_utf8_lossy(&s3.stderr));
    assert_eq!(EvidenceReport::from_json(&stdout(&s3)).unwrap().verdict, Verdict::CSimpleCertified);
    let z4 = hnn(&["--instance", &format!("finite:{}", data("z4.json")), "analyze"]);
    assert_eq!(EvidenceReport::from_json(&stdout(&z4)).unwrap().verdict, Verdict::NotCSimpleCertified);
}

#[test]
fn analyze_bs_verdicts() {
    let simple = hnn(&["--instance", "bs:2,3", "analyze"]);
    assert_eq!(EvidenceReport::from_json(&stdout(&simple)).unwrap().verdict, Verdict::CSimpleEvidence);
    let not = hnn(&["--instance", "bs:2,-2", "analyze"]);
    assert_eq!(EvidenceReport::from_json(&stdout(&not)).unwrap().verdict, Verdict::NotCSimpleCertified);
}

#[test]
fn analyze_writes_file() {
    let path = std::env::temp_dir().join(format!("hnn-forge-report-{}.json", std::process::id()));
    let o = hnn(&["--instance", "finite:s3", "analyze", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(EvidenceReport::from_json(&text).is_ok());
}

#[test]
fn tree_dot_radius_one() {
    let o = hnn(&["--instance", "bs:2,3", "tree", "--radius", "1"]);
    assert!(o.status.success());
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph bass_serre {"));
    assert_eq!(dot.matches(" -> ").count(), 5);
    let e5 = hnn(&["--instance", "example5", "tree", "--radius", "2"]);
    assert_eq!(stdout(&e5).matches(" -> ").count(), 16);
}

#[test]
fn bs_chain_values() {
    let o = hnn(&["--instance", "bs:2,3", "bs-chain", "--direction", "1", "--steps", "4"]);
    assert_eq!(first_line(&o), "2 3 9 27 81");
    let o = hnn(&["--instance", "bs:4,2", "bs-chain", "--direction", "-1", "--steps", "3"]);
    assert_eq!(first_line(&o), "4 8 16 32");
    assert_eq!(hnn(&["--instance", "example5", "bs-chain", "--direction", "1", "--steps", "3"]).status.code(), Some(2));
}

#[test]
fn verify_example5_ledger() {
    let o = hnn(&["verify-example5", "--x-len", "2", "--tau-length", "3", "--pairs", "100"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 6);
    assert!(text.lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn verify_example5_mutated_rules_fail() {
    let o = hnn(&["--instance", "example5:drop-r3-flip", "verify-example5", "--x-len", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL reducer-identity"));
}
