use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn localeig(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_localeig")).args(args).output().unwrap()
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_localeig"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let out = localeig(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn strs(v: &Value) -> Vec<String> {
    v.as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect()
}

#[test]
fn structure_of_the_coalescent_example() {
    let v = json(&["structure", &fixture("coalescent.txt"), "0"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["sigmas"], serde_json::json!([1, -1]));
    assert_eq!(v["minimal_indices_right"], serde_json::json!([]));
    assert_eq!(v["minimal_indices_left"], serde_json::json!([]));
}

#[test]
fn structure_of_small_matrices() {
    let v = json(&["structure", &fixture("identity.txt")]);
    assert_eq!(v["sigmas"], serde_json::json!([0, 0, 0]));
    let v = json(&["structure", &fixture("row.txt")]);
    assert_eq!(v["sigmas"], serde_json::json!([1]));
    assert_eq!(v["minimal_indices_right"], serde_json::json!([1]));
}

#[test]
fn rootvectors_at_a_coalescent_point() {
    let v = json(&["rootvectors", &fixture("coalescent.txt"), "0"]);
    assert_eq!(v["route"], "coalescent");
    let set = v["maximal_set"].as_array().unwrap();
    assert_eq!(set.len(), 1);
    assert_eq!(set[0]["order"], 1);
    assert_eq!(strs(&set[0]["vector"]), ["λ", "λ - 1"]);

    let v = json(&["rootvectors", &fixture("coalescent.txt"), "0", "--exact-k"]);
    assert_eq!(strs(&v["maximal_set"][0]["vector"]), ["λ/(λ + 1)", "-1/(λ + 1)"]);
    assert_eq!(v["pipeline"]["lambda"], serde_json::json!(["-1"]));
}

#[test]
fn rootvectors_at_infinity() {
    let v = json(&["rootvectors", &fixture("unimodular.txt"), "inf"]);
    let set = v["maximal_set"].as_array().unwrap();
    assert_eq!(set.len(), 1);
    assert_eq!(set[0]["order"], 1);
    // λ⁻¹[-λ, 1] up to scaling
    assert_eq!(strs(&set[0]["vector"]), ["1", "-1/λ"]);
}

#[test]
fn realize_and_feed_back() {
    let ss = json(&["realize", &fixture("coalescent.txt")]);
    assert_eq!(ss["states"], 1);
    assert_eq!(ss["A"], serde_json::json!([["0"]]));
    let ss = json(&["realize", &fixture("constant.txt")]);
    assert_eq!(ss["states"], 0);
    assert_eq!(ss["D"], serde_json::json!([["2", "-1/3"], ["5", "7"]]));

    // the emitted state space is accepted as a matrix input
    let text = serde_json::to_string(&json(&["realize", &fixture("coalescent.txt")])).unwrap();
    let out = with_stdin(&["structure", "-", "--json"], &text);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["sigmas"], serde_json::json!([1, -1]));
}

#[test]
fn pencil_of_the_feedback_system() {
    let v = json(&["pencil", &fixture("feedback_system.json"), "0"]);
    let set = v["maximal_set"].as_array().unwrap();
    assert_eq!(set.len(), 1);
    assert_eq!(set[0]["order"], 1);
    assert_eq!(strs(&set[0]["value"]), ["1", "1", "0"]);

    let v = json(&["pencil", &fixture("unimodular.txt")]);
    assert_eq!(v["route"], "pencil");
    assert_eq!(v["maximal_set"], serde_json::json!([]));
}

#[test]
fn float_backend() {
    let v = json(&["rootvectors", &fixture("coalescent.txt"), "0", "--backend", "float"]);
    assert_eq!(v["backend"], "float");
    assert_eq!(v["maximal_set"][0]["order"], 1);
    assert_eq!(v["sigmas"], serde_json::json!([1, -1]));
}

#[test]
fn several_points() {
    let v = json(&["structure", &fixture("coalescent.txt"), "--points", "0,1,inf"]);
    let reps = v.as_array().unwrap();
    assert_eq!(reps.len(), 3);
    assert_eq!(reps[1]["sigmas"], serde_json::json!([0, 0]));
    assert_eq!(reps[2]["point"], "inf");
}

#[test]
fn output_is_deterministic() {
    for backend in ["exact", "float"] {
        let args = ["coalescent", &fixture("coalescent.txt"), "0", "--backend", backend, "--json", "--seed", "7"];
        let a = localeig(&args);
        let b = localeig(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn text_and_json_agree() {
    let v = json(&["rootvectors", &fixture("coalescent.txt"), "0"]);
    let out = localeig(&["rootvectors", &fixture("coalescent.txt"), "0"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for entry in v["maximal_set"].as_array().unwrap() {
        for x in strs(&entry["vector"]).iter().chain(strs(&entry["value"]).iter()) {
            assert!(text.contains(x.as_str()), "{x} missing from\n{text}");
        }
    }
    for s in v["sigmas"].as_array().unwrap() {
        assert!(text.contains(&s.to_string()));
    }
}

#[test]
fn exit_codes() {
    let out = with_stdin(&["structure", "-"], "1, 2; 3");
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains('1'), "{err}");

    let out = with_stdin(&["structure", "-"], "[[1, 2],\n [3, ]]");
    assert_eq!(out.status.code(), Some(2));

    let out = localeig(&["coalescent", &fixture("coalescent.txt"), "inf"]);
    assert_eq!(out.status.code(), Some(4));

    let out = with_stdin(&["pencil", "-"], "l^2, 1");
    assert_eq!(out.status.code(), Some(4));
}
