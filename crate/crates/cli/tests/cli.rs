use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_envrad")).args(args).current_dir(corpus()).output().unwrap()
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn hnf(v: &Value) -> Vec<Vec<i64>> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|r| r.as_array().unwrap().iter().map(|x| x.as_str().unwrap().parse().unwrap()).collect())
        .collect()
}

#[test]
fn envelope_of_zero_in_z4() {
    let o = run(&["envelope", "--module", "z4.json", "--submodule", "zero.json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    assert_eq!(hnf(&r["result"]["submodule_hnf"]), vec![vec![2]]);
    assert_eq!(r["result"]["certified"], true);
    assert_eq!(r["inputs"].as_array().unwrap().len(), 2);
}

#[test]
fn flagship_chain_has_three_terms() {
    let o = run(&["chain", "--module", "flagship.json", "--submodule", "nbar.json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    let chain = r["result"]["chain"].as_array().unwrap();
    assert_eq!(chain.len(), 3);
    assert_eq!(hnf(&chain[2]), vec![vec![0, 1, 0, 0], vec![0, 0, 2, 0], vec![0, 0, 0, 1]]);
    assert_eq!(r["result"]["termination_index"], 2);
}

#[test]
fn uncertified_result_exits_3_when_required() {
    let o = run(&["envelope", "--module", "flagship.json", "--submodule", "nbar.json", "--require-certified"]);
    assert_eq!(o.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "uncertified");
    let o = run(&["envelope", "--module", "z4.json", "--require-certified"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"ring\": ").unwrap();
    let o = run(&["envelope", "--module", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "invalid_input");

    fs::write(&bad, r#"{"ring": {"type": "Zmod", "n": 1}, "ambient_rank": 1, "relations": []}"#).unwrap();
    assert_eq!(run(&["envelope", "--module", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["envelope", "--module", "missing.json"]).status.code(), Some(2));
    assert_eq!(run(&["random-check", "--suite", "no-such-suite"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["chain", "--module", "flagship.json", "--submodule", "nbar.json"][..],
        &["random-check", "--suite", "oracle-equivalence", "--seed", "3", "--cases", "10"][..],
        &["classify", "--module", "z12.json", "--output", "text"][..],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn emitted_submodules_parse_back() {
    let dir = tempfile::tempdir().unwrap();
    let r = report(&run(&["envelope", "--module", "flagship.json", "--submodule", "nbar.json"]));
    let path = dir.path().join("e1.json");
    fs::write(&path, serde_json::to_string(&r["result"]).unwrap()).unwrap();
    let o = run(&["envelope", "--module", "flagship.json", "--submodule", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let e2 = report(&o);
    assert_eq!(hnf(&e2["result"]["submodule_hnf"]), vec![vec![0, 1, 0, 0], vec![0, 0, 2, 0], vec![0, 0, 0, 1]]);

    let s = report(&run(&["sradical", "--module", "z12.json"]));
    fs::write(&path, serde_json::to_string(&s["result"]).unwrap()).unwrap();
    let o = run(&["check", "--module", "z12.json", "--submodule", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(report(&o)["result"]["is_semiprime"], "Yes");
}

#[test]
fn verify_shipped_corpus() {
    let o = run(&["verify", "--corpus", "."]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let r = report(&o);
    assert!(r["result"]["claims"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn verify_perturbed_corpus_fails() {
    let dir = tempfile::tempdir().unwrap();
    for e in fs::read_dir(corpus()).unwrap() {
        let e = e.unwrap();
        fs::copy(e.path(), dir.path().join(e.file_name())).unwrap();
    }
    let path = dir.path().join("claims.json");
    let mut claims: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let target = claims["claims"]
        .as_array_mut()
        .unwrap()
        .iter_mut()
        .find(|c| c["id"] == "z4-envelope-of-zero")
        .unwrap();
    target["expected"]["submodule_hnf"] = serde_json::json!([[1]]);
    fs::write(&path, serde_json::to_string(&claims).unwrap()).unwrap();

    let o = run(&["verify", "--corpus", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let r = report(&o);
    let failing: Vec<_> = r["result"]["claims"].as_array().unwrap().iter().filter(|c| c["pass"] == false).collect();
    assert_eq!(failing.len(), 1);
    assert_eq!(failing[0]["id"], "z4-envelope-of-zero");
    assert!(failing[0]["actual"].is_object() && failing[0]["expected"].is_object());
}

#[test]
fn verify_empty_directory_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["verify", "--corpus", dir.path().to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn random_check_campaigns() {
    let o = run(&["random-check", "--suite", "naturality", "--seed", "7", "--cases", "100"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(report(&o)["result"]["passed"], 100);
    let o = run(&["random-check", "--suite", "prop-env", "--cases", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(report(&o)["result"]["vacuous"], true);
    assert!(String::from_utf8_lossy(&o.stderr).contains("vacuous"));
}

#[test]
fn oracle_agrees_on_finite_module() {
    let o = run(&["oracle", "--module", "z12.json", "--submodule", "span4.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(report(&o)["result"]["agree"], true);
    // infinite modules are out of the oracle's reach
    assert_eq!(run(&["oracle", "--module", "z.json"]).status.code(), Some(1));
}
