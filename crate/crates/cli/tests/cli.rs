use std::path::Path;
use std::process::{Command, Output};

use bianchi_core::json::{eigensystem_from_json, eigensystem_to_json, operator_from_json, operator_to_json};
use serde_json::Value;

fn bianchi(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bianchi"))
        .args(args)
        .env("BIANCHI_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn plus_space_dimension_at_weight_ten() {
    let cache = tempfile::tempdir().unwrap();
    let out = bianchi(&["space", "--d", "11", "--k", "10", "--plus"], cache.path());
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["dim"], 4);
    assert_eq!(v["basis"].as_array().unwrap().len(), 4);
    assert_eq!(v["dim_V"], 121);
}

#[test]
fn congruence_graph_contains_the_three_edges() {
    let cache = tempfile::tempdir().unwrap();
    let out = bianchi(&["congruences", "--d", "11", "--k", "10"], cache.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    let edges: Vec<(String, String, String)> = v["edges"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            let mut pair = [e["f"].as_str().unwrap().to_string(), e["g"].as_str().unwrap().to_string()];
            pair.sort();
            let [a, b] = pair;
            (a, b, e["p"].as_str().unwrap().to_string())
        })
        .collect();
    let has = |a: &str, b: &str, p: &str| edges.iter().any(|e| e.0 == a && e.1 == b && e.2 == p);
    assert!(has("BC1", "E12", "691"));
    assert!(has("E12", "F1", "173"));
    assert!(has("BC1", "F1", "43"));
    assert!(v["skipped"].as_array().unwrap().is_empty());
    // A second run against the now warm cache is byte-identical.
    let again = bianchi(&["congruences", "--d", "11", "--k", "10"], cache.path());
    assert_eq!(again.stdout, out.stdout);
}

#[test]
fn verify_passes_on_a_clean_build() {
    let cache = tempfile::tempdir().unwrap();
    let out = bianchi(&["verify", "--d", "2", "--k", "4"], cache.path());
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["passed"], true);
    assert!(!v["runs"][0]["checks"].as_array().unwrap().is_empty());
    let many = bianchi(&["verify", "--d", "1,3,7", "--k", "2"], cache.path());
    assert_eq!(many.status.code(), Some(0));
    assert_eq!(json_of(&many)["runs"].as_array().unwrap().len(), 3);
}

#[test]
fn usage_errors_exit_with_two() {
    let cache = tempfile::tempdir().unwrap();
    for args in [
        vec!["space", "--d", "5", "--k", "2"],
        vec!["space", "--d", "11", "--k", "3"],
        vec!["space", "--d", "11", "--k", "42"],
        vec!["heilbronn", "--d", "11", "--prime", "4"],
        vec!["heilbronn", "--d", "11", "--prime", "x+y"],
        vec!["hecke", "--d", "11", "--k", "2", "--prime", "w", "--domain", "Z"],
        vec!["nonsense"],
        vec!["space", "--d", "11"],
    ] {
        let out = bianchi(&args, cache.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn cache_directory_precedence() {
    let env_dir = tempfile::tempdir().unwrap();
    let flag_dir = tempfile::tempdir().unwrap();
    let work = tempfile::tempdir().unwrap();
    let entry = |root: &Path| root.join("heilbronn").join("d11").join("0_1.json");

    let flag = flag_dir.path().to_str().unwrap();
    let out = bianchi(&["heilbronn", "--d", "11", "--prime", "w", "--cache-dir", flag], env_dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(entry(flag_dir.path()).exists());
    assert!(!entry(env_dir.path()).exists());

    let out = bianchi(&["heilbronn", "--d", "11", "--prime", "w"], env_dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(entry(env_dir.path()).exists());

    let out = Command::new(env!("CARGO_BIN_EXE_bianchi"))
        .args(["heilbronn", "--d", "11", "--prime", "w"])
        .env_remove("BIANCHI_CACHE_DIR")
        .current_dir(work.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(entry(&work.path().join("cache")).exists());
}

#[test]
fn documents_round_trip_and_are_deterministic() {
    let cache = tempfile::tempdir().unwrap();
    let args = ["eigensystems", "--d", "11", "--k", "4", "--norm-up-to", "20"];
    let out = bianchi(&args, cache.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(bianchi(&args, cache.path()).stdout, out.stdout);
    let v = json_of(&out);
    for s in v["systems"].as_array().unwrap() {
        let parsed = eigensystem_from_json(s).unwrap();
        let mut again = eigensystem_to_json(&parsed);
        again["name"] = s["name"].clone();
        assert_eq!(&again, s);
    }

    for domain in ["V", "W", "Wplus", "Q"] {
        let out = bianchi(&["hecke", "--d", "7", "--k", "2", "--prime", "w", "--domain", domain], cache.path());
        assert_eq!(out.status.code(), Some(0), "{domain}");
        let v = json_of(&out);
        let mut again = operator_to_json(&operator_from_json(&v).unwrap());
        again["format_version"] = v["format_version"].clone();
        assert_eq!(again, v);
    }

    let out_file = cache.path().join("presentation.json");
    let out = bianchi(&["presentation", "--d", "2", "--output", out_file.to_str().unwrap()], cache.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_slice(&std::fs::read(&out_file).unwrap()).unwrap();
    assert_eq!(v["generators"]["A"], serde_json::json!(["1", "0+1*w", "0+1*w", "-1"]));
    assert_eq!(v["relators"].as_array().unwrap().len(), 4);
}
