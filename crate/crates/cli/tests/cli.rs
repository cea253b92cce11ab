use std::path::PathBuf;

use sscurve::budget::Budget;
use sscurve_cli::{construct_file, run, EXIT_CAPACITY, EXIT_OK, EXIT_USAGE, EXIT_VERIFY_FAILED};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).to_string_lossy().into_owned()
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("sscurve").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn fixtures_match_fresh_construction() {
    for (name, g, f2m, glue) in [("g1.json", 1, false, false), ("g30.json", 30, true, true), ("g221.json", 221, false, false)] {
        let shipped = std::fs::read_to_string(fixture(name)).unwrap();
        let fresh = construct_file(g, f2m, glue, &Budget::default()).unwrap().to_json();
        assert_eq!(shipped, fresh, "{name}");
    }
}

#[test]
fn construct_json_is_the_file() {
    let (code, out, _) = cli(&["--json", "construct", "30", "--mode", "f2m", "--glue"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, std::fs::read_to_string(fixture("g30.json")).unwrap());
}

#[test]
fn count_and_lpoly_of_elliptic_fixture() {
    let g1 = fixture("g1.json");
    assert_eq!(cli(&["count", &g1, "--ext", "2"]).1, "9\n");
    assert_eq!(cli(&["count", &g1]).1, "3\n");
    assert_eq!(cli(&["lpoly", &g1]).1, "[1,0,2]\n");
    let (_, out, _) = cli(&["--json", "lpoly", &g1]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["lpoly"], serde_json::json!(["1", "0", "2"]));
    assert_eq!(v["counts"], serde_json::json!([3, 9, 9]));
}

#[test]
fn verify_exit_codes() {
    let (code, out, _) = cli(&["verify", &fixture("g30.json")]);
    assert_eq!(code, EXIT_OK, "{out}");
    let (code, out, _) = cli(&["verify", &fixture("reducible.json")]);
    assert_eq!(code, EXIT_VERIFY_FAILED);
    assert!(out.contains("reducible"));
    let (code, out, _) = cli(&["--json", "verify", &fixture("reducible.json")]);
    assert_eq!(code, EXIT_VERIFY_FAILED);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "reducible");
}

#[test]
fn verify_constructed_genus_five() {
    let dir = std::env::temp_dir().join(format!("sscurve-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("g5.json");
    let p = path.to_string_lossy().into_owned();
    assert_eq!(cli(&["construct", "5", "--out", &p]).0, EXIT_OK);
    let (code, out, _) = cli(&["--json", "verify", &p]);
    assert_eq!(code, EXIT_OK, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["strategy"], "curve");
    assert_eq!(v["supersingular"], true);
    assert_eq!(v["lpoly"].as_array().unwrap().len(), 11);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_and_capacity_errors() {
    assert_eq!(cli(&["construct", "5", "--mode", "bogus"]).0, EXIT_USAGE);
    assert_eq!(cli(&["construct", "5", "--glue"]).0, EXIT_USAGE);
    assert_eq!(cli(&["construct", "0"]).0, EXIT_USAGE);
    assert_eq!(cli(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(cli(&["count", "/nonexistent/curve.json"]).0, EXIT_USAGE);
    assert_eq!(cli(&["--max-degree", "3", "construct", "30", "--mode", "f2m"]).0, EXIT_CAPACITY);
    assert_eq!(cli(&["--budget-log2", "4", "count", &fixture("g221.json"), "--ext", "5"]).0, EXIT_CAPACITY);
    let (code, out, _) = cli(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("construct"));
}

#[test]
fn malformed_file_is_a_usage_error() {
    let dir = std::env::temp_dir().join(format!("sscurve-cli-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(&path, r#"{"kind":"single","field":{"degree":1,"modulus":"0x2"},"S":["0x1","0x1"],"R":[["0x0","0x1","0x0"]]}"#)
        .unwrap();
    assert_eq!(cli(&["verify", &path.to_string_lossy()]).0, EXIT_USAGE);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn iso_and_radical() {
    let (a, b) = (fixture("iso_r.json"), fixture("iso_r2.json"));
    let (code, out, _) = cli(&["--json", "iso", "--mode", "curves", &a, &b]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["isomorphic"], true);
    assert!(v["witness"].is_string());
    assert!(v["witness_field"]["degree"].is_u64());
    let (code, out, _) = cli(&["--json", "radical", &a]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["dimension"], 4);
}

#[test]
fn json_output_is_deterministic() {
    for args in [
        vec!["--json", "decompose", "221"],
        vec!["--json", "quotients", "FIX30"],
        vec!["--json", "verify", "FIX30"],
    ] {
        let f30 = fixture("g30.json");
        let args: Vec<&str> = args.iter().map(|a| if *a == "FIX30" { f30.as_str() } else { a }).collect();
        let first = cli(&args);
        assert_eq!(first, cli(&args));
        serde_json::from_str::<serde_json::Value>(&first.1).unwrap();
    }
}

#[test]
fn decompose_human_output() {
    let (code, out, _) = cli(&["decompose", "221"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("blocks (s, r): (0, 0) (2, 2) (6, 1)"));
    assert!(out.contains("moduli bound = 12"));
}
