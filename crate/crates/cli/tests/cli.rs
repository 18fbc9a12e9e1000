use std::path::{Path, PathBuf};
use std::process::Command;

use padic_hodge_cli::fixture::Fixture;
use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

/// Runs phodge from the crate root with a clean environment; returns
/// (exit code, stdout, stderr).
fn phodge(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_phodge"))
        .args(args)
        .current_dir(root())
        .env_remove("PHODGE_PRIME")
        .env_remove("PHODGE_PRECISION")
        .env_remove("PHODGE_SEED")
        .env_remove("PHODGE_RESULTS")
        .output()
        .expect("phodge runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn golden(name: &str, args: &[&str], code: i32) {
    let (c, out, err) = phodge(args);
    assert_eq!(c, code, "exit code of {args:?}; stderr: {err}");
    let path = root().join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &out).unwrap();
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(out, want, "output of {args:?} differs from {}", path.display());
}

#[test]
fn golden_newton() {
    golden("newton_simple12.txt", &["newton", "fixtures/simple12.json", "E"], 0);
    golden("newton_mixed3.json", &["--json", "newton", "fixtures/mixed3.json", "E"], 0);
}

#[test]
fn golden_hn() {
    golden("hn_diag1p.txt", &["hn", "fixtures/diag1p.json", "E", "F"], 0);
    golden("hn_mixed3.txt", &["hn", "fixtures/mixed3.json", "D", "T"], 0);
}

#[test]
fn golden_orbit_check() {
    golden("orbit_check_orbit2.txt", &["orbit", "check", "fixtures/orbit2.json", "E", "N", "F0"], 0);
    golden("orbit_check_zero.txt", &["orbit", "check", "fixtures/orbit2.json", "E", "Z", "F0", "--assert"], 0);
}

// the decay envelope fails by design, so `verify all` exits with 1
#[test]
fn golden_verify_all() {
    golden("verify_all.txt", &["verify", "all"], 1);
}

#[test]
fn documented_examples() {
    let (c, out, _) = phodge(&["newton", "fixtures/simple12.json", "E"]);
    assert_eq!(c, 0);
    assert!(out.contains("slopes: 1/2,1/2"));
    let (c, out, _) = phodge(&["flag-distance", "fixtures/diag1p.json", "F", "F"]);
    assert_eq!((c, out.as_str()), (0, "0\n"));
    let (c, out, _) = phodge(&["semistable", "fixtures/diag1p.json", "E", "F", "--assert"]);
    assert_eq!(c, 1);
    assert!(out.contains("witness: <(1,0)>"));
    let (c, out, _) = phodge(&["verify", "filtration"]);
    assert_eq!(c, 0);
    assert!(out.contains("Eq82-pairing-invariance: PASS (200 cases)"));
    let (c, out, _) = phodge(&["verify", "padic"]);
    assert_eq!(c, 0);
    assert!(out.lines().all(|l| l.contains(": PASS")));
}

#[test]
fn exit_codes() {
    assert_eq!(phodge(&["semistable", "fixtures/diag1p.json", "E", "G", "--assert"]).0, 0);
    assert_eq!(phodge(&["newton", "fixtures/missing.json", "E"]).0, 2);
    assert_eq!(phodge(&["newton", "fixtures/simple12.json", "X"]).0, 2);
    assert_eq!(phodge(&["--prime", "3", "newton", "fixtures/simple12.json", "E"]).0, 2);
    assert_eq!(phodge(&["verify", "nonsense"]).0, 2);
    assert_eq!(phodge(&["fourier", "expand", "--poly", "1,2"]).0, 2);
    assert_eq!(phodge(&["--precision", "1", "orbit", "limit", "fixtures/jordan4.json", "J", "F"]).0, 3);
    assert_eq!(phodge(&["hm", "fixtures/diag1p.json", "E", "F", "--assert"]).0, 1);
}

#[test]
fn invalid_fixtures_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        r#"{"prime": 4}"#,
        r#"{"prime": 5, "isocrystals": {"E": {"p": 3, "diagonal": ["1"]}}}"#,
        r#"{"prime": 5, "filtrations": {"F": {"dim": 2, "jumps": ["0", "1"], "bases": [[["1","0"]], [["1","0"],["0","1"]]]}}}"#,
        r#"{"prime": 5, "nilpotents": {"N": [["1","0"],["0","0"]]}}"#,
        r#"{"prime": 5, "models": {"M": {"f0": "nope", "sen": []}}}"#,
        r#"{"prime": 5, "pairs": {"P": {"isocrystal": "E", "filtration": "F"}}}"#,
        r#"{"prime": 5, "extra": {}}"#,
    ];
    for (i, text) in cases.iter().enumerate() {
        assert!(Fixture::parse(text, None).is_err(), "case {i} should be rejected");
        let path = dir.path().join(format!("bad{i}.json"));
        std::fs::write(&path, text).unwrap();
        assert_eq!(phodge(&["newton", path.to_str().unwrap(), "E"]).0, 2, "case {i}");
    }
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["--seed", "7", "verify", "orbit"][..],
        &["--json", "orbit", "search", "fixtures/orbit2.json", "E", "--jumps", "1,0"],
        &["--json", "decompose", "fixtures/mixed3.json", "E"],
    ] {
        assert_eq!(phodge(args), phodge(args), "{args:?}");
    }
}

fn without_report(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("report");
    v
}

/// Every documented subcommand prints a document the fixture loader accepts
/// and reproduces exactly.
#[test]
fn json_round_trips_through_the_loader() {
    let commands: Vec<Vec<&str>> = vec![
        vec!["newton", "fixtures/simple12.json", "E"],
        vec!["decompose", "fixtures/mixed3.json", "E"],
        vec!["hn", "fixtures/mixed3.json", "D", "F"],
        vec!["semistable", "fixtures/diag1p.json", "E", "F"],
        vec!["pairing", "fixtures/diag1p.json", "F", "G"],
        vec!["hm", "fixtures/diag1p.json", "E", "F"],
        vec!["ps-limit", "fixtures/diag1p.json", "L", "G", "--direction", "infinity"],
        vec!["orbit", "eval", "fixtures/orbit2.json", "N", "F0", "--t", "3"],
        vec!["orbit", "eval", "fixtures/orbit2.json", "N", "F0", "--t", "4", "--model", "M"],
        vec!["orbit", "limit", "fixtures/jordan4.json", "J", "F"],
        vec!["orbit", "check", "fixtures/orbit2.json", "E", "N", "F0"],
        vec!["orbit", "search", "fixtures/orbit2.json", "E", "--jumps", "1,0"],
        vec!["weight-filtration", "fixtures/jordan4.json", "J"],
        vec!["sl2", "fixtures/jordan4.json", "J"],
        vec!["--prime", "3", "fourier", "expand", "--poly", "1/2,0,1"],
        vec!["--prime", "3", "fourier", "pairing", "--measure", "1,2,3", "--character", "3"],
        vec!["--prime", "2", "fourier", "estimates", "--l-max", "4", "--n-max", "2"],
        vec!["flag-distance", "fixtures/diag1p.json", "G", "H"],
        vec!["verify", "isocrystal"],
    ];
    for args in commands {
        let mut full = vec!["--json"];
        full.extend(&args);
        let (_, out, err) = phodge(&full);
        let v: Value = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{args:?}: {e}; stderr {err}"));
        assert!(v["report"]["command"].is_string(), "{args:?}");
        let fx = Fixture::from_value(&v, None).unwrap_or_else(|e| panic!("{args:?}: {e}"));
        assert_eq!(fx.to_value(), without_report(v), "{args:?}");
    }
}

#[test]
fn search_appends_json_lines() {
    let dir = tempfile::tempdir().unwrap();
    let results = dir.path().join("results.jsonl");
    let r = results.to_str().unwrap();
    for _ in 0..2 {
        let (c, _, err) = phodge(&["--results", r, "orbit", "search", "fixtures/orbit2.json", "E", "--jumps", "1,0"]);
        assert_eq!(c, 0, "{err}");
    }
    let text = std::fs::read_to_string(&results).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], lines[1]);
    let rec: Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(rec["semistable"], Value::Bool(true));
    assert_eq!(rec["reverified"], Value::Bool(true));
    // a record carries everything needed to re-check it
    let doc = serde_json::json!({
        "prime": rec["prime"],
        "isocrystals": { "E": rec["isocrystal"] },
        "nilpotents": { "N": rec["nilpotent"] },
        "filtrations": { "F0": rec["f0"] },
    });
    let path = dir.path().join("replay.json");
    std::fs::write(&path, doc.to_string()).unwrap();
    let (c, out, _) = phodge(&["orbit", "check", path.to_str().unwrap(), "E", "N", "F0", "--assert"]);
    assert_eq!(c, 0);
    assert!(out.contains("nilpotent orbit: yes"));
}

#[test]
fn environment_overrides_flags() {
    let run = |envs: &[(&str, &str)], args: &[&str]| {
        let out = Command::new(env!("CARGO_BIN_EXE_phodge"))
            .args(args)
            .current_dir(root())
            .envs(envs.iter().copied())
            .output()
            .unwrap();
        (out.status.code(), String::from_utf8(out.stdout).unwrap())
    };
    let a = run(&[("PHODGE_PRIME", "3")], &["fourier", "expand", "--poly", "0,0,1"]);
    let b = run(&[], &["--prime", "3", "fourier", "expand", "--poly", "0,0,1"]);
    assert_eq!(a, b);
    assert_eq!(a.0, Some(0));
    let (code, _) = run(&[("PHODGE_PRECISION", "1")], &["orbit", "limit", "fixtures/jordan4.json", "J", "F"]);
    assert_eq!(code, Some(3));
}

#[test]
fn bundled_fixtures_load() {
    for entry in std::fs::read_dir(root().join("fixtures")).unwrap() {
        let path = entry.unwrap().path();
        Fixture::load(Path::new(&path), None).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    }
}
