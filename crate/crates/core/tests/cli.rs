use std::path::PathBuf;
use std::process::{Command, Output};

fn riley(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_riley"))
        .args(args)
        .env_remove("RILEY_EPS")
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("riley-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn classify_reports_fields() {
    let out = riley(&["classify", "--alpha1", "0", "--alpha2", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for key in ["D", "G", "Delta", "region", "commutator_type", "quartic_roots_in_unit_interval", "traces"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["D"], 1225.0);
}

#[test]
fn negative_parameters_parse() {
    let out = riley(&["classify", "--alpha1", "-0.3", "--alpha2", "-0.2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["region"], "Z_interior");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["classify", "--alpha1", "1.6", "--alpha2", "0"],
        vec!["classify", "--alpha2", "0"],
        vec!["scan", "--grid", "1"],
        vec!["scan", "--format", "png"],
        vec!["verify", "--suite", "everything"],
        vec![],
    ] {
        let out = riley(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn bad_env_epsilon_is_usage_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_riley"))
        .args(["classify", "--alpha1", "0", "--alpha2", "0"])
        .env("RILEY_EPS", "tiny")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn env_epsilon_is_reported() {
    let out = Command::new(env!("CARGO_BIN_EXE_riley"))
        .args(["classify", "--alpha1", "0.1", "--alpha2", "0.1"])
        .env("RILEY_EPS", "1e-7")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["epsilon"], 1e-7);
}

#[test]
fn unwritable_output_exits_three() {
    let out = riley(&["scan", "--grid", "4", "--out", "/proc/riley/nope.csv"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn scan_outputs_are_byte_deterministic() {
    for fmt in ["csv", "svg", "json"] {
        let (a, b) = (scratch(&format!("a.{fmt}")), scratch(&format!("b.{fmt}")));
        for p in [&a, &b] {
            let out = riley(&["scan", "--grid", "24", "--format", fmt, "--out", p.to_str().unwrap()]);
            assert_eq!(out.status.code(), Some(0));
            assert!(out.stdout.is_empty());
        }
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap(), "{fmt}");
    }
    let csv = std::fs::read_to_string(scratch("a.csv")).unwrap();
    assert!(csv.starts_with("alpha1,alpha2,D,G,region\n"));
    assert_eq!(csv.lines().count(), 24 * 24 + 1);
}

#[test]
fn scan_is_symmetric_under_negation() {
    let out = riley(&["scan", "--grid", "31", "--bounds", "-1.5,1.5,-1.5,1.5"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let regions: Vec<&str> = text.lines().skip(1).map(|l| l.rsplit(',').next().unwrap()).collect();
    let n = 31;
    for i in 0..n {
        for j in 0..n {
            assert_eq!(regions[i * n + j], regions[(n - 1 - i) * n + (n - 1 - j)]);
        }
    }
    assert_eq!(regions[15 * n + 15], "Z_interior");
}

#[test]
fn spheres_svg_has_ten_discs() {
    let out = riley(&["spheres", "--alpha1", "0.4", "--alpha2", "0.3", "--k-range", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let svg = String::from_utf8(out.stdout).unwrap();
    assert!(svg.contains(r#"version="1.1""#));
    assert_eq!(svg.matches("<text").count(), 10);
}

#[test]
fn verify_suites_pass() {
    let out = riley(&["verify", "--suite", "limit"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["check"] == "euler_characteristic" && c["verdict"] == "pass"));
    for c in checks {
        let keys: Vec<&String> = c.as_object().unwrap().keys().collect();
        assert_eq!(keys.len(), 5);
    }
    let out = riley(&["verify", "--suite", "moduli"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["checks"].as_array().unwrap().iter().any(|c| c["check"] == "discriminant_identity"));
}

#[test]
fn verify_all_is_ordered_and_deterministic() {
    let a = riley(&["verify"]);
    let b = riley(&["verify", "--suite", "all"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let first_limit = text.find("parabolic_fixed_points").unwrap();
    let first_core = text.find("generator_identities").unwrap();
    assert!(first_core < first_limit);
}

#[test]
fn verify_failure_exits_one() {
    // A tolerance this coarse makes every point classify as marginal, which breaks the region checks.
    let out = riley(&["verify", "--suite", "moduli", "--epsilon", "1e6"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(json(&out)["checks"].as_array().unwrap().iter().any(|c| c["verdict"] == "fail"));
}

#[test]
fn octahedron_export_file() {
    let path = scratch("octahedron.json");
    let out = riley(&["octahedron", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["post_merge"]["pairings"].as_array().unwrap().len(), 4);
    assert_eq!(v["pre_merge"]["pairings"].as_array().unwrap().len(), 5);
    assert_eq!(v["relator"]["reduces_to_identity"], true);
    let verts = v["post_merge"]["vertices"].as_array().unwrap();
    assert_eq!(verts.len(), 6);
    assert!(verts[0]["heisenberg"].is_null());
    assert_eq!(v["post_merge"]["pairings"][0]["matrix"].as_array().unwrap().len(), 3);
}
