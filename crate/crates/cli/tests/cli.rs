use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name).display().to_string()
}

fn steinberg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steinberg"))
        .args(args)
        .env_remove("STEINBERG_SEED")
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: stdout={} stderr={}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn theorem_on_the_pair_groupoid() {
    let out = steinberg(&["gpd", "verify-theorem", "--groupoid", &fixture("pair2.json"), "--subset", "ALL", "--ring", "rat"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["holds"], true);
    assert_eq!(r["lhs_dim"], 2);
    assert_eq!(r["rhs_dim"], 2);
}

#[test]
fn non_invariant_subset_needs_force() {
    let g = fixture("pair2.json");
    let out = steinberg(&["gpd", "verify-theorem", "--groupoid", &g, "--subset", "u1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = steinberg(&["gpd", "verify-theorem", "--groupoid", &g, "--subset", "u1", "--force"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["invariant"], false);
}

#[test]
fn groupoid_commands() {
    let g = fixture("pair2.json");
    let out = steinberg(&["gpd", "validate", "--groupoid", &g]);
    assert_eq!(out.status.code(), Some(0));

    let out = steinberg(&["gpd", "centraliser", "--groupoid", &g, "--span", "u1", "--span", "u2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["dim"], 2);

    let out = steinberg(&["gpd", "core-injectivity", "--groupoid", &g, "--gen", "g12 - g21"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["agree"], true);
    assert_eq!(r["injective"], false);

    let out = steinberg(&["gpd", "core-injectivity", "--groupoid", &g, "--gen", "0"]);
    assert_eq!(report(&out)["injective"], true);
}

#[test]
fn toeplitz_centraliser_check() {
    let out = steinberg(&["lpa", "centraliser-check", "--graph", &fixture("toeplitz.json"), "--ring", "rat", "[c;v]"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["commutes"], false);
    assert_eq!(r["in_core"], false);
    assert_eq!(r["agree"], true);
    assert_eq!(r["witness"], "f");
}

#[test]
fn commutativity() {
    let out = steinberg(&["lpa", "commutative", "--graph", &fixture("loop.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["commutative"], true);

    let out = steinberg(&["lpa", "commutative", "--graph", &fixture("toeplitz.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["commutative"], false);
}

#[test]
fn lpa_arithmetic() {
    let g = fixture("loop.json");
    let out = steinberg(&["lpa", "mul", "--graph", &g, "[c;v]", "[v;c]"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["product"], "[v;v]");

    let out = steinberg(&["lpa", "normalize", "--graph", &fixture("toeplitz.json"), "[c;c] + [f;f]"]);
    assert_eq!(report(&out)["normal_form"], "[v;v]");

    let out = steinberg(&["lpa", "is-central", "--graph", &g, "[c;v]"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["central"], true);
}

#[test]
fn cycles() {
    let out = steinberg(&["graph", "cycles", "--graph", &fixture("loop-with-tail.json")]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["cycles"], serde_json::json!(["c"]));
    assert_eq!(r["acyclic"], false);
}

#[test]
fn bridge_on_an_edge() {
    let out = steinberg(&["bridge", "verify-iso", "--graph", &fixture("edge.json"), "--samples", "50"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["groupoid_size"], 4);
    assert_eq!(r["injectivity_rank"], 4);
}

#[test]
fn bridge_refuses_cycles() {
    let out = steinberg(&["bridge", "verify-iso", "--graph", &fixture("loop.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("acyclic"), "{}", stderr(&out));
}

#[test]
fn parse_errors_point_at_the_column() {
    let out = steinberg(&["lpa", "normalize", "--graph", &fixture("loop.json"), "[c;v] + [q;v]"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let err = stderr(&out);
    assert!(err.contains("[c;v] + [q;v]"), "{err}");
    assert!(err.contains('^'), "{err}");
}

#[test]
fn malformed_input_exits_2() {
    let g = fixture("loop.json");
    for args in [
        vec!["lpa", "commutative", "--graph", "no-such-file.json"],
        vec!["--ring", "reals", "lpa", "commutative", "--graph", &g],
        vec!["--ring", "int", "lpa", "centraliser-check", "--graph", &g, "[c;v]"],
        vec!["lpa", "frobnicate"],
    ] {
        let out = steinberg(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
    }
    assert_eq!(steinberg(&["--help"]).status.code(), Some(0));
}

#[test]
fn seed_variable_overrides_flag_and_is_validated() {
    let run = |var: &str| {
        Command::new(env!("CARGO_BIN_EXE_steinberg"))
            .args(["--seed", "1", "bridge", "verify-iso", "--graph", &fixture("edge.json")])
            .env("STEINBERG_SEED", var)
            .output()
            .unwrap()
    };
    assert_eq!(run("7").status.code(), Some(0));
    let bad = run("seven");
    assert_eq!(bad.status.code(), Some(2));
    assert!(stderr(&bad).contains("STEINBERG_SEED"));
}

#[test]
fn tampered_suite_fails_and_reports_its_seed() {
    let out = Command::new(env!("CARGO_BIN_EXE_steinberg"))
        .args(["--seed", "1", "suite", "run", "--tamper"])
        .env("STEINBERG_SEED", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["seed"], 3);
    assert_eq!(r["tamper"], true);
    assert_eq!(r["passed"], false);
    let failed: Vec<u64> =
        r["criteria"].as_array().unwrap().iter().filter(|c| c["passed"] == false).map(|c| c["id"].as_u64().unwrap()).collect();
    assert!(failed.contains(&4) && failed.contains(&7), "{failed:?}");
}
