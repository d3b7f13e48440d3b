//! Acceptance run: one pass/fail line per criterion.
//!
//! Thresholds below are minimums on what each suite must cover; the checks
//! themselves are exact.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use steinberg_core::graph::Graph;
use steinberg_core::groupoid::GroupoidFile;
use steinberg_core::suite::{self, CriterionReport, Profile, SuiteOptions};

const SEED: u64 = 0;

const THEOREM_MIN_INSTANCES: usize = 100;
const THEOREM_TIME_LIMIT: Duration = Duration::from_secs(60);
const CENTRALISER_MIN_ELEMENTS: usize = 200;
const CENTRALISER_TIME_LIMIT: Duration = Duration::from_secs(120);
const SMALL_GRAPHS: usize = 259;
const LAURENT_CHECKS_PER_RING: usize = 2 + 11 * 11;
const BRIDGE_MIN_PAIRS: usize = 100;
const REWRITE_MIN_RAW_TERMS_PER_GRAPH: usize = 500;
const REWRITE_MIN_ORDERS: usize = 20;
const MIN_TRIPLES: usize = 500;
const MIN_IDEAL_CHOICES: usize = 100;

fn stat(r: &CriterionReport, key: &str) -> usize {
    r.stats.get(key).copied().unwrap_or(0)
}

/// Coverage conditions per criterion, on top of the suite's own verdict.
fn coverage(r: &CriterionReport, elapsed: Duration) -> Vec<String> {
    let mut problems = Vec::new();
    let mut need = |ok: bool, what: String| {
        if !ok {
            problems.push(what);
        }
    };
    match r.id {
        1 => {
            need(stat(r, "instances") >= THEOREM_MIN_INSTANCES, format!("only {} instances", stat(r, "instances")));
            need(r.cases == 2 * stat(r, "subsets"), "not every subset checked over both rings".into());
            need(elapsed < THEOREM_TIME_LIMIT, format!("took {elapsed:?}"));
        }
        2 => need(r.cases >= 2 * THEOREM_MIN_INSTANCES, format!("only {} cases", r.cases)),
        3 => {
            need(stat(r, "abelian") >= THEOREM_MIN_INSTANCES, format!("only {} abelian instances", stat(r, "abelian")));
            need(stat(r, "refused") >= 2, "S3 not refused over both rings".into());
        }
        4 => {
            let elements = stat(r, "elements");
            need(elements >= CENTRALISER_MIN_ELEMENTS, format!("only {elements} elements"));
            need(r.cases == elements + stat(r, "relations"), "unaccounted cases".into());
            need(stat(r, "commuting") > 0 && stat(r, "commuting") < elements, "sample lacks one of the two outcomes".into());
            need(elapsed < CENTRALISER_TIME_LIMIT, format!("took {elapsed:?}"));
        }
        5 => {
            need(stat(r, "graphs") == SMALL_GRAPHS, format!("{} graphs enumerated", stat(r, "graphs")));
            let expected = SMALL_GRAPHS + stat(r, "connected") + 2 * LAURENT_CHECKS_PER_RING;
            need(r.cases == expected, format!("{} checks, expected {expected}", r.cases));
        }
        6 => need(stat(r, "pairs") >= BRIDGE_MIN_PAIRS * r.cases && r.cases == 8, "too few pairs or cases".into()),
        7 => {
            let graphs = suite::LPA_GRAPHS.len();
            need(
                stat(r, "raw_terms") >= REWRITE_MIN_RAW_TERMS_PER_GRAPH * graphs,
                format!("only {} raw terms", stat(r, "raw_terms")),
            );
            let inputs = stat(r, "raw_terms") / suite::sizes::REWRITE_TERMS;
            need(
                r.cases - stat(r, "triples") >= inputs * (REWRITE_MIN_ORDERS + 1),
                "fewer than the required rewrite orders".into(),
            );
            need(stat(r, "triples") >= MIN_TRIPLES, format!("only {} triples", stat(r, "triples")));
        }
        8 => {
            need(r.cases >= MIN_IDEAL_CHOICES, format!("only {} choices", r.cases));
            need(stat(r, "zero_ideal") > 0 && stat(r, "nonzero_ideal") > 0, "sample lacks one of the two outcomes".into());
        }
        _ => need(false, "unknown criterion".into()),
    }
    problems
}

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn fixtures_match_the_suite_graphs() {
    for name in ["loop", "toeplitz", "rose2", "line3", "loop-with-tail", "edge"] {
        let g = Graph::from_json(&fixture(&format!("{name}.json"))).unwrap();
        assert_eq!(Some(g), suite::sample_graph(name), "{name}");
    }
    let pair2 = GroupoidFile::from_json(&fixture("pair2.json")).unwrap().to_groupoid().unwrap();
    assert!(pair2.validate().is_pass());
    assert_eq!(pair2.len(), 4);
}

#[test]
fn acceptance() {
    let opts = SuiteOptions::new(SEED, Profile::Quick);
    let mut failed = Vec::new();
    for (i, run) in suite::SUITES.iter().enumerate() {
        let start = Instant::now();
        let r = run(&opts);
        let elapsed = start.elapsed();
        assert_eq!(r.id as usize, i + 1);
        let problems = coverage(&r, elapsed);
        let ok = r.passed && problems.is_empty();
        println!(
            "criterion {}: {} ({} cases, {} failures, {:.1}s) {}",
            r.id,
            if ok { "PASS" } else { "FAIL" },
            r.cases,
            r.failures,
            elapsed.as_secs_f64(),
            r.name
        );
        println!("    stats: {:?}", r.stats);
        for w in r.witnesses.iter().chain(&problems) {
            println!("    {w}");
        }
        if !ok {
            failed.push(r.id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
