//! Property suites over generated instances.
//!
//! Each suite runs its cases in parallel, merges the per-case tallies in
//! case order and reports counts plus the first few witnesses of failure, so
//! a fixed seed gives a byte-identical report.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bridge;
use crate::error::{Error, Result};
use crate::families::{self, Instance};
use crate::graph::Graph;
use crate::groupoid::{AlgebraElement, FiniteGroupoid};
use crate::lpa::{Lpa, LpaElement, RewriteRule};
use crate::scalars::RingSpec;

const MAX_WITNESSES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Quick,
    Full,
}

impl Profile {
    fn scale(self) -> usize {
        match self {
            Profile::Quick => 1,
            Profile::Full => 4,
        }
    }
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Profile::Quick),
            "full" => Ok(Profile::Full),
            _ => Err(Error::Schema(format!("unknown profile `{s}`, expected quick or full"))),
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Profile::Quick => "quick",
            Profile::Full => "full",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteOptions {
    pub seed: u64,
    pub profile: Profile,
    /// Run the path-algebra suites with the correction terms of the CK2
    /// rewrite dropped. Those suites are expected to fail.
    pub tamper: bool,
}

impl SuiteOptions {
    pub fn new(seed: u64, profile: Profile) -> Self {
        SuiteOptions { seed, profile, tamper: false }
    }

    fn rng(&self, suite: u64, case: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream((suite << 40) | case);
        rng
    }

    fn lpa(&self, graph: &Graph, ring: RingSpec) -> Lpa {
        let rule = if self.tamper { RewriteRule::DropCorrection } else { RewriteRule::CuntzKrieger };
        Lpa::new(graph.clone(), ring).with_rule(rule)
    }
}

/// Minimum sample sizes of the quick profile; the full profile multiplies them.
pub mod sizes {
    /// Random elements per graph and ring in the diagonal-centraliser suite.
    pub const CENTRALISER_ELEMENTS: usize = 60;
    /// Sampled pairs per graph and ring in the bridge suite.
    pub const BRIDGE_PAIRS: usize = 100;
    /// Raw inputs per graph, and raw terms per input, in the rewriting suite.
    pub const REWRITE_INPUTS: usize = 100;
    pub const REWRITE_TERMS: usize = 5;
    /// Random rewrite orders tried per input.
    pub const REWRITE_ORDERS: usize = 20;
    /// Associativity triples per graph.
    pub const ASSOCIATIVITY_TRIPLES: usize = 100;
    /// Ideal-generator choices in the uniqueness suite.
    pub const IDEAL_CHOICES: usize = 100;
    /// Largest `|m|`, `|n|` in the Laurent table of the loop algebra.
    pub const LAURENT_RANGE: i64 = 5;
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub cases: usize,
    pub failures: usize,
    pub stats: BTreeMap<&'static str, usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub profile: Profile,
    pub tamper: bool,
    pub passed: bool,
    pub criteria: Vec<CriterionReport>,
}

#[derive(Debug, Default)]
struct Tally {
    cases: usize,
    failures: usize,
    witnesses: Vec<String>,
    stats: BTreeMap<&'static str, usize>,
}

impl Tally {
    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(witness());
            }
        }
    }

    fn check_result(&mut self, label: impl fmt::Display, r: Result<bool>, witness: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.check(ok, || format!("{label}: {}", witness())),
            Err(e) => self.check(false, || format!("{label}: error: {e}")),
        }
    }

    fn count(&mut self, key: &'static str) {
        *self.stats.entry(key).or_default() += 1;
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.cases += other.cases;
        self.failures += other.failures;
        let room = MAX_WITNESSES.saturating_sub(self.witnesses.len());
        self.witnesses.extend(other.witnesses.into_iter().take(room));
        for (k, v) in other.stats {
            *self.stats.entry(k).or_default() += v;
        }
        self
    }

    fn finish(self, id: u8, name: &'static str) -> CriterionReport {
        CriterionReport {
            id,
            name,
            passed: self.failures == 0 && self.cases > 0,
            cases: self.cases,
            failures: self.failures,
            stats: self.stats,
            witnesses: self.witnesses,
        }
    }
}

fn merged(tallies: Vec<Tally>) -> Tally {
    tallies.into_iter().fold(Tally::default(), Tally::merge)
}

/// The two coefficient fields every suite runs over.
pub const RINGS: [RingSpec; 2] = [RingSpec::Rationals, RingSpec::IntegersMod(5)];

fn build(vertices: &[&str], edges: &[(&str, &str, &str)]) -> Graph {
    Graph::new(vertices, edges).expect("sample graphs are well formed")
}

/// Named sample graphs; the same graphs ship as JSON fixtures.
pub fn sample_graph(name: &str) -> Option<Graph> {
    Some(match name {
        "loop" => build(&["v"], &[("c", "v", "v")]),
        "toeplitz" => build(&["v", "w"], &[("c", "v", "v"), ("f", "v", "w")]),
        "rose2" => build(&["v"], &[("a", "v", "v"), ("b", "v", "v")]),
        "line3" => build(&["v1", "v2", "v3"], &[("e1", "v1", "v2"), ("e2", "v2", "v3")]),
        "line4" => build(&["v1", "v2", "v3", "v4"], &[("e1", "v1", "v2"), ("e2", "v2", "v3"), ("e3", "v3", "v4")]),
        "loop-with-tail" => build(&["u", "v"], &[("c", "v", "v"), ("t", "u", "v")]),
        "edge" => build(&["v", "w"], &[("e", "v", "w")]),
        "tree2" => build(
            &["r", "a", "b", "a1", "a2", "b1", "b2"],
            &[("x", "r", "a"), ("y", "r", "b"), ("x1", "a", "a1"), ("x2", "a", "a2"), ("y1", "b", "b1"), ("y2", "b", "b2")],
        ),
        _ => return None,
    })
}

fn sample_graphs(names: &[&'static str]) -> Vec<(&'static str, Graph)> {
    names.iter().map(|&n| (n, sample_graph(n).expect("known sample"))).collect()
}

/// Graphs of the diagonal-centraliser and rewriting suites.
pub const LPA_GRAPHS: [&str; 5] = ["loop", "toeplitz", "rose2", "line3", "loop-with-tail"];
/// Acyclic graphs of the bridge suite, with the rank of `L(E)` (= `|G_E|`).
pub const BRIDGE_GRAPHS: [(&str, usize); 4] = [("edge", 4), ("line3", 9), ("line4", 16), ("tree2", 36)];

/// Criterion 1: the centraliser theorem on every instance and invariant subset.
pub fn theorem_suite(_opts: &SuiteOptions) -> CriterionReport {
    let family = families::theorem_family();
    let tallies = family
        .par_iter()
        .map(|inst| {
            let mut t = Tally::default();
            t.count("instances");
            for u in inst.groupoid.invariant_subsets() {
                t.count("subsets");
                for ring in RINGS {
                    let label = format!("{} U={:?} over {ring}", inst.name, subset_names(&inst.groupoid, u.members()));
                    let r = inst.groupoid.verify_centraliser_theorem(&u, ring, false);
                    let witness = r.as_ref().ok().and_then(|r| r.witness.clone());
                    t.check_result(label, r.map(|r| r.holds && r.lhs_is_subalgebra), || format!("{witness:?}"));
                }
            }
            t
        })
        .collect();
    merged(tallies).finish(1, "centraliser of A(U) is A(Iso) + A(complement)")
}

fn subset_names<'a>(g: &'a FiniteGroupoid, members: impl IntoIterator<Item = &'a usize>) -> Vec<&'a str> {
    members.into_iter().map(|&u| g.name(u)).collect()
}

/// Criterion 2: `U` is the whole unit space, so the centraliser is `A(Iso)`.
pub fn unit_space_suite(_opts: &SuiteOptions) -> CriterionReport {
    let family = families::theorem_family();
    let tallies = family
        .par_iter()
        .map(|inst| {
            let mut t = Tally::default();
            let g = &inst.groupoid;
            for ring in RINGS {
                let r = (|| {
                    let units: Vec<_> = g.units().iter().map(|&u| g.indicator(ring, u)).collect();
                    Ok(g.centraliser_of_span(ring, &units)? == g.iso_span(ring)?)
                })();
                t.check_result(format!("{} over {ring}", inst.name), r, || "C(A(units)) differs from A(Iso)".into());
            }
            t
        })
        .collect();
    merged(tallies).finish(2, "centraliser of the unit-space algebra is A(Iso)")
}

/// Criterion 3: `A(Iso)` is maximal commutative when isotropy is abelian, and
/// the check refuses a non-commutative input.
pub fn maximal_commutative_suite(_opts: &SuiteOptions) -> CriterionReport {
    let mut family = families::theorem_family();
    family.push(Instance { name: "S3".into(), groupoid: families::symmetric_group() });
    let tallies = family
        .par_iter()
        .map(|inst| {
            let mut t = Tally::default();
            let g = &inst.groupoid;
            let abelian = g.check_iso_abelian();
            t.count(if abelian { "abelian" } else { "non_abelian" });
            for ring in RINGS {
                let iso: Vec<AlgebraElement> = g.isotropy().into_iter().map(|h| g.indicator(ring, h)).collect();
                let label = format!("{} over {ring}", inst.name);
                match (abelian, g.is_maximal_commutative(ring, &iso)) {
                    (true, r) => t.check_result(label, r, || "A(Iso) is not its own centraliser".into()),
                    (false, Err(Error::InputNotCommutative(..))) => {
                        t.count("refused");
                        t.check(true, String::new);
                    }
                    (false, other) => t.check(false, || format!("{label}: expected a refusal, got {other:?}")),
                }
            }
            t
        })
        .collect();
    let mut t = merged(tallies);
    let refused = t.stats.get("refused").copied().unwrap_or(0) > 0;
    t.check(refused, || "no instance with non-abelian isotropy was refused".into());
    t.finish(3, "A(Iso) is maximal commutative exactly when isotropy is abelian")
}

/// Criterion 4: commuting with the diagonal agrees with core membership.
pub fn diagonal_centraliser_suite(opts: &SuiteOptions) -> CriterionReport {
    let per = sizes::CENTRALISER_ELEMENTS * opts.profile.scale();
    let jobs: Vec<_> = sample_graphs(&LPA_GRAPHS)
        .into_iter()
        .flat_map(|(n, g)| RINGS.map(|r| (n, g.clone(), r)))
        .enumerate()
        .collect();
    let tallies = jobs
        .par_iter()
        .map(|(job, (name, graph, ring))| {
            let mut t = Tally::default();
            let l = opts.lpa(graph, *ring);
            let mut rng = opts.rng(4, *job as u64);
            // the diagonal spanning set relies on Σ ee* = v at regular vertices
            for v in graph.regular_vertices() {
                let sum = graph.out_edges(v).iter().fold(l.zero(), |acc, &e| {
                    let p = l.mul(&l.edge(e), &l.ghost(e)).expect("same algebra");
                    l.add(&acc, &p).expect("same algebra")
                });
                t.count("relations");
                t.check(sum == l.vertex(v), || {
                    format!("{name} over {ring}: sum of ee* at {} is {sum}", graph.vertex_name(v))
                });
            }
            let basis = l.normal_basis(3);
            let core: Vec<LpaElement> = l.core_generators(3).into_iter().filter(|x| x.degree() <= 3).collect();
            for i in 0..per {
                let nterms = rng.gen_range(1..=3);
                let x = match i % 3 {
                    0 => l.random_combination(&mut rng, &basis, nterms + 1),
                    1 => l.random_span_element(&mut rng, &core, nterms),
                    _ => {
                        let c = l.random_span_element(&mut rng, &core, nterms);
                        let p = l.random_combination(&mut rng, &basis, 1);
                        l.add(&c, &p).expect("same algebra")
                    }
                };
                let r = l.centraliser_of_diagonal_check(&x);
                t.count("elements");
                if let Ok(r) = &r {
                    if r.commutes {
                        t.count("commuting");
                    }
                    if r.in_core {
                        t.count("in_core");
                    }
                }
                t.check_result(format!("{name} over {ring}: x = {x}"), r.map(|r| r.agree), || "disagreement".into());
            }
            t
        })
        .collect();
    merged(tallies).finish(4, "commuting with the diagonal is membership in the core")
}

/// All graphs on 1 to 3 vertices with at most 3 edges, as edge multisets.
pub fn small_graphs() -> Vec<Graph> {
    let mut out = Vec::new();
    for n in 1..=3usize {
        let vertices: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|s| (0..n).map(move |d| (s, d))).collect();
        let mut current = Vec::new();
        edge_multisets(&pairs, 0, 3, &mut current, &mut |edges| {
            let named: Vec<(String, String, String)> = edges
                .iter()
                .enumerate()
                .map(|(i, &(s, d))| (format!("e{}", i + 1), vertices[s].clone(), vertices[d].clone()))
                .collect();
            out.push(Graph::new(&vertices, &named).expect("well formed"));
        });
    }
    out
}

type Pair = (usize, usize);

fn edge_multisets(
    pairs: &[(usize, usize)],
    from: usize,
    budget: usize,
    current: &mut Vec<(usize, usize)>,
    emit: &mut dyn FnMut(&[Pair]),
) {
    emit(current);
    if budget == 0 {
        return;
    }
    for i in from..pairs.len() {
        current.push(pairs[i]);
        edge_multisets(pairs, i, budget - 1, current, emit);
        current.pop();
    }
}

/// `cᵏ` computed by repeated multiplication, with `c⁻ᵏ = (c*)ᵏ`.
fn loop_power(l: &Lpa, k: i64) -> LpaElement {
    let step = if k >= 0 { l.edge(0) } else { l.ghost(0) };
    (0..k.unsigned_abs()).fold(l.vertex(0), |acc, _| l.mul(&acc, &step).expect("same algebra"))
}

/// Criterion 5: commutative path algebras among small graphs, and the
/// Laurent relations of the loop.
pub fn commutativity_suite(opts: &SuiteOptions) -> CriterionReport {
    let graphs = small_graphs();
    let tallies: Vec<Tally> = graphs
        .par_iter()
        .map(|g| {
            let mut t = Tally::default();
            let r = opts.lpa(g, RingSpec::Rationals).is_commutative();
            let connected = g.components().len() == 1;
            let single = g.vertex_count() == 1 && (g.edge_count() == 0 || g.edge_count() == 1);
            let label = || format!("{:?}", g.to_file());
            t.count("graphs");
            if r.commutative {
                t.count("commutative");
            }
            t.check(r.agree, || format!("{}: generator check says {}", label(), r.commutative));
            if connected {
                t.count("connected");
                t.check(r.commutative == single, || {
                    format!("{}: connected, commutative = {}, single vertex or loop = {single}", label(), r.commutative)
                });
            }
            t
        })
        .collect();
    let mut t = merged(tallies);
    let loop_graph = sample_graph("loop").expect("known sample");
    for ring in RINGS {
        let l = opts.lpa(&loop_graph, ring);
        let v = l.vertex(0);
        let (c, cs) = (l.edge(0), l.ghost(0));
        t.check(l.mul(&c, &cs).ok() == Some(v.clone()), || format!("c c* != v over {ring}"));
        t.check(l.mul(&cs, &c).ok() == Some(v.clone()), || format!("c* c != v over {ring}"));
        let n = sizes::LAURENT_RANGE;
        let powers: BTreeMap<i64, LpaElement> = (-2 * n..=2 * n).map(|k| (k, loop_power(&l, k))).collect();
        for m in -n..=n {
            for k in -n..=n {
                let prod = l.mul(&powers[&m], &powers[&k]).expect("same algebra");
                t.check(prod == powers[&(m + k)], || format!("c^{m} c^{k} = {prod} over {ring}"));
            }
        }
    }
    t.finish(5, "commutative exactly for a single vertex or a single loop")
}

/// Criterion 6: the bridge map is an injective homomorphism on acyclic graphs.
pub fn bridge_suite(opts: &SuiteOptions) -> CriterionReport {
    let samples = sizes::BRIDGE_PAIRS * opts.profile.scale();
    let jobs: Vec<_> = BRIDGE_GRAPHS
        .iter()
        .flat_map(|&(n, rank)| RINGS.map(|r| (n, rank, r)))
        .enumerate()
        .collect();
    let tallies = jobs
        .par_iter()
        .map(|(job, (name, rank, ring))| {
            let mut t = Tally::default();
            let graph = sample_graph(name).expect("known sample");
            let l = opts.lpa(&graph, *ring);
            let seed = opts.rng(6, *job as u64).gen();
            let r = bridge::verify_pi_iso_in(&l, samples, seed);
            let w = format!("{r:?}");
            t.check_result(
                format!("{name} over {ring}"),
                r.map(|r| r.passes() && r.injectivity_rank == *rank && r.groupoid_size == *rank),
                || w,
            );
            t.stats.insert("pairs", samples);
            t
        })
        .collect();
    let mut t: Tally = merged(tallies);
    t.stats.insert("pairs", samples * jobs.len());
    t.finish(6, "the map to the boundary-path groupoid algebra is an isomorphism")
}

/// Criterion 7: normal forms do not depend on the rewrite order, and
/// multiplication is associative.
pub fn rewriting_suite(opts: &SuiteOptions) -> CriterionReport {
    let scale = opts.profile.scale();
    let graphs = sample_graphs(&LPA_GRAPHS);
    let tallies = graphs
        .par_iter()
        .enumerate()
        .map(|(gi, (name, graph))| {
            let mut t = Tally::default();
            let mut rng = opts.rng(7, gi as u64);
            for i in 0..sizes::REWRITE_INPUTS * scale {
                let l = opts.lpa(graph, RINGS[i % 2]);
                let raw = l.random_raw_terms(&mut rng, 3, sizes::REWRITE_TERMS);
                *t.stats.entry("raw_terms").or_default() += raw.len();
                let reference = l.normalize(raw.clone());
                let irreducible = reference.terms().keys().all(|m| !l.is_reducible(m));
                t.check(irreducible, || format!("{name}: normal form {reference} has a redex"));
                for _ in 0..sizes::REWRITE_ORDERS {
                    let other = l.normalize_randomized(raw.clone(), &mut rng);
                    t.check(other == reference, || format!("{name}: {reference} vs {other}"));
                }
            }
            for i in 0..sizes::ASSOCIATIVITY_TRIPLES * scale {
                let l = opts.lpa(graph, RINGS[i % 2]);
                let basis = l.normal_basis(2);
                let [x, y, z] = [(); 3].map(|_| l.random_combination(&mut rng, &basis, 3));
                let left = l.mul(&l.mul(&x, &y).expect("same algebra"), &z).expect("same algebra");
                let right = l.mul(&x, &l.mul(&y, &z).expect("same algebra")).expect("same algebra");
                t.count("triples");
                t.check(left == right, || format!("{name}: ({x})({y})({z}): {left} vs {right}"));
            }
            t
        })
        .collect();
    merged(tallies).finish(7, "rewriting is confluent and multiplication associative")
}

fn random_generator<R: Rng>(rng: &mut R, g: &FiniteGroupoid, ring: RingSpec) -> AlgebraElement {
    let mut x = AlgebraElement::zero(ring, g.len());
    if rng.gen_ratio(1, 8) {
        return x;
    }
    let pool: Vec<usize> = if rng.gen_ratio(1, 3) { g.isotropy() } else { (0..g.len()).collect() };
    for _ in 0..rng.gen_range(1..=3) {
        let h = *pool.choose(rng).expect("groupoids in the family are nonempty");
        let c = ring.from_i64(rng.gen_range(-2..=2));
        x = x.add(&g.indicator(ring, h).scale(&c).expect("same ring")).expect("same ring");
    }
    x
}

/// Criterion 8: a quotient map is injective iff it is injective on `A(Iso)`.
pub fn uniqueness_suite(opts: &SuiteOptions) -> CriterionReport {
    let family = families::theorem_family();
    let n = sizes::IDEAL_CHOICES * opts.profile.scale();
    let tallies = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut t = Tally::default();
            let mut rng = opts.rng(8, i as u64);
            let inst = family.choose(&mut rng).expect("family is nonempty");
            let ring = RINGS[i % 2];
            let gens: Vec<_> = (0..rng.gen_range(1..=2)).map(|_| random_generator(&mut rng, &inst.groupoid, ring)).collect();
            let r = inst.groupoid.core_injectivity_check(ring, &gens);
            if let Ok(r) = &r {
                t.count(if r.injective { "zero_ideal" } else { "nonzero_ideal" });
            }
            t.check_result(format!("{} over {ring}, choice {i}", inst.name), r.map(|r| r.agree), || "disagreement".into());
            t
        })
        .collect();
    merged(tallies).finish(8, "ideal is zero iff it meets A(Iso) trivially")
}

pub type Suite = fn(&SuiteOptions) -> CriterionReport;

/// The suites in criterion order.
pub const SUITES: [Suite; 8] = [
    theorem_suite,
    unit_space_suite,
    maximal_commutative_suite,
    diagonal_centraliser_suite,
    commutativity_suite,
    bridge_suite,
    rewriting_suite,
    uniqueness_suite,
];

pub fn run(opts: &SuiteOptions) -> SuiteReport {
    let criteria: Vec<CriterionReport> = SUITES.iter().map(|s| s(opts)).collect();
    SuiteReport {
        seed: opts.seed,
        profile: opts.profile,
        tamper: opts.tamper,
        passed: criteria.iter().all(|c| c.passed),
        criteria,
    }
}
