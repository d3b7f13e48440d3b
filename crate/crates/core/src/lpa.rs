//! Leavitt path algebras of finite graphs in rewriting normal form.
//!
//! An element is a finite combination of monomials `αβ*` with
//! `r(α) = r(β)`. Products follow CK1 (`e*f = δ_{e,f} r(e)`), and CK2
//! (`v = Σ_{s(e)=v} ee*`) is oriented as a rewrite: for every regular vertex
//! a special edge `γ_v` is fixed, and
//!
//! ```text
//! (α'γ_v)(β'γ_v)*  →  α'β'* − Σ_{f ∈ s⁻¹(v), f ≠ γ_v} (α'f)(β'f)*
//! ```
//!
//! A monomial has at most one redex (its final edge pair) and every rewrite
//! shortens it, so normalization terminates. The monomials with no redex
//! form a basis, which makes the normal form unique.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, Name, Path};
use crate::linalg::Subspace;
use crate::parse::{parse_element, Atom, ParseError, Spanned};
use crate::scalars::{RingSpec, Scalar};

/// The monomial `αβ*`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    alpha: Path,
    beta: Path,
}

impl Monomial {
    pub fn new(alpha: Path, beta: Path) -> Result<Self> {
        if alpha.range() != beta.range() {
            return Err(Error::MalformedMonomial("the two paths of a monomial must end at the same vertex".into()));
        }
        Ok(Monomial { alpha, beta })
    }

    pub fn vertex(v: usize) -> Self {
        Monomial { alpha: Path::trivial(v), beta: Path::trivial(v) }
    }

    pub fn alpha(&self) -> &Path {
        &self.alpha
    }

    pub fn beta(&self) -> &Path {
        &self.beta
    }

    pub fn degree(&self) -> usize {
        self.alpha.len() + self.beta.len()
    }

    /// `|α| − |β|`
    pub fn weight(&self) -> i64 {
        self.alpha.len() as i64 - self.beta.len() as i64
    }

    pub fn range(&self) -> usize {
        self.alpha.range()
    }

    /// `(αβ*)* = βα*`
    pub fn star(&self) -> Monomial {
        Monomial { alpha: self.beta.clone(), beta: self.alpha.clone() }
    }

    /// `(αβ*)(γδ*)` before normalization, or `None` when it vanishes by CK1.
    pub fn product(&self, other: &Monomial) -> Option<Monomial> {
        if let Some(rest) = other.alpha.strip_prefix(&self.beta) {
            let alpha = self.alpha.concat(&rest)?;
            return Some(Monomial { alpha, beta: other.beta.clone() });
        }
        if let Some(rest) = self.beta.strip_prefix(&other.alpha) {
            let beta = other.beta.concat(&rest)?;
            return Some(Monomial { alpha: self.alpha.clone(), beta });
        }
        None
    }

    pub fn display<'a>(&'a self, graph: &'a Graph) -> impl fmt::Display + 'a {
        DisplayMonomial(graph, self)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.alpha.cmp(&other.alpha))
            .then_with(|| self.beta.cmp(&other.beta))
    }
}

struct DisplayMonomial<'a>(&'a Graph, &'a Monomial);

impl fmt::Display for DisplayMonomial<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{};{}]", self.0.path_name(&self.1.alpha), self.0.path_name(&self.1.beta))
    }
}

/// The edge chosen at each regular vertex to orient CK2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialEdgeChoice {
    chosen: Vec<Option<usize>>,
}

impl SpecialEdgeChoice {
    /// Lexicographically least outgoing edge at every regular vertex.
    pub fn least(graph: &Graph) -> Self {
        let chosen = (0..graph.vertex_count()).map(|v| graph.out_edges(v).first().copied()).collect();
        SpecialEdgeChoice { chosen }
    }

    /// The default choice with the given edges substituted.
    pub fn with_edges(graph: &Graph, edges: &[usize]) -> Result<Self> {
        let mut choice = SpecialEdgeChoice::least(graph);
        for &e in edges {
            if e >= graph.edge_count() {
                return Err(Error::MalformedGraph(format!("no edge with index {e}")));
            }
            choice.chosen[graph.edge(e).src] = Some(e);
        }
        Ok(choice)
    }

    pub fn get(&self, v: usize) -> Option<usize> {
        self.chosen[v]
    }

    pub fn is_special(&self, graph: &Graph, e: usize) -> bool {
        self.chosen[graph.edge(e).src] == Some(e)
    }
}

/// Which CK2 rewrite to apply. `DropCorrection` omits the `Σ_{f ≠ γ_v}`
/// terms; it is deliberately unsound and exists so that the property suite
/// can be shown to catch a broken rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RewriteRule {
    #[default]
    CuntzKrieger,
    DropCorrection,
}

/// An element of `L_R(E)` in normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpaElement {
    terms: BTreeMap<Monomial, Scalar>,
    ring: RingSpec,
    graph: Arc<Graph>,
}

impl LpaElement {
    pub fn terms(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest monomial degree; 0 for the zero element.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&Scalar> {
        self.terms.get(m)
    }
}

impl fmt::Display for LpaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let (negative, magnitude) = if c.is_negative_literal() { (true, -c) } else { (false, c.clone()) };
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if !magnitude.is_one() {
                write!(f, "{magnitude}*")?;
            }
            write!(f, "{}", m.display(&self.graph))?;
        }
        Ok(())
    }
}

impl Serialize for LpaElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `L_R(E)` for a fixed graph, ring and CK2 orientation.
#[derive(Debug, Clone)]
pub struct Lpa {
    graph: Arc<Graph>,
    ring: RingSpec,
    special: SpecialEdgeChoice,
    rule: RewriteRule,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpanMembership {
    pub member: bool,
    /// Coefficients on the generators when `member` holds.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<Scalar>>,
    /// Rejected by the weight filter without solving.
    pub filtered: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalCommutation {
    pub commutes: bool,
    pub bound: usize,
    pub witness: Option<Path>,
    pub commutator: Option<LpaElement>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CentraliserReport {
    pub commutes: bool,
    pub in_core: bool,
    pub agree: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub commutator: Option<String>,
    pub commutation_bound: usize,
    pub core_bound: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CentralReport {
    pub central: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommutativityReport {
    pub commutative: bool,
    /// Every component is an isolated vertex or a vertex with one loop.
    pub structural: bool,
    pub agree: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<(String, String)>,
}

/// A named algebra generator: a vertex `v`, an edge `e` or a ghost edge `e*`.
#[derive(Debug, Clone)]
pub struct Generator {
    pub name: String,
    pub element: LpaElement,
}

impl Lpa {
    pub fn new(graph: impl Into<Arc<Graph>>, ring: RingSpec) -> Self {
        let graph = graph.into();
        let special = SpecialEdgeChoice::least(&graph);
        Lpa { graph, ring, special, rule: RewriteRule::default() }
    }

    pub fn with_special(mut self, special: SpecialEdgeChoice) -> Self {
        self.special = special;
        self
    }

    pub fn with_rule(mut self, rule: RewriteRule) -> Self {
        self.rule = rule;
        self
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn shared_graph(&self) -> Arc<Graph> {
        self.graph.clone()
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn special(&self) -> &SpecialEdgeChoice {
        &self.special
    }

    fn element(&self, terms: BTreeMap<Monomial, Scalar>) -> LpaElement {
        LpaElement { terms, ring: self.ring, graph: self.graph.clone() }
    }

    pub fn zero(&self) -> LpaElement {
        self.element(BTreeMap::new())
    }

    /// `Σ_v v`, the identity of a finite graph's algebra.
    pub fn identity(&self) -> LpaElement {
        self.element((0..self.graph.vertex_count()).map(|v| (Monomial::vertex(v), self.ring.one())).collect())
    }

    pub fn vertex(&self, v: usize) -> LpaElement {
        self.monomial(Monomial::vertex(v))
    }

    pub fn edge(&self, e: usize) -> LpaElement {
        let p = self.graph.edge_path(e);
        let r = Path::trivial(p.range());
        self.monomial(Monomial { alpha: p, beta: r })
    }

    pub fn ghost(&self, e: usize) -> LpaElement {
        let p = self.graph.edge_path(e);
        let r = Path::trivial(p.range());
        self.monomial(Monomial { alpha: r, beta: p })
    }

    /// The normalized element `1·m`.
    pub fn monomial(&self, m: Monomial) -> LpaElement {
        self.normalize(vec![(self.ring.one(), m)])
    }

    /// The vertices, edges and ghost edges, which generate the algebra.
    pub fn generators(&self) -> Vec<Generator> {
        let g = &self.graph;
        let mut out: Vec<Generator> = (0..g.vertex_count())
            .map(|v| Generator { name: g.vertex_name(v).to_string(), element: self.vertex(v) })
            .collect();
        out.extend((0..g.edge_count()).map(|e| Generator { name: g.edge(e).name.clone(), element: self.edge(e) }));
        out.extend((0..g.edge_count()).map(|e| Generator { name: format!("{}*", g.edge(e).name), element: self.ghost(e) }));
        out
    }

    /// Whether `m` has a CK2 redex: both paths end in the same special edge.
    pub fn is_reducible(&self, m: &Monomial) -> bool {
        match (m.alpha.last_edge(), m.beta.last_edge()) {
            (Some(a), Some(b)) => a == b && self.special.is_special(&self.graph, a),
            _ => false,
        }
    }

    /// One rewrite step on `c·m`, which must be reducible.
    fn rewrite(&self, c: &Scalar, m: &Monomial) -> Vec<(Scalar, Monomial)> {
        let (alpha, e) = m.alpha.split_last(&self.graph).expect("reducible monomial has an edge");
        let (beta, _) = m.beta.split_last(&self.graph).expect("reducible monomial has an edge");
        let v = self.graph.edge(e).src;
        let mut out = vec![(c.clone(), Monomial { alpha: alpha.clone(), beta: beta.clone() })];
        if self.rule == RewriteRule::CuntzKrieger {
            for &f in self.graph.out_edges(v).iter().filter(|&&f| f != e) {
                let fp = self.graph.edge_path(f);
                let a = alpha.concat(&fp).expect("f leaves r(α')");
                let b = beta.concat(&fp).expect("f leaves r(β')");
                out.push((-c, Monomial { alpha: a, beta: b }));
            }
        }
        out
    }

    /// Rewrites a raw combination of monomials to normal form.
    pub fn normalize(&self, raw: Vec<(Scalar, Monomial)>) -> LpaElement {
        let mut done: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        let mut stack = raw;
        while let Some((c, m)) = stack.pop() {
            if c.is_zero() {
                continue;
            }
            if self.is_reducible(&m) {
                stack.extend(self.rewrite(&c, &m));
            } else {
                accumulate(&mut done, m, c);
            }
        }
        self.element(done)
    }

    /// Same result as [`normalize`](Self::normalize), but redexes are picked
    /// in random order and like terms are merged at random moments.
    pub fn normalize_randomized<R: Rng + ?Sized>(&self, raw: Vec<(Scalar, Monomial)>, rng: &mut R) -> LpaElement {
        let mut pending = raw;
        let mut done: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        while !pending.is_empty() {
            if rng.gen_ratio(1, 4) {
                let mut merged: BTreeMap<Monomial, Scalar> = BTreeMap::new();
                for (c, m) in pending.drain(..) {
                    accumulate(&mut merged, m, c);
                }
                pending = merged.into_iter().map(|(m, c)| (c, m)).collect();
                pending.shuffle(rng);
                continue;
            }
            let i = rng.gen_range(0..pending.len());
            let (c, m) = pending.swap_remove(i);
            if c.is_zero() {
                continue;
            }
            if self.is_reducible(&m) {
                pending.extend(self.rewrite(&c, &m));
            } else {
                accumulate(&mut done, m, c);
            }
        }
        self.element(done)
    }

    fn check(&self, x: &LpaElement) -> Result<()> {
        if x.ring != self.ring {
            return Err(Error::RingMismatch(self.ring.to_string(), x.ring.to_string()));
        }
        if !Arc::ptr_eq(&x.graph, &self.graph) && *x.graph != *self.graph {
            return Err(Error::GraphMismatch);
        }
        Ok(())
    }

    pub fn multiply_monomials(&self, m1: &Monomial, m2: &Monomial) -> LpaElement {
        match m1.product(m2) {
            Some(m) => self.monomial(m),
            None => self.zero(),
        }
    }

    pub fn mul(&self, x: &LpaElement, y: &LpaElement) -> Result<LpaElement> {
        self.check(x)?;
        self.check(y)?;
        let mut raw = Vec::with_capacity(x.len() * y.len());
        for (m1, c1) in &x.terms {
            for (m2, c2) in &y.terms {
                if let Some(m) = m1.product(m2) {
                    raw.push((c1 * c2, m));
                }
            }
        }
        Ok(self.normalize(raw))
    }

    pub fn add(&self, x: &LpaElement, y: &LpaElement) -> Result<LpaElement> {
        self.check(x)?;
        self.check(y)?;
        let mut terms = x.terms.clone();
        for (m, c) in &y.terms {
            accumulate(&mut terms, m.clone(), c.clone());
        }
        Ok(self.element(terms))
    }

    pub fn scale(&self, x: &LpaElement, r: &Scalar) -> Result<LpaElement> {
        self.check(x)?;
        let mut terms = BTreeMap::new();
        for (m, c) in &x.terms {
            let p = c.checked_mul(r)?;
            if !p.is_zero() {
                terms.insert(m.clone(), p);
            }
        }
        Ok(self.element(terms))
    }

    pub fn sub(&self, x: &LpaElement, y: &LpaElement) -> Result<LpaElement> {
        let neg = self.scale(y, &-self.ring.one())?;
        self.add(x, &neg)
    }

    pub fn commutator(&self, x: &LpaElement, y: &LpaElement) -> Result<LpaElement> {
        self.sub(&self.mul(x, y)?, &self.mul(y, x)?)
    }

    /// Parses an element expression such as `2*[c.c;v] - 1/3*[v;c]`.
    pub fn parse(&self, input: &str) -> Result<LpaElement> {
        let mut raw = Vec::new();
        for term in parse_element(input)? {
            let mut c = match &term.scalar {
                Some(s) => self
                    .ring
                    .parse_scalar(&s.value)
                    .map_err(|e| ParseError::new(s.column, e.to_string()))?,
                None => self.ring.one(),
            };
            if term.negative {
                c = -c;
            }
            match term.atom {
                Atom::Identity => {
                    raw.extend((0..self.graph.vertex_count()).map(|v| (c.clone(), Monomial::vertex(v))));
                }
                Atom::Monomial { alpha, beta } => {
                    let a = self.resolve_path(&alpha)?;
                    let b = self.resolve_path(&beta)?;
                    if a.range() != b.range() {
                        return Err(ParseError::new(
                            beta[0].column,
                            format!(
                                "paths end at different vertices ({} and {})",
                                self.graph.vertex_name(a.range()),
                                self.graph.vertex_name(b.range())
                            ),
                        )
                        .into());
                    }
                    raw.push((c, Monomial { alpha: a, beta: b }));
                }
                Atom::Name(n) => {
                    return Err(ParseError::new(
                        n.column,
                        format!("a monomial is written [alpha;beta], e.g. [{0};…], not a bare name `{0}`", n.value),
                    )
                    .into())
                }
            }
        }
        Ok(self.normalize(raw))
    }

    fn resolve_path(&self, names: &[Spanned<String>]) -> std::result::Result<Path, ParseError> {
        let unknown = |n: &Spanned<String>| ParseError::new(n.column, format!("unknown vertex or edge `{}`", n.value));
        if let [single] = names {
            match self.graph.lookup(&single.value) {
                Some(Name::Vertex(v)) => return Ok(Path::trivial(v)),
                Some(Name::Edge(e)) => return Ok(self.graph.edge_path(e)),
                None => return Err(unknown(single)),
            }
        }
        let mut edges = Vec::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            match self.graph.lookup(&n.value) {
                Some(Name::Edge(e)) => {
                    if let Some(&prev) = edges.last() {
                        if self.graph.edge(prev).dst != self.graph.edge(e).src {
                            return Err(ParseError::new(
                                n.column,
                                format!("edge `{}` does not start where `{}` ends", n.value, names[i - 1].value),
                            ));
                        }
                    }
                    edges.push(e);
                }
                Some(Name::Vertex(_)) => {
                    return Err(ParseError::new(n.column, format!("vertex `{}` inside a path of edges", n.value)))
                }
                None => return Err(unknown(n)),
            }
        }
        Ok(self.graph.path(edges).expect("edges checked to compose"))
    }

    /// Monomials `αβ*` of degree at most `max_degree` with no redex.
    pub fn normal_basis(&self, max_degree: usize) -> Vec<Monomial> {
        let paths = self.graph.enumerate_paths(max_degree);
        let mut out = Vec::new();
        for a in &paths {
            for b in paths.iter().filter(|b| b.range() == a.range() && a.len() + b.len() <= max_degree) {
                let m = Monomial { alpha: a.clone(), beta: b.clone() };
                if !self.is_reducible(&m) {
                    out.push(m);
                }
            }
        }
        out.sort();
        out
    }

    fn ends_in_special(&self, a: &Path) -> bool {
        a.last_edge().is_some_and(|e| self.special.is_special(&self.graph, e))
    }

    /// Paths `a` with `|a| ≤ max_len` that are trivial or end in a
    /// non-special edge; their projections `aa*` are normal monomials and
    /// span the diagonal (`γγ* = s(γ) − Σ_{f≠γ} ff*` covers the rest).
    pub fn diagonal_paths(&self, max_len: usize) -> Vec<Path> {
        self.graph.enumerate_paths(max_len).into_iter().filter(|a| !self.ends_in_special(a)).collect()
    }

    /// Spanning set of the diagonal up to path length `max_len`.
    pub fn diagonal_generators(&self, max_len: usize) -> Vec<LpaElement> {
        self.diagonal_paths(max_len)
            .into_iter()
            .map(|a| self.monomial(Monomial { alpha: a.clone(), beta: a }))
            .collect()
    }

    /// `a bᵏ a*` for paths `a`, cycles without exit `b` based at `r(a)` and
    /// integers `k` with `|a| + |k||b| ≤ max_len`, where `b⁻ᵏ` means `(b*)ᵏ`.
    /// `k = 0` contributes [`diagonal_generators`](Self::diagonal_generators).
    pub fn core_generators(&self, max_len: usize) -> Vec<LpaElement> {
        let mut out = self.diagonal_generators(max_len);
        let paths = self.graph.enumerate_paths(max_len);
        for b in self.graph.cycles_without_exit() {
            for a in paths.iter().filter(|a| a.range() == b.base()) {
                for k in 1.. {
                    if a.len() + k * b.len() > max_len {
                        break;
                    }
                    let ab = a.concat(&b.path().power(k)).expect("b is based at r(a)");
                    for m in [Monomial { alpha: ab.clone(), beta: a.clone() }, Monomial { alpha: a.clone(), beta: ab }] {
                        let x = self.monomial(m);
                        if !out.contains(&x) {
                            out.push(x);
                        }
                    }
                }
            }
        }
        out
    }

    /// Solves `x = Σ cᵢ gensᵢ` over the normal-form monomial basis.
    pub fn is_in_span(&self, x: &LpaElement, gens: &[LpaElement]) -> Result<SpanMembership> {
        self.ring.require_field()?;
        self.check(x)?;
        let mut index: BTreeMap<&Monomial, usize> = BTreeMap::new();
        for e in gens.iter().chain(std::iter::once(x)) {
            self.check(e)?;
            for m in e.terms.keys() {
                let next = index.len();
                index.entry(m).or_insert(next);
            }
        }
        let ncols = gens.len() + 1;
        let mut rows = vec![vec![self.ring.zero(); ncols]; index.len()];
        for (j, e) in gens.iter().chain(std::iter::once(x)).enumerate() {
            for (m, c) in &e.terms {
                rows[index[m]][j] = c.clone();
            }
        }
        let kernel = Subspace::kernel(self.ring, ncols, rows)?;
        let last = ncols - 1;
        let solution = kernel.basis().iter().find(|v| !v[last].is_zero()).map(|v| {
            let scale = -v[last].inverse().expect("nonzero over a field");
            v[..last].iter().map(|c| c * &scale).collect::<Vec<_>>()
        });
        Ok(SpanMembership { member: solution.is_some(), coefficients: solution, filtered: false })
    }

    /// Cheap necessary condition for core membership: a monomial of nonzero
    /// weight `w` must end at the base of a cycle without exit whose length
    /// divides `w`.
    pub fn passes_weight_filter(&self, x: &LpaElement) -> bool {
        let cycles = self.graph.cycles_without_exit();
        x.terms.keys().all(|m| {
            let w = m.weight().unsigned_abs() as usize;
            w == 0 || cycles.iter().any(|c| c.base() == m.range() && w.is_multiple_of(c.len()))
        })
    }

    /// Degree bound used for core generators when testing `x`.
    pub fn core_bound(&self, x: &LpaElement) -> usize {
        x.degree() + self.graph.max_cycle_length()
    }

    /// Membership in `M_R(E)`, decided by a linear solve against
    /// `core_generators(deg(x) + longest cycle)`.
    pub fn core_membership(&self, x: &LpaElement) -> Result<SpanMembership> {
        self.ring.require_field()?;
        self.check(x)?;
        if !self.passes_weight_filter(x) {
            return Ok(SpanMembership { member: false, coefficients: None, filtered: true });
        }
        let gens = self.core_generators(self.core_bound(x));
        self.is_in_span(x, &gens)
    }

    /// Commutation bound `deg(x) + |E⁰| + 1` for the diagonal test.
    pub fn commutation_bound(&self, x: &LpaElement) -> usize {
        x.degree() + self.graph.vertex_count() + 1
    }

    /// Checks `[x, aa*] = 0` over the diagonal spanning set with `|a| ≤ bound`
    /// and reports the first failing path.
    pub fn commutes_with_diagonal(&self, x: &LpaElement, bound: usize) -> Result<DiagonalCommutation> {
        self.check(x)?;
        for a in self.diagonal_paths(bound) {
            let p = self.monomial(Monomial { alpha: a.clone(), beta: a.clone() });
            let c = self.commutator(x, &p)?;
            if !c.is_zero() {
                return Ok(DiagonalCommutation { commutes: false, bound, witness: Some(a), commutator: Some(c) });
            }
        }
        Ok(DiagonalCommutation { commutes: true, bound, witness: None, commutator: None })
    }

    /// Compares "x commutes with the diagonal" with "x lies in the core".
    pub fn centraliser_of_diagonal_check(&self, x: &LpaElement) -> Result<CentraliserReport> {
        self.ring.require_field()?;
        let bound = self.commutation_bound(x);
        let comm = self.commutes_with_diagonal(x, bound)?;
        let core = self.core_membership(x)?;
        Ok(CentraliserReport {
            commutes: comm.commutes,
            in_core: core.member,
            agree: comm.commutes == core.member,
            witness: comm.witness.as_ref().map(|p| self.graph.path_name(p)),
            commutator: comm.commutator.as_ref().map(|c| c.to_string()),
            commutation_bound: bound,
            core_bound: self.core_bound(x),
        })
    }

    /// Exact centrality test against the finite generating set.
    pub fn is_central(&self, x: &LpaElement) -> Result<CentralReport> {
        self.check(x)?;
        for g in self.generators() {
            if !self.commutator(x, &g.element)?.is_zero() {
                return Ok(CentralReport { central: false, witness: Some(g.name) });
            }
        }
        Ok(CentralReport { central: true, witness: None })
    }

    /// Commutativity of the whole algebra, decided on generator pairs and
    /// compared with the structural description.
    pub fn is_commutative(&self) -> CommutativityReport {
        let structural = structurally_commutative(&self.graph);
        let gens = self.generators();
        let mut witness = None;
        'outer: for (i, x) in gens.iter().enumerate() {
            for y in &gens[i + 1..] {
                let c = self.commutator(&x.element, &y.element).expect("same algebra");
                if !c.is_zero() {
                    witness = Some((x.name.clone(), y.name.clone()));
                    break 'outer;
                }
            }
        }
        let commutative = witness.is_none();
        CommutativityReport { commutative, structural, agree: commutative == structural, witness }
    }

    /// Random combination of `nterms` monomials drawn from `basis`, with
    /// nonzero coefficients in `-3..=3`.
    pub fn random_combination<R: Rng + ?Sized>(&self, rng: &mut R, basis: &[Monomial], nterms: usize) -> LpaElement {
        let mut raw = Vec::with_capacity(nterms);
        for _ in 0..nterms {
            if let Some(m) = basis.choose(rng) {
                raw.push((random_coefficient(self.ring, rng), m.clone()));
            }
        }
        self.normalize(raw)
    }

    /// Random linear combination of the given elements.
    pub fn random_span_element<R: Rng + ?Sized>(&self, rng: &mut R, gens: &[LpaElement], nterms: usize) -> LpaElement {
        let mut x = self.zero();
        for _ in 0..nterms {
            if let Some(g) = gens.choose(rng) {
                let c = random_coefficient(self.ring, rng);
                x = self.add(&x, &self.scale(g, &c).expect("same ring")).expect("same algebra");
            }
        }
        x
    }

    /// Random unnormalized terms: arbitrary `αβ*` with `|α|, |β| ≤ max_len`.
    pub fn random_raw_terms<R: Rng + ?Sized>(&self, rng: &mut R, max_len: usize, nterms: usize) -> Vec<(Scalar, Monomial)> {
        let paths = self.graph.enumerate_paths(max_len);
        let mut out = Vec::with_capacity(nterms);
        while out.len() < nterms {
            let a = paths.choose(rng).expect("every graph here has a vertex");
            let matching: Vec<&Path> = paths.iter().filter(|b| b.range() == a.range()).collect();
            let b = matching.choose(rng).expect("a itself matches");
            out.push((random_coefficient(self.ring, rng), Monomial { alpha: a.clone(), beta: (*b).clone() }));
        }
        out
    }
}

fn random_coefficient<R: Rng + ?Sized>(ring: RingSpec, rng: &mut R) -> Scalar {
    loop {
        let n = rng.gen_range(-3i64..=3);
        let c = match ring {
            RingSpec::Rationals if rng.gen_ratio(1, 4) => ring.from_i64(n) * ring.from_i64(rng.gen_range(2..=3)).inverse().expect("nonzero"),
            _ => ring.from_i64(n),
        };
        if !c.is_zero() {
            return c;
        }
    }
}

fn accumulate(map: &mut BTreeMap<Monomial, Scalar>, m: Monomial, c: Scalar) {
    match map.entry(m) {
        std::collections::btree_map::Entry::Vacant(v) => {
            if !c.is_zero() {
                v.insert(c);
            }
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let sum = o.get() + &c;
            if sum.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

/// Every weakly connected component is a single vertex with no edge or
/// with exactly one loop.
pub fn structurally_commutative(graph: &Graph) -> bool {
    graph.components().iter().all(|comp| {
        let edges: Vec<_> = graph.edges().iter().filter(|e| comp.contains(&e.src)).collect();
        comp.len() == 1 && (edges.is_empty() || (edges.len() == 1 && edges[0].src == edges[0].dst))
    })
}

/// Commutativity of `L_ℚ(E)` (the answer does not depend on the ring).
pub fn is_commutative_lpa(graph: &Graph) -> CommutativityReport {
    Lpa::new(graph.clone(), RingSpec::Rationals).is_commutative()
}
