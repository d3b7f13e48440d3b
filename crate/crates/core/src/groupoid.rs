//! Finite discrete groupoids and their convolution algebras.
//!
//! Every subset of a finite discrete groupoid is a compact open bisection
//! union, so the Steinberg algebra is the space of all functions on the
//! morphisms with product
//!
//! ```text
//! (f1 · f2)(g) = Σ_{g = g1 g2} f1(g1) f2(g2)
//! ```
//!
//! and the isotropy interior equals the isotropy. Morphisms are indexed
//! `0..m`; units are the morphisms `u` with `s(u) = r(u) = u`. A pair
//! `(g1, g2)` is composable iff `r(g2) = s(g1)`.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Subspace;
use crate::parse::{self, Atom, ParseError};
use crate::scalars::{RingSpec, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    names: Vec<String>,
    units: Vec<usize>,
    source: Vec<usize>,
    range: Vec<usize>,
    inverse: Vec<usize>,
    /// Row-major `m × m`; entry `g1 * m + g2` is `g1 ∘ g2` when defined.
    compose: Vec<Option<usize>>,
    /// All defined products `(g1, g2, g1 ∘ g2)`, ordered by `(g1, g2)`.
    products: Vec<(usize, usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    UnitsAreFixed,
    SourceRangeAreUnits,
    ComposableExactly,
    CompositeEndpoints,
    Identity,
    Inverse,
    Associativity,
}

/// Outcome of [`FiniteGroupoid::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Validation {
    Pass,
    Fail { axiom: Axiom, witness: Vec<usize> },
}

impl Validation {
    pub fn is_pass(&self) -> bool {
        matches!(self, Validation::Pass)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axiom: Option<Axiom>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
}

/// A set of units, stored as morphism indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct UnitSubset {
    members: BTreeSet<usize>,
}

impl UnitSubset {
    pub fn empty() -> Self {
        UnitSubset::default()
    }

    pub fn members(&self) -> &BTreeSet<usize> {
        &self.members
    }

    pub fn contains(&self, u: usize) -> bool {
        self.members.contains(&u)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// A function from morphisms to scalars, i.e. `Σ r_g 1_{g}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    coeffs: Vec<Scalar>,
    ring: RingSpec,
}

impl AlgebraElement {
    pub fn zero(ring: RingSpec, m: usize) -> Self {
        AlgebraElement { coeffs: vec![ring.zero(); m], ring }
    }

    pub fn from_coeffs(ring: RingSpec, coeffs: Vec<Scalar>) -> Result<Self> {
        if let Some(bad) = coeffs.iter().find(|c| c.ring() != ring) {
            return Err(Error::RingMismatch(ring.to_string(), bad.ring().to_string()));
        }
        Ok(AlgebraElement { coeffs, ring })
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Scalar> {
        self.coeffs
    }

    pub fn coeff(&self, g: usize) -> &Scalar {
        &self.coeffs[g]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(g, _)| g)
    }

    fn check_same(&self, other: &AlgebraElement) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring.to_string(), other.ring.to_string()));
        }
        if self.coeffs.len() != other.coeffs.len() {
            return Err(Error::GroupoidMismatch { expected: self.coeffs.len(), got: other.coeffs.len() });
        }
        Ok(())
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_same(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(AlgebraElement { coeffs, ring: self.ring })
    }

    pub fn sub(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_same(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(AlgebraElement { coeffs, ring: self.ring })
    }

    pub fn scale(&self, r: &Scalar) -> Result<AlgebraElement> {
        let coeffs = self.coeffs.iter().map(|c| c.checked_mul(r)).collect::<Result<_>>()?;
        Ok(AlgebraElement { coeffs, ring: self.ring })
    }
}

impl FiniteGroupoid {
    /// Builds a groupoid from raw tables. Only structural well-formedness is
    /// checked here (index ranges, unique names, one result per composable
    /// pair); the groupoid axioms are checked by [`validate`](Self::validate).
    pub fn from_tables(
        names: Vec<String>,
        units: Vec<usize>,
        source: Vec<usize>,
        range: Vec<usize>,
        inverse: Vec<usize>,
        compositions: impl IntoIterator<Item = (usize, usize, usize)>,
    ) -> Result<Self> {
        let m = names.len();
        let malformed = |msg: String| Err(Error::MalformedTable(msg));
        if source.len() != m || range.len() != m || inverse.len() != m {
            return malformed(format!("table lengths differ from morphism count {m}"));
        }
        let mut seen = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if let Some(j) = seen.insert(n.as_str(), i) {
                return malformed(format!("duplicate morphism name `{n}` at {j} and {i}"));
            }
        }
        let out_of_range = |v: &[usize]| v.iter().copied().find(|&x| x >= m);
        for (label, table) in [("units", &units), ("source", &source), ("range", &range), ("inverse", &inverse)] {
            if let Some(bad) = out_of_range(table) {
                return malformed(format!("{label} table refers to morphism {bad}, only {m} exist"));
            }
        }
        let mut units = units;
        units.sort_unstable();
        units.dedup();
        let mut compose = vec![None; m * m];
        for (a, b, c) in compositions {
            if a >= m || b >= m || c >= m {
                return malformed(format!("composition ({a}, {b}) -> {c} out of range"));
            }
            match compose[a * m + b] {
                Some(prev) if prev != c => {
                    return malformed(format!(
                        "composition of `{}` and `{}` given twice with different results",
                        names[a], names[b]
                    ))
                }
                _ => compose[a * m + b] = Some(c),
            }
        }
        Ok(Self::assemble(names, units, source, range, inverse, compose))
    }

    fn assemble(
        names: Vec<String>,
        units: Vec<usize>,
        source: Vec<usize>,
        range: Vec<usize>,
        inverse: Vec<usize>,
        compose: Vec<Option<usize>>,
    ) -> Self {
        let m = names.len();
        let products = (0..m)
            .flat_map(|a| (0..m).map(move |b| (a, b)))
            .filter_map(|(a, b)| compose[a * m + b].map(|c| (a, b, c)))
            .collect();
        FiniteGroupoid { names, units, source, range, inverse, compose, products }
    }

    /// Builds a groupoid from morphisms between abstract objects, with the
    /// identity morphism of each object given explicitly. `compose(a, b)` is
    /// only called on pairs with `dst(b) = src(a)`.
    pub fn from_category(
        names: Vec<String>,
        src: Vec<usize>,
        dst: Vec<usize>,
        identities: Vec<usize>,
        inverse: impl Fn(usize) -> usize,
        compose: impl Fn(usize, usize) -> usize,
    ) -> Self {
        let m = names.len();
        let source: Vec<usize> = src.iter().map(|&o| identities[o]).collect();
        let range: Vec<usize> = dst.iter().map(|&o| identities[o]).collect();
        let inverse: Vec<usize> = (0..m).map(inverse).collect();
        let mut table = vec![None; m * m];
        for a in 0..m {
            for b in 0..m {
                if dst[b] == src[a] {
                    table[a * m + b] = Some(compose(a, b));
                }
            }
        }
        let mut units = identities;
        units.sort_unstable();
        Self::assemble(names, units, source, range, inverse, table)
    }

    pub fn empty() -> Self {
        Self::assemble(Vec::new(), Vec::new(), Vec::new(), Vec::new(), Vec::new(), Vec::new())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, g: usize) -> &str {
        &self.names[g]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn units(&self) -> &[usize] {
        &self.units
    }

    pub fn is_unit(&self, g: usize) -> bool {
        self.units.binary_search(&g).is_ok()
    }

    pub fn source(&self, g: usize) -> usize {
        self.source[g]
    }

    pub fn range(&self, g: usize) -> usize {
        self.range[g]
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn compose(&self, a: usize, b: usize) -> Option<usize> {
        self.compose[a * self.len() + b]
    }

    pub fn products(&self) -> &[(usize, usize, usize)] {
        &self.products
    }

    /// Checks the groupoid axioms in a fixed order and reports the first
    /// violation with a witness.
    pub fn validate(&self) -> Validation {
        let m = self.len();
        let fail = |axiom, witness: Vec<usize>| Validation::Fail { axiom, witness };
        for &u in &self.units {
            if self.source[u] != u || self.range[u] != u || self.inverse[u] != u {
                return fail(Axiom::UnitsAreFixed, vec![u]);
            }
        }
        for g in 0..m {
            if !self.is_unit(self.source[g]) || !self.is_unit(self.range[g]) {
                return fail(Axiom::SourceRangeAreUnits, vec![g]);
            }
        }
        for a in 0..m {
            for b in 0..m {
                let composable = self.range[b] == self.source[a];
                if composable != self.compose(a, b).is_some() {
                    return fail(Axiom::ComposableExactly, vec![a, b]);
                }
            }
        }
        for &(a, b, c) in &self.products {
            if self.source[c] != self.source[b] || self.range[c] != self.range[a] {
                return fail(Axiom::CompositeEndpoints, vec![a, b, c]);
            }
        }
        for g in 0..m {
            if self.compose(g, self.source[g]) != Some(g) {
                return fail(Axiom::Identity, vec![g, self.source[g]]);
            }
            if self.compose(self.range[g], g) != Some(g) {
                return fail(Axiom::Identity, vec![self.range[g], g]);
            }
        }
        for g in 0..m {
            let h = self.inverse[g];
            if self.inverse[h] != g
                || self.compose(h, g) != Some(self.source[g])
                || self.compose(g, h) != Some(self.range[g])
            {
                return fail(Axiom::Inverse, vec![g, h]);
            }
        }
        for &(a, b, ab) in &self.products {
            for c in 0..m {
                let Some(bc) = self.compose(b, c) else { continue };
                if self.compose(ab, c) != self.compose(a, bc) {
                    return fail(Axiom::Associativity, vec![a, b, c]);
                }
            }
        }
        Validation::Pass
    }

    pub fn validation_report(&self) -> ValidationReport {
        match self.validate() {
            Validation::Pass => ValidationReport { valid: true, axiom: None, witness: None },
            Validation::Fail { axiom, witness } => ValidationReport {
                valid: false,
                axiom: Some(axiom),
                witness: Some(witness.iter().map(|&g| self.names[g].clone()).collect()),
            },
        }
    }

    /// `{g : s(g) = r(g)}`, in index order.
    pub fn isotropy(&self) -> Vec<usize> {
        (0..self.len()).filter(|&g| self.source[g] == self.range[g]).collect()
    }

    pub fn unit_subset(&self, members: impl IntoIterator<Item = usize>) -> Result<UnitSubset> {
        let members: BTreeSet<usize> = members.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&u| u >= self.len() || !self.is_unit(u)) {
            return Err(Error::Schema(format!("morphism index {bad} is not a unit")));
        }
        Ok(UnitSubset { members })
    }

    pub fn all_units(&self) -> UnitSubset {
        UnitSubset { members: self.units.iter().copied().collect() }
    }

    /// First morphism with exactly one endpoint in `u`.
    pub fn crossing_morphism(&self, u: &UnitSubset) -> Option<usize> {
        (0..self.len()).find(|&g| u.contains(self.source[g]) != u.contains(self.range[g]))
    }

    pub fn is_invariant(&self, u: &UnitSubset) -> bool {
        self.crossing_morphism(u).is_none()
    }

    /// Orbits of the unit space, each sorted, ordered by least member.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let m = self.len();
        let mut parent: Vec<usize> = (0..m).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for g in 0..m {
            let (a, b) = (find(&mut parent, self.source[g]), find(&mut parent, self.range[g]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &u in &self.units {
            let root = find(&mut parent, u);
            by_root.entry(root).or_default().push(u);
        }
        let mut orbits: Vec<Vec<usize>> = by_root.into_values().collect();
        orbits.sort();
        orbits
    }

    /// Every invariant unit subset (unions of orbits), smallest first.
    pub fn invariant_subsets(&self) -> Vec<UnitSubset> {
        let orbits = self.orbits();
        let mut out: Vec<UnitSubset> = (0u64..1 << orbits.len())
            .map(|mask| UnitSubset {
                members: orbits
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .flat_map(|(_, o)| o.iter().copied())
                    .collect(),
            })
            .collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    /// Full subgroupoid on the morphisms whose source lies outside `u`.
    pub fn restrict_to_complement(&self, u: &UnitSubset) -> Result<FiniteGroupoid> {
        if let Some(g) = self.crossing_morphism(u) {
            return Err(Error::SubsetNotInvariant(self.names[g].clone()));
        }
        let kept: Vec<usize> = self.complement_support(u);
        Ok(self.full_subgroupoid(&kept))
    }

    /// Morphism indices (in the parent) that survive [`restrict_to_complement`](Self::restrict_to_complement).
    pub fn complement_support(&self, u: &UnitSubset) -> Vec<usize> {
        (0..self.len()).filter(|&g| !u.contains(self.source[g])).collect()
    }

    /// Restriction of every table to `kept`, which must be closed under
    /// source, range, inverse and composition.
    fn full_subgroupoid(&self, kept: &[usize]) -> FiniteGroupoid {
        let mut new_index = vec![usize::MAX; self.len()];
        for (i, &g) in kept.iter().enumerate() {
            new_index[g] = i;
        }
        let map = |g: usize| new_index[g];
        let names = kept.iter().map(|&g| self.names[g].clone()).collect();
        let units = self.units.iter().copied().filter(|&u| new_index[u] != usize::MAX).map(map).collect();
        let source = kept.iter().map(|&g| map(self.source[g])).collect();
        let range = kept.iter().map(|&g| map(self.range[g])).collect();
        let inverse = kept.iter().map(|&g| map(self.inverse[g])).collect();
        let n = kept.len();
        let mut compose = vec![None; n * n];
        for (i, &a) in kept.iter().enumerate() {
            for (j, &b) in kept.iter().enumerate() {
                compose[i * n + j] = self.compose(a, b).map(map);
            }
        }
        Self::assemble(names, units, source, range, inverse, compose)
    }

    /// `AB = {a ∘ b : a ∈ A, b ∈ B, r(b) = s(a)}`.
    pub fn set_product(&self, a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> BTreeSet<usize> {
        a.iter().flat_map(|&x| b.iter().filter_map(move |&y| self.compose(x, y))).collect()
    }

    pub fn indicator(&self, ring: RingSpec, g: usize) -> AlgebraElement {
        let mut e = AlgebraElement::zero(ring, self.len());
        e.coeffs[g] = ring.one();
        e
    }

    pub fn indicator_of(&self, ring: RingSpec, set: impl IntoIterator<Item = usize>) -> AlgebraElement {
        let mut e = AlgebraElement::zero(ring, self.len());
        for g in set {
            e.coeffs[g] = ring.one();
        }
        e
    }

    /// The multiplicative identity `1_{G⁽⁰⁾}`.
    pub fn identity(&self, ring: RingSpec) -> AlgebraElement {
        self.indicator_of(ring, self.units.iter().copied())
    }

    fn check_element(&self, f: &AlgebraElement) -> Result<()> {
        if f.coeffs.len() != self.len() {
            return Err(Error::GroupoidMismatch { expected: self.len(), got: f.coeffs.len() });
        }
        Ok(())
    }

    pub fn convolve(&self, f1: &AlgebraElement, f2: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_element(f1)?;
        self.check_element(f2)?;
        f1.check_same(f2)?;
        let ring = f1.ring;
        let mut out = AlgebraElement::zero(ring, self.len());
        for &(a, b, c) in &self.products {
            let (x, y) = (&f1.coeffs[a], &f2.coeffs[b]);
            if x.is_zero() || y.is_zero() {
                continue;
            }
            out.coeffs[c] = &out.coeffs[c] + &(x * y);
        }
        Ok(out)
    }

    pub fn commutator(&self, f1: &AlgebraElement, f2: &AlgebraElement) -> Result<AlgebraElement> {
        self.convolve(f1, f2)?.sub(&self.convolve(f2, f1)?)
    }

    fn vectors_of(&self, ring: RingSpec, elements: &[AlgebraElement]) -> Result<Vec<Vec<Scalar>>> {
        elements
            .iter()
            .map(|e| {
                self.check_element(e)?;
                if e.ring != ring {
                    return Err(Error::RingMismatch(ring.to_string(), e.ring.to_string()));
                }
                Ok(e.coeffs.clone())
            })
            .collect()
    }

    pub fn span_of(&self, ring: RingSpec, elements: &[AlgebraElement]) -> Result<Subspace> {
        let vs = self.vectors_of(ring, elements)?;
        Subspace::span(ring, self.len(), vs)
    }

    pub fn span_of_indicators(&self, ring: RingSpec, set: impl IntoIterator<Item = usize>) -> Result<Subspace> {
        let m = self.len();
        Subspace::span(
            ring,
            m,
            set.into_iter().map(|g| {
                let mut v = vec![ring.zero(); m];
                v[g] = ring.one();
                v
            }),
        )
    }

    /// `A_R(Iso(G))`, the core of the algebra.
    pub fn iso_span(&self, ring: RingSpec) -> Result<Subspace> {
        self.span_of_indicators(ring, self.isotropy())
    }

    pub fn element_of(&self, ring: RingSpec, v: &[Scalar]) -> AlgebraElement {
        AlgebraElement { coeffs: v.to_vec(), ring }
    }

    /// Parses an element expression such as `2*g12 - u1 + 1/2`, where names
    /// are morphisms and a bare scalar is a multiple of the identity.
    pub fn parse_element(&self, ring: RingSpec, input: &str) -> Result<AlgebraElement> {
        let mut x = AlgebraElement::zero(ring, self.len());
        for term in parse::parse_element(input)? {
            let mut c = match &term.scalar {
                Some(s) => ring.parse_scalar(&s.value).map_err(|e| ParseError::new(s.column, e.to_string()))?,
                None => ring.one(),
            };
            if term.negative {
                c = -c;
            }
            let targets = match &term.atom {
                Atom::Identity => self.units.clone(),
                Atom::Name(n) => match self.index_of(&n.value) {
                    Some(g) => vec![g],
                    None => return Err(ParseError::new(n.column, format!("unknown morphism `{}`", n.value)).into()),
                },
                Atom::Monomial { alpha, .. } => {
                    let col = alpha.first().map_or(1, |a| a.column.saturating_sub(1));
                    return Err(ParseError::new(col, "path monomials are not groupoid elements").into());
                }
            };
            for g in targets {
                x.coeffs[g] = &x.coeffs[g] + &c;
            }
        }
        Ok(x)
    }

    /// Renders an element in the syntax accepted by [`parse_element`](Self::parse_element).
    pub fn format_element(&self, x: &AlgebraElement) -> String {
        let mut out = String::new();
        for g in x.support() {
            let c = &x.coeffs[g];
            let (neg, abs) = if c.is_negative_literal() { (true, -c) } else { (false, c.clone()) };
            match (out.is_empty(), neg) {
                (true, true) => out.push('-'),
                (false, true) => out.push_str(" - "),
                (false, false) => out.push_str(" + "),
                (true, false) => {}
            }
            if !abs.is_one() {
                out.push_str(&format!("{abs}*"));
            }
            out.push_str(&self.names[g]);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// `C(X) = {a : xa = ax for all x ∈ X}` as an echelon basis over a field.
    pub fn centraliser_of_span(&self, ring: RingSpec, spanning: &[AlgebraElement]) -> Result<Subspace> {
        ring.require_field()?;
        let vs = self.vectors_of(ring, spanning)?;
        let m = self.len();
        // Row (b, h), column g holds (e_g b − b e_g)(h).
        let mut rows = Vec::with_capacity(vs.len() * m);
        for b in &vs {
            let mut block = vec![vec![ring.zero(); m]; m];
            for &(g1, g2, h) in &self.products {
                if !b[g2].is_zero() {
                    block[h][g1] = &block[h][g1] + &b[g2];
                }
                if !b[g1].is_zero() {
                    block[h][g2] = &block[h][g2] - &b[g1];
                }
            }
            rows.extend(block.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())));
        }
        Subspace::kernel(ring, m, rows)
    }

    /// Whether `space` is closed under convolution.
    pub fn is_subalgebra(&self, space: &Subspace) -> bool {
        let ring = space.field();
        let basis: Vec<AlgebraElement> = space.basis().iter().map(|v| self.element_of(ring, v)).collect();
        basis.iter().all(|x| {
            basis.iter().all(|y| {
                let p = self.convolve(x, y).expect("same ring and groupoid");
                space.contains(&p.coeffs)
            })
        })
    }

    /// First pair of spanning elements that fail to commute.
    pub fn non_commuting_pair(&self, elements: &[AlgebraElement]) -> Result<Option<(usize, usize)>> {
        for i in 0..elements.len() {
            for j in i + 1..elements.len() {
                if !self.commutator(&elements[i], &elements[j])?.is_zero() {
                    return Ok(Some((i, j)));
                }
            }
        }
        Ok(None)
    }

    /// Compares `C(A_R(U))` with `A_R(Iso) + A_R(G_{G⁽⁰⁾∖U})`.
    ///
    /// With `force`, a non-invariant `U` is accepted and both sides are
    /// computed and compared, but the result carries `invariant: false`.
    pub fn verify_centraliser_theorem(&self, u: &UnitSubset, ring: RingSpec, force: bool) -> Result<TheoremReport> {
        ring.require_field()?;
        let crossing = self.crossing_morphism(u);
        if let (Some(g), false) = (crossing, force) {
            return Err(Error::SubsetNotInvariant(self.names[g].clone()));
        }
        let generators: Vec<AlgebraElement> = u.members.iter().map(|&x| self.indicator(ring, x)).collect();
        let lhs = self.centraliser_of_span(ring, &generators)?;
        let iso = self.iso_span(ring)?;
        let rest = self.span_of_indicators(ring, self.complement_support(u))?;
        let rhs = iso.sum(&rest);
        let witness = match (lhs.first_outside(&rhs), rhs.first_outside(&lhs)) {
            (None, None) => None,
            (Some(v), _) => Some(Witness::new(self, "rhs_not_in_lhs", v)),
            (None, Some(v)) => Some(Witness::new(self, "lhs_not_in_rhs", v)),
        };
        Ok(TheoremReport {
            holds: witness.is_none(),
            lhs_dim: lhs.dim(),
            rhs_dim: rhs.dim(),
            iso_dim: iso.dim(),
            complement_dim: rest.dim(),
            lhs_is_subalgebra: self.is_subalgebra(&lhs),
            invariant: crossing.is_none(),
            witness,
        })
    }

    /// `C(B) = B` for the span `B` of `spanning`, which must be commutative.
    pub fn is_maximal_commutative(&self, ring: RingSpec, spanning: &[AlgebraElement]) -> Result<bool> {
        ring.require_field()?;
        if let Some((i, j)) = self.non_commuting_pair(spanning)? {
            return Err(Error::InputNotCommutative(i, j));
        }
        let span = self.span_of(ring, spanning)?;
        Ok(self.centraliser_of_span(ring, spanning)? == span)
    }

    /// Whether every isotropy group is abelian.
    pub fn check_iso_abelian(&self) -> bool {
        let iso = self.isotropy();
        iso.iter().all(|&a| {
            iso.iter()
                .filter(|&&b| self.source[b] == self.source[a])
                .all(|&b| self.compose(a, b) == self.compose(b, a))
        })
    }

    /// `1_g · f`, computed by translation: `(1_g f)(k) = f(g⁻¹k)`.
    fn left_translate(&self, g: usize, f: &[Scalar], zero: &Scalar) -> Vec<Scalar> {
        let gi = self.inverse[g];
        (0..self.len()).map(|k| self.compose(gi, k).map_or_else(|| zero.clone(), |b| f[b].clone())).collect()
    }

    /// `f · 1_h`, computed by translation: `(f 1_h)(k) = f(kh⁻¹)`.
    fn right_translate(&self, f: &[Scalar], h: usize, zero: &Scalar) -> Vec<Scalar> {
        let hi = self.inverse[h];
        (0..self.len()).map(|k| self.compose(k, hi).map_or_else(|| zero.clone(), |a| f[a].clone())).collect()
    }

    /// Two-sided ideal generated by `generators`: the span of all
    /// `1_g · x · 1_h` (the algebra is unital and spanned by indicators).
    pub fn ideal(&self, ring: RingSpec, generators: &[AlgebraElement]) -> Result<Subspace> {
        let zero = ring.zero();
        let mut vectors = HashSet::new();
        for x in self.span_of(ring, generators)?.basis() {
            for g in 0..self.len() {
                let left = self.left_translate(g, x, &zero);
                if left.iter().all(Scalar::is_zero) {
                    continue;
                }
                for h in 0..self.len() {
                    let v = self.right_translate(&left, h, &zero);
                    if !v.iter().all(Scalar::is_zero) {
                        vectors.insert(v);
                    }
                }
            }
        }
        Subspace::span(ring, self.len(), vectors)
    }

    /// For the quotient by the ideal generated by `generators`: is the
    /// quotient map injective, and is its restriction to the core injective.
    pub fn core_injectivity_check(&self, ring: RingSpec, generators: &[AlgebraElement]) -> Result<InjectivityReport> {
        ring.require_field()?;
        let ideal = self.ideal(ring, generators)?;
        let core = self.iso_span(ring)?;
        let core_meet = ideal.intersection_dim(&core);
        let injective = ideal.dim() == 0;
        let core_injective = core_meet == 0;
        Ok(InjectivityReport {
            ideal_dim: ideal.dim(),
            core_intersection_dim: core_meet,
            injective,
            core_injective,
            agree: injective == core_injective,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub kind: &'static str,
    pub vector: BTreeMap<String, Scalar>,
}

impl Witness {
    fn new(g: &FiniteGroupoid, kind: &'static str, v: &[Scalar]) -> Self {
        let vector = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (g.names[i].clone(), c.clone()))
            .collect();
        Witness { kind, vector }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub holds: bool,
    pub lhs_dim: usize,
    pub rhs_dim: usize,
    pub iso_dim: usize,
    pub complement_dim: usize,
    pub lhs_is_subalgebra: bool,
    pub invariant: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InjectivityReport {
    pub ideal_dim: usize,
    pub core_intersection_dim: usize,
    pub injective: bool,
    pub core_injective: bool,
    pub agree: bool,
}

/// On-disk groupoid description. Units are implicit morphisms with
/// `src = dst = inv = self`; identity compositions may be omitted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidFile {
    pub units: Vec<String>,
    #[serde(default)]
    pub morphisms: Vec<MorphismEntry>,
    /// `(left, right, result)` with `right` applied first.
    #[serde(default)]
    pub compose: Vec<(String, String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismEntry {
    pub name: String,
    pub src: String,
    pub dst: String,
    pub inv: String,
}

impl GroupoidFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn to_groupoid(&self) -> Result<FiniteGroupoid> {
        let mut names: Vec<String> = self.units.clone();
        names.extend(self.morphisms.iter().map(|m| m.name.clone()));
        let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        if index.len() != names.len() {
            return Err(Error::MalformedTable("duplicate morphism name".into()));
        }
        let lookup = |n: &str| {
            index.get(n).copied().ok_or_else(|| Error::MalformedTable(format!("unknown morphism `{n}`")))
        };
        let k = self.units.len();
        let mut source: Vec<usize> = (0..k).collect();
        let mut range: Vec<usize> = (0..k).collect();
        let mut inverse: Vec<usize> = (0..k).collect();
        for m in &self.morphisms {
            source.push(lookup(&m.src)?);
            range.push(lookup(&m.dst)?);
            inverse.push(lookup(&m.inv)?);
        }
        let mut compositions = Vec::new();
        for (a, b, c) in &self.compose {
            compositions.push((lookup(a)?, lookup(b)?, lookup(c)?));
        }
        // implicit identity laws
        let given: BTreeSet<(usize, usize)> = compositions.iter().map(|&(a, b, _)| (a, b)).collect();
        for g in 0..names.len() {
            for pair in [(g, source[g]), (range[g], g)] {
                if pair.0 < names.len() && pair.1 < names.len() && !given.contains(&pair) {
                    compositions.push((pair.0, pair.1, g));
                }
            }
        }
        FiniteGroupoid::from_tables(names, (0..k).collect(), source, range, inverse, compositions)
    }

    pub fn from_groupoid(g: &FiniteGroupoid) -> Self {
        let units = g.units.iter().map(|&u| g.names[u].clone()).collect();
        let morphisms = (0..g.len())
            .filter(|&x| !g.is_unit(x))
            .map(|x| MorphismEntry {
                name: g.names[x].clone(),
                src: g.names[g.source[x]].clone(),
                dst: g.names[g.range[x]].clone(),
                inv: g.names[g.inverse[x]].clone(),
            })
            .collect();
        let compose = g
            .products
            .iter()
            .filter(|&&(a, b, _)| !g.is_unit(a) && !g.is_unit(b))
            .map(|&(a, b, c)| (g.names[a].clone(), g.names[b].clone(), g.names[c].clone()))
            .collect();
        GroupoidFile { units, morphisms, compose }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{cyclic_group, disjoint_union, pair_groupoid, symmetric_group};

    fn q() -> RingSpec {
        RingSpec::Rationals
    }

    fn idx(g: &FiniteGroupoid, n: &str) -> usize {
        g.index_of(n).unwrap_or_else(|| panic!("no morphism {n}"))
    }

    fn pair_plus_z2() -> FiniteGroupoid {
        disjoint_union(&[pair_groupoid(2), cyclic_group(2)])
    }

    #[test]
    fn validation_examples() {
        assert!(pair_groupoid(2).validate().is_pass());
        assert!(cyclic_group(2).validate().is_pass());

        // compose(g12, g12) defined although r(g12) = u1 ≠ u2 = s(g12)
        let p = pair_groupoid(2);
        let g12 = idx(&p, "g12");
        let mut entries: Vec<_> = p.products().to_vec();
        entries.push((g12, g12, g12));
        let bad = FiniteGroupoid::from_tables(
            p.names().to_vec(),
            p.units().to_vec(),
            (0..4).map(|g| p.source(g)).collect(),
            (0..4).map(|g| p.range(g)).collect(),
            (0..4).map(|g| p.inverse(g)).collect(),
            entries,
        )
        .unwrap();
        assert_eq!(bad.validate(), Validation::Fail { axiom: Axiom::ComposableExactly, witness: vec![g12, g12] });
    }

    #[test]
    fn malformed_tables() {
        let err = FiniteGroupoid::from_tables(vec!["u".into()], vec![0], vec![3], vec![0], vec![0], []);
        assert!(matches!(err, Err(Error::MalformedTable(_))));
        let err = FiniteGroupoid::from_tables(vec!["u".into()], vec![0], vec![0], vec![0], vec![0], [(0, 0, 0), (0, 0, 1)]);
        assert!(matches!(err, Err(Error::MalformedTable(_))));
    }

    #[test]
    fn broken_associativity_is_caught() {
        // Z/3 with the table for t·t2 swapped to t instead of e
        let z3 = cyclic_group(3);
        let (e, t, t2) = (idx(&z3, "e"), idx(&z3, "t"), idx(&z3, "t2"));
        let entries = z3.products().iter().map(|&(a, b, c)| if (a, b) == (t, t2) { (a, b, t) } else { (a, b, c) });
        let bad = FiniteGroupoid::from_tables(
            z3.names().to_vec(),
            vec![e],
            vec![e; 3],
            vec![e; 3],
            (0..3).map(|g| z3.inverse(g)).collect(),
            entries,
        )
        .unwrap();
        assert!(!bad.validate().is_pass());
    }

    #[test]
    fn isotropy_examples() {
        let p = pair_groupoid(2);
        assert_eq!(p.isotropy(), p.units().to_vec());
        assert_eq!(cyclic_group(2).isotropy().len(), 2);
        let u = pair_plus_z2();
        assert_eq!(u.isotropy().len(), 4);
        assert!(u.isotropy().iter().all(|&g| u.source(g) == u.range(g)));
    }

    #[test]
    fn invariance_and_restriction() {
        let p = pair_groupoid(2);
        assert!(p.is_invariant(&p.all_units()));
        let one = p.unit_subset([idx(&p, "u1")]).unwrap();
        assert!(!p.is_invariant(&one));
        assert!(matches!(p.restrict_to_complement(&one), Err(Error::SubsetNotInvariant(_))));
        assert!(p.restrict_to_complement(&p.all_units()).unwrap().is_empty());
        assert_eq!(p.restrict_to_complement(&UnitSubset::empty()).unwrap(), p);

        let g = pair_plus_z2();
        let group_unit = g.unit_subset([idx(&g, "c1.e")]).unwrap();
        assert!(g.is_invariant(&group_unit));
        let rest = g.restrict_to_complement(&group_unit).unwrap();
        assert_eq!(rest.len(), 4);
        assert!(rest.validate().is_pass());
        assert!(rest.names().iter().all(|n| n.starts_with("c0.")));
        assert_eq!(g.invariant_subsets().len(), 4);
    }

    #[test]
    fn set_products() {
        let p = pair_groupoid(2);
        let all: BTreeSet<usize> = (0..4).collect();
        let units: BTreeSet<usize> = p.units().iter().copied().collect();
        let b: BTreeSet<usize> = [idx(&p, "g12"), idx(&p, "u2")].into();
        assert_eq!(p.set_product(&units, &b), b);
        let a: BTreeSet<usize> = [idx(&p, "g12")].into();
        let c: BTreeSet<usize> = [idx(&p, "g21")].into();
        assert_eq!(p.set_product(&a, &c), [idx(&p, "u1")].into());
        assert!(p.set_product(&a, &a).is_empty());
        assert_eq!(p.set_product(&all, &all), all);
    }

    #[test]
    fn convolution_examples() {
        let p = pair_groupoid(2);
        let e = |n| p.indicator(q(), idx(&p, n));
        assert_eq!(p.convolve(&e("g12"), &e("g21")).unwrap(), e("u1"));
        assert!(p.convolve(&e("g12"), &e("g12")).unwrap().is_zero());
        let z2 = cyclic_group(2);
        let t = z2.indicator(q(), idx(&z2, "t"));
        assert_eq!(z2.convolve(&t, &t).unwrap(), z2.indicator(q(), idx(&z2, "e")));

        let one = p.identity(q());
        let x = p.element_of(q(), &[q().from_i64(2), q().from_i64(-1), q().from_i64(3), q().from_i64(5)]);
        assert_eq!(p.convolve(&one, &x).unwrap(), x);
        assert_eq!(p.convolve(&x, &one).unwrap(), x);

        let other = RingSpec::IntegersMod(5);
        assert!(matches!(p.convolve(&e("g12"), &p.indicator(other, 0)), Err(Error::RingMismatch(..))));
        assert!(matches!(p.convolve(&e("g12"), &z2.indicator(q(), 0)), Err(Error::GroupoidMismatch { .. })));
    }

    /// Brute-force commutant of the diagonal in the pair-groupoid algebra
    /// over ℤ/2: enumerate all 16 elements and keep those commuting with
    /// both unit indicators.
    #[test]
    fn centraliser_matches_enumeration_over_f2() {
        let f2 = RingSpec::IntegersMod(2);
        let p = pair_groupoid(2);
        let units: Vec<AlgebraElement> = p.units().iter().map(|&u| p.indicator(f2, u)).collect();
        let mut commuting = Vec::new();
        for bits in 0u32..16 {
            let v: Vec<Scalar> = (0..4).map(|i| f2.from_i64((bits >> i & 1) as i64)).collect();
            let x = p.element_of(f2, &v);
            if units.iter().all(|u| p.commutator(&x, u).unwrap().is_zero()) {
                commuting.push(v);
            }
        }
        // a 2-dimensional space over F2 has 4 elements
        assert_eq!(commuting.len(), 4);
        let c = p.centraliser_of_span(f2, &units).unwrap();
        assert_eq!(c.dim(), 2);
        assert!(commuting.iter().all(|v| c.contains(v)));
        assert_eq!(c, p.span_of_indicators(f2, p.units().iter().copied()).unwrap());
    }

    #[test]
    fn centraliser_edge_cases() {
        let p = pair_groupoid(2);
        assert_eq!(p.centraliser_of_span(q(), &[p.identity(q())]).unwrap().dim(), 4);
        let z2 = cyclic_group(2);
        let basis: Vec<_> = (0..2).map(|g| z2.indicator(q(), g)).collect();
        assert_eq!(z2.centraliser_of_span(q(), &basis).unwrap().dim(), 2);
        assert!(matches!(
            p.centraliser_of_span(RingSpec::Integers, &[]),
            Err(Error::SolverRequiresField(_))
        ));
    }

    #[test]
    fn theorem_examples() {
        let p = pair_groupoid(2);
        let r = p.verify_centraliser_theorem(&UnitSubset::empty(), q(), false).unwrap();
        assert!(r.holds);
        assert_eq!((r.lhs_dim, r.rhs_dim), (4, 4));
        let r = p.verify_centraliser_theorem(&p.all_units(), q(), false).unwrap();
        assert!(r.holds && r.lhs_is_subalgebra);
        assert_eq!((r.lhs_dim, r.rhs_dim), (2, 2));

        let g = pair_plus_z2();
        let u = g.unit_subset([idx(&g, "c1.e")]).unwrap();
        let r = g.verify_centraliser_theorem(&u, q(), false).unwrap();
        assert!(r.holds);
        assert_eq!((r.lhs_dim, r.rhs_dim, r.iso_dim, r.complement_dim), (6, 6, 4, 4));

        let one = p.unit_subset([idx(&p, "u1")]).unwrap();
        assert!(matches!(p.verify_centraliser_theorem(&one, q(), false), Err(Error::SubsetNotInvariant(_))));
        let forced = p.verify_centraliser_theorem(&one, q(), true).unwrap();
        assert!(!forced.invariant);
        assert!(matches!(
            p.verify_centraliser_theorem(&p.all_units(), RingSpec::IntegersMod(4), false),
            Err(Error::SolverRequiresField(_))
        ));
    }

    #[test]
    fn maximal_commutative_examples() {
        let p = pair_groupoid(2);
        let diag: Vec<_> = p.units().iter().map(|&u| p.indicator(q(), u)).collect();
        assert!(p.is_maximal_commutative(q(), &diag).unwrap());
        assert!(!p.is_maximal_commutative(q(), &diag[..1]).unwrap());
        let z2 = cyclic_group(2);
        let all: Vec<_> = (0..2).map(|g| z2.indicator(q(), g)).collect();
        assert!(z2.is_maximal_commutative(q(), &all).unwrap());

        let s3 = symmetric_group();
        let iso: Vec<_> = s3.isotropy().into_iter().map(|g| s3.indicator(q(), g)).collect();
        assert!(matches!(s3.is_maximal_commutative(q(), &iso), Err(Error::InputNotCommutative(..))));
    }

    #[test]
    fn abelian_isotropy() {
        assert!(pair_groupoid(2).check_iso_abelian());
        assert!(!symmetric_group().check_iso_abelian());
        assert!(cyclic_group(4).check_iso_abelian());
    }

    #[test]
    fn injectivity_examples() {
        let p = pair_groupoid(2);
        let r = p.core_injectivity_check(q(), &[]).unwrap();
        assert!(r.injective && r.core_injective && r.agree);
        let r = p.core_injectivity_check(q(), &[p.identity(q())]).unwrap();
        assert!(!r.injective && !r.core_injective);
        let r = p.core_injectivity_check(q(), &[p.indicator(q(), idx(&p, "g12"))]).unwrap();
        assert_eq!(r.ideal_dim, 4);
        assert!(!r.injective && !r.core_injective && r.agree);
    }

    /// Ideal as the least subspace containing the generators and closed under
    /// convolution with every indicator on either side.
    fn ideal_by_closure(g: &FiniteGroupoid, gens: &[AlgebraElement]) -> Subspace {
        let mut ideal = g.span_of(q(), gens).unwrap();
        loop {
            let mut vs = ideal.basis().to_vec();
            for x in ideal.basis() {
                let x = g.element_of(q(), x);
                for h in 0..g.len() {
                    let e = g.indicator(q(), h);
                    vs.push(g.convolve(&e, &x).unwrap().into_coeffs());
                    vs.push(g.convolve(&x, &e).unwrap().into_coeffs());
                }
            }
            let next = Subspace::span(q(), g.len(), vs).unwrap();
            if next.dim() == ideal.dim() {
                return ideal;
            }
            ideal = next;
        }
    }

    #[test]
    fn ideal_matches_closure() {
        let g = disjoint_union(&[pair_groupoid(2), cyclic_group(3)]);
        let two = q().from_i64(2);
        let cases = [
            vec![g.indicator(q(), idx(&g, "c0.g12"))],
            vec![g.indicator(q(), idx(&g, "c1.t")).sub(&g.indicator(q(), idx(&g, "c1.e"))).unwrap()],
            vec![g.indicator(q(), idx(&g, "c1.t2")).scale(&two).unwrap(), g.indicator(q(), idx(&g, "c0.u2"))],
            vec![],
        ];
        for gens in cases {
            assert_eq!(g.ideal(q(), &gens).unwrap(), ideal_by_closure(&g, &gens));
        }
        let s3 = symmetric_group();
        let x = s3.indicator(q(), idx(&s3, "(01)")).sub(&s3.indicator(q(), idx(&s3, "(12)"))).unwrap();
        assert_eq!(s3.ideal(q(), std::slice::from_ref(&x)).unwrap(), ideal_by_closure(&s3, &[x]));
    }

    #[test]
    fn element_expressions() {
        let g = pair_groupoid(2);
        let x = g.parse_element(q(), "2*g12 - u1 + 1/2").unwrap();
        assert_eq!(g.format_element(&x), "-1/2*u1 + 2*g12 + 1/2*u2");
        assert_eq!(g.parse_element(q(), &g.format_element(&x)).unwrap(), x);
        assert_eq!(g.format_element(&AlgebraElement::zero(q(), 4)), "0");
        let e = g.parse_element(q(), "u1 + g13").unwrap_err();
        assert!(matches!(e, Error::Parse(ParseError { column: 6, .. })), "{e:?}");
        assert!(g.parse_element(q(), "[u1;u1]").is_err());
        assert!(g.parse_element(RingSpec::Integers, "1/2*u1").is_err());
    }

    #[test]
    fn file_round_trip() {
        let g = pair_plus_z2();
        let file = GroupoidFile::from_groupoid(&g);
        let text = serde_json::to_string(&file).unwrap();
        let back = GroupoidFile::from_json(&text).unwrap().to_groupoid().unwrap();
        assert!(back.validate().is_pass());
        assert_eq!(back.len(), g.len());
        for &(a, b, c) in g.products() {
            let (a2, b2, c2) = (idx(&back, g.name(a)), idx(&back, g.name(b)), idx(&back, g.name(c)));
            assert_eq!(back.compose(a2, b2), Some(c2));
        }
        assert!(GroupoidFile::from_json(r#"{"units": ["u"], "extra": 1}"#).is_err());
        let unknown = GroupoidFile::from_json(r#"{"units": ["u"], "compose": [["u", "x", "u"]]}"#).unwrap();
        assert!(matches!(unknown.to_groupoid(), Err(Error::MalformedTable(_))));
    }
}
