//! The boundary-path groupoid of an acyclic graph and the map from the
//! Leavitt path algebra into its convolution algebra.
//!
//! For an acyclic finite graph every boundary path is a finite path ending
//! at a sink, and two boundary paths share a tail exactly when they end at
//! the same sink. The groupoid is therefore finite: a disjoint union of pair
//! groupoids, one for each sink.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, Path};
use crate::groupoid::{AlgebraElement, FiniteGroupoid};
use crate::linalg;
use crate::lpa::{Lpa, LpaElement, Monomial};
use crate::scalars::RingSpec;

/// Paths ending at sinks, ordered by length and then by edge names.
pub fn boundary_paths(graph: &Graph) -> Result<Vec<Path>> {
    if !graph.is_acyclic() {
        return Err(Error::CyclicGraph);
    }
    let sinks = graph.sinks();
    Ok(graph
        .enumerate_paths(graph.vertex_count())
        .into_iter()
        .filter(|p| sinks.contains(&p.range()))
        .collect())
}

/// A triple `(x, k, y)` of the groupoid, with `x`, `y` indices into the
/// boundary-path list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Triple {
    pub x: usize,
    pub k: i64,
    pub y: usize,
}

/// `G_E` together with the data needed to map monomials into it.
#[derive(Debug, Clone)]
pub struct GraphGroupoid {
    graph: Graph,
    boundary: Vec<Path>,
    triples: Vec<Triple>,
    index: HashMap<(usize, usize), usize>,
    groupoid: FiniteGroupoid,
}

impl GraphGroupoid {
    pub fn new(graph: &Graph) -> Result<Self> {
        let boundary = boundary_paths(graph)?;
        let mut triples = Vec::new();
        let mut index = HashMap::new();
        for (x, px) in boundary.iter().enumerate() {
            for (y, py) in boundary.iter().enumerate() {
                if px.range() == py.range() {
                    index.insert((x, y), triples.len());
                    triples.push(Triple { x, k: px.len() as i64 - py.len() as i64, y });
                }
            }
        }
        let unit_of: Vec<usize> = (0..boundary.len()).map(|x| index[&(x, x)]).collect();
        let names = triples
            .iter()
            .map(|t| format!("({},{},{})", graph.path_name(&boundary[t.x]), t.k, graph.path_name(&boundary[t.y])))
            .collect();
        let source = triples.iter().map(|t| unit_of[t.y]).collect();
        let range = triples.iter().map(|t| unit_of[t.x]).collect();
        let inverse = triples.iter().map(|t| index[&(t.y, t.x)]).collect();
        // (x, k, y)(y, l, z) = (x, k + l, z)
        let mut compositions = Vec::new();
        for (a, ta) in triples.iter().enumerate() {
            for (b, tb) in triples.iter().enumerate() {
                if ta.y == tb.x {
                    compositions.push((a, b, index[&(ta.x, tb.y)]));
                }
            }
        }
        let groupoid = FiniteGroupoid::from_tables(names, unit_of, source, range, inverse, compositions)?;
        Ok(GraphGroupoid { graph: graph.clone(), boundary, triples, index, groupoid })
    }

    pub fn groupoid(&self) -> &FiniteGroupoid {
        &self.groupoid
    }

    pub fn boundary(&self) -> &[Path] {
        &self.boundary
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    fn boundary_index(&self, p: &Path) -> usize {
        self.boundary.iter().position(|b| b == p).expect("extensions of paths to sinks are boundary paths")
    }

    /// Morphisms in `Z(α, β) = {(αz, |α| − |β|, βz)}`, `z` a boundary path from `r(α)`.
    pub fn cylinder(&self, m: &Monomial) -> Vec<usize> {
        let v = m.range();
        self.boundary
            .iter()
            .filter(|z| z.source() == v)
            .map(|z| {
                let x = self.boundary_index(&m.alpha().concat(z).expect("z starts at r(α)"));
                let y = self.boundary_index(&m.beta().concat(z).expect("z starts at r(β)"));
                self.index[&(x, y)]
            })
            .collect()
    }

    /// `π(αβ*) = 1_{Z(α, β)}`.
    pub fn pi_monomial(&self, ring: RingSpec, m: &Monomial) -> AlgebraElement {
        self.groupoid.indicator_of(ring, self.cylinder(m))
    }

    /// `π` extended linearly.
    pub fn pi(&self, x: &LpaElement) -> Result<AlgebraElement> {
        if *x.graph() != self.graph {
            return Err(Error::GraphMismatch);
        }
        let ring = x.ring();
        let mut coeffs = vec![ring.zero(); self.groupoid.len()];
        for (m, c) in x.terms() {
            for g in self.cylinder(m) {
                coeffs[g] = &coeffs[g] + c;
            }
        }
        AlgebraElement::from_coeffs(ring, coeffs)
    }
}

pub fn build_graph_groupoid(graph: &Graph) -> Result<FiniteGroupoid> {
    Ok(GraphGroupoid::new(graph)?.groupoid)
}

/// Maps an element into the convolution algebra of `G_E`.
pub fn pi_expand(x: &LpaElement) -> Result<AlgebraElement> {
    GraphGroupoid::new(x.graph())?.pi(x)
}

/// Degree up to which the normal-form basis is checked for injectivity.
pub const INJECTIVITY_DEGREE: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PiIsoReport {
    pub homomorphism_pass: bool,
    pub samples: usize,
    pub injectivity_rank: usize,
    pub expected_rank: usize,
    pub groupoid_size: usize,
    pub diagonal_supported_on_units: bool,
    pub core_supported_on_isotropy: bool,
    /// First sampled pair `(x, y)` on which `π` fails to be multiplicative or additive.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<(String, String)>,
}

impl PiIsoReport {
    pub fn passes(&self) -> bool {
        self.homomorphism_pass
            && self.injectivity_rank == self.expected_rank
            && self.diagonal_supported_on_units
            && self.core_supported_on_isotropy
    }
}

/// Checks that `π` is an injective homomorphism on the truncated normal
/// basis and that it sends the diagonal and the core where expected.
pub fn verify_pi_iso(graph: &Graph, ring: RingSpec, samples: usize, seed: u64) -> Result<PiIsoReport> {
    verify_pi_iso_in(&Lpa::new(graph.clone(), ring), samples, seed)
}

/// [`verify_pi_iso`] for a given algebra, which may use a non-default rewrite rule.
pub fn verify_pi_iso_in(lpa: &Lpa, samples: usize, seed: u64) -> Result<PiIsoReport> {
    let ring = lpa.ring();
    ring.require_field()?;
    let gg = GraphGroupoid::new(lpa.graph())?;
    let g = gg.groupoid();
    let basis = lpa.normal_basis(INJECTIVITY_DEGREE);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut witness = None;
    for _ in 0..samples {
        let x = lpa.random_combination(&mut rng, &basis, 3);
        let y = lpa.random_combination(&mut rng, &basis, 3);
        let (px, py) = (gg.pi(&x)?, gg.pi(&y)?);
        let mul_ok = gg.pi(&lpa.mul(&x, &y)?)? == g.convolve(&px, &py)?;
        let add_ok = gg.pi(&lpa.add(&x, &y)?)? == px.add(&py)?;
        if !(mul_ok && add_ok) {
            witness = Some((x.to_string(), y.to_string()));
            break;
        }
    }

    let images: Vec<_> = basis.iter().map(|m| gg.pi_monomial(ring, m).into_coeffs()).collect();
    let injectivity_rank = linalg::rank(ring, g.len(), images)?;

    let supported_on = |gens: Vec<LpaElement>, allowed: &dyn Fn(usize) -> bool| -> Result<bool> {
        for x in gens {
            if !gg.pi(&x)?.support().all(allowed) {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let depth = lpa.graph().vertex_count();
    let diagonal_supported_on_units = supported_on(lpa.diagonal_generators(depth), &|h| g.is_unit(h))?;
    let iso = g.isotropy();
    let core_supported_on_isotropy = supported_on(lpa.core_generators(depth), &|h| iso.contains(&h))?;

    Ok(PiIsoReport {
        homomorphism_pass: witness.is_none(),
        samples,
        injectivity_rank,
        expected_rank: basis.len(),
        groupoid_size: g.len(),
        diagonal_supported_on_units,
        core_supported_on_isotropy,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::line;
    use crate::lpa::RewriteRule;

    fn edge() -> Graph {
        Graph::new(&["v", "w"], &[("e", "v", "w")]).unwrap()
    }

    fn names(g: &Graph, ps: &[Path]) -> Vec<String> {
        ps.iter().map(|p| g.path_name(p)).collect()
    }

    #[test]
    fn boundary_path_examples() {
        let single = Graph::new::<&str>(&["v"], &[]).unwrap();
        assert_eq!(names(&single, &boundary_paths(&single).unwrap()), ["v"]);
        assert_eq!(names(&edge(), &boundary_paths(&edge()).unwrap()), ["w", "e"]);
        let l3 = line(3);
        assert_eq!(names(&l3, &boundary_paths(&l3).unwrap()), ["v3", "e2", "e1.e2"]);
        let looped = Graph::new(&["v"], &[("c", "v", "v")]).unwrap();
        assert_eq!(boundary_paths(&looped).unwrap_err(), Error::CyclicGraph);
        assert!(build_graph_groupoid(&looped).is_err());
    }

    #[test]
    fn groupoid_examples() {
        let single = Graph::new::<&str>(&["v"], &[]).unwrap();
        assert_eq!(build_graph_groupoid(&single).unwrap().len(), 1);
        let g = build_graph_groupoid(&edge()).unwrap();
        assert!(g.validate().is_pass());
        let mut n = g.names().to_vec();
        n.sort();
        assert_eq!(n, ["(e,0,e)", "(e,1,w)", "(w,-1,e)", "(w,0,w)"]);
        assert_eq!(g.units().len(), 2);
        assert_eq!(g.orbits().len(), 1);
        let g3 = build_graph_groupoid(&line(3)).unwrap();
        assert_eq!(g3.len(), 9);
        assert!(g3.validate().is_pass());
        assert_eq!(g3.isotropy().len(), 3);
    }

    #[test]
    fn pi_examples() {
        let l = Lpa::new(edge(), RingSpec::Rationals);
        let gg = GraphGroupoid::new(&edge()).unwrap();
        let g = gg.groupoid();
        let v = gg.pi(&l.parse("[v;v]").unwrap()).unwrap();
        assert_eq!(v.support().map(|h| g.name(h)).collect::<Vec<_>>(), ["(e,0,e)"]);
        let e = gg.pi(&l.parse("[e;w]").unwrap()).unwrap();
        assert_eq!(e.support().map(|h| g.name(h)).collect::<Vec<_>>(), ["(e,1,w)"]);
        assert!(pi_expand(&l.zero()).unwrap().is_zero());
        // the identity maps to the identity
        assert_eq!(gg.pi(&l.identity()).unwrap(), g.identity(RingSpec::Rationals));
    }

    #[test]
    fn verify_examples() {
        let r = verify_pi_iso(&edge(), RingSpec::Rationals, 100, 0).unwrap();
        assert!(r.passes(), "{r:?}");
        assert_eq!((r.injectivity_rank, r.groupoid_size), (4, 4));
        let single = Graph::new::<&str>(&["v"], &[]).unwrap();
        assert!(verify_pi_iso(&single, RingSpec::Rationals, 10, 0).unwrap().passes());
        let r = verify_pi_iso(&line(3), RingSpec::IntegersMod(5), 100, 1).unwrap();
        assert!(r.passes(), "{r:?}");
        assert_eq!(r.injectivity_rank, 9);
    }

    #[test]
    fn tampered_rewriting_breaks_the_homomorphism() {
        let fork = Graph::new(&["r", "a", "b"], &[("x", "r", "a"), ("y", "r", "b")]).unwrap();
        let l = Lpa::new(fork, RingSpec::Rationals).with_rule(RewriteRule::DropCorrection);
        let r = verify_pi_iso_in(&l, 100, 0).unwrap();
        assert!(!r.homomorphism_pass);
        assert!(r.witness.is_some());
    }

    #[test]
    fn diagonal_centraliser_matches_core_image() {
        // Both routes give the unit indicators: C(span of units) has the same
        // dimension as the span of the images of the core generators.
        for graph in [edge(), line(3), line(4)] {
            let ring = RingSpec::Rationals;
            let gg = GraphGroupoid::new(&graph).unwrap();
            let g = gg.groupoid();
            let units: Vec<_> = g.units().iter().map(|&u| g.indicator(ring, u)).collect();
            let lhs = g.centraliser_of_span(ring, &units).unwrap();
            let l = Lpa::new(graph.clone(), ring);
            let images: Vec<_> = l
                .core_generators(graph.vertex_count())
                .iter()
                .map(|x| gg.pi(x).unwrap().into_coeffs())
                .collect();
            assert_eq!(lhs.dim(), linalg::rank(ring, g.len(), images).unwrap());
        }
    }
}
