//! Finite directed graphs and the path machinery of Leavitt path algebras.
//!
//! Vertices and edges are sorted by name on construction, so index order is
//! name order and every enumeration below is deterministic.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub name: String,
    pub src: String,
    pub dst: String,
}

/// On-disk graph description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<EdgeEntry>,
}

impl GraphFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub name: String,
    pub src: usize,
    pub dst: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    out: Vec<Vec<usize>>,
    names: HashMap<String, Name>,
}

/// What a name refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Name {
    Vertex(usize),
    Edge(usize),
}

impl Graph {
    /// `edges` are `(name, src, dst)` triples naming vertices.
    pub fn new<S: AsRef<str>>(vertices: &[S], edges: &[(S, S, S)]) -> Result<Self> {
        let mut vs: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        vs.sort();
        let mut names = HashMap::new();
        for (i, v) in vs.iter().enumerate() {
            if !is_name(v) {
                return Err(Error::MalformedGraph(format!("invalid vertex name `{v}`")));
            }
            if names.insert(v.clone(), Name::Vertex(i)).is_some() {
                return Err(Error::MalformedGraph(format!("duplicate name `{v}`")));
            }
        }
        let mut es: Vec<(String, String, String)> = edges
            .iter()
            .map(|(n, s, d)| (n.as_ref().to_string(), s.as_ref().to_string(), d.as_ref().to_string()))
            .collect();
        es.sort();
        let mut edges = Vec::with_capacity(es.len());
        for (i, (name, s, d)) in es.into_iter().enumerate() {
            if !is_name(&name) {
                return Err(Error::MalformedGraph(format!("invalid edge name `{name}`")));
            }
            let vertex = |v: &str| match names.get(v) {
                Some(Name::Vertex(x)) => Ok(*x),
                _ => Err(Error::MalformedGraph(format!("edge `{name}` refers to unknown vertex `{v}`"))),
            };
            let (src, dst) = (vertex(&s)?, vertex(&d)?);
            if names.insert(name.clone(), Name::Edge(i)).is_some() {
                return Err(Error::MalformedGraph(format!("duplicate name `{name}`")));
            }
            edges.push(Edge { name, src, dst });
        }
        let mut out = vec![Vec::new(); vs.len()];
        for (i, e) in edges.iter().enumerate() {
            out[e.src].push(i);
        }
        Ok(Graph { vertices: vs, edges, out, names })
    }

    pub fn from_file(file: &GraphFile) -> Result<Self> {
        let edges: Vec<(&str, &str, &str)> =
            file.edges.iter().map(|e| (e.name.as_str(), e.src.as_str(), e.dst.as_str())).collect();
        let vertices: Vec<&str> = file.vertices.iter().map(String::as_str).collect();
        Graph::new(&vertices, &edges)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Graph::from_file(&GraphFile::from_json(text)?)
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeEntry {
                    name: e.name.clone(),
                    src: self.vertices[e.src].clone(),
                    dst: self.vertices[e.dst].clone(),
                })
                .collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn lookup(&self, name: &str) -> Option<Name> {
        self.names.get(name).copied()
    }

    /// Edges leaving `v`, in name order.
    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn is_regular(&self, v: usize) -> bool {
        !self.out[v].is_empty()
    }

    /// Vertices emitting at least one edge (all finite graphs are row-finite).
    pub fn regular_vertices(&self) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| self.is_regular(v)).collect()
    }

    pub fn sinks(&self) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| !self.is_regular(v)).collect()
    }

    /// Path from an edge sequence, checking that consecutive edges meet.
    pub fn path(&self, edges: Vec<usize>) -> Result<Path> {
        let (Some(&first), Some(&last)) = (edges.first(), edges.last()) else {
            return Err(Error::MalformedMonomial("empty edge list; use a vertex".into()));
        };
        if let Some(w) = edges.windows(2).find(|w| self.edges[w[0]].dst != self.edges[w[1]].src) {
            return Err(Error::MalformedMonomial(format!(
                "edges `{}` and `{}` do not compose",
                self.edges[w[0]].name, self.edges[w[1]].name
            )));
        }
        Ok(Path { source: self.edges[first].src, range: self.edges[last].dst, edges })
    }

    pub fn edge_path(&self, e: usize) -> Path {
        Path { source: self.edges[e].src, range: self.edges[e].dst, edges: vec![e] }
    }

    /// All paths of length at most `max_len`, ordered by length and then
    /// lexicographically by edge names. Trivial paths come first, in vertex order.
    pub fn enumerate_paths(&self, max_len: usize) -> Vec<Path> {
        let mut all: Vec<Path> = (0..self.vertex_count()).map(Path::trivial).collect();
        let mut layer: Vec<Path> = (0..self.edge_count()).map(|e| self.edge_path(e)).collect();
        for _ in 0..max_len {
            if layer.is_empty() {
                break;
            }
            let next = layer
                .iter()
                .flat_map(|p| self.out[p.range].iter().map(move |&e| p.extended(e, self.edges[e].dst)))
                .collect();
            all.append(&mut layer);
            layer = next;
        }
        all
    }

    /// Simple cycles, each reported once per base vertex on it, ordered like paths.
    pub fn simple_cycles(&self) -> Vec<Cycle> {
        let mut found = Vec::new();
        for start in 0..self.vertex_count() {
            let mut on_path = vec![false; self.vertex_count()];
            on_path[start] = true;
            let mut edges = Vec::new();
            self.cycle_search(start, start, &mut on_path, &mut edges, &mut found);
        }
        found.sort();
        found.into_iter().map(Cycle).collect()
    }

    fn cycle_search(&self, start: usize, at: usize, on_path: &mut [bool], edges: &mut Vec<usize>, found: &mut Vec<Path>) {
        for &e in &self.out[at] {
            let next = self.edges[e].dst;
            edges.push(e);
            if next == start {
                found.push(Path { source: start, range: start, edges: edges.clone() });
            } else if !on_path[next] {
                on_path[next] = true;
                self.cycle_search(start, next, on_path, edges, found);
                on_path[next] = false;
            }
            edges.pop();
        }
    }

    /// Simple cycles in which every vertex emits only the cycle's own edge.
    pub fn cycles_without_exit(&self) -> Vec<Cycle> {
        self.simple_cycles()
            .into_iter()
            .filter(|c| c.0.edges.iter().all(|&e| self.out[self.edges[e].src].len() == 1))
            .collect()
    }

    pub fn is_acyclic(&self) -> bool {
        // a simple cycle exists iff some strongly connected piece closes up;
        // the enumeration is cheap at the sizes handled here
        self.simple_cycles().is_empty()
    }

    pub fn max_cycle_length(&self) -> usize {
        self.simple_cycles().iter().map(|c| c.len()).max().unwrap_or(0)
    }

    /// Weakly connected components, each a sorted vertex list.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            let mut members = BTreeSet::new();
            comp[s] = id;
            while let Some(v) = stack.pop() {
                members.insert(v);
                for e in &self.edges {
                    let other = if e.src == v {
                        e.dst
                    } else if e.dst == v {
                        e.src
                    } else {
                        continue;
                    };
                    if comp[other] == usize::MAX {
                        comp[other] = id;
                        stack.push(other);
                    }
                }
            }
            out.push(members.into_iter().collect());
        }
        out
    }

    pub fn path_name(&self, p: &Path) -> String {
        if p.is_trivial() {
            return self.vertices[p.source].clone();
        }
        p.edges.iter().map(|&e| self.edges[e].name.as_str()).collect::<Vec<_>>().join(".")
    }
}

/// Names are identifiers: a letter or underscore, then letters, digits, `_` or `'`.
pub fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

/// A path `e₁…eₖ`, or the trivial path at a vertex when `k = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    source: usize,
    range: usize,
    edges: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Self {
        Path { source: v, range: v, edges: Vec::new() }
    }

    fn extended(&self, e: usize, dst: usize) -> Path {
        let mut edges = self.edges.clone();
        edges.push(e);
        Path { source: self.source, range: dst, edges }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_trivial()
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn range(&self) -> usize {
        self.range
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn last_edge(&self) -> Option<usize> {
        self.edges.last().copied()
    }

    /// `self · other`, defined when `range(self) = source(other)`.
    pub fn concat(&self, other: &Path) -> Option<Path> {
        if self.range != other.source {
            return None;
        }
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Some(Path { source: self.source, range: other.range, edges })
    }

    /// `q` with `self = prefix · q`, if `prefix` is a prefix of `self`.
    pub fn strip_prefix(&self, prefix: &Path) -> Option<Path> {
        if prefix.source != self.source || !self.edges.starts_with(&prefix.edges) {
            return None;
        }
        Some(Path { source: prefix.range, range: self.range, edges: self.edges[prefix.len()..].to_vec() })
    }

    /// Splits off the last edge: `self = rest · e`.
    pub fn split_last(&self, graph: &Graph) -> Option<(Path, usize)> {
        let (&e, rest) = self.edges.split_last()?;
        let src = graph.edges[e].src;
        Some((Path { source: self.source, range: src, edges: rest.to_vec() }, e))
    }

    /// `self` repeated `k` times; requires a closed path when `k > 1`.
    pub fn power(&self, k: usize) -> Path {
        let mut p = Path::trivial(self.source);
        for _ in 0..k {
            p = p.concat(self).expect("powers of a closed path");
        }
        p
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.edges
            .len()
            .cmp(&other.edges.len())
            .then_with(|| self.edges.cmp(&other.edges))
            .then_with(|| self.source.cmp(&other.source))
    }
}

/// A simple closed path of positive length.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cycle(Path);

impl Cycle {
    pub fn path(&self) -> &Path {
        &self.0
    }

    pub fn base(&self) -> usize {
        self.0.source
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

pub struct DisplayPath<'a>(pub &'a Graph, pub &'a Path);

impl fmt::Display for DisplayPath<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.path_name(self.1))
    }
}
