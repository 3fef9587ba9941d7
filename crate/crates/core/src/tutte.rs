//! Tutte's reduction from f-factors to perfect matchings.
//!
//! Each vertex `x` of the host graph becomes a gadget: an A-block of `d(x)`
//! ports, one per incident edge, and a B-block of `e(x) = d(x) - f(x)` slack
//! vertices joined completely to the A-block. Every host edge `{q, w}` becomes
//! one edge between the port of `q` reserved for `w` and the port of `w`
//! reserved for `q`. A perfect matching leaves exactly `f(x)` ports of each
//! gadget matched across, and those cross edges are the factor.
//!
//! Layout is arithmetic: gadgets follow vertex order, A-block before B-block,
//! and the k-th port of `x` serves the k-th neighbour of `x` in sorted order.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeSet, Graph, VertexSet};
use crate::matching::{perfect_matching, Matching};

/// Target degree per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DegreeSpec {
    targets: Vec<usize>,
}

impl DegreeSpec {
    pub fn new(targets: Vec<usize>) -> Self {
        DegreeSpec { targets }
    }

    pub fn uniform(n: usize, k: usize) -> Self {
        DegreeSpec {
            targets: vec![k; n],
        }
    }

    /// Builds a spec and checks it against `g` in one step.
    pub fn for_graph(g: &Graph, targets: Vec<usize>) -> Result<Self> {
        let spec = DegreeSpec { targets };
        spec.check_against(g)?;
        Ok(spec)
    }

    /// Length matches `g` and `f(v) <= d(v)` everywhere.
    pub fn check_against(&self, g: &Graph) -> Result<()> {
        if self.targets.len() != g.n() {
            return Err(Error::InvalidDegreeSpec(format!(
                "{} targets for {} vertices",
                self.targets.len(),
                g.n()
            )));
        }
        if let Some(v) = (0..g.n()).find(|&v| self.targets[v] > g.degree(v)) {
            return Err(Error::InvalidDegreeSpec(format!(
                "f({v}) = {} exceeds degree {}",
                self.targets[v],
                g.degree(v)
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn get(&self, v: usize) -> usize {
        self.targets[v]
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn min(&self) -> usize {
        self.targets.iter().copied().min().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.targets.iter().sum()
    }

    /// Copy with `f(v)` lowered by `by`; `None` if that would go negative.
    pub fn reduced(&self, v: usize, by: usize) -> Option<Self> {
        let mut targets = self.targets.clone();
        targets[v] = targets[v].checked_sub(by)?;
        Some(DegreeSpec { targets })
    }

    /// One decimal per line, line `i` holding `f(i)`.
    pub fn to_text(&self) -> String {
        self.targets.iter().map(|t| format!("{t}\n")).collect()
    }

    /// Parses the one-value-per-line format. `#` comment lines and blank
    /// lines are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut targets = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let t = line
                .parse()
                .map_err(|e| Error::malformed(i + 1, format!("bad f value {line:?}: {e}")))?;
            targets.push(t);
        }
        Ok(DegreeSpec { targets })
    }
}

/// The auxiliary graph `H` of the reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetGraph {
    graph: Graph,
}

impl GadgetGraph {
    pub(crate) fn from_graph(graph: Graph) -> Self {
        GadgetGraph { graph }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }
}

/// Where each host vertex and host edge lives inside the gadget graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetMap {
    offset: Vec<usize>,
    degree: Vec<usize>,
    slack: Vec<usize>,
    /// Host edges in lexicographic order, each with its cross edge in `H`.
    cross: Vec<(Edge, Edge)>,
    total: usize,
}

impl GadgetMap {
    fn layout(g: &Graph, f: &DegreeSpec) -> Self {
        let n = g.n();
        let mut offset = Vec::with_capacity(n);
        let mut degree = Vec::with_capacity(n);
        let mut slack = Vec::with_capacity(n);
        let mut next = 0;
        for x in 0..n {
            let d = g.degree(x);
            let e = d - f.get(x);
            offset.push(next);
            degree.push(d);
            slack.push(e);
            next += d + e;
        }
        let cross = g
            .edges()
            .iter()
            .map(|&e| {
                let pu = offset[e.u] + g.neighbor_index(e.u, e.v).expect("edge in adjacency");
                let pv = offset[e.v] + g.neighbor_index(e.v, e.u).expect("edge in adjacency");
                (e, Edge::new(pu, pv))
            })
            .collect();
        GadgetMap {
            offset,
            degree,
            slack,
            cross,
            total: next,
        }
    }

    /// Number of vertices of `H`.
    pub fn gadget_order(&self) -> usize {
        self.total
    }

    /// Port vertices of `x`, one per incident host edge.
    pub fn a_block(&self, x: usize) -> Range<usize> {
        self.offset[x]..self.offset[x] + self.degree[x]
    }

    /// Slack vertices of `x`; empty when `f(x) = d(x)`.
    pub fn b_block(&self, x: usize) -> Range<usize> {
        let start = self.offset[x] + self.degree[x];
        start..start + self.slack[x]
    }

    /// The port of `x` serving its `k`-th neighbour in sorted order.
    pub fn port(&self, x: usize, k: usize) -> usize {
        debug_assert!(k < self.degree[x]);
        self.offset[x] + k
    }

    /// Cross edge of `H` representing host edge `e`.
    pub fn cross_edge(&self, e: Edge) -> Option<Edge> {
        self.cross
            .binary_search_by(|(host, _)| host.cmp(&e))
            .ok()
            .map(|i| self.cross[i].1)
    }

    /// `(host edge, cross edge)` pairs in host-edge order.
    pub fn cross_edges(&self) -> &[(Edge, Edge)] {
        &self.cross
    }
}

/// Gadget edges before any deletions, sorted.
pub(crate) fn gadget_edges(g: &Graph, f: &DegreeSpec) -> (Vec<Edge>, GadgetMap) {
    let map = GadgetMap::layout(g, f);
    let mut edges = Vec::with_capacity(
        map.cross.len()
            + (0..g.n())
                .map(|x| map.degree[x] * map.slack[x])
                .sum::<usize>(),
    );
    for x in 0..g.n() {
        for a in map.a_block(x) {
            for b in map.b_block(x) {
                edges.push(Edge { u: a, v: b });
            }
        }
    }
    edges.extend(map.cross.iter().map(|&(_, c)| c));
    edges.sort_unstable();
    (edges, map)
}

/// Builds Tutte's gadget graph for `(g, f)`.
pub fn build_gadget(g: &Graph, f: &DegreeSpec) -> Result<(GadgetGraph, GadgetMap)> {
    f.check_against(g)?;
    let (edges, map) = gadget_edges(g, f);
    let graph = Graph::from_sorted_edges(map.total, edges);
    Ok((GadgetGraph { graph }, map))
}

/// Spanning subgraph of a host graph whose degrees equal a [`DegreeSpec`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factor {
    n: usize,
    edges: EdgeSet,
    spec: DegreeSpec,
}

impl Factor {
    /// Checks `edges ⊆ E(host)` and `d(v) = f(v)` for all `v`.
    pub fn new(host: &Graph, edges: EdgeSet, spec: DegreeSpec) -> Result<Self> {
        if spec.len() != host.n() {
            return Err(Error::PreconditionViolated(
                "spec length differs from host order".into(),
            ));
        }
        if let Some(e) = edges.iter().find(|e| !host.has_edge(e.u, e.v)) {
            return Err(Error::PreconditionViolated(format!(
                "{e} is not a host edge"
            )));
        }
        let deg = degrees_of(host.n(), &edges);
        if let Some(v) = (0..host.n()).find(|&v| deg[v] != spec.get(v)) {
            return Err(Error::PreconditionViolated(format!(
                "vertex {v} has degree {} but f = {}",
                deg[v],
                spec.get(v)
            )));
        }
        Ok(Factor {
            n: host.n(),
            edges,
            spec,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &EdgeSet {
        &self.edges
    }

    pub fn spec(&self) -> &DegreeSpec {
        &self.spec
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.edges.contains(&e)
    }

    /// The factor as a standalone graph on the host's vertex set.
    pub fn to_graph(&self) -> Graph {
        Graph::from_edge_set(self.n, &self.edges)
    }

    pub fn components(&self) -> Vec<VertexSet> {
        self.to_graph().connected_components()
    }

    pub fn is_connected(&self) -> bool {
        self.to_graph().is_connected()
    }

    pub(crate) fn from_parts_unchecked(n: usize, edges: EdgeSet, spec: DegreeSpec) -> Self {
        Factor { n, edges, spec }
    }
}

pub(crate) fn degrees_of(n: usize, edges: &EdgeSet) -> Vec<usize> {
    let mut deg = vec![0; n];
    for e in edges {
        deg[e.u] += 1;
        deg[e.v] += 1;
    }
    deg
}

/// Pulls the f-factor of `g` back out of a perfect matching of its gadget graph.
pub fn extract_factor(g: &Graph, f: &DegreeSpec, map: &GadgetMap, m: &Matching) -> Result<Factor> {
    let mate = m.mates(map.gadget_order());
    let edges: EdgeSet = map
        .cross_edges()
        .iter()
        .filter(|(_, c)| mate[c.u] == Some(c.v))
        .map(|&(host, _)| host)
        .collect();
    Factor::new(g, edges, f.clone())
        .map_err(|e| Error::InternalInconsistency(format!("pulled-back factor: {e}")))
}

/// Tutte's f-factor algorithm. `None` when no f-factor exists, including when
/// `f` exceeds some degree.
pub fn f_factor(g: &Graph, f: &DegreeSpec) -> Option<Factor> {
    let (gadget, map) = build_gadget(g, f).ok()?;
    let m = perfect_matching(gadget.graph())?;
    Some(extract_factor(g, f, &map, &m).expect("perfect matching of the gadget yields an f-factor"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn c4_gadget_is_a_perfect_matching() {
        let g = cycle(4);
        let (h, map) = build_gadget(&g, &DegreeSpec::uniform(4, 2)).unwrap();
        assert_eq!(h.graph().n(), 8);
        assert_eq!(h.graph().m(), 4);
        assert!(h.graph().degrees().iter().all(|&d| d == 1));
        for x in 0..4 {
            assert!(map.b_block(x).is_empty());
        }
        let factor = f_factor(&g, &DegreeSpec::uniform(4, 2)).unwrap();
        assert_eq!(factor.edges(), &g.edge_set());
    }

    #[test]
    fn k4_gadget_shape() {
        let g = Graph::complete(4);
        let (h, map) = build_gadget(&g, &DegreeSpec::uniform(4, 2)).unwrap();
        assert_eq!(h.graph().n(), 16);
        // K_{1,3} per vertex plus 6 cross edges.
        assert_eq!(h.graph().m(), 4 * 3 + 6);
        assert_eq!(map.a_block(1), 4..7);
        assert_eq!(map.b_block(1), 7..8);
        // Vertex 1's neighbours are [0, 2, 3]; port 0 of vertex 1 serves 0.
        assert_eq!(map.cross_edge(Edge::new(0, 1)), Some(Edge::new(0, 4)));
    }

    #[test]
    fn single_edge() {
        let g = Graph::new(2, [(0, 1)]).unwrap();
        let (h, _) = build_gadget(&g, &DegreeSpec::uniform(2, 1)).unwrap();
        assert_eq!(h.graph().edges(), &[Edge::new(0, 1)]);
        let factor = f_factor(&g, &DegreeSpec::uniform(2, 1)).unwrap();
        assert_eq!(factor.edges().len(), 1);
    }

    #[test]
    fn k4_factors() {
        let g = Graph::complete(4);
        let two = f_factor(&g, &DegreeSpec::uniform(4, 2)).unwrap();
        assert_eq!(two.edges().len(), 4);
        assert!(two.is_connected());
        let three = f_factor(&g, &DegreeSpec::uniform(4, 3)).unwrap();
        assert_eq!(three.edges(), &g.edge_set());
    }

    #[test]
    fn star_has_no_2_factor() {
        let star = Graph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(f_factor(&star, &DegreeSpec::uniform(4, 2)).is_none());
        assert!(matches!(
            DegreeSpec::for_graph(&star, vec![2; 4]),
            Err(Error::InvalidDegreeSpec(_))
        ));
    }

    #[test]
    fn zero_targets_give_empty_factor() {
        let g = Graph::complete(5);
        let f = f_factor(&g, &DegreeSpec::uniform(5, 0)).unwrap();
        assert!(f.edges().is_empty());
    }

    #[test]
    fn factor_rejects_wrong_degrees() {
        let g = Graph::complete(3);
        let edges: EdgeSet = [Edge::new(0, 1)].into_iter().collect();
        assert!(Factor::new(&g, edges, DegreeSpec::uniform(3, 1)).is_err());
    }

    #[test]
    fn extract_rejects_non_perfect_matching() {
        let g = Graph::complete(4);
        let f = DegreeSpec::uniform(4, 2);
        let (_, map) = build_gadget(&g, &f).unwrap();
        let err = extract_factor(&g, &f, &map, &Matching::default()).unwrap_err();
        assert!(matches!(err, Error::InternalInconsistency(_)));
    }

    #[test]
    fn spec_text_round_trip() {
        let f = DegreeSpec::new(vec![3, 0, 12]);
        assert_eq!(f.to_text(), "3\n0\n12\n");
        assert_eq!(DegreeSpec::parse(&f.to_text()).unwrap(), f);
        assert!(DegreeSpec::parse("1\n-2\n").is_err());
    }
}
