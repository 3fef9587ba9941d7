//! f-factors in which two chosen vertices end up at distance at least 3.
//!
//! [`redn_pm`] extends Tutte's gadget: for every common neighbour `l` of `u`
//! and `v`, one slack vertex of `l` keeps only its edges to the two ports
//! serving `u` and `v`. That slack vertex must then absorb one of those two
//! ports, so no perfect matching can route both `u-l` and `l-v` into the
//! factor.

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeSet, Graph};
use crate::matching::perfect_matching;
use crate::tutte::{extract_factor, gadget_edges, DegreeSpec, Factor, GadgetGraph, GadgetMap};

/// A walk `u - a - b - v` of three host edges on four distinct vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathConstraint {
    pub u: usize,
    pub a: usize,
    pub b: usize,
    pub v: usize,
}

impl PathConstraint {
    pub fn new(g: &Graph, u: usize, a: usize, b: usize, v: usize) -> Result<Self> {
        let ids = [u, a, b, v];
        if ids.iter().any(|&x| x >= g.n()) {
            return Err(Error::PreconditionViolated(format!(
                "path {ids:?} leaves the graph"
            )));
        }
        for i in 0..4 {
            for j in i + 1..4 {
                if ids[i] == ids[j] {
                    return Err(Error::PreconditionViolated(format!(
                        "path {ids:?} repeats a vertex"
                    )));
                }
            }
        }
        for (x, y) in [(u, a), (a, b), (b, v)] {
            if !g.has_edge(x, y) {
                return Err(Error::PreconditionViolated(format!(
                    "{{{x},{y}}} is not an edge"
                )));
            }
        }
        Ok(PathConstraint { u, a, b, v })
    }

    pub fn vertices(&self) -> [usize; 4] {
        [self.u, self.a, self.b, self.v]
    }

    pub fn edges(&self) -> [Edge; 3] {
        [
            Edge::new(self.u, self.a),
            Edge::new(self.a, self.b),
            Edge::new(self.b, self.v),
        ]
    }
}

/// Gadget graph for the distance-constrained problem, together with the host
/// it was built on (`g` minus the `{u, v}` edge).
#[derive(Debug, Clone)]
pub struct ConstrainedGadget {
    pub host: Graph,
    pub gadget: GadgetGraph,
    pub map: GadgetMap,
}

/// Builds the constrained reduction for `(g, f, u, v)`.
///
/// Fails with [`Error::InfeasibleConstraint`] when some common neighbour of
/// `u` and `v` has no slack, since then both of its edges to `u` and `v` lie
/// in every f-factor.
pub fn redn_pm(g: &Graph, f: &DegreeSpec, u: usize, v: usize) -> Result<ConstrainedGadget> {
    if u == v || u >= g.n() || v >= g.n() {
        return Err(Error::PreconditionViolated(format!(
            "bad endpoint pair ({u}, {v})"
        )));
    }
    let uv = Edge::new(u, v);
    let host = g.filter_edges(|e| e != uv);
    f.check_against(&host)?;

    let common: Vec<usize> = host
        .neighbors(u)
        .iter()
        .copied()
        .filter(|&l| host.has_edge(l, v))
        .collect();
    let (mut edges, map) = gadget_edges(&host, f);

    let mut removed: Vec<Edge> = Vec::new();
    for &l in &common {
        let slack = map.b_block(l);
        if slack.is_empty() {
            return Err(Error::InfeasibleConstraint { vertex: l });
        }
        let x = map.port(l, host.neighbor_index(l, u).expect("u adjacent to l"));
        let y = map.port(l, host.neighbor_index(l, v).expect("v adjacent to l"));
        let z = slack.start;
        removed.extend(
            map.a_block(l)
                .filter(|&w| w != x && w != y)
                .map(|w| Edge::new(w, z)),
        );
    }
    if !removed.is_empty() {
        removed.sort_unstable();
        edges.retain(|e| removed.binary_search(e).is_err());
    }
    let gadget = GadgetGraph::from_graph(Graph::from_sorted_edges(map.gadget_order(), edges));
    Ok(ConstrainedGadget { host, gadget, map })
}

/// An f-factor of `g` without the edge `{u, v}` in which `u` and `v` are at
/// distance at least 3, or `None`.
pub fn distance_constrained_factor(
    g: &Graph,
    f: &DegreeSpec,
    u: usize,
    v: usize,
) -> Result<Option<Factor>> {
    let built = match redn_pm(g, f, u, v) {
        Ok(b) => b,
        Err(Error::InfeasibleConstraint { .. } | Error::InvalidDegreeSpec(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let Some(m) = perfect_matching(built.gadget.graph()) else {
        return Ok(None);
    };
    let factor = extract_factor(&built.host, f, &built.map, &m)?;
    // Same edges and degrees, now viewed as a factor of the unmodified graph.
    Ok(Some(Factor::from_parts_unchecked(
        g.n(),
        factor.edges().clone(),
        f.clone(),
    )))
}

/// An f-factor of `g` containing `p` as a shortest `u`-`v` path, so that
/// `u` and `v` are at distance exactly 3, or `None`.
pub fn path_constrained_factor(
    g: &Graph,
    f: &DegreeSpec,
    p: &PathConstraint,
) -> Result<Option<Factor>> {
    let reduced = reduce_for_path(f, p).ok_or_else(|| {
        Error::PreconditionViolated(format!("f too small on path {:?}", p.vertices()))
    })?;
    let on_path = p.vertices();
    let inner = g.filter_edges(|e| !(on_path.contains(&e.u) && on_path.contains(&e.v)));
    let Some(rest) = distance_constrained_factor(&inner, &reduced, p.u, p.v)? else {
        return Ok(None);
    };
    let mut edges: EdgeSet = rest.edges().clone();
    edges.extend(p.edges());
    let factor = Factor::new(g, edges, f.clone())
        .map_err(|e| Error::InternalInconsistency(format!("path-constrained factor: {e}")))?;
    Ok(Some(factor))
}

fn reduce_for_path(f: &DegreeSpec, p: &PathConstraint) -> Option<DegreeSpec> {
    f.reduced(p.u, 1)?
        .reduced(p.v, 1)?
        .reduced(p.a, 2)?
        .reduced(p.b, 2)
}
