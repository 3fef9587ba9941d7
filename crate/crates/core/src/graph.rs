//! Immutable simple undirected graphs over dense vertex ids `0..n`.
//!
//! Everything downstream (gadget construction, factor verification, the
//! solver's cut bookkeeping) reads graphs through this module. A [`Graph`] is
//! never mutated after construction; edge deletions produce a new value.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Unordered vertex pair stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
}

impl Edge {
    /// Normalises the pair so that `u < v`. Panics on a loop.
    pub fn new(a: usize, b: usize) -> Self {
        assert_ne!(a, b, "self-loop {a}-{a}");
        if a < b {
            Edge { u: a, v: b }
        } else {
            Edge { u: b, v: a }
        }
    }

    pub fn contains(&self, x: usize) -> bool {
        self.u == x || self.v == x
    }

    /// The endpoint opposite `x`. `x` must be an endpoint.
    pub fn other(&self, x: usize) -> usize {
        debug_assert!(self.contains(x));
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.u, self.v)
    }
}

/// Sorted, duplicate-free set of vertex ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = members.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }

    pub fn range(lo: usize, hi: usize) -> Self {
        VertexSet((lo..hi).collect())
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Membership mask over `0..n`.
    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &x in &self.0 {
            m[x] = true;
        }
        m
    }

    /// `0..n` minus this set.
    pub fn complement(&self, n: usize) -> VertexSet {
        let m = self.mask(n);
        VertexSet((0..n).filter(|&x| !m[x]).collect())
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::new(iter)
    }
}

/// Set of edges, iterated in lexicographic order.
pub type EdgeSet = BTreeSet<Edge>;

/// Shortest-path length, with a distinguished value for unreachable pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(usize),
    Infinite,
}

impl Distance {
    pub fn finite(self) -> Option<usize> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }

    /// True if the distance is at least `k` (infinity counts).
    pub fn at_least(self, k: usize) -> bool {
        match self {
            Distance::Finite(d) => d >= k,
            Distance::Infinite => true,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Distance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Distance::Finite(d) => s.serialize_u64(*d as u64),
            Distance::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Which side of a bipartition an edge set covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutSide {
    /// Every vertex of `X` touches the edge set.
    Inside,
    /// Every vertex of `V \ X` touches the edge set.
    Outside,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a simple graph, rejecting loops, parallel edges and
    /// out-of-range endpoints.
    pub fn new(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut edges = Vec::new();
        for (a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::malformed(
                    0,
                    format!("edge {a}-{b} out of range for n={n}"),
                ));
            }
            if a == b {
                return Err(Error::malformed(0, format!("self-loop at {a}")));
            }
            edges.push(Edge::new(a, b));
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::malformed(0, format!("duplicate edge {}", w[0])));
        }
        Ok(Self::from_sorted_edges(n, edges))
    }

    /// `edges` must be sorted, duplicate-free and in range.
    pub(crate) fn from_sorted_edges(n: usize, edges: Vec<Edge>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        let mut deg = vec![0usize; n];
        for e in &edges {
            deg[e.u] += 1;
            deg[e.v] += 1;
        }
        let mut adj: Vec<Vec<usize>> = deg.iter().map(|&d| Vec::with_capacity(d)).collect();
        // Edges are sorted by (u, v), so pushing in order keeps every list sorted
        // for the smaller endpoint; the larger endpoint needs a final sort.
        for e in &edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { n, edges, adj }
    }

    /// Spanning subgraph on the same vertex set with exactly `edges`.
    pub fn from_edge_set(n: usize, edges: &EdgeSet) -> Self {
        Self::from_sorted_edges(n, edges.iter().copied().collect())
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| Edge { u, v }))
            .collect();
        Self::from_sorted_edges(n, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_set(&self) -> EdgeSet {
        self.edges.iter().copied().collect()
    }

    /// Sorted neighbour list of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.n && b < self.n && self.adj[a].binary_search(&b).is_ok()
    }

    /// Position of `b` in the sorted neighbour list of `a`.
    pub fn neighbor_index(&self, a: usize, b: usize) -> Option<usize> {
        self.adj[a].binary_search(&b).ok()
    }

    /// New graph keeping only the edges for which `keep` holds.
    pub fn filter_edges(&self, mut keep: impl FnMut(Edge) -> bool) -> Graph {
        let edges = self.edges.iter().copied().filter(|&e| keep(e)).collect();
        Self::from_sorted_edges(self.n, edges)
    }

    /// Open neighbourhood `N(S)`: vertices outside `S` adjacent to some member.
    pub fn neighborhood(&self, s: &VertexSet) -> VertexSet {
        let inside = s.mask(self.n);
        let mut out = vec![false; self.n];
        for v in s.iter() {
            for &w in &self.adj[v] {
                if !inside[w] {
                    out[w] = true;
                }
            }
        }
        VertexSet((0..self.n).filter(|&x| out[x]).collect())
    }

    /// Components ordered by smallest member.
    pub fn connected_components(&self) -> Vec<VertexSet> {
        let mut label = vec![usize::MAX; self.n];
        let mut comps = Vec::new();
        let mut queue = VecDeque::new();
        for s in 0..self.n {
            if label[s] != usize::MAX {
                continue;
            }
            let id = comps.len();
            label[s] = id;
            queue.push_back(s);
            let mut members = vec![s];
            while let Some(x) = queue.pop_front() {
                for &y in &self.adj[x] {
                    if label[y] == usize::MAX {
                        label[y] = id;
                        members.push(y);
                        queue.push_back(y);
                    }
                }
            }
            comps.push(VertexSet::new(members));
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.connected_components().len() == 1
    }

    /// BFS distances from `s` to every vertex.
    pub fn distances_from(&self, s: usize) -> Vec<Distance> {
        let mut dist = vec![usize::MAX; self.n];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &y in &self.adj[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist.into_iter()
            .map(|d| {
                if d == usize::MAX {
                    Distance::Infinite
                } else {
                    Distance::Finite(d)
                }
            })
            .collect()
    }

    pub fn bfs_distance(&self, u: usize, v: usize) -> Distance {
        if u == v {
            return Distance::Finite(0);
        }
        self.distances_from(u)[v]
    }

    /// Maximum pairwise distance; `Infinite` for a disconnected graph.
    pub fn diameter(&self) -> Distance {
        let mut best = Distance::Finite(0);
        for s in 0..self.n {
            let far = self
                .distances_from(s)
                .into_iter()
                .max()
                .unwrap_or(Distance::Finite(0));
            if far == Distance::Infinite {
                return far;
            }
            best = best.max(far);
        }
        best
    }

    /// Edges with exactly one endpoint in `x`.
    pub fn edge_cut(&self, x: &VertexSet) -> EdgeSet {
        let inside = x.mask(self.n);
        self.edges
            .iter()
            .copied()
            .filter(|e| inside[e.u] != inside[e.v])
            .collect()
    }

    /// Reports a side of `{X, V \ X}` all of whose vertices touch `edges`.
    /// `X` wins when both sides are covered.
    pub fn cut_covers(&self, x: &VertexSet, edges: &EdgeSet) -> CutSide {
        let mut touched = vec![false; self.n];
        for e in edges {
            touched[e.u] = true;
            touched[e.v] = true;
        }
        let inside = x.mask(self.n);
        let covers = |want: bool| {
            (0..self.n)
                .filter(|&v| inside[v] == want)
                .all(|v| touched[v])
        };
        if covers(true) {
            CutSide::Inside
        } else if covers(false) {
            CutSide::Outside
        } else {
            CutSide::Neither
        }
    }

    /// Canonical edge-list document: header `n m`, then one sorted `u v` per line.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::with_capacity(8 + self.edges.len() * 8);
        s.push_str(&format!("{} {}\n", self.n, self.edges.len()));
        for e in &self.edges {
            s.push_str(&format!("{} {}\n", e.u, e.v));
        }
        s
    }

    /// Parses an edge-list document. Lines starting with `#` are ignored.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::malformed(1, "missing header"))?;
        let (n, m) = parse_pair(hline, header)?;
        let mut seen = BTreeSet::new();
        for (lineno, line) in lines {
            let (a, b) = parse_pair(lineno, line)?;
            if a >= n || b >= n {
                return Err(Error::malformed(
                    lineno,
                    format!("vertex out of range for n={n}"),
                ));
            }
            if a == b {
                return Err(Error::malformed(lineno, format!("self-loop at {a}")));
            }
            if !seen.insert(Edge::new(a, b)) {
                return Err(Error::malformed(lineno, format!("duplicate edge {a} {b}")));
            }
        }
        if seen.len() != m {
            return Err(Error::malformed(
                hline,
                format!("header declares {m} edges, found {}", seen.len()),
            ));
        }
        Ok(Self::from_sorted_edges(n, seen.into_iter().collect()))
    }
}

fn parse_pair(lineno: usize, line: &str) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let mut next = || -> Result<usize> {
        it.next()
            .ok_or_else(|| Error::malformed(lineno, "expected two integers"))?
            .parse()
            .map_err(|e| Error::malformed(lineno, format!("{e}")))
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(Error::malformed(lineno, "trailing tokens"));
    }
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::new(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn two_triangles() -> Graph {
        Graph::new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap()
    }

    #[test]
    fn load_triangle() {
        let g = Graph::parse_edge_list("3 3\n0 1\n1 2\n0 2\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.m(), 3);
        assert_eq!(g.neighbors(1), &[0, 2]);
    }

    #[test]
    fn load_isolated() {
        let g = Graph::parse_edge_list("2 0\n").unwrap();
        assert_eq!((g.n(), g.m()), (2, 0));
    }

    #[test]
    fn load_rejects_bad_input() {
        for bad in [
            "3 2\n0 1\n0 1\n",
            "3 1\n1 1\n",
            "3 1\n0 3\n",
            "3 2\n0 1\n",
            "x 1\n",
            "",
            "3 1\n0 1 2\n",
        ] {
            assert!(
                matches!(
                    Graph::parse_edge_list(bad),
                    Err(Error::MalformedInput { .. })
                ),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn comments_are_skipped() {
        let g = Graph::parse_edge_list("# hello\n3 1\n# mid\n0 2\n").unwrap();
        assert_eq!(g.to_edge_list(), "3 1\n0 2\n");
    }

    #[test]
    fn degrees() {
        assert_eq!(Graph::complete(4).degree(0), 3);
        assert_eq!(path(3).degree(1), 2);
        assert_eq!(Graph::new(3, [(0, 1)]).unwrap().degree(2), 0);
    }

    #[test]
    fn neighborhoods() {
        let k4 = Graph::complete(4);
        assert_eq!(
            k4.neighborhood(&VertexSet::new([0])),
            VertexSet::new([1, 2, 3])
        );
        assert_eq!(
            path(4).neighborhood(&VertexSet::new([1, 2])),
            VertexSet::new([0, 3])
        );
        assert!(two_triangles()
            .neighborhood(&VertexSet::new([0, 1, 2]))
            .is_empty());
    }

    #[test]
    fn components() {
        assert_eq!(
            Graph::complete(3).connected_components(),
            vec![VertexSet::range(0, 3)]
        );
        assert_eq!(
            two_triangles().connected_components(),
            vec![VertexSet::range(0, 3), VertexSet::range(3, 6)]
        );
    }

    #[test]
    fn distances() {
        assert_eq!(path(4).bfs_distance(0, 3), Distance::Finite(3));
        assert_eq!(two_triangles().bfs_distance(0, 4), Distance::Infinite);
        assert_eq!(Graph::complete(4).bfs_distance(0, 1), Distance::Finite(1));
        assert_eq!(Graph::complete(4).bfs_distance(2, 2), Distance::Finite(0));
    }

    #[test]
    fn diameters() {
        assert_eq!(Graph::complete(5).diameter(), Distance::Finite(1));
        assert_eq!(cycle(6).diameter(), Distance::Finite(3));
        assert_eq!(two_triangles().diameter(), Distance::Infinite);
        assert_eq!(Distance::Infinite.to_string(), "inf");
    }

    #[test]
    fn cuts() {
        let tri = Graph::complete(3);
        let cut = tri.edge_cut(&VertexSet::new([0]));
        assert_eq!(
            cut,
            [Edge::new(0, 1), Edge::new(0, 2)].into_iter().collect()
        );
        assert!(two_triangles().edge_cut(&VertexSet::range(0, 3)).is_empty());
    }

    #[test]
    fn covers() {
        let star = Graph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let x = VertexSet::new([0]);
        assert_eq!(star.cut_covers(&x, &star.edge_set()), CutSide::Inside);
        let only_leaf = [Edge::new(0, 1)].into_iter().collect();
        // The centre is covered, so X wins even though leaves 2 and 3 are not.
        assert_eq!(star.cut_covers(&x, &only_leaf), CutSide::Inside);
        let path4 = path(4);
        let e: EdgeSet = [Edge::new(1, 2)].into_iter().collect();
        assert_eq!(
            path4.cut_covers(&VertexSet::new([0, 1]), &e),
            CutSide::Neither
        );
        assert_eq!(
            path4.cut_covers(
                &VertexSet::new([0, 1, 2]),
                &[Edge::new(2, 3)].into_iter().collect()
            ),
            CutSide::Outside
        );
    }

    #[test]
    fn filter_produces_new_graph() {
        let k4 = Graph::complete(4);
        let g = k4.filter_edges(|e| e != Edge::new(0, 1));
        assert_eq!(g.m(), 5);
        assert!(k4.has_edge(0, 1));
        assert!(!g.has_edge(0, 1));
    }
}
