//! Maximum-cardinality matching in general graphs.
//!
//! Edmonds' blossom search, one BFS tree per free root. Blossom bases are
//! tracked with a union-find instead of relabelling every vertex on each
//! contraction, and per-search state is reset only where it was touched, so
//! the large sparse gadget graphs built by the reductions stay cheap.

use crate::graph::{Edge, Graph};

const NONE: usize = usize::MAX;

/// A set of vertex-disjoint edges, stored sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Matching {
    pairs: Vec<Edge>,
}

impl Matching {
    /// Wraps an arbitrary list of pairs; nothing is checked (see [`verify_matching`]).
    pub fn from_pairs(pairs: impl IntoIterator<Item = Edge>) -> Self {
        let mut pairs: Vec<Edge> = pairs.into_iter().collect();
        pairs.sort_unstable();
        Matching { pairs }
    }

    fn from_mates(mate: &[usize]) -> Self {
        let pairs = mate
            .iter()
            .enumerate()
            .filter(|&(v, &w)| w != NONE && v < w)
            .map(|(v, &w)| Edge { u: v, v: w })
            .collect();
        Matching { pairs }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[Edge] {
        &self.pairs
    }

    /// Partner table over `0..n`; assumes the matching is valid.
    pub fn mates(&self, n: usize) -> Vec<Option<usize>> {
        let mut mate = vec![None; n];
        for e in &self.pairs {
            mate[e.u] = Some(e.v);
            mate[e.v] = Some(e.u);
        }
        mate
    }
}

/// Maximum-cardinality matching. Deterministic for a given graph.
pub fn max_matching(g: &Graph) -> Matching {
    let mut engine = Blossom::new(g);
    engine.greedy();
    for root in 0..g.n() {
        if engine.mate[root] == NONE {
            engine.augment_from(root);
        }
    }
    Matching::from_mates(&engine.mate)
}

/// A perfect matching if one exists.
pub fn perfect_matching(g: &Graph) -> Option<Matching> {
    if g.n() % 2 == 1 {
        return None;
    }
    let mut engine = Blossom::new(g);
    engine.greedy();
    for root in 0..g.n() {
        // A vertex with no augmenting path stays exposed in every maximum
        // matching, so the first failure settles it.
        if engine.mate[root] == NONE && !engine.augment_from(root) {
            return None;
        }
    }
    Some(Matching::from_mates(&engine.mate))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchingViolation {
    NotAnEdge(Edge),
    VertexRepeated(usize),
    NotPerfect { matched: usize, n: usize },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MatchingReport {
    pub violations: Vec<MatchingViolation>,
}

impl MatchingReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that `m` is a matching of `g` (and perfect, if asked).
pub fn verify_matching(g: &Graph, m: &Matching, perfect: bool) -> MatchingReport {
    let mut violations = Vec::new();
    let mut seen = vec![false; g.n()];
    for &e in m.pairs() {
        if !g.has_edge(e.u, e.v) {
            violations.push(MatchingViolation::NotAnEdge(e));
        }
        for x in [e.u, e.v] {
            if x < g.n() {
                if seen[x] {
                    violations.push(MatchingViolation::VertexRepeated(x));
                }
                seen[x] = true;
            }
        }
    }
    if perfect && 2 * m.len() != g.n() {
        violations.push(MatchingViolation::NotPerfect {
            matched: 2 * m.len(),
            n: g.n(),
        });
    }
    MatchingReport { violations }
}

struct Blossom<'a> {
    g: &'a Graph,
    mate: Vec<usize>,
    parent: Vec<usize>,
    even: Vec<bool>,
    uf: Vec<usize>,
    base_label: Vec<usize>,
    stamp: Vec<u32>,
    clock: u32,
    touched: Vec<usize>,
    queue: Vec<usize>,
}

impl<'a> Blossom<'a> {
    fn new(g: &'a Graph) -> Self {
        let n = g.n();
        Blossom {
            g,
            mate: vec![NONE; n],
            parent: vec![NONE; n],
            even: vec![false; n],
            uf: (0..n).collect(),
            base_label: (0..n).collect(),
            stamp: vec![0; n],
            clock: 0,
            touched: Vec::new(),
            queue: Vec::new(),
        }
    }

    /// Low-degree-first greedy seed.
    fn greedy(&mut self) {
        let mut order: Vec<usize> = (0..self.g.n()).collect();
        order.sort_by_key(|&v| self.g.degree(v));
        for v in order {
            if self.mate[v] != NONE {
                continue;
            }
            let pick = self
                .g
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&w| self.mate[w] == NONE)
                .min_by_key(|&w| self.g.degree(w));
            if let Some(w) = pick {
                self.mate[v] = w;
                self.mate[w] = v;
            }
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.uf[r] != r {
            r = self.uf[r];
        }
        let mut y = x;
        while self.uf[y] != r {
            let next = self.uf[y];
            self.uf[y] = r;
            y = next;
        }
        r
    }

    fn base(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.base_label[r]
    }

    fn touch(&mut self, x: usize) {
        self.touched.push(x);
    }

    fn reset(&mut self) {
        for &x in &self.touched {
            self.parent[x] = NONE;
            self.even[x] = false;
            self.uf[x] = x;
            self.base_label[x] = x;
        }
        self.touched.clear();
        self.queue.clear();
    }

    fn lca(&mut self, mut a: usize, mut b: usize) -> usize {
        self.clock = self.clock.wrapping_add(1);
        if self.clock == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.clock = 1;
        }
        loop {
            a = self.base(a);
            self.stamp[a] = self.clock;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base(b);
            if self.stamp[b] == self.clock {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    /// Walks from `v` up to blossom base `b`, redirecting parents so that the
    /// odd vertices on the path can later be traversed in either direction.
    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize, bases: &mut Vec<usize>) {
        while self.base(v) != b {
            let m = self.mate[v];
            bases.push(self.find(v));
            bases.push(self.find(m));
            self.parent[v] = child;
            self.touch(v);
            if !self.even[m] {
                self.even[m] = true;
                self.touch(m);
                self.queue.push(m);
            }
            child = m;
            v = self.parent[m];
        }
    }

    fn contract(&mut self, v: usize, w: usize) {
        let b = self.lca(v, w);
        let mut bases = Vec::new();
        self.mark_path(v, b, w, &mut bases);
        self.mark_path(w, b, v, &mut bases);
        let root = self.find(b);
        for x in bases {
            let rx = self.find(x);
            if rx != root {
                self.uf[rx] = root;
                self.touch(rx);
            }
        }
        self.base_label[root] = b;
        self.touch(root);
    }

    /// Grows an alternating tree from `root`; augments and returns true on success.
    fn augment_from(&mut self, root: usize) -> bool {
        self.reset();
        self.even[root] = true;
        self.touch(root);
        self.queue.push(root);
        let mut head = 0;
        while head < self.queue.len() {
            let v = self.queue[head];
            head += 1;
            for i in 0..self.g.neighbors(v).len() {
                let w = self.g.neighbors(v)[i];
                if self.mate[v] == w || self.find(v) == self.find(w) {
                    continue;
                }
                let w_even =
                    w == root || (self.mate[w] != NONE && self.parent[self.mate[w]] != NONE);
                if w_even {
                    self.contract(v, w);
                } else if self.parent[w] == NONE {
                    self.parent[w] = v;
                    self.touch(w);
                    if self.mate[w] == NONE {
                        self.flip(w);
                        return true;
                    }
                    let m = self.mate[w];
                    self.even[m] = true;
                    self.touch(m);
                    self.queue.push(m);
                }
            }
        }
        false
    }

    fn flip(&mut self, mut v: usize) {
        while v != NONE {
            let pv = self.parent[v];
            let next = self.mate[pv];
            self.mate[v] = pv;
            self.mate[pv] = v;
            v = next;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn petersen() -> Graph {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::new(10, e).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn cliques() {
        assert_eq!(max_matching(&Graph::complete(4)).len(), 2);
        assert_eq!(max_matching(&Graph::complete(3)).len(), 1);
        assert!(perfect_matching(&Graph::complete(3)).is_none());
    }

    #[test]
    fn petersen_is_perfect() {
        let g = petersen();
        let m = max_matching(&g);
        assert_eq!(m.len(), 5);
        assert!(verify_matching(&g, &m, true).is_valid());
    }

    #[test]
    fn cycles() {
        let c6 = cycle(6);
        let m = perfect_matching(&c6).unwrap();
        assert_eq!(m.len(), 3);
        assert!(verify_matching(&c6, &m, true).is_valid());
        let two_c4 = Graph::new(
            8,
            [
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 0),
                (4, 5),
                (5, 6),
                (6, 7),
                (7, 4),
            ],
        )
        .unwrap();
        assert_eq!(perfect_matching(&two_c4).unwrap().len(), 4);
    }

    #[test]
    fn blossom_needed() {
        // Triangle with a pendant path: greedy alone can get stuck.
        let g = Graph::new(6, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (0, 5)]).unwrap();
        let m = max_matching(&g);
        assert_eq!(m.len(), 3);
        assert!(verify_matching(&g, &m, true).is_valid());
    }

    #[test]
    fn verification_reports() {
        let k4 = Graph::complete(4);
        let ok = Matching::from_pairs([Edge::new(0, 1), Edge::new(2, 3)]);
        assert!(verify_matching(&k4, &ok, true).is_valid());
        let rep = verify_matching(
            &k4,
            &Matching::from_pairs([Edge::new(0, 1), Edge::new(1, 2)]),
            false,
        );
        assert_eq!(rep.violations, vec![MatchingViolation::VertexRepeated(1)]);
        let rep = verify_matching(&k4, &Matching::from_pairs([Edge::new(0, 1)]), true);
        assert_eq!(
            rep.violations,
            vec![MatchingViolation::NotPerfect { matched: 2, n: 4 }]
        );
        let path = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        let rep = verify_matching(&path, &Matching::from_pairs([Edge::new(0, 2)]), false);
        assert_eq!(
            rep.violations,
            vec![MatchingViolation::NotAnEdge(Edge::new(0, 2))]
        );
    }

    #[test]
    fn deterministic() {
        let g = petersen();
        assert_eq!(max_matching(&g), max_matching(&g));
    }
}
