//! Red/blue edge colorings, alternating circuits and switching.
//!
//! Coloring the symmetric difference of two factors with the same targets
//! (edges only in the first red, edges only in the second blue) gives a
//! coloring with equal red and blue degree at every vertex. Such a coloring
//! splits into closed trails whose colors alternate, and removing the red
//! edges of one trail from the first factor while adding its blue edges
//! yields another factor with the same degrees.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeSet, Graph, VertexSet};
use crate::tutte::{degrees_of, f_factor, DegreeSpec, Factor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Color {
    Red,
    Blue,
}

impl Color {
    pub fn flip(self) -> Color {
        match self {
            Color::Red => Color::Blue,
            Color::Blue => Color::Red,
        }
    }
}

/// Disjoint red and blue edge sets over `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeColoring {
    n: usize,
    red: EdgeSet,
    blue: EdgeSet,
}

impl EdgeColoring {
    pub fn new(n: usize, red: EdgeSet, blue: EdgeSet) -> Result<Self> {
        if let Some(e) = red.intersection(&blue).next() {
            return Err(Error::PreconditionViolated(format!(
                "edge {e} is both red and blue"
            )));
        }
        if let Some(e) = red.iter().chain(&blue).find(|e| e.v >= n) {
            return Err(Error::PreconditionViolated(format!(
                "edge {e} out of range"
            )));
        }
        Ok(EdgeColoring { n, red, blue })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn red(&self) -> &EdgeSet {
        &self.red
    }

    pub fn blue(&self) -> &EdgeSet {
        &self.blue
    }

    pub fn is_empty(&self) -> bool {
        self.red.is_empty() && self.blue.is_empty()
    }

    pub fn red_degrees(&self) -> Vec<usize> {
        degrees_of(self.n, &self.red)
    }

    pub fn blue_degrees(&self) -> Vec<usize> {
        degrees_of(self.n, &self.blue)
    }

    fn first_imbalance(&self) -> Option<usize> {
        let (r, b) = (self.red_degrees(), self.blue_degrees());
        (0..self.n).find(|&v| r[v] != b[v])
    }

    fn require_equitable(&self) -> Result<()> {
        match self.first_imbalance() {
            Some(vertex) => Err(Error::NotEquitable { vertex }),
            None => Ok(()),
        }
    }
}

/// `d_R(v) = d_B(v)` at every vertex.
pub fn is_equitable(c: &EdgeColoring) -> bool {
    c.first_imbalance().is_none()
}

/// Closed trail `v_0 v_1 ... v_{k-1} v_0` whose `i`-th edge joins `v_i` to
/// `v_{i+1 mod k}` and has color `colors[i]`; consecutive colors differ.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AlternatingCircuit {
    vertices: Vec<usize>,
    colors: Vec<Color>,
}

impl AlternatingCircuit {
    /// Validates alternation (cyclically) and that no edge repeats.
    pub fn new(vertices: Vec<usize>, colors: Vec<Color>) -> Result<Self> {
        let k = vertices.len();
        if colors.len() != k {
            return Err(Error::PreconditionViolated(
                "one color per edge required".into(),
            ));
        }
        if k == 0 {
            return Ok(AlternatingCircuit::default());
        }
        if k % 2 == 1 || (0..k).any(|i| colors[i] == colors[(i + 1) % k]) {
            return Err(Error::PreconditionViolated(
                "colors do not alternate".into(),
            ));
        }
        let mut seen = BTreeSet::new();
        for i in 0..k {
            let (a, b) = (vertices[i], vertices[(i + 1) % k]);
            if a == b || !seen.insert(Edge::new(a, b)) {
                return Err(Error::PreconditionViolated(format!(
                    "edge {a}-{b} is a loop or repeats"
                )));
            }
        }
        Ok(AlternatingCircuit { vertices, colors })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn colored_edges(&self) -> impl Iterator<Item = (Edge, Color)> + '_ {
        let k = self.vertices.len();
        (0..k).map(move |i| {
            (
                Edge::new(self.vertices[i], self.vertices[(i + 1) % k]),
                self.colors[i],
            )
        })
    }

    pub fn red(&self) -> EdgeSet {
        self.colored_edges()
            .filter(|(_, c)| *c == Color::Red)
            .map(|(e, _)| e)
            .collect()
    }

    pub fn blue(&self) -> EdgeSet {
        self.colored_edges()
            .filter(|(_, c)| *c == Color::Blue)
            .map(|(e, _)| e)
            .collect()
    }

    pub fn edge_set(&self) -> EdgeSet {
        self.colored_edges().map(|(e, _)| e).collect()
    }

    /// Whether some edge has exactly one endpoint in `x`.
    pub fn crosses(&self, x: &VertexSet) -> bool {
        self.colored_edges()
            .any(|(e, _)| x.contains(e.u) != x.contains(e.v))
    }

    /// Same trail with red and blue exchanged.
    pub fn swapped(&self) -> AlternatingCircuit {
        AlternatingCircuit {
            vertices: self.vertices.clone(),
            colors: self.colors.iter().map(|c| c.flip()).collect(),
        }
    }

    /// Per-vertex `(red, blue)` degrees over `0..n`.
    pub fn color_degrees(&self, n: usize) -> Vec<(usize, usize)> {
        let mut d = vec![(0, 0); n];
        for (e, c) in self.colored_edges() {
            for x in [e.u, e.v] {
                match c {
                    Color::Red => d[x].0 += 1,
                    Color::Blue => d[x].1 += 1,
                }
            }
        }
        d
    }

    /// Cyclic sub-trail of edges `from..to` (indices mod len).
    fn arc(&self, from: usize, to: usize) -> AlternatingCircuit {
        let k = self.len();
        let count = (to + k - from) % k;
        let idx = (0..count).map(|t| (from + t) % k);
        AlternatingCircuit {
            vertices: idx.clone().map(|i| self.vertices[i]).collect(),
            colors: idx.map(|i| self.colors[i]).collect(),
        }
    }
}

/// Colors `E(a) \ E(b)` red and `E(b) \ E(a)` blue.
pub fn color_difference(a: &Factor, b: &Factor) -> Result<EdgeColoring> {
    if a.n() != b.n() || a.spec() != b.spec() {
        return Err(Error::PreconditionViolated(
            "factors have different targets".into(),
        ));
    }
    let red = a.edges().difference(b.edges()).copied().collect();
    let blue = b.edges().difference(a.edges()).copied().collect();
    EdgeColoring::new(a.n(), red, blue)
}

/// Splits an equitable coloring into edge-disjoint alternating circuits
/// covering every colored edge.
///
/// Each circuit starts at the lowest vertex with a remaining red edge, leaves
/// on red, always continues on the other color through the lowest available
/// neighbour, and closes the first time it re-enters the start on blue.
pub fn decompose_circuits(c: &EdgeColoring) -> Result<Vec<AlternatingCircuit>> {
    c.require_equitable()?;
    let n = c.n;
    // open[v][0] = red neighbours, open[v][1] = blue neighbours
    let mut open: Vec<[BTreeSet<usize>; 2]> = vec![[BTreeSet::new(), BTreeSet::new()]; n];
    for (set, slot) in [(&c.red, 0), (&c.blue, 1)] {
        for e in set {
            open[e.u][slot].insert(e.v);
            open[e.v][slot].insert(e.u);
        }
    }
    let slot = |col: Color| if col == Color::Red { 0 } else { 1 };
    let mut circuits = Vec::new();
    let mut start = 0;
    while start < n {
        if open[start][0].is_empty() {
            start += 1;
            continue;
        }
        let mut vertices = Vec::new();
        let mut colors = Vec::new();
        let mut at = start;
        let mut want = Color::Red;
        loop {
            let next = *open[at][slot(want)].iter().next().ok_or_else(|| {
                Error::InternalInconsistency(format!("alternating walk stuck at {at}"))
            })?;
            open[at][slot(want)].remove(&next);
            open[next][slot(want)].remove(&at);
            vertices.push(at);
            colors.push(want);
            at = next;
            want = want.flip();
            if at == start && want == Color::Red {
                break;
            }
        }
        circuits.push(AlternatingCircuit { vertices, colors });
    }
    Ok(circuits)
}

/// A subset-minimal alternating circuit of `c`, crossing `cut` if one is given.
///
/// The first qualifying circuit of [`decompose_circuits`] is shrunk until no
/// proper subset of its edges is equitable. Cheap splits at repeated
/// vertices are tried first; when none applies, a proper equitable subset is
/// searched for as a degree-constrained subgraph problem on the circuit's own
/// edges. When `cut` is given the kept piece always contains a cut edge, which
/// is possible because a piece and its complement are both equitable.
pub fn minimal_circuit(
    c: &EdgeColoring,
    cut: Option<&VertexSet>,
) -> Result<Option<AlternatingCircuit>> {
    let circuits = decompose_circuits(c)?;
    let Some(mut current) = circuits
        .into_iter()
        .find(|t| cut.is_none_or(|x| t.crosses(x)))
    else {
        return Ok(None);
    };
    loop {
        if let Some(piece) = split_at_repeat(&current, cut) {
            current = piece;
            continue;
        }
        match proper_equitable_subset(&current, c.n)? {
            Some(piece) => current = pick_piece(&current, piece, cut, c.n)?,
            None => return Ok(Some(current)),
        }
    }
}

/// Splits the trail at a repeated vertex when one of the two arcs closes up
/// alternately, keeping the piece that still crosses `cut` (else the shorter).
fn split_at_repeat(t: &AlternatingCircuit, cut: Option<&VertexSet>) -> Option<AlternatingCircuit> {
    let k = t.len();
    for i in 0..k {
        for j in i + 1..k {
            if t.vertices[i] != t.vertices[j] {
                continue;
            }
            // Arc i..j closes alternately iff its first and last colors differ;
            // the complementary arc then closes alternately too.
            if t.colors[i] == t.colors[j - 1] {
                continue;
            }
            let inner = t.arc(i, j);
            let outer = t.arc(j, i);
            let keep = match cut {
                Some(x) if !inner.crosses(x) => outer,
                Some(x) if !outer.crosses(x) => inner,
                _ if outer.len() < inner.len() => outer,
                _ => inner,
            };
            return Some(keep);
        }
    }
    None
}

/// A nonempty proper subset of `t`'s edges with equal red and blue degree
/// everywhere, if one exists.
///
/// With `x_e` marking kept edges, set `z_e = 1 - x_e` on red edges and
/// `z_e = x_e` on blue ones; the balance condition becomes "z has degree
/// `d_R(v)` at every v", an f-factor problem on the circuit's edges. The first
/// edge is pinned inside the subset (a subset or its complement contains it)
/// and each other edge in turn is pinned outside.
fn proper_equitable_subset(t: &AlternatingCircuit, n: usize) -> Result<Option<EdgeSet>> {
    let edges: Vec<(Edge, Color)> = t.colored_edges().collect();
    if edges.len() <= 4 {
        return Ok(None);
    }
    let targets: Vec<usize> = t.color_degrees(n).iter().map(|&(r, _)| r).collect();
    let (first, first_color) = edges[0];
    for &(other, other_color) in &edges[1..] {
        let mut f = targets.clone();
        // x = 1 on `first`: z = 0 if red, 1 if blue. x = 0 on `other`: z = 1 if red.
        let mut pinned = Vec::new();
        if first_color == Color::Blue {
            pinned.push(first);
        }
        if other_color == Color::Red {
            pinned.push(other);
        }
        let mut feasible = true;
        for e in &pinned {
            for x in [e.u, e.v] {
                match f[x].checked_sub(1) {
                    Some(r) => f[x] = r,
                    None => feasible = false,
                }
            }
        }
        if !feasible {
            continue;
        }
        let rest: Vec<Edge> = edges
            .iter()
            .map(|&(e, _)| e)
            .filter(|&e| e != first && e != other)
            .collect();
        let g = Graph::new(n, rest.iter().map(|e| (e.u, e.v)))?;
        let Some(z) = f_factor(&g, &DegreeSpec::new(f)) else {
            continue;
        };
        let mut kept: EdgeSet = edges
            .iter()
            .filter(|&&(e, _)| e != first && e != other)
            .filter(|&&(e, c)| z.contains(e) == (c == Color::Blue))
            .map(|&(e, _)| e)
            .collect();
        kept.insert(first);
        return Ok(Some(kept));
    }
    Ok(None)
}

/// Chooses between `piece` and its complement within `t`, and returns one
/// alternating circuit inside the chosen side.
fn pick_piece(
    t: &AlternatingCircuit,
    piece: EdgeSet,
    cut: Option<&VertexSet>,
    n: usize,
) -> Result<AlternatingCircuit> {
    let (mut red_a, mut blue_a, mut red_b, mut blue_b) = (
        EdgeSet::new(),
        EdgeSet::new(),
        EdgeSet::new(),
        EdgeSet::new(),
    );
    for (e, c) in t.colored_edges() {
        match (piece.contains(&e), c) {
            (true, Color::Red) => red_a.insert(e),
            (true, Color::Blue) => blue_a.insert(e),
            (false, Color::Red) => red_b.insert(e),
            (false, Color::Blue) => blue_b.insert(e),
        };
    }
    let sides = [
        EdgeColoring::new(n, red_a, blue_a)?,
        EdgeColoring::new(n, red_b, blue_b)?,
    ];
    for side in &sides {
        let found = decompose_circuits(side)?
            .into_iter()
            .find(|c| cut.is_none_or(|x| c.crosses(x)));
        if let Some(c) = found {
            return Ok(c);
        }
    }
    Err(Error::InternalInconsistency(
        "neither side of a split keeps a circuit".into(),
    ))
}

/// Red edges inside the factor, blue edges outside it.
pub fn is_switch_on(t: &AlternatingCircuit, f: &Factor) -> bool {
    t.colored_edges()
        .all(|(e, c)| f.contains(e) == (c == Color::Red))
}

/// Removes the red edges of `t` from `f` and adds the blue ones. Degrees are
/// unchanged because every vertex of `t` loses as many red edges as it gains
/// blue ones; the blue edges must be edges of the host graph.
pub fn switching(f: &Factor, t: &AlternatingCircuit) -> Result<Factor> {
    if !is_switch_on(t, f) {
        return Err(Error::NotASwitch);
    }
    let mut edges = f.edges().clone();
    for (e, c) in t.colored_edges() {
        match c {
            Color::Red => edges.remove(&e),
            Color::Blue => edges.insert(e),
        };
    }
    debug_assert_eq!(degrees_of(f.n(), &edges), degrees_of(f.n(), f.edges()));
    Ok(Factor::from_parts_unchecked(f.n(), edges, f.spec().clone()))
}
