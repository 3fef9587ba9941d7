//! Brute-force ground truth for small instances, plus the instance generators.
//!
//! Nothing here calls into the matching or reduction code: f-factors are
//! enumerated by edge-by-edge backtracking with degree-feasibility pruning
//! only, so the results stay independent of the algorithms they check.
//!
//! Random instances use ChaCha8 seeded through `SeedableRng::seed_from_u64`.
//! Bernoulli draws compare the top 53 bits of `next_u64` against `p`, and
//! bounded integers use rejection sampling on `next_u64`, so the output bytes
//! depend only on `(model, params, seed)`.

use std::collections::HashSet;
use std::ops::ControlFlow;
use std::str::FromStr;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::alternating::{AlternatingCircuit, Color};
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::tutte::{DegreeSpec, Factor};

/// Limits on a backtracking run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBudget {
    max_solutions: u64,
    max_nodes: u64,
}

impl EnumerationBudget {
    pub fn new(max_solutions: u64, max_nodes: u64) -> Result<Self> {
        if max_solutions == 0 || max_nodes == 0 {
            return Err(Error::PreconditionViolated(
                "budget limits must be positive".into(),
            ));
        }
        Ok(EnumerationBudget {
            max_solutions,
            max_nodes,
        })
    }

    pub fn unlimited() -> Self {
        EnumerationBudget {
            max_solutions: u64::MAX,
            max_nodes: u64::MAX,
        }
    }

    /// Node limit only; every solution is kept.
    pub fn nodes(max_nodes: u64) -> Self {
        EnumerationBudget {
            max_solutions: u64::MAX,
            max_nodes: max_nodes.max(1),
        }
    }

    pub fn max_solutions(&self) -> u64 {
        self.max_solutions
    }

    pub fn max_nodes(&self) -> u64 {
        self.max_nodes
    }
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget::nodes(200_000_000)
    }
}

/// Factors found by [`enumerate_f_factors`]; `complete` is false when the
/// budget ran out first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub factors: Vec<Factor>,
    pub complete: bool,
    pub nodes: u64,
}

impl Enumeration {
    /// The factor list, or [`Error::BudgetExhausted`] if it is partial.
    pub fn into_complete(self) -> Result<Vec<Factor>> {
        if self.complete {
            Ok(self.factors)
        } else {
            Err(Error::BudgetExhausted { nodes: self.nodes })
        }
    }
}

enum Stop {
    Visitor,
    Budget,
}

struct Search<'a> {
    edges: &'a [Edge],
    need: Vec<usize>,
    avail: Vec<usize>,
    chosen: Vec<Edge>,
    nodes: u64,
    max_nodes: u64,
}

impl Search<'_> {
    fn run(
        &mut self,
        i: usize,
        visit: &mut dyn FnMut(&[Edge]) -> ControlFlow<()>,
    ) -> ControlFlow<Stop> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return ControlFlow::Break(Stop::Budget);
        }
        if i == self.edges.len() {
            return match visit(&self.chosen) {
                ControlFlow::Continue(()) => ControlFlow::Continue(()),
                ControlFlow::Break(()) => ControlFlow::Break(Stop::Visitor),
            };
        }
        let e = self.edges[i];
        self.avail[e.u] -= 1;
        self.avail[e.v] -= 1;
        let mut flow = ControlFlow::Continue(());
        // Exclude first, then include.
        if self.need[e.u] <= self.avail[e.u] && self.need[e.v] <= self.avail[e.v] {
            flow = self.run(i + 1, visit);
        }
        if flow.is_continue() && self.need[e.u] > 0 && self.need[e.v] > 0 {
            self.need[e.u] -= 1;
            self.need[e.v] -= 1;
            self.chosen.push(e);
            flow = self.run(i + 1, visit);
            self.chosen.pop();
            self.need[e.u] += 1;
            self.need[e.v] += 1;
        }
        self.avail[e.u] += 1;
        self.avail[e.v] += 1;
        flow
    }
}

/// Calls `visit` on every f-factor of `g` in deterministic order until it
/// breaks. Returns `(nodes, complete)`.
fn for_each_f_factor(
    g: &Graph,
    f: &DegreeSpec,
    max_nodes: u64,
    visit: &mut dyn FnMut(&[Edge]) -> ControlFlow<()>,
) -> (u64, bool) {
    if f.len() != g.n() || (0..g.n()).any(|v| f.get(v) > g.degree(v)) {
        return (0, true);
    }
    let mut search = Search {
        edges: g.edges(),
        need: f.targets().to_vec(),
        avail: g.degrees(),
        chosen: Vec::new(),
        nodes: 0,
        max_nodes,
    };
    match search.run(0, visit) {
        ControlFlow::Continue(()) | ControlFlow::Break(Stop::Visitor) => (search.nodes, true),
        ControlFlow::Break(Stop::Budget) => (search.nodes, false),
    }
}

fn factor_from(g: &Graph, f: &DegreeSpec, edges: &[Edge]) -> Factor {
    Factor::from_parts_unchecked(g.n(), edges.iter().copied().collect(), f.clone())
}

/// All f-factors of `g`, up to the budget.
pub fn enumerate_f_factors(g: &Graph, f: &DegreeSpec, budget: EnumerationBudget) -> Enumeration {
    let mut factors = Vec::new();
    let mut truncated = false;
    let (nodes, complete) = for_each_f_factor(g, f, budget.max_nodes, &mut |edges| {
        factors.push(factor_from(g, f, edges));
        if factors.len() as u64 >= budget.max_solutions {
            truncated = true;
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    Enumeration {
        factors,
        complete: complete && !truncated,
        nodes,
    }
}

/// First enumerated f-factor satisfying `pred`.
pub fn find_f_factor(
    g: &Graph,
    f: &DegreeSpec,
    budget: EnumerationBudget,
    mut pred: impl FnMut(&Factor) -> bool,
) -> Result<Option<Factor>> {
    let mut found = None;
    let (nodes, complete) = for_each_f_factor(g, f, budget.max_nodes, &mut |edges| {
        let candidate = factor_from(g, f, edges);
        if pred(&candidate) {
            found = Some(candidate);
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    match found {
        Some(x) => Ok(Some(x)),
        None if complete => Ok(None),
        None => Err(Error::BudgetExhausted { nodes }),
    }
}

/// Whether `g` has a connected f-factor; stops at the first one found.
pub fn exists_connected_f_factor(
    g: &Graph,
    f: &DegreeSpec,
    budget: EnumerationBudget,
) -> Result<bool> {
    Ok(find_f_factor(g, f, budget, Factor::is_connected)?.is_some())
}

/// Size of a maximum matching by exhaustive search.
pub fn brute_max_matching(g: &Graph) -> usize {
    fn go(g: &Graph, used: &mut [bool], from: usize) -> usize {
        let Some(v) = (from..g.n()).find(|&v| !used[v]) else {
            return 0;
        };
        used[v] = true;
        // v stays exposed
        let mut best = go(g, used, v + 1);
        for &w in g.neighbors(v) {
            if !used[w] {
                used[w] = true;
                best = best.max(1 + go(g, used, v + 1));
                used[w] = false;
            }
        }
        used[v] = false;
        best
    }
    go(g, &mut vec![false; g.n()], 0)
}

/// Whether the colored edge list of `t` has a nonempty proper subset with
/// equal red and blue degree at every vertex. Exponential in the circuit length.
pub fn has_proper_subcircuit(t: &AlternatingCircuit) -> bool {
    let edges: Vec<(Edge, Color)> = t.colored_edges().collect();
    let k = edges.len();
    assert!(k < 31, "circuit too long for subset search");
    let n = edges.iter().map(|(e, _)| e.v + 1).max().unwrap_or(0);
    let mut balance = vec![0i32; n];
    (1u32..(1u32 << k) - 1).any(|mask| {
        balance.iter_mut().for_each(|b| *b = 0);
        for (i, (e, c)) in edges.iter().enumerate() {
            if mask & (1 << i) != 0 {
                let d = if *c == Color::Red { 1 } else { -1 };
                balance[e.u] += d;
                balance[e.v] += d;
            }
        }
        balance.iter().all(|&b| b == 0)
    })
}

/// Instance families for tests and benchmarks.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    /// Two `(k+1)`-cliques joined by a perfect matching, `f = k`.
    TwinK { k: usize },
    /// A random connected `f`-regular graph plus `extra` random edges.
    PlantedConnected { n: usize, f: usize, extra: usize },
    /// `G(n, p)` with uniform target `f`.
    GnpThreshold { n: usize, p: f64, f: usize },
}

impl Model {
    /// Parses a model name and its comma-separated parameters, e.g.
    /// `("planted-connected", "12,5,0")` or `("gnp-threshold", "n=12,p=0.8")`.
    pub fn parse(name: &str, params: &str) -> Result<Self> {
        let values: Vec<(&str, &str)> = params
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.split_once('=')
                    .map(|(k, v)| (k.trim(), v.trim()))
                    .unwrap_or(("", s))
            })
            .collect();
        let get = |key: &str, pos: usize| -> Option<&str> {
            values
                .iter()
                .find(|(k, _)| *k == key)
                .or_else(|| values.get(pos).filter(|(k, _)| k.is_empty()))
                .map(|(_, v)| *v)
        };
        fn num<T: FromStr>(s: Option<&str>, what: &str) -> Result<T> {
            s.ok_or_else(|| Error::PreconditionViolated(format!("missing parameter {what}")))?
                .parse()
                .map_err(|_| Error::PreconditionViolated(format!("bad parameter {what}")))
        }
        match name {
            "twin-k" => Ok(Model::TwinK {
                k: num(get("k", 0), "k")?,
            }),
            "planted-connected" => Ok(Model::PlantedConnected {
                n: num(get("n", 0), "n")?,
                f: num(get("f", 1), "f")?,
                extra: num(get("extra", 2), "extra")?,
            }),
            "gnp-threshold" => {
                let n: usize = num(get("n", 0), "n")?;
                let f = match get("f", 2) {
                    Some(s) => num(Some(s), "f")?,
                    None => density_threshold(n),
                };
                Ok(Model::GnpThreshold {
                    n,
                    p: num(get("p", 1), "p")?,
                    f,
                })
            }
            other => Err(Error::PreconditionViolated(format!(
                "unknown model {other:?}"
            ))),
        }
    }
}

/// `ceil(n / 2.5)`, the smallest admissible target for `n` vertices.
pub fn density_threshold(n: usize) -> usize {
    (2 * n).div_ceil(5)
}

/// Generates `(graph, f)` for a model. Identical inputs give identical output.
pub fn gen_instance(model: &Model, seed: u64) -> Result<(Graph, DegreeSpec)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match *model {
        Model::TwinK { k } => {
            let s = k + 1;
            let mut pairs = Vec::new();
            for side in [0, s] {
                for i in 0..s {
                    for j in i + 1..s {
                        pairs.push((side + i, side + j));
                    }
                }
            }
            pairs.extend((0..s).map(|i| (i, i + s)));
            Ok((Graph::new(2 * s, pairs)?, DegreeSpec::uniform(2 * s, k)))
        }
        Model::GnpThreshold { n, p, f } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::PreconditionViolated(format!(
                    "p = {p} outside [0, 1]"
                )));
            }
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if unit(&mut rng) < p {
                        edges.push(Edge { u, v });
                    }
                }
            }
            Ok((
                Graph::from_sorted_edges(n, edges),
                DegreeSpec::uniform(n, f),
            ))
        }
        Model::PlantedConnected { n, f, extra } => {
            let base = planted_regular(&mut rng, n, f)?;
            let mut set: HashSet<Edge> = base.iter().copied().collect();
            let mut free: Vec<Edge> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| Edge { u, v }))
                .filter(|e| !set.contains(e))
                .collect();
            if extra > free.len() {
                return Err(Error::PreconditionViolated(format!(
                    "only {} non-edges available for {extra} extra edges",
                    free.len()
                )));
            }
            for i in 0..extra {
                let j = i + below(&mut rng, (free.len() - i) as u64) as usize;
                free.swap(i, j);
                set.insert(free[i]);
            }
            let mut edges: Vec<Edge> = set.into_iter().collect();
            edges.sort_unstable();
            Ok((
                Graph::from_sorted_edges(n, edges),
                DegreeSpec::uniform(n, f),
            ))
        }
    }
}

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn below(rng: &mut ChaCha8Rng, bound: u64) -> u64 {
    debug_assert!(bound > 0);
    let zone = u64::MAX - (u64::MAX % bound);
    loop {
        let x = rng.next_u64();
        if x < zone {
            return x % bound;
        }
    }
}

/// Connected `f`-regular graph: a relabelled Harary graph randomised by
/// degree-preserving double-edge swaps. Falls back to the relabelled Harary
/// graph if the swaps disconnect it.
fn planted_regular(rng: &mut ChaCha8Rng, n: usize, f: usize) -> Result<Vec<Edge>> {
    if f >= n || (n * f) % 2 == 1 || f == 0 || (f == 1 && n != 2) {
        return Err(Error::PreconditionViolated(format!(
            "no connected {f}-regular graph on {n} vertices"
        )));
    }
    let mut harary = HashSet::new();
    for i in 0..n {
        for j in 1..=f / 2 {
            harary.insert(Edge::new(i, (i + j) % n));
        }
        if f % 2 == 1 {
            harary.insert(Edge::new(i, (i + n / 2) % n));
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = below(rng, i as u64 + 1) as usize;
        perm.swap(i, j);
    }
    let mut base: Vec<Edge> = harary
        .into_iter()
        .map(|e| Edge::new(perm[e.u], perm[e.v]))
        .collect();
    base.sort_unstable();

    let mut edges = base.clone();
    let mut set: HashSet<Edge> = edges.iter().copied().collect();
    let m = edges.len() as u64;
    for _ in 0..4 * m {
        let i = below(rng, m) as usize;
        let j = below(rng, m) as usize;
        let (e1, e2) = (edges[i], edges[j]);
        let (a, b, c, d) = if rng.next_u64() & 1 == 0 {
            (e1.u, e1.v, e2.u, e2.v)
        } else {
            (e1.u, e1.v, e2.v, e2.u)
        };
        if a == c || a == d || b == c || b == d {
            continue;
        }
        let (n1, n2) = (Edge::new(a, c), Edge::new(b, d));
        if set.contains(&n1) || set.contains(&n2) {
            continue;
        }
        set.remove(&e1);
        set.remove(&e2);
        set.insert(n1);
        set.insert(n2);
        edges[i] = n1;
        edges[j] = n2;
    }
    edges.sort_unstable();
    let swapped = Graph::from_sorted_edges(n, edges.clone());
    Ok(if swapped.is_connected() { edges } else { base })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all(g: &Graph, k: usize) -> Vec<Factor> {
        enumerate_f_factors(
            g,
            &DegreeSpec::uniform(g.n(), k),
            EnumerationBudget::unlimited(),
        )
        .into_complete()
        .unwrap()
    }

    #[test]
    fn k4_has_three_2_factors() {
        let fs = all(&Graph::complete(4), 2);
        assert_eq!(fs.len(), 3);
        assert!(fs.iter().all(|f| f.is_connected() && f.edges().len() == 4));
    }

    #[test]
    fn k5_has_twelve_hamiltonian_cycles() {
        let fs = all(&Graph::complete(5), 2);
        assert_eq!(fs.len(), 12);
        assert!(fs.iter().all(Factor::is_connected));
    }

    #[test]
    fn star_has_none() {
        let star = Graph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(all(&star, 2).is_empty());
    }

    #[test]
    fn odd_degree_sum_has_none() {
        assert!(all(&Graph::complete(5), 1).is_empty());
    }

    #[test]
    fn connected_existence() {
        let b = EnumerationBudget::unlimited();
        let k5 = Graph::complete(5);
        assert!(exists_connected_f_factor(&k5, &DegreeSpec::uniform(5, 2), b).unwrap());
        let (twin, _) = gen_instance(&Model::TwinK { k: 5 }, 0).unwrap();
        let two_k6 = twin.filter_edges(|e| (e.u < 6) == (e.v < 6));
        assert!(!exists_connected_f_factor(&two_k6, &DegreeSpec::uniform(12, 5), b).unwrap());
        let c6 = Graph::new(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap();
        assert!(exists_connected_f_factor(&c6, &DegreeSpec::uniform(6, 2), b).unwrap());
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let k8 = Graph::complete(8);
        let f = DegreeSpec::uniform(8, 3);
        let e = enumerate_f_factors(&k8, &f, EnumerationBudget::nodes(50));
        assert!(!e.complete);
        assert!(matches!(
            e.into_complete(),
            Err(Error::BudgetExhausted { .. })
        ));
        let capped = enumerate_f_factors(&k8, &f, EnumerationBudget::new(2, u64::MAX).unwrap());
        assert_eq!(capped.factors.len(), 2);
        assert!(!capped.complete);
        assert!(EnumerationBudget::new(0, 1).is_err());
    }

    #[test]
    fn brute_matching_sizes() {
        assert_eq!(brute_max_matching(&Graph::complete(4)), 2);
        assert_eq!(brute_max_matching(&Graph::complete(3)), 1);
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((5 + i, 5 + (i + 2) % 5));
        }
        assert_eq!(brute_max_matching(&Graph::new(10, e).unwrap()), 5);
    }

    #[test]
    fn twin_k5_shape() {
        let (g, f) = gen_instance(&Model::TwinK { k: 5 }, 7).unwrap();
        assert_eq!((g.n(), g.m()), (12, 36));
        assert_eq!(f, DegreeSpec::uniform(12, 5));
        assert_eq!(g.edge_cut(&crate::graph::VertexSet::range(0, 6)).len(), 6);
    }

    #[test]
    fn gnp_full_is_clique() {
        let (g, f) = gen_instance(
            &Model::GnpThreshold {
                n: 12,
                p: 1.0,
                f: 5,
            },
            3,
        )
        .unwrap();
        assert_eq!(g, Graph::complete(12));
        assert_eq!(f.min(), 5);
    }

    #[test]
    fn planted_without_extra_is_regular_and_connected() {
        for seed in 0..10 {
            let (g, f) = gen_instance(
                &Model::PlantedConnected {
                    n: 12,
                    f: 5,
                    extra: 0,
                },
                seed,
            )
            .unwrap();
            assert!(g.degrees().iter().all(|&d| d == 5));
            assert!(g.is_connected());
            assert_eq!(f, DegreeSpec::uniform(12, 5));
        }
        assert!(gen_instance(
            &Model::PlantedConnected {
                n: 11,
                f: 5,
                extra: 0
            },
            0
        )
        .is_err());
    }

    #[test]
    fn generation_is_deterministic() {
        let m = Model::PlantedConnected {
            n: 30,
            f: 12,
            extra: 40,
        };
        let a = gen_instance(&m, 99).unwrap();
        let b = gen_instance(&m, 99).unwrap();
        assert_eq!(a.0.to_edge_list(), b.0.to_edge_list());
        let c = gen_instance(&m, 100).unwrap();
        assert_ne!(a.0.to_edge_list(), c.0.to_edge_list());
        assert_eq!(a.0.m(), 30 * 12 / 2 + 40);
    }

    #[test]
    fn model_parsing() {
        assert_eq!(Model::parse("twin-k", "5").unwrap(), Model::TwinK { k: 5 });
        assert_eq!(
            Model::parse("planted-connected", "n=12,f=5,extra=0").unwrap(),
            Model::PlantedConnected {
                n: 12,
                f: 5,
                extra: 0
            }
        );
        assert_eq!(
            Model::parse("gnp-threshold", "12,0.8").unwrap(),
            Model::GnpThreshold {
                n: 12,
                p: 0.8,
                f: 5
            }
        );
        assert!(Model::parse("nope", "").is_err());
        assert!(Model::parse("twin-k", "").is_err());
    }

    #[test]
    fn threshold_values() {
        assert_eq!(density_threshold(12), 5);
        assert_eq!(density_threshold(10), 4);
        assert_eq!(density_threshold(200), 80);
        assert_eq!(density_threshold(13), 6);
    }
}
