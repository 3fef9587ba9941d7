#![allow(dead_code)]

use cfactor::oracle::{gen_instance, Model};
use cfactor::{DegreeSpec, EdgeSet, Graph};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub struct Rng(ChaCha8Rng);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn below(&mut self, k: usize) -> usize {
        (self.0.next_u64() % k as u64) as usize
    }

    pub fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        lo + self.below(hi - lo + 1)
    }
}

pub fn gnp(rng: &mut Rng, n: usize, p: f64) -> Graph {
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.unit() < p {
                pairs.push((u, v));
            }
        }
    }
    Graph::new(n, pairs).unwrap()
}

/// Degrees of a random spanning subgraph, so at least one factor exists.
pub fn planted_targets(rng: &mut Rng, g: &Graph, keep: f64) -> DegreeSpec {
    let mut deg = vec![0; g.n()];
    for e in g.edges() {
        if rng.unit() < keep {
            deg[e.u] += 1;
            deg[e.v] += 1;
        }
    }
    DegreeSpec::new(deg)
}

pub fn random_targets(rng: &mut Rng, g: &Graph) -> DegreeSpec {
    DegreeSpec::new((0..g.n()).map(|v| rng.range(0, g.degree(v))).collect())
}

/// Two disjoint random `f`-regular blocks of sizes `s` and `n - s`, plus
/// extra edges inside blocks with probability `inner` and across with `cross`.
/// The blocks form a disconnected f-factor by construction.
pub fn two_blocks(
    rng: &mut Rng,
    n: usize,
    s: usize,
    f: usize,
    inner: f64,
    cross: f64,
) -> (Graph, DegreeSpec, EdgeSet) {
    let mut edges = EdgeSet::new();
    for (offset, size) in [(0, s), (s, n - s)] {
        let block = if size == f + 1 {
            Graph::complete(size)
        } else {
            let model = Model::PlantedConnected {
                n: size,
                f,
                extra: 0,
            };
            gen_instance(&model, rng.0.next_u64()).unwrap().0
        };
        for e in block.edges() {
            edges.insert(cfactor::Edge::new(e.u + offset, e.v + offset));
        }
    }
    let mut pairs: Vec<(usize, usize)> = edges.iter().map(|e| (e.u, e.v)).collect();
    for u in 0..n {
        for v in u + 1..n {
            let same = (u < s) == (v < s);
            let p = if same { inner } else { cross };
            if !edges.contains(&cfactor::Edge::new(u, v)) && rng.unit() < p {
                pairs.push((u, v));
            }
        }
    }
    (
        Graph::new(n, pairs).unwrap(),
        DegreeSpec::uniform(n, f),
        edges,
    )
}
