use cfactor::alternating::{
    color_difference, decompose_circuits, is_equitable, minimal_circuit, switching,
};
use cfactor::distance::{distance_constrained_factor, path_constrained_factor, PathConstraint};
use cfactor::matching::{max_matching, verify_matching};
use cfactor::oracle::{brute_max_matching, enumerate_f_factors, find_f_factor, EnumerationBudget};
use cfactor::tutte::f_factor;
use cfactor::{CutSide, DegreeSpec, Distance, EdgeSet, Graph, VertexSet};
use proptest::prelude::*;

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut pairs = Vec::new();
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[k] {
                        pairs.push((u, v));
                    }
                    k += 1;
                }
            }
            Graph::new(n, pairs).unwrap()
        })
    })
}

fn dense_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    graph(max_n)
        .prop_filter("a single vertex has no neighbours", |g| g.n() >= 2)
        .prop_map(|g| {
            let n = g.n();
            let mut pairs: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.u, e.v)).collect();
            let mut deg: Vec<usize> = g.degrees();
            for v in 0..n {
                for w in 0..n {
                    if 2 * deg[v] >= n {
                        break;
                    }
                    if w != v && !pairs.contains(&(v.min(w), v.max(w))) {
                        pairs.push((v.min(w), v.max(w)));
                        deg[v] += 1;
                        deg[w] += 1;
                    }
                }
            }
            Graph::new(n, pairs).unwrap()
        })
}

/// A graph with the degrees of one of its spanning subgraphs as targets.
fn instance(max_n: usize) -> impl Strategy<Value = (Graph, DegreeSpec)> {
    graph(max_n).prop_flat_map(|g| {
        let m = g.m();
        proptest::collection::vec(any::<bool>(), m).prop_map(move |keep| {
            let mut deg = vec![0; g.n()];
            for (e, k) in g.edges().iter().zip(keep) {
                if k {
                    deg[e.u] += 1;
                    deg[e.v] += 1;
                }
            }
            (g.clone(), DegreeSpec::new(deg))
        })
    })
}

proptest! {
    #[test]
    fn edge_list_round_trip(g in graph(12)) {
        prop_assert_eq!(Graph::parse_edge_list(&g.to_edge_list()).unwrap(), g);
    }

    #[test]
    fn distances_form_a_metric(g in graph(10)) {
        let n = g.n();
        for u in 0..n {
            prop_assert_eq!(g.bfs_distance(u, u), Distance::Finite(0));
            for v in 0..n {
                prop_assert_eq!(g.bfs_distance(u, v), g.bfs_distance(v, u));
                for w in 0..n {
                    if let (Distance::Finite(a), Distance::Finite(b)) = (g.bfs_distance(u, w), g.bfs_distance(w, v)) {
                        prop_assert!(g.bfs_distance(u, v) <= Distance::Finite(a + b));
                    }
                }
            }
        }
    }

    #[test]
    fn half_degree_means_diameter_two(g in dense_graph(16)) {
        prop_assert!(2 * g.min_degree() >= g.n());
        prop_assert!(g.diameter() <= Distance::Finite(2));
    }

    #[test]
    fn small_diameter_cuts_are_covered(g in dense_graph(12), mask in any::<u16>()) {
        let x = VertexSet::new((0..g.n()).filter(|&v| mask & (1 << v) != 0));
        let cut = g.edge_cut(&x);
        if !x.is_empty() && x.len() < g.n() {
            prop_assert_ne!(g.cut_covers(&x, &cut), CutSide::Neither);
        }
    }

    #[test]
    fn matching_is_maximum(g in graph(10)) {
        let m = max_matching(&g);
        prop_assert!(verify_matching(&g, &m, false).is_valid());
        prop_assert_eq!(m.len(), brute_max_matching(&g));
    }

    #[test]
    fn tutte_finds_planted_factors((g, f) in instance(8)) {
        let h = f_factor(&g, &f).expect("targets come from a subgraph");
        let deg = h.to_graph().degrees();
        prop_assert_eq!(&deg[..], f.targets());
        prop_assert!(h.edges().iter().all(|e| g.has_edge(e.u, e.v)));
    }

    #[test]
    fn distance_constraint_matches_search((g, f) in instance(7), u in 0usize..7, v in 0usize..7) {
        let n = g.n();
        let (u, v) = (u % n, v % n);
        prop_assume!(u != v);
        let want = find_f_factor(&g, &f, EnumerationBudget::unlimited(), |h| h.to_graph().bfs_distance(u, v).at_least(3))
            .unwrap()
            .is_some();
        let got = distance_constrained_factor(&g, &f, u, v).unwrap();
        prop_assert_eq!(got.is_some(), want);
        if let Some(h) = got {
            prop_assert!(h.to_graph().bfs_distance(u, v).at_least(3));
        }
    }

    #[test]
    fn forced_paths_are_shortest((g, f) in instance(8), pick in any::<u64>()) {
        let paths: Vec<_> = (0..g.n())
            .flat_map(|u| g.neighbors(u).iter().map(move |&a| (u, a)))
            .flat_map(|(u, a)| g.neighbors(a).iter().map(move |&b| (u, a, b)))
            .flat_map(|(u, a, b)| g.neighbors(b).iter().map(move |&v| (u, a, b, v)))
            .filter_map(|(u, a, b, v)| PathConstraint::new(&g, u, a, b, v).ok())
            .collect();
        prop_assume!(!paths.is_empty());
        let p = paths[(pick % paths.len() as u64) as usize];
        if let Ok(Some(h)) = path_constrained_factor(&g, &f, &p) {
            let hg = h.to_graph();
            prop_assert_eq!(&hg.degrees()[..], f.targets());
            prop_assert!(p.edges().iter().all(|e| h.contains(*e)));
            prop_assert_eq!(hg.bfs_distance(p.u, p.v), Distance::Finite(3));
        }
    }

    #[test]
    fn switching_preserves_degrees((g, f) in instance(8), i in any::<usize>(), j in any::<usize>()) {
        let all = enumerate_f_factors(&g, &f, EnumerationBudget::new(64, 1_000_000).unwrap()).factors;
        let a = &all[i % all.len()];
        let b = &all[j % all.len()];
        let c = color_difference(a, b).unwrap();
        prop_assert!(is_equitable(&c));
        let circuits = decompose_circuits(&c).unwrap();
        let covered: usize = circuits.iter().map(|t| t.len()).sum();
        prop_assert_eq!(covered, c.red().len() + c.blue().len());
        let mut result = a.clone();
        for t in &circuits {
            result = switching(&result, t).unwrap();
        }
        prop_assert_eq!(result.edges(), b.edges());
        if let Some(t) = minimal_circuit(&c, None).unwrap() {
            let s = switching(a, &t).unwrap();
            prop_assert_eq!(s.to_graph().degrees(), a.to_graph().degrees());
            let sym: EdgeSet = s.edges().symmetric_difference(a.edges()).copied().collect();
            prop_assert_eq!(sym, t.edge_set());
        }
    }
}
