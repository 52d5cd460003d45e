use std::collections::BTreeSet;

use proptest::prelude::*;

use drlpart::coarsen::{coarsening_chain, interpolate_bisection};
use drlpart::edge::{edge_separator, CoarseSolver, MultilevelConfig, Refiner};
use drlpart::graph::{cut_size, volume};
use drlpart::io::{
    format_bisection, format_permutation, format_separator, parse_bisection, parse_matrix_market,
    parse_permutation, parse_separator, read_graph_cache, write_graph_cache, write_matrix_market,
};
use drlpart::ordering::{
    nested_dissection, symbolic_fill, GreedySeparator, Permutation, SparsePattern,
};
use drlpart::vertex::vertex_separator;
use drlpart::{Bisection, Graph, Label, Side};

/// Random spanning tree plus extra edges.
fn connected_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (3..max_n).prop_flat_map(|n| {
        let parents = (1..n).map(|v| 0..v).collect::<Vec<_>>();
        let extra = prop::collection::vec((0..n, 0..n), 0..2 * n);
        (Just(n), parents, extra).prop_map(|(n, parents, extra)| {
            let mut edges: BTreeSet<(usize, usize)> = parents
                .into_iter()
                .enumerate()
                .map(|(i, p)| (p, i + 1))
                .collect();
            edges.extend(
                extra
                    .into_iter()
                    .filter(|(a, b)| a != b)
                    .map(|(a, b)| (a.min(b), a.max(b))),
            );
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

fn side_vec(b: &Bisection, side: Side) -> Vec<usize> {
    (0..b.sides().len())
        .filter(|&v| b.side(v) == side)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cached_metrics_follow_moves(g in connected_graph(40), moves in prop::collection::vec(0usize..40, 1..60)) {
        let mut b = Bisection::from_part_a(&g, &[0]).unwrap();
        for v in moves.into_iter().map(|v| v % g.n()) {
            let before = b.normalized_cut().unwrap();
            match b.move_node(&g, v) {
                Ok(gain) => {
                    let after = b.normalized_cut().unwrap();
                    prop_assert!((gain - (before - after)).abs() < 1e-12);
                }
                Err(_) => prop_assert!(side_vec(&b, b.side(v)).len() == 1),
            }
            prop_assert_eq!(b.cut(), cut_size(&g, b.sides()));
            prop_assert_eq!(b.vol_a(), volume(&g, &side_vec(&b, Side::A)));
            prop_assert_eq!(b.vol_b(), volume(&g, &side_vec(&b, Side::B)));
        }
    }

    #[test]
    fn coarsening_chain_is_consistent(g in connected_graph(120), seed in any::<u64>()) {
        let chain = coarsening_chain(&g, 10, seed);
        let mut fine = &g;
        for lvl in &chain {
            prop_assert_eq!(lvl.fine_n(), fine.n());
            prop_assert!(lvl.coarse_n() < fine.n());
            prop_assert_eq!(lvl.cluster_sizes.iter().sum::<usize>(), fine.n());
            prop_assert!(lvl.cluster_sizes.iter().all(|&c| c == 1 || c == 2));
            // every fine edge maps to a coarse edge or inside one cluster
            for (u, v) in fine.edges() {
                let (cu, cv) = (lvl.fine2coarse[u], lvl.fine2coarse[v]);
                prop_assert!(cu == cv || lvl.graph.has_edge(cu, cv));
            }
            prop_assert!(lvl.graph.is_connected());
            fine = &lvl.graph;
        }
        if let Some(last) = chain.last() {
            let b = Bisection::from_part_a(&last.graph, &[0]).unwrap();
            let lifted = interpolate_bisection(if chain.len() == 1 { &g } else { &chain[chain.len() - 2].graph }, last, &b).unwrap();
            prop_assert_eq!(lifted.count(Side::A), last.cluster_sizes[0]);
        }
    }

    #[test]
    fn multilevel_outputs_are_valid(g in connected_graph(90), seed in any::<u64>()) {
        let cfg = MultilevelConfig { n_min: 12, seed, audit: true, ..MultilevelConfig::default() };
        let e = edge_separator(&g, &cfg, Refiner::Greedy, CoarseSolver::Fallback).unwrap();
        prop_assert_eq!(e.bisection.cut(), cut_size(&g, e.bisection.sides()));
        prop_assert!(e.bisection.count(Side::A) > 0 && e.bisection.count(Side::B) > 0);
        for l in &e.levels {
            prop_assert!(l.nc <= l.nc_interpolated + 1e-12);
        }
        if let Ok(v) = vertex_separator(&g, &cfg, Refiner::Greedy, CoarseSolver::Fallback) {
            prop_assert!(v.separator.is_valid(&g));
            prop_assert!(v.separator.card(Label::A) > 0 && v.separator.card(Label::B) > 0);
            for l in &v.levels {
                prop_assert!(l.ns <= l.ns_interpolated + 1e-12);
            }
        }
    }

    #[test]
    fn nested_dissection_yields_a_permutation(g in connected_graph(150), n_min in 4usize..40) {
        let p = nested_dissection(&g, n_min, &GreedySeparator::default());
        prop_assert_eq!(p.len(), g.n());
        let mut seen = p.as_slice().to_vec();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..g.n()).collect::<Vec<_>>());
        let a = SparsePattern::from_graph(&g);
        let stats = symbolic_fill(&a, &p).unwrap();
        // L holds at least the lower triangle of A plus the diagonal
        prop_assert!(stats.nnz_factor >= g.m() + g.n());
    }

    #[test]
    fn formats_round_trip(g in connected_graph(60), seed in any::<u64>()) {
        let a = SparsePattern::from_graph(&g);
        let mut buf = Vec::new();
        write_matrix_market(&a, &mut buf).unwrap();
        let back = parse_matrix_market(buf.as_slice()).unwrap();
        prop_assert_eq!(&back.pattern, &a);
        prop_assert_eq!(back.pattern.to_graph(), g.clone());

        let mut bin = Vec::new();
        write_graph_cache(&g, &mut bin).unwrap();
        prop_assert_eq!(read_graph_cache(bin.as_slice()).unwrap(), g.clone());

        let cfg = MultilevelConfig { n_min: 12, seed, ..MultilevelConfig::default() };
        let b = edge_separator(&g, &cfg, Refiner::Greedy, CoarseSolver::Fallback).unwrap().bisection;
        prop_assert_eq!(parse_bisection(&g, &format_bisection(&b)).unwrap(), b);
        if let Ok(v) = vertex_separator(&g, &cfg, Refiner::Greedy, CoarseSolver::Fallback) {
            prop_assert_eq!(parse_separator(&g, &format_separator(&v.separator)).unwrap(), v.separator);
        }
        let p = Permutation::new((0..g.n()).rev().collect()).unwrap();
        prop_assert_eq!(parse_permutation(&format_permutation(&p)).unwrap(), p);
    }
}
