use std::collections::{BTreeSet, HashSet, VecDeque};

use proptest::collection::vec;
use proptest::option;
use proptest::prelude::*;

use sparse_ldp::randgen::truncate_split;
use sparse_ldp::spectral::spectral_norm_dense;
use sparse_ldp::structure::{components, degree_threshold, undirected_components};
use sparse_ldp::transforms::{clique_reduce, star_decompose, symmetrize, vertex_split};
use sparse_ldp::{DenseMatrix, DirectedNetwork, UndirectedNetwork};

fn weight(nonneg: bool) -> impl Strategy<Value = f64> {
    (0.05f64..5.0, any::<bool>()).prop_map(move |(w, neg)| if neg && !nonneg { -w } else { w })
}

fn directed(max_n: usize, density: f64, nonneg: bool) -> impl Strategy<Value = DirectedNetwork> {
    (1..=max_n).prop_flat_map(move |n| {
        vec(option::weighted(density, weight(nonneg)), n * n).prop_map(move |cells| {
            let entries = cells
                .into_iter()
                .enumerate()
                .filter_map(|(c, w)| w.map(|w| (c / n, c % n, w)));
            DirectedNetwork::new(n, entries).unwrap()
        })
    })
}

fn undirected(max_n: usize, density: f64) -> impl Strategy<Value = UndirectedNetwork> {
    (2..=max_n).prop_flat_map(move |n| {
        vec(option::weighted(density, 0.1f64..3.0), n * (n - 1) / 2).prop_map(move |cells| {
            let pairs = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
            let edges = pairs.zip(cells).filter_map(|((a, b), w)| w.map(|w| (a, b, w)));
            UndirectedNetwork::new(n, edges).unwrap()
        })
    })
}

fn norm(net: &DirectedNetwork) -> f64 {
    spectral_norm_dense(net).unwrap().value
}

fn subset(n: usize, mask: &[bool]) -> Vec<usize> {
    (0..n).filter(|&i| mask[i % mask.len()]).collect()
}

/// Vertices reachable from `start`, by breadth-first search.
fn reachable(n: usize, edges: &[(usize, usize)], start: usize) -> BTreeSet<usize> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if seen.insert(w) {
                queue.push_back(w);
            }
        }
    }
    seen
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn split_preserves_norm(w in directed(8, 0.35, true)) {
        let (split, _) = vertex_split(&w);
        let (a, b) = (norm(&w), norm(&split));
        prop_assert!((a - b).abs() <= 1e-9 * a.max(1.0), "{a} vs {b}");
    }

    #[test]
    fn reduction_never_shrinks_norm(w in directed(8, 0.35, true)) {
        let r = clique_reduce(&w).unwrap();
        let h = spectral_norm_dense(&r.h).unwrap().value;
        prop_assert!(norm(&w) <= h + 1e-9);
    }

    #[test]
    fn minor_is_monotone(w in directed(9, 0.4, false), rm in vec(any::<bool>(), 1..9), cm in vec(any::<bool>(), 1..9)) {
        let n = w.order();
        let minor = w.minor(&subset(n, &rm), &subset(n, &cm)).unwrap();
        prop_assert!(norm(&minor) <= norm(&w) + 1e-9);
    }

    #[test]
    fn absolute_values_do_not_decrease_norm(w in directed(9, 0.4, false)) {
        prop_assert!(norm(&w) <= norm(&w.abs()) + 1e-9);
    }

    #[test]
    fn truncate_split_partitions(w in directed(9, 0.5, false), tau in 0.0f64..4.0) {
        let (large, small) = truncate_split(&w, tau).unwrap();
        prop_assert_eq!(large.nnz() + small.nnz(), w.nnz());
        prop_assert!(large.entries().iter().all(|e| e.weight.abs() > tau));
        prop_assert!(small.entries().iter().all(|e| e.weight.abs() <= tau));
        let mut merged: Vec<_> = large.entries().iter().chain(small.entries()).copied().collect();
        merged.sort_by_key(|e| (e.row, e.col));
        prop_assert_eq!(merged.as_slice(), w.entries());
    }

    #[test]
    fn symmetrize_of_lift_is_identity(u in undirected(9, 0.4)) {
        prop_assert_eq!(symmetrize(&u.to_directed()), u);
    }

    #[test]
    fn stars_and_remainder_partition_edges(u in undirected(12, 0.3), threshold in 1usize..5) {
        let dec = star_decompose(&u, threshold).unwrap();
        let stars = dec.star_part();
        prop_assert_eq!(stars.edge_count() + dec.remainder.edge_count(), u.edge_count());
        let mut all: Vec<_> = stars.edges().iter().chain(dec.remainder.edges()).copied().collect();
        all.sort_by_key(|e| (e.u, e.v));
        prop_assert_eq!(all.as_slice(), u.edges());
        let mut hubs_and_leaves = HashSet::new();
        for s in &dec.stars {
            prop_assert!(hubs_and_leaves.insert(s.hub));
            for &l in &s.leaves {
                prop_assert!(hubs_and_leaves.insert(l));
            }
        }
        if dec.success {
            prop_assert!(dec.remainder.max_degree() < threshold);
        }
    }

    #[test]
    fn connected_subgraph_excess_is_smaller(u in undirected(10, 0.35), keep in vec(any::<bool>(), 1..50), start in 0usize..10) {
        let n = u.order();
        let start = start % n;
        let all: Vec<(usize, usize)> = u.edges().iter().map(|e| (e.u, e.v)).collect();
        let comp = reachable(n, &all, start);
        let comp_edges: Vec<(usize, usize)> = all.iter().copied().filter(|(a, _)| comp.contains(a)).collect();
        let excess_u = comp_edges.len() as i64 - comp.len() as i64;

        let sub: Vec<(usize, usize)> = comp_edges
            .iter()
            .enumerate()
            .filter(|(i, _)| keep[i % keep.len()])
            .map(|(_, &e)| e)
            .collect();
        let k_vertices = reachable(n, &sub, start);
        let k_edges = sub.iter().filter(|(a, _)| k_vertices.contains(a)).count();
        prop_assert!(k_edges as i64 - k_vertices.len() as i64 <= excess_u);
    }

    #[test]
    fn component_sums(w in directed(12, 0.15, false)) {
        let stats = components(&w);
        prop_assert_eq!(stats.iter().map(|c| c.vertex_count).sum::<usize>(), w.order());
        prop_assert_eq!(stats.iter().map(|c| c.edge_count).sum::<usize>(), w.nnz());
        prop_assert_eq!(stats.iter().map(|c| c.self_loop_count).sum::<usize>(), w.self_loop_count());
    }

    #[test]
    fn undirected_component_sums(u in undirected(12, 0.2)) {
        let stats = undirected_components(&u).stats;
        prop_assert_eq!(stats.iter().map(|c| c.vertex_count).sum::<usize>(), u.order());
        prop_assert_eq!(stats.iter().map(|c| c.edge_count).sum::<usize>(), u.edge_count());
    }

    #[test]
    fn dense_round_trip(w in directed(9, 0.4, false)) {
        let m = w.dense_matrix().unwrap();
        prop_assert_eq!(m.to_network().unwrap(), w.clone());
        prop_assert_eq!(DenseMatrix::from_view(&w).unwrap(), m);
    }

    #[test]
    fn indicator_is_dominated_by_symmetrization(w in directed(9, 0.3, false)) {
        let x = w.support();
        let xs = symmetrize(&x);
        prop_assert!(xs.edge_count() <= x.nnz());
        for e in x.entries() {
            let covered = e.row == e.col || xs.weight(e.row, e.col).is_some();
            prop_assert!(covered);
        }
    }

    #[test]
    fn degree_threshold_is_monotone(a in 0.0f64..3.0, b in 0.0f64..3.0, n in 16usize..100_000) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(degree_threshold(lo, n).unwrap() <= degree_threshold(hi, n).unwrap());
    }
}

#[test]
fn dense_matrix_is_injective_on_canonical_entries() {
    let a = DirectedNetwork::new(3, [(0, 1, 1.0), (2, 2, -1.0)]).unwrap();
    let b = DirectedNetwork::new(3, [(0, 1, 1.0), (2, 1, -1.0)]).unwrap();
    let c = DirectedNetwork::new(3, [(0, 1, 1.0), (2, 2, -1.5)]).unwrap();
    let ma = a.dense_matrix().unwrap();
    assert_ne!(ma, b.dense_matrix().unwrap());
    assert_ne!(ma, c.dense_matrix().unwrap());
    assert_eq!(ma, DirectedNetwork::new(3, [(2, 2, -1.0), (0, 1, 1.0)]).unwrap().dense_matrix().unwrap());
}
