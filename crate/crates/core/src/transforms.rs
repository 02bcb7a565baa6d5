//! Norm-controlled graph transforms: symmetrization, vertex splitting,
//! clique reduction and greedy star decomposition.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{ComponentStats, DirectedNetwork, Edge, Entry, UndirectedNetwork};
use crate::spectral::spectral_norm_dense;
use crate::structure::{degree_profile, undirected_components, weak_component_labels};

/// `Ã_ij = max(A_ij, A_ji)` off the diagonal, absent entries read as 0.
/// The diagonal is dropped and pairs whose maximum is 0 are absent.
pub fn symmetrize(a: &DirectedNetwork) -> UndirectedNetwork {
    let mut pairs: Vec<(usize, usize, f64)> = a
        .entries()
        .iter()
        .filter(|e| e.row != e.col)
        .map(|e| (e.row.min(e.col), e.row.max(e.col), e.weight))
        .collect();
    pairs.sort_by_key(|x| (x.0, x.1));

    let mut edges = Vec::with_capacity(pairs.len());
    let mut k = 0;
    while k < pairs.len() {
        let (u, v, w) = pairs[k];
        let weight = if k + 1 < pairs.len() && (pairs[k + 1].0, pairs[k + 1].1) == (u, v) {
            k += 2;
            w.max(pairs[k - 1].2)
        } else {
            k += 1;
            w.max(0.0)
        };
        if weight != 0.0 {
            edges.push(Edge { u, v, weight });
        }
    }
    UndirectedNetwork::from_sorted_unchecked(a.order(), edges)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

/// Split-network identities of one original vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SplitIds {
    /// `v₊`, carrying the out-edges.
    pub plus: Option<usize>,
    /// `v₋`, carrying the in-edges.
    pub minus: Option<usize>,
}

/// Provenance of the vertices of a split network.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SplitMap {
    ids: Vec<SplitIds>,
    origin: Vec<(usize, Side)>,
}

impl SplitMap {
    /// `(original vertex, ids)` for every vertex that survived the split.
    pub fn iter(&self) -> impl Iterator<Item = (usize, SplitIds)> + '_ {
        self.ids
            .iter()
            .enumerate()
            .filter(|(_, s)| s.plus.is_some() || s.minus.is_some())
            .map(|(v, s)| (v, *s))
    }

    pub fn ids(&self, original: usize) -> SplitIds {
        self.ids.get(original).copied().unwrap_or_default()
    }

    pub fn origin_of(&self, split_vertex: usize) -> Option<(usize, Side)> {
        self.origin.get(split_vertex).copied()
    }

    /// Number of vertices of the split network.
    pub fn len(&self) -> usize {
        self.origin.len()
    }

    pub fn is_empty(&self) -> bool {
        self.origin.is_empty()
    }

    /// Original vertices that carry at least one edge.
    pub fn retained_count(&self) -> usize {
        self.iter().count()
    }
}

/// Splits every vertex `v` into `v₊` (out-edges) and `v₋` (in-edges).
///
/// A vertex with edges in one direction only keeps a single copy on that
/// side; isolated vertices disappear. Before compaction `v₊ = 2v` and
/// `v₋ = 2v + 1`, so compacted ids keep that order.
pub fn vertex_split(w: &DirectedNetwork) -> (DirectedNetwork, SplitMap) {
    let n = w.order();
    let mut has_out = vec![false; n];
    let mut has_in = vec![false; n];
    for e in w.entries() {
        has_out[e.row] = true;
        has_in[e.col] = true;
    }
    let mut ids = vec![SplitIds::default(); n];
    let mut origin = Vec::new();
    for v in 0..n {
        if has_out[v] {
            ids[v].plus = Some(origin.len());
            origin.push((v, Side::Plus));
        }
        if has_in[v] {
            ids[v].minus = Some(origin.len());
            origin.push((v, Side::Minus));
        }
    }
    // Both maps are increasing, so the canonical (row, col) order survives.
    let entries = w
        .entries()
        .iter()
        .map(|e| Entry {
            row: ids[e.row].plus.expect("row has an out-edge"),
            col: ids[e.col].minus.expect("column has an in-edge"),
            weight: e.weight,
        })
        .collect();
    let split = DirectedNetwork::from_sorted_unchecked(origin.len(), entries);
    (split, SplitMap { ids, origin })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionResult {
    pub h: UndirectedNetwork,
    pub split_map: SplitMap,
    /// Components `H_1, …, H_m` ordered by smallest vertex.
    pub components: Vec<ComponentStats>,
}

/// `H = symmetrize(vertex_split(W))` for a nonnegative network `W`.
pub fn clique_reduce(w: &DirectedNetwork) -> Result<ReductionResult> {
    if let Some(e) = w.entries().iter().find(|e| e.weight < 0.0) {
        return Err(Error::domain(format!(
            "clique reduction needs nonnegative weights; entry ({}, {}) is {}",
            e.row, e.col, e.weight
        )));
    }
    let (split, split_map) = vertex_split(w);
    let h = symmetrize(&split);
    let components = undirected_components(&h).stats;
    Ok(ReductionResult {
        h,
        split_map,
        components,
    })
}

/// Number of triangles, by intersecting sorted neighbour lists.
pub fn triangle_count(u: &UndirectedNetwork) -> usize {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); u.order()];
    for e in u.edges() {
        adj[e.u].push(e.v);
    }
    // edges are sorted by (u, v), so every list is increasing
    let mut count = 0;
    for e in u.edges() {
        let (a, b) = (&adj[e.u], &adj[e.v]);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
    }
    count
}

/// Excess check for one component `H_i` of a reduction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExcessCheck {
    pub excess_h: i64,
    /// Excess of the symmetrization of the weak component of `W` holding `H_i`.
    pub excess_source: i64,
    pub self_loops_source: usize,
    /// `2 * excess_source + self_loops_source`.
    pub literal_bound: i64,
    /// `excess_source + max(excess_source, 0) + self_loops_source`.
    pub bound: i64,
}

impl ExcessCheck {
    pub fn holds(&self) -> bool {
        self.excess_h <= self.bound
    }

    pub fn literal_holds(&self) -> bool {
        self.excess_h <= self.literal_bound
    }

    /// The source component contains a cycle, where both bounds coincide.
    pub fn source_is_cyclic(&self) -> bool {
        self.excess_source >= 0
    }
}

/// Every reduction property measured on one input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionAudit {
    pub edges_w: usize,
    pub edges_h: usize,
    pub vertices_w: usize,
    pub vertices_h: usize,
    pub d1_w: usize,
    pub d1_h: usize,
    pub triangles: usize,
    pub weights_rearranged: bool,
    pub excess: Vec<ExcessCheck>,
    pub norm_w: f64,
    pub norm_split: f64,
    pub norm_h: f64,
}

impl ReductionAudit {
    pub fn edges_preserved(&self) -> bool {
        self.edges_w == self.edges_h
    }

    pub fn vertex_bound(&self) -> bool {
        self.vertices_h <= 2 * self.vertices_w
    }

    pub fn degree_bound(&self) -> bool {
        self.d1_h <= self.d1_w
    }

    pub fn triangle_free(&self) -> bool {
        self.triangles == 0
    }

    pub fn excess_bound(&self) -> bool {
        self.excess.iter().all(ExcessCheck::holds)
    }

    pub fn literal_excess_violations(&self) -> usize {
        self.excess.iter().filter(|c| !c.literal_holds()).count()
    }

    pub fn split_norm_preserved(&self, rel_tol: f64) -> bool {
        (self.norm_w - self.norm_split).abs() <= rel_tol * self.norm_w.max(1.0)
    }

    pub fn norm_bound(&self, tol: f64) -> bool {
        self.norm_w <= self.norm_h + tol
    }

    pub fn all_hold(&self, tol: f64) -> bool {
        self.edges_preserved()
            && self.vertex_bound()
            && self.degree_bound()
            && self.triangle_free()
            && self.weights_rearranged
            && self.excess_bound()
            && self.split_norm_preserved(tol)
            && self.norm_bound(tol)
    }
}

/// Measures every property of `clique_reduce(w)` against `w`, using the
/// dense engine for the three norms.
pub fn audit_reduction(w: &DirectedNetwork, r: &ReductionResult) -> Result<ReductionAudit> {
    let (split, _) = vertex_split(w);

    let mut wa: Vec<f64> = w.entries().iter().map(|e| e.weight).collect();
    let mut wb: Vec<f64> = r.h.edges().iter().map(|e| e.weight).collect();
    wa.sort_by(f64::total_cmp);
    wb.sort_by(f64::total_cmp);

    // Weak components of W, their symmetrized excess and self-loop counts.
    let labels = weak_component_labels(w);
    let mut comp_vertices = vec![0i64; labels.count];
    for v in 0..w.order() {
        comp_vertices[labels.labels[v]] += 1;
    }
    let mut comp_edges = vec![0i64; labels.count];
    for e in symmetrize(&w.support()).edges() {
        comp_edges[labels.labels[e.u]] += 1;
    }
    let mut comp_loops = vec![0usize; labels.count];
    for e in w.entries().iter().filter(|e| e.row == e.col) {
        comp_loops[labels.labels[e.row]] += 1;
    }

    let h_labels = undirected_components(&r.h);
    let mut excess = Vec::with_capacity(h_labels.stats.len());
    for (c, stats) in h_labels.stats.iter().enumerate() {
        let rep = h_labels.labels.iter().position(|&l| l == c).expect("nonempty");
        let (orig, _) = r.split_map.origin_of(rep).expect("split vertex has an origin");
        let src = labels.labels[orig];
        let ex = comp_edges[src] - comp_vertices[src];
        let loops = comp_loops[src];
        excess.push(ExcessCheck {
            excess_h: stats.excess,
            excess_source: ex,
            self_loops_source: loops,
            literal_bound: 2 * ex + loops as i64,
            bound: ex + ex.max(0) + loops as i64,
        });
    }

    Ok(ReductionAudit {
        edges_w: w.nnz(),
        edges_h: r.h.edge_count(),
        vertices_w: r.split_map.retained_count(),
        vertices_h: r.h.order(),
        d1_w: degree_profile(w).d1,
        d1_h: r.h.max_degree(),
        triangles: triangle_count(&r.h),
        weights_rearranged: wa == wb,
        excess,
        norm_w: spectral_norm_dense(w)?.value,
        norm_split: spectral_norm_dense(&split)?.value,
        norm_h: spectral_norm_dense(&r.h)?.value,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Star {
    pub hub: usize,
    pub leaves: Vec<usize>,
    /// The star's edges on the full vertex set.
    pub network: UndirectedNetwork,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StarDecomposition {
    pub threshold: usize,
    pub stars: Vec<Star>,
    pub remainder: UndirectedNetwork,
    /// Remainder maximum degree is below the threshold.
    pub success: bool,
}

impl StarDecomposition {
    /// Union of all stars as one network.
    pub fn star_part(&self) -> UndirectedNetwork {
        let mut edges: Vec<Edge> = self
            .stars
            .iter()
            .flat_map(|s| s.network.edges().iter().copied())
            .collect();
        edges.sort_by_key(|e| (e.u, e.v));
        UndirectedNetwork::from_sorted_unchecked(self.remainder.order(), edges)
    }
}

/// Greedy decomposition into vertex-disjoint stars plus a remainder.
///
/// Vertices of degree at least `threshold` are visited by descending degree
/// (ties by index). An unclaimed one becomes a hub and claims its unclaimed
/// neighbours as leaves. Every edge ends up in exactly one star or in the
/// remainder.
pub fn star_decompose(u: &UndirectedNetwork, threshold: usize) -> Result<StarDecomposition> {
    if threshold == 0 {
        return Err(Error::domain("star threshold must be >= 1"));
    }
    let n = u.order();
    let deg = u.degrees();
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for e in u.edges() {
        adj[e.u].push((e.v, e.weight));
        adj[e.v].push((e.u, e.weight));
    }
    let mut hubs: Vec<usize> = (0..n).filter(|&v| deg[v] >= threshold).collect();
    hubs.sort_by(|&a, &b| deg[b].cmp(&deg[a]).then(a.cmp(&b)));

    let mut claimed = vec![false; n];
    let mut in_star = std::collections::HashSet::new();
    let mut stars = Vec::new();
    for hub in hubs {
        if claimed[hub] {
            continue;
        }
        claimed[hub] = true;
        let mut leaves = Vec::new();
        let mut edges = Vec::new();
        for &(v, w) in &adj[hub] {
            if !claimed[v] {
                claimed[v] = true;
                leaves.push(v);
                let (a, b) = (hub.min(v), hub.max(v));
                edges.push(Edge { u: a, v: b, weight: w });
                in_star.insert((a, b));
            }
        }
        if leaves.is_empty() {
            continue;
        }
        leaves.sort_unstable();
        edges.sort_by_key(|e| (e.u, e.v));
        stars.push(Star {
            hub,
            leaves,
            network: UndirectedNetwork::from_sorted_unchecked(n, edges),
        });
    }
    let remainder = u.filter_edges(|e| !in_star.contains(&(e.u, e.v)));
    let success = remainder.max_degree() < threshold;
    Ok(StarDecomposition {
        threshold,
        stars,
        remainder,
        success,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn both_sided_triangle() -> DirectedNetwork {
        DirectedNetwork::new(
            3,
            [(0, 1, 1.0), (1, 0, 1.0), (1, 2, 1.0), (2, 1, 1.0), (0, 2, 1.0), (2, 0, 1.0)],
        )
        .unwrap()
    }

    #[test]
    fn symmetrize_examples() {
        let a = DirectedNetwork::new(2, [(0, 1, 3.0), (1, 0, 5.0)]).unwrap();
        let s = symmetrize(&a);
        assert_eq!(s.edges(), &[Edge { u: 0, v: 1, weight: 5.0 }]);
        let loop_only = DirectedNetwork::new(3, [(2, 2, 7.0)]).unwrap();
        assert!(symmetrize(&loop_only).is_empty());
        assert!(symmetrize(&DirectedNetwork::empty(4)).is_empty());
    }

    #[test]
    fn symmetrize_negative_one_sided_vanishes() {
        let a = DirectedNetwork::new(3, [(0, 1, -2.0), (1, 2, -1.0), (2, 1, -3.0)]).unwrap();
        let s = symmetrize(&a);
        assert_eq!(s.edges(), &[Edge { u: 1, v: 2, weight: -1.0 }]);
    }

    #[test]
    fn symmetrize_of_lift_is_identity() {
        let u = UndirectedNetwork::new(4, [(0, 1, 2.0), (1, 3, 0.5), (2, 3, 1.5)]).unwrap();
        assert_eq!(symmetrize(&u.to_directed()), u);
    }

    #[test]
    fn split_triangle() {
        let (split, map) = vertex_split(&both_sided_triangle());
        assert_eq!(split.order(), 6);
        assert_eq!(split.nnz(), 6);
        for e in split.entries() {
            assert_eq!(map.origin_of(e.row).unwrap().1, Side::Plus);
            assert_eq!(map.origin_of(e.col).unwrap().1, Side::Minus);
        }
    }

    #[test]
    fn split_single_edge_and_loop() {
        let w = DirectedNetwork::new(5, [(3, 1, 2.0)]).unwrap();
        let (split, map) = vertex_split(&w);
        assert_eq!(split.order(), 2);
        // 1 keeps only its minus copy (raw id 3), 3 only its plus copy (raw 6)
        assert_eq!(map.ids(1), SplitIds { plus: None, minus: Some(0) });
        assert_eq!(map.ids(3), SplitIds { plus: Some(1), minus: None });
        assert_eq!(split.entries(), &[Entry { row: 1, col: 0, weight: 2.0 }]);
        assert_eq!(map.iter().count(), 2);

        let l = DirectedNetwork::new(1, [(0, 0, 4.0)]).unwrap();
        let (split, map) = vertex_split(&l);
        assert_eq!(map.ids(0), SplitIds { plus: Some(0), minus: Some(1) });
        assert_eq!(split.entries(), &[Entry { row: 0, col: 1, weight: 4.0 }]);
    }

    #[test]
    fn reduce_triangle_figure() {
        let w = both_sided_triangle();
        let r = clique_reduce(&w).unwrap();
        assert_eq!(r.h.order(), 6);
        assert_eq!(r.h.edge_count(), 6);
        assert_eq!(triangle_count(&r.h), 0);
        // the split triangle closes into a single 6-cycle
        assert_eq!(r.components.len(), 1);
        assert_eq!(r.components[0].excess, 0);
        let audit = audit_reduction(&w, &r).unwrap();
        assert!((audit.norm_w - 2.0).abs() < 1e-12);
        assert!(audit.all_hold(1e-9), "{audit:?}");
    }

    #[test]
    fn reduce_rejects_negative() {
        let w = DirectedNetwork::new(2, [(0, 1, -1.0)]).unwrap();
        assert!(matches!(clique_reduce(&w), Err(Error::Domain(_))));
    }

    #[test]
    fn literal_excess_bound_fails_on_trees() {
        // One directed edge: H is one edge, excess -1, but 2 * (-1) + 0 = -2.
        let w = DirectedNetwork::new(2, [(0, 1, 1.0)]).unwrap();
        let r = clique_reduce(&w).unwrap();
        let audit = audit_reduction(&w, &r).unwrap();
        assert_eq!(audit.literal_excess_violations(), 1);
        assert!(audit.excess_bound());
        assert!(audit.all_hold(1e-9));
    }

    #[test]
    fn triangle_counter() {
        let k4 = UndirectedNetwork::new(
            4,
            [(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0), (1, 2, 1.0), (1, 3, 1.0), (2, 3, 1.0)],
        )
        .unwrap();
        assert_eq!(triangle_count(&k4), 4);
        let c4 = UndirectedNetwork::new(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0)])
            .unwrap();
        assert_eq!(triangle_count(&c4), 0);
    }

    #[test]
    fn star_examples() {
        let star = UndirectedNetwork::new(6, (1..6).map(|v| (0, v, v as f64))).unwrap();
        let d = star_decompose(&star, 3).unwrap();
        assert_eq!(d.stars.len(), 1);
        assert_eq!(d.stars[0].hub, 0);
        assert!(d.remainder.is_empty());
        assert!(d.success);

        let path = UndirectedNetwork::new(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]).unwrap();
        let d = star_decompose(&path, 3).unwrap();
        assert!(d.stars.is_empty());
        assert_eq!(d.remainder, path);
        assert!(d.success);

        assert!(star_decompose(&path, 0).is_err());
    }

    #[test]
    fn star_failure_is_reported() {
        // Two adjacent hubs: the second loses its claim and keeps degree 3.
        let mut edges = vec![(0, 1, 1.0)];
        edges.extend((2..5).map(|v| (0, v, 1.0)));
        edges.extend((5..8).map(|v| (1, v, 1.0)));
        let u = UndirectedNetwork::new(8, edges).unwrap();
        let d = star_decompose(&u, 3).unwrap();
        assert_eq!(d.stars.len(), 1);
        assert_eq!(d.remainder.max_degree(), 3);
        assert!(!d.success);
        assert_eq!(d.star_part().edge_count() + d.remainder.edge_count(), u.edge_count());
    }
}
