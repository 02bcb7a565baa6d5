//! Network data model.
//!
//! A [`DirectedNetwork`] is a sparse real `n x n` matrix viewed as a weighted
//! digraph: entry `(i, j, w)` is the edge `i -> j` with weight `w`. An
//! [`UndirectedNetwork`] is a sparse symmetric matrix with zero diagonal,
//! stored as edges `(u, v, w)` with `u < v`.
//!
//! Both types are kept in canonical form: entries sorted by `(row, col)`,
//! no duplicates, no explicit zeros. Structural zero means "absent".

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default order above which dense paths refuse to run.
pub const DEFAULT_DENSE_CAP: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub row: usize,
    pub col: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

/// Anything that can be viewed as a sparse real matrix.
pub trait MatrixView {
    /// `(rows, cols)`.
    fn shape(&self) -> (usize, usize);

    /// Visits every structurally nonzero entry `(row, col, value)` once.
    fn for_each_entry(&self, f: &mut dyn FnMut(usize, usize, f64));
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DirectedNetwork {
    n: usize,
    entries: Vec<Entry>,
}

impl DirectedNetwork {
    pub fn empty(n: usize) -> Self {
        DirectedNetwork {
            n,
            entries: Vec::new(),
        }
    }

    /// Builds a network from `(row, col, weight)` triples in any order.
    ///
    /// Rejects out-of-range indices, non-finite or zero weights and repeated
    /// ordered pairs.
    pub fn new(n: usize, entries: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut out: Vec<Entry> = Vec::new();
        for (row, col, weight) in entries {
            if row >= n || col >= n {
                return Err(Error::domain(format!(
                    "entry ({row}, {col}) out of range for n = {n}"
                )));
            }
            if !weight.is_finite() {
                return Err(Error::domain(format!("non-finite weight at ({row}, {col})")));
            }
            if weight == 0.0 {
                return Err(Error::domain(format!(
                    "explicit zero weight at ({row}, {col})"
                )));
            }
            out.push(Entry { row, col, weight });
        }
        out.sort_by_key(|e| (e.row, e.col));
        if let Some(w) = out
            .windows(2)
            .find(|w| (w[0].row, w[0].col) == (w[1].row, w[1].col))
        {
            return Err(Error::domain(format!(
                "duplicate entry ({}, {})",
                w[0].row, w[0].col
            )));
        }
        Ok(DirectedNetwork { n, entries: out })
    }

    /// Internal constructor for callers that already hold canonical entries.
    pub(crate) fn from_sorted_unchecked(n: usize, entries: Vec<Entry>) -> Self {
        debug_assert!(entries
            .windows(2)
            .all(|w| (w[0].row, w[0].col) < (w[1].row, w[1].col)));
        debug_assert!(entries.iter().all(|e| e.weight != 0.0 && e.weight.is_finite()));
        DirectedNetwork { n, entries }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn weight(&self, row: usize, col: usize) -> Option<f64> {
        self.entries
            .binary_search_by_key(&(row, col), |e| (e.row, e.col))
            .ok()
            .map(|k| self.entries[k].weight)
    }

    pub fn self_loop_count(&self) -> usize {
        self.entries.iter().filter(|e| e.row == e.col).count()
    }

    pub fn max_abs_weight(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.weight.abs())
            .fold(0.0, f64::max)
    }

    /// True when every weight is exactly 1 (an adjacency matrix).
    pub fn is_indicator(&self) -> bool {
        self.entries.iter().all(|e| e.weight == 1.0)
    }

    /// Same support, weights replaced by their absolute values.
    pub fn abs(&self) -> DirectedNetwork {
        let entries = self
            .entries
            .iter()
            .map(|e| Entry {
                weight: e.weight.abs(),
                ..*e
            })
            .collect();
        DirectedNetwork::from_sorted_unchecked(self.n, entries)
    }

    /// Same support, all weights set to 1.
    pub fn support(&self) -> DirectedNetwork {
        let entries = self
            .entries
            .iter()
            .map(|e| Entry { weight: 1.0, ..*e })
            .collect();
        DirectedNetwork::from_sorted_unchecked(self.n, entries)
    }

    pub fn transpose(&self) -> DirectedNetwork {
        let mut entries: Vec<Entry> = self
            .entries
            .iter()
            .map(|e| Entry {
                row: e.col,
                col: e.row,
                weight: e.weight,
            })
            .collect();
        entries.sort_by_key(|e| (e.row, e.col));
        DirectedNetwork::from_sorted_unchecked(self.n, entries)
    }

    /// Dense `n x n` copy, refusing orders above [`DEFAULT_DENSE_CAP`].
    pub fn dense_matrix(&self) -> Result<DenseMatrix> {
        self.dense_matrix_capped(DEFAULT_DENSE_CAP)
    }

    pub fn dense_matrix_capped(&self, cap: usize) -> Result<DenseMatrix> {
        if self.n > cap {
            return Err(Error::Size { n: self.n, cap });
        }
        DenseMatrix::from_view(self)
    }

    /// Restriction to the given rows and columns, re-indexed by position.
    ///
    /// The result is square of order `max(rows.len(), cols.len())`; when the
    /// two index sets differ in size the missing rows or columns are zero,
    /// which leaves every singular value unchanged.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Result<DirectedNetwork> {
        let row_pos = position_map(rows, self.n, "row")?;
        let col_pos = position_map(cols, self.n, "column")?;
        let n = rows.len().max(cols.len());
        let kept = self.entries.iter().filter_map(|e| {
            let r = *row_pos.get(&e.row)?;
            let c = *col_pos.get(&e.col)?;
            Some((r, c, e.weight))
        });
        DirectedNetwork::new(n, kept)
    }

    /// Dense `rows.len() x cols.len()` block, for rectangular checks.
    pub fn dense_block(&self, rows: &[usize], cols: &[usize]) -> Result<DenseMatrix> {
        let row_pos = position_map(rows, self.n, "row")?;
        let col_pos = position_map(cols, self.n, "column")?;
        let mut m = DenseMatrix::zeros(rows.len(), cols.len());
        for e in &self.entries {
            if let (Some(&r), Some(&c)) = (row_pos.get(&e.row), col_pos.get(&e.col)) {
                m.set(r, c, e.weight);
            }
        }
        Ok(m)
    }
}

fn position_map(index: &[usize], n: usize, what: &str) -> Result<HashMap<usize, usize>> {
    let mut map = HashMap::with_capacity(index.len());
    for (pos, &i) in index.iter().enumerate() {
        if i >= n {
            return Err(Error::domain(format!("{what} index {i} out of range for n = {n}")));
        }
        if map.insert(i, pos).is_some() {
            return Err(Error::domain(format!("{what} index {i} repeated")));
        }
    }
    Ok(map)
}

impl MatrixView for DirectedNetwork {
    fn shape(&self) -> (usize, usize) {
        (self.n, self.n)
    }

    fn for_each_entry(&self, f: &mut dyn FnMut(usize, usize, f64)) {
        for e in &self.entries {
            f(e.row, e.col, e.weight);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct UndirectedNetwork {
    n: usize,
    edges: Vec<Edge>,
}

impl UndirectedNetwork {
    pub fn empty(n: usize) -> Self {
        UndirectedNetwork {
            n,
            edges: Vec::new(),
        }
    }

    /// Builds a network from `(u, v, weight)` triples; endpoints may be given
    /// in either order but each unordered pair at most once.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut out = Vec::new();
        for (a, b, weight) in edges {
            if a >= n || b >= n {
                return Err(Error::domain(format!(
                    "edge ({a}, {b}) out of range for n = {n}"
                )));
            }
            if a == b {
                return Err(Error::domain(format!("self-loop at {a} in undirected network")));
            }
            if !weight.is_finite() {
                return Err(Error::domain(format!("non-finite weight on ({a}, {b})")));
            }
            if weight == 0.0 {
                return Err(Error::domain(format!("explicit zero weight on ({a}, {b})")));
            }
            out.push(Edge {
                u: a.min(b),
                v: a.max(b),
                weight,
            });
        }
        out.sort_by_key(|e| (e.u, e.v));
        if let Some(w) = out.windows(2).find(|w| (w[0].u, w[0].v) == (w[1].u, w[1].v)) {
            return Err(Error::domain(format!(
                "duplicate edge ({}, {})",
                w[0].u, w[0].v
            )));
        }
        Ok(UndirectedNetwork { n, edges: out })
    }

    pub(crate) fn from_sorted_unchecked(n: usize, edges: Vec<Edge>) -> Self {
        debug_assert!(edges.iter().all(|e| e.u < e.v && e.v < n));
        debug_assert!(edges.windows(2).all(|w| (w[0].u, w[0].v) < (w[1].u, w[1].v)));
        UndirectedNetwork { n, edges }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn weight(&self, a: usize, b: usize) -> Option<f64> {
        let key = (a.min(b), a.max(b));
        self.edges
            .binary_search_by_key(&key, |e| (e.u, e.v))
            .ok()
            .map(|k| self.edges[k].weight)
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            deg[e.u] += 1;
            deg[e.v] += 1;
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// The symmetric matrix as a directed network with both orientations.
    pub fn to_directed(&self) -> DirectedNetwork {
        let mut entries: Vec<Entry> = self
            .edges
            .iter()
            .flat_map(|e| {
                [
                    Entry {
                        row: e.u,
                        col: e.v,
                        weight: e.weight,
                    },
                    Entry {
                        row: e.v,
                        col: e.u,
                        weight: e.weight,
                    },
                ]
            })
            .collect();
        entries.sort_by_key(|e| (e.row, e.col));
        DirectedNetwork::from_sorted_unchecked(self.n, entries)
    }

    pub fn dense_matrix(&self) -> Result<DenseMatrix> {
        if self.n > DEFAULT_DENSE_CAP {
            return Err(Error::Size {
                n: self.n,
                cap: DEFAULT_DENSE_CAP,
            });
        }
        DenseMatrix::from_view(self)
    }

    /// Sub-network on the edges selected by `keep`, same vertex set.
    pub fn filter_edges(&self, mut keep: impl FnMut(&Edge) -> bool) -> UndirectedNetwork {
        let edges = self.edges.iter().filter(|e| keep(e)).copied().collect();
        UndirectedNetwork::from_sorted_unchecked(self.n, edges)
    }
}

impl MatrixView for UndirectedNetwork {
    fn shape(&self) -> (usize, usize) {
        (self.n, self.n)
    }

    fn for_each_entry(&self, f: &mut dyn FnMut(usize, usize, f64)) {
        for e in &self.edges {
            f(e.u, e.v, e.weight);
            f(e.v, e.u, e.weight);
        }
    }
}

/// Statistics of one connected component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentStats {
    pub vertex_count: usize,
    pub edge_count: usize,
    /// `edge_count - vertex_count`; at least -1 for a connected component.
    pub excess: i64,
    pub self_loop_count: usize,
    pub max_degree: usize,
}

/// Row-major dense real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::domain("ragged rows"));
        }
        Ok(DenseMatrix {
            rows: r,
            cols: c,
            data: rows.concat(),
        })
    }

    pub fn from_view(view: &dyn MatrixView) -> Result<Self> {
        let (r, c) = view.shape();
        let mut m = DenseMatrix::zeros(r, c);
        view.for_each_entry(&mut |i, j, w| m.set(i, j, w));
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Back to a sparse network (square matrices only), dropping zeros.
    pub fn to_network(&self) -> Result<DirectedNetwork> {
        if self.rows != self.cols {
            return Err(Error::domain("only square matrices convert to networks"));
        }
        let mut entries = Vec::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let w = self.get(i, j);
                if w != 0.0 {
                    entries.push(Entry { row: i, col: j, weight: w });
                }
            }
        }
        Ok(DirectedNetwork::from_sorted_unchecked(self.rows, entries))
    }
}

impl MatrixView for DenseMatrix {
    fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    fn for_each_entry(&self, f: &mut dyn FnMut(usize, usize, f64)) {
        for i in 0..self.rows {
            for j in 0..self.cols {
                let w = self.get(i, j);
                if w != 0.0 {
                    f(i, j, w);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_network_is_zero_matrix() {
        let m = DirectedNetwork::empty(3).dense_matrix().unwrap();
        assert_eq!((m.rows(), m.cols()), (3, 3));
        assert_eq!(m.max_abs(), 0.0);
    }

    #[test]
    fn single_entry_lands_in_place() {
        let net = DirectedNetwork::new(3, [(0, 1, 2.5)]).unwrap();
        let m = net.dense_matrix().unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if (i, j) == (0, 1) { 2.5 } else { 0.0 };
                assert_eq!(m.get(i, j), want);
            }
        }
    }

    #[test]
    fn dense_cap_is_enforced() {
        let net = DirectedNetwork::empty(10);
        assert!(matches!(
            net.dense_matrix_capped(5),
            Err(Error::Size { n: 10, cap: 5 })
        ));
    }

    #[test]
    fn constructor_validates() {
        assert!(DirectedNetwork::new(2, [(0, 2, 1.0)]).is_err());
        assert!(DirectedNetwork::new(2, [(0, 1, 0.0)]).is_err());
        assert!(DirectedNetwork::new(2, [(0, 1, f64::NAN)]).is_err());
        assert!(DirectedNetwork::new(2, [(0, 1, 1.0), (0, 1, 2.0)]).is_err());
        assert!(UndirectedNetwork::new(2, [(1, 1, 1.0)]).is_err());
        assert!(UndirectedNetwork::new(3, [(0, 1, 1.0), (1, 0, 2.0)]).is_err());
    }

    #[test]
    fn canonical_order_is_independent_of_input_order() {
        let a = DirectedNetwork::new(3, [(2, 0, 1.0), (0, 1, 2.0), (1, 1, 3.0)]).unwrap();
        let b = DirectedNetwork::new(3, [(1, 1, 3.0), (2, 0, 1.0), (0, 1, 2.0)]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.weight(1, 1), Some(3.0));
        assert_eq!(a.weight(1, 0), None);
        assert_eq!(a.self_loop_count(), 1);
    }

    #[test]
    fn minor_identity_and_empty() {
        let net = DirectedNetwork::new(3, [(0, 1, 1.0), (2, 2, -4.0), (1, 0, 0.5)]).unwrap();
        let all = [0, 1, 2];
        assert_eq!(net.minor(&all, &all).unwrap(), net);
        let none = net.minor(&[], &all).unwrap();
        assert!(none.is_empty());
        assert!(net.minor(&[3], &all).is_err());
        assert!(net.minor(&[0, 0], &all).is_err());
    }

    #[test]
    fn minor_reindexes_by_position() {
        let net = DirectedNetwork::new(4, [(3, 1, 7.0), (0, 1, 1.0)]).unwrap();
        let m = net.minor(&[3, 2], &[1]).unwrap();
        assert_eq!(m.order(), 2);
        assert_eq!(m.entries(), &[Entry { row: 0, col: 0, weight: 7.0 }]);
    }

    #[test]
    fn undirected_lift_is_symmetric() {
        let u = UndirectedNetwork::new(3, [(2, 0, 1.5), (0, 1, 2.0)]).unwrap();
        let d = u.to_directed();
        assert_eq!(d.nnz(), 4);
        assert_eq!(d, d.transpose());
        assert_eq!(u.degrees(), vec![2, 1, 1]);
    }
}
