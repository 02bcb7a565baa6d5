//! Structural statistics and event indicators of sampled networks.
//!
//! Degree scale `t_n = log n / log log n` and `g(γ) = ⌈γ t_n⌉` use the
//! natural logarithm and are only defined for `n >= 16`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{ComponentStats, DirectedNetwork, UndirectedNetwork};
use crate::randgen::{truncate_split, truncation_level};
use crate::transforms::{star_decompose, symmetrize};

/// Smallest size accepted by the degree-scale formulas.
pub const MIN_ORDER: usize = 16;

fn check_order(n: usize) -> Result<()> {
    if n < MIN_ORDER {
        return Err(Error::domain(format!("n must be >= {MIN_ORDER}, got {n}")));
    }
    Ok(())
}

/// `t_n = log n / log log n`.
pub fn t_n(n: usize) -> Result<f64> {
    check_order(n)?;
    let l = (n as f64).ln();
    Ok(l / l.ln())
}

/// `g(γ) = ⌈γ t_n⌉`.
pub fn degree_threshold(gamma: f64, n: usize) -> Result<usize> {
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::domain(format!("gamma must be >= 0, got {gamma}")));
    }
    Ok((gamma * t_n(n)?).ceil() as usize)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeProfile {
    pub d_in: Vec<usize>,
    pub d_out: Vec<usize>,
    /// `max(d_in, d_out)` per vertex.
    pub degree: Vec<usize>,
    pub d1: usize,
}

/// Directed degrees; a self-loop adds one to both `d_in` and `d_out`.
pub fn degree_profile(net: &DirectedNetwork) -> DegreeProfile {
    let n = net.order();
    let mut d_in = vec![0; n];
    let mut d_out = vec![0; n];
    for e in net.entries() {
        d_out[e.row] += 1;
        d_in[e.col] += 1;
    }
    let degree: Vec<usize> = d_in.iter().zip(&d_out).map(|(a, b)| *a.max(b)).collect();
    let d1 = degree.iter().copied().max().unwrap_or(0);
    DegreeProfile {
        d_in,
        d_out,
        degree,
        d1,
    }
}

/// Undirected degrees, reported with `d_in = d_out = degree`.
pub fn undirected_degree_profile(net: &UndirectedNetwork) -> DegreeProfile {
    let degree = net.degrees();
    let d1 = degree.iter().copied().max().unwrap_or(0);
    DegreeProfile {
        d_in: degree.clone(),
        d_out: degree.clone(),
        degree,
        d1,
    }
}

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }

    /// Dense labels numbered by first appearance in vertex order.
    fn labels(&mut self) -> ComponentLabels {
        let n = self.parent.len();
        let mut root_label = vec![usize::MAX; n];
        let mut labels = vec![0; n];
        let mut count = 0;
        for v in 0..n {
            let r = self.find(v);
            if root_label[r] == usize::MAX {
                root_label[r] = count;
                count += 1;
            }
            labels[v] = root_label[r];
        }
        ComponentLabels { labels, count }
    }
}

/// Component index of every vertex; components are numbered by their
/// smallest vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentLabels {
    pub labels: Vec<usize>,
    pub count: usize,
}

/// Weakly connected components of a directed network.
pub fn weak_component_labels(net: &DirectedNetwork) -> ComponentLabels {
    let mut uf = UnionFind::new(net.order());
    for e in net.entries() {
        uf.union(e.row, e.col);
    }
    uf.labels()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Components {
    pub labels: Vec<usize>,
    pub stats: Vec<ComponentStats>,
}

/// Connected components of an undirected network with their statistics.
pub fn undirected_components(net: &UndirectedNetwork) -> Components {
    let mut uf = UnionFind::new(net.order());
    for e in net.edges() {
        uf.union(e.u, e.v);
    }
    let ComponentLabels { labels, count } = uf.labels();
    let deg = net.degrees();
    let mut stats = vec![
        ComponentStats {
            vertex_count: 0,
            edge_count: 0,
            excess: 0,
            self_loop_count: 0,
            max_degree: 0,
        };
        count
    ];
    for (v, &c) in labels.iter().enumerate() {
        stats[c].vertex_count += 1;
        stats[c].max_degree = stats[c].max_degree.max(deg[v]);
    }
    for e in net.edges() {
        stats[labels[e.u]].edge_count += 1;
    }
    for s in &mut stats {
        s.excess = s.edge_count as i64 - s.vertex_count as i64;
    }
    Components { labels, stats }
}

/// Weak components of a directed network.
///
/// `edge_count` counts directed entries, self-loops once, so the counts sum
/// to `nnz`. `max_degree` is the directed degree `max(d_in, d_out)`.
pub fn components(net: &DirectedNetwork) -> Vec<ComponentStats> {
    let ComponentLabels { labels, count } = weak_component_labels(net);
    let profile = degree_profile(net);
    let mut stats = vec![
        ComponentStats {
            vertex_count: 0,
            edge_count: 0,
            excess: 0,
            self_loop_count: 0,
            max_degree: 0,
        };
        count
    ];
    for (v, &c) in labels.iter().enumerate() {
        stats[c].vertex_count += 1;
        stats[c].max_degree = stats[c].max_degree.max(profile.degree[v]);
    }
    for e in net.entries() {
        let s = &mut stats[labels[e.row]];
        s.edge_count += 1;
        if e.row == e.col {
            s.self_loop_count += 1;
        }
    }
    for s in &mut stats {
        s.excess = s.edge_count as i64 - s.vertex_count as i64;
    }
    stats
}

/// Sizes of the degree level sets `D_γ = {v : deg(v) >= g(γ)}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSets {
    pub kappa: f64,
    /// Largest `m` with `m κ < 1 <= (m + 1) κ`.
    pub m: usize,
    /// `g(iκ)` for `i = 0..=m`.
    pub thresholds: Vec<usize>,
    /// `|D_{iκ}|` for `i = 0..=m`.
    pub counts: Vec<usize>,
    pub top_threshold: usize,
    /// `|D_{1+κ}|`.
    pub top_count: usize,
}

pub fn kappa_grid_index(kappa: f64) -> Result<usize> {
    if !(kappa > 0.0 && kappa < 1.0) {
        return Err(Error::domain(format!("kappa must lie in (0, 1), got {kappa}")));
    }
    let mut m = (1.0 / kappa).ceil() as usize;
    while m > 0 && m as f64 * kappa >= 1.0 {
        m -= 1;
    }
    while ((m + 1) as f64) * kappa < 1.0 {
        m += 1;
    }
    Ok(m)
}

pub fn degree_level_sets(u: &UndirectedNetwork, kappa: f64, n: usize) -> Result<LevelSets> {
    let m = kappa_grid_index(kappa)?;
    let deg = u.degrees();
    // vertices beyond the network's order have degree 0
    let missing = n.saturating_sub(deg.len());
    let count_at = |g: usize| deg.iter().filter(|&&d| d >= g).count() + if g == 0 { missing } else { 0 };
    let thresholds = (0..=m)
        .map(|i| degree_threshold(i as f64 * kappa, n))
        .collect::<Result<Vec<_>>>()?;
    let counts = thresholds.iter().map(|&g| count_at(g)).collect();
    let top_threshold = degree_threshold(1.0 + kappa, n)?;
    Ok(LevelSets {
        kappa,
        m,
        thresholds,
        counts,
        top_threshold,
        top_count: count_at(top_threshold),
    })
}

/// Parameters of an event census.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CensusParams {
    pub alpha: f64,
    pub d: f64,
    /// Deviation entering `ℒ`.
    pub delta: f64,
    /// Truncation parameter; without it no entries are truncated and `𝒞`
    /// uses `ε = 1`.
    pub epsilon: Option<f64>,
    pub kappa: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub delta3: f64,
    pub delta4: f64,
}

impl CensusParams {
    /// `δ₁ = δ₂ = δ₃ = (1 + δ)² - 1`, and `δ₄` equal to the same value.
    pub fn from_delta(alpha: f64, d: f64, delta: f64, epsilon: Option<f64>, kappa: f64) -> Self {
        let dd = (1.0 + delta).powi(2) - 1.0;
        CensusParams {
            alpha,
            d,
            delta,
            epsilon,
            kappa,
            delta1: dd,
            delta2: dd,
            delta3: dd,
            delta4: dd,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0) {
            return Err(Error::domain(format!("alpha must be > 0, got {}", self.alpha)));
        }
        if !(self.d >= 0.0) {
            return Err(Error::domain(format!("d must be >= 0, got {}", self.d)));
        }
        if !(self.delta > -1.0) {
            return Err(Error::domain(format!("delta must be > -1, got {}", self.delta)));
        }
        if let Some(eps) = self.epsilon {
            if !(eps > 0.0) {
                return Err(Error::domain(format!("epsilon must be > 0, got {eps}")));
            }
        }
        for (name, v) in [
            ("delta1", self.delta1),
            ("delta2", self.delta2),
            ("delta3", self.delta3),
            ("delta4", self.delta4),
        ] {
            if !v.is_finite() {
                return Err(Error::domain(format!("{name} must be finite")));
            }
        }
        kappa_grid_index(self.kappa).map(|_| ())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventFlags {
    /// `𝒟`: `d₁(X̃⁽¹⁾) <= (1 + δ₁) t_n`.
    pub degree: bool,
    /// `𝒞`: every component of `X̃⁽¹⁾` has at most `(1 + δ₂) t_n / ε` vertices.
    pub component_size: bool,
    /// `ℰ`: every component of `X̃⁽¹⁾` has excess at most `δ₃`.
    pub excess: bool,
    /// `𝒫_κ`: `|D_{iκ}| <= n^{1 - iκ + κ}` for `i = 0..=m`.
    pub level_sets: bool,
    /// `ℒ`: `|D_{1+κ}| <= (1 + δ)² / κ`.
    pub large_degree: bool,
    /// `ℛ`: `d₁(X̃⁽¹⁾) < g(1 + κ)`.
    pub max_degree: bool,
    /// `ℳ`: `|E(X)| >= d n / 2`.
    pub edge_count: bool,
    /// `ℱ`: every weak component of `X⁽¹⁾` has fewer than `δ₄` self-loops.
    pub self_loops: bool,
    /// Greedy star decomposition of `X̃⁽¹⁾` at `g(κ)` succeeded.
    pub stars: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventCensus {
    pub n: usize,
    pub t_n: f64,
    pub tau: f64,
    pub d1: usize,
    pub max_component: usize,
    pub max_excess: i64,
    pub level_sets: LevelSets,
    pub star_threshold: usize,
    pub edge_count: usize,
    pub max_self_loops: usize,
    pub flags: EventFlags,
}

/// Evaluates every event on `z`.
///
/// With `epsilon` set, `X⁽¹⁾` is the support of the entries of `z` above
/// `(ε log log n)^(1/α)`; otherwise it is the full support.
pub fn event_census(z: &DirectedNetwork, p: &CensusParams) -> Result<EventCensus> {
    p.validate()?;
    let n = z.order();
    let tn = t_n(n)?;
    let tau = p.epsilon.map_or(0.0, |eps| truncation_level(p.alpha, eps, n));
    let (large, _) = truncate_split(z, tau)?;
    let x1 = large.support();
    let x1_sym = symmetrize(&x1);

    let comps = undirected_components(&x1_sym).stats;
    let max_component = comps.iter().map(|c| c.vertex_count).max().unwrap_or(0);
    let max_excess = comps.iter().map(|c| c.excess).max().unwrap_or(-1);
    let d1 = x1_sym.max_degree();

    let star_threshold = degree_threshold(p.kappa, n)?.max(1);
    let stars = star_decompose(&x1_sym, star_threshold)?;
    let level_sets = degree_level_sets(&x1_sym, p.kappa, n)?;

    let nf = n as f64;
    let level_ok = level_sets
        .counts
        .iter()
        .enumerate()
        .all(|(i, &c)| c as f64 <= nf.powf(1.0 - i as f64 * p.kappa + p.kappa));
    let max_self_loops = components(&x1)
        .iter()
        .map(|c| c.self_loop_count)
        .max()
        .unwrap_or(0);

    let flags = EventFlags {
        degree: d1 as f64 <= (1.0 + p.delta1) * tn,
        component_size: max_component as f64 <= (1.0 + p.delta2) / p.epsilon.unwrap_or(1.0) * tn,
        excess: max_excess as f64 <= p.delta3,
        level_sets: level_ok,
        large_degree: level_sets.top_count as f64 <= (1.0 + p.delta).powi(2) / p.kappa,
        max_degree: d1 < level_sets.top_threshold,
        edge_count: z.nnz() as f64 >= p.d * nf / 2.0,
        self_loops: (max_self_loops as f64) < p.delta4,
        stars: stars.success,
    };
    Ok(EventCensus {
        n,
        t_n: tn,
        tau,
        d1,
        max_component,
        max_excess,
        level_sets,
        star_threshold,
        edge_count: z.nnz(),
        max_self_loops,
        flags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_examples() {
        let star = DirectedNetwork::new(6, (1..6).map(|v| (0, v, 1.0))).unwrap();
        let p = degree_profile(&star);
        assert_eq!(p.d_out[0], 5);
        assert_eq!(p.degree[0], 5);
        assert_eq!(p.d1, 5);
        let e = degree_profile(&DirectedNetwork::empty(4));
        assert_eq!(e.d1, 0);
        assert!(e.degree.iter().all(|&d| d == 0));
    }

    #[test]
    fn degree_hand_enumeration() {
        // 0->1, 1->2, 2->0, 3->3, 3->4, 4->3, 5->0
        let net = DirectedNetwork::new(
            6,
            [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0), (3, 3, 1.0), (3, 4, 1.0), (4, 3, 1.0), (5, 0, 1.0)],
        )
        .unwrap();
        let p = degree_profile(&net);
        assert_eq!(p.d_in, vec![2, 1, 1, 2, 1, 0]);
        assert_eq!(p.d_out, vec![1, 1, 1, 2, 1, 1]);
        assert_eq!(p.degree, vec![2, 1, 1, 2, 1, 1]);
        assert_eq!(p.d1, 2);
    }

    #[test]
    fn component_examples() {
        let two = UndirectedNetwork::new(4, [(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        let c = undirected_components(&two).stats;
        assert_eq!(c.len(), 2);
        assert!(c.iter().all(|s| s.excess == -1));
        let cyc = UndirectedNetwork::new(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0)])
            .unwrap();
        let c = undirected_components(&cyc).stats;
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].excess, 0);
    }

    #[test]
    fn directed_components_count_loops_once() {
        let net = DirectedNetwork::new(5, [(0, 1, 1.0), (1, 0, 2.0), (2, 2, 1.0)]).unwrap();
        let c = components(&net);
        assert_eq!(c.len(), 4);
        assert_eq!(c[0].edge_count, 2);
        assert_eq!(c[1].self_loop_count, 1);
        assert_eq!(c.iter().map(|s| s.edge_count).sum::<usize>(), 3);
        assert_eq!(c.iter().map(|s| s.vertex_count).sum::<usize>(), 5);
    }

    #[test]
    fn scale_functions() {
        assert!(t_n(15).is_err());
        let n = 10_000;
        let l = (n as f64).ln();
        assert!((t_n(n).unwrap() - l / l.ln()).abs() < 1e-15);
        assert_eq!(degree_threshold(0.0, n).unwrap(), 0);
        assert_eq!(degree_threshold(1.0, n).unwrap(), (l / l.ln()).ceil() as usize);
    }

    #[test]
    fn kappa_index() {
        assert_eq!(kappa_grid_index(0.5).unwrap(), 1);
        assert_eq!(kappa_grid_index(0.3).unwrap(), 3);
        assert_eq!(kappa_grid_index(0.25).unwrap(), 3);
        assert_eq!(kappa_grid_index(0.99).unwrap(), 1);
        assert!(kappa_grid_index(1.0).is_err());
    }

    #[test]
    fn level_sets_single_hub() {
        let n = 1000;
        let g1 = degree_threshold(1.0, n).unwrap();
        let hub = UndirectedNetwork::new(n, (1..=g1 + 1).map(|v| (0, v, 1.0))).unwrap();
        let ls = degree_level_sets(&hub, 0.25, n).unwrap();
        assert_eq!(ls.counts[0], n);
        for (i, &g) in ls.thresholds.iter().enumerate().skip(1) {
            let leaves = if g <= 1 { g1 + 1 } else { 0 };
            assert_eq!(ls.counts[i], usize::from(g <= g1 + 1) + leaves, "level {i}");
        }
        let empty = degree_level_sets(&UndirectedNetwork::empty(n), 0.25, n).unwrap();
        assert!(empty.counts[1..].iter().all(|&c| c == 0));
        assert_eq!(empty.top_count, 0);
    }

    #[test]
    fn census_empty_and_violation() {
        let n = 1000;
        let params = CensusParams {
            d: 0.0,
            ..CensusParams::from_delta(1.0, 1.0, 1.0, Some(1.0), 0.5)
        };
        let c = event_census(&DirectedNetwork::empty(n), &params).unwrap();
        let f = c.flags;
        assert!(f.degree && f.component_size && f.excess && f.level_sets);
        assert!(f.large_degree && f.max_degree && f.edge_count && f.self_loops && f.stars);

        let tn = t_n(n).unwrap();
        let deg = (2.0 * tn).ceil() as usize;
        let hub = DirectedNetwork::new(n, (1..=deg).map(|v| (0, v, 1.0))).unwrap();
        let p = CensusParams {
            delta1: 0.5,
            epsilon: None,
            ..params
        };
        let c = event_census(&hub, &p).unwrap();
        assert_eq!(c.d1, deg);
        assert!(!c.flags.degree);
    }
}
