//! Seeded generation of Erdős–Rényi digraphs and Weibull edge weights.

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{DirectedNetwork, Entry};

/// Symmetric Weibull law with exact survival `P(|W| > t) = exp(-t^alpha)`,
/// optionally conditioned on `|W| > threshold`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeibullSpec {
    alpha: f64,
    threshold: Option<f64>,
}

impl WeibullSpec {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::domain(format!("Weibull shape must be > 0, got {alpha}")));
        }
        Ok(WeibullSpec {
            alpha,
            threshold: None,
        })
    }

    pub fn conditioned(alpha: f64, threshold: f64) -> Result<Self> {
        let mut spec = WeibullSpec::new(alpha)?;
        if !(threshold >= 0.0 && threshold.is_finite()) {
            return Err(Error::domain(format!(
                "conditioning threshold must be >= 0, got {threshold}"
            )));
        }
        spec.threshold = Some(threshold);
        Ok(spec)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn threshold(&self) -> Option<f64> {
        self.threshold
    }

    /// `P(|W| > t)` under this law.
    pub fn survival(&self, t: f64) -> f64 {
        let tau = self.threshold.unwrap_or(0.0);
        if t <= tau {
            1.0
        } else {
            (-(t.powf(self.alpha) - tau.powf(self.alpha))).exp()
        }
    }

    /// Draws `|W|` by inverting the (conditioned) survival function:
    /// `|W| = (tau^alpha - log U)^(1/alpha)`.
    pub fn sample_magnitude<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.sample(Open01);
        let base = self.threshold.map_or(0.0, |tau| tau.powf(self.alpha));
        // Extremely small shapes can underflow; weights must stay nonzero.
        (base - u.ln())
            .powf(1.0 / self.alpha)
            .max(f64::MIN_POSITIVE)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let m = self.sample_magnitude(rng);
        if rng.random::<bool>() {
            m
        } else {
            -m
        }
    }
}

/// Conditioning level `(epsilon * log log n)^(1/alpha)` separating the
/// large-weight part of a network from the bounded part.
pub fn truncation_level(alpha: f64, epsilon: f64, n: usize) -> f64 {
    (epsilon * (n as f64).ln().ln()).max(0.0).powf(1.0 / alpha)
}

/// Identifies one reproducible random stream.
///
/// Equal `(master_seed, stream_index)` pairs yield bit-identical draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngHandle {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl RngHandle {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        RngHandle {
            master_seed,
            stream_index,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        rng
    }

    /// A handle whose master seed is mixed with `key`; used to give every
    /// `(n, trial)` cell of an experiment its own stream.
    pub fn derive(master_seed: u64, key: u64, stream_index: u64) -> Self {
        RngHandle::new(splitmix64(master_seed ^ splitmix64(key)), stream_index)
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Adjacency matrix of `G_d(n, p)`: every ordered pair, loops included, is
/// an edge independently with probability `p`.
///
/// Walks the `n^2` cells with geometric skips, so the cost is proportional to
/// the number of edges drawn.
pub fn sample_digraph<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<DirectedNetwork> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("edge probability must lie in [0, 1], got {p}")));
    }
    let cells = (n as u64)
        .checked_mul(n as u64)
        .ok_or_else(|| Error::domain(format!("n = {n} too large")))?;
    if p == 0.0 || cells == 0 {
        return Ok(DirectedNetwork::empty(n));
    }
    let skip = Geometric::new(p).map_err(|e| Error::domain(e.to_string()))?;
    let mut entries = Vec::with_capacity((p * cells as f64 * 1.1) as usize + 16);
    let mut cell: u64 = 0;
    loop {
        let gap = skip.sample(rng);
        cell = match cell.checked_add(gap) {
            Some(c) if c < cells => c,
            _ => break,
        };
        entries.push(Entry {
            row: (cell / n as u64) as usize,
            col: (cell % n as u64) as usize,
            weight: 1.0,
        });
        cell += 1;
    }
    Ok(DirectedNetwork::from_sorted_unchecked(n, entries))
}

/// `Z = X ⊙ Y`: independent weights from `spec` on the support of `x`.
pub fn attach_weights<R: Rng + ?Sized>(
    x: &DirectedNetwork,
    spec: &WeibullSpec,
    rng: &mut R,
) -> Result<DirectedNetwork> {
    if !x.is_indicator() {
        return Err(Error::domain("attach_weights expects a 0/1 adjacency matrix"));
    }
    let entries = x
        .entries()
        .iter()
        .map(|e| Entry {
            weight: spec.sample(rng),
            ..*e
        })
        .collect();
    Ok(DirectedNetwork::from_sorted_unchecked(x.order(), entries))
}

/// Weighted network with `p = d / n` and weights from `spec`.
pub fn sample_network<R: Rng + ?Sized>(
    n: usize,
    d: f64,
    spec: &WeibullSpec,
    rng: &mut R,
) -> Result<DirectedNetwork> {
    if n == 0 {
        return Err(Error::domain("n must be positive"));
    }
    let x = sample_digraph(n, d / n as f64, rng)?;
    attach_weights(&x, spec, rng)
}

/// Splits `z` into the entries with `|w| > tau` and those with `|w| <= tau`.
pub fn truncate_split(z: &DirectedNetwork, tau: f64) -> Result<(DirectedNetwork, DirectedNetwork)> {
    if !(tau >= 0.0) {
        return Err(Error::domain(format!("truncation level must be >= 0, got {tau}")));
    }
    let (large, small): (Vec<Entry>, Vec<Entry>) =
        z.entries().iter().partition(|e| e.weight.abs() > tau);
    Ok((
        DirectedNetwork::from_sorted_unchecked(z.order(), large),
        DirectedNetwork::from_sorted_unchecked(z.order(), small),
    ))
}
