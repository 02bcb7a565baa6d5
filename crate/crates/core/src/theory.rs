//! Closed-form typical values, rate functions, variational functions and
//! binomial/entropy tail estimates.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::KahanSum;
use crate::structure::t_n;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// `α > 2`.
    Light,
    /// `0 < α <= 2`.
    Heavy,
}

impl Regime {
    pub fn of(alpha: f64) -> Result<Regime> {
        check_alpha(alpha)?;
        Ok(if alpha > 2.0 {
            Regime::Light
        } else {
            Regime::Heavy
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tail {
    Upper,
    Lower,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::domain(format!("alpha must be > 0, got {alpha}")));
    }
    Ok(())
}

fn check_light(alpha: f64) -> Result<()> {
    if !(alpha > 2.0 && alpha.is_finite()) {
        return Err(Error::domain(format!("light regime needs alpha > 2, got {alpha}")));
    }
    Ok(())
}

/// Parameters shared by the rate evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateQuery {
    pub alpha: f64,
    pub delta: f64,
    pub n: Option<u64>,
    pub epsilon: Option<f64>,
    pub kappa: Option<f64>,
}

impl RateQuery {
    pub fn new(alpha: f64, delta: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if !(delta > -1.0 && delta.is_finite()) {
            return Err(Error::domain(format!("delta must be > -1, got {delta}")));
        }
        Ok(RateQuery {
            alpha,
            delta,
            n: None,
            epsilon: None,
            kappa: None,
        })
    }

    pub fn with_n(mut self, n: u64) -> Result<Self> {
        if n < 3 {
            return Err(Error::domain(format!("n must be >= 3, got {n}")));
        }
        self.n = Some(n);
        Ok(self)
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0) {
            return Err(Error::domain(format!("epsilon must be > 0, got {epsilon}")));
        }
        self.epsilon = Some(epsilon);
        Ok(self)
    }

    pub fn with_kappa(mut self, kappa: f64) -> Result<Self> {
        if !(kappa > 0.0) {
            return Err(Error::domain(format!("kappa must be > 0, got {kappa}")));
        }
        self.kappa = Some(kappa);
        Ok(self)
    }

    pub fn regime(&self) -> Regime {
        if self.alpha > 2.0 {
            Regime::Light
        } else {
            Regime::Heavy
        }
    }

    /// Hölder conjugate `β = α / (α - 1)`, defined for `α > 1`.
    pub fn beta(&self) -> Option<f64> {
        holder_conjugate(self.alpha).ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateValue {
    pub value: f64,
    pub regime: Regime,
    pub tail: Tail,
}

pub fn holder_conjugate(alpha: f64) -> Result<f64> {
    if !(alpha > 1.0 && alpha.is_finite()) {
        return Err(Error::domain(format!("Hölder conjugate needs alpha > 1, got {alpha}")));
    }
    Ok(alpha / (alpha - 1.0))
}

/// `B_α = 2^(1/α) α^(-1/2) (α - 2)^(1/2 - 1/α)`.
pub fn b_alpha(alpha: f64) -> Result<f64> {
    check_light(alpha)?;
    Ok(2f64.powf(1.0 / alpha) * alpha.powf(-0.5) * (alpha - 2.0).powf(0.5 - 1.0 / alpha))
}

/// The same constant as `(2/α)^(1/α) (1 - 2/α)^(1/2 - 1/α)`.
pub fn b_alpha_alt(alpha: f64) -> Result<f64> {
    check_light(alpha)?;
    Ok((2.0 / alpha).powf(1.0 / alpha) * (1.0 - 2.0 / alpha).powf(0.5 - 1.0 / alpha))
}

/// `B_α (log n)^(1/2) / (log log n)^(1/2 - 1/α)` for `α > 2`.
pub fn lambda_light(n: f64, alpha: f64) -> Result<f64> {
    check_light(alpha)?;
    if !(n >= 3.0) {
        return Err(Error::domain(format!("n must be >= 3, got {n}")));
    }
    let l = n.ln();
    Ok(b_alpha(alpha)? * l.sqrt() / l.ln().powf(0.5 - 1.0 / alpha))
}

/// `(log n)^(1/α)` for `0 < α <= 2`.
pub fn lambda_heavy(n: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if alpha > 2.0 {
        return Err(Error::domain(format!("heavy regime needs alpha <= 2, got {alpha}")));
    }
    if !(n > 1.0) {
        return Err(Error::domain(format!("n must be > 1, got {n}")));
    }
    Ok(n.ln().powf(1.0 / alpha))
}

/// Typical value of `‖Z‖` in the regime selected by `alpha`.
pub fn typical_value(n: f64, alpha: f64) -> Result<f64> {
    match Regime::of(alpha)? {
        Regime::Light => lambda_light(n, alpha),
        Regime::Heavy => lambda_heavy(n, alpha),
    }
}

/// Rate of `P(‖Z‖ >= (1+δ)λ)` (upper) or `P(‖Z‖ <= (1-δ)λ)` (lower).
///
/// Upper tail needs `δ >= 0`, lower tail `0 < δ < 1`. The lower-tail values
/// are rates on the `log log` scale.
pub fn rate(q: &RateQuery, tail: Tail) -> Result<RateValue> {
    let (a, d) = (q.alpha, q.delta);
    let regime = q.regime();
    let value = match tail {
        Tail::Upper => {
            if !(d >= 0.0) {
                return Err(Error::domain(format!("upper tail needs delta >= 0, got {d}")));
            }
            match regime {
                Regime::Light => (1.0 + d).powi(2) - 1.0,
                Regime::Heavy => (1.0 + d).powf(a) - 1.0,
            }
        }
        Tail::Lower => {
            if !(d > 0.0 && d < 1.0) {
                return Err(Error::domain(format!("lower tail needs 0 < delta < 1, got {d}")));
            }
            match regime {
                Regime::Light => 1.0 - (1.0 - d).powi(2),
                Regime::Heavy => 1.0 - (1.0 - d).powf(a),
            }
        }
    };
    Ok(RateValue {
        value,
        regime,
        tail,
    })
}

/// `Σ_{i≠j} v_i^θ v_j^θ` for a nonnegative vector.
pub fn phi_objective(v: &[f64], theta: f64) -> f64 {
    let s1: f64 = v.iter().map(|x| x.powf(theta)).sum();
    let s2: f64 = v.iter().map(|x| x.powf(2.0 * theta)).sum();
    s1 * s1 - s2
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiValue {
    /// The larger of the two estimates.
    pub value: f64,
    /// Best uniform-on-`m`-coordinates value, `m (m-1) m^(-2θ)`.
    pub candidate: f64,
    pub candidate_support: usize,
    /// Best value found by projected gradient ascent from random starts.
    pub search: f64,
    /// The two estimates differ by more than `1e-6`.
    pub flagged: bool,
}

const PHI_STARTS: usize = 50;
const PHI_SEED: u64 = 0x5eed_f00d;

/// Euclidean projection onto the probability simplex.
fn project_simplex(y: &[f64], out: &mut [f64]) {
    let mut u = y.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut css = 0.0;
    let mut shift = 0.0;
    for (i, &ui) in u.iter().enumerate() {
        css += ui;
        let t = (css - 1.0) / (i + 1) as f64;
        if ui - t > 0.0 {
            shift = t;
        }
    }
    for (o, &yi) in out.iter_mut().zip(y) {
        *o = (yi - shift).max(0.0);
    }
}

fn phi_search(theta: f64, k: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(PHI_SEED ^ k as u64);
    let mut best = 0.0f64;
    let mut x = vec![0.0; k];
    let mut grad = vec![0.0; k];
    let mut trial = vec![0.0; k];
    let mut cand = vec![0.0; k];
    for _ in 0..PHI_STARTS {
        for xi in x.iter_mut() {
            *xi = -rng.random::<f64>().max(f64::MIN_POSITIVE).ln();
        }
        let s: f64 = x.iter().sum();
        x.iter_mut().for_each(|xi| *xi /= s);
        let mut fx = phi_objective(&x, theta);
        let mut step = 1.0;
        for _ in 0..5000 {
            let s1: f64 = x.iter().map(|xi| xi.powf(theta)).sum();
            for (g, &xi) in grad.iter_mut().zip(&x) {
                *g = if xi > 0.0 {
                    2.0 * theta * (s1 * xi.powf(theta - 1.0) - xi.powf(2.0 * theta - 1.0))
                } else if theta == 1.0 {
                    2.0 * s1
                } else {
                    0.0
                };
            }
            let mut improved = false;
            for _ in 0..60 {
                for ((t, &xi), &g) in trial.iter_mut().zip(&x).zip(&grad) {
                    *t = xi + step * g;
                }
                project_simplex(&trial, &mut cand);
                let fc = phi_objective(&cand, theta);
                if fc > fx {
                    let gain = fc - fx;
                    x.copy_from_slice(&cand);
                    fx = fc;
                    step *= 1.5;
                    improved = gain > 1e-16;
                    break;
                }
                step *= 0.5;
            }
            if !improved {
                break;
            }
        }
        best = best.max(fx);
    }
    best
}

/// `φ_θ(k) = sup_{|v|_1 = 1} Σ_{i≠j} |v_i|^θ |v_j|^θ` over `k` coordinates.
pub fn phi(theta: f64, k: usize) -> Result<PhiValue> {
    if !(theta >= 1.0 && theta.is_finite()) {
        return Err(Error::domain(format!("phi needs theta >= 1, got {theta}")));
    }
    if k < 2 {
        return Err(Error::domain(format!("phi needs k >= 2, got {k}")));
    }
    let (candidate_support, candidate) = (2..=k)
        .map(|m| {
            let mf = m as f64;
            (m, mf * (mf - 1.0) * mf.powf(-2.0 * theta))
        })
        .fold((2, f64::NEG_INFINITY), |acc, c| if c.1 > acc.1 { c } else { acc });
    let search = phi_search(theta, k);
    Ok(PhiValue {
        value: candidate.max(search),
        candidate,
        candidate_support,
        search,
        flagged: (candidate - search).abs() > 1e-6,
    })
}

/// `ψ(k) = k(k-3)/2 + (1+δ)^α φ_{β/2}(k)^(1-α) / 2` for `1 < α <= 2`.
pub fn psi(alpha: f64, delta: f64, k: usize) -> Result<f64> {
    let beta = holder_conjugate(alpha)?;
    if alpha > 2.0 {
        return Err(Error::domain(format!("psi needs alpha <= 2, got {alpha}")));
    }
    if !(delta > 0.0) {
        return Err(Error::domain(format!("psi needs delta > 0, got {delta}")));
    }
    if k < 2 {
        return Err(Error::domain(format!("psi needs k >= 2, got {k}")));
    }
    let kf = k as f64;
    let phi = phi(beta / 2.0, k)?.value;
    Ok(kf * (kf - 3.0) / 2.0 + 0.5 * (1.0 + delta).powf(alpha) * phi.powf(1.0 - alpha))
}

/// Minimiser and minimum of `ψ` over `k = 2..=k_max`.
pub fn psi_min(alpha: f64, delta: f64, k_max: usize) -> Result<(usize, f64)> {
    if k_max < 2 {
        return Err(Error::domain(format!("k_max must be >= 2, got {k_max}")));
    }
    let mut best = (2, psi(alpha, delta, 2)?);
    for k in 3..=k_max {
        let v = psi(alpha, delta, k)?;
        if v < best.1 {
            best = (k, v);
        }
    }
    Ok(best)
}

/// `(2/(α-2)) (1 - 2/α)^(α/2)`.
fn light_constant(alpha: f64) -> f64 {
    2.0 / (alpha - 2.0) * (1.0 - 2.0 / alpha).powf(alpha / 2.0)
}

/// `f_{α,ρ}(x) = 1 - x - (1+ρ)^α (2/(α-2)) (1-2/α)^(α/2) x^(1-α/2)`.
pub fn f_rate(alpha: f64, rho: f64, x: f64) -> Result<f64> {
    check_light(alpha)?;
    if !(rho > -1.0) {
        return Err(Error::domain(format!("rho must be > -1, got {rho}")));
    }
    if !(x > 0.0) {
        return Err(Error::domain(format!("x must be > 0, got {x}")));
    }
    Ok(1.0 - x - (1.0 + rho).powf(alpha) * light_constant(alpha) * x.powf(1.0 - alpha / 2.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FMax {
    /// `γ_ρ = (1+ρ)² (1 - 2/α)`.
    pub gamma: f64,
    /// `1 - (1+ρ)²`.
    pub value: f64,
    pub numeric_gamma: f64,
    pub numeric_value: f64,
}

/// Closed-form maximiser of `f_{α,ρ}` with a numeric cross-check: a
/// golden-section search, polished by bisection on the sign of `f'`.
pub fn f_max(alpha: f64, rho: f64) -> Result<FMax> {
    f_rate(alpha, rho, 1.0)?;
    let f = |x: f64| f_rate(alpha, rho, x).unwrap_or(f64::NEG_INFINITY);
    let k = (1.0 + rho).powf(alpha) * light_constant(alpha);
    let df = |x: f64| -1.0 + k * (alpha / 2.0 - 1.0) * x.powf(-alpha / 2.0);

    // Bracket the maximum of the concave function by doubling steps.
    let (mut a, mut m, mut b) = (0.5, 1.0, 2.0);
    loop {
        if f(a) > f(m) {
            (b, m, a) = (m, a, a / 2.0);
        } else if f(b) > f(m) {
            (a, m, b) = (m, b, b * 2.0);
        } else {
            break;
        }
    }
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
        if b - a <= 1e-15 * b {
            break;
        }
    }
    let mut x = 0.5 * (a + b);
    // The value comparison only resolves x to sqrt(eps); f' resolves it fully.
    let (mut l, mut h) = (x * 0.5, x * 2.0);
    if df(l) > 0.0 && df(h) < 0.0 {
        for _ in 0..200 {
            let mid = 0.5 * (l + h);
            if df(mid) > 0.0 {
                l = mid;
            } else {
                h = mid;
            }
        }
        x = 0.5 * (l + h);
    }
    Ok(FMax {
        gamma: (1.0 + rho).powi(2) * (1.0 - 2.0 / alpha),
        value: 1.0 - (1.0 + rho).powi(2),
        numeric_gamma: x,
        numeric_value: f(x),
    })
}

/// `(γ_δ, γ'_δ) = ((1+δ)² (1 - 2/α), (1-δ)² (1 - 2/α))`.
pub fn gamma_params(alpha: f64, delta: f64) -> Result<(f64, f64)> {
    check_light(alpha)?;
    let s = 1.0 - 2.0 / alpha;
    Ok(((1.0 + delta).powi(2) * s, (1.0 - delta).powi(2) * s))
}

/// Exponent of `P(Y_1² + … + Y_k² >= d² λ²)` on the `log n` scale with
/// `k = b t_n`: `d^α (2/(α-2)) (1-2/α)^(α/2) b^(1-α/2)`, minus `b ε` when
/// the weights are conditioned above `(ε log log n)^(1/α)`.
pub fn weibull_sum_exponent(alpha: f64, d: f64, b: f64, epsilon: f64, conditioned: bool) -> Result<f64> {
    check_light(alpha)?;
    if !(d > 0.0 && b > 0.0) {
        return Err(Error::domain(format!("d and b must be > 0, got d = {d}, b = {b}")));
    }
    if conditioned && !(epsilon > 0.0) {
        return Err(Error::domain(format!("epsilon must be > 0, got {epsilon}")));
    }
    let base = d.powf(alpha) * light_constant(alpha) * b.powf(1.0 - alpha / 2.0);
    Ok(if conditioned { base - b * epsilon } else { base })
}

fn xlogx_ratio(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * (x / y).ln()
    }
}

/// `I_p(q) = q log(q/p) + (1-q) log((1-q)/(1-p))`.
pub fn relative_entropy(p: f64, q: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("p must lie in (0, 1), got {p}")));
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::domain(format!("q must lie in [0, 1], got {q}")));
    }
    Ok(xlogx_ratio(q, p) + xlogx_ratio(1.0 - q, 1.0 - p))
}

/// Smallest `I_p(q) / p` over the given `p` values and `q = p j / (2 steps)`,
/// `j = 1..=steps`: a certified constant for `I_p(q) >= c p` on that grid.
pub fn entropy_constant(ps: &[f64], steps: usize) -> Result<f64> {
    let mut c = f64::INFINITY;
    for &p in ps {
        for j in 1..=steps {
            let q = p * j as f64 / (2 * steps) as f64;
            c = c.min(relative_entropy(p, q)? / p);
        }
    }
    Ok(c)
}

fn check_binomial(m: usize, q: f64) -> Result<()> {
    if m == 0 {
        return Err(Error::domain("binomial trial count must be >= 1"));
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::domain(format!("q must lie in (0, 1), got {q}")));
    }
    Ok(())
}

/// `(e^{-m I_q(θ)} / sqrt(8 m θ (1-θ)), e^{-m I_q(θ)})` bracketing
/// `P(X >= θm)` when `θ > q` and `P(X <= θm)` when `θ < q`, for
/// `X ~ Binom(m, q)`.
pub fn binomial_tail_bounds(m: usize, q: f64, theta: f64) -> Result<(f64, f64)> {
    check_binomial(m, q)?;
    if !(theta > 0.0 && theta < 1.0) || theta == q {
        return Err(Error::domain(format!(
            "theta must lie in (0, 1) and differ from q = {q}, got {theta}"
        )));
    }
    let mf = m as f64;
    let upper = (-mf * relative_entropy(q, theta)?).exp();
    Ok((upper / (8.0 * mf * theta * (1.0 - theta)).sqrt(), upper))
}

/// Exact `P(X >= θm)` (upper side) or `P(X <= θm)` (lower side) by summing
/// the binomial mass in log space with compensation. `m <= 10^4`.
///
/// `θm` is rounded with a `1e-9` guard so that `θ = k/m` selects `k`.
pub fn binomial_exact_tail(m: usize, q: f64, theta: f64, side: Tail) -> Result<f64> {
    check_binomial(m, q)?;
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::domain(format!("theta must lie in [0, 1], got {theta}")));
    }
    let side_ok = match side {
        Tail::Upper => theta > q,
        Tail::Lower => theta < q,
    };
    if !side_ok {
        return Err(Error::domain(format!(
            "theta = {theta} is on the wrong side of q = {q} for the {side:?} tail"
        )));
    }
    let t = theta * m as f64;
    let range = match side {
        Tail::Upper => ((t - 1e-9).ceil().max(0.0) as usize)..=m,
        Tail::Lower => 0..=((t + 1e-9).floor() as usize).min(m),
    };
    binomial_mass_sum(m, q, range)
}

/// `P(X >= k_min)` for `X ~ Binom(m, q)`.
pub fn binomial_upper_tail_count(m: usize, q: f64, k_min: usize) -> Result<f64> {
    check_binomial(m, q)?;
    if k_min > m {
        return Ok(0.0);
    }
    binomial_mass_sum(m, q, k_min..=m)
}

const EXACT_BINOMIAL_CAP: usize = 10_000;

fn binomial_mass_sum(m: usize, q: f64, range: std::ops::RangeInclusive<usize>) -> Result<f64> {
    if m > EXACT_BINOMIAL_CAP {
        return Err(Error::Size {
            n: m,
            cap: EXACT_BINOMIAL_CAP,
        });
    }
    let mut ln_fact = Vec::with_capacity(m + 1);
    let mut acc = KahanSum::default();
    ln_fact.push(0.0);
    for i in 1..=m {
        acc.add((i as f64).ln());
        ln_fact.push(acc.value());
    }
    let (lq, lp) = (q.ln(), (-q).ln_1p());
    let log_mass = |k: usize| {
        ln_fact[m] - ln_fact[k] - ln_fact[m - k] + k as f64 * lq + (m - k) as f64 * lp
    };
    let top = range.clone().map(log_mass).fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    let mut sum = KahanSum::default();
    for k in range {
        sum.add((log_mass(k) - top).exp());
    }
    Ok((sum.value().ln() + top).exp().min(1.0))
}

/// `-log P(Binom(⌈a t_n⌉, d/n) >= δ) / log n`, which tends to `δ`.
pub fn binomial_loglog_exponent(n: usize, a: f64, d: f64, delta: f64) -> Result<f64> {
    if !(a > 0.0 && d > 0.0 && delta > 0.0) {
        return Err(Error::domain("a, d and delta must be > 0"));
    }
    let m = (a * t_n(n)?).ceil() as usize;
    let q = d / n as f64;
    let p = binomial_upper_tail_count(m, q, delta.ceil() as usize)?;
    Ok(-p.ln() / (n as f64).ln())
}
