//! Largest singular values.
//!
//! Three engines compute `‖Z‖ = sup_{|v|=1} |Zv|`:
//!
//! * [`spectral_norm_dense`]: forms the Gram matrix with compensated
//!   summation and diagonalises it with cyclic Jacobi sweeps. O(n^3), capped.
//! * [`spectral_norm_power`]: power iteration on `v -> Zᵀ(Zv)` using only
//!   sparse products.
//! * [`directed_star_norm`]: closed form for weighted directed stars.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{DenseMatrix, MatrixView, DEFAULT_DENSE_CAP};

/// Cap for the spectral-radius estimate, which squares dense matrices.
pub const DEFAULT_RADIUS_CAP: usize = 256;

const JACOBI_MAX_SWEEPS: usize = 64;
const JACOBI_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Dense,
    Power,
    Star,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormResult {
    pub value: f64,
    pub engine: Engine,
    pub iterations: usize,
    /// Dense: largest remaining off-diagonal Gram entry relative to the
    /// Gram max-abs. Power: relative change of the estimate on the last step.
    pub residual: f64,
    pub converged: bool,
}

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    #[inline]
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Gram matrix of the smaller side: `MᵀM` when `cols <= rows`, else `MMᵀ`.
fn gram(view: &dyn MatrixView) -> DenseMatrix {
    let (rows, cols) = view.shape();
    let transpose = cols > rows;
    let (outer, inner) = if transpose { (cols, rows) } else { (rows, cols) };
    // Group entries by the summed-over index.
    let mut lines: Vec<Vec<(usize, f64)>> = vec![Vec::new(); outer];
    view.for_each_entry(&mut |i, j, w| {
        if transpose {
            lines[j].push((i, w));
        } else {
            lines[i].push((j, w));
        }
    });
    let mut acc = vec![KahanSum::default(); inner * inner];
    for line in &lines {
        for &(a, wa) in line {
            for &(b, wb) in line {
                if b >= a {
                    acc[a * inner + b].add(wa * wb);
                }
            }
        }
    }
    let mut g = DenseMatrix::zeros(inner, inner);
    for a in 0..inner {
        for b in a..inner {
            let v = acc[a * inner + b].value();
            g.set(a, b, v);
            g.set(b, a, v);
        }
    }
    g
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
///
/// Sweeps until every off-diagonal magnitude is below
/// `1e-12 * max|A|`; returns the eigenvalues, the sweep count and the final
/// relative off-diagonal size.
pub fn symmetric_eigenvalues(a: &DenseMatrix) -> Result<(Vec<f64>, usize, f64)> {
    let n = a.rows();
    if n != a.cols() {
        return Err(Error::domain("symmetric_eigenvalues needs a square matrix"));
    }
    let scale = a.max_abs();
    let mut m: Vec<f64> = (0..n).flat_map(|i| a.row(i).to_vec()).collect();
    if scale == 0.0 || n < 2 {
        return Ok(((0..n).map(|i| m[i * n + i]).collect(), 0, 0.0));
    }
    let threshold = JACOBI_REL_TOL * scale;
    let off_max = |m: &[f64]| {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                off = off.max(m[i * n + j].abs());
            }
        }
        off
    };

    for sweep in 0..=JACOBI_MAX_SWEEPS {
        let off = off_max(&m);
        if off < threshold {
            return Ok(((0..n).map(|i| m[i * n + i]).collect(), sweep, off / scale));
        }
        if sweep == JACOBI_MAX_SWEEPS {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    m[k * n + p] = c * akp - s * akq;
                    m[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[p * n + k];
                    let aqk = m[q * n + k];
                    m[p * n + k] = c * apk - s * aqk;
                    m[q * n + k] = s * apk + c * aqk;
                }
                m[p * n + q] = 0.0;
                m[q * n + p] = 0.0;
            }
        }
    }
    Err(Error::Numeric(format!(
        "Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps"
    )))
}

/// Largest singular value via the Gram matrix and cyclic Jacobi.
pub fn spectral_norm_dense(view: &dyn MatrixView) -> Result<NormResult> {
    spectral_norm_dense_capped(view, DEFAULT_DENSE_CAP)
}

pub fn spectral_norm_dense_capped(view: &dyn MatrixView, cap: usize) -> Result<NormResult> {
    let (rows, cols) = view.shape();
    let n = rows.max(cols);
    if n > cap {
        return Err(Error::Size { n, cap });
    }
    let g = gram(view);
    if g.max_abs() == 0.0 {
        return Ok(NormResult {
            value: 0.0,
            engine: Engine::Dense,
            iterations: 0,
            residual: 0.0,
            converged: true,
        });
    }
    let (eig, sweeps, off) = symmetric_eigenvalues(&g)?;
    let top = eig.into_iter().fold(0.0f64, f64::max);
    Ok(NormResult {
        value: top.max(0.0).sqrt(),
        engine: Engine::Dense,
        iterations: sweeps,
        residual: off,
        converged: true,
    })
}

/// Sparse coordinate form used by the iterative engine.
struct Coo {
    rows: usize,
    cols: usize,
    row_idx: Vec<u32>,
    col_idx: Vec<u32>,
    vals: Vec<f64>,
}

impl Coo {
    fn from_view(view: &dyn MatrixView) -> Self {
        let (rows, cols) = view.shape();
        let mut coo = Coo {
            rows,
            cols,
            row_idx: Vec::new(),
            col_idx: Vec::new(),
            vals: Vec::new(),
        };
        view.for_each_entry(&mut |i, j, w| {
            coo.row_idx.push(i as u32);
            coo.col_idx.push(j as u32);
            coo.vals.push(w);
        });
        coo
    }

    /// `out = Z v`.
    fn apply(&self, v: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|x| *x = 0.0);
        for ((&i, &j), &w) in self.row_idx.iter().zip(&self.col_idx).zip(&self.vals) {
            out[i as usize] += w * v[j as usize];
        }
    }

    /// `out = Zᵀ u`.
    fn apply_transpose(&self, u: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|x| *x = 0.0);
        for ((&i, &j), &w) in self.row_idx.iter().zip(&self.col_idx).zip(&self.vals) {
            out[j as usize] += w * u[i as usize];
        }
    }
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Power iteration on `v -> Zᵀ(Zv)`.
///
/// Stops once successive estimates `|Z v_k|` differ by less than `tol`
/// relatively. Hitting `max_iter` is not an error: the best estimate is
/// returned with `converged = false`.
pub fn spectral_norm_power<R: Rng + ?Sized>(
    view: &dyn MatrixView,
    tol: f64,
    max_iter: usize,
    rng: &mut R,
) -> Result<NormResult> {
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be > 0, got {tol}")));
    }
    let coo = Coo::from_view(view);
    let zero = NormResult {
        value: 0.0,
        engine: Engine::Power,
        iterations: 0,
        residual: 0.0,
        converged: true,
    };
    if coo.vals.iter().all(|&w| w == 0.0) {
        return Ok(zero);
    }

    let mut v: Vec<f64> = (0..coo.cols).map(|_| rng.random_range(-1.0..1.0)).collect();
    let nv = norm2(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    let mut u = vec![0.0; coo.rows];
    let mut w = vec![0.0; coo.cols];

    let mut prev = f64::NAN;
    let mut sigma = 0.0;
    let mut change = f64::INFINITY;
    for k in 1..=max_iter {
        coo.apply(&v, &mut u);
        sigma = norm2(&u);
        coo.apply_transpose(&u, &mut w);
        let nw = norm2(&w);
        if nw == 0.0 {
            // Start vector fell in the null space; reseed.
            v.iter_mut().for_each(|x| *x = rng.random_range(-1.0..1.0));
            let nv = norm2(&v);
            v.iter_mut().for_each(|x| *x /= nv);
            continue;
        }
        change = if prev.is_nan() {
            f64::INFINITY
        } else {
            (sigma - prev).abs() / sigma
        };
        if change < tol {
            return Ok(NormResult {
                value: sigma,
                engine: Engine::Power,
                iterations: k,
                residual: change,
                converged: true,
            });
        }
        prev = sigma;
        v.iter_mut().zip(&w).for_each(|(x, y)| *x = y / nw);
    }
    Ok(NormResult {
        value: sigma,
        engine: Engine::Power,
        iterations: max_iter,
        residual: change,
        converged: false,
    })
}

/// Norm of a weighted directed star with out-weights `a` and in-weights `b`
/// at the hub: `sqrt(max(Σ a_i², Σ b_i²))`.
pub fn directed_star_norm(out_weights: &[f64], in_weights: &[f64]) -> f64 {
    let sq = |xs: &[f64]| {
        let mut s = KahanSum::default();
        xs.iter().for_each(|x| s.add(x * x));
        s.value()
    };
    sq(out_weights).max(sq(in_weights)).sqrt()
}

/// Approximate spectral radius `max |λ_i(Z)|` of a small square matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusEstimate {
    pub value: f64,
    pub squarings: usize,
    pub converged: bool,
    /// Always true: the estimate is iterative and only used for sanity checks.
    pub approximate: bool,
}

/// Spectral radius through Gelfand's formula `ρ = lim ‖Z^k‖^(1/k)`, with
/// `k = 2^j` reached by repeated squaring of a rescaled copy so that real
/// arithmetic handles complex and cyclic dominant eigenvalues alike.
///
/// Every iterate satisfies `ρ <= estimate <= ‖Z‖` up to rounding; the
/// sequence stops when consecutive estimates agree to `1e-6` relatively.
pub fn spectral_radius_dense(view: &dyn MatrixView) -> Result<RadiusEstimate> {
    spectral_radius_dense_capped(view, DEFAULT_RADIUS_CAP)
}

pub fn spectral_radius_dense_capped(view: &dyn MatrixView, cap: usize) -> Result<RadiusEstimate> {
    const TOL: f64 = 1e-6;
    const MAX_SQUARINGS: usize = 60;
    let (rows, cols) = view.shape();
    if rows != cols {
        return Err(Error::domain("spectral radius needs a square matrix"));
    }
    if rows > cap {
        return Err(Error::Size { n: rows, cap });
    }
    let n = rows;
    let mut b: Vec<f64> = vec![0.0; n * n];
    view.for_each_entry(&mut |i, j, w| b[i * n + j] = w);

    let frob = |m: &[f64]| m.iter().map(|x| x * x).sum::<f64>().sqrt();
    let s = frob(&b);
    let nilpotent = RadiusEstimate {
        value: 0.0,
        squarings: 0,
        converged: true,
        approximate: true,
    };
    if s == 0.0 {
        return Ok(nilpotent);
    }
    b.iter_mut().for_each(|x| *x /= s);
    // Z^k = B * exp(log_scale) with ‖B‖_F = 1 and k = 2^j.
    let mut log_scale = s.ln();
    let mut power = 1.0f64;
    let mut est = s;
    let mut tmp = vec![0.0; n * n];
    for j in 1..=MAX_SQUARINGS {
        tmp.iter_mut().for_each(|x| *x = 0.0);
        for i in 0..n {
            for k in 0..n {
                let bik = b[i * n + k];
                if bik == 0.0 {
                    continue;
                }
                let (dst, src) = (&mut tmp[i * n..(i + 1) * n], &b[k * n..(k + 1) * n]);
                dst.iter_mut().zip(src).for_each(|(d, s)| *d += bik * s);
            }
        }
        std::mem::swap(&mut b, &mut tmp);
        let s = frob(&b);
        if s == 0.0 {
            return Ok(RadiusEstimate {
                squarings: j,
                ..nilpotent
            });
        }
        b.iter_mut().for_each(|x| *x /= s);
        log_scale = 2.0 * log_scale + s.ln();
        power *= 2.0;
        let next = (log_scale / power).exp();
        let done = (next - est).abs() <= TOL * next;
        est = next;
        if done {
            // Replace the Frobenius norm of the normalised power by its
            // spectral norm so the estimate never exceeds ‖Z‖.
            let mut probe = rand_chacha::ChaCha8Rng::from_seed_u64(j as u64);
            let dense = DenseMatrix::from_rows(
                &(0..n).map(|i| b[i * n..(i + 1) * n].to_vec()).collect::<Vec<_>>(),
            )?;
            let top = spectral_norm_power(&dense, 1e-12, 2000, &mut probe)?.value;
            let value = ((log_scale + top.ln()) / power).exp();
            return Ok(RadiusEstimate {
                value,
                squarings: j,
                converged: true,
                approximate: true,
            });
        }
    }
    Ok(RadiusEstimate {
        value: est,
        squarings: MAX_SQUARINGS,
        converged: false,
        approximate: true,
    })
}

trait FromSeedU64 {
    fn from_seed_u64(seed: u64) -> Self;
}

impl FromSeedU64 for rand_chacha::ChaCha8Rng {
    fn from_seed_u64(seed: u64) -> Self {
        <Self as rand::SeedableRng>::seed_from_u64(seed)
    }
}
