//! Samples a sparse Weibull network and splits it at the truncation level.

use sparse_ldp::randgen::{sample_network, truncate_split, truncation_level};
use sparse_ldp::{Result, RngHandle, WeibullSpec};

fn main() -> Result<()> {
    let (n, d, alpha) = (2000, 2.0, 1.0);
    let spec = WeibullSpec::new(alpha)?;
    let mut rng = RngHandle::new(42, 0).rng();
    let z = sample_network(n, d, &spec, &mut rng)?;
    println!("n = {n}, entries = {} (expected {:.0})", z.nnz(), n as f64 * d);
    println!("self-loops = {}, max |z| = {:.4}", z.self_loop_count(), z.max_abs_weight());

    let tau = truncation_level(alpha, 1.0, n);
    let (large, small) = truncate_split(&z, tau)?;
    println!("tau = {tau:.4}: {} entries above, {} at or below", large.nnz(), small.nnz());

    let cond = WeibullSpec::conditioned(alpha, tau)?;
    let draws: Vec<f64> = (0..5).map(|_| cond.sample(&mut rng)).collect();
    println!("conditioned draws |y| > tau: {draws:.3?}");
    Ok(())
}
