//! Dense, power and star-formula norms on the same inputs.

use sparse_ldp::randgen::sample_network;
use sparse_ldp::spectral::{directed_star_norm, spectral_norm_dense, spectral_norm_power, spectral_radius_dense};
use sparse_ldp::{Result, RngHandle, WeibullSpec};

fn main() -> Result<()> {
    let spec = WeibullSpec::new(1.5)?;
    let z = sample_network(200, 3.0, &spec, &mut RngHandle::new(11, 0).rng())?;
    let dense = spectral_norm_dense(&z)?;
    let power = spectral_norm_power(&z, 1e-12, 20_000, &mut RngHandle::new(11, 1).rng())?;
    println!("dense: {:.12} ({} sweeps)", dense.value, dense.iterations);
    println!(
        "power: {:.12} ({} iterations, converged {})",
        power.value, power.iterations, power.converged
    );
    println!("relative gap: {:.2e}", (dense.value - power.value).abs() / dense.value);

    let star = directed_star_norm(&[3.0, 4.0], &[]);
    println!("star with weights 3, 4: {star:.12}");

    let radius = spectral_radius_dense(&z)?;
    println!("spectral radius {:.6} <= norm {:.6}", radius.value, dense.value);
    Ok(())
}
