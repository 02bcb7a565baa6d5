//! Structural statistics and event flags of one sampled network.

use sparse_ldp::randgen::sample_network;
use sparse_ldp::structure::{components, degree_profile, event_census, t_n, CensusParams};
use sparse_ldp::{Result, RngHandle, WeibullSpec};

fn main() -> Result<()> {
    let (n, d, alpha) = (5000, 2.0, 1.0);
    let z = sample_network(n, d, &WeibullSpec::new(alpha)?, &mut RngHandle::new(5, 0).rng())?;
    let profile = degree_profile(&z);
    let comps = components(&z);
    let giant = comps.iter().map(|c| c.vertex_count).max().unwrap_or(0);
    println!("t_n = {:.4}, max degree {}, {} components, largest {giant}", t_n(n)?, profile.d1, comps.len());

    let params = CensusParams::from_delta(alpha, d, 1.0, Some(1.0), 0.5);
    let census = event_census(&z, &params)?;
    println!("tau = {:.4}, d1 of truncated part = {}", census.tau, census.d1);
    println!("max component {}, max excess {}", census.max_component, census.max_excess);
    println!("{:#?}", census.flags);
    Ok(())
}
