//! Ratio of the largest singular value to the typical value across sizes.

use sparse_ldp::experiments::{run_lln, ExperimentConfig};
use sparse_ldp::Result;

fn main() -> Result<()> {
    let cfg = ExperimentConfig::new(0.5, 2.0, vec![1_000, 4_000, 16_000], 10, 2024);
    let report = run_lln(&cfg)?;
    print!("{}", report.csv());
    Ok(())
}
