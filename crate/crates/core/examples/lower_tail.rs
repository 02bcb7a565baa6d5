//! Lower-tail frequencies with the sweep over deviations.

use sparse_ldp::experiments::{run_lower_tail, ExperimentConfig};
use sparse_ldp::Result;

fn main() -> Result<()> {
    let mut cfg = ExperimentConfig::new(1.0, 2.0, vec![500, 1_000], 500, 9);
    cfg.delta = 0.2;
    cfg.lower_deltas = Some(vec![0.05, 0.1, 0.2, 0.3]);
    let report = run_lower_tail(&cfg)?;
    print!("{}", report.csv());
    for row in &report.sweep {
        println!("n = {:>5}, delta = {:.2}: {} hits ({:.4})", row.n, row.delta, row.hits, row.p_hat);
    }
    println!("sweep monotone: {}", report.sweep_is_monotone());
    Ok(())
}
