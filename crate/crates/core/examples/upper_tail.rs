//! Upper-tail frequencies and the fitted log-log slope.

use sparse_ldp::experiments::{run_upper_tail, ExperimentConfig};
use sparse_ldp::Result;

fn main() -> Result<()> {
    let mut cfg = ExperimentConfig::new(1.0, 2.0, vec![500, 1_000, 2_000], 2_000, 7);
    cfg.delta = 0.5;
    let report = run_upper_tail(&cfg)?;
    print!("{}", report.csv());
    match &report.regression {
        Some(r) => println!(
            "slope {:.3} +- {:.3} (predicted {:?})",
            r.slope, r.half_width, report.predicted_slope
        ),
        None => println!("too few hits for a regression"),
    }
    Ok(())
}
