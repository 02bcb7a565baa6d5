//! Typical values and rate functions for a few tail exponents.

use sparse_ldp::theory::{self, RateQuery, Tail};
use sparse_ldp::Result;

fn main() -> Result<()> {
    println!("{:>6} {:>8} {:>10} {:>10} {:>10} {:>10}", "alpha", "regime", "lambda(1e3)", "lambda(1e6)", "I+(0.5)", "I-(0.5)");
    for alpha in [0.5, 1.0, 2.0, 3.0, 4.0] {
        let q = RateQuery::new(alpha, 0.5)?;
        let up = theory::rate(&q, Tail::Upper)?;
        let lo = theory::rate(&q, Tail::Lower)?;
        println!(
            "{alpha:>6} {:>8?} {:>10.4} {:>10.4} {:>10.4} {:>10.4}",
            up.regime,
            theory::typical_value(1e3, alpha)?,
            theory::typical_value(1e6, alpha)?,
            up.value,
            lo.value
        );
    }

    for k in 2..=5 {
        let p = theory::phi(1.5, k)?;
        println!("phi(1.5, {k}) = {:.6}", p.value);
    }
    let (k, v) = theory::psi_min(1.5, 0.5, 8)?;
    println!("min_k psi(1.5, 0.5, k) = {v:.6} at k = {k}");
    let f = theory::f_max(3.0, 1.0)?;
    println!("max_x f(3, 1, x) = {:.6} at {:.6}", f.value, f.gamma);
    println!("relative entropy H(0.3 | 0.1) = {:.6}", theory::relative_entropy(0.3, 0.1)?);
    Ok(())
}
