//! How far the quantile parameter Q_τ sits from the τ-quantile of the law.
//!
//! κ_τ is built from the τ-quantile of `U = (T/θ + θ/T − 2)/α²` and keeps the
//! root with T ≥ θ, so `P(T ≤ Q_τ)` differs from τ. This prints
//! `F(Q_τ) − τ` over a grid.
//!
//! ```text
//! cargo run -p qlbs --example quantile_gap
//! ```

use qlbs::lbs::quantile_gap;

pub fn run_example() -> anyhow::Result<()> {
    let taus = [0.1, 0.25, 0.5, 0.75, 0.9];
    print!("{:>7}", "alpha");
    for tau in taus {
        print!("{:>10}", format!("{tau}"));
    }
    println!();
    for alpha in [0.1, 0.25, 0.5, 1.0, 2.0, 5.0] {
        print!("{alpha:>7}");
        for tau in taus {
            print!("{:>10.4}", quantile_gap(alpha, tau)?);
        }
        println!();
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
