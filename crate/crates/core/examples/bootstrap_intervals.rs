//! Percentile bootstrap intervals next to the Wald intervals.
//!
//! ```text
//! cargo run -p qlbs --example bootstrap_intervals
//! ```

use qlbs::harness::{simulate_dataset, CovariateLaw};
use qlbs::model::{bootstrap_ci, conf_intervals, fit, FitOptions};
use qlbs::{ParamVector, RngStream};

pub fn run_example() -> anyhow::Result<()> {
    let truth = ParamVector::new(vec![1.0, -1.0], vec![0.25f64.ln(), 0.5]);
    let (spec, t) = simulate_dataset(150, 0.5, &truth, CovariateLaw::UniformM1To1, &mut RngStream::new(11, 0))?;
    let opts = FitOptions::default();
    let base = fit(&spec, &t, &opts)?;
    let wald = conf_intervals(&base, 0.05)?;
    let boot = bootstrap_ci(&spec, &t, 200, 0.05, &RngStream::new(12, 0), &opts)?;
    println!("{} resamples, {} dropped", boot.requested, boot.failed);
    for (j, name) in ["beta0", "beta1", "rho0", "rho1"].iter().enumerate() {
        println!(
            "  {name:<6} wald ({:>7.4}; {:>7.4})  bootstrap ({:>7.4}; {:>7.4})",
            wald[j].lo, wald[j].hi, boot.intervals[j].lo, boot.intervals[j].hi
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
