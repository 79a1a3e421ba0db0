//! Cox–Snell and randomized quantile residuals with their moments.
//!
//! ```text
//! cargo run -p qlbs --example residual_diagnostics
//! ```

use qlbs::diagnostics::{gcs_residuals, residual_moments, rq_residuals};
use qlbs::harness::{simulate_dataset, CovariateLaw};
use qlbs::model::{fit, FitOptions};
use qlbs::{ParamVector, RngStream};

pub fn run_example() -> anyhow::Result<()> {
    let truth = ParamVector::new(vec![1.0, -1.0], vec![0.25f64.ln(), 0.5]);
    let (spec, t) = simulate_dataset(400, 0.25, &truth, CovariateLaw::UniformM1To1, &mut RngStream::new(21, 0))?;
    let res = fit(&spec, &t, &FitOptions::default())?;
    println!("{:<5}{:>9}{:>9}{:>9}{:>9}   reference", "kind", "mean", "sd", "cs", "ck");
    let gcs = gcs_residuals(&res, &spec, &t)?;
    let m = residual_moments(&gcs.values)?;
    println!("gcs  {:>9.4}{:>9.4}{:>9.4}{:>9.4}   (1, 1, 2, 9)", m.mean, m.sd, m.cs, m.ck);
    let rq = rq_residuals(&res, &spec, &t)?;
    let m = residual_moments(&rq.values)?;
    println!("rq   {:>9.4}{:>9.4}{:>9.4}{:>9.4}   (0, 1, 0, 3)", m.mean, m.sd, m.cs, m.ck);
    println!("flagged observations: {:?} / {:?}", gcs.flagged, rq.flagged);
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
