//! Simulate from the regression and recover the coefficients.
//!
//! ```text
//! cargo run -p qlbs --example fit_simulated
//! ```

use qlbs::harness::{simulate_dataset, CovariateLaw};
use qlbs::model::{conf_intervals, fit, FitOptions, ParamVector};
use qlbs::RngStream;

pub fn run_example() -> anyhow::Result<()> {
    let truth = ParamVector::new(vec![1.0, -1.0], vec![0.25f64.ln(), 0.5]);
    let mut rng = RngStream::new(7, 0);
    let (spec, t) = simulate_dataset(400, 0.5, &truth, CovariateLaw::UniformM1To1, &mut rng)?;
    let res = fit(&spec, &t, &FitOptions::default())?;
    let ci = conf_intervals(&res, 0.05)?;
    println!("n = 400, tau = 0.5: converged {} in {} iterations", res.converged, res.iterations);
    let names = ["beta0", "beta1", "rho0", "rho1"];
    for (j, name) in names.iter().enumerate() {
        println!(
            "  {name:<6} truth {:>8.4}  estimate {:>8.4} ({:.4})  95% CI ({:.4}; {:.4})",
            truth.to_vec()[j],
            res.estimates()[j],
            res.std_errors[j],
            ci[j].lo,
            ci[j].hi
        );
    }
    println!("  log-lik {:.4}, AIC {:.4}, BIC {:.4}", res.loglik, res.aic, res.bic);
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
