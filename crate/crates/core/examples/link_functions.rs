//! The same data fitted under each quantile link.
//!
//! ```text
//! cargo run -p qlbs --example link_functions
//! ```

use nalgebra::DMatrix;
use qlbs::model::{fit, simulate_response, FitOptions};
use qlbs::{LinkFunction, ModelSpec, ParamVector, RngStream};

pub fn run_example() -> anyhow::Result<()> {
    let n = 300;
    let mut rng = RngStream::new(3, 0);
    let x1: Vec<f64> = (0..n).map(|_| rng.uniform_in(0.0, 2.0)).collect();
    let x = DMatrix::from_fn(n, 2, |i, j| if j == 0 { 1.0 } else { x1[i] });
    let w = DMatrix::from_element(n, 1, 1.0);
    let truth_spec = ModelSpec::new(x.clone(), w.clone(), LinkFunction::Sqrt, LinkFunction::Log, 0.5)?;
    // sqrt(Q) = 1 + 0.5 x1, alpha = 0.4
    let truth = ParamVector::new(vec![1.0, 0.5], vec![0.4f64.ln()]);
    let t = simulate_response(&truth, &truth_spec, &mut rng)?;
    println!("data generated under the sqrt link");
    for link in LinkFunction::ALL {
        let spec = ModelSpec::new(x.clone(), w.clone(), link, LinkFunction::Log, 0.5)?;
        match fit(&spec, &t, &FitOptions::default()) {
            Ok(r) => println!(
                "  {:<8} beta {:>8.4?}  log-lik {:>10.4}  AIC {:>10.4}",
                link.name(),
                r.delta_hat.beta,
                r.loglik,
                r.aic
            ),
            Err(e) => println!("  {:<8} failed: {e}", link.name()),
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
