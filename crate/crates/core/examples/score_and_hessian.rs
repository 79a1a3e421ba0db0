//! Analytic score against finite differences, and the two Hessians.
//!
//! ```text
//! cargo run -p qlbs --example score_and_hessian
//! ```

use qlbs::harness::{simulate_dataset, CovariateLaw};
use qlbs::model::{hessian_analytic, hessian_discrepancy, hessian_numeric, loglik, score};
use qlbs::numerics::fd_gradient;
use qlbs::{ParamVector, RngStream};

pub fn run_example() -> anyhow::Result<()> {
    let truth = ParamVector::new(vec![1.0, -1.0], vec![0.25f64.ln(), 0.5]);
    let (spec, t) = simulate_dataset(100, 0.75, &truth, CovariateLaw::UniformM1To1, &mut RngStream::new(5, 0))?;
    let at = ParamVector::new(vec![0.9, -0.8], vec![-1.2, 0.3]);
    let s = score(&at, &spec, &t)?;
    let fd = fd_gradient(
        |d| loglik(&ParamVector::from_slice(d, 2), &spec, &t).unwrap_or(f64::NAN),
        &at.to_vec(),
        1e-6,
    )?;
    println!("score vs central differences at an off-optimum point");
    for (a, b) in s.iter().zip(&fd) {
        println!("  {a:>14.8} {b:>14.8}  rel {:.1e}", (a - b).abs() / b.abs().max(1.0));
    }
    let ha = hessian_analytic(&at, &spec, &t)?;
    let hn = hessian_numeric(&at, &spec, &t)?;
    println!("closed-form Hessian diagonal {:.4?}", ha.diagonal().as_slice());
    println!("numeric Hessian diagonal     {:.4?}", hn.diagonal().as_slice());
    println!("max relative gap {:.2e}", hessian_discrepancy(&at, &spec, &t)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
