//! The length-biased Birnbaum–Saunders law in both parameterizations.
//!
//! ```text
//! cargo run -p qlbs --example lbs_distribution
//! ```

use qlbs::lbs::{kappa, lbs_cdf, lbs_moments, lbs_pdf, lbs_quantile, q_from_theta, qlbs_moments, theta_from_q};
use qlbs::{LbsParams, QlbsParams};

pub fn run_example() -> anyhow::Result<()> {
    let law = LbsParams::new(0.5, 2.0)?;
    println!("LBS(alpha = 0.5, theta = 2)");
    for t in [0.5, 1.0, 2.0, 4.0] {
        println!("  t = {t:<4} pdf {:.6}  cdf {:.6}", lbs_pdf(t, &law)?, lbs_cdf(t, &law)?);
    }
    let (mean, var) = lbs_moments(&law);
    println!("  mean {mean:.6}, variance {var:.6}, median {:.6}", lbs_quantile(0.5, &law)?);

    // θ = 4 Q_τ / κ_τ(α)
    let tau = 0.25;
    let qp = q_from_theta(&law, tau)?;
    println!("quantile parameter at tau = {tau}: Q = {:.6} (kappa {:.6})", qp.q_tau, kappa(tau, 0.5)?);
    let back = theta_from_q(&QlbsParams::new(0.5, qp.q_tau, tau)?)?;
    println!("  back to theta: {:.12}", back.theta);
    let (qm, _) = qlbs_moments(&qp)?;
    println!("  mean through the quantile form: {qm:.6}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
