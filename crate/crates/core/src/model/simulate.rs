use super::likelihood::fitted_parameters;
use super::spec::{ModelSpec, ParamVector};
use crate::error::Result;
use crate::lbs::{lbs_quantile, theta_from_q, QlbsParams};
use crate::numerics::RngStream;

/// One response per row of the design, drawn from the model at `delta`.
pub fn simulate_response(delta: &ParamVector, spec: &ModelSpec, rng: &mut RngStream) -> Result<Vec<f64>> {
    let fitted = fitted_parameters(delta, spec)?;
    fitted
        .q
        .iter()
        .zip(&fitted.alpha)
        .map(|(&q, &alpha)| {
            let law = theta_from_q(&QlbsParams::new(alpha, q, spec.tau)?)?;
            lbs_quantile(rng.uniform(), &law)
        })
        .collect()
}
