use super::dist::{lbs_quantile, LbsParams};
use crate::error::{domain, Result};
use crate::numerics::RngStream;

/// `n` independent draws by inverse-CDF sampling.
pub fn lbs_sample(n: usize, p: &LbsParams, rng: &mut RngStream) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(domain("sample size", 0.0));
    }
    let mut out = Vec::with_capacity(n);
    lbs_sample_into(&mut out, n, p, rng)?;
    Ok(out)
}

pub fn lbs_sample_into(
    out: &mut Vec<f64>,
    n: usize,
    p: &LbsParams,
    rng: &mut RngStream,
) -> Result<()> {
    for _ in 0..n {
        out.push(lbs_quantile(rng.uniform(), p)?);
    }
    Ok(())
}
