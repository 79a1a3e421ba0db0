use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fit::{fit, FitOptions};
use super::spec::ModelSpec;
use crate::error::{Error, Result};
use crate::numerics::{quantile_sorted, sorted, Interval, RngStream};

/// Percentile bootstrap intervals and the replicate estimates behind them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapResult {
    pub intervals: Vec<Interval>,
    /// Estimates of the successful replicates, in replicate order.
    pub replicates: Vec<Vec<f64>>,
    pub requested: usize,
    pub failed: usize,
}

/// Case-resampling percentile bootstrap with `b ≥ 100` refits.
///
/// Replicate `k` draws from `rng.child(k)`, so results do not depend on the
/// thread count. Failed or non-converged refits are dropped; more than 20%
/// failures is an error.
pub fn bootstrap_ci(
    spec: &ModelSpec,
    t: &[f64],
    b: usize,
    gamma: f64,
    rng: &RngStream,
    opts: &FitOptions,
) -> Result<BootstrapResult> {
    bootstrap_ci_with(spec, t, b, gamma, rng, opts, |n, r| (0..n).map(|_| r.index(n)).collect())
}

/// [`bootstrap_ci`] with a caller-supplied row resampler.
pub fn bootstrap_ci_with<R>(
    spec: &ModelSpec,
    t: &[f64],
    b: usize,
    gamma: f64,
    rng: &RngStream,
    opts: &FitOptions,
    resample: R,
) -> Result<BootstrapResult>
where
    R: Fn(usize, &mut RngStream) -> Vec<usize> + Sync,
{
    if b < 100 {
        return Err(Error::InvalidSpec(format!("bootstrap needs at least 100 replicates, got {b}")));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(crate::error::domain("gamma", gamma));
    }
    let base = fit(spec, t, opts)?;
    let ropts = FitOptions {
        start: Some(base.delta_hat.clone()),
        ..opts.clone()
    };
    let n = spec.n();
    let outcomes: Vec<Option<Vec<f64>>> = (0..b)
        .into_par_iter()
        .map(|k| {
            let mut r = rng.child(k as u64);
            let rows = resample(n, &mut r);
            let sub = spec.select_rows(&rows).ok()?;
            let tt: Vec<f64> = rows.iter().map(|&i| t[i]).collect();
            let res = fit(&sub, &tt, &ropts).ok()?;
            res.converged.then(|| res.estimates())
        })
        .collect();
    let failed = outcomes.iter().filter(|o| o.is_none()).count();
    if failed * 5 > b {
        return Err(Error::TooManyFailures { failed, total: b });
    }
    let replicates: Vec<Vec<f64>> = outcomes.into_iter().flatten().collect();
    let intervals = (0..base.n_params())
        .map(|j| {
            let col = sorted(&replicates.iter().map(|r| r[j]).collect::<Vec<_>>());
            Interval::new(quantile_sorted(&col, gamma / 2.0), quantile_sorted(&col, 1.0 - gamma / 2.0))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BootstrapResult {
        intervals,
        replicates,
        requested: b,
        failed,
    })
}
