use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::hessian::{hessian_analytic, hessian_numeric};
use super::init::initial_values;
use super::likelihood::{check_response, loglik_and_score};
use super::optim::{backtrack, bfgs, max_abs, nelder_mead, BfgsOptions, StopReason};
use super::spec::{ModelSpec, ParamVector};
use crate::error::{Error, Result};
use crate::numerics::{norm_quantile, Interval};

/// Which observed-information matrix feeds the covariance.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HessianSource {
    /// Central-difference Jacobian of the analytic score.
    #[default]
    Numeric,
    /// Closed-form blocks with a numeric `c'`.
    Analytic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitOptions {
    pub max_iter: usize,
    /// Gradient max-norm threshold.
    pub grad_tol: f64,
    /// Relative log-likelihood change threshold.
    pub rel_tol: f64,
    pub hessian: HessianSource,
    /// Starting point; `None` uses [`initial_values`](super::initial_values).
    pub start: Option<ParamVector>,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            max_iter: 500,
            grad_tol: 1e-6,
            rel_tol: 1e-10,
            hessian: HessianSource::Numeric,
            start: None,
        }
    }
}

/// Maximum-likelihood estimates with their asymptotic covariance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub delta_hat: ParamVector,
    /// Row-major `(p+q)×(p+q)` inverse observed information.
    pub covariance: Vec<Vec<f64>>,
    pub std_errors: Vec<f64>,
    pub loglik: f64,
    pub aic: f64,
    pub bic: f64,
    pub iterations: usize,
    pub converged: bool,
    pub gradient_norm: f64,
    pub n: usize,
    pub tau: f64,
    pub hessian: HessianSource,
    /// Log-likelihood after each accepted step.
    pub loglik_trace: Vec<f64>,
}

impl FitResult {
    pub fn n_params(&self) -> usize {
        self.delta_hat.len()
    }

    pub fn estimates(&self) -> Vec<f64> {
        self.delta_hat.to_vec()
    }
}

pub(crate) fn information_criteria(loglik: f64, k: usize, n: usize) -> (f64, f64) {
    let k = k as f64;
    (-2.0 * loglik + 2.0 * k, -2.0 * loglik + k * (n as f64).ln())
}

/// Negative log-likelihood and its gradient, `None` where inadmissible.
fn objective<'a>(
    spec: &'a ModelSpec,
    t: &'a [f64],
) -> impl FnMut(&[f64]) -> Option<(f64, Vec<f64>)> + 'a {
    let p = spec.p();
    move |x: &[f64]| {
        let delta = ParamVector::from_slice(x, p);
        let (ll, s) = loglik_and_score(&delta, spec, t).ok()?;
        if !ll.is_finite() || s.iter().any(|v| !v.is_finite()) {
            return None;
        }
        Some((-ll, s.into_iter().map(|v| -v).collect()))
    }
}

fn information(delta: &ParamVector, spec: &ModelSpec, t: &[f64], src: HessianSource) -> Result<DMatrix<f64>> {
    let h = match src {
        HessianSource::Numeric => hessian_numeric(delta, spec, t)?,
        HessianSource::Analytic => hessian_analytic(delta, spec, t)?,
    };
    let info = -h;
    Ok((&info + info.transpose()) * 0.5)
}

/// Maximize the log-likelihood.
///
/// Runs BFGS from the starting values, restarts from a simplex search if the
/// line search stalls, then takes Newton steps on the numeric Hessian until
/// the gradient meets `grad_tol`. A fit that runs out of iterations comes back
/// with `converged = false`; a converged fit with a singular information
/// matrix is an error.
pub fn fit(spec: &ModelSpec, t: &[f64], opts: &FitOptions) -> Result<FitResult> {
    check_response(spec, t)?;
    let p = spec.p();
    let start = match &opts.start {
        Some(s) => {
            s.check_dims(spec)?;
            s.clone()
        }
        None => initial_values(spec, t)?,
    };
    let mut obj = objective(spec, t);
    let x0 = start.to_vec();
    let f0 = obj(&x0).ok_or_else(|| Error::Inadmissible("starting values give a non-finite log-likelihood".into()))?;

    let h0 = information(&start, spec, t, HessianSource::Numeric)
        .ok()
        .and_then(|info| info.cholesky())
        .map(|c| c.inverse());
    let bopts = BfgsOptions {
        max_iter: opts.max_iter,
        grad_tol: opts.grad_tol,
        rel_tol: opts.rel_tol,
    };
    let mut run = bfgs(&mut obj, x0, f0, h0, bopts);
    let mut iterations = run.iterations;
    let mut trace = run.trace.clone();

    if run.reason == StopReason::LineSearch && iterations < opts.max_iter {
        let mut value = |x: &[f64]| obj(x).map_or(f64::INFINITY, |(f, _)| f);
        let (xs, _) = nelder_mead(&mut value, &run.x, 200 * x0_len(&run.x), 1e-12);
        if let Some(fs) = obj(&xs) {
            if fs.0 <= run.f {
                let rest = BfgsOptions {
                    max_iter: opts.max_iter - iterations,
                    ..bopts
                };
                let again = bfgs(&mut obj, xs, fs, None, rest);
                iterations += again.iterations;
                trace.extend_from_slice(&again.trace);
                run = again;
            }
        }
    }

    let (mut x, mut f, mut g) = (run.x, run.f, run.grad);
    let mut stalled = run.reason == StopReason::RelativeChange;
    for _ in 0..20 {
        if max_abs(&g) <= opts.grad_tol {
            break;
        }
        let delta = ParamVector::from_slice(&x, p);
        let Some(chol) = information(&delta, spec, t, HessianSource::Numeric)
            .ok()
            .and_then(|i| i.cholesky())
        else {
            break;
        };
        let gv = nalgebra::DVector::from_column_slice(&g);
        let dir: Vec<f64> = (-chol.solve(&gv)).iter().copied().collect();
        // Close to the optimum the decrease in f falls below rounding, so a
        // full step that does not raise f and shrinks the gradient is taken.
        let full: Vec<f64> = x.iter().zip(&dir).map(|(a, d)| a + d).collect();
        let flat = obj(&full).filter(|(ft, gt)| *ft <= f && max_abs(gt) < max_abs(&g));
        let step = match flat {
            Some((ft, gt)) => Some((full, ft, gt)),
            None => backtrack(&mut obj, &x, f, &g, &dir),
        };
        match step {
            Some((xn, fn_, gn)) => {
                stalled = (f - fn_).abs() <= opts.rel_tol * f.abs().max(1.0);
                x = xn;
                f = fn_;
                g = gn;
                iterations += 1;
                trace.push(f);
            }
            None => break,
        }
    }

    let gradient_norm = max_abs(&g);
    let converged = gradient_norm <= opts.grad_tol || stalled;
    let delta_hat = ParamVector::from_slice(&x, p);
    let k = x.len();
    let info = information(&delta_hat, spec, t, opts.hessian)?;
    let covariance = match info.clone().cholesky() {
        Some(c) => {
            let inv = c.inverse();
            (0..k).map(|i| (0..k).map(|j| inv[(i, j)]).collect()).collect()
        }
        None if converged => return Err(Error::SingularInformation),
        None => vec![vec![f64::NAN; k]; k],
    };
    let std_errors = (0..k).map(|i: usize| f64::sqrt(covariance[i][i])).collect();
    let loglik = -f;
    let (aic, bic) = information_criteria(loglik, k, spec.n());
    Ok(FitResult {
        delta_hat,
        covariance,
        std_errors,
        loglik,
        aic,
        bic,
        iterations,
        converged,
        gradient_norm,
        n: spec.n(),
        tau: spec.tau,
        hessian: opts.hessian,
        loglik_trace: trace.into_iter().map(|v| -v).collect(),
    })
}

fn x0_len(x: &[f64]) -> usize {
    x.len().max(1)
}

/// Wald intervals `δ̂_j ± z_{1−γ/2} SE_j`.
pub fn conf_intervals(fit: &FitResult, gamma: f64) -> Result<Vec<Interval>> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(crate::error::domain("gamma", gamma));
    }
    if !fit.converged {
        return Err(Error::NotConverged {
            iterations: fit.iterations,
            gradient_norm: fit.gradient_norm,
        });
    }
    let z = norm_quantile(1.0 - gamma / 2.0)?;
    fit.estimates()
        .iter()
        .zip(&fit.std_errors)
        .map(|(&d, &se)| Interval::new(d - z * se, d + z * se))
        .collect()
}
