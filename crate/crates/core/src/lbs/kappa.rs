use super::dist::{LbsParams, QlbsParams};
use super::mixture::MixtureU;
use crate::error::{domain, Result};

/// `κ` at a given mixture quantile `u`: `(α√u + √(α²u + 4))²`.
pub fn kappa_from_u(u: f64, alpha: f64) -> f64 {
    let z = u.max(0.0).sqrt();
    let az = alpha * z;
    let s = (az * az + 4.0).sqrt();
    (az + s) * (az + s)
}

/// `κ_τ(α)` together with its logarithmic derivative in α.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaEval {
    pub kappa: f64,
    /// Total derivative `d log κ_τ(α) / dα`, with `u_τ` moving with α.
    pub log_deriv: f64,
    pub u: f64,
}

/// `κ_τ(α)` and `m = κ'_τ(α)/κ_τ(α)` in one quantile solve.
///
/// The mixture weight depends on α, so `u_τ` does too; with `z = √u_τ` and
/// `s = √(α²z² + 4)` the total log-derivative is `2(z + α dz/dα)/s`, where
/// `dz/dα` comes from implicit differentiation of the mixture CDF.
pub fn kappa_with_logderiv(tau: f64, alpha: f64) -> Result<KappaEval> {
    let mix = MixtureU::new(alpha)?;
    let z = mix.sqrt_quantile(tau)?;
    let dz = mix.dsqrt_quantile_dalpha(z);
    let az = alpha * z;
    let s = (az * az + 4.0).sqrt();
    Ok(KappaEval {
        kappa: (az + s) * (az + s),
        log_deriv: 2.0 * (z + alpha * dz) / s,
        u: z * z,
    })
}

/// `κ_τ(α) = (α√u_τ + √(α²u_τ + 4))²`.
pub fn kappa(tau: f64, alpha: f64) -> Result<f64> {
    let u = MixtureU::new(alpha)?.quantile(tau)?;
    Ok(kappa_from_u(u, alpha))
}

/// Central-difference estimate of `d log κ_τ(α)/dα` with `u_τ` recomputed at
/// `α ± h` (the total derivative).
pub fn kappa_logderiv(tau: f64, alpha: f64, h: f64) -> Result<f64> {
    check_step(alpha, h)?;
    let up = kappa(tau, alpha + h)?.ln();
    let down = kappa(tau, alpha - h)?.ln();
    Ok((up - down) / (2.0 * h))
}

/// Central-difference estimate of `∂ log κ/∂α` holding `u_τ` at its value at
/// α (the partial derivative).
pub fn kappa_logderiv_frozen(tau: f64, alpha: f64, h: f64) -> Result<f64> {
    check_step(alpha, h)?;
    let u = MixtureU::new(alpha)?.quantile(tau)?;
    let up = kappa_from_u(u, alpha + h).ln();
    let down = kappa_from_u(u, alpha - h).ln();
    Ok((up - down) / (2.0 * h))
}

fn check_step(alpha: f64, h: f64) -> Result<()> {
    if !(h > 0.0 && h < alpha) {
        return Err(domain("finite-difference step", h));
    }
    Ok(())
}

/// `θ = 4 Q_τ / κ_τ(α)`.
pub fn theta_from_q(q: &QlbsParams) -> Result<LbsParams> {
    let k = kappa(q.tau, q.alpha)?;
    LbsParams::new(q.alpha, 4.0 * q.q_tau / k)
}

/// `Q_τ = (θ/4) κ_τ(α)`.
pub fn q_from_theta(p: &LbsParams, tau: f64) -> Result<QlbsParams> {
    let k = kappa(tau, p.alpha)?;
    QlbsParams::new(p.alpha, 0.25 * p.theta * k, tau)
}
