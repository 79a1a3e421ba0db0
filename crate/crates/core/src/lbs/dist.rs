use super::kappa::{kappa, theta_from_q};
use crate::error::{domain, Error, Result};
use crate::numerics::{
    find_root_with_derivative, mills_ratio, norm_cdf, norm_pdf, Interval, RootOptions,
    LN_SQRT_2PI,
};

/// Shape `alpha` and scale `theta` of `LBS(α, θ)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LbsParams {
    pub alpha: f64,
    pub theta: f64,
}

impl LbsParams {
    pub fn new(alpha: f64, theta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(domain("alpha", alpha));
        }
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(domain("theta", theta));
        }
        Ok(Self { alpha, theta })
    }
}

/// Shape `alpha`, quantile parameter `q_tau` and its level `tau`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct QlbsParams {
    pub alpha: f64,
    pub q_tau: f64,
    pub tau: f64,
}

impl QlbsParams {
    pub fn new(alpha: f64, q_tau: f64, tau: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(domain("alpha", alpha));
        }
        if !(q_tau > 0.0 && q_tau.is_finite()) {
            return Err(domain("q_tau", q_tau));
        }
        if !(tau > 0.0 && tau < 1.0) {
            return Err(domain("tau", tau));
        }
        Ok(Self { alpha, q_tau, tau })
    }
}

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(domain("t", t));
    }
    Ok(())
}

/// `ln(2 cosh x)` without overflow.
#[inline]
pub fn ln_2cosh(x: f64) -> f64 {
    let ax = x.abs();
    ax + (-2.0 * ax).exp().ln_1p()
}

/// `a_t = (√(t/θ) − √(θ/t))/α`, evaluated as `2 sinh(½ log(t/θ))/α` so that
/// extreme ratios neither overflow nor cancel.
pub fn a_t(t: f64, p: &LbsParams) -> Result<f64> {
    check_t(t)?;
    Ok(2.0 * (0.5 * log_ratio(t, p.theta)).sinh() / p.alpha)
}

/// `log(t/θ)`; the quotient is formed first so that joint rescaling by a
/// power of two leaves the result bit-identical.
#[inline]
fn log_ratio(t: f64, theta: f64) -> f64 {
    let r = t / theta;
    if r.is_normal() {
        r.ln()
    } else {
        t.ln() - theta.ln()
    }
}

/// Log density of `LBS(α, θ)`.
pub fn lbs_log_pdf(t: f64, p: &LbsParams) -> Result<f64> {
    check_t(t)?;
    let r = log_ratio(t, p.theta);
    let a = 2.0 * (0.5 * r).sinh() / p.alpha;
    let al = p.alpha;
    Ok(-LN_SQRT_2PI - 0.5 * a * a - (al * al * al + 2.0 * al).ln() - p.theta.ln()
        + ln_2cosh(0.5 * r))
}

/// Density `φ(a_t) [√(t/θ) + √(θ/t)] / (θ(α³ + 2α))`, i.e. `t f_Y(t)/E(Y)`
/// for `Y ~ BS(α, θ)`.
pub fn lbs_pdf(t: f64, p: &LbsParams) -> Result<f64> {
    lbs_log_pdf(t, p).map(f64::exp)
}

/// `(F, S)` at standardized value `a`.
///
/// The closed-form CDF carries `exp(2/α²)[Φ(x) − 1]` with
/// `x = √(4 + α²a²)/α`; since `exp(2/α²) φ(x) = φ(a)` this equals
/// `−φ(a) M(x)` with `M` the Mills ratio, giving
/// `F = Φ(a) − c φ(a) [M(x) + a + x]` and `S = Φ(−a) + c φ(a) [M(x) + a + x]`,
/// `c = α²/(2 + α²)`.
fn cdf_sf_at(a: f64, alpha: f64) -> (f64, f64) {
    let a2 = alpha * alpha;
    let x = (4.0 / a2 + a * a).sqrt();
    // a + x, written without cancellation for negative a
    let a_plus_x = if a >= 0.0 { a + x } else { (4.0 / a2) / (x - a) };
    let tail = a2 / (2.0 + a2) * norm_pdf(a) * (mills_ratio(x) + a_plus_x);
    let f = (norm_cdf(a) - tail).clamp(0.0, 1.0);
    let s = (norm_cdf(-a) + tail).clamp(0.0, 1.0);
    (f, s)
}

/// Distribution function of `LBS(α, θ)`.
pub fn lbs_cdf(t: f64, p: &LbsParams) -> Result<f64> {
    let a = a_t(t, p)?;
    Ok(cdf_sf_at(a, p.alpha).0)
}

/// Survival function `1 − F`, accurate in the upper tail.
pub fn lbs_sf(t: f64, p: &LbsParams) -> Result<f64> {
    let a = a_t(t, p)?;
    Ok(cdf_sf_at(a, p.alpha).1)
}

/// Log survival function; finite even where `S` underflows.
pub fn lbs_log_sf(t: f64, p: &LbsParams) -> Result<f64> {
    let a = a_t(t, p)?;
    if a <= 5.0 {
        return Ok(cdf_sf_at(a, p.alpha).1.ln());
    }
    // S = φ(a) [M(a) + c (M(x) + a + x)]
    let a2 = p.alpha * p.alpha;
    let x = (4.0 / a2 + a * a).sqrt();
    let bracket = mills_ratio(a) + a2 / (2.0 + a2) * (mills_ratio(x) + a + x);
    Ok(-LN_SQRT_2PI - 0.5 * a * a + bracket.ln())
}

/// `(E T, Var T)`.
pub fn lbs_moments(p: &LbsParams) -> (f64, f64) {
    let a2 = p.alpha * p.alpha;
    let a4 = a2 * a2;
    let mean = p.theta * (2.0 + 4.0 * a2 + 3.0 * a4) / (2.0 + a2);
    let var = p.theta * p.theta * a2 * (4.0 + 17.0 * a2 + 24.0 * a4 + 6.0 * a4 * a2)
        / ((2.0 + a2) * (2.0 + a2));
    (mean, var)
}

/// Density in the quantile parameterization.
pub fn qlbs_pdf(t: f64, q: &QlbsParams) -> Result<f64> {
    lbs_pdf(t, &theta_from_q(q)?)
}

/// Distribution function in the quantile parameterization.
pub fn qlbs_cdf(t: f64, q: &QlbsParams) -> Result<f64> {
    lbs_cdf(t, &theta_from_q(q)?)
}

/// Mean and variance in the quantile parameterization, i.e. the scale-form
/// moments with `θ = 4Q/κ_τ(α)` substituted.
pub fn qlbs_moments(q: &QlbsParams) -> Result<(f64, f64)> {
    let k = kappa(q.tau, q.alpha)?;
    let scale = 4.0 * q.q_tau / k;
    let a2 = q.alpha * q.alpha;
    let a4 = a2 * a2;
    let mean = scale * (2.0 + 4.0 * a2 + 3.0 * a4) / (2.0 + a2);
    let var = scale * scale * a2 * (4.0 + 17.0 * a2 + 24.0 * a4 + 6.0 * a4 * a2)
        / ((2.0 + a2) * (2.0 + a2));
    Ok((mean, var))
}

/// `prob`-quantile of `LBS(α, θ)` by safeguarded Newton on `log t`.
///
/// The bracket starts at `[θ/10, 10θ]` and is widened by factors of ten until
/// it contains the target. Upper-tail targets are solved on the survival
/// function.
pub fn lbs_quantile(prob: f64, p: &LbsParams) -> Result<f64> {
    if !(prob > 0.0 && prob < 1.0) {
        return Err(domain("probability", prob));
    }
    let ln_theta = p.theta.ln();
    let upper = prob > 0.5;
    let target = if upper { 1.0 - prob } else { prob };
    // g(y) increasing in y = log t
    let g = |y: f64| -> f64 {
        let a = 2.0 * (0.5 * (y - ln_theta)).sinh() / p.alpha;
        let (f, s) = cdf_sf_at(a, p.alpha);
        if upper {
            target - s
        } else {
            f - target
        }
    };
    let step = std::f64::consts::LN_10;
    let (mut lo, mut hi) = (ln_theta - step, ln_theta + step);
    let mut expansions = 0;
    while g(lo) > 0.0 {
        lo -= step;
        expansions += 1;
        if expansions > 600 {
            return Err(Error::NoSignChange { lo, hi });
        }
    }
    while g(hi) < 0.0 {
        hi += step;
        expansions += 1;
        if expansions > 600 {
            return Err(Error::NoSignChange { lo, hi });
        }
    }
    let y = find_root_with_derivative(
        |y| {
            let t = y.exp();
            let dens = lbs_pdf(t, p).unwrap_or(0.0);
            (g(y), t * dens)
        },
        Interval { lo, hi },
        RootOptions {
            tol: 1e-15 * target,
            max_iter: 200,
            guess: None,
        },
    )?;
    Ok(y.exp())
}

/// `F(Q_τ) − τ`: how far the quantile parameter sits from the distributional
/// τ-quantile. Scale-free, so evaluated at θ = 1.
pub fn quantile_gap(alpha: f64, tau: f64) -> Result<f64> {
    let p = LbsParams::new(alpha, 1.0)?;
    let q = 0.25 * kappa(tau, alpha)?;
    Ok(lbs_cdf(q, &p)? - tau)
}
