use crate::error::{domain, Result};
use crate::numerics::{find_root_with_derivative, norm_pdf, Interval, RootOptions};

/// Law of `U = (T/θ + θ/T − 2)/α²` for `T ~ LBS(α, θ)`: the mixture
/// `π Γ(1/2, 2) + (1 − π) Γ(3/2, 2)` with `π = 2/(α² + 2)`.
///
/// Both components have closed-form CDFs through the normal law:
/// `F_{χ²₁}(u) = 2Φ(√u) − 1` and `F_{χ²₃}(u) = 2Φ(√u) − 1 − 2√u φ(√u)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureU {
    pub alpha: f64,
    pub pi: f64,
}

impl MixtureU {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(domain("alpha", alpha));
        }
        Ok(Self::unchecked(alpha))
    }

    #[inline]
    pub(crate) fn unchecked(alpha: f64) -> Self {
        Self {
            alpha,
            pi: 2.0 / (alpha * alpha + 2.0),
        }
    }

    /// CDF as a function of `z = √u`.
    #[inline]
    fn cdf_z(&self, z: f64) -> f64 {
        libm::erf(z * std::f64::consts::FRAC_1_SQRT_2) - (1.0 - self.pi) * 2.0 * z * norm_pdf(z)
    }

    /// Survival function as a function of `z = √u`.
    #[inline]
    fn sf_z(&self, z: f64) -> f64 {
        libm::erfc(z * std::f64::consts::FRAC_1_SQRT_2) + (1.0 - self.pi) * 2.0 * z * norm_pdf(z)
    }

    /// d/dz of the CDF in `z = √u`: `2φ(z)(π + (1 − π)z²)`.
    #[inline]
    fn dcdf_z(&self, z: f64) -> f64 {
        2.0 * norm_pdf(z) * (self.pi + (1.0 - self.pi) * z * z)
    }

    pub fn cdf(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        self.cdf_z(u.sqrt())
    }

    pub fn sf(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return 1.0;
        }
        self.sf_z(u.sqrt())
    }

    pub fn pdf(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        let a2 = self.alpha * self.alpha;
        (a2 * u + 2.0) / (a2 + 2.0) * norm_pdf(u.sqrt()) / u.sqrt()
    }

    /// `z_τ = √u_τ`, solved in the square-root scale where the CDF is smooth at
    /// the origin.
    pub(crate) fn sqrt_quantile(&self, tau: f64) -> Result<f64> {
        if !(tau > 0.0 && tau < 1.0) {
            return Err(domain("tau", tau));
        }
        // starting point: interpolate between the chi-square(1) and
        // chi-square(3) quantile approximations
        let z1 = crate::numerics::norm_quantile(0.5 * (1.0 + tau))?;
        let z3 = wilson_hilferty_chi3(tau).sqrt();
        let guess = self.pi * z1 + (1.0 - self.pi) * z3;
        let mut hi = (2.0 * guess).max(8.0);
        while self.cdf_z(hi) < tau {
            hi *= 2.0;
        }
        let upper = tau > 0.5;
        find_root_with_derivative(
            |z| {
                let f = if upper {
                    (1.0 - tau) - self.sf_z(z)
                } else {
                    self.cdf_z(z) - tau
                };
                (f, self.dcdf_z(z))
            },
            Interval { lo: 0.0, hi },
            RootOptions {
                tol: 1e-15,
                max_iter: 200,
                guess: Some(guess),
            },
        )
    }

    pub fn quantile(&self, tau: f64) -> Result<f64> {
        let z = self.sqrt_quantile(tau)?;
        Ok(z * z)
    }

    /// `dz_τ/dα` for `z_τ = √u_τ`, by implicit differentiation of
    /// `G(z, α) = τ`: only the weight `1 − π = α²/(α² + 2)` depends on α.
    pub(crate) fn dsqrt_quantile_dalpha(&self, z: f64) -> f64 {
        let a = self.alpha;
        let d = a * a + 2.0;
        4.0 * a * z / (d * d * (self.pi + (1.0 - self.pi) * z * z))
    }
}

fn wilson_hilferty_chi3(tau: f64) -> f64 {
    let k: f64 = 3.0;
    let z = crate::numerics::norm_quantile(tau).unwrap_or(0.0);
    let c = 2.0 / (9.0 * k);
    (k * (1.0 - c + z * c.sqrt()).powi(3)).max(1e-8)
}

/// CDF of `U` at `u` for shape `alpha`.
pub fn u_mixture_cdf(u: f64, alpha: f64) -> Result<f64> {
    if u < 0.0 || u.is_nan() {
        return Err(domain("u", u));
    }
    Ok(MixtureU::new(alpha)?.cdf(u))
}

/// Density of `U` at `u` for shape `alpha`.
pub fn u_mixture_pdf(u: f64, alpha: f64) -> Result<f64> {
    if u < 0.0 || u.is_nan() {
        return Err(domain("u", u));
    }
    Ok(MixtureU::new(alpha)?.pdf(u))
}

/// The τ-quantile `u_τ` of `U`.
pub fn u_quantile(tau: f64, alpha: f64) -> Result<f64> {
    MixtureU::new(alpha)?.quantile(tau)
}
