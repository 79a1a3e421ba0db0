use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Link between a positive parameter and its linear predictor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkFunction {
    Log,
    Sqrt,
    Identity,
}

impl LinkFunction {
    /// `g(μ)`.
    pub fn forward(self, mu: f64) -> f64 {
        match self {
            Self::Log => mu.ln(),
            Self::Sqrt => mu.sqrt(),
            Self::Identity => mu,
        }
    }

    /// `g⁻¹(η)`, or `None` when η lies outside the link's range (the sqrt and
    /// identity links need a positive predictor).
    pub fn inverse(self, eta: f64) -> Option<f64> {
        let mu = match self {
            Self::Log => eta.exp(),
            Self::Sqrt if eta > 0.0 => eta * eta,
            Self::Identity if eta > 0.0 => eta,
            _ => return None,
        };
        (mu > 0.0 && mu.is_finite()).then_some(mu)
    }

    /// `g'(μ)`.
    pub fn deriv(self, mu: f64) -> f64 {
        match self {
            Self::Log => 1.0 / mu,
            Self::Sqrt => 0.5 / mu.sqrt(),
            Self::Identity => 1.0,
        }
    }

    /// `g''(μ)`.
    pub fn deriv2(self, mu: f64) -> f64 {
        match self {
            Self::Log => -1.0 / (mu * mu),
            Self::Sqrt => -0.25 / (mu * mu.sqrt()),
            Self::Identity => 0.0,
        }
    }

    /// `dμ/dη = 1/g'(μ)`.
    #[inline]
    pub fn dmu_deta(self, mu: f64) -> f64 {
        match self {
            Self::Log => mu,
            Self::Sqrt => 2.0 * mu.sqrt(),
            Self::Identity => 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Log => "log",
            Self::Sqrt => "sqrt",
            Self::Identity => "identity",
        }
    }

    pub const ALL: [LinkFunction; 3] = [Self::Log, Self::Sqrt, Self::Identity];
}

impl fmt::Display for LinkFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LinkFunction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "log" => Ok(Self::Log),
            "sqrt" => Ok(Self::Sqrt),
            "identity" => Ok(Self::Identity),
            other => Err(format!("unknown link '{other}' (expected log, sqrt or identity)")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn domain_guards() {
        assert_eq!(LinkFunction::Sqrt.inverse(-0.1), None);
        assert_eq!(LinkFunction::Identity.inverse(0.0), None);
        assert!(LinkFunction::Log.inverse(-30.0).is_some());
        assert_eq!("SQRT".parse::<LinkFunction>().unwrap(), LinkFunction::Sqrt);
        assert!("logit".parse::<LinkFunction>().is_err());
    }

    proptest! {
        #[test]
        fn inverse_undoes_forward(mu in 1e-3f64..1e3) {
            for link in LinkFunction::ALL {
                let back = link.inverse(link.forward(mu)).unwrap();
                prop_assert!((back - mu).abs() <= 1e-12 * mu);
                let h = 1e-6 * mu;
                let fd = (link.forward(mu + h) - link.forward(mu - h)) / (2.0 * h);
                prop_assert!((fd - link.deriv(mu)).abs() <= 1e-6 * link.deriv(mu).abs().max(1.0));
                let fd2 = (link.deriv(mu + h) - link.deriv(mu - h)) / (2.0 * h);
                prop_assert!((fd2 - link.deriv2(mu)).abs() <= 1e-5 * link.deriv2(mu).abs().max(1.0));
                prop_assert!((link.dmu_deta(mu) * link.deriv(mu) - 1.0).abs() < 1e-12);
                if link != LinkFunction::Identity {
                    prop_assert!(link.deriv(mu) > 0.0);
                }
            }
        }
    }
}
