use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{quantile_sorted, sorted};

/// Mean, SD (divisor n−1), skewness and non-excess kurtosis (central moments
/// with divisor n).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualMoments {
    pub mean: f64,
    pub sd: f64,
    pub cs: f64,
    pub ck: f64,
}

fn central_moments(y: &[f64]) -> (f64, f64, f64, f64) {
    let n = y.len() as f64;
    let mean = y.iter().sum::<f64>() / n;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &v in y {
        let d = v - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    (mean, m2 / n, m3 / n, m4 / n)
}

pub fn residual_moments(r: &[f64]) -> Result<ResidualMoments> {
    let n = r.len();
    if n < 4 {
        return Err(Error::InvalidSpec(format!("residual moments need at least 4 values, got {n}")));
    }
    if r.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("residual"));
    }
    let (mean, m2, m3, m4) = central_moments(r);
    if !(m2 > 0.0) {
        return Err(Error::ZeroVariance);
    }
    Ok(ResidualMoments {
        mean,
        sd: (m2 * n as f64 / (n - 1) as f64).sqrt(),
        cs: m3 / m2.powf(1.5),
        ck: m4 / (m2 * m2),
    })
}

/// Summary of a positive response.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DescriptiveStats {
    pub n: usize,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub mean: f64,
    /// Divisor n−1; NaN when n = 1.
    pub sd: f64,
    /// `100·SD/mean`.
    pub cv_percent: f64,
    pub cs: f64,
}

/// Quartiles interpolate order statistics linearly. Empty input yields NaN
/// throughout.
pub fn descriptive_stats(y: &[f64]) -> DescriptiveStats {
    let n = y.len();
    if n == 0 {
        return DescriptiveStats {
            n,
            min: f64::NAN,
            q1: f64::NAN,
            median: f64::NAN,
            q3: f64::NAN,
            max: f64::NAN,
            mean: f64::NAN,
            sd: f64::NAN,
            cv_percent: f64::NAN,
            cs: f64::NAN,
        };
    }
    let s = sorted(y);
    let (mean, m2, m3, _) = central_moments(y);
    let sd = if n > 1 {
        (m2 * n as f64 / (n - 1) as f64).sqrt()
    } else {
        f64::NAN
    };
    DescriptiveStats {
        n,
        min: s[0],
        q1: quantile_sorted(&s, 0.25),
        median: quantile_sorted(&s, 0.5),
        q3: quantile_sorted(&s, 0.75),
        max: s[n - 1],
        mean,
        sd,
        cv_percent: 100.0 * sd / mean,
        cs: m3 / m2.powf(1.5),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{norm_quantile, RngStream};
    use proptest::prelude::*;

    #[test]
    fn normal_and_exponential_references() {
        let n = 200_000;
        let mut rng = RngStream::new(13, 0);
        let z: Vec<f64> = (0..n).map(|_| norm_quantile(rng.uniform()).unwrap()).collect();
        let m = residual_moments(&z).unwrap();
        assert!(m.mean.abs() < 0.01 && (m.sd - 1.0).abs() < 0.01);
        assert!(m.cs.abs() < 0.03 && (m.ck - 3.0).abs() < 0.06);
        let e: Vec<f64> = (0..n).map(|_| -rng.uniform().ln()).collect();
        let m = residual_moments(&e).unwrap();
        assert!((m.mean - 1.0).abs() < 0.01 && (m.sd - 1.0).abs() < 0.02);
        assert!((m.cs - 2.0).abs() < 0.1 && (m.ck - 9.0).abs() < 1.0);
    }

    #[test]
    fn exact_small_sample() {
        let m = residual_moments(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(m.mean, 2.5);
        assert!((m.sd - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!(m.cs.abs() < 1e-15);
        // m2 = 1.25, m4 = 2.5625
        assert!((m.ck - 2.5625 / 1.5625).abs() < 1e-14);
        assert!(matches!(residual_moments(&[2.0; 5]), Err(Error::ZeroVariance)));
        assert!(residual_moments(&[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn three_point_summary() {
        let d = descriptive_stats(&[3.0, 1.0, 2.0]);
        assert_eq!((d.mean, d.median, d.sd), (2.0, 2.0, 1.0));
        assert_eq!((d.min, d.max, d.q1, d.q3), (1.0, 3.0, 1.5, 2.5));
        assert_eq!(d.cv_percent, 50.0);
    }

    proptest! {
        #[test]
        fn shift_leaves_shape_moments(v in prop::collection::vec(-10.0f64..10.0, 6..40), c in -50.0f64..50.0) {
            prop_assume!(residual_moments(&v).is_ok_and(|m| m.sd > 1e-3));
            let a = residual_moments(&v).unwrap();
            let shifted: Vec<f64> = v.iter().map(|x| x + c).collect();
            let b = residual_moments(&shifted).unwrap();
            prop_assert!((b.mean - a.mean - c).abs() < 1e-9);
            prop_assert!((b.sd - a.sd).abs() < 1e-9 * (1.0 + a.sd));
            prop_assert!((b.cs - a.cs).abs() < 1e-6);
            prop_assert!((b.ck - a.ck).abs() < 1e-6);
        }

        #[test]
        fn scaling_keeps_cv_and_skewness(v in prop::collection::vec(0.1f64..100.0, 3..40), c in 0.01f64..100.0) {
            let a = descriptive_stats(&v);
            prop_assume!(a.sd > 1e-3);
            let scaled: Vec<f64> = v.iter().map(|x| x * c).collect();
            let b = descriptive_stats(&scaled);
            prop_assert!((b.median - c * a.median).abs() < 1e-9 * c * a.median.abs().max(1.0));
            prop_assert!((b.sd - c * a.sd).abs() < 1e-9 * c * a.sd);
            prop_assert!((b.cv_percent - a.cv_percent).abs() < 1e-9 * a.cv_percent.abs().max(1.0));
            prop_assert!((b.cs - a.cs).abs() < 1e-8);
        }
    }
}
