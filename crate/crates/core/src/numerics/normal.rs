use crate::error::{domain, Result};

/// `ln(sqrt(2π))`.
pub const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Standard normal density.
#[inline]
pub fn norm_pdf(z: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * z * z).exp()
}

/// Standard normal distribution function, via `erfc` so both tails keep
/// full relative precision.
#[inline]
pub fn norm_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z * std::f64::consts::FRAC_1_SQRT_2)
}

/// Standard normal survival function `1 − Φ(z)`.
#[inline]
pub fn norm_sf(z: f64) -> f64 {
    norm_cdf(-z)
}

/// Mills ratio `(1 − Φ(x)) / φ(x)`.
///
/// Evaluated directly while both factors are comfortably representable and by
/// the Laplace continued fraction further out in the upper tail.
pub fn mills_ratio(x: f64) -> f64 {
    if x < 20.0 {
        return norm_sf(x) / norm_pdf(x);
    }
    // 1 / (x + 1/(x + 2/(x + 3/(x + ...))))
    let mut t = x;
    for k in (1..=40).rev() {
        t = x + k as f64 / t;
    }
    1.0 / t
}

// AS 241 rational approximations; coefficients in ascending powers.
const CENTRAL_NUM: [f64; 8] = [
    3.387_132_872_796_366_5,
    133.141_667_891_784_38,
    1971.590_950_306_551_3,
    13731.693_765_509_461,
    45921.953_931_549_87,
    67265.770_927_008_7,
    33430.575_583_588_13,
    2509.080_928_730_122_7,
];
const CENTRAL_DEN: [f64; 8] = [
    1.0,
    42.313_330_701_600_91,
    687.187_007_492_057_9,
    5394.196_021_424_751,
    21213.794_301_586_597,
    39307.895_800_092_71,
    28729.085_735_721_943,
    5226.495_278_852_546,
];
const NEAR_NUM: [f64; 8] = [
    1.423_437_110_749_683_5,
    4.630_337_846_156_545,
    5.769_497_221_460_691,
    3.647_848_324_763_204_5,
    1.270_458_252_452_368_4,
    0.241_780_725_177_450_6,
    0.022_723_844_989_269_184,
    7.745_450_142_783_414e-4,
];
const NEAR_DEN: [f64; 8] = [
    1.0,
    2.053_191_626_637_759,
    1.676_384_830_183_803_8,
    0.689_767_334_985_1,
    0.148_103_976_427_480_08,
    0.015_198_666_563_616_457,
    5.475_938_084_995_345e-4,
    1.050_750_071_644_416_8e-9,
];
const FAR_NUM: [f64; 8] = [
    6.657_904_643_501_103,
    5.463_784_911_164_114,
    1.784_826_539_917_291_3,
    0.296_560_571_828_504_9,
    0.026_532_189_526_576_124,
    0.001_242_660_947_388_078_4,
    2.711_555_568_743_487_6e-5,
    2.010_334_399_292_288e-7,
];
const FAR_DEN: [f64; 8] = [
    1.0,
    0.599_832_206_555_887_9,
    0.136_929_880_922_735_8,
    0.014_875_361_290_850_615,
    7.868_691_311_456_133e-4,
    1.846_318_317_510_054_8e-5,
    1.421_511_758_316_446e-7,
    2.044_263_103_389_939_8e-15,
];

#[inline]
fn horner(c: &[f64; 8], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &k| acc * x + k)
}

/// Standard normal quantile function (Wichura's AS 241, about 1e-16 relative
/// accuracy).
pub fn norm_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(domain("probability", p));
    }
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        return Ok(q * horner(&CENTRAL_NUM, r) / horner(&CENTRAL_DEN, r));
    }
    let tail = if q < 0.0 { p } else { 1.0 - p };
    let r = (-tail.ln()).sqrt();
    let val = if r <= 5.0 {
        let r = r - 1.6;
        horner(&NEAR_NUM, r) / horner(&NEAR_DEN, r)
    } else {
        let r = r - 5.0;
        horner(&FAR_NUM, r) / horner(&FAR_DEN, r)
    };
    Ok(if q < 0.0 { -val } else { val })
}

#[cfg(test)]
mod tests {
    use super::*;

    // Series for Φ around zero: Φ(z) = 1/2 + φ(0) Σ (-1)^k z^(2k+1) / (2^k k! (2k+1)).
    fn cdf_series(z: f64) -> f64 {
        let mut sum = 0.0;
        let mut term = z;
        let mut k = 0.0;
        while term.abs() > 1e-20 {
            sum += term / (2.0 * k + 1.0);
            k += 1.0;
            term *= -z * z / (2.0 * k);
        }
        0.5 + FRAC_1_SQRT_2PI * sum
    }

    #[test]
    fn pdf_values() {
        assert!((norm_pdf(0.0) - 0.398_942_280_4).abs() < 1e-10);
        assert_eq!(norm_pdf(1.0), norm_pdf(-1.0));
        let direct = (-2.0f64).exp() / (2.0 * std::f64::consts::PI).sqrt();
        assert!((norm_pdf(2.0) - direct).abs() < 1e-14);
    }

    #[test]
    fn cdf_matches_series_and_symmetry() {
        for i in -30..=30 {
            let z = i as f64 * 0.1;
            assert!((norm_cdf(z) - cdf_series(z)).abs() < 2e-15, "z={z}");
            assert!((norm_cdf(z) + norm_cdf(-z) - 1.0).abs() <= 1e-15);
        }
        assert_eq!(norm_cdf(0.0), 0.5);
        assert!((norm_cdf(40.0) - 1.0).abs() <= 1e-15);
    }

    #[test]
    fn cdf_at_1959964() {
        // bisection oracle for the 0.975 point
        let (mut lo, mut hi) = (1.0f64, 3.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if cdf_series(mid) < 0.975 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((lo - 1.959_964).abs() < 1e-6);
        assert!((norm_cdf(1.959_964) - 0.975).abs() < 1e-6);
    }

    #[test]
    fn pdf_is_derivative_of_cdf() {
        let h = 1e-5;
        for i in -50..=50 {
            let z = i as f64 * 0.1;
            let d = (norm_cdf(z + h) - norm_cdf(z - h)) / (2.0 * h);
            assert!((d - norm_pdf(z)).abs() < 1e-6);
        }
    }

    #[test]
    fn quantile_round_trip() {
        assert_eq!(norm_quantile(0.5).unwrap(), 0.0);
        assert!((norm_quantile(0.975).unwrap() - 1.959_964).abs() < 1e-6);
        for &p in &[1e-300, 1e-20, 1e-8, 0.001, 0.02, 0.3, 0.5, 0.7, 0.9, 0.999, 1.0 - 1e-12] {
            let z = norm_quantile(p).unwrap();
            let back = norm_cdf(z);
            assert!((back - p).abs() <= 1e-12 * p.max(1e-3), "p={p}");
            if p < 0.5 && 1.0 - p < 1.0 {
                assert!((norm_quantile(1.0 - p).unwrap() + z).abs() < 1e-9 * z.abs().max(1.0));
            }
        }
        assert!(norm_quantile(0.0).is_err());
        assert!(norm_quantile(1.0).is_err());
        assert!(norm_quantile(f64::NAN).is_err());
    }

    #[test]
    fn mills_ratio_continuity() {
        // both branches agree where they meet
        let a = norm_sf(20.0) / norm_pdf(20.0);
        let mut t = 20.0;
        for k in (1..=40).rev() {
            t = 20.0 + k as f64 / t;
        }
        assert!((a - 1.0 / t).abs() / a < 1e-12);
        assert!((mills_ratio(0.0) - 0.5 / FRAC_1_SQRT_2PI).abs() < 1e-15);
        assert!(mills_ratio(1e6) > 0.0);
    }
}
