use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadratureOptions {
    pub tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            tol: super::QUAD_TOL,
            max_subdivisions: 4000,
        }
    }
}

/// Adaptive Gauss–Kronrod (7/15) quadrature of `f` over `[lo, hi]`.
///
/// The interval with the largest error estimate is bisected until the summed
/// estimate is below `tol`. Infinite ranges must be truncated by the caller.
pub fn integrate<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    integrate_with(
        f,
        lo,
        hi,
        QuadratureOptions {
            tol,
            ..QuadratureOptions::default()
        },
    )
}

pub fn integrate_with<F>(f: F, lo: f64, hi: f64, opts: QuadratureOptions) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::Domain {
            what: "integration range",
            value: hi - lo,
        });
    }
    let mut segments = vec![gk15(&f, lo, hi)?];
    for _ in 0..opts.max_subdivisions {
        let (total, err) = segments
            .iter()
            .fold((0.0, 0.0), |(s, e), seg| (s + seg.value, e + seg.error));
        if err <= opts.tol {
            return Ok(total);
        }
        let (idx, worst) = segments
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.error.total_cmp(&b.1.error))
            .map(|(i, s)| (i, *s))
            .expect("segments is never empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // cannot split further; accept what we have if the error is at roundoff level
            return Ok(total);
        }
        segments[idx] = gk15(&f, worst.lo, mid)?;
        segments.push(gk15(&f, mid, worst.hi)?);
    }
    Err(Error::NoConvergence {
        what: "adaptive quadrature",
        iterations: opts.max_subdivisions,
    })
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Result<Segment> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    if !kronrod.is_finite() {
        return Err(Error::NonFinite("integrand"));
    }
    Ok(Segment {
        lo,
        hi,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::norm_pdf;

    #[test]
    fn normal_density_integrates_to_one() {
        let v = integrate(norm_pdf, -10.0, 10.0, 1e-12).unwrap();
        assert!((v - 1.0).abs() < 1e-10);
    }

    #[test]
    fn cubic_polynomials_exact() {
        assert!((integrate(|x| x, 0.0, 1.0, 1e-12).unwrap() - 0.5).abs() < 1e-15);
        let p = |x: f64| 3.0 * x * x * x - 2.0 * x * x + x - 7.0;
        let anti = |x: f64| 0.75 * x.powi(4) - 2.0 / 3.0 * x.powi(3) + 0.5 * x * x - 7.0 * x;
        let v = integrate(p, -2.0, 3.5, 1e-10).unwrap();
        assert!((v - (anti(3.5) - anti(-2.0))).abs() < 1e-12);
    }

    #[test]
    fn bad_range() {
        assert!(integrate(|x| x, 1.0, 0.0, 1e-10).is_err());
    }
}
