use crate::error::{Error, Result};

/// A finite, non-empty interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(Error::Domain {
                what: "interval",
                value: hi - lo,
            });
        }
        Ok(Self { lo, hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RootOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Starting point; the bracket midpoint when absent.
    pub guess: Option<f64>,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self {
            tol: super::ROOT_TOL,
            max_iter: 200,
            guess: None,
        }
    }
}

/// Root of `f` inside `bracket`.
///
/// Bisection accelerated by Newton steps whose slope is the secant through
/// the last two iterates. Stops once `|f(x)| <= tol` or the bracket is
/// narrower than `tol`.
pub fn find_root<F>(f: F, bracket: Interval, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let mut f = f;
    let mut prev: Option<(f64, f64)> = None;
    safeguarded(
        |x| {
            let fx = f(x);
            let slope = prev.and_then(|(xp, fp)| {
                let s = (fx - fp) / (x - xp);
                (s.is_finite() && s != 0.0).then_some(s)
            });
            prev = Some((x, fx));
            (fx, slope)
        },
        bracket,
        RootOptions {
            tol,
            ..RootOptions::default()
        },
    )
}

/// Safeguarded Newton iteration with an analytic derivative. Newton steps that
/// would leave the current bracket, or that fail to shrink it quickly enough,
/// are replaced by bisection.
pub fn find_root_with_derivative<F>(f: F, bracket: Interval, opts: RootOptions) -> Result<f64>
where
    F: FnMut(f64) -> (f64, f64),
{
    let mut f = f;
    safeguarded(
        |x| {
            let (fx, dfx) = f(x);
            (fx, Some(dfx))
        },
        bracket,
        opts,
    )
}

fn safeguarded<F>(mut eval: F, bracket: Interval, opts: RootOptions) -> Result<f64>
where
    F: FnMut(f64) -> (f64, Option<f64>),
{
    let (flo, _) = eval(bracket.lo);
    if flo == 0.0 {
        return Ok(bracket.lo);
    }
    let (fhi, _) = eval(bracket.hi);
    if fhi == 0.0 {
        return Ok(bracket.hi);
    }
    if !(flo.is_finite() && fhi.is_finite()) {
        return Err(Error::NonFinite("root bracket evaluation"));
    }
    if flo * fhi > 0.0 {
        return Err(Error::NoSignChange {
            lo: bracket.lo,
            hi: bracket.hi,
        });
    }
    // neg is where f < 0, pos where f > 0
    let (mut neg, mut pos) = if flo < 0.0 {
        (bracket.lo, bracket.hi)
    } else {
        (bracket.hi, bracket.lo)
    };

    let mut x = match opts.guess {
        Some(g) if g > bracket.lo && g < bracket.hi => g,
        _ => 0.5 * (bracket.lo + bracket.hi),
    };
    let mut dx_old = bracket.width();
    let mut dx = dx_old;
    let (mut fx, mut slope) = eval(x);

    for _ in 0..opts.max_iter {
        if !fx.is_finite() {
            return Err(Error::NonFinite("root function"));
        }
        if fx.abs() <= opts.tol {
            return Ok(x);
        }
        if fx < 0.0 {
            neg = x;
        } else {
            pos = x;
        }
        let (lo, hi) = if neg < pos { (neg, pos) } else { (pos, neg) };
        if hi - lo <= opts.tol {
            return Ok(x);
        }

        let newton = slope.map(|s| x - fx / s);
        let use_newton = match (newton, slope) {
            (Some(xn), Some(s)) => {
                xn > lo && xn < hi && (2.0 * fx).abs() <= (dx_old * s).abs()
            }
            _ => false,
        };
        dx_old = dx;
        if use_newton {
            let xn = newton.unwrap_or(x);
            dx = xn - x;
            x = xn;
        } else {
            dx = 0.5 * (hi - lo);
            x = lo + dx;
        }
        if dx.abs() <= 4.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) {
            return Ok(x);
        }
        (fx, slope) = eval(x);
    }
    Err(Error::NoConvergence {
        what: "root finder",
        iterations: opts.max_iter,
    })
}
