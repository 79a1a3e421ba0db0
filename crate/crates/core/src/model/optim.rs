//! Minimizers used by the fitting routine: BFGS on a dense inverse-Hessian
//! approximation with backtracking, and a Nelder–Mead restart.

use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone, Copy)]
pub(crate) struct BfgsOptions {
    pub max_iter: usize,
    pub grad_tol: f64,
    pub rel_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum StopReason {
    Gradient,
    RelativeChange,
    LineSearch,
    MaxIterations,
}

#[derive(Debug, Clone)]
pub(crate) struct BfgsOutcome {
    pub x: Vec<f64>,
    pub f: f64,
    pub grad: Vec<f64>,
    pub iterations: usize,
    pub reason: StopReason,
    /// Objective after every accepted step, starting point first.
    pub trace: Vec<f64>,
}

pub(crate) fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Backtracking line search along `dir` from `x`. Returns the accepted point
/// with its value and gradient. Inadmissible trial points (`None`) halve the
/// step like any other rejection.
pub(crate) fn backtrack<F>(
    obj: &mut F,
    x: &[f64],
    f: f64,
    grad: &[f64],
    dir: &[f64],
) -> Option<(Vec<f64>, f64, Vec<f64>)>
where
    F: FnMut(&[f64]) -> Option<(f64, Vec<f64>)>,
{
    let slope: f64 = grad.iter().zip(dir).map(|(g, d)| g * d).sum();
    if !(slope < 0.0) {
        return None;
    }
    let mut step = 1.0;
    for _ in 0..60 {
        let trial: Vec<f64> = x.iter().zip(dir).map(|(xi, di)| xi + step * di).collect();
        if let Some((ft, gt)) = obj(&trial) {
            if ft.is_finite() && ft <= f + 1e-4 * step * slope && ft < f {
                return Some((trial, ft, gt));
            }
        }
        step *= 0.5;
    }
    None
}

/// Minimize with BFGS. `h0` is an optional starting inverse Hessian.
pub(crate) fn bfgs<F>(
    obj: &mut F,
    x0: Vec<f64>,
    start: (f64, Vec<f64>),
    h0: Option<DMatrix<f64>>,
    opts: BfgsOptions,
) -> BfgsOutcome
where
    F: FnMut(&[f64]) -> Option<(f64, Vec<f64>)>,
{
    let k = x0.len();
    let (mut f, mut g) = start;
    let mut x = x0;
    let mut trace = vec![f];
    let identity_scale = |g: &[f64]| DMatrix::identity(k, k) / max_abs(g).max(1.0);
    let mut fresh = h0.is_none();
    let mut hinv = h0.unwrap_or_else(|| identity_scale(&g));

    let mut iterations = 0;
    let reason = loop {
        if max_abs(&g) <= opts.grad_tol {
            break StopReason::Gradient;
        }
        if iterations >= opts.max_iter {
            break StopReason::MaxIterations;
        }
        iterations += 1;
        let gv = DVector::from_column_slice(&g);
        let mut dir: Vec<f64> = (-(&hinv * &gv)).iter().copied().collect();
        let mut accepted = backtrack(obj, &x, f, &g, &dir);
        if accepted.is_none() && !fresh {
            hinv = identity_scale(&g);
            fresh = true;
            dir = (-(&hinv * &gv)).iter().copied().collect();
            accepted = backtrack(obj, &x, f, &g, &dir);
        }
        let Some((xn, fn_, gn)) = accepted else {
            break StopReason::LineSearch;
        };
        let s = DVector::from_iterator(k, xn.iter().zip(&x).map(|(a, b)| a - b));
        let y = DVector::from_iterator(k, gn.iter().zip(&g).map(|(a, b)| a - b));
        let sy = s.dot(&y);
        if sy > 1e-12 * s.norm() * y.norm() {
            if fresh {
                // rescale the identity guess before its first update
                hinv = DMatrix::identity(k, k) * (sy / y.dot(&y));
                fresh = false;
            }
            let rho = 1.0 / sy;
            let hy = &hinv * &y;
            let yhy = y.dot(&hy);
            hinv += (&s * s.transpose()) * (rho * rho * yhy + rho)
                - (&hy * s.transpose() + &s * hy.transpose()) * rho;
        }
        let rel = (f - fn_).abs() / f.abs().max(1.0);
        x = xn;
        f = fn_;
        g = gn;
        trace.push(f);
        if max_abs(&g) <= opts.grad_tol {
            break StopReason::Gradient;
        }
        if rel <= opts.rel_tol {
            break StopReason::RelativeChange;
        }
    };
    BfgsOutcome {
        x,
        f,
        grad: g,
        iterations,
        reason,
        trace,
    }
}

/// Nelder–Mead simplex minimization of `f` (non-finite values count as +∞).
pub(crate) fn nelder_mead<F>(f: &mut F, x0: &[f64], max_iter: usize, tol: f64) -> (Vec<f64>, f64)
where
    F: FnMut(&[f64]) -> f64,
{
    let k = x0.len();
    let mut eval = |x: &[f64]| {
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(k + 1);
    simplex.push((x0.to_vec(), eval(x0)));
    for j in 0..k {
        let mut v = x0.to_vec();
        v[j] += 0.1 * x0[j].abs().max(1.0);
        let fv = eval(&v);
        simplex.push((v, fv));
    }
    for _ in 0..max_iter {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[k].1;
        if (worst - best).abs() <= tol * best.abs().max(1.0) {
            break;
        }
        let centroid: Vec<f64> = (0..k)
            .map(|j| simplex[..k].iter().map(|(v, _)| v[j]).sum::<f64>() / k as f64)
            .collect();
        let along = |c: f64, simplex: &[(Vec<f64>, f64)]| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[k].0)
                .map(|(m, w)| m + c * (w - m))
                .collect()
        };
        let xr = along(-1.0, &simplex);
        let fr = eval(&xr);
        if fr < simplex[0].1 {
            let xe = along(-2.0, &simplex);
            let fe = eval(&xe);
            simplex[k] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[k - 1].1 {
            simplex[k] = (xr, fr);
        } else {
            let outside = fr < simplex[k].1;
            let xc = along(if outside { -0.5 } else { 0.5 }, &simplex);
            let fc = eval(&xc);
            if fc < fr.min(simplex[k].1) {
                simplex[k] = (xc, fc);
            } else {
                let x_best = simplex[0].0.clone();
                for item in simplex.iter_mut().skip(1) {
                    let v: Vec<f64> = x_best
                        .iter()
                        .zip(&item.0)
                        .map(|(b, w)| b + 0.5 * (w - b))
                        .collect();
                    let fv = eval(&v);
                    *item = (v, fv);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, fx) = simplex.swap_remove(0);
    (x, fx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rosenbrock(x: &[f64]) -> (f64, Vec<f64>) {
        let (a, b) = (x[0], x[1]);
        let f = (1.0 - a).powi(2) + 100.0 * (b - a * a).powi(2);
        let g = vec![
            -2.0 * (1.0 - a) - 400.0 * a * (b - a * a),
            200.0 * (b - a * a),
        ];
        (f, g)
    }

    #[test]
    fn bfgs_solves_rosenbrock() {
        let mut obj = |x: &[f64]| Some(rosenbrock(x));
        let x0 = vec![-1.2, 1.0];
        let start = rosenbrock(&x0);
        let out = bfgs(
            &mut obj,
            x0,
            start,
            None,
            BfgsOptions {
                max_iter: 500,
                grad_tol: 1e-8,
                rel_tol: 0.0,
            },
        );
        assert_eq!(out.reason, StopReason::Gradient);
        assert!((out.x[0] - 1.0).abs() < 1e-6 && (out.x[1] - 1.0).abs() < 1e-6);
        assert!(out.trace.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn nelder_mead_finds_quadratic_minimum() {
        let mut f = |x: &[f64]| (x[0] - 3.0).powi(2) + 2.0 * (x[1] + 1.0).powi(2);
        let (x, fx) = nelder_mead(&mut f, &[0.0, 0.0], 2000, 1e-14);
        assert!(fx < 1e-10);
        assert!((x[0] - 3.0).abs() < 1e-4 && (x[1] + 1.0).abs() < 1e-4);
    }
}
