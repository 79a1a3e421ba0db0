//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`). Select criteria by number:
//! `cargo test -p qlbs --test acceptance -- 3 4`. `QLBS_ACCEPT_FAST=1`
//! drops the Monte Carlo checks to 200 replications with doubled
//! tolerances. Criterion 5 uses the evaporation file named by
//! `QLBS_EVAPORATION_CSV` (or `data/evaporation.csv`) when one exists.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use qlbs::cli::{load_csv, RunConfig};
use qlbs::diagnostics::{descriptive_stats, simulated_envelope, ResidualKind};
use qlbs::harness::{run_study, simulate_dataset, CovariateLaw, StudyConfig, StudyReport};
use qlbs::lbs::{a_t, lbs_cdf, lbs_moments, lbs_pdf, lbs_sample, quantile_gap, MixtureU};
use qlbs::model::{fit, hessian_numeric, loglik, score, FitOptions};
use qlbs::numerics::{fd_gradient, integrate, norm_cdf};
use qlbs::{LbsParams, LinkFunction, ModelSpec, ParamVector, RngStream};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn fast() -> bool {
    std::env::var("QLBS_ACCEPT_FAST").is_ok_and(|v| v == "1")
}

fn design_delta() -> ParamVector {
    ParamVector::new(vec![1.0, -1.0], vec![0.25f64.ln(), 0.5])
}

// ---------------------------------------------------------------- 1

fn bs_pdf(t: f64, alpha: f64, beta: f64) -> f64 {
    let r = (t / beta).sqrt();
    let z = (r - 1.0 / r) / alpha;
    let dz = (r + 1.0 / r) / (2.0 * alpha * t);
    (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt() * dz
}

fn ks_statistic(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let f = cdf(v);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

fn distribution_suite() -> anyhow::Result<Outcome> {
    let start = Instant::now();
    let grid = [(0.1, 1.0), (0.25, 3.0), (0.5, 0.2), (1.0, 1.0), (2.0, 7.5), (4.0, 0.05)];

    let mut norm_err = 0.0f64;
    for &(alpha, theta) in &grid {
        let p = LbsParams::new(alpha, theta)?;
        // t = θ e^s
        let mass = integrate(|s| lbs_pdf(theta * s.exp(), &p).unwrap() * theta * s.exp(), -40.0, 40.0, 1e-12)?;
        norm_err = norm_err.max((mass - 1.0).abs());
    }

    let mut bias_err = 0.0f64;
    for &(alpha, theta) in &grid {
        let p = LbsParams::new(alpha, theta)?;
        let ey = theta * (1.0 + 0.5 * alpha * alpha);
        for k in -20..=20 {
            let t = theta * (k as f64 * 0.15).exp();
            let lhs = lbs_pdf(t, &p)? * ey;
            let rhs = t * bs_pdf(t, alpha, theta);
            if rhs > 1e-280 {
                bias_err = bias_err.max((lhs - rhs).abs() / rhs);
            }
        }
    }

    let mut scale_exact = true;
    let mut scale_err = 0.0f64;
    for &(alpha, theta) in &grid {
        let p = LbsParams::new(alpha, theta)?;
        for c in [0.25, 0.5, 2.0, 8.0, 3.7, 0.013] {
            let pc = LbsParams::new(alpha, c * theta)?;
            for k in -10..=10 {
                let t = theta * (k as f64 * 0.3).exp();
                let f = lbs_cdf(t, &p)?;
                let fc = lbs_cdf(c * t, &pc)?;
                if (c as f64).log2().fract() == 0.0 {
                    scale_exact &= f == fc;
                } else {
                    scale_err = scale_err.max((f - fc).abs());
                }
            }
        }
    }

    let n = 100_000;
    let crit = 1.628 / (n as f64).sqrt();
    let mut ks = Vec::new();
    for (i, alpha) in [0.25, 1.0, 2.0].into_iter().enumerate() {
        let p = LbsParams::new(alpha, 1.0)?;
        let t = lbs_sample(n, &p, &mut RngStream::new(1001, i as u64))?;
        let mut u: Vec<f64> = t.iter().map(|&v| a_t(v, &p).map(|a| a * a)).collect::<Result<_, _>>()?;
        u.sort_by(f64::total_cmp);
        let law = MixtureU::new(alpha)?;
        ks.push(ks_statistic(&u, |x| law.cdf(x)));
    }
    let ks_ok = ks.iter().all(|&d| d < crit);
    let elapsed = start.elapsed();
    let pass = norm_err <= 1e-8 && bias_err <= 1e-10 && scale_exact && scale_err <= 1e-14 && ks_ok
        && elapsed < Duration::from_secs(60);
    Ok(outcome(
        pass,
        format!(
            "mass err {norm_err:.1e}; length-bias err {bias_err:.1e}; scaling exact {scale_exact} (other c {scale_err:.1e}); \
             KS D {:.4?} vs {crit:.4}; {:.1}s",
            ks,
            elapsed.as_secs_f64()
        ),
    ))
}

// ---------------------------------------------------------------- 2

fn score_hessian_suite() -> anyhow::Result<Outcome> {
    let start = Instant::now();
    let n = 30;
    let mut rng = RngStream::new(2002, 0);
    let x1: Vec<f64> = (0..n).map(|_| rng.uniform()).collect();
    let w1: Vec<f64> = (0..n).map(|_| rng.uniform()).collect();
    let x = DMatrix::from_fn(n, 2, |i, j| if j == 0 { 1.0 } else { x1[i] });
    let w = DMatrix::from_fn(n, 2, |i, j| if j == 0 { 1.0 } else { w1[i] });
    let t = lbs_sample(n, &LbsParams::new(0.6, 2.0)?, &mut rng)?;
    let mut worst_score = 0.0f64;
    let mut worst_sym = 0.0f64;
    let mut points = 0;
    for lq in LinkFunction::ALL {
        for la in LinkFunction::ALL {
            let spec = ModelSpec::new(x.clone(), w.clone(), lq, la, 0.1 + 0.8 * rng.uniform())?;
            for _ in 0..20 {
                let delta = ParamVector::new(
                    vec![rng.uniform_in(0.5, 2.0), rng.uniform_in(0.0, 1.0)],
                    vec![rng.uniform_in(0.2, 1.0), rng.uniform_in(0.0, 0.5)],
                );
                let s = score(&delta, &spec, &t)?;
                let fd = fd_gradient(
                    |d| loglik(&ParamVector::from_slice(d, 2), &spec, &t).unwrap_or(f64::NAN),
                    &delta.to_vec(),
                    1e-6,
                )?;
                for (a, b) in s.iter().zip(&fd) {
                    worst_score = worst_score.max((a - b).abs() / b.abs().max(1.0));
                }
                let h = hessian_numeric(&delta, &spec, &t)?;
                for i in 0..4 {
                    for j in 0..i {
                        let d = (h[(i, j)] - h[(j, i)]).abs() / h[(i, j)].abs().max(1.0);
                        worst_sym = worst_sym.max(d);
                    }
                }
                points += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    Ok(outcome(
        worst_score <= 1e-5 && worst_sym <= 1e-6 && elapsed < Duration::from_secs(60),
        format!(
            "{points} points over 9 link pairs; score rel err {worst_score:.1e}; Hessian asymmetry {worst_sym:.1e}; {:.1}s",
            elapsed.as_secs_f64()
        ),
    ))
}

// ---------------------------------------------------------------- 3, 4

/// Reference estimator summaries at n = 400: (mean, mse, cp) for
/// β0, β1, ρ0, ρ1 at τ = 0.25, 0.5, 0.75.
const ESTIMATOR_REF: [(f64, [(f64, f64, f64); 4]); 3] = [
    (0.25, [(0.9999, 0.0001, 95.10), (-0.9992, 0.0004, 95.50), (-1.3909, 0.0013, 95.30), (0.4985, 0.0036, 95.50)]),
    (0.50, [(1.0004, 0.0001, 94.60), (-1.0001, 0.0004, 95.00), (-1.3904, 0.0012, 95.60), (0.4984, 0.0037, 95.40)]),
    (0.75, [(0.9988, 0.0002, 94.10), (-1.0018, 0.0004, 95.20), (-1.3924, 0.0014, 93.90), (0.5032, 0.0031, 95.20)]),
];

/// Reference residual moments at n = 400: (τ, gcs [mean, sd, cs, ck], rq [...]).
const RESIDUAL_REF: [(f64, [f64; 4], [f64; 4]); 3] = [
    (0.25, [1.0007, 0.9968, 1.9111, 8.1759], [-0.0009, 1.0009, 0.0040, 2.9654]),
    (0.50, [1.0012, 0.9975, 1.9202, 8.2620], [-0.0016, 1.0009, 0.0044, 2.9714]),
    (0.75, [1.0020, 1.0000, 1.9288, 8.3314], [-0.0018, 1.0013, -0.0041, 2.9595]),
];

fn study_at_400() -> anyhow::Result<(StudyReport, Duration)> {
    let cfg = StudyConfig {
        n_grid: vec![400],
        reps: if fast() { 200 } else { 1000 },
        ..StudyConfig::default()
    };
    let start = Instant::now();
    let report = run_study(&cfg)?;
    Ok((report, start.elapsed()))
}

fn estimator_study(report: &StudyReport, elapsed: Duration) -> Outcome {
    let k = if fast() { 2.0 } else { 1.0 };
    let mut misses = Vec::new();
    let mut worst_cp = 0.0f64;
    for (tau, refs) in ESTIMATOR_REF {
        let cell = report.cells.iter().find(|c| c.tau == tau).expect("cell");
        for (j, (p, (mean, mse, cp))) in cell.params.iter().zip(refs).enumerate() {
            let mean_tol = k * if j < 2 { 0.01 } else { 0.02 };
            // reference MSEs carry four decimals; allow half a unit of rounding
            let mse_tol = k * 0.5 * mse + 0.00005;
            let cp_tol = k * 2.0;
            worst_cp = worst_cp.max((p.cp - cp).abs());
            if (p.mean - mean).abs() > mean_tol {
                misses.push(format!("tau {tau} {} mean {:.4} vs {mean}", p.name, p.mean));
            }
            if (p.mse - mse).abs() > mse_tol {
                misses.push(format!("tau {tau} {} mse {:.5} vs {mse}", p.name, p.mse));
            }
            if (p.cp - cp).abs() > cp_tol {
                misses.push(format!("tau {tau} {} cp {:.2} vs {cp}", p.name, p.cp));
            }
        }
        if cell.failed > 0 {
            misses.push(format!("tau {tau}: {} failed fits", cell.failed));
        }
    }
    let reps = report.config.reps;
    let detail = if misses.is_empty() {
        format!("12 cells within tolerance (largest CP gap {worst_cp:.2} points); B = {reps}; {:.0}s", elapsed.as_secs_f64())
    } else {
        format!("B = {reps}; misses: {}", misses.join("; "))
    };
    outcome(misses.is_empty(), detail)
}

const MOMENT_NAMES: [&str; 4] = ["mean", "sd", "cs", "ck"];

fn residual_study(report: &StudyReport) -> Outcome {
    let k = if fast() { 2.0 } else { 1.0 };
    let tol = [0.02, 0.02, 0.1, 0.5].map(|v| v * k);
    let mut misses = Vec::new();
    let mut pooled_misses = Vec::new();
    for (tau, gcs, rq) in RESIDUAL_REF {
        let cell = report.cells.iter().find(|c| c.tau == tau).expect("cell");
        for (summary, reference) in cell.residuals.iter().zip([gcs, rq]) {
            let m = &summary.averaged;
            let got = [m.mean, m.sd, m.cs, m.ck];
            let pooled = &summary.pooled;
            let pooled = [pooled.mean, pooled.sd, pooled.cs, pooled.ck];
            for i in 0..4 {
                if (got[i] - reference[i]).abs() > tol[i] {
                    misses.push(format!("tau {tau} {} {}: {:.4} vs {}", summary.kind.name(), MOMENT_NAMES[i], got[i], reference[i]));
                }
                if (pooled[i] - reference[i]).abs() > tol[i] {
                    pooled_misses.push(format!("tau {tau} {} {}: {:.4} vs {}", summary.kind.name(), MOMENT_NAMES[i], pooled[i], reference[i]));
                }
            }
        }
    }
    let detail = if misses.is_empty() {
        format!(
            "24 moments within tolerance as per-replication averages; pooled across replications {} of 24 miss{}",
            pooled_misses.len(),
            if pooled_misses.is_empty() { String::new() } else { format!(" ({})", pooled_misses.join("; ")) }
        )
    } else {
        format!("misses: {}", misses.join("; "))
    };
    outcome(misses.is_empty(), detail)
}

// ---------------------------------------------------------------- 5

const DESCRIPTIVE_REF: [f64; 9] = [65.30, 107.63, 138.55, 196.75, 303.80, 156.88, 66.68, 42.50, 0.73];

/// (τ, estimates and SEs for β0..β4, ρ0..ρ2, loglik, AIC, BIC)
const APPLICATION_REF: [(f64, [(f64, f64); 8], [f64; 3]); 3] = [
    (
        0.25,
        [(6.8317, 0.1756), (0.0015, 0.0004), (0.0009, 0.0005), (0.0391, 0.0156), (-0.0367, 0.0010),
         (0.8163, 1.4546), (-0.0123, 0.0040), (-0.2192, 0.1150)],
        [-244.29, 504.58, 522.57],
    ),
    (
        0.50,
        [(6.8523, 0.1998), (0.0014, 0.0004), (0.0008, 0.0005), (0.0401, 0.0173), (-0.0365, 0.0010),
         (0.8052, 2.4243), (-0.0123, 0.0066), (-0.2153, 0.1874)],
        [-244.18, 504.37, 522.36],
    ),
    (
        0.75,
        [(7.0325, 0.2014), (0.0015, 0.0004), (0.0003, 0.0005), (0.0312, 0.0180), (-0.0365, 0.0010),
         (1.2261, 1.8116), (-0.0138, 0.0050), (-0.2383, 0.1399)],
        [-243.90, 503.79, 521.78],
    ),
];

fn evaporation_path() -> Option<PathBuf> {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    std::env::var_os("QLBS_EVAPORATION_CSV")
        .map(PathBuf::from)
        .or_else(|| Some(root.join("data/evaporation.csv")))
        .filter(|p| p.exists())
}

fn evaporation_config(tau: f64) -> RunConfig {
    let mut cfg = RunConfig::new("evaporation", tau);
    cfg.q_covariates = ["x1", "x2", "x3", "x4"].map(String::from).to_vec();
    cfg.alpha_covariates = ["x2", "x3"].map(String::from).to_vec();
    cfg
}

fn real_data_check(path: &PathBuf) -> anyhow::Result<Outcome> {
    let data = load_csv(path)?;
    let mut misses = Vec::new();
    let d = descriptive_stats(&data.column("evaporation")?);
    let got = [d.min, d.q1, d.median, d.q3, d.max, d.mean, d.sd, d.cv_percent, d.cs];
    for (g, r) in got.iter().zip(DESCRIPTIVE_REF) {
        if format!("{g:.2}") != format!("{r:.2}") {
            misses.push(format!("descriptive {g:.2} vs {r:.2}"));
        }
    }
    for (tau, coefs, info) in APPLICATION_REF {
        let (spec, t) = evaporation_config(tau).build(&data)?;
        let res = fit(&spec, &t, &FitOptions::default())?;
        for (j, (est, se)) in coefs.iter().enumerate() {
            let tol = if j == 4 { 0.001 } else { 0.01 };
            if (res.estimates()[j] - est).abs() > tol || (res.std_errors[j] - se).abs() > tol {
                misses.push(format!(
                    "tau {tau} coef {j}: {:.4} ({:.4}) vs {est} ({se})",
                    res.estimates()[j],
                    res.std_errors[j]
                ));
            }
        }
        for (g, r) in [res.loglik, res.aic, res.bic].iter().zip(info) {
            if (g - r).abs() > 0.5 {
                misses.push(format!("tau {tau} information {g:.2} vs {r}"));
            }
        }
    }
    let detail = format!("evaporation data at {}: {}", path.display(), if misses.is_empty() { "all within tolerance".into() } else { misses.join("; ") });
    Ok(outcome(misses.is_empty(), detail))
}

fn synthetic_recovery_check() -> anyhow::Result<Outcome> {
    let truth = design_delta().to_vec();
    let mut rates = Vec::new();
    for (k, tau) in [0.25, 0.5, 0.75].into_iter().enumerate() {
        let mut hits = 0;
        for run in 0..200u64 {
            let mut rng = RngStream::new(5005 + k as u64, run);
            let (spec, t) = simulate_dataset(400, tau, &design_delta(), CovariateLaw::UniformM1To1, &mut rng)?;
            let ok = fit(&spec, &t, &FitOptions::default()).is_ok_and(|r| {
                r.converged
                    && r.estimates().iter().zip(&r.std_errors).zip(&truth).all(|((e, se), d)| (e - d).abs() <= 3.0 * se)
            });
            hits += usize::from(ok);
        }
        rates.push(hits as f64 / 2.0);
    }
    // the shipped stand-in must at least fit cleanly at all three levels
    let standin = load_csv(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/evaporation_standin.csv"))?;
    let mut standin_ok = true;
    for tau in [0.25, 0.5, 0.75] {
        let (spec, t) = evaporation_config(tau).build(&standin)?;
        standin_ok &= fit(&spec, &t, &FitOptions::default()).is_ok_and(|r| r.converged && r.gradient_norm <= 1e-6);
    }
    Ok(outcome(
        rates.iter().all(|&r| r >= 95.0) && standin_ok,
        format!(
            "evaporation data not present, synthetic replacement: joint 3-SE recovery {:?}% of 200 runs per tau; stand-in fits converge {standin_ok}",
            rates
        ),
    ))
}

fn application_check() -> anyhow::Result<Outcome> {
    match evaporation_path() {
        Some(path) => real_data_check(&path),
        None => synthetic_recovery_check(),
    }
}

// ---------------------------------------------------------------- 6

fn envelope_check() -> anyhow::Result<Outcome> {
    let mut rng = RngStream::new(6006, 0);
    let (spec, t) = simulate_dataset(200, 0.5, &design_delta(), CovariateLaw::UniformM1To1, &mut rng)?;
    let res = fit(&spec, &t, &FitOptions::default())?;
    let mut parts = Vec::new();
    let mut pass = true;
    for kind in [ResidualKind::Gcs, ResidualKind::Rq] {
        let band = simulated_envelope(&res, &spec, &t, kind, 100, 0.05, &RngStream::new(6007, 0))?;
        let c = band.coverage();
        pass &= c >= 0.9;
        parts.push(format!("{} {:.1}% inside ({} replicates)", kind.name(), 100.0 * c, band.replicates));
    }
    Ok(outcome(pass, parts.join(", ")))
}

// ---------------------------------------------------------------- 7

fn determinism_check() -> anyhow::Result<Outcome> {
    let dir = tempfile::tempdir()?;
    let cfg = StudyConfig {
        n_grid: vec![50, 100],
        tau_grid: vec![0.25, 0.75],
        reps: 40,
        seed: 77,
        ..StudyConfig::default()
    };
    let cfg_path = dir.path().join("study.toml");
    std::fs::write(&cfg_path, cfg.to_toml()?)?;
    let files = ["study.csv", "study_residuals.csv", "study.txt"];
    let mut outputs = Vec::new();
    for (run, threads) in ["1", "4", "4", "2"].iter().enumerate() {
        let out = dir.path().join(format!("run{run}"));
        let status = std::process::Command::new(env!("CARGO_BIN_EXE_qlbs"))
            .args(["study", "--config"])
            .arg(&cfg_path)
            .arg("--out")
            .arg(&out)
            .env("QLBS_THREADS", threads)
            .stdout(std::process::Stdio::null())
            .status()?;
        anyhow::ensure!(status.success(), "qlbs study exited with {status}");
        let bytes = files
            .iter()
            .map(|f| std::fs::read(out.join(f)))
            .collect::<Result<Vec<_>, _>>()?;
        outputs.push(bytes);
    }
    let same = outputs.windows(2).all(|w| w[0] == w[1]);
    Ok(outcome(same, "4 runs of `qlbs study` with QLBS_THREADS = 1, 4, 4, 2: reports byte-identical"))
}

// ---------------------------------------------------------------- 8

fn gap_diagnostic(report: Option<&StudyReport>) -> anyhow::Result<Outcome> {
    let mut lines = Vec::new();
    let mut finite = true;
    for alpha in [0.1, 0.25, 0.5, 1.0, 2.0] {
        let gaps: Vec<f64> = [0.1, 0.25, 0.5, 0.75, 0.9]
            .iter()
            .map(|&tau| quantile_gap(alpha, tau))
            .collect::<Result<_, _>>()?;
        finite &= gaps.iter().all(|g| g.is_finite());
        lines.push(format!("alpha {alpha}: {:+.4?}", gaps));
    }
    if let Some(r) = report {
        for c in &r.cells {
            lines.push(format!(
                "simulated share t <= Q at tau {} (n = {}): {:.4} (law {:.4})",
                c.tau, c.n, c.q_fraction, c.q_fraction_model
            ));
        }
    }
    // the law's τ-quantile is a fixed point of its own CDF
    let p = LbsParams::new(0.5, 1.0)?;
    let m = qlbs::lbs::lbs_quantile(0.5, &p)?;
    finite &= (lbs_cdf(m, &p)? - 0.5).abs() < 1e-12 && norm_cdf(0.0) == 0.5 && lbs_moments(&p).0 > 0.0;
    Ok(outcome(
        finite,
        format!("F(Q_tau) - tau over tau = 0.1, 0.25, 0.5, 0.75, 0.9 (diagnostic only):\n      {}", lines.join("\n      ")),
    ))
}

// ----------------------------------------------------------------

fn main() -> ExitCode {
    let wanted: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let want = |k: u32| wanted.is_empty() || wanted.contains(&k);
    let mut failed = Vec::new();
    let mut report_line = |k: u32, title: &str, r: anyhow::Result<Outcome>| {
        let (status, detail) = match r {
            Ok(o) => (if o.pass { "PASS" } else { "FAIL" }, o.detail),
            Err(e) => ("FAIL", format!("error: {e:#}")),
        };
        if status == "FAIL" {
            failed.push(k);
        }
        println!("criterion {k} [{title}]: {status}: {detail}");
    };

    if want(1) {
        report_line(1, "distribution correctness", distribution_suite());
    }
    if want(2) {
        report_line(2, "score and Hessian consistency", score_hessian_suite());
    }
    let study = if want(3) || want(4) || want(8) { Some(study_at_400()) } else { None };
    let study = match study {
        Some(Ok(s)) => Some(s),
        Some(Err(e)) => {
            for k in [3, 4] {
                if want(k) {
                    report_line(k, "Monte Carlo study", Err(anyhow::anyhow!("{e:#}")));
                }
            }
            None
        }
        None => None,
    };
    if let Some((report, elapsed)) = &study {
        if want(3) {
            report_line(3, "estimator study at n = 400", Ok(estimator_study(report, *elapsed)));
        }
        if want(4) {
            report_line(4, "residual moments at n = 400", Ok(residual_study(report)));
        }
    }
    if want(5) {
        report_line(5, "application data", application_check());
    }
    if want(6) {
        report_line(6, "envelope calibration", envelope_check());
    }
    if want(7) {
        report_line(7, "determinism across thread counts", determinism_check());
    }
    if want(8) {
        report_line(8, "quantile-parameter gap", gap_diagnostic(study.as_ref().map(|s| &s.0)));
    }
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
