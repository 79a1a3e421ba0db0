use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::data::Dataset;
use super::format::{describe_table, fit_table, moments_line};
use crate::diagnostics::{
    descriptive_stats, envelope_svg, residual_moments, residuals, simulated_envelope, write_envelope_csv,
    write_residuals_csv, ResidualKind,
};
use crate::harness::{run_study, simulate_dataset, CovariateLaw, StudyConfig};
use crate::lbs::{
    kappa, lbs_cdf, lbs_moments, lbs_pdf, lbs_quantile, lbs_sf, quantile_gap, theta_from_q, u_quantile, LbsParams,
    QlbsParams,
};
use crate::model::{
    bootstrap_ci, conf_intervals, fit, hessian_discrepancy, FitOptions, FitResult, LinkFunction, ModelSpec,
    ParamVector,
};
use crate::numerics::{Interval, RngStream};

/// Which columns enter which sub-model, and where outputs go.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub response: String,
    pub q_covariates: Vec<String>,
    pub alpha_covariates: Vec<String>,
    pub tau: f64,
    pub link_q: LinkFunction,
    pub link_alpha: LinkFunction,
    pub q_intercept: bool,
    pub alpha_intercept: bool,
    pub seed: u64,
    pub out: PathBuf,
}

impl RunConfig {
    /// Intercept-only in both sub-models, log links.
    pub fn new(response: impl Into<String>, tau: f64) -> Self {
        Self {
            response: response.into(),
            q_covariates: vec![],
            alpha_covariates: vec![],
            tau,
            link_q: LinkFunction::Log,
            link_alpha: LinkFunction::Log,
            q_intercept: true,
            alpha_intercept: true,
            seed: 2024,
            out: PathBuf::from("qlbs-out"),
        }
    }

    pub fn q_terms(&self) -> Vec<String> {
        terms(self.q_intercept, &self.q_covariates)
    }

    pub fn alpha_terms(&self) -> Vec<String> {
        terms(self.alpha_intercept, &self.alpha_covariates)
    }

    /// Design matrices and response for `data`.
    pub fn build(&self, data: &Dataset) -> Result<(ModelSpec, Vec<f64>)> {
        ensure!(self.tau > 0.0 && self.tau < 1.0, "--tau {} outside (0, 1)", self.tau);
        for c in self.q_covariates.iter().chain(&self.alpha_covariates) {
            ensure!(c != &self.response, "response column \"{c}\" cannot also be a covariate");
        }
        let t = data.column(&self.response)?;
        if let Some(i) = t.iter().position(|&v| v <= 0.0) {
            bail!("response \"{}\" must be positive (row {} is {})", self.response, i + 2, t[i]);
        }
        let x = design(data, self.q_intercept, &self.q_covariates)?;
        let w = design(data, self.alpha_intercept, &self.alpha_covariates)?;
        let spec = ModelSpec::new(x, w, self.link_q, self.link_alpha, self.tau)
            .context("building the regression design")?;
        Ok((spec, t))
    }
}

fn terms(intercept: bool, cols: &[String]) -> Vec<String> {
    intercept
        .then(|| "(Intercept)".to_string())
        .into_iter()
        .chain(cols.iter().cloned())
        .collect()
}

fn design(data: &Dataset, intercept: bool, cols: &[String]) -> Result<DMatrix<f64>> {
    let mut columns: Vec<Vec<f64>> = Vec::new();
    if intercept {
        columns.push(vec![1.0; data.n]);
    }
    for c in cols {
        columns.push(data.column(c)?);
    }
    ensure!(!columns.is_empty(), "a sub-model needs an intercept or at least one covariate");
    Ok(DMatrix::from_fn(data.n, columns.len(), |i, j| columns[j][i]))
}

fn out_dir(config: &RunConfig) -> Result<&Path> {
    fs::create_dir_all(&config.out).with_context(|| format!("creating {}", config.out.display()))?;
    Ok(&config.out)
}

fn write(path: PathBuf, contents: impl AsRef<[u8]>) -> Result<()> {
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))
}

/// Machine-readable fit report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub response: String,
    pub q_terms: Vec<String>,
    pub alpha_terms: Vec<String>,
    pub link_q: LinkFunction,
    pub link_alpha: LinkFunction,
    pub level: f64,
    pub fit: FitResult,
    /// Wald intervals; absent when the fit did not converge.
    pub intervals: Option<Vec<Interval>>,
    /// Largest relative entry-wise gap between the closed-form and numeric
    /// Hessians at the estimate.
    pub hessian_discrepancy: Option<f64>,
}

impl FitReport {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Fit, print the table and write `fit.json` and `fit.txt` under `out`.
/// Exit status 0 iff the fit converged.
pub fn cmd_fit(config: &RunConfig, data: &Dataset) -> Result<i32> {
    let (spec, t) = config.build(data)?;
    let res = fit(&spec, &t, &FitOptions::default()).context("fitting the model")?;
    let level = 0.05;
    let intervals = res.converged.then(|| conf_intervals(&res, level)).transpose()?;
    let report = FitReport {
        response: config.response.clone(),
        q_terms: config.q_terms(),
        alpha_terms: config.alpha_terms(),
        link_q: config.link_q,
        link_alpha: config.link_alpha,
        level,
        hessian_discrepancy: hessian_discrepancy(&res.delta_hat, &spec, &t).ok(),
        fit: res,
        intervals,
    };
    let table = fit_table(&report);
    print!("{table}");
    let dir = out_dir(config)?;
    write(dir.join("fit.json"), serde_json::to_string_pretty(&report)?)?;
    write(dir.join("fit.txt"), &table)?;
    Ok(if report.fit.converged { 0 } else { 1 })
}

/// Draw one dataset from the simulation design and write it as CSV with
/// columns `t, x1.., w1..`.
pub fn cmd_simulate(n: usize, tau: f64, delta: &ParamVector, seed: u64, out: &Path) -> Result<i32> {
    let mut rng = RngStream::new(seed, 0);
    let (spec, t) = simulate_dataset(n, tau, delta, CovariateLaw::UniformM1To1, &mut rng)?;
    let (p, q) = (spec.p(), spec.q());
    let columns: Vec<String> = std::iter::once("t".to_string())
        .chain((1..p).map(|j| format!("x{j}")))
        .chain((1..q).map(|j| format!("w{j}")))
        .collect();
    let rows = (0..n)
        .map(|i| {
            std::iter::once(t[i])
                .chain((1..p).map(|j| spec.x[(i, j)]))
                .chain((1..q).map(|j| spec.w[(i, j)]))
                .collect()
        })
        .collect();
    let data = Dataset::new(columns, rows)?;
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    write(out.to_path_buf(), data.to_csv())?;
    println!("wrote {} rows to {}", n, out.display());
    Ok(0)
}

/// Run a study and write `study.csv`, `study_residuals.csv` and `study.txt`.
pub fn cmd_study(config: &StudyConfig, out: &Path) -> Result<i32> {
    let report = run_study(config)?;
    fs::create_dir_all(out)?;
    let table = report.to_table();
    print!("{table}");
    write(out.join("study.csv"), report.to_csv())?;
    write(out.join("study_residuals.csv"), report.residuals_csv())?;
    write(out.join("study.txt"), table)?;
    let flagged = report.cells.iter().filter(|c| c.flagged).count();
    Ok(if flagged == 0 { 0 } else { 1 })
}

/// Write `residuals_gcs.csv` and `residuals_rq.csv` and print their moments.
pub fn cmd_residuals(config: &RunConfig, data: &Dataset) -> Result<i32> {
    let (spec, t) = config.build(data)?;
    let res = fit(&spec, &t, &FitOptions::default())?;
    ensure!(res.converged, "fit did not converge; residuals need a converged fit");
    let dir = out_dir(config)?;
    println!("{:<5}{:>10}{:>10}{:>10}{:>10}  flagged", "kind", "mean", "sd", "cs", "ck");
    for kind in [ResidualKind::Gcs, ResidualKind::Rq] {
        let r = residuals(kind, &res, &spec, &t)?;
        let m = residual_moments(&r.values)?;
        println!("{}  {:?}", moments_line(kind.name(), &m), r.flagged);
        let path = dir.join(format!("residuals_{}.csv", kind.name()));
        write_residuals_csv(&r, fs::File::create(&path)?)?;
    }
    println!("rq residuals are the normal quantile of the fitted survival probability (large t gives negative values)");
    Ok(0)
}

/// Write `envelope_<kind>.csv` and `.svg` and print the share of points
/// inside the band.
pub fn cmd_envelope(config: &RunConfig, data: &Dataset, kind: ResidualKind, reps: usize, level: f64) -> Result<i32> {
    let (spec, t) = config.build(data)?;
    let res = fit(&spec, &t, &FitOptions::default())?;
    ensure!(res.converged, "fit did not converge; the envelope needs a converged fit");
    let band = simulated_envelope(&res, &spec, &t, kind, reps, level, &RngStream::new(config.seed, 0))?;
    let dir = out_dir(config)?;
    let csv_path = dir.join(format!("envelope_{}.csv", kind.name()));
    write_envelope_csv(&band, fs::File::create(&csv_path)?)?;
    write(dir.join(format!("envelope_{}.svg", kind.name())), envelope_svg(&band))?;
    println!(
        "{} envelope: {} replicates ({} failed), {:.1}% of points inside the {:.0}% band",
        kind.name(),
        band.replicates,
        band.failed,
        100.0 * band.coverage(),
        100.0 * (1.0 - level)
    );
    Ok(0)
}

/// Percentile bootstrap next to the Wald intervals; writes `bootstrap.json`.
pub fn cmd_bootstrap(config: &RunConfig, data: &Dataset, reps: usize, level: f64) -> Result<i32> {
    let (spec, t) = config.build(data)?;
    let opts = FitOptions::default();
    let base = fit(&spec, &t, &opts)?;
    let aci = conf_intervals(&base, level)?;
    let boot = bootstrap_ci(&spec, &t, reps, level, &RngStream::new(config.seed, 0), &opts)?;
    let names: Vec<String> = config.q_terms().into_iter().map(|s| format!("Q:{s}"))
        .chain(config.alpha_terms().into_iter().map(|s| format!("alpha:{s}")))
        .collect();
    println!("{:<24}{:>10}  {:>22}  {:>22}", "parameter", "estimate", "asymptotic", "bootstrap");
    for (j, name) in names.iter().enumerate() {
        println!(
            "{:<24}{:>10.4}  ({:>9.4}; {:>9.4})  ({:>9.4}; {:>9.4})",
            name,
            base.estimates()[j],
            aci[j].lo,
            aci[j].hi,
            boot.intervals[j].lo,
            boot.intervals[j].hi
        );
    }
    println!("{} of {} resamples failed and were dropped", boot.failed, boot.requested);
    let dir = out_dir(config)?;
    write(dir.join("bootstrap.json"), serde_json::to_string_pretty(&boot)?)?;
    Ok(0)
}

/// A quantity of the LBS law evaluated by `qlbs dist`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistOp {
    Pdf,
    Cdf,
    Sf,
    Quantile,
    Mean,
    Var,
    Kappa,
    UQuantile,
}

impl std::str::FromStr for DistOp {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "pdf" => Self::Pdf,
            "cdf" => Self::Cdf,
            "sf" => Self::Sf,
            "quantile" => Self::Quantile,
            "mean" => Self::Mean,
            "var" => Self::Var,
            "kappa" => Self::Kappa,
            "u-quantile" => Self::UQuantile,
            _ => return Err(format!("unknown op '{s}' (pdf, cdf, sf, quantile, mean, var, kappa, u-quantile)")),
        })
    }
}

/// The law is given either by `theta` or by `(q, tau)`.
pub fn dist_value(op: DistOp, alpha: f64, theta: Option<f64>, q_tau: Option<(f64, f64)>, x: Option<f64>) -> Result<f64> {
    let need_x = || x.context("this op needs --x");
    let tau_only = || {
        q_tau
            .map(|(_, tau)| tau)
            .or(x)
            .context("this op needs --tau (or --x as the level)")
    };
    match op {
        DistOp::Kappa => return Ok(kappa(tau_only()?, alpha)?),
        DistOp::UQuantile => return Ok(u_quantile(tau_only()?, alpha)?),
        _ => {}
    }
    let law = match (theta, q_tau) {
        (Some(th), None) => LbsParams::new(alpha, th)?,
        (None, Some((q, tau))) => theta_from_q(&QlbsParams::new(alpha, q, tau)?)?,
        _ => bail!("give exactly one of --theta or --q with --tau"),
    };
    Ok(match op {
        DistOp::Pdf => lbs_pdf(need_x()?, &law)?,
        DistOp::Cdf => lbs_cdf(need_x()?, &law)?,
        DistOp::Sf => lbs_sf(need_x()?, &law)?,
        DistOp::Quantile => lbs_quantile(need_x()?, &law)?,
        DistOp::Mean => lbs_moments(&law).0,
        DistOp::Var => lbs_moments(&law).1,
        DistOp::Kappa | DistOp::UQuantile => unreachable!(),
    })
}

pub fn cmd_dist(op: DistOp, alpha: f64, theta: Option<f64>, q_tau: Option<(f64, f64)>, x: Option<f64>) -> Result<i32> {
    println!("{:.17e}", dist_value(op, alpha, theta, q_tau, x)?);
    Ok(0)
}

/// Summary statistics of the named columns (all columns when empty).
pub fn cmd_describe(data: &Dataset, cols: &[String]) -> Result<i32> {
    let names: Vec<String> = if cols.is_empty() { data.columns.clone() } else { cols.to_vec() };
    let stats = names
        .iter()
        .map(|c| Ok((c.clone(), descriptive_stats(&data.column(c)?))))
        .collect::<Result<Vec<_>>>()?;
    print!("{}", describe_table(&stats));
    Ok(0)
}

/// `F(Q_τ; α, θ) − τ` over a grid: how far the quantile parameter is from
/// the distributional τ-quantile. Writes `quantile_gap.csv` under `out`.
pub fn cmd_gap(alphas: &[f64], taus: &[f64], out: &Path) -> Result<i32> {
    let mut csv = String::from("alpha,tau,cdf_at_q,gap\n");
    print!("{:>8}", "alpha");
    for tau in taus {
        print!("{:>12}", format!("tau={tau}"));
    }
    println!();
    for &a in alphas {
        print!("{a:>8.3}");
        for &tau in taus {
            let gap = quantile_gap(a, tau)?;
            print!("{gap:>12.4}");
            csv.push_str(&format!("{a:.16e},{tau:.16e},{:.16e},{gap:.16e}\n", tau + gap));
        }
        println!();
    }
    fs::create_dir_all(out)?;
    write(out.join("quantile_gap.csv"), csv)?;
    Ok(0)
}
