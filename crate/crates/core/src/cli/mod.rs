//! Command-line surface: CSV ingestion, report formatting and the `qlbs`
//! subcommands. Each `cmd_*` function is usable directly from Rust; [`run`]
//! parses arguments and dispatches.
//!
//! The worker-thread count of the parallel parts (study, envelope,
//! bootstrap) comes from `QLBS_THREADS`, defaulting to one thread per core.

mod commands;
mod data;
mod format;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::{
    cmd_bootstrap, cmd_describe, cmd_dist, cmd_envelope, cmd_fit, cmd_gap, cmd_residuals, cmd_simulate, cmd_study,
    dist_value, DistOp, FitReport, RunConfig,
};
pub use data::{load_csv, parse_csv, Dataset};
pub use format::{describe_table, fit_table};

use crate::diagnostics::ResidualKind;
use crate::harness::StudyConfig;
use crate::model::{LinkFunction, ParamVector};

/// Environment variable naming the worker-thread count.
pub const THREADS_ENV: &str = "QLBS_THREADS";

#[derive(Debug, Parser)]
#[command(name = "qlbs", version, about = "Quantile-parameterized length-biased Birnbaum-Saunders regression")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// Input CSV with a header line.
    data: PathBuf,
    /// Response column (must be positive).
    #[arg(long)]
    response: String,
    /// Covariates of the quantile sub-model, comma separated.
    #[arg(long = "q-cols", value_delimiter = ',')]
    q_cols: Vec<String>,
    /// Covariates of the shape sub-model, comma separated.
    #[arg(long = "alpha-cols", value_delimiter = ',')]
    alpha_cols: Vec<String>,
    #[arg(long, default_value_t = 0.5)]
    tau: f64,
    #[arg(long = "link-q", default_value = "log")]
    link_q: LinkFunction,
    #[arg(long = "link-alpha", default_value = "log")]
    link_alpha: LinkFunction,
    /// Drop the intercept from the quantile sub-model.
    #[arg(long)]
    no_q_intercept: bool,
    /// Drop the intercept from the shape sub-model.
    #[arg(long)]
    no_alpha_intercept: bool,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    /// Output directory.
    #[arg(long, default_value = "qlbs-out")]
    out: PathBuf,
}

impl ModelArgs {
    fn config(&self) -> RunConfig {
        RunConfig {
            response: self.response.clone(),
            q_covariates: self.q_cols.clone(),
            alpha_covariates: self.alpha_cols.clone(),
            tau: self.tau,
            link_q: self.link_q,
            link_alpha: self.link_alpha,
            q_intercept: !self.no_q_intercept,
            alpha_intercept: !self.no_alpha_intercept,
            seed: self.seed,
            out: self.out.clone(),
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit the regression and write fit.json / fit.txt.
    Fit(ModelArgs),
    /// Draw one dataset from the simulation design.
    Simulate {
        #[arg(long, default_value_t = 400)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        tau: f64,
        /// Quantile sub-model coefficients, intercept first.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "1,-1")]
        beta: Vec<f64>,
        /// Shape sub-model coefficients, intercept first.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "-1.3862943611198906,0.5")]
        rho: Vec<f64>,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// Output CSV path.
        #[arg(long, default_value = "simulated.csv")]
        out: PathBuf,
    },
    /// Run a Monte Carlo study from a TOML config (defaults reproduce the
    /// full design).
    Study {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Replications per cell, overriding the config.
        #[arg(long, conflicts_with = "fast")]
        reps: Option<usize>,
        /// 200 replications per cell.
        #[arg(long)]
        fast: bool,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "qlbs-out")]
        out: PathBuf,
    },
    /// Write Cox-Snell and randomized quantile residuals of a fit.
    Residuals(ModelArgs),
    /// Simulated envelope of the residuals of a fit (CSV and SVG).
    Envelope {
        #[command(flatten)]
        model: ModelArgs,
        /// gcs or rq.
        #[arg(long, default_value = "rq")]
        kind: ResidualKind,
        #[arg(long, default_value_t = 100)]
        reps: usize,
        /// Two-sided level of the band.
        #[arg(long, default_value_t = 0.05)]
        level: f64,
    },
    /// Percentile bootstrap intervals next to the asymptotic ones.
    Bootstrap {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 500)]
        reps: usize,
        #[arg(long, default_value_t = 0.05)]
        level: f64,
    },
    /// Evaluate the LBS law: pdf, cdf, sf, quantile, mean, var, kappa,
    /// u-quantile.
    Dist {
        op: DistOp,
        #[arg(long)]
        alpha: f64,
        #[arg(long, conflicts_with = "q")]
        theta: Option<f64>,
        #[arg(long, requires = "tau")]
        q: Option<f64>,
        #[arg(long)]
        tau: Option<f64>,
        /// Point (pdf/cdf/sf) or probability (quantile).
        #[arg(long, allow_hyphen_values = true)]
        x: Option<f64>,
    },
    /// Descriptive statistics of CSV columns.
    Describe {
        data: PathBuf,
        /// Columns to summarize, comma separated (default: all).
        #[arg(long, value_delimiter = ',')]
        cols: Vec<String>,
    },
    /// Tabulate F(Q_tau) - tau over a grid of shapes and levels.
    Gap {
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.25,0.5,1,2")]
        alphas: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.25,0.5,0.75,0.9")]
        taus: Vec<f64>,
        #[arg(long, default_value = "qlbs-out")]
        out: PathBuf,
    },
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| anyhow::anyhow!("{THREADS_ENV}={v:?} is not a thread count"))?;
        // A pool already set up by an embedding program is left alone.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

fn dispatch(command: Command) -> anyhow::Result<i32> {
    match command {
        Command::Fit(m) => cmd_fit(&m.config(), &load_csv(&m.data)?),
        Command::Simulate { n, tau, beta, rho, seed, out } => {
            cmd_simulate(n, tau, &ParamVector::new(beta, rho), seed, &out)
        }
        Command::Study { config, reps, fast, seed, out } => {
            let mut cfg = match config {
                Some(path) => StudyConfig::from_toml(&std::fs::read_to_string(&path)?)?,
                None => StudyConfig::default(),
            };
            if fast {
                cfg.reps = 200;
            }
            if let Some(r) = reps {
                cfg.reps = r;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            cmd_study(&cfg, &out)
        }
        Command::Residuals(m) => cmd_residuals(&m.config(), &load_csv(&m.data)?),
        Command::Envelope { model, kind, reps, level } => {
            cmd_envelope(&model.config(), &load_csv(&model.data)?, kind, reps, level)
        }
        Command::Bootstrap { model, reps, level } => {
            cmd_bootstrap(&model.config(), &load_csv(&model.data)?, reps, level)
        }
        Command::Dist { op, alpha, theta, q, tau, x } => {
            let q_tau = q.zip(tau);
            // a bare --tau is the level for kappa / u-quantile
            let x = x.or(if q.is_none() { tau } else { None });
            cmd_dist(op, alpha, theta, q_tau, x)
        }
        Command::Describe { data, cols } => cmd_describe(&load_csv(&data)?, &cols),
        Command::Gap { alphas, taus, out } => cmd_gap(&alphas, &taus, &out),
    }
}

/// Parse `args` (program name first) and run. Returns the process exit
/// status: 0 on success, 1 on a failed or non-converged run, 2 on a usage
/// error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = configure_threads().and_then(|_| dispatch(cli.command));
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}
