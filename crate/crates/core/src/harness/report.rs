use std::fmt::Write as _;

use super::study::StudyReport;
use crate::diagnostics::ResidualMoments;

fn e(v: f64) -> String {
    format!("{v:.16e}")
}

impl StudyReport {
    /// One row per cell and parameter.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,tau,parameter,truth,mean,bias,mse,cp,replications,failed,flagged\n");
        for c in &self.cells {
            for p in &c.params {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{},{},{}",
                    c.n,
                    e(c.tau),
                    p.name,
                    e(p.truth),
                    e(p.mean),
                    e(p.bias),
                    e(p.mse),
                    e(p.cp),
                    c.requested - c.failed,
                    c.failed,
                    c.flagged
                );
            }
        }
        s
    }

    /// One row per cell, residual kind and aggregation, plus the
    /// quantile-parameter fractions.
    pub fn residuals_csv(&self) -> String {
        let mut s = String::from("n,tau,kind,aggregation,mean,sd,cs,ck,q_fraction,q_fraction_model\n");
        for c in &self.cells {
            for r in &c.residuals {
                for (agg, m) in [("averaged", &r.averaged), ("pooled", &r.pooled)] {
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{},{},{},{},{},{}",
                        c.n,
                        e(c.tau),
                        r.kind.name(),
                        agg,
                        e(m.mean),
                        e(m.sd),
                        e(m.cs),
                        e(m.ck),
                        e(c.q_fraction),
                        e(c.q_fraction_model)
                    );
                }
            }
        }
        s
    }

    /// Plain-text tables: estimator summaries per τ, then residual moments.
    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let mut taus: Vec<f64> = Vec::new();
        for c in &self.cells {
            if !taus.contains(&c.tau) {
                taus.push(c.tau);
            }
        }
        for &tau in &taus {
            let _ = writeln!(s, "tau = {tau:.2}");
            let _ = writeln!(s, "{:>5}  {:<9}{:>10}{:>10}{:>10}{:>9}", "n", "param", "mean", "bias", "mse", "cp%");
            for c in self.cells.iter().filter(|c| c.tau == tau) {
                for (j, p) in c.params.iter().enumerate() {
                    let n = if j == 0 { c.n.to_string() } else { String::new() };
                    let _ = writeln!(
                        s,
                        "{:>5}  {:<9}{:>10.4}{:>10.4}{:>10.4}{:>9.2}",
                        n, p.name, p.mean, p.bias, p.mse, p.cp
                    );
                }
                if c.failed > 0 {
                    let mark = if c.flagged { " [flagged]" } else { "" };
                    let _ = writeln!(s, "       {} of {} replications failed{mark}", c.failed, c.requested);
                }
            }
            s.push('\n');
        }
        for (label, pick) in [("averaged per replication", 0usize), ("pooled", 1)] {
            let _ = writeln!(s, "residual moments, {label}");
            let _ = writeln!(
                s,
                "{:>5}{:>5}  {:>8}{:>8}{:>8}{:>8}  {:>8}{:>8}{:>8}{:>8}",
                "tau", "n", "gcs.mean", "sd", "cs", "ck", "rq.mean", "sd", "cs", "ck"
            );
            for c in &self.cells {
                let m = |k: usize| -> &ResidualMoments {
                    let r = &c.residuals[k];
                    if pick == 0 {
                        &r.averaged
                    } else {
                        &r.pooled
                    }
                };
                let (g, r) = (m(0), m(1));
                let _ = writeln!(
                    s,
                    "{:>5.2}{:>5}  {:>8.4}{:>8.4}{:>8.4}{:>8.4}  {:>8.4}{:>8.4}{:>8.4}{:>8.4}",
                    c.tau, c.n, g.mean, g.sd, g.cs, g.ck, r.mean, r.sd, r.cs, r.ck
                );
            }
            s.push('\n');
        }
        let _ = writeln!(s, "share of t <= Q_tau at the true parameters");
        for c in &self.cells {
            let _ = writeln!(
                s,
                "{:>5.2}{:>5}  observed {:.4}  model {:.4}",
                c.tau, c.n, c.q_fraction, c.q_fraction_model
            );
        }
        s
    }
}
