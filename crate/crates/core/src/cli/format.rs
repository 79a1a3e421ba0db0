use std::fmt::Write as _;

use super::commands::FitReport;
use crate::diagnostics::{DescriptiveStats, ResidualMoments};

/// Estimates, SEs and intervals to four decimals, one block per sub-model.
pub fn fit_table(r: &FitReport) -> String {
    let f = &r.fit;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "QLBS regression for {} at tau = {} (n = {}; {} link for Q, {} link for alpha)",
        r.response, f.tau, f.n, r.link_q, r.link_alpha
    );
    let conf = 100.0 * (1.0 - r.level);
    let _ = writeln!(s, "{:<20}{:>22}  {:>24}", "Parameter", "Est. (SE)", format!("{conf:.0}% ACI"));
    let est = f.estimates();
    let blocks = [("Q component", &r.q_terms, 0), ("alpha component", &r.alpha_terms, r.q_terms.len())];
    for (title, names, offset) in blocks {
        let _ = writeln!(s, "{title}");
        for (k, name) in names.iter().enumerate() {
            let j = offset + k;
            let ci = match &r.intervals {
                Some(iv) => format!("({:.4}; {:.4})", iv[j].lo, iv[j].hi),
                None => "-".into(),
            };
            let _ = writeln!(
                s,
                "  {:<18}{:>22}  {:>24}",
                name,
                format!("{:.4} ({:.4})", est[j], f.std_errors[j]),
                ci
            );
        }
    }
    let _ = writeln!(s, "Log-lik. {:.4}", f.loglik);
    let _ = writeln!(s, "AIC      {:.4}", f.aic);
    let _ = writeln!(s, "BIC      {:.4}", f.bic);
    let _ = writeln!(
        s,
        "converged: {}; iterations {}; gradient max-norm {:.3e}",
        if f.converged { "yes" } else { "NO" },
        f.iterations,
        f.gradient_norm
    );
    if let Some(d) = r.hessian_discrepancy {
        let _ = writeln!(s, "closed-form vs numeric Hessian, max relative gap {d:.3e}");
    }
    s
}

pub fn moments_line(label: &str, m: &ResidualMoments) -> String {
    format!("{label:<5}{:>10.4}{:>10.4}{:>10.4}{:>10.4}", m.mean, m.sd, m.cs, m.ck)
}

pub fn describe_table(rows: &[(String, DescriptiveStats)]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<14}{:>5}{:>10}{:>10}{:>10}{:>10}{:>10}{:>10}{:>10}{:>10}{:>8}",
        "variable", "n", "min", "q0.25", "median", "q0.75", "max", "mean", "sd", "cv%", "cs"
    );
    for (name, d) in rows {
        let _ = writeln!(
            s,
            "{:<14}{:>5}{:>10.2}{:>10.2}{:>10.2}{:>10.2}{:>10.2}{:>10.2}{:>10.2}{:>10.2}{:>8.2}",
            name, d.n, d.min, d.q1, d.median, d.q3, d.max, d.mean, d.sd, d.cv_percent, d.cs
        );
    }
    s
}
