use std::fmt::Write as _;
use std::io::Write;

use super::envelope::EnvelopeBand;
use super::residuals::ResidualSet;
use crate::error::Result;
use crate::numerics::sorted;

/// Columns `index, theoretical, observed, lower, median, upper`.
pub fn write_envelope_csv<W: Write>(band: &EnvelopeBand, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["index", "theoretical", "observed", "lower", "median", "upper"])
        .map_err(csv_err)?;
    for i in 0..band.observed.len() {
        w.write_record([
            (i + 1).to_string(),
            num(band.sorted_theoretical[i]),
            num(band.observed[i]),
            num(band.lower[i]),
            num(band.median[i]),
            num(band.upper[i]),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Residuals in observation order with a QQ pairing against the reference
/// law (`theoretical` is aligned with the sorted residual of the same rank).
pub fn write_residuals_csv<W: Write>(res: &ResidualSet, out: W) -> Result<()> {
    let n = res.values.len();
    let order = sorted(&res.values);
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["index", "residual", "fitted_quantile", "flagged", "sorted_residual", "theoretical"])
        .map_err(csv_err)?;
    for i in 0..n {
        let p = (i as f64 + 0.5) / n as f64;
        w.write_record([
            (i + 1).to_string(),
            num(res.values[i]),
            num(res.fitted_quantiles[i]),
            res.flagged.contains(&i).to_string(),
            num(order[i]),
            num(res.kind.reference_quantile(p)?),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub(crate) fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_err(e: csv::Error) -> crate::error::Error {
    crate::error::Error::Data(e.to_string())
}

/// A bare QQ plot: band as a shaded polygon, observed points as dots.
pub fn envelope_svg(band: &EnvelopeBand) -> String {
    const W: f64 = 480.0;
    const H: f64 = 480.0;
    const PAD: f64 = 40.0;
    let xs = &band.sorted_theoretical;
    let ys = band.lower.iter().chain(&band.upper).chain(&band.observed);
    let (xmin, xmax) = extent(xs.iter());
    let (ymin, ymax) = extent(ys);
    let sx = |x: f64| PAD + (x - xmin) / (xmax - xmin).max(f64::MIN_POSITIVE) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - ymin) / (ymax - ymin).max(f64::MIN_POSITIVE) * (H - 2.0 * PAD);

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let mut poly = String::new();
    for (x, y) in xs.iter().zip(&band.upper) {
        let _ = write!(poly, "{:.2},{:.2} ", sx(*x), sy(*y));
    }
    for (x, y) in xs.iter().zip(&band.lower).rev() {
        let _ = write!(poly, "{:.2},{:.2} ", sx(*x), sy(*y));
    }
    let _ = writeln!(svg, r##"<polygon points="{}" fill="#dddddd" stroke="#888888"/>"##, poly.trim_end());
    let median: Vec<String> = xs
        .iter()
        .zip(&band.median)
        .map(|(x, y)| format!("{:.2},{:.2}", sx(*x), sy(*y)))
        .collect();
    let _ = writeln!(svg, r##"<polyline points="{}" fill="none" stroke="#555555" stroke-dasharray="4 3"/>"##, median.join(" "));
    for (x, y) in xs.iter().zip(&band.observed) {
        let _ = writeln!(svg, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5"/>"#, sx(*x), sy(*y));
    }
    let _ = writeln!(
        svg,
        r#"<text x="{PAD}" y="{:.0}" font-size="12">{} residuals, {} replicates, level {}</text>"#,
        PAD / 2.0,
        band.kind.name(),
        band.replicates,
        band.level
    );
    svg.push_str("</svg>\n");
    svg
}

fn extent<'a>(v: impl Iterator<Item = &'a f64>) -> (f64, f64) {
    v.filter(|x| x.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}
