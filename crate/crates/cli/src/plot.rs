//! Static SVG plots of report CSVs. Presentation only.

use crate::CliError;
use std::fmt::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum PlotKind {
    /// `s1`, `probability` and `oracle` columns.
    CdfOverlay,
    /// `point`, `rung` and `error` columns, log-log.
    ConvergenceLadder,
    /// `x` and `value` columns.
    KernelSlice,
}

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn parse(text: &str) -> Result<Self, CliError> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let header = r.headers().map_err(|e| CliError::Usage(format!("csv: {e}")))?.iter().map(String::from).collect();
        let rows = r
            .records()
            .map(|rec| rec.map(|x| x.iter().map(String::from).collect()))
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::Usage(format!("csv: {e}")))?;
        Ok(Table { header, rows })
    }

    fn col(&self, name: &str) -> Result<usize, CliError> {
        self.header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Usage(format!("schema: missing column {name:?}")))
    }

    fn numbers(&self, c: usize) -> Result<Vec<f64>, CliError> {
        self.rows
            .iter()
            .map(|r| {
                let v = r.get(c).map(String::as_str).unwrap_or("");
                v.parse().map_err(|_| CliError::Usage(format!("schema: {v:?} in column {:?} is not a number", self.header[c])))
            })
            .collect()
    }
}

struct Series {
    label: String,
    points: Vec<(f64, f64)>,
}

const W: f64 = 640.0;
const H: f64 = 420.0;
const PAD: f64 = 56.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn svg(title: &str, xlabel: &str, ylabel: &str, series: &[Series], log: bool) -> Result<String, CliError> {
    let tr = |v: f64| if log { v.log10() } else { v };
    let pts: Vec<(f64, f64)> =
        series.iter().flat_map(|s| s.points.iter().map(|&(x, y)| (tr(x), tr(y)))).filter(|p| p.0.is_finite() && p.1.is_finite()).collect();
    if pts.is_empty() {
        return Err(CliError::Usage("schema: nothing to plot".into()));
    }
    let (mut x0, mut x1, mut y0, mut y1) = pts.iter().fold(
        (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY),
        |(a, b, c, d), &(x, y)| (a.min(x), b.max(x), c.min(y), d.max(y)),
    );
    if x1 - x0 < 1e-12 {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if y1 - y0 < 1e-12 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let sx = |x: f64| PAD + (tr(x) - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (tr(y) - y0) / (y1 - y0) * (H - 2.0 * PAD);
    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<path d="M{PAD} {PAD} V{} H{}" fill="none" stroke="black"/>"#,
        H - PAD,
        W - PAD
    );
    let _ = writeln!(out, r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{title}</text>"#, W / 2.0);
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle" font-size="12">{xlabel}</text>"#, W / 2.0, H - 14.0);
    let _ = writeln!(
        out,
        r#"<text x="16" y="{}" text-anchor="middle" font-size="12" transform="rotate(-90 16 {})">{ylabel}</text>"#,
        H / 2.0,
        H / 2.0
    );
    let fmt = |v: f64| if log { format!("1e{v:.1}") } else { format!("{v:.3}") };
    for (v, anchor, x, y) in [(x0, "start", PAD, H - PAD + 16.0), (x1, "end", W - PAD, H - PAD + 16.0)] {
        let _ = writeln!(out, r#"<text x="{x}" y="{y}" text-anchor="{anchor}" font-size="10">{}</text>"#, fmt(v));
    }
    for (v, y) in [(y0, H - PAD), (y1, PAD + 4.0)] {
        let _ = writeln!(out, r#"<text x="{}" y="{y}" text-anchor="end" font-size="10">{}</text>"#, PAD - 4.0, fmt(v));
    }
    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let path: Vec<String> = s.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(out, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#, path.join(" "));
        for &(x, y) in &s.points {
            let _ = writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"#, sx(x), sy(y));
        }
        let ly = PAD + 14.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{ly}" font-size="11" fill="{color}">{}</text>"#,
            W - PAD - 150.0,
            escape(&s.label)
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders `csv` as an SVG document of the given kind.
pub fn emit_plot(csv: &str, kind: PlotKind) -> Result<String, CliError> {
    let t = Table::parse(csv)?;
    match kind {
        PlotKind::CdfOverlay => {
            let (s, p, o) = (t.col("s1")?, t.col("probability")?, t.col("oracle")?);
            let xs = t.numbers(s)?;
            let mut a: Vec<(f64, f64)> = xs.iter().copied().zip(t.numbers(p)?).collect();
            let mut b: Vec<(f64, f64)> = xs.iter().copied().zip(t.numbers(o)?).collect();
            a.sort_by(|u, v| u.0.total_cmp(&v.0));
            b.sort_by(|u, v| u.0.total_cmp(&v.0));
            svg(
                "distribution function",
                "s1",
                "probability",
                &[Series { label: "fredholm".into(), points: a }, Series { label: "oracle".into(), points: b }],
                false,
            )
        }
        PlotKind::ConvergenceLadder => {
            let (pc, rc, ec) = (t.col("point")?, t.col("rung")?, t.col("error")?);
            let errs = t.numbers(ec)?;
            let mut series: Vec<Series> = Vec::new();
            let mut index = 0.0;
            for (row, &e) in t.rows.iter().zip(&errs) {
                let label = row[pc].clone();
                // Rungs like 2:8:64 are not numbers; plot them by position.
                let x = row[rc].parse::<f64>().unwrap_or_else(|_| {
                    index += 1.0;
                    index
                });
                match series.iter_mut().find(|s| s.label == label) {
                    Some(s) => s.points.push((x, e)),
                    None => series.push(Series { label, points: vec![(x, e)] }),
                }
            }
            svg("convergence ladder", "rung", "error", &series, true)
        }
        PlotKind::KernelSlice => {
            let (x, v) = (t.col("x")?, t.col("value")?);
            let mut pts: Vec<(f64, f64)> = t.numbers(x)?.into_iter().zip(t.numbers(v)?).collect();
            pts.sort_by(|u, w| u.0.total_cmp(&w.0));
            svg("kernel slice", "x", "value", &[Series { label: "K".into(), points: pts }], false)
        }
    }
}
