use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{format_sig, SweepCase, SweepCell, SweepTable};
use crate::{Error, Result};

/// Quantity drawn against the constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlotMetric {
    Throughput,
    /// Exact leakage; the approximate series is the exact leakage at the
    /// approximate rates.
    Leakage,
    /// Codeword and confidential rates, four series per params entry.
    Rates,
    SecrecyCost,
}

impl PlotMetric {
    fn y_label(self) -> &'static str {
        match self {
            PlotMetric::Throughput => "throughput (bits/channel use)",
            PlotMetric::Leakage => "leakage rate (bits/channel use)",
            PlotMetric::Rates => "rate (bits/channel use)",
            PlotMetric::SecrecyCost => "secrecy cost (bits/channel use)",
        }
    }

    /// `(name, exact, value picker)` for each series of one params entry.
    fn pickers(self) -> Vec<(&'static str, bool, fn(&SweepCell) -> f64)> {
        match self {
            PlotMetric::Throughput => vec![
                ("exact", true, |c| c.eta_exact),
                ("approx", false, |c| c.eta_at_approx),
            ],
            PlotMetric::Leakage => vec![
                ("exact", true, |c| c.rl_exact),
                ("approx", false, |c| c.rl_at_approx),
            ],
            PlotMetric::Rates => vec![
                ("R_b exact", true, |c| c.rb_exact),
                ("R_b approx", false, |c| c.rb_approx),
                ("R_s exact", true, |c| c.rs_exact),
                ("R_s approx", false, |c| c.rs_approx),
            ],
            PlotMetric::SecrecyCost => vec![
                ("exact", true, |c| c.phi_exact),
                ("approx", false, |c| c.phi_approx),
            ],
        }
    }
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 220.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

struct Series {
    label: String,
    exact: bool,
    color: &'static str,
    points: Vec<(f64, f64)>,
}

fn nice_step(span: f64, target: usize) -> f64 {
    let raw = span / target as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let nice = if norm < 1.5 {
        1.0
    } else if norm < 3.0 {
        2.0
    } else if norm < 7.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let step = nice_step(hi - lo, 5);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + 1e-9 * step {
        out.push(if t.abs() < 1e-12 * step { 0.0 } else { t });
        t += step;
    }
    out
}

fn padded_range(lo: f64, hi: f64) -> (f64, f64) {
    if hi > lo {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

/// Renders the table as a standalone SVG 1.1 document.
pub fn render_svg(table: &SweepTable, metric: PlotMetric) -> Result<String> {
    if table.rows.is_empty() {
        return Err(Error::InvalidConfig("cannot plot an empty table".into()));
    }
    let labels = table.labels();
    // Exact and approximate series of one quantity share a colour and differ
    // by dash pattern.
    let pickers = metric.pickers();
    let per_params = pickers.len() / 2;
    let mut series = Vec::new();
    for (k, label) in labels.iter().enumerate() {
        let pretty = label.replace('_', ", ");
        for (i, &(name, exact, pick)) in pickers.iter().enumerate() {
            series.push(Series {
                label: format!("{pretty}, {name}"),
                exact,
                color: COLORS[(k * per_params + i / 2) % COLORS.len()],
                points: table.series(k, pick),
            });
        }
    }

    let (x_lo, x_hi) = table
        .rows
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), r| {
            (a.min(r.constraint), b.max(r.constraint))
        });
    let (y_lo, y_hi) = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.1))
        .fold((0.0f64, f64::NEG_INFINITY), |(a, b), y| (a.min(y), b.max(y)));
    let y_hi = if y_hi.is_finite() { y_hi } else { 1.0 };
    let (x_lo, x_hi) = padded_range(x_lo, x_hi);
    let (y_lo, y_hi) = padded_range(y_lo, y_hi);

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let py = |y: f64| TOP + (y_hi - y) / (y_hi - y_lo) * plot_h;

    let mut s = String::new();
    let w = &mut s;
    let _ = writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(w, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        w,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );

    let _ = writeln!(w, r#"<g class="x-ticks">"#);
    for t in ticks(x_lo, x_hi) {
        let x = px(t);
        let y0 = TOP + plot_h;
        let _ = writeln!(
            w,
            r#"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            y0 + 5.0,
            y0 + 20.0,
            format_sig(t, 4)
        );
    }
    let _ = writeln!(w, "</g>");
    let _ = writeln!(w, r#"<g class="y-ticks">"#);
    for t in ticks(y_lo, y_hi) {
        let y = py(t);
        let _ = writeln!(
            w,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            y + 4.0,
            format_sig(t, 4)
        );
    }
    let _ = writeln!(w, "</g>");

    let x_label = match table.case {
        SweepCase::Case1 => "leakage cap xi (bits/channel use)",
        SweepCase::Case2 => "throughput floor (bits/channel use)",
    };
    let _ = writeln!(
        w,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{x_label}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        w,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">{}</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0,
        metric.y_label()
    );

    for sr in &series {
        let pts: Vec<String> = sr
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let dash = if sr.exact { "" } else { r#" stroke-dasharray="6 4""# };
        let _ = writeln!(
            w,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.5"{dash} points="{}"><title>{}</title></polyline>"#,
            sr.color,
            pts.join(" "),
            sr.label
        );
    }

    let _ = writeln!(w, r#"<g class="legend">"#);
    for (i, sr) in series.iter().enumerate() {
        let y = TOP + 10.0 + 18.0 * i as f64;
        let x = WIDTH - RIGHT + 15.0;
        let dash = if sr.exact { "" } else { r#" stroke-dasharray="6 4""# };
        let _ = writeln!(
            w,
            r#"<line x1="{x:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{}" stroke-width="1.5"{dash}/><text x="{:.2}" y="{:.2}">{}</text>"#,
            x + 25.0,
            sr.color,
            x + 30.0,
            y + 4.0,
            sr.label
        );
    }
    let _ = writeln!(w, "</g>");
    let _ = writeln!(w, "</svg>");
    Ok(s)
}

pub fn emit_svg(table: &SweepTable, metric: PlotMetric, path: &Path) -> Result<()> {
    let svg = render_svg(table, metric)?;
    std::fs::write(path, svg)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tick_steps_are_round() {
        assert_eq!(nice_step(1.0, 5), 0.2);
        assert_eq!(nice_step(7.0, 5), 1.0);
        assert_eq!(nice_step(0.03, 5), 0.005);
        let t = ticks(-0.05, 1.05);
        assert_eq!(t.first(), Some(&0.0));
        assert!(t.len() >= 5);
    }

    #[test]
    fn degenerate_ranges_widen() {
        assert_eq!(padded_range(1.0, 1.0), (0.5, 1.5));
        let (a, b) = padded_range(0.0, 10.0);
        assert!(a < 0.0 && b > 10.0);
    }
}
