//! Self-contained SVG line plots.
//!
//! The renderer is deterministic: the same series in the same order
//! produce byte-identical output, which keeps plots diffable and lets
//! tests compare whole files.

use crate::{format_compact, CliError};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 20.0;
const MARGIN_BOTTOM: f64 = 45.0;

/// Fraction of the data span added on each side of both axes.
const PADDING: f64 = 0.05;

/// Line colors cycled across series.
const PALETTE: [&str; 6] =
    ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// One labeled polyline.
pub struct Series {
    /// Legend text.
    pub label: String,
    /// Data points in plot units.
    pub points: Vec<(f64, f64)>,
}

struct Range {
    low: f64,
    high: f64,
}

impl Range {
    fn padded(values: impl Iterator<Item = f64>) -> Option<Self> {
        let mut low = f64::INFINITY;
        let mut high = f64::NEG_INFINITY;
        for v in values {
            low = low.min(v);
            high = high.max(v);
        }
        if !low.is_finite() || !high.is_finite() {
            return None;
        }
        let span = high - low;
        let pad = if span > 0.0 {
            span * PADDING
        } else {
            (low.abs() * PADDING).max(1e-12)
        };
        Some(Self { low: low - pad, high: high + pad })
    }

    fn span(&self) -> f64 {
        self.high - self.low
    }

    /// Tick positions on a 1-2-5 grid, aiming for about six intervals.
    fn ticks(&self) -> Vec<f64> {
        let raw_step = self.span() / 6.0;
        let magnitude = 10f64.powf(raw_step.log10().floor());
        let residual = raw_step / magnitude;
        let step = magnitude
            * if residual <= 1.0 {
                1.0
            } else if residual <= 2.0 {
                2.0
            } else if residual <= 5.0 {
                5.0
            } else {
                10.0
            };
        let mut ticks = Vec::new();
        let mut index = (self.low / step).ceil() as i64;
        loop {
            let value = index as f64 * step;
            if value > self.high + step * 1e-9 {
                break;
            }
            // Snap near-zero ticks so "-0" never appears as a label.
            ticks.push(if value.abs() < step * 1e-9 { 0.0 } else { value });
            index += 1;
        }
        ticks
    }
}

/// Renders the series into an SVG document.
pub fn render(series: &[Series], x_label: &str, y_label: &str) -> Result<String, CliError> {
    if series.is_empty() || series.iter().all(|s| s.points.is_empty()) {
        return Err(CliError::Usage("nothing to plot: no data points".to_string()));
    }
    let xs = Range::padded(series.iter().flat_map(|s| s.points.iter().map(|p| p.0)))
        .ok_or_else(|| CliError::Usage("plot input contains non-finite values".to_string()))?;
    let ys = Range::padded(series.iter().flat_map(|s| s.points.iter().map(|p| p.1)))
        .ok_or_else(|| CliError::Usage("plot input contains non-finite values".to_string()))?;

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let to_x = |v: f64| MARGIN_LEFT + (v - xs.low) / xs.span() * plot_w;
    let to_y = |v: f64| MARGIN_TOP + (ys.high - v) / ys.span() * plot_h;

    let mut out = String::with_capacity(8192);
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    out.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));

    for tick in xs.ticks() {
        let x = to_x(tick);
        out.push_str(&format!(
            "  <line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" \
             stroke=\"#dddddd\" stroke-width=\"1\"/>\n",
            MARGIN_TOP,
            MARGIN_TOP + plot_h
        ));
        out.push_str(&format!(
            "  <text x=\"{x:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" \
             text-anchor=\"middle\">{}</text>\n",
            MARGIN_TOP + plot_h + 18.0,
            format_compact(tick)
        ));
    }
    for tick in ys.ticks() {
        let y = to_y(tick);
        out.push_str(&format!(
            "  <line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" \
             stroke=\"#dddddd\" stroke-width=\"1\"/>\n",
            MARGIN_LEFT,
            MARGIN_LEFT + plot_w
        ));
        out.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" \
             text-anchor=\"end\">{}</text>\n",
            MARGIN_LEFT - 6.0,
            y + 4.0,
            format_compact(tick)
        ));
    }

    out.push_str(&format!(
        "  <rect x=\"{MARGIN_LEFT}\" y=\"{MARGIN_TOP}\" width=\"{plot_w}\" height=\"{plot_h}\" \
         fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n"
    ));
    out.push_str(&format!(
        "  <text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"13\" \
         text-anchor=\"middle\">{}</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 8.0,
        escape(x_label)
    ));
    out.push_str(&format!(
        "  <text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"13\" \
         text-anchor=\"middle\" transform=\"rotate(-90 {:.2} {:.2})\">{}</text>\n",
        16.0,
        MARGIN_TOP + plot_h / 2.0,
        16.0,
        MARGIN_TOP + plot_h / 2.0,
        escape(y_label)
    ));

    for (index, s) in series.iter().enumerate() {
        let color = PALETTE[index % PALETTE.len()];
        if s.points.len() == 1 {
            let (x, y) = s.points[0];
            out.push_str(&format!(
                "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{color}\"/>\n",
                to_x(x),
                to_y(y)
            ));
            continue;
        }
        let coords: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", to_x(x), to_y(y)))
            .collect();
        out.push_str(&format!(
            "  <polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
            coords.join(" ")
        ));
    }

    let legend_x = MARGIN_LEFT + plot_w - 160.0;
    for (index, s) in series.iter().enumerate() {
        let color = PALETTE[index % PALETTE.len()];
        let y = MARGIN_TOP + 14.0 + 18.0 * index as f64;
        out.push_str(&format!(
            "  <line x1=\"{legend_x:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" \
             stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
            legend_x + 22.0
        ));
        out.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
            legend_x + 28.0,
            y + 4.0,
            escape(&s.label)
        ));
    }

    out.push_str("</svg>\n");
    Ok(out)
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
