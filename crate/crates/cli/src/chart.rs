//! Minimal SVG line charts for summary and trace files.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::csvio::{self, Schema};
use crate::CliError;

const WIDTH: f64 = 960.0;
const HEIGHT: f64 = 600.0;
const MARGIN_LEFT: f64 = 90.0;
const MARGIN_RIGHT: f64 = 190.0;
const MARGIN_TOP: f64 = 60.0;
const MARGIN_BOTTOM: f64 = 70.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineChart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

/// Roughly five round tick values covering `[lo, hi]`.
fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = hi - lo;
    let raw = span / 5.0;
    let pow = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 2.5, 5.0, 10.0]
        .into_iter()
        .map(|m| m * pow)
        .find(|s| span / s <= 6.0)
        .unwrap_or(10.0 * pow);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn padded_range(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let lo = values.clone().fold(f64::INFINITY, f64::min);
    let hi = values.fold(f64::NEG_INFINITY, f64::max);
    if hi - lo < 1e-12 {
        let pad = if lo.abs() > 1e-12 {
            lo.abs() * 0.05
        } else {
            1.0
        };
        (lo - pad, hi + pad)
    } else {
        let pad = (hi - lo) * 0.05;
        (lo - pad, hi + pad)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

impl LineChart {
    /// Renders the chart as a standalone SVG document.
    pub fn to_svg(&self) -> String {
        let xs = self
            .series
            .iter()
            .flat_map(|s| s.points.iter().map(|p| p.0));
        let ys = self
            .series
            .iter()
            .flat_map(|s| s.points.iter().map(|p| p.1));
        let (x0, x1) = padded_range(xs);
        let (y0, y1) = padded_range(ys);
        let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        let sx = |x: f64| MARGIN_LEFT + (x - x0) / (x1 - x0) * plot_w;
        let sy = |y: f64| MARGIN_TOP + plot_h - (y - y0) / (y1 - y0) * plot_h;

        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif">"#
        );
        let _ = writeln!(
            svg,
            r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="32" font-size="20" text-anchor="middle">{}</text>"#,
            MARGIN_LEFT + plot_w / 2.0,
            escape(&self.title)
        );

        // grid and ticks
        for t in ticks(y0, y1) {
            let y = sy(t);
            let _ = writeln!(
                svg,
                r##"<line x1="{MARGIN_LEFT:.1}" y1="{y:.2}" x2="{:.1}" y2="{y:.2}" stroke="#e0e0e0"/>"##,
                MARGIN_LEFT + plot_w
            );
            let _ = writeln!(
                svg,
                r#"<text x="{:.1}" y="{:.2}" font-size="12" text-anchor="end">{}</text>"#,
                MARGIN_LEFT - 8.0,
                y + 4.0,
                tick_label(t)
            );
        }
        for t in ticks(x0, x1) {
            let x = sx(t);
            let _ = writeln!(
                svg,
                r##"<line x1="{x:.2}" y1="{:.1}" x2="{x:.2}" y2="{:.1}" stroke="#000"/>"##,
                MARGIN_TOP + plot_h,
                MARGIN_TOP + plot_h + 5.0
            );
            let _ = writeln!(
                svg,
                r#"<text x="{x:.2}" y="{:.1}" font-size="12" text-anchor="middle">{}</text>"#,
                MARGIN_TOP + plot_h + 20.0,
                tick_label(t)
            );
        }
        let _ = writeln!(
            svg,
            r##"<rect x="{MARGIN_LEFT:.1}" y="{MARGIN_TOP:.1}" width="{plot_w:.1}" height="{plot_h:.1}" fill="none" stroke="#000"/>"##
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-size="14" text-anchor="middle">{}</text>"#,
            MARGIN_LEFT + plot_w / 2.0,
            HEIGHT - 20.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            svg,
            r#"<text x="24" y="{:.1}" font-size="14" text-anchor="middle" transform="rotate(-90 24 {:.1})">{}</text>"#,
            MARGIN_TOP + plot_h / 2.0,
            MARGIN_TOP + plot_h / 2.0,
            escape(&self.y_label)
        );

        for (i, s) in self.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let points: Vec<String> = s
                .points
                .iter()
                .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                .collect();
            let _ = writeln!(
                svg,
                r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
                points.join(" ")
            );
            if s.points.len() <= 40 {
                for &(x, y) in &s.points {
                    let _ = writeln!(
                        svg,
                        r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                        sx(x),
                        sy(y)
                    );
                }
            }
            let ly = MARGIN_TOP + 20.0 + 24.0 * i as f64;
            let lx = WIDTH - MARGIN_RIGHT + 20.0;
            let _ = writeln!(
                svg,
                r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="3"/>"#,
                lx + 28.0
            );
            let _ = writeln!(
                svg,
                r#"<text x="{:.1}" y="{:.1}" font-size="13">{}</text>"#,
                lx + 36.0,
                ly + 4.0,
                escape(&s.label)
            );
        }
        svg.push_str("</svg>\n");
        svg
    }
}

/// Charts for a summary or trace CSV, keyed by metric name.
pub fn charts_from_csv(input: &Path) -> Result<Vec<(String, LineChart)>, CliError> {
    let mut reader = csv::Reader::from_path(input)?;
    let schema = Schema::detect(reader.headers()?);
    drop(reader);
    match schema {
        Some(Schema::Summary) => {
            let summary = csvio::read_summary(input)?;
            if summary.rows.is_empty() {
                return Err(CliError::Runtime(format!(
                    "{}: no data rows",
                    input.display()
                )));
            }
            let metric =
                |name: &str, title: &str, y_label: &str, pick: fn(&nkland::SummaryRow) -> f64| {
                    let mut by_alg: BTreeMap<nkland::Algorithm, Vec<(f64, f64)>> = BTreeMap::new();
                    for r in &summary.rows {
                        by_alg
                            .entry(r.algorithm)
                            .or_default()
                            .push((r.k as f64, pick(r)));
                    }
                    let series = by_alg
                        .into_iter()
                        .map(|(alg, mut points)| {
                            points.sort_by(|a, b| a.0.total_cmp(&b.0));
                            Series {
                                label: alg.name().to_string(),
                                points,
                            }
                        })
                        .collect();
                    (
                        name.to_string(),
                        LineChart {
                            title: title.to_string(),
                            x_label: "K".to_string(),
                            y_label: y_label.to_string(),
                            series,
                        },
                    )
                };
            Ok(vec![
                metric("mean_fitness", "Fitness attained", "mean fitness", |r| {
                    r.mean_fitness
                }),
                metric(
                    "mean_hamming",
                    "Extent of change",
                    "mean hamming distance",
                    |r| r.mean_hamming,
                ),
                metric("mean_steps", "Steps executed", "mean steps", |r| {
                    r.mean_steps
                }),
            ])
        }
        Some(Schema::Trace) => {
            let rows = csvio::read_trace(input)?;
            if rows.is_empty() {
                return Err(CliError::Runtime(format!(
                    "{}: no data rows",
                    input.display()
                )));
            }
            let mut by_k: BTreeMap<usize, Vec<(f64, f64)>> = BTreeMap::new();
            for (k, step, mean) in rows {
                by_k.entry(k).or_default().push((step as f64, mean));
            }
            let series = by_k
                .into_iter()
                .map(|(k, points)| Series {
                    label: format!("K = {k}"),
                    points,
                })
                .collect();
            Ok(vec![(
                "mean_moves_available".to_string(),
                LineChart {
                    title: "Moves available".to_string(),
                    x_label: "time step".to_string(),
                    y_label: "mean moves available".to_string(),
                    series,
                },
            )])
        }
        _ => Err(CliError::Runtime(format!(
            "{}: not a summary or trace file",
            input.display()
        ))),
    }
}

/// Writes one SVG per metric next to `out_dir/<input stem>_<metric>.svg`.
/// Nothing is written if the input is rejected.
pub fn render_line_chart(input: &Path, out_dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let charts = charts_from_csv(input)?;
    let stem = input
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("chart")
        .to_string();
    std::fs::create_dir_all(out_dir)?;
    charts
        .into_iter()
        .map(|(metric, chart)| {
            let path = out_dir.join(format!("{stem}_{metric}.svg"));
            csvio::write_file(&path, &chart.to_svg())?;
            Ok(path)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ticks_are_round() {
        assert_eq!(
            ticks(0.0, 1.0),
            vec![0.0, 0.2, 0.4, 0.6000000000000001, 0.8, 1.0]
        );
        let t = ticks(0.62, 0.73);
        assert!(t.len() >= 3 && t.len() <= 7, "{t:?}");
        assert_eq!(tick_label(0.6000000000000001), "0.6");
    }

    #[test]
    fn svg_has_one_polyline_per_series() {
        let chart = LineChart {
            title: "t".into(),
            x_label: "x".into(),
            y_label: "y".into(),
            series: vec![
                Series {
                    label: "a".into(),
                    points: vec![(0.0, 1.0), (1.0, 2.0)],
                },
                Series {
                    label: "b<c".into(),
                    points: vec![(0.0, 1.5)],
                },
            ],
        };
        let svg = chart.to_svg();
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("viewBox=\"0 0 960 600\""));
        assert!(svg.contains("b&lt;c"));
        assert_eq!(svg, chart.to_svg());
    }
}
