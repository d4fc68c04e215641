//! Minimal SVG line/marker plots with linear or logarithmic axes.

use std::fmt::Write as _;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 72.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 36.0;
const BOTTOM: f64 = 56.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    Line,
    Dashed,
    Markers,
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    /// A non-finite y breaks a line.
    pub points: Vec<(f64, f64)>,
    pub style: Style,
    pub color: &'static str,
}

impl Series {
    pub fn new(
        label: impl Into<String>,
        points: Vec<(f64, f64)>,
        style: Style,
        color: &'static str,
    ) -> Self {
        Series {
            label: label.into(),
            points,
            style,
            color,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    /// Fixed y window; points outside it are dropped (lines break there).
    pub y_range: Option<(f64, f64)>,
    pub series: Vec<Series>,
    /// Dashed vertical guides at these x.
    pub vlines: Vec<f64>,
}

pub const PALETTE: [&str; 6] = [
    "#1f4e9c", "#c0392b", "#27864a", "#8e44ad", "#d68910", "#566573",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Round step of roughly `span / target`.
fn nice_step(span: f64, target: f64) -> f64 {
    let raw = span / target;
    let mag = 10f64.powf(raw.log10().floor());
    let f = raw / mag;
    let nice = if f < 1.5 {
        1.0
    } else if f < 3.5 {
        2.0
    } else if f < 7.5 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn tick_label(v: f64, log: bool) -> String {
    if log {
        format!("1e{}", v.round() as i64)
    } else if v == 0.0 {
        "0".into()
    } else if v.abs() >= 1e4 || v.abs() < 1e-3 {
        format!("{v:.1e}")
    } else {
        let s = format!("{v:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn fit(values: impl Iterator<Item = f64>, log: bool, fixed: Option<(f64, f64)>) -> Axis {
        let tr = |v: f64| if log { v.log10() } else { v };
        let (mut lo, mut hi) = match fixed {
            Some((a, b)) => (tr(a), tr(b)),
            None => values
                .filter(|v| v.is_finite() && (!log || *v > 0.0))
                .map(tr)
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
                    (a.min(v), b.max(v))
                }),
        };
        if !lo.is_finite() {
            (lo, hi) = (0.0, 1.0);
        }
        if hi - lo < 1e-12 * (1.0 + lo.abs()) {
            lo -= 0.5;
            hi += 0.5;
        }
        if fixed.is_none() && !log {
            let pad = 0.04 * (hi - lo);
            lo -= pad;
            hi += pad;
        }
        Axis { lo, hi, log }
    }

    fn map(&self, v: f64, from: f64, to: f64) -> Option<f64> {
        let t = if self.log {
            if v <= 0.0 {
                return None;
            }
            v.log10()
        } else {
            v
        };
        if !t.is_finite()
            || t < self.lo - 1e-9 * (self.hi - self.lo)
            || t > self.hi + 1e-9 * (self.hi - self.lo)
        {
            return None;
        }
        Some(from + (t - self.lo) / (self.hi - self.lo) * (to - from))
    }

    /// Tick positions in axis coordinates (log10 for log axes).
    fn ticks(&self) -> Vec<f64> {
        let step = if self.log {
            nice_step(self.hi - self.lo, 6.0).max(1.0)
        } else {
            nice_step(self.hi - self.lo, 6.0)
        };
        let mut t = (self.lo / step).ceil() * step;
        let mut out = Vec::new();
        while t <= self.hi + 1e-9 * step {
            out.push(if t.abs() < 1e-12 * step { 0.0 } else { t });
            t += step;
        }
        out
    }

    fn raw(&self, t: f64) -> f64 {
        if self.log {
            10f64.powf(t)
        } else {
            t
        }
    }
}

impl Plot {
    pub fn render(&self) -> String {
        let (x0, x1) = (LEFT, WIDTH - RIGHT);
        let (y0, y1) = (HEIGHT - BOTTOM, TOP);
        let xs = self
            .series
            .iter()
            .flat_map(|s| s.points.iter().map(|p| p.0));
        let xaxis = Axis::fit(xs.chain(self.vlines.iter().copied()), self.log_x, None);
        let ys = self
            .series
            .iter()
            .flat_map(|s| s.points.iter().map(|p| p.1));
        let yaxis = Axis::fit(ys, self.log_y, self.y_range);

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<defs><clipPath id="frame"><rect x="{x0}" y="{y1}" width="{}" height="{}"/></clipPath></defs>"#,
            x1 - x0,
            y0 - y1
        );

        for t in xaxis.ticks() {
            let px = x0 + (t - xaxis.lo) / (xaxis.hi - xaxis.lo) * (x1 - x0);
            let _ = writeln!(
                s,
                r##"<line x1="{px:.2}" y1="{y0}" x2="{px:.2}" y2="{y1}" stroke="#e5e5e5"/>"##
            );
            let _ = writeln!(
                s,
                r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                y0 + 16.0,
                escape(&tick_label(
                    if xaxis.log { t } else { xaxis.raw(t) },
                    xaxis.log
                ))
            );
        }
        for t in yaxis.ticks() {
            let py = y0 + (t - yaxis.lo) / (yaxis.hi - yaxis.lo) * (y1 - y0);
            let _ = writeln!(
                s,
                r##"<line x1="{x0}" y1="{py:.2}" x2="{x1}" y2="{py:.2}" stroke="#e5e5e5"/>"##
            );
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                x0 - 6.0,
                py + 4.0,
                escape(&tick_label(
                    if yaxis.log { t } else { yaxis.raw(t) },
                    yaxis.log
                ))
            );
        }
        let _ = writeln!(
            s,
            r#"<rect x="{x0}" y="{y1}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            x1 - x0,
            y0 - y1
        );

        let _ = writeln!(s, r#"<g clip-path="url(#frame)">"#);
        for v in &self.vlines {
            if let Some(px) = xaxis.map(*v, x0, x1) {
                let _ = writeln!(
                    s,
                    r##"<line x1="{px:.2}" y1="{y0}" x2="{px:.2}" y2="{y1}" stroke="#888" stroke-dasharray="4 3"/>"##
                );
            }
        }
        for series in &self.series {
            let mapped: Vec<Option<(f64, f64)>> = series
                .points
                .iter()
                .map(|&(x, y)| Some((xaxis.map(x, x0, x1)?, yaxis.map(y, y0, y1)?)))
                .collect();
            match series.style {
                Style::Markers => {
                    for (px, py) in mapped.into_iter().flatten() {
                        let _ = writeln!(
                            s,
                            r#"<circle cx="{px:.2}" cy="{py:.2}" r="2.5" fill="{}"/>"#,
                            series.color
                        );
                    }
                }
                Style::Line | Style::Dashed => {
                    let dash = if series.style == Style::Dashed {
                        r#" stroke-dasharray="6 4""#
                    } else {
                        ""
                    };
                    for run in mapped.split(Option::is_none).filter(|r| r.len() > 1) {
                        let pts: Vec<String> = run
                            .iter()
                            .flatten()
                            .map(|(px, py)| format!("{px:.2},{py:.2}"))
                            .collect();
                        let _ = writeln!(
                            s,
                            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.4"{dash}/>"#,
                            pts.join(" "),
                            series.color
                        );
                    }
                }
            }
        }
        let _ = writeln!(s, "</g>");

        let labelled: Vec<&Series> = self.series.iter().filter(|s| !s.label.is_empty()).collect();
        for (i, series) in labelled.iter().enumerate() {
            let ly = y1 + 14.0 + 16.0 * i as f64;
            let lx = x1 - 150.0;
            match series.style {
                Style::Markers => {
                    let _ = writeln!(
                        s,
                        r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{}"/>"#,
                        lx + 10.0,
                        ly - 4.0,
                        series.color
                    );
                }
                style => {
                    let dash = if style == Style::Dashed {
                        r#" stroke-dasharray="6 4""#
                    } else {
                        ""
                    };
                    let _ = writeln!(
                        s,
                        r#"<line x1="{lx}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{}" stroke-width="2"{dash}/>"#,
                        ly - 4.0,
                        lx + 20.0,
                        ly - 4.0,
                        series.color
                    );
                }
            }
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{ly:.2}">{}</text>"#,
                lx + 26.0,
                escape(&series.label)
            );
        }

        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
            0.5 * (x0 + x1),
            escape(&self.title)
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            0.5 * (x0 + x1),
            HEIGHT - 14.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
            0.5 * (y0 + y1),
            0.5 * (y0 + y1),
            escape(&self.y_label)
        );
        s.push_str("</svg>\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn steps_are_round() {
        assert_eq!(nice_step(10.0, 5.0), 2.0);
        assert_eq!(nice_step(0.7, 6.0), 0.1);
        assert_eq!(nice_step(3.0, 6.0), 0.5);
    }

    #[test]
    fn breaks_lines_at_gaps() {
        let plot = Plot {
            series: vec![Series::new(
                "a",
                vec![
                    (0.0, 0.0),
                    (1.0, 1.0),
                    (2.0, f64::NAN),
                    (3.0, 1.0),
                    (4.0, 0.0),
                ],
                Style::Line,
                PALETTE[0],
            )],
            ..Plot::default()
        };
        let svg = plot.render();
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn log_axis_drops_nonpositive() {
        let plot = Plot {
            log_y: true,
            series: vec![Series::new(
                "",
                vec![(1.0, 1e-3), (2.0, 0.0), (3.0, 1e-1)],
                Style::Markers,
                PALETTE[1],
            )],
            ..Plot::default()
        };
        assert_eq!(plot.render().matches("<circle").count(), 2);
    }

    #[test]
    fn escapes_text() {
        let plot = Plot {
            title: "a<b & c".into(),
            ..Plot::default()
        };
        assert!(plot.render().contains("a&lt;b &amp; c"));
    }
}
