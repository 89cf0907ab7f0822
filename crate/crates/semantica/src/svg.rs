//! Minimal hand-written SVG line charts.

use std::fmt::Write;

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    pub dashed: bool,
    /// Write the series name next to its last point.
    pub label_end: bool,
}

impl Series {
    pub fn new(name: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self { name: name.into(), points, dashed: false, label_end: false }
    }

    pub fn dashed(mut self) -> Self {
        self.dashed = true;
        self
    }

    pub fn labelled(mut self) -> Self {
        self.label_end = true;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    pub log_x: bool,
    pub legend: bool,
    pub width: f64,
    pub height: f64,
}

impl Chart {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Self {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            series: Vec::new(),
            log_x: false,
            legend: true,
            width: 640.0,
            height: 420.0,
        }
    }

    pub fn push(&mut self, s: Series) {
        self.series.push(s);
    }

    fn x_of(&self, x: f64) -> Option<f64> {
        if self.log_x {
            (x > 0.0).then(|| x.log10())
        } else {
            x.is_finite().then_some(x)
        }
    }

    fn bounds(&self) -> (f64, f64, f64, f64) {
        let mut b = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for s in &self.series {
            for &(x, y) in &s.points {
                if let (Some(x), true) = (self.x_of(x), y.is_finite()) {
                    b = (b.0.min(x), b.1.max(x), b.2.min(y), b.3.max(y));
                }
            }
        }
        if !b.0.is_finite() {
            return (0.0, 1.0, 0.0, 1.0);
        }
        let pad = |lo: f64, hi: f64| if hi - lo < 1e-12 { (lo - 0.5, hi + 0.5) } else { (lo, hi) };
        let (x0, x1) = pad(b.0, b.1);
        let (y0, y1) = pad(b.2, b.3);
        let dy = 0.05 * (y1 - y0);
        (x0, x1, y0 - dy, y1 + dy)
    }

    pub fn render(&self) -> String {
        let (w, h) = (self.width, self.height);
        let (left, right, top, bottom) = (70.0, 20.0, 40.0, 55.0);
        let (x0, x1, y0, y1) = self.bounds();
        let px = |x: f64| left + (x - x0) / (x1 - x0) * (w - left - right);
        let py = |y: f64| h - bottom - (y - y0) / (y1 - y0) * (h - top - bottom);
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
        let _ = writeln!(out, r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#, w / 2.0, esc(&self.title));
        // axes
        let _ = writeln!(
            out,
            r#"<path d="M{l} {t} V{b} H{r}" stroke="black" fill="none"/>"#,
            l = left,
            t = top,
            b = h - bottom,
            r = w - right
        );
        for v in ticks(x0, x1) {
            let x = px(v);
            let label = if self.log_x { format!("1e{}", v.round()) } else { tick_label(v) };
            let _ = writeln!(out, r#"<line x1="{x:.2}" y1="{}" x2="{x:.2}" y2="{}" stroke="black"/>"#, h - bottom, h - bottom + 5.0);
            let _ = writeln!(out, r#"<text x="{x:.2}" y="{}" text-anchor="middle">{label}</text>"#, h - bottom + 18.0);
        }
        for v in ticks(y0, y1) {
            let y = py(v);
            let _ = writeln!(out, r#"<line x1="{}" y1="{y:.2}" x2="{left}" y2="{y:.2}" stroke="black"/>"#, left - 5.0);
            let _ = writeln!(out, r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#, left - 8.0, y + 4.0, tick_label(v));
        }
        let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, (left + w - right) / 2.0, h - 12.0, esc(&self.x_label));
        let _ = writeln!(
            out,
            r#"<text x="18" y="{y}" text-anchor="middle" transform="rotate(-90 18 {y})">{}</text>"#,
            esc(&self.y_label),
            y = (top + h - bottom) / 2.0
        );
        for (k, s) in self.series.iter().enumerate() {
            let color = PALETTE[k % PALETTE.len()];
            let dash = if s.dashed { r#" stroke-dasharray="6 4""# } else { "" };
            let mut d = String::new();
            let mut pen_down = false;
            let mut last = None;
            for &(x, y) in &s.points {
                match (self.x_of(x), y.is_finite()) {
                    (Some(x), true) => {
                        let _ = write!(d, "{}{:.2} {:.2} ", if pen_down { "L" } else { "M" }, px(x), py(y));
                        pen_down = true;
                        last = Some((px(x), py(y)));
                    }
                    _ => pen_down = false,
                }
            }
            if !d.is_empty() {
                let _ = writeln!(out, r#"<path d="{}" stroke="{color}" stroke-width="1.8" fill="none"{dash}/>"#, d.trim_end());
            }
            if let (true, Some((x, y))) = (s.label_end, last) {
                let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="{color}"/>"#);
                let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" fill="{color}">{}</text>"#, x + 5.0, y - 5.0, esc(&s.name));
            }
        }
        if self.legend {
            for (k, s) in self.series.iter().enumerate() {
                let color = PALETTE[k % PALETTE.len()];
                let y = top + 8.0 + 16.0 * k as f64;
                let x = w - right - 150.0;
                let dash = if s.dashed { r#" stroke-dasharray="6 4""# } else { "" };
                let _ = writeln!(out, r#"<line x1="{x}" y1="{y}" x2="{}" y2="{y}" stroke="{color}" stroke-width="2"{dash}/>"#, x + 22.0);
                let _ = writeln!(out, r#"<text x="{}" y="{}">{}</text>"#, x + 28.0, y + 4.0, esc(&s.name));
            }
        }
        out.push_str("</svg>\n");
        out
    }
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn tick_label(v: f64) -> String {
    let s = format!("{:.4}", v);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

/// Round-number ticks covering `[lo, hi]`.
fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let raw = (hi - lo) / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
    let mut v = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while v <= hi + 1e-9 * step && out.len() < 20 {
        out.push(if v.abs() < 1e-12 * step { 0.0 } else { v });
        v += step;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ticks_are_round() {
        assert_eq!(ticks(0.0, 1.0), vec![0.0, 0.2, 0.4, 0.6000000000000001, 0.8, 1.0]);
        assert_eq!(ticks(0.0, 10.0).len(), 6);
    }

    #[test]
    fn renders_valid_looking_svg() {
        let mut c = Chart::new("a < b", "t", "y");
        c.push(Series::new("one", vec![(0.0, 0.0), (1.0, 1.0), (2.0, f64::NAN), (3.0, 0.5)]).labelled());
        c.push(Series::new("two", vec![(0.0, 1.0), (3.0, 0.0)]).dashed());
        let s = c.render();
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
        assert!(s.contains("a &lt; b"));
        // the NaN splits the first polyline into two pieces
        assert!(s.matches("M").count() >= 4);
        assert!(s.contains("stroke-dasharray"));
    }

    #[test]
    fn log_axis_drops_non_positive_x() {
        let mut c = Chart::new("log", "x", "y");
        c.log_x = true;
        c.push(Series::new("s", vec![(0.0, 1.0), (1.0, 2.0), (100.0, 3.0)]));
        let s = c.render();
        assert!(s.contains("1e0") && s.contains("1e2"));
    }
}
