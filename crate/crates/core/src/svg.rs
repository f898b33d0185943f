//! Minimal SVG serialization of computed polylines and markers.

use crate::geometry::EllipsoidSpec;
use std::f64::consts::PI;
use std::fmt::Write as _;

const SIZE: f64 = 480.0;
const PAD: f64 = 40.0;

/// World-to-pixel canvas with the `y` axis pointing up.
pub struct Canvas {
    lo: [f64; 2],
    hi: [f64; 2],
    body: String,
}

impl Canvas {
    pub fn new(lo: [f64; 2], hi: [f64; 2]) -> Self {
        Canvas { lo, hi, body: String::new() }
    }

    fn px(&self, p: [f64; 2]) -> (f64, f64) {
        let sx = (SIZE - 2.0 * PAD) / (self.hi[0] - self.lo[0]);
        let sy = (SIZE - 2.0 * PAD) / (self.hi[1] - self.lo[1]);
        (PAD + (p[0] - self.lo[0]) * sx, SIZE - PAD - (p[1] - self.lo[1]) * sy)
    }

    pub fn polyline(&mut self, pts: &[[f64; 2]], stroke: &str, dashed: bool) {
        let mut d = String::new();
        for &p in pts {
            let (x, y) = self.px(p);
            let _ = write!(d, "{x:.2},{y:.2} ");
        }
        let dash = if dashed { r#" stroke-dasharray="6 4""# } else { "" };
        let _ = writeln!(
            self.body,
            r#"<polyline points="{}" fill="none" stroke="{stroke}" stroke-width="1.5"{dash}/>"#,
            d.trim_end()
        );
    }

    pub fn marker(&mut self, p: [f64; 2], label: &str) {
        let (x, y) = self.px(p);
        let _ = writeln!(self.body, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3.5" fill="black"/>"#);
        let _ = writeln!(
            self.body,
            r#"<text x="{:.2}" y="{:.2}" font-size="14" font-family="sans-serif">{label}</text>"#,
            x + 6.0,
            y - 6.0
        );
    }

    pub fn text(&mut self, p: [f64; 2], s: &str) {
        let (x, y) = self.px(p);
        let _ = writeln!(
            self.body,
            r#"<text x="{x:.2}" y="{y:.2}" font-size="12" font-family="sans-serif">{s}</text>"#
        );
    }

    /// Axes through the lower-left corner with end labels.
    pub fn axes(&mut self, xlabel: &str, ylabel: &str) {
        let (l, h) = (self.lo, self.hi);
        self.polyline(&[[l[0], l[1]], [h[0], l[1]]], "gray", false);
        self.polyline(&[[l[0], l[1]], [l[0], h[1]]], "gray", false);
        self.text([h[0], l[1]], xlabel);
        self.text([l[0], h[1]], ylabel);
        self.text([l[0], l[1]], &format!("{:.4}", l[0]));
        self.text([h[0], l[1] - 0.04 * (h[1] - l[1])], &format!("{:.4}", h[0]));
        self.text([l[0], h[1] - 0.04 * (h[1] - l[1])], &format!("{:.4}", h[1]));
    }

    pub fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{}</svg>\n",
            self.body
        )
    }
}

fn closed_curve(f: impl Fn(f64) -> [f64; 2]) -> Vec<[f64; 2]> {
    (0..=256).map(|k| f(2.0 * PI * k as f64 / 256.0)).collect()
}

/// The two ellipses, the sphere `|x| = R⁺` and the points `X`, `Y`, `Z` in
/// the `(x₁, x₂)` plane.
pub fn witness_figure(
    outer: &EllipsoidSpec,
    inner: &EllipsoidSpec,
    r_plus: f64,
    points: Option<([f64; 2], [f64; 2], [f64; 2])>,
) -> String {
    let m = outer.major_semi_axis().max(r_plus) * 1.1;
    let mut c = Canvas::new([-m, -m], [m, m]);
    c.polyline(&closed_curve(|a| outer.surface_point(a)), "steelblue", false);
    c.polyline(&closed_curve(|a| inner.surface_point(a)), "darkorange", false);
    c.polyline(&closed_curve(|a| [r_plus * a.cos(), r_plus * a.sin()]), "black", true);
    if let Some((x, y, z)) = points {
        c.polyline(&[x, y], "gray", true);
        c.marker(x, "X");
        c.marker(y, "Y");
        c.marker(z, "Z");
    }
    c.finish()
}

/// `t = f(r)` through the given samples.
pub fn graph_plot(samples: &[(f64, f64)], xlabel: &str, ylabel: &str) -> String {
    let pts: Vec<[f64; 2]> = samples.iter().map(|&(a, b)| [a, b]).collect();
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in &pts {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    for k in 0..2 {
        if !(hi[k] > lo[k]) {
            hi[k] = lo[k] + 1.0;
        }
    }
    let mut c = Canvas::new(lo, hi);
    c.axes(xlabel, ylabel);
    c.polyline(&pts, "steelblue", false);
    c.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_is_well_formed() {
        let e = EllipsoidSpec::new(0.8, 1.5, 2).unwrap();
        let s = witness_figure(&e, &e, 1.6, Some(([1.6, 0.0], [0.0, 1.5], [0.8, 0.75])));
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
        assert_eq!(s.matches("<polyline").count(), 4);
        assert_eq!(s.matches("<circle").count(), 3);
    }
}
