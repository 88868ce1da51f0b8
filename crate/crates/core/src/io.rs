//! CSV and SVG artifacts.

use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::io::Write;

use num_complex::Complex64;

use crate::arcs::ArcSet;
use crate::error::{Error, Result};
use crate::range::RangeSample;
use crate::zero_sets::{Rect, ZeroCurve};

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::InvalidArgument(format!("csv: {:?}", other)),
    }
}

/// Writes `z_re,z_im,w_re,w_im` rows.
pub fn write_samples_csv<W: Write>(out: W, samples: &RangeSample) -> Result<()> {
    let mut wr = csv::Writer::from_writer(out);
    wr.write_record(["z_re", "z_im", "w_re", "w_im"]).map_err(csv_err)?;
    for p in &samples.points {
        wr.serialize((p.z.re, p.z.im, p.w.re, p.w.im)).map_err(csv_err)?;
    }
    wr.flush()?;
    Ok(())
}

/// Writes polylines as `curve,x,y` rows, one row per vertex.
pub fn write_curves_csv<W: Write>(out: W, curves: &[ZeroCurve]) -> Result<()> {
    let mut wr = csv::Writer::from_writer(out);
    wr.write_record(["curve", "x", "y"]).map_err(csv_err)?;
    for c in curves {
        for z in &c.points {
            wr.serialize((c.id, z.re, z.im)).map_err(csv_err)?;
        }
    }
    wr.flush()?;
    Ok(())
}

pub const VIEWPORT: f64 = 800.0;
/// Plot square inside the viewport; the direction ring sits outside it.
const PLOT_LO: f64 = 130.0;
const PLOT_HI: f64 = 670.0;
const RING_RADIUS: f64 = 385.0;
/// Scatter plots keep at most this many points.
pub const MAX_SCATTER: usize = 20_000;

#[derive(Debug, Clone, Copy)]
struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    /// Square frame covering the central quantile range of both coordinates.
    fn autoscale(pts: &[Complex64], q: f64) -> Frame {
        let quant = |mut v: Vec<f64>| -> (f64, f64) {
            v.retain(|x| x.is_finite());
            if v.is_empty() {
                return (-1.0, 1.0);
            }
            v.sort_by(f64::total_cmp);
            let at = |p: f64| v[((v.len() - 1) as f64 * p).round() as usize];
            (at(q), at(1.0 - q))
        };
        let (x0, x1) = quant(pts.iter().map(|p| p.re).collect());
        let (y0, y1) = quant(pts.iter().map(|p| p.im).collect());
        let (cx, cy) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
        let half = (0.5 * (x1 - x0).max(y1 - y0)).max(1e-9) * 1.05;
        Frame { x0: cx - half, x1: cx + half, y0: cy - half, y1: cy + half }
    }

    fn from_rect(r: Rect) -> Frame {
        let (c, half) = (r.center(), 0.5 * r.width().max(r.height()));
        Frame { x0: c.re - half, x1: c.re + half, y0: c.im - half, y1: c.im + half }
    }

    fn contains(&self, p: Complex64) -> bool {
        p.re >= self.x0 && p.re <= self.x1 && p.im >= self.y0 && p.im <= self.y1
    }

    fn px(&self, p: Complex64) -> (f64, f64) {
        let sx = (p.re - self.x0) / (self.x1 - self.x0);
        let sy = (p.im - self.y0) / (self.y1 - self.y0);
        (PLOT_LO + sx * (PLOT_HI - PLOT_LO), PLOT_HI - sy * (PLOT_HI - PLOT_LO))
    }
}

/// Round tick step giving roughly `n` intervals over `span`.
fn tick_step(span: f64, n: f64) -> f64 {
    let raw = span / n;
    let mag = 10f64.powf(raw.log10().floor());
    let r = raw / mag;
    let nice = if r < 1.5 {
        1.0
    } else if r < 3.0 {
        2.0
    } else if r < 7.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn fmt_tick(x: f64) -> String {
    let s = format!("{:.6}", x);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn header(s: &mut String, title: &str) {
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{v}" height="{v}" viewBox="0 0 {v} {v}" font-family="sans-serif" font-size="11">"#,
        v = VIEWPORT
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="400" y="16" text-anchor="middle" font-size="13">{}</text>"#, escape(title));
}

fn axes(s: &mut String, fr: &Frame, xlabel: &str, ylabel: &str) {
    let (lo, hi) = (PLOT_LO, PLOT_HI);
    let _ = writeln!(s, r#"<rect x="{lo}" y="{lo}" width="{w}" height="{w}" fill="none" stroke="black"/>"#, w = hi - lo);
    let step = tick_step(fr.x1 - fr.x0, 6.0);
    let mut t = (fr.x0 / step).ceil() * step;
    while t <= fr.x1 {
        let (x, _) = fr.px(Complex64::new(t, fr.y0));
        let _ = writeln!(s, r#"<line x1="{x:.2}" y1="{hi}" x2="{x:.2}" y2="{}" stroke="black"/>"#, hi + 5.0);
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{}" text-anchor="middle">{}</text>"#, hi + 17.0, fmt_tick(t));
        t += step;
    }
    let mut t = (fr.y0 / step).ceil() * step;
    while t <= fr.y1 {
        let (_, y) = fr.px(Complex64::new(fr.x0, t));
        let _ = writeln!(s, r#"<line x1="{}" y1="{y:.2}" x2="{lo}" y2="{y:.2}" stroke="black"/>"#, lo - 5.0);
        let _ = writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#, lo - 7.0, y + 4.0, fmt_tick(t));
        t += step;
    }
    // Coordinate axes through the origin when visible.
    if fr.x0 < 0.0 && fr.x1 > 0.0 {
        let (x, _) = fr.px(Complex64::new(0.0, 0.0));
        let _ = writeln!(s, r##"<line x1="{x:.2}" y1="{lo}" x2="{x:.2}" y2="{hi}" stroke="#bbb"/>"##);
    }
    if fr.y0 < 0.0 && fr.y1 > 0.0 {
        let (_, y) = fr.px(Complex64::new(0.0, 0.0));
        let _ = writeln!(s, r##"<line x1="{lo}" y1="{y:.2}" x2="{hi}" y2="{y:.2}" stroke="#bbb"/>"##);
    }
    let _ = writeln!(s, r#"<text x="400" y="{}" text-anchor="middle">{}</text>"#, hi + 34.0, escape(xlabel));
    let _ = writeln!(
        s,
        r#"<text x="{x}" y="400" text-anchor="middle" transform="rotate(-90 {x} 400)">{}</text>"#,
        escape(ylabel),
        x = lo - 45.0
    );
}

fn ring_point(theta: f64) -> (f64, f64) {
    (400.0 + RING_RADIUS * theta.cos(), 400.0 - RING_RADIUS * theta.sin())
}

/// Direction set drawn on a ring around the plot; angles are measured
/// counter-clockwise from the positive u axis.
fn direction_ring(s: &mut String, arcs: &ArcSet) {
    let _ = writeln!(s, r##"<circle cx="400" cy="400" r="{RING_RADIUS}" fill="none" stroke="#ddd" stroke-width="1"/>"##);
    for (lo, hi) in arcs.arcs() {
        let len = hi - lo;
        if len >= TAU - 1e-9 {
            let _ = writeln!(
                s,
                r##"<circle cx="400" cy="400" r="{RING_RADIUS}" fill="none" stroke="#c0392b" stroke-width="5"/>"##
            );
        } else if len < 1e-6 {
            let (x, y) = ring_point(lo);
            let _ = writeln!(s, r##"<circle cx="{x:.2}" cy="{y:.2}" r="5" fill="#c0392b"/>"##);
        } else {
            let (x0, y0) = ring_point(lo);
            let (x1, y1) = ring_point(hi);
            let large = if len > std::f64::consts::PI { 1 } else { 0 };
            // Counter-clockwise in data space is sweep-flag 0 in SVG space.
            let _ = writeln!(
                s,
                r##"<path d="M {x0:.2} {y0:.2} A {RING_RADIUS} {RING_RADIUS} 0 {large} 0 {x1:.2} {y1:.2}" fill="none" stroke="#c0392b" stroke-width="5"/>"##
            );
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Scatter plot of sampled values `w` with the direction set on an outer
/// ring. Axes autoscale to the central 98% of each coordinate.
pub fn range_svg(samples: &RangeSample, arcs: Option<&ArcSet>, title: &str) -> String {
    let ws: Vec<Complex64> = samples.points.iter().map(|p| p.w).collect();
    let fr = Frame::autoscale(&ws, 0.01);
    let stride = ws.len().div_ceil(MAX_SCATTER).max(1);
    let mut s = String::new();
    header(&mut s, title);
    axes(&mut s, &fr, "u", "v");
    let _ = writeln!(s, r##"<g fill="#2c3e50" fill-opacity="0.5">"##);
    for w in ws.iter().step_by(stride).filter(|w| fr.contains(**w)) {
        let (x, y) = fr.px(*w);
        let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="1.2"/>"#);
    }
    let _ = writeln!(s, "</g>");
    if let Some(a) = arcs {
        direction_ring(&mut s, a);
    }
    s.push_str("</svg>\n");
    s
}

/// Zero curves drawn as polylines over `rect`.
pub fn curves_svg(curves: &[ZeroCurve], rect: Rect, title: &str) -> String {
    let fr = Frame::from_rect(rect);
    let mut s = String::new();
    header(&mut s, title);
    axes(&mut s, &fr, "x", "y");
    for c in curves {
        let pts: Vec<String> = c
            .points
            .iter()
            .map(|z| {
                let (x, y) = fr.px(*z);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let tag = if c.closed { "polygon" } else { "polyline" };
        let _ = writeln!(s, r##"<{tag} points="{}" fill="none" stroke="#2980b9" stroke-width="1.5"/>"##, pts.join(" "));
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::range::sample_range;
    use crate::zero_sets::trace_zero_set;
    use crate::HarmonicMap;

    #[test]
    fn samples_csv_has_header_and_rows() {
        let f = HarmonicMap::parse("u=re(z); v=im(z)").unwrap();
        let s = sample_range(&f, 2.0, 64, 1).unwrap();
        let mut buf = Vec::new();
        write_samples_csv(&mut buf, &s).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("z_re,z_im,w_re,w_im"));
        assert_eq!(lines.count(), s.len());
    }

    #[test]
    fn svg_is_well_formed_and_sized() {
        let f = HarmonicMap::parse("u=re(z); v=im(exp(z))").unwrap();
        let s = sample_range(&f, 4.0, 64, 1).unwrap();
        let arcs = ArcSet::from_arcs([(-1.0, 1.0), (3.0, 3.0)]);
        let svg = range_svg(&s, Some(&arcs), "a < b");
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains(r#"width="800""#));
        assert!(svg.contains("a &lt; b"));
        assert!(svg.contains("<path"));
    }

    #[test]
    fn curves_round_trip_through_csv_and_svg() {
        let f = HarmonicMap::parse("u=re(z^2); v=im(z)").unwrap();
        let rect = Rect::new(-1.0, 1.0, -1.0, 1.0).unwrap();
        let curves = trace_zero_set(&f.u, rect, 0.05).unwrap();
        let mut buf = Vec::new();
        write_curves_csv(&mut buf, &curves).unwrap();
        let rows = String::from_utf8(buf).unwrap().lines().count() - 1;
        assert_eq!(rows, curves.iter().map(|c| c.points.len()).sum::<usize>());
        assert!(curves_svg(&curves, rect, "zeros").contains("<polyline"));
    }

    #[test]
    fn ticks_are_round() {
        assert_eq!(tick_step(10.0, 5.0), 2.0);
        assert_eq!(tick_step(0.7, 6.0), 0.1);
        assert_eq!(fmt_tick(-0.0), "0");
        assert_eq!(fmt_tick(2.5), "2.5");
    }
}
