//! Zero curves, local zero structure, tracts and linear dependence.

use std::collections::HashMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circle::{circle_max_abs, multiplicity, periodic_sign_changes};
use crate::error::{Error, Result};
use crate::expr::{HarmonicComponent, HarmonicMap};
use crate::range::RangeSample;
use crate::verdict::{Check, TheoremId, TheoremVerdict, Witness};

/// Axis-aligned closed rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        if !(x0 < x1 && y0 < y1) || ![x0, x1, y0, y1].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidArgument(format!("empty or invalid box [{x0},{x1}]x[{y0},{y1}]")));
        }
        Ok(Self { x0, x1, y0, y1 })
    }

    /// Square `[-h, h]²` around `c`.
    pub fn around(c: Complex64, h: f64) -> Self {
        Self { x0: c.re - h, x1: c.re + h, y0: c.im - h, y1: c.im + h }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.x0 && z.re <= self.x1 && z.im >= self.y0 && z.im <= self.y1
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    /// Parses `x0,x1,y0,y1`.
    pub fn parse(src: &str) -> Result<Self> {
        let parts: Vec<f64> = src
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::InvalidArgument(format!("box '{src}': {e}")))?;
        if parts.len() != 4 {
            return Err(Error::InvalidArgument(format!("box '{src}' needs four numbers x0,x1,y0,y1")));
        }
        Rect::new(parts[0], parts[1], parts[2], parts[3])
    }
}

/// Nodes of an `(nx+1)×(ny+1)` grid on `rect`, row-major in `y`.
pub(crate) struct Grid {
    pub rect: Rect,
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<f64>,
}

impl Grid {
    pub fn sample(u: &HarmonicComponent, rect: Rect, nx: usize, ny: usize) -> Self {
        let values = (0..=ny)
            .into_par_iter()
            .flat_map_iter(|j| (0..=nx).map(move |i| (i, j)))
            .map(|(i, j)| u.eval(Self::node_of(&rect, nx, ny, i, j)))
            .collect();
        Self { rect, nx, ny, values }
    }

    fn node_of(rect: &Rect, nx: usize, ny: usize, i: usize, j: usize) -> Complex64 {
        Complex64::new(
            rect.x0 + rect.width() * i as f64 / nx as f64,
            rect.y0 + rect.height() * j as f64 / ny as f64,
        )
    }

    pub fn node(&self, i: usize, j: usize) -> Complex64 {
        Self::node_of(&self.rect, self.nx, self.ny, i, j)
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * (self.nx + 1) + i]
    }

    /// Grid edges whose endpoint values change sign (or touch zero), in
    /// scan order: horizontal edges of each row, then vertical ones.
    pub fn sign_change_edges(&self) -> Vec<((usize, usize), (usize, usize))> {
        let mut out = Vec::new();
        let crosses = |a: f64, b: f64| a == 0.0 || (b != 0.0 && (a < 0.0) != (b < 0.0));
        for j in 0..=self.ny {
            for i in 0..=self.nx {
                let a = self.value(i, j);
                if i < self.nx && crosses(a, self.value(i + 1, j)) {
                    out.push(((i, j), (i + 1, j)));
                }
                if j < self.ny && crosses(a, self.value(i, j + 1)) {
                    out.push(((i, j), (i, j + 1)));
                }
            }
        }
        out
    }
}

/// Bisection on the segment `[a, b]` where `u(a)` and `u(b)` differ in sign.
pub(crate) fn bisect_segment(u: &HarmonicComponent, a: Complex64, b: Complex64) -> Complex64 {
    let (mut lo, mut hi) = (a, b);
    let mut ulo = u.eval(lo);
    if ulo == 0.0 {
        return lo;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let m = u.eval(mid);
        if m == 0.0 {
            return mid;
        }
        if (m < 0.0) == (ulo < 0.0) {
            lo = mid;
            ulo = m;
        } else {
            hi = mid;
        }
    }
    if u.eval(lo).abs() <= u.eval(hi).abs() {
        lo
    } else {
        hi
    }
}

/// Newton projection onto `{u = 0}`: `z ← z - u ∇u / |∇u|²`, with each step
/// capped at `max_step`. Returns the best point visited.
pub(crate) fn newton_project(u: &HarmonicComponent, z: Complex64, max_step: f64, iters: usize) -> Complex64 {
    let mut cur = z;
    let mut best = (z, u.eval(z).abs());
    for _ in 0..iters {
        let val = u.eval(cur);
        if val == 0.0 {
            return cur;
        }
        let (gx, gy) = u.gradient(cur);
        let g2 = gx * gx + gy * gy;
        if !(g2 > 0.0) || !g2.is_finite() {
            break;
        }
        let mut d = Complex64::new(gx, gy) * (-val / g2);
        let len = d.norm();
        if len > max_step {
            d *= max_step / len;
        }
        cur += d;
        let a = u.eval(cur).abs();
        if !a.is_finite() {
            break;
        }
        if a < best.1 {
            best = (cur, a);
        }
        if len <= 1e-16 * (1.0 + cur.norm()) {
            break;
        }
    }
    best.0
}

// ---------------------------------------------------------------------------
// Tracing

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroCurve {
    pub id: usize,
    pub points: Vec<Complex64>,
    pub length: f64,
    pub closed: bool,
}

/// Spatial hash over traced vertices, cell size `cell`.
struct VertexIndex {
    cell: f64,
    buckets: HashMap<(i64, i64), Vec<Complex64>>,
}

impl VertexIndex {
    fn new(cell: f64) -> Self {
        Self { cell, buckets: HashMap::new() }
    }

    fn key(&self, z: Complex64) -> (i64, i64) {
        ((z.re / self.cell).floor() as i64, (z.im / self.cell).floor() as i64)
    }

    fn insert(&mut self, z: Complex64) {
        let k = self.key(z);
        self.buckets.entry(k).or_default().push(z);
    }

    fn near(&self, z: Complex64, dist: f64) -> bool {
        let (kx, ky) = self.key(z);
        let reach = (dist / self.cell).ceil() as i64;
        for dx in -reach..=reach {
            for dy in -reach..=reach {
                if let Some(b) = self.buckets.get(&(kx + dx, ky + dy)) {
                    if b.iter().any(|p| (p - z).norm() <= dist) {
                        return true;
                    }
                }
            }
        }
        false
    }
}

fn unit_tangent(u: &HarmonicComponent, z: Complex64) -> Option<Complex64> {
    let (gx, gy) = u.gradient(z);
    let t = Complex64::new(-gy, gx);
    let n = t.norm();
    (n > 0.0 && n.is_finite()).then(|| t / n)
}

/// Zero tolerance at `z` for a march with step `h`: `|u|` relative to the
/// variation of `u` over one step.
fn zero_tol(u: &HarmonicComponent, z: Complex64, h: f64) -> f64 {
    let (gx, gy) = u.gradient(z);
    1e-8 * (gx.hypot(gy) * h).max(f64::MIN_POSITIVE)
}

fn march(
    u: &HarmonicComponent,
    rect: &Rect,
    start: Complex64,
    dir: Complex64,
    h: f64,
    max_steps: usize,
    skip_closure: bool,
) -> (Vec<Complex64>, bool) {
    let mut pts = Vec::new();
    let mut z = start;
    let mut t = dir;
    for step in 0..max_steps {
        let pred = z + t * h;
        let next = newton_project(u, pred, 0.5 * h, 12);
        if !rect.contains(next) || u.eval(next).abs() > zero_tol(u, next, h).max(1e-6 * u.eval(pred).abs()) {
            break;
        }
        let moved = next - z;
        if moved.norm() < 0.25 * h {
            break;
        }
        // keep orientation; at critical points the previous tangent carries on
        let new_t = unit_tangent(u, next)
            .map(|nt| if nt.re * t.re + nt.im * t.im < 0.0 { -nt } else { nt })
            .unwrap_or(t);
        pts.push(next);
        if !skip_closure && step >= 3 && (next - start).norm() < 0.9 * h {
            return (pts, true);
        }
        z = next;
        t = new_t;
    }
    (pts, false)
}

/// Traces `{u = 0} ∩ box` with marching step `step`.
///
/// Seeds are the sign changes of `u` on a grid of cell size `2·step`; each
/// seed not already within `1.5·step` of a traced curve is followed in both
/// directions until the curve leaves the box or closes up.
pub fn trace_zero_set(u: &HarmonicComponent, rect: Rect, step: f64) -> Result<Vec<ZeroCurve>> {
    if !(step > 0.0) {
        return Err(Error::InvalidArgument(format!("step must be positive, got {step}")));
    }
    let cell = 2.0 * step;
    let nx = ((rect.width() / cell).ceil() as usize).max(2);
    let ny = ((rect.height() / cell).ceil() as usize).max(2);
    if nx.saturating_mul(ny) > 25_000_000 {
        return Err(Error::InvalidArgument("step too small for this box".into()));
    }
    let grid = Grid::sample(u, rect, nx, ny);
    let seeds: Vec<Complex64> = grid
        .sign_change_edges()
        .into_iter()
        .map(|(a, b)| {
            let z = bisect_segment(u, grid.node(a.0, a.1), grid.node(b.0, b.1));
            newton_project(u, z, 0.5 * step, 8)
        })
        .filter(|z| rect.contains(*z))
        .collect();

    let max_steps = (20.0 * (rect.width() + rect.height()) / step) as usize + 1000;
    let mut index = VertexIndex::new(step);
    let mut curves: Vec<ZeroCurve> = Vec::new();
    for seed in seeds {
        if index.near(seed, 1.5 * step) {
            continue;
        }
        let Some(t) = unit_tangent(u, seed) else { continue };
        let (fwd, closed) = march(u, &rect, seed, t, step, max_steps, false);
        let mut points: Vec<Complex64> = Vec::new();
        if !closed {
            let (back, _) = march(u, &rect, seed, -t, step, max_steps, true);
            points.extend(back.into_iter().rev());
        }
        points.push(seed);
        points.extend(fwd);
        if points.len() < 2 {
            // isolated zero or a curve shorter than one step
            index.insert(seed);
            continue;
        }
        for &p in &points {
            index.insert(p);
        }
        let mut length: f64 = points.windows(2).map(|w| (w[1] - w[0]).norm()).sum();
        if closed {
            length += (points[0] - points[points.len() - 1]).norm();
        }
        curves.push(ZeroCurve { id: curves.len(), points, length, closed });
    }
    Ok(merge_duplicates(curves, step))
}

/// Drops curves lying entirely within `1.5·step` of a longer curve.
fn merge_duplicates(mut curves: Vec<ZeroCurve>, step: f64) -> Vec<ZeroCurve> {
    let mut order: Vec<usize> = (0..curves.len()).collect();
    order.sort_by(|&a, &b| curves[b].length.partial_cmp(&curves[a].length).unwrap().then(a.cmp(&b)));
    let mut keep = vec![false; curves.len()];
    let mut index = VertexIndex::new(step);
    for &k in &order {
        if curves[k].points.iter().all(|&p| index.near(p, 1.5 * step)) {
            continue;
        }
        keep[k] = true;
        for &p in &curves[k].points {
            index.insert(p);
        }
    }
    let mut out: Vec<ZeroCurve> = curves.drain(..).zip(keep).filter(|(_, k)| *k).map(|(c, _)| c).collect();
    for (i, c) in out.iter_mut().enumerate() {
        c.id = i;
    }
    out
}

// ---------------------------------------------------------------------------
// Local structure

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalStructure {
    pub center: Complex64,
    pub multiplicity: usize,
    /// Radius of the circle on which the rays were located.
    pub radius: f64,
    /// Angles in `[0, 2π)` where the zero set crosses that circle.
    pub ray_angles: Vec<f64>,
    /// Sign of `u` on each sector, counter-clockwise, starting with the
    /// sector that ends at the first ray.
    pub sector_signs: Vec<i8>,
}

pub const LOCAL_RADIUS: f64 = 0.5;
const LOCAL_TOL: f64 = 1e-6;

/// Multiplicity, zero rays and sector signs of `u` at a zero `z0`.
pub fn local_structure(u: &HarmonicComponent, z0: Complex64) -> Result<LocalStructure> {
    local_structure_at(u, z0, LOCAL_RADIUS)
}

pub fn local_structure_at(u: &HarmonicComponent, z0: Complex64, radius: f64) -> Result<LocalStructure> {
    if u.is_constant() {
        return Err(Error::Degenerate("u is constant".into()));
    }
    let m = multiplicity(u, z0, radius, LOCAL_TOL)?;
    let n = m.order;
    let mut r = m.radius;
    for _ in 0..12 {
        let rays = periodic_sign_changes(|t| u.eval(z0 + Complex64::from_polar(r, t)), 4096);
        if rays.len() == 2 * n {
            let signs = (0..rays.len())
                .map(|k| {
                    let prev = if k == 0 { rays[rays.len() - 1] - TAU } else { rays[k - 1] };
                    let mid = 0.5 * (prev + rays[k]);
                    if u.eval(z0 + Complex64::from_polar(r, mid)) >= 0.0 {
                        1
                    } else {
                        -1
                    }
                })
                .collect();
            return Ok(LocalStructure { center: z0, multiplicity: n, radius: r, ray_angles: rays, sector_signs: signs });
        }
        r /= 2.0;
    }
    Err(Error::Degenerate(format!("could not resolve {} zero rays near {}+{}i", 2 * n, z0.re, z0.im)))
}

// ---------------------------------------------------------------------------
// Cleaning-lemma predicates

/// A pair of real functions `(U, V)` on a disc, with gradients.
pub trait PlanarPair: Sync {
    fn u_at(&self, z: Complex64) -> f64;
    fn v_at(&self, z: Complex64) -> f64;
    fn u_grad(&self, z: Complex64) -> (f64, f64);
    fn v_grad(&self, z: Complex64) -> (f64, f64);
}

impl PlanarPair for HarmonicMap {
    fn u_at(&self, z: Complex64) -> f64 {
        self.u.eval(z)
    }
    fn v_at(&self, z: Complex64) -> f64 {
        self.v.eval(z)
    }
    fn u_grad(&self, z: Complex64) -> (f64, f64) {
        self.u.gradient(z)
    }
    fn v_grad(&self, z: Complex64) -> (f64, f64) {
        self.v.gradient(z)
    }
}

/// First-order distance from `z` to the zero set: `|g| / |∇g|`.
fn zero_distance(val: f64, grad: (f64, f64)) -> f64 {
    if val == 0.0 {
        return 0.0;
    }
    let g = grad.0.hypot(grad.1);
    if g > 0.0 {
        val.abs() / g
    } else {
        f64::INFINITY
    }
}

pub const CLEANING_GRID: usize = 201;

/// Checks on a grid in `D(0, r)` that `{U = 0}` and `{V = 0}` coincide (at
/// grid resolution) and that `UV` keeps one sign.
pub fn cleaning_check<P: PlanarPair + ?Sized>(pair: &P, r: f64, tol: f64) -> Result<TheoremVerdict> {
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {r}")));
    }
    let n = CLEANING_GRID;
    let h = 2.0 * r / (n - 1) as f64;
    let pts: Vec<Complex64> = (0..n)
        .flat_map(|j| (0..n).map(move |i| Complex64::new(-r + i as f64 * h, -r + j as f64 * h)))
        .filter(|z| z.norm() < r)
        .collect();
    let vals: Vec<(f64, f64)> = pts.par_iter().map(|&z| (pair.u_at(z), pair.v_at(z))).collect();
    let su = vals.iter().fold(0.0f64, |m, v| m.max(v.0.abs()));
    let sv = vals.iter().fold(0.0f64, |m, v| m.max(v.1.abs()));

    let origin = Complex64::new(0.0, 0.0);
    let (u0, v0) = (pair.u_at(origin), pair.v_at(origin));
    let mut hyp = Vec::new();
    if u0.abs() > tol * su.max(1e-300) {
        hyp.push(Witness::at(origin, Complex64::new(u0, v0), "U(0) is not zero"));
    }
    if v0.abs() > tol * sv.max(1e-300) {
        hyp.push(Witness::at(origin, Complex64::new(u0, v0), "V(0) is not zero"));
    }

    let mut concl = Vec::new();
    let (mut pos, mut neg) = (0usize, 0usize);
    let (mut pos_w, mut neg_w) = (None, None);
    for (&z, &(uv, vv)) in pts.iter().zip(&vals) {
        let du = zero_distance(uv, pair.u_grad(z));
        let dv = zero_distance(vv, pair.v_grad(z));
        if du <= 0.5 * h && dv > 2.0 * h {
            concl.push(
                Witness::at(z, Complex64::new(uv, vv), "on {U = 0} but away from {V = 0}")
                    .with("dist_u", du)
                    .with("dist_v", dv),
            );
        } else if dv <= 0.5 * h && du > 2.0 * h {
            concl.push(
                Witness::at(z, Complex64::new(uv, vv), "on {V = 0} but away from {U = 0}")
                    .with("dist_u", du)
                    .with("dist_v", dv),
            );
        }
        let prod = uv * vv;
        let thresh = tol * su * sv;
        if prod > thresh {
            pos += 1;
            pos_w.get_or_insert((z, uv, vv));
        } else if prod < -thresh {
            neg += 1;
            neg_w.get_or_insert((z, uv, vv));
        }
    }
    let coincide = concl.is_empty();
    if pos > 0 && neg > 0 {
        for (z, a, b) in [pos_w.unwrap(), neg_w.unwrap()] {
            concl.push(Witness::at(z, Complex64::new(a, b), "UV changes sign").with("uv", a * b));
        }
    }
    let sign = match (pos, neg) {
        (_, 0) => "uv_nonnegative",
        (0, _) => "uv_nonpositive",
        _ => "mixed",
    };
    let mut verdict = TheoremVerdict::new(TheoremId::Cleaning, Check::from_violations(hyp), Check::from_violations(concl))
        .param("r", r)
        .param("tol", tol)
        .param("zero_sets_coincide", coincide)
        .param("sign", sign)
        .sampled("grid", format!("{n}x{n} uniform, restricted to the open disc"))
        .sampled("points", pts.len())
        .noted("only U(0) = V(0) = 0 is checked; whether (U, V) arises as a limit of normalized rescaled maps is not evaluated");
    verdict.applicable = false;
    Ok(verdict)
}

// ---------------------------------------------------------------------------
// Tracts

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TractReport {
    pub degree: usize,
    pub radius: f64,
    pub sign_changes: usize,
    pub sign_changes_at_2r: usize,
    /// Components of `{u ≠ 0}` outside the disc, read off the sign changes.
    pub components: usize,
    pub ray_angles: Vec<f64>,
}

pub const TRACT_SAMPLES: usize = 8192;

fn sign_changes_on(u: &HarmonicComponent, r: f64) -> Vec<f64> {
    periodic_sign_changes(|t| u.eval(Complex64::from_polar(r, t)), TRACT_SAMPLES)
}

/// Sign changes of a harmonic polynomial on `|z| = R`, confirmed on `|z| = 2R`.
pub fn tract_report(u: &HarmonicComponent, radius: f64) -> Result<TractReport> {
    let degree = u
        .polynomial_degree()
        .ok_or_else(|| Error::NotPolynomial(format!("{u} is not a harmonic polynomial")))?;
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
    }
    let rays = sign_changes_on(u, radius);
    let at_2r = sign_changes_on(u, 2.0 * radius).len();
    if rays.len() != at_2r {
        return Err(Error::RadiusTooSmall { r: radius, count_r: rays.len(), count_2r: at_2r });
    }
    Ok(TractReport {
        degree,
        radius,
        sign_changes: rays.len(),
        sign_changes_at_2r: at_2r,
        components: rays.len(),
        ray_angles: rays,
    })
}

/// Doubles `R` (at most 40 times) until the count is stable.
pub fn tract_report_stabilized(u: &HarmonicComponent, radius: f64) -> Result<TractReport> {
    let mut r = radius;
    let mut last = None;
    for _ in 0..40 {
        match tract_report(u, r) {
            Ok(rep) => return Ok(rep),
            Err(e @ Error::RadiusTooSmall { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
        r *= 2.0;
    }
    Err(last.unwrap_or(Error::InsufficientData("no stable radius".into())))
}

// ---------------------------------------------------------------------------
// Dependence

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DependenceReport {
    pub b: f64,
    /// `sup |u - b v| / sup |u|` over samples with `|z| > R`.
    pub residual: f64,
    pub dependent: bool,
    pub bound_a: f64,
    pub radius: f64,
    /// Whether `|u| ≤ a|v|` held on every sample with `|z| > R`.
    pub cone_hypothesis: bool,
    pub violations: usize,
    pub witnesses: Vec<Witness>,
    pub uv_nonnegative: bool,
    pub samples_used: usize,
}

pub const DEPENDENCE_TOL: f64 = 1e-6;

/// Fits `u ≈ b v` by least squares over samples outside `D(0, R)` and checks
/// the cone condition `|u| ≤ a|v|` there.
pub fn detect_dependence(f: &HarmonicMap, samples: &RangeSample, a: f64, radius: f64) -> Result<DependenceReport> {
    let outer: Vec<_> = samples.points.iter().filter(|p| p.z.norm() > radius && p.w.re.is_finite() && p.w.im.is_finite()).collect();
    if outer.is_empty() {
        return Err(Error::InsufficientData(format!("no samples with |z| > {radius}")));
    }
    let (mut suv, mut svv) = (0.0, 0.0);
    let mut umax = 0.0f64;
    let mut violations = 0;
    let mut witnesses = Vec::new();
    let mut uv_nonnegative = true;
    for p in &outer {
        let (u, v) = (p.w.re, p.w.im);
        suv += u * v;
        svv += v * v;
        umax = umax.max(u.abs());
        if u * v < 0.0 {
            uv_nonnegative = false;
        }
        if u.abs() > a * v.abs() * (1.0 + 1e-9) + 1e-300 {
            violations += 1;
            if witnesses.len() < crate::verdict::MAX_WITNESSES {
                witnesses.push(Witness::at(p.z, p.w, "|u| > a|v|").with("u", u).with("v", v));
            }
        }
    }
    if svv == 0.0 {
        return Err(Error::Degenerate("v vanishes on every sample outside the disc".into()));
    }
    let b = suv / svv;
    // re-evaluate from the map so the residual does not depend on stored values
    let res = outer
        .iter()
        .map(|p| {
            let w = f.eval(p.z);
            (w.re - b * w.im).abs()
        })
        .fold(0.0, f64::max);
    let residual = if umax > 0.0 { res / umax } else { 0.0 };
    Ok(DependenceReport {
        b,
        residual,
        dependent: residual <= DEPENDENCE_TOL,
        bound_a: a,
        radius,
        cone_hypothesis: violations == 0,
        violations,
        witnesses,
        uv_nonnegative,
        samples_used: outer.len(),
    })
}

/// `M(|u|, z, r)`; convenience for scale-aware zero thresholds.
pub fn local_scale(u: &HarmonicComponent, z: Complex64, r: f64) -> f64 {
    circle_max_abs(u, z, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn comp(s: &str) -> HarmonicComponent {
        HarmonicComponent::parse(s).unwrap()
    }

    #[test]
    fn traces_vertical_line() {
        let u = comp("re(z)");
        let curves = trace_zero_set(&u, Rect::new(-1.0, 1.0, -1.0, 1.0).unwrap(), 0.01).unwrap();
        assert_eq!(curves.len(), 1);
        let c = &curves[0];
        assert!(c.points.iter().all(|p| p.re.abs() < 1e-12));
        assert!(c.length > 1.95, "{}", c.length);
    }

    #[test]
    fn traces_diagonals_of_re_z2() {
        let u = comp("re(z^2)");
        let curves = trace_zero_set(&u, Rect::new(-1.0, 1.0, -1.0, 1.0).unwrap(), 0.01).unwrap();
        for c in &curves {
            for p in &c.points {
                assert!((p.re.abs() - p.im.abs()).abs() < 1e-9, "{p}");
            }
        }
        // both diagonals are covered, far from the crossing
        for target in [Complex64::new(0.7, 0.7), Complex64::new(-0.7, 0.7), Complex64::new(0.7, -0.7), Complex64::new(-0.7, -0.7)] {
            assert!(curves.iter().any(|c| c.points.iter().any(|p| (p - target).norm() < 0.02)), "{target}");
        }
    }

    #[test]
    fn traces_horizontal_lines_of_im_exp() {
        let u = HarmonicComponent::im(Expr::exp(Expr::z()));
        let curves = trace_zero_set(&u, Rect::new(-1.0, 1.0, -4.0, 4.0).unwrap(), 0.01).unwrap();
        assert_eq!(curves.len(), 3);
        let mut levels: Vec<f64> = curves.iter().map(|c| c.points[0].im).collect();
        levels.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (l, e) in levels.iter().zip([-PI, 0.0, PI]) {
            assert!((l - e).abs() < 1e-10);
        }
    }

    #[test]
    fn local_structure_of_re_z3() {
        let s = local_structure(&comp("re(z^3)"), Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(s.multiplicity, 3);
        assert_eq!(s.ray_angles.len(), 6);
        for (k, a) in s.ray_angles.iter().enumerate() {
            assert!((a - (PI / 6.0 + k as f64 * PI / 3.0)).abs() < 1e-6);
        }
        for w in s.sector_signs.windows(2) {
            assert_eq!(w[0], -w[1]);
        }
    }

    #[test]
    fn local_structure_of_re_z_and_im_exp() {
        let s = local_structure(&comp("re(z)"), Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(s.multiplicity, 1);
        assert_eq!(s.sector_signs, vec![1, -1]);
        assert!((s.ray_angles[0] - FRAC_PI_2).abs() < 1e-9);
        let s = local_structure(&comp("im(exp(z))"), Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(s.multiplicity, 1);
        assert!(s.ray_angles[0].abs() < 1e-9 && (s.ray_angles[1] - PI).abs() < 1e-9);
    }

    #[test]
    fn cleaning_examples() {
        let pair = HarmonicMap::parse("u=re(z); v=re(2*z)").unwrap();
        let v = cleaning_check(&pair, 1.0, 1e-9).unwrap();
        assert!(v.conclusion.holds && v.params["sign"] == "uv_nonnegative");
        let pair = HarmonicMap::parse("u=re(z); v=im(z)").unwrap();
        let v = cleaning_check(&pair, 1.0, 1e-9).unwrap();
        assert!(!v.conclusion.holds && !v.conclusion.witnesses.is_empty());
        let pair = HarmonicMap::parse("u=re(z^2); v=re(-3*z^2)").unwrap();
        let v = cleaning_check(&pair, 1.0, 1e-9).unwrap();
        assert!(v.conclusion.holds && v.params["sign"] == "uv_nonpositive");
    }

    #[test]
    fn tract_examples() {
        let r = tract_report(&comp("re(z^3)"), 10.0).unwrap();
        assert_eq!((r.sign_changes, r.degree), (6, 3));
        let r = tract_report(&comp("re(z^2 + 5*z)"), 100.0).unwrap();
        assert_eq!(r.sign_changes, 4);
        assert_eq!(tract_report(&comp("re(z)"), 1.0).unwrap().sign_changes, 2);
        assert!(matches!(tract_report(&comp("re(exp(z))"), 1.0), Err(Error::NotPolynomial(_))));
    }

    #[test]
    fn tract_rays_of_re_z2_are_diagonal() {
        let r = tract_report(&comp("re(z^2)"), 3.0).unwrap();
        for (k, a) in r.ray_angles.iter().enumerate() {
            assert!((a - (FRAC_PI_4 + k as f64 * FRAC_PI_2)).abs() < 1e-9);
        }
    }

    #[test]
    fn dependence_examples() {
        let f = HarmonicMap::parse("u=re(z); v=re(3*z)").unwrap();
        let s = crate::range::sample_range(&f, 10.0, 64, 1).unwrap();
        let d = detect_dependence(&f, &s, 1.0, 1.0).unwrap();
        assert!(d.dependent && d.cone_hypothesis);
        assert!((d.b - 1.0 / 3.0).abs() < 1e-12);

        let f = HarmonicMap::parse("u=re(z^2); v=im(z^2)").unwrap();
        let s = crate::range::sample_range(&f, 10.0, 64, 1).unwrap();
        let d = detect_dependence(&f, &s, 1.0, 1.0).unwrap();
        assert!(!d.cone_hypothesis && !d.dependent && !d.witnesses.is_empty());
    }
}
