//! Hypothesis/conclusion checkers for the main statements.
//!
//! Each checker evaluates a theorem's hypothesis and its conclusion on a
//! finite sample and reports both; it never claims the statement beyond the
//! sampled disc. Exact constancy is replaced by the proxy
//! `oscillation ≤ 1e-9 (1 + max |value|)`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arcs::ArcSet;
use crate::error::{Error, Result};
use crate::expr::HarmonicMap;
use crate::range::{antipodal_pairs, DirectionEstimate, RangeSample};
use crate::verdict::{Check, TheoremId, TheoremVerdict, Witness, MAX_WITNESSES};
use crate::zero_sets::detect_dependence;

pub const CONSTANCY_TOL: f64 = 1e-9;

/// Oscillation test on a list of `(z, value)`; on failure the witness pair
/// is the argmin and argmax.
pub fn constancy(values: impl IntoIterator<Item = (Complex64, f64)>, label: &str) -> Check {
    let mut lo: Option<(Complex64, f64)> = None;
    let mut hi: Option<(Complex64, f64)> = None;
    for (z, x) in values {
        if !x.is_finite() {
            continue;
        }
        if lo.map_or(true, |(_, l)| x < l) {
            lo = Some((z, x));
        }
        if hi.map_or(true, |(_, h)| x > h) {
            hi = Some((z, x));
        }
    }
    let (Some((zl, l)), Some((zh, h))) = (lo, hi) else {
        return Check::pass();
    };
    let scale = 1.0 + l.abs().max(h.abs());
    if h - l <= CONSTANCY_TOL * scale {
        Check::pass()
    } else {
        Check {
            holds: false,
            witnesses: vec![
                Witness::note(format!("{label} takes different values")).with("x1", zl.re).with("y1", zl.im).with("value1", l),
                Witness::note(format!("{label} takes different values")).with("x2", zh.re).with("y2", zh.im).with("value2", h),
            ],
        }
    }
}

fn both_constant(points: &[(Complex64, Complex64)]) -> Check {
    let cu = constancy(points.iter().map(|(z, w)| (*z, w.re)), "u");
    let cv = constancy(points.iter().map(|(z, w)| (*z, w.im)), "v");
    let mut witnesses = cu.witnesses;
    witnesses.extend(cv.witnesses);
    Check { holds: cu.holds && cv.holds, witnesses }
}

/// Deterministic polar probe of `f` on `D̄(0, R)`: the center plus a 32×64
/// grid.
pub fn probe(f: &HarmonicMap, radius: f64) -> Vec<(Complex64, Complex64)> {
    let mut pts = vec![Complex64::new(0.0, 0.0)];
    for i in 1..=32 {
        let r = radius * i as f64 / 32.0;
        for j in 0..64 {
            pts.push(Complex64::from_polar(r, TAU * j as f64 / 64.0));
        }
    }
    pts.into_iter().map(|z| (z, f.eval(z))).collect()
}

fn sample_pairs(samples: &RangeSample) -> Vec<(Complex64, Complex64)> {
    samples.points.iter().map(|p| (p.z, p.w)).collect()
}

fn with_sampling(v: TheoremVerdict, samples: &RangeSample) -> TheoremVerdict {
    v.sampled("radius", samples.meta.radius)
        .sampled("points", samples.points.len())
        .sampled("n_grid", samples.meta.n_grid)
        .sampled("seed", samples.meta.seed)
        .sampled("grid", samples.meta.grid.clone())
}

/// Lewis: `|u⁺ - v⁺| ≤ C` and `max(u, v) ≥ -C` everywhere force constancy.
pub fn check_lewis_region(f: &HarmonicMap, c: f64, samples: &RangeSample) -> TheoremVerdict {
    let mut violations = Vec::new();
    for p in &samples.points {
        let (u, v) = (p.w.re, p.w.im);
        let diff = (u.max(0.0) - v.max(0.0)).abs();
        if diff > c {
            violations.push(Witness::at(p.z, p.w, "|u+ - v+| > C").with("lhs", diff));
        } else if u.max(v) < -c {
            violations.push(Witness::at(p.z, p.w, "max(u, v) < -C").with("lhs", u.max(v)));
        }
        if violations.len() >= MAX_WITNESSES {
            break;
        }
    }
    let v = TheoremVerdict::new(TheoremId::Lewis, Check::from_violations(violations), both_constant(&sample_pairs(samples)))
        .param("C", c)
        .param("map", f.literal());
    with_sampling(v, samples)
}

/// Antipodal theorem: no antipodal pair among the asymptotic directions
/// forces `f` to be constant.
pub fn check_antipodal_theorem(f: &HarmonicMap, est: &DirectionEstimate, tol: f64) -> TheoremVerdict {
    let pairs = antipodal_pairs(&est.arcs, tol);
    let hypothesis = if pairs.is_empty() {
        Check::pass()
    } else {
        let t = pairs.midpoints()[0];
        Check::fail(
            Witness::note("antipodal directions present")
                .with("theta", t)
                .with("theta_opposite", (t + PI).rem_euclid(TAU)),
        )
    };
    let conclusion = both_constant(&probe(f, est.radius));
    let mut v = TheoremVerdict::new(TheoremId::ThmAntipodal, hypothesis, conclusion)
        .param("tol", tol)
        .param("map", f.literal())
        .param("antipodal_pairs", serde_json::to_value(&pairs).unwrap_or_default())
        .param("directions", serde_json::to_value(&est.arcs).unwrap_or_default())
        .sampled("radius", est.radius)
        .sampled("bins", est.bins)
        .sampled("points", est.sample_size);
    if est.low_confidence {
        v = v.noted("direction estimate flagged low-confidence");
    }
    v
}

/// Half-plane theorem: directions inside the closed half circle centered at
/// `α` force `cos α · u + sin α · v` to be constant.
pub fn check_halfplane_theorem(f: &HarmonicMap, alpha: f64, est: &DirectionEstimate, tol: f64) -> TheoremVerdict {
    let half = ArcSet::arc(alpha - FRAC_PI_2, alpha + FRAC_PI_2);
    let hypothesis = if est.arcs.is_subset_of(&half.fatten(tol)) {
        Check::pass()
    } else {
        let outside = est.arcs.intersection(&half.complement());
        let t = outside.midpoints().first().copied().unwrap_or(alpha + PI);
        Check::fail(Witness::note("direction outside the half circle").with("theta", t))
    };
    let boundary = [alpha - FRAC_PI_2, alpha + FRAC_PI_2].iter().any(|&t| est.arcs.distance_to(t) <= tol);
    let (s, c) = alpha.sin_cos();
    let pts = probe(f, est.radius);
    let conclusion = constancy(pts.iter().map(|(z, w)| (*z, c * w.re + s * w.im)), "cos(alpha) u + sin(alpha) v");
    let mut v = TheoremVerdict::new(TheoremId::ThmHalfplane, hypothesis, conclusion)
        .param("alpha", alpha)
        .param("tol", tol)
        .param("map", f.literal())
        .param("boundary_case", boundary)
        .param("directions", serde_json::to_value(&est.arcs).unwrap_or_default())
        .sampled("radius", est.radius)
        .sampled("bins", est.bins)
        .sampled("points", est.sample_size);
    if boundary {
        v = v.noted("directions touch the boundary of the half circle (accepted within tol)");
    }
    v
}

/// `v ≤ a|u|^α + b` with `α < 1` forces `v` to be constant.
pub fn check_cor_alpha(f: &HarmonicMap, a: f64, alpha: f64, b: f64, samples: &RangeSample) -> Result<TheoremVerdict> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::InvalidArgument(format!("alpha must lie in [0, 1), got {alpha}")));
    }
    let mut violations = Vec::new();
    for p in &samples.points {
        let bound = a * p.w.re.abs().powf(alpha) + b;
        if p.w.im > bound {
            violations.push(Witness::at(p.z, p.w, "v > a|u|^alpha + b").with("bound", bound));
            if violations.len() >= MAX_WITNESSES {
                break;
            }
        }
    }
    let conclusion = constancy(samples.points.iter().map(|p| (p.z, p.w.im)), "v");
    let v = TheoremVerdict::new(TheoremId::CorAlpha, Check::from_violations(violations), conclusion)
        .param("a", a)
        .param("alpha", alpha)
        .param("b", b)
        .param("map", f.literal());
    Ok(with_sampling(v, samples))
}

/// Murdoch–Kuran type statement: a polynomial `u` with `|u| ≤ a|v|` outside
/// `D(0, R)` is a multiple of `v`.
pub fn check_murdoch_kuran(f: &HarmonicMap, a: f64, radius: f64, samples: &RangeSample) -> Result<TheoremVerdict> {
    if !f.u.is_polynomial() || f.u.is_constant() {
        let why = if f.u.is_polynomial() { "u is constant" } else { "u is not a polynomial" };
        let mut v = TheoremVerdict::new(
            TheoremId::ThmMurdochKuran,
            Check::fail(Witness::note(why)),
            Check::pass(),
        )
        .param("a", a)
        .param("R", radius)
        .param("map", f.literal())
        .noted("hypothesis requires a nonconstant polynomial u; not applicable");
        v.applicable = false;
        return Ok(with_sampling(v, samples));
    }
    let dep = detect_dependence(f, samples, a, radius)?;
    let hypothesis = Check::from_violations(dep.witnesses.clone());
    let hypothesis = Check { holds: dep.cone_hypothesis, ..hypothesis };

    // the range should lie on the line through 0 spanned by (b, 1)
    let dir = Complex64::new(dep.b, 1.0) / Complex64::new(dep.b, 1.0).norm();
    let mut line_dev = 0.0f64;
    let mut wmax = 0.0f64;
    let mut worst = None;
    for p in samples.points.iter().filter(|p| p.z.norm() > radius) {
        let w = f.eval(p.z);
        let d = (w * dir.conj()).im.abs();
        wmax = wmax.max(w.norm());
        if d > line_dev {
            line_dev = d;
            worst = Some((p.z, w));
        }
    }
    let rel_dev = if wmax > 0.0 { line_dev / wmax } else { 0.0 };
    let mut concl = Vec::new();
    if !dep.dependent {
        concl.push(Witness::note("u is not a multiple of v").with("b", dep.b).with("residual", dep.residual));
    }
    if rel_dev > 1e-6 {
        let (z, w) = worst.unwrap();
        concl.push(Witness::at(z, w, "range point off the line").with("relative_distance", rel_dev));
    }
    let v = TheoremVerdict::new(TheoremId::ThmMurdochKuran, hypothesis, Check::from_violations(concl))
        .param("a", a)
        .param("R", radius)
        .param("b", dep.b)
        .param("residual", dep.residual)
        .param("line_deviation", rel_dev)
        .param("cone_violations", dep.violations)
        .param("uv_nonnegative", dep.uv_nonnegative)
        .param("map", f.literal());
    Ok(with_sampling(v, samples))
}

const LOG2_SLACK: f64 = 1e-12;

fn log_plus(x: f64) -> f64 {
    x.ln().max(0.0)
}

/// `|log⁺|z| - log⁺|z-1|| ≤ log 2` and `max(log|z|, log|z-1|) ≥ -log 2`.
pub fn check_log2_inequalities(zs: &[Complex64]) -> Result<TheoremVerdict> {
    let one = Complex64::new(1.0, 0.0);
    if let Some(z) = zs.iter().find(|z| z.norm() < 1e-12 || (*z - one).norm() < 1e-12) {
        return Err(Error::ExcludedPoint { x: z.re, y: z.im });
    }
    let ln2 = std::f64::consts::LN_2;
    let mut violations = Vec::new();
    let mut worst_first = f64::NEG_INFINITY;
    let mut worst_second = f64::INFINITY;
    for &z in zs {
        let (a, b) = (z.norm(), (z - one).norm());
        let first = (log_plus(a) - log_plus(b)).abs();
        let second = a.ln().max(b.ln());
        worst_first = worst_first.max(first);
        worst_second = worst_second.min(second);
        if first > ln2 + LOG2_SLACK {
            violations.push(Witness::at(z, Complex64::new(first, 0.0), "|log+|z| - log+|z-1|| > log 2").with("lhs", first));
        }
        if second < -ln2 - LOG2_SLACK {
            violations.push(Witness::at(z, Complex64::new(second, 0.0), "max(log|z|, log|z-1|) < -log 2").with("lhs", second));
        }
    }
    Ok(TheoremVerdict::new(TheoremId::IneqLog2, Check::pass(), Check::from_violations(violations))
        .param("slack", LOG2_SLACK)
        .param("max_first", worst_first)
        .param("min_second", worst_second)
        .sampled("points", zs.len()))
}

/// `n` seeded uniform points in `D(0, R)`, skipping `0` and `1`.
pub fn log2_samples(n: usize, radius: f64, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let one = Complex64::new(1.0, 0.0);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let r = radius * rng.gen::<f64>().sqrt();
        let t = TAU * rng.gen::<f64>();
        let z = Complex64::from_polar(r, t);
        if z.norm() >= 1e-12 && (z - one).norm() >= 1e-12 {
            out.push(z);
        }
    }
    out
}
