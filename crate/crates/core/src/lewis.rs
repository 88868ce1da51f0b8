//! Lewis discs and the rescaled maps built from them.
//!
//! A Lewis disc `D(z, r)` for `u` has `u(z) = 0` and controlled oscillation:
//! `M(|u|, z, r) ≤ C₀ M(u, z, 3r/4)` (doubling) and
//! `M(u, 0, R/2) ≤ C₀ M(u, z, r)` (growth). The search below looks for such
//! discs among centers on the zero set of `u` and dyadic radii, and reports
//! the smallest constant it achieved rather than assuming one.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arcs::ArcSet;
use crate::circle::{circle_extrema, circle_max, circle_max_abs, DEFAULT_CIRCLE_SAMPLES};
use crate::error::{Error, Result};
use crate::expr::{HarmonicComponent, HarmonicMap};
use crate::range::{cone_avoidance_normalize, default_radius, gap_margin, rho_hint, sample_range, Cone, ConeKind, ConeNormalization};
use crate::verdict::{Check, TheoremId, TheoremVerdict, Witness, MAX_WITNESSES};
use crate::zero_sets::{bisect_segment, newton_project, trace_zero_set, Grid, PlanarPair, Rect};

const FIND_ZERO_GRID: usize = 64;

/// A zero of `u` in `rect`: the grid sign change closest to the box center,
/// refined by bisection and then Newton's method along `∇u`.
pub fn find_zero(u: &HarmonicComponent, rect: Rect) -> Result<Complex64> {
    let grid = Grid::sample(u, rect, FIND_ZERO_GRID, FIND_ZERO_GRID);
    let center = rect.center();
    let edge = grid
        .sign_change_edges()
        .into_iter()
        .map(|(a, b)| {
            let (za, zb) = (grid.node(a.0, a.1), grid.node(b.0, b.1));
            ((0.5 * (za + zb) - center).norm(), za, zb)
        })
        .min_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let Some((_, za, zb)) = edge else {
        return Err(Error::NoSignChange);
    };
    let bis = bisect_segment(u, za, zb);
    let cell = rect.width().max(rect.height()) / FIND_ZERO_GRID as f64;
    let newton = newton_project(u, bis, cell, 40);
    let slack = Rect { x0: rect.x0 - cell, x1: rect.x1 + cell, y0: rect.y0 - cell, y1: rect.y1 + cell };
    if slack.contains(newton) && u.eval(newton).abs() <= u.eval(bis).abs() {
        Ok(newton)
    } else {
        Ok(bis)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LewisDisc {
    pub center: Complex64,
    pub radius: f64,
    /// `M(|u|, center, radius)`.
    pub m_n: f64,
    /// `M(u, 0, R/2) / M(u, center, radius)`.
    pub growth_ratio: f64,
    /// `M(|u|, center, radius) / M(u, center, 3·radius/4)`.
    pub doubling_ratio: f64,
    /// Empirical constant: the larger of the two ratios.
    pub c0: f64,
    pub u_center: f64,
    pub outer_radius: f64,
    pub budget: f64,
    pub within_budget: bool,
    pub candidates: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LewisConfig {
    pub budget: f64,
    pub centers_per_curve: usize,
    pub max_centers: usize,
    /// Dyadic radii `R·2^{-j}`, `j = 1..=radii`.
    pub radii: usize,
    /// Circle samples used while searching; the winner is re-measured with
    /// the default resolution.
    pub search_samples: usize,
    /// Candidates with `M(|u|, z, r)` below this are skipped.
    pub min_m: f64,
}

impl Default for LewisConfig {
    fn default() -> Self {
        Self { budget: 100.0, centers_per_curve: 64, max_centers: 256, radii: 20, search_samples: 512, min_m: 0.0 }
    }
}

/// Centers on the zero set of `u` inside `D(0, R)`, Newton-polished.
pub fn candidate_centers(u: &HarmonicComponent, outer: f64, cfg: &LewisConfig) -> Result<Vec<Complex64>> {
    let rect = Rect::around(Complex64::new(0.0, 0.0), outer);
    let step = outer / 128.0;
    let curves = trace_zero_set(u, rect, step)?;
    let mut centers = Vec::new();
    let origin = Complex64::new(0.0, 0.0);
    let scale = circle_max_abs(u, origin, outer).max(f64::MIN_POSITIVE);
    if u.eval(origin).abs() <= 1e-12 * scale {
        centers.push(origin);
    }
    for c in &curves {
        let inside: Vec<Complex64> = c.points.iter().copied().filter(|p| p.norm() < outer).collect();
        if inside.is_empty() {
            continue;
        }
        let k = cfg.centers_per_curve.max(1).min(inside.len());
        for i in 0..k {
            centers.push(inside[i * inside.len() / k]);
        }
    }
    if centers.is_empty() {
        let z = find_zero(u, rect)?;
        if z.norm() < outer {
            centers.push(z);
        }
    }
    if centers.len() > cfg.max_centers {
        let n = centers.len();
        centers = (0..cfg.max_centers).map(|i| centers[i * n / cfg.max_centers]).collect();
    }
    Ok(centers.into_iter().map(|c| newton_project(u, c, step, 20)).filter(|c| c.norm() < outer).collect())
}

struct Candidate {
    center: Complex64,
    radius: f64,
    m_abs: f64,
    growth: f64,
    doubling: f64,
}

impl Candidate {
    fn objective(&self) -> f64 {
        self.growth.max(self.doubling)
    }
}

fn measure(u: &HarmonicComponent, center: Complex64, radius: f64, growth_ref: f64, n: usize) -> Option<Candidate> {
    let outer = circle_extrema(u, center, radius, n);
    let inner = circle_extrema(u, center, 0.75 * radius, n);
    let m_abs = outer.abs_max();
    let m_u = outer.max;
    if !(m_u > 0.0 && inner.max > 0.0) || !m_abs.is_finite() {
        return None;
    }
    Some(Candidate { center, radius, m_abs, growth: growth_ref / m_u, doubling: m_abs / inner.max })
}

/// Searches for a Lewis disc in `D(0, R)`; see the module docs.
pub fn lewis_disc_search(u: &HarmonicComponent, outer: f64, budget: f64) -> Result<LewisDisc> {
    lewis_disc_search_with(u, outer, &LewisConfig { budget, ..LewisConfig::default() })
}

pub fn lewis_disc_search_with(u: &HarmonicComponent, outer: f64, cfg: &LewisConfig) -> Result<LewisDisc> {
    if u.is_constant() {
        return Err(Error::ConstantFunction);
    }
    if !(outer > 0.0) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {outer}")));
    }
    let centers = candidate_centers(u, outer, cfg)?;
    if centers.is_empty() {
        return Err(Error::NoSignChange);
    }
    let origin = Complex64::new(0.0, 0.0);
    let growth_ref = circle_max(u, origin, outer / 2.0).value;

    let pairs: Vec<(Complex64, f64)> = centers
        .iter()
        .flat_map(|&c| {
            (1..=cfg.radii)
                .map(move |j| (c, outer / 2f64.powi(j as i32)))
                .filter(move |&(c, r)| c.norm() + r <= outer)
        })
        .collect();
    let measured: Vec<Option<Candidate>> =
        pairs.par_iter().map(|&(c, r)| measure(u, c, r, growth_ref, cfg.search_samples)).collect();
    let best = measured
        .into_iter()
        .flatten()
        .filter(|c| c.m_abs >= cfg.min_m)
        .min_by(|a, b| {
            a.objective()
                .partial_cmp(&b.objective())
                .unwrap()
                .then(a.radius.partial_cmp(&b.radius).unwrap())
                .then(a.center.re.partial_cmp(&b.center.re).unwrap())
                .then(a.center.im.partial_cmp(&b.center.im).unwrap())
        })
        .ok_or_else(|| Error::InsufficientData("no admissible disc among the candidates".into()))?;

    let fine = measure(u, best.center, best.radius, growth_ref, DEFAULT_CIRCLE_SAMPLES).unwrap_or(best);
    Ok(fine.into_disc(u, outer, cfg.budget, pairs.len()))
}

impl Candidate {
    fn into_disc(self, u: &HarmonicComponent, outer: f64, budget: f64, candidates: usize) -> LewisDisc {
        let c0 = self.objective();
        LewisDisc {
            center: self.center,
            radius: self.radius,
            m_n: self.m_abs,
            growth_ratio: self.growth,
            doubling_ratio: self.doubling,
            c0,
            u_center: u.eval(self.center),
            outer_radius: outer,
            budget,
            within_budget: c0 <= budget,
            candidates,
        }
    }
}

/// Ratios of one given disc, measured as in the search. `None` when `u`
/// has no positive maximum on the circles involved.
pub fn evaluate_disc(u: &HarmonicComponent, center: Complex64, radius: f64, outer: f64, budget: f64) -> Option<LewisDisc> {
    let growth_ref = circle_max(u, Complex64::new(0.0, 0.0), outer / 2.0).value;
    measure(u, center, radius, growth_ref, DEFAULT_CIRCLE_SAMPLES).map(|c| c.into_disc(u, outer, budget, 1))
}

// ---------------------------------------------------------------------------
// Rescaled maps

/// `F_n(z) = f(z_n + r_n z) / M_n` on the unit disc.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RescaledMap {
    pub source: HarmonicMap,
    pub disc: LewisDisc,
}

impl RescaledMap {
    fn lift(&self, z: Complex64) -> Complex64 {
        self.disc.center + self.disc.radius * z
    }

    pub fn u_n(&self, z: Complex64) -> f64 {
        self.source.u.eval(self.lift(z)) / self.disc.m_n
    }

    pub fn v_n(&self, z: Complex64) -> f64 {
        self.source.v.eval(self.lift(z)) / self.disc.m_n
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.source.eval(self.lift(z)) / self.disc.m_n
    }

    /// Checks `U_n(0) = 0`, `|U_n| ≤ 1` and `M(U_n, 0, 3/4) ≥ 1/C₀` on a
    /// `grid×grid` lattice in `[-1+ε, 1-ε]²` cut to the disc `|z| ≤ 1-ε`.
    pub fn certify(&self, grid: usize) -> RescaledCertificate {
        let eps = 1e-3;
        let pts = unit_grid(grid, eps);
        let sup_abs = pts.par_iter().map(|&z| self.u_n(z).abs()).reduce(|| 0.0, f64::max);
        let u0 = self.u_n(Complex64::new(0.0, 0.0)).abs();
        let m34 = circle_max(&self.source.u, self.disc.center, 0.75 * self.disc.radius).value / self.disc.m_n;
        let c0 = self.disc.c0;
        RescaledCertificate {
            u_at_zero: u0,
            sup_abs_u: sup_abs,
            m_three_quarters: m34,
            c0,
            zero_at_center: u0 <= 1e-9,
            bounded_by_one: sup_abs <= 1.0 + 1e-6,
            doubling_lower_bound: m34 >= 1.0 / c0 * (1.0 - 1e-9),
            grid_points: pts.len(),
        }
    }
}

impl PlanarPair for RescaledMap {
    fn u_at(&self, z: Complex64) -> f64 {
        self.u_n(z)
    }
    fn v_at(&self, z: Complex64) -> f64 {
        self.v_n(z)
    }
    fn u_grad(&self, z: Complex64) -> (f64, f64) {
        let (a, b) = self.source.u.gradient(self.lift(z));
        let s = self.disc.radius / self.disc.m_n;
        (a * s, b * s)
    }
    fn v_grad(&self, z: Complex64) -> (f64, f64) {
        let (a, b) = self.source.v.gradient(self.lift(z));
        let s = self.disc.radius / self.disc.m_n;
        (a * s, b * s)
    }
}

fn unit_grid(n: usize, eps: f64) -> Vec<Complex64> {
    let lo = -1.0 + eps;
    let h = 2.0 * (1.0 - eps) / (n - 1).max(1) as f64;
    (0..n)
        .flat_map(|j| (0..n).map(move |i| Complex64::new(lo + i as f64 * h, lo + j as f64 * h)))
        .filter(|z| z.norm() <= 1.0 - eps)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RescaledCertificate {
    pub u_at_zero: f64,
    pub sup_abs_u: f64,
    pub m_three_quarters: f64,
    pub c0: f64,
    pub zero_at_center: bool,
    pub bounded_by_one: bool,
    pub doubling_lower_bound: bool,
    pub grid_points: usize,
}

impl RescaledCertificate {
    pub fn holds(&self) -> bool {
        self.zero_at_center && self.bounded_by_one && self.doubling_lower_bound
    }
}

pub const CERTIFY_GRID: usize = 101;

/// One rescaled map per radius of an increasing schedule. Each disc after
/// the first is required to have `M_n` at least the previous one (up to a
/// relative slack of 1e-6).
pub fn rescaled_sequence(f: &HarmonicMap, schedule: &[f64], budget: f64) -> Result<Vec<RescaledMap>> {
    if f.u.is_constant() {
        return Err(Error::ConstantFunction);
    }
    if schedule.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("radius schedule must be strictly increasing".into()));
    }
    let mut out: Vec<RescaledMap> = Vec::with_capacity(schedule.len());
    let mut floor = 0.0;
    for &r in schedule {
        let cfg = LewisConfig { budget, min_m: floor * (1.0 - 1e-6), ..LewisConfig::default() };
        let disc = lewis_disc_search_with(&f.u, r, &cfg)?;
        floor = disc.m_n;
        out.push(RescaledMap { source: f.clone(), disc });
    }
    Ok(out)
}

/// `L = sup_n M(|v|, 0, ρ) / M_n` over a sequence.
pub fn l_diagnostic(seq: &[RescaledMap], rho: f64) -> f64 {
    seq.iter()
        .map(|rm| circle_max_abs(&rm.source.v, Complex64::new(0.0, 0.0), rho) / rm.disc.m_n)
        .fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// Range of a rescaled map

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RescaledCheckConfig {
    /// Angular slack around the direction set.
    pub angle_tol: f64,
    /// Samples with `|F| <` this are ignored by the direction test.
    pub magnitude_cutoff: f64,
    /// Threshold for "`U` (or `V`) is zero" on the grid.
    pub zero_tol: f64,
    /// Radius outside which `f` respects the normalized cones; estimated
    /// from a range sample of `f` when absent.
    pub rho: Option<f64>,
}

impl Default for RescaledCheckConfig {
    fn default() -> Self {
        Self { angle_tol: 5f64.to_radians(), magnitude_cutoff: 1e-2, zero_tol: 1e-3, rho: None }
    }
}

/// Half-aperture `α` such that `D_f ⊂ I_α` without rotation, keeping a
/// margin `tol`.
pub fn i_alpha_unrotated(d_f: &ArcSet, tol: f64) -> Option<f64> {
    if d_f.is_empty() {
        return None;
    }
    let margin = [FRAC_PI_2, std::f64::consts::PI, 3.0 * FRAC_PI_2]
        .iter()
        .map(|&t| d_f.distance_to(t))
        .fold(f64::INFINITY, f64::min);
    let alpha = margin - tol;
    (alpha > 0.0).then(|| alpha.min(std::f64::consts::FRAC_PI_4 * (1.0 - 1e-9)))
}

/// Radius beyond which the range of `f` avoids the cones of `I_α` (no
/// rotation), estimated from a default range sample.
pub fn estimate_rho(f: &HarmonicMap, alpha: f64) -> Result<f64> {
    let samples = sample_range(f, default_radius(f), 256, 0)?;
    let norm = ConeNormalization {
        rotation: 0.0,
        alpha: std::f64::consts::PI,
        a: 1.0 / alpha.tan(),
        half_aperture: alpha,
        whole_cone: Cone { axis: FRAC_PI_2, half_aperture: alpha, kind: ConeKind::Whole },
        half_cone: Cone { axis: std::f64::consts::PI, half_aperture: alpha, kind: ConeKind::Half },
        rotated_arcs: ArcSet::empty(),
        rho_hint: None,
    };
    // the reference shift of the sample does not apply here
    let mut s = samples;
    s.meta.reference = Complex64::new(0.0, 0.0);
    Ok(rho_hint(&s, &norm))
}

/// Samples `F = (U_n, V_n)` on a grid and checks that its directions lie in
/// the cone over `D_f`; when `D_f ⊂ I_α` without rotation, also checks the
/// zero-set inclusions `{U = 0} ⊂ {V = 0} ⊂ {U ≥ 0}` with the slack allowed
/// by the cones (`a = cot α`) and the finite radius `ρ / M_n`.
pub fn rescaled_range_check(rm: &RescaledMap, d_f: &ArcSet, grid_n: usize, cfg: &RescaledCheckConfig) -> Result<TheoremVerdict> {
    if grid_n < 2 {
        return Err(Error::InvalidArgument("grid_n must be at least 2".into()));
    }
    let cert = rm.certify(CERTIFY_GRID);
    let mut hyp = Vec::new();
    if !cert.holds() {
        hyp.push(
            Witness::note("rescaled map fails its normalization")
                .with("u_at_zero", cert.u_at_zero)
                .with("sup_abs_u", cert.sup_abs_u)
                .with("m_three_quarters", cert.m_three_quarters)
                .with("c0", cert.c0),
        );
    }
    if d_f.is_empty() {
        hyp.push(Witness::note("direction set is empty"));
    }

    let pts = unit_grid(grid_n, 1e-3);
    let vals: Vec<Complex64> = pts.par_iter().map(|&z| rm.eval(z)).collect();
    let fat = d_f.fatten(cfg.angle_tol);
    let mut concl = Vec::new();
    let mut direction_violations = 0usize;
    for (&z, &w) in pts.iter().zip(&vals) {
        if w.norm() < cfg.magnitude_cutoff {
            continue;
        }
        if !fat.contains(w.arg()) {
            direction_violations += 1;
            if concl.len() < MAX_WITNESSES {
                concl.push(Witness::at(z, w, "direction of F outside the direction set").with("angle", w.arg()));
            }
        }
    }

    let alpha = i_alpha_unrotated(d_f, 1e-3);
    let mut zero_violations = 0usize;
    let mut slack_used = None;
    if let Some(alpha) = alpha {
        let a = 1.0 / alpha.tan();
        let rho = match cfg.rho {
            Some(r) => r,
            None => estimate_rho(&rm.source, alpha)?,
        };
        let s = rho / rm.disc.m_n;
        slack_used = Some(s);
        let tau = cfg.zero_tol;
        for (&z, _) in pts.iter().zip(&vals) {
            // re-evaluate each component separately
            let (uu, vv) = (rm.u_n(z), rm.v_n(z));
            let mut bad = None;
            if uu.abs() <= tau && vv.abs() > a * tau + s {
                bad = Some("U = 0 but V ≠ 0");
            } else if vv.abs() <= tau && uu < -(a * tau + s) {
                bad = Some("V = 0 but U < 0");
            }
            if let Some(msg) = bad {
                zero_violations += 1;
                if concl.len() < MAX_WITNESSES {
                    concl.push(Witness::at(z, Complex64::new(uu, vv), msg).with("a", a).with("slack", s));
                }
            }
        }
    }

    let gap = if d_f.is_empty() { 0.0 } else { gap_margin(d_f, 0.0) };
    let mut v = TheoremVerdict::new(TheoremId::RescaledRange, Check::from_violations(hyp), Check::from_violations(concl))
        .param("angle_tol", cfg.angle_tol)
        .param("magnitude_cutoff", cfg.magnitude_cutoff)
        .param("zero_tol", cfg.zero_tol)
        .param("direction_violations", direction_violations)
        .param("zero_set_violations", zero_violations)
        .param("zero_sets_checked", alpha.is_some())
        .param("m_n", rm.disc.m_n)
        .param("c0", rm.disc.c0)
        .param("gap_margin_at_zero", gap)
        .sampled("grid", format!("{grid_n}x{grid_n} on [-1+1e-3, 1-1e-3]^2 cut to the disc"))
        .sampled("points", pts.len())
        .sampled("disc_center", vec![rm.disc.center.re, rm.disc.center.im])
        .sampled("disc_radius", rm.disc.radius);
    if let Some(alpha) = alpha {
        v = v.param("alpha", alpha);
    }
    if let Some(s) = slack_used {
        v = v.param("cone_slack", s);
    } else {
        v = v.noted("direction set does not fit I_alpha without rotation; zero-set inclusions not evaluated");
    }
    Ok(v)
}

/// Rotates `f` so its directions fit `I_α`, when they contain no antipodal
/// pair; returns the rotated map and the normalization used.
pub fn normalized_map(f: &HarmonicMap, d_f: &ArcSet, tol: f64) -> Option<(HarmonicMap, ConeNormalization)> {
    let n = cone_avoidance_normalize(d_f, tol)?;
    Some((f.rotated(n.rotation), n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;
    use std::f64::consts::PI;

    fn comp(s: &str) -> HarmonicComponent {
        HarmonicComponent::parse(s).unwrap()
    }

    #[test]
    fn find_zero_examples() {
        let z = find_zero(&comp("re(z)"), Rect::new(-1.0, 1.0, -1.0, 1.0).unwrap()).unwrap();
        assert!(z.re.abs() <= 1e-12);
        let u = HarmonicComponent::im(Expr::exp(Expr::z()));
        let z = find_zero(&u, Rect::new(-1.0, 1.0, 2.0, 4.0).unwrap()).unwrap();
        assert!((z.im - PI).abs() < 1e-10);
        let u = comp("re(z^3 - 1)");
        let z = find_zero(&u, Rect::new(0.0, 2.0, 0.0, 2.0).unwrap()).unwrap();
        assert!(u.eval(z).abs() <= 1e-12 * 8.0);
        assert!(matches!(find_zero(&comp("re(z + 5)"), Rect::new(-1.0, 1.0, -1.0, 1.0).unwrap()), Err(Error::NoSignChange)));
    }

    #[test]
    fn linear_u_has_doubling_four_thirds() {
        let d = lewis_disc_search(&comp("re(z)"), 4.0, 100.0).unwrap();
        assert!(d.center.re.abs() < 1e-12);
        assert!((d.doubling_ratio - 4.0 / 3.0).abs() < 1e-9);
        assert!(d.within_budget);
    }

    #[test]
    fn cubic_doubling_at_origin() {
        let u = comp("re(z^3)");
        let d = evaluate_disc(&u, Complex64::new(0.0, 0.0), 1.0, 2.0, 100.0).unwrap();
        assert!((d.doubling_ratio - (4.0f64 / 3.0).powi(3)).abs() < 1e-9, "{d:?}");
        let best = lewis_disc_search(&u, 2.0, 100.0).unwrap();
        assert!(best.c0 <= d.c0 + 1e-9);
        assert!(u.eval(best.center).abs() <= 1e-9 * best.m_n);
    }

    #[test]
    fn constant_u_is_rejected() {
        let f = HarmonicMap::parse("u=re(0*z + 2); v=im(z)").unwrap();
        assert!(matches!(rescaled_sequence(&f, &[2.0, 4.0], 100.0), Err(Error::ConstantFunction)));
    }

    #[test]
    fn identity_sequence_grows_linearly() {
        let f = HarmonicMap::parse("u=re(z); v=im(z)").unwrap();
        let seq = rescaled_sequence(&f, &[2.0, 4.0, 8.0], 100.0).unwrap();
        for (rm, r) in seq.iter().zip([2.0, 4.0, 8.0]) {
            assert!((rm.disc.m_n - r / 2.0).abs() < 1e-9);
            assert!(rm.certify(21).holds());
        }
    }

    #[test]
    fn rescaled_range_negative_control() {
        let f = HarmonicMap::parse("u=re(z); v=im(z)").unwrap();
        let seq = rescaled_sequence(&f, &[4.0], 100.0).unwrap();
        let ok = rescaled_range_check(&seq[0], &ArcSet::full(), 41, &RescaledCheckConfig::default()).unwrap();
        assert!(ok.conclusion.holds);
        let bad = rescaled_range_check(&seq[0], &ArcSet::point(0.0), 41, &RescaledCheckConfig::default()).unwrap();
        assert!(!bad.conclusion.holds && !bad.conclusion.witnesses.is_empty());
    }
}
