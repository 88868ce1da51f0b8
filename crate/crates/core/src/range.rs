//! Range samples, asymptotic directions, cones and the Φ envelope.
//!
//! A direction `e^{iθ}` is asymptotic for a range when range points escape
//! to infinity along it. On a finite sample this is read off per angular
//! bin: the largest `|w|` seen in the bin ("reach") must keep growing when
//! the sampled domain grows, and must clear a magnitude floor. Directions
//! whose reach saturates belong to a bounded part of the range.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arcs::ArcSet;
use crate::circle::angle_dist;
use crate::error::{Error, Result};
use crate::expr::HarmonicMap;
use crate::verdict::{Check, TheoremId, TheoremVerdict, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplePoint {
    pub z: Complex64,
    pub w: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleMeta {
    pub radius: f64,
    pub n_grid: usize,
    pub seed: u64,
    pub grid: String,
    pub polar_points: usize,
    pub quasi_random_points: usize,
    pub refined_points: usize,
    /// `f(0)`; direction estimates work with `w - reference`.
    pub reference: Complex64,
}

/// Deterministic sample of `(z, f(z))` pairs over `D̄(0, R)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeSample {
    pub points: Vec<SamplePoint>,
    pub meta: SampleMeta,
}

/// Radii (as fractions of `R`) of the circles whose images are refined.
pub const SCALE_FRACTIONS: [f64; 4] = [0.125, 0.25, 0.5, 1.0];

/// Angular resolution targeted when refining circle images (one bin of the
/// default 720-bin histogram).
pub const REFINE_RESOLUTION: f64 = TAU / 720.0;
const REFINE_MAX_DEPTH: u32 = 50;
const REFINE_MAX_POINTS: usize = 400_000;

/// Default sampling radius: larger for polynomial maps, whose ranges grow
/// slowly, than for transcendental ones.
pub fn default_radius(f: &HarmonicMap) -> f64 {
    if f.u.is_polynomial() && f.v.is_polynomial() {
        100.0
    } else {
        30.0
    }
}

pub const DEFAULT_N_GRID: usize = 512;

/// The magnitude floor is the median `|w - f(0)|` over `|z| ≤ R/32`.
pub const FLOOR_FRACTION: f64 = 1.0 / 32.0;

fn eval_all(f: &HarmonicMap, zs: Vec<Complex64>) -> Vec<SamplePoint> {
    zs.into_par_iter().map(|z| SamplePoint { z, w: f.eval(z) }).collect()
}

fn angle_gap(a: Complex64, b: Complex64) -> f64 {
    angle_dist(a.arg(), b.arg())
}

/// Adds points on the circle `|z| = r` between neighbours whose images point
/// in directions more than `resolution` apart. A pass of the image through
/// the reference value costs one bisection chain of bounded depth. The image of a circle is a continuous closed curve, so
/// this fills in directions swept over very short parameter intervals.
fn refine_circle(f: &HarmonicMap, r: f64, n: usize, reference: Complex64, resolution: f64) -> Vec<SamplePoint> {
    let h = TAU / n as f64;
    let base: Vec<SamplePoint> = eval_all(f, (0..n).map(|k| Complex64::from_polar(r, k as f64 * h)).collect());

    let mut out = base.clone();
    let mut added = 0usize;
    let mut stack: Vec<(f64, SamplePoint, f64, SamplePoint, u32)> = Vec::new();
    for k in 0..n {
        let a = base[k];
        let b = base[(k + 1) % n];
        stack.push((k as f64 * h, a, (k + 1) as f64 * h, b, 0));
        while let Some((ta, pa, tb, pb, depth)) = stack.pop() {
            let (wa, wb) = (pa.w - reference, pb.w - reference);
            if depth >= REFINE_MAX_DEPTH
                || added >= REFINE_MAX_POINTS
                || wa.norm().min(wb.norm()) == 0.0
                || angle_gap(wa, wb) <= resolution
            {
                continue;
            }
            let tm = 0.5 * (ta + tb);
            if tm <= ta || tm >= tb {
                continue;
            }
            let z = Complex64::from_polar(r, tm);
            let pm = SamplePoint { z, w: f.eval(z) };
            out.push(pm);
            added += 1;
            stack.push((tm, pm, tb, pb, depth + 1));
            stack.push((ta, pa, tm, pm, depth + 1));
        }
    }
    out
}

/// R2 low-discrepancy sequence shifted by a seeded random offset.
fn quasi_random_disc(radius: f64, count: usize, seed: u64) -> Vec<Complex64> {
    const G: f64 = 1.324_717_957_244_746; // plastic number
    let (a1, a2) = (1.0 / G, 1.0 / (G * G));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (s1, s2): (f64, f64) = (rng.gen(), rng.gen());
    (0..count)
        .map(|k| {
            let p = (s1 + a1 * k as f64).fract();
            let q = (s2 + a2 * k as f64).fract();
            Complex64::from_polar(radius * p.sqrt(), TAU * q)
        })
        .collect()
}

/// Samples the range of `f` on `D̄(0, R)`: the center, an `n×n` polar grid,
/// `n²` seeded quasi-random points, and refined images of the circles
/// `|z| = R/8, R/4, R/2, R`.
pub fn sample_range(f: &HarmonicMap, radius: f64, n_grid: usize, seed: u64) -> Result<RangeSample> {
    if n_grid < 64 {
        return Err(Error::InvalidArgument(format!("n_grid must be at least 64, got {n_grid}")));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
    }
    let n = n_grid;
    let origin = Complex64::new(0.0, 0.0);
    let reference = f.eval(origin);

    let mut zs = Vec::with_capacity(1 + 2 * n * n);
    zs.push(origin);
    for i in 0..n {
        let r = radius * (i + 1) as f64 / n as f64;
        for j in 0..n {
            zs.push(Complex64::from_polar(r, TAU * j as f64 / n as f64));
        }
    }
    zs.extend(quasi_random_disc(radius, n * n, seed));
    let mut points = eval_all(f, zs);

    let mut refined_points = 0;
    for frac in SCALE_FRACTIONS {
        let ring = refine_circle(f, radius * frac, n, reference, REFINE_RESOLUTION);
        refined_points += ring.len();
        points.extend(ring);
    }

    let meta = SampleMeta {
        radius,
        n_grid,
        seed,
        grid: "center+polar+r2-quasi-random+refined-circles".into(),
        polar_points: n * n,
        quasi_random_points: n * n,
        refined_points,
        reference,
    };
    Ok(RangeSample { points, meta })
}

impl RangeSample {
    /// Plain sample from explicit points (no refinement); used by tests and
    /// by callers that bring their own design.
    pub fn from_points(f: &HarmonicMap, zs: Vec<Complex64>, radius: f64) -> Self {
        let reference = f.eval(Complex64::new(0.0, 0.0));
        let count = zs.len();
        let points = eval_all(f, zs);
        RangeSample {
            points,
            meta: SampleMeta {
                radius,
                n_grid: 0,
                seed: 0,
                grid: "explicit".into(),
                polar_points: 0,
                quasi_random_points: count,
                refined_points: 0,
                reference,
            },
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

// ---------------------------------------------------------------------------
// Direction estimation

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectionConfig {
    pub bins: usize,
    /// Required ratio between the reach over `|z| ≤ R` and over `|z| ≤ R/4`.
    pub growth: f64,
}

impl Default for DirectionConfig {
    fn default() -> Self {
        Self { bins: 720, growth: 2.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionEstimate {
    pub arcs: ArcSet,
    pub radius: f64,
    pub bins: usize,
    pub growth: f64,
    /// Domain radii at which per-bin reach is measured.
    pub scales: Vec<f64>,
    /// Magnitude cutoffs: a bin must reach beyond these to count.
    pub cutoffs: Vec<f64>,
    /// Per bin, the number of samples beyond the cutoff.
    pub survival_counts: Vec<u32>,
    pub occupied_bins: usize,
    /// Whether the estimate from `(R/8, R/2)` agrees with `(R/4, R)` within
    /// two bins (Hausdorff).
    pub stable: bool,
    pub low_confidence: bool,
    pub flags: Vec<String>,
    pub reference: Complex64,
    pub sample_size: usize,
}

fn bin_of(w: Complex64, bins: usize) -> usize {
    let t = w.arg().rem_euclid(TAU);
    ((t / TAU * bins as f64) as usize).min(bins - 1)
}

fn bins_to_arcs(occupied: &[bool], width: f64) -> ArcSet {
    let arcs = occupied
        .iter()
        .enumerate()
        .filter(|(_, &o)| o)
        .map(|(b, _)| (b as f64 * width, (b + 1) as f64 * width));
    ArcSet::from_arcs(arcs).fatten(width)
}

/// Estimates the set of asymptotic directions from a range sample.
pub fn estimate_directions(samples: &RangeSample, cfg: &DirectionConfig) -> Result<DirectionEstimate> {
    if cfg.bins < 90 {
        return Err(Error::InvalidArgument(format!("bins must be at least 90, got {}", cfg.bins)));
    }
    let bins = cfg.bins;
    let width = TAU / bins as f64;
    let radius = samples.meta.radius;
    let reference = samples.meta.reference;
    let scales: Vec<f64> = SCALE_FRACTIONS.iter().map(|f| f * radius).collect();
    let nscale = scales.len();

    // reach[b][k] = max |w - reference| over samples in bin b with |z| ≤ scales[k]
    let mut reach = vec![[0.0f64; 4]; bins];
    let mut inner_mags = Vec::new();
    for p in &samples.points {
        let w = p.w - reference;
        let m = w.norm();
        if !(m > 0.0) || !m.is_finite() {
            continue;
        }
        let rz = p.z.norm();
        let first = scales.iter().position(|&s| rz <= s * (1.0 + 1e-12)).unwrap_or(nscale);
        if first >= nscale {
            continue;
        }
        if rz <= radius * FLOOR_FRACTION {
            inner_mags.push(m);
        }
        let b = bin_of(w, bins);
        for k in first..nscale {
            if m > reach[b][k] {
                reach[b][k] = m;
            }
        }
    }
    inner_mags.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let floor = if inner_mags.is_empty() { 0.0 } else { inner_mags[inner_mags.len() / 2] };

    let select = |outer: usize, inner: usize| -> Vec<bool> {
        reach.iter().map(|r| r[outer] > floor && r[outer] >= cfg.growth * r[inner]).collect()
    };
    let primary = select(3, 1);
    let secondary = select(2, 0);
    let arcs = bins_to_arcs(&primary, width);
    let check = bins_to_arcs(&secondary, width);
    let stable = match (arcs.is_empty(), check.is_empty()) {
        (true, true) => true,
        (false, false) => arcs.hausdorff(&check) <= 2.0 * width + 1e-12,
        _ => false,
    };

    let mut survival_counts = vec![0u32; bins];
    let mut outer_survivors = 0usize;
    for p in &samples.points {
        let w = p.w - reference;
        let m = w.norm();
        if m > floor && m.is_finite() {
            survival_counts[bin_of(w, bins)] += 1;
            if p.z.norm() > scales[1] {
                outer_survivors += 1;
            }
        }
    }

    let mut flags = Vec::new();
    if !stable {
        flags.push("estimate changes between domain scales (R/8,R/2) and (R/4,R)".to_string());
    }
    if outer_survivors < 100 {
        flags.push(format!("only {} samples beyond the cutoff in the outer annulus", outer_survivors));
    }
    let max_outer = reach.iter().map(|r| r[3]).fold(0.0, f64::max);
    let max_inner = reach.iter().map(|r| r[1]).fold(0.0, f64::max);
    if arcs.is_empty() && max_outer > floor && max_outer >= cfg.growth * max_inner {
        flags.push("range grows but no bin passed the growth test".to_string());
    }
    let low_confidence = outer_survivors < 100 || (arcs.is_empty() && flags.len() > 1);

    Ok(DirectionEstimate {
        occupied_bins: primary.iter().filter(|&&o| o).count(),
        arcs,
        radius,
        bins,
        growth: cfg.growth,
        scales,
        cutoffs: vec![floor],
        survival_counts,
        stable,
        low_confidence,
        flags,
        reference,
        sample_size: samples.points.len(),
    })
}

// ---------------------------------------------------------------------------
// Antipodes, cones and normalization

/// Angles `θ` such that both `e^{iθ}` and `-e^{iθ}` lie in the
/// `tol`-fattened set.
pub fn antipodal_pairs(arcs: &ArcSet, tol: f64) -> ArcSet {
    let fat = arcs.fatten(tol);
    fat.intersection(&fat.rotate(PI))
}

/// Smallest distance from `{e^{iα}, ±i e^{iα}}` to `e`.
pub fn gap_margin(e: &ArcSet, alpha: f64) -> f64 {
    [alpha, alpha + FRAC_PI_2, alpha - FRAC_PI_2]
        .iter()
        .map(|&t| e.distance_to(t))
        .fold(f64::INFINITY, f64::min)
}

const ALPHA_STEP: f64 = 1e-3;

/// An angle `α` (on a 1e-3 rad grid) such that `e^{iα}` and `±i e^{iα}` are
/// all at least `tol` away from `e`. Requires `e` to have no antipodal pair
/// within `tol`. Among admissible angles the one with the largest margin is
/// returned (smallest angle on ties).
pub fn antipodal_gap_alpha(e: &ArcSet, tol: f64) -> Option<f64> {
    if !antipodal_pairs(e, tol).is_empty() {
        return None;
    }
    let steps = (TAU / ALPHA_STEP).floor() as usize;
    let mut best: Option<(f64, f64)> = None;
    for k in 0..steps {
        let a = k as f64 * ALPHA_STEP;
        let m = gap_margin(e, a);
        if m >= tol && best.map_or(true, |(_, bm)| m > bm) {
            best = Some((a, m));
        }
    }
    best.map(|(a, _)| a)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConeKind {
    Whole,
    Half,
}

/// Cone with vertex at the origin: `{t e^{iθ} : |θ - axis| ≤ φ}` with
/// `t ∈ ℝ` (whole) or `t ≥ 0` (half).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cone {
    pub axis: f64,
    pub half_aperture: f64,
    pub kind: ConeKind,
}

impl Cone {
    pub fn contains(&self, w: Complex64) -> bool {
        if w.norm() == 0.0 {
            return true;
        }
        let t = w.arg();
        let near = angle_dist(t, self.axis) <= self.half_aperture;
        match self.kind {
            ConeKind::Half => near,
            ConeKind::Whole => near || angle_dist(t, self.axis + PI) <= self.half_aperture,
        }
    }

    /// Directions covered by the cone.
    pub fn directions(&self) -> ArcSet {
        let a = ArcSet::arc(self.axis - self.half_aperture, self.axis + self.half_aperture);
        match self.kind {
            ConeKind::Half => a,
            ConeKind::Whole => a.union(&a.rotate(PI)),
        }
    }
}

/// Rotation and cone pair after which the (rotated) directions avoid the
/// vertical whole cone and the half cone around `-1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeNormalization {
    /// Multiply the map by `e^{iθ}`.
    pub rotation: f64,
    /// The axis angle `α` with `e^{iα}` sent to `-1`.
    pub alpha: f64,
    /// Cone slope: outside a disc the rotated range lies in
    /// `{|v| ≤ a|u|} ∖ {|v| ≤ -u/a}`.
    pub a: f64,
    pub half_aperture: f64,
    pub whole_cone: Cone,
    pub half_cone: Cone,
    pub rotated_arcs: ArcSet,
    /// Radius beyond which sampled values respect the cones, when a sample
    /// was supplied.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho_hint: Option<f64>,
}

/// Distance from the three excluded directions `π/2, π, 3π/2`.
fn excluded_margin(e: &ArcSet, rotation: f64) -> f64 {
    [FRAC_PI_2, PI, 1.5 * PI]
        .iter()
        .map(|&t| e.distance_to(t - rotation))
        .fold(f64::INFINITY, f64::min)
}

fn aperture_from_margin(margin: f64, tol: f64) -> Option<f64> {
    let phi = margin - tol;
    if phi <= 0.0 {
        return None;
    }
    Some(phi.min(FRAC_PI_4 * (1.0 - 1e-9)))
}

/// Finds the rotation and the cone pair of the normalization step. Returns
/// `None` when the directions contain an antipodal pair (within `tol`) or no
/// admissible axis exists.
///
/// The reported `a` is the smallest slope (widest cones) that still keeps a
/// `tol` margin, capped so that `a > 1`.
pub fn cone_avoidance_normalize(arcs: &ArcSet, tol: f64) -> Option<ConeNormalization> {
    let alpha = antipodal_gap_alpha(arcs, tol)?;
    let rotation = (PI - alpha).rem_euclid(TAU);
    let rotated = arcs.rotate(rotation);
    let phi = aperture_from_margin(excluded_margin(&rotated, 0.0), tol)?;
    Some(ConeNormalization {
        rotation,
        alpha,
        a: 1.0 / phi.tan(),
        half_aperture: phi,
        whole_cone: Cone { axis: FRAC_PI_2, half_aperture: phi, kind: ConeKind::Whole },
        half_cone: Cone { axis: PI, half_aperture: phi, kind: ConeKind::Half },
        rotated_arcs: rotated,
        rho_hint: None,
    })
}

/// Largest `|w|` of a rotated sample value that falls inside either cone.
pub fn rho_hint(samples: &RangeSample, norm: &ConeNormalization) -> f64 {
    let rot = Complex64::from_polar(1.0, norm.rotation);
    samples
        .points
        .iter()
        .map(|p| rot * (p.w - samples.meta.reference))
        .filter(|w| norm.whole_cone.contains(*w) || norm.half_cone.contains(*w))
        .map(|w| w.norm())
        .fold(0.0, f64::max)
}

/// `I_α`: the three closed arcs left after removing `α`-neighbourhoods of
/// `π/2`, `π` and `3π/2`.
pub fn i_alpha(alpha: f64) -> ArcSet {
    ArcSet::from_arcs([
        (-FRAC_PI_2 + alpha, FRAC_PI_2 - alpha),
        (FRAC_PI_2 + alpha, PI - alpha),
        (PI + alpha, 1.5 * PI - alpha),
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IAlphaFit {
    pub rotation: f64,
    pub alpha: f64,
    pub margin: f64,
}

/// Rotation (1e-3 rad grid, smallest on ties) maximizing the distance of the
/// rotated directions from `π/2, π, 3π/2`; `Some` when the rotated set sits
/// inside some `I_α` with a `tol` margin.
pub fn fit_i_alpha(arcs: &ArcSet, tol: f64) -> Option<IAlphaFit> {
    if arcs.is_empty() {
        return None;
    }
    let steps = (TAU / ALPHA_STEP).floor() as usize;
    let mut best = (0.0, f64::NEG_INFINITY);
    for k in 0..steps {
        let rot = k as f64 * ALPHA_STEP;
        let m = excluded_margin(arcs, rot);
        if m > best.1 {
            best = (rot, m);
        }
    }
    let alpha = aperture_from_margin(best.1, tol)?;
    Some(IAlphaFit { rotation: best.0, alpha, margin: best.1 })
}

// ---------------------------------------------------------------------------
// Φ envelope

/// Nested domain radii used by the Φ envelope, as fractions of `R`.
pub const PHI_SCALES: usize = 7;

/// `Φ(u) = max(sup{v : u + iv ∈ range}, 0)` on u-bins, measured over the
/// nested domains `|z| ≤ R 2^{-k}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhiProfile {
    pub radius: f64,
    pub edges: Vec<f64>,
    /// Ascending domain radii.
    pub scales: Vec<f64>,
    /// `values[k][b]`: Φ on bin `b` from samples with `|z| ≤ scales[k]`;
    /// `None` for bins without samples.
    pub values: Vec<Vec<Option<f64>>>,
    /// Largest `|u|` seen at each scale.
    pub u_extent: Vec<f64>,
    pub empty_bins: usize,
}

impl PhiProfile {
    /// Φ over the full domain.
    pub fn phi(&self) -> &[Option<f64>] {
        self.values.last().map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn bin_centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }
}

pub const DEFAULT_PHI_BINS: usize = 4096;

pub fn phi_profile(samples: &RangeSample, bins: usize) -> Result<PhiProfile> {
    if bins == 0 {
        return Err(Error::InvalidArgument("bins must be positive".into()));
    }
    let radius = samples.meta.radius;
    let umax = samples.points.iter().map(|p| p.w.re.abs()).filter(|x| x.is_finite()).fold(0.0, f64::max);
    let span = if umax > 0.0 { umax } else { 1.0 };
    let width = 2.0 * span / bins as f64;
    let edges: Vec<f64> = (0..=bins).map(|k| -span + k as f64 * width).collect();
    let scales: Vec<f64> = (0..PHI_SCALES).rev().map(|k| radius / 2f64.powi(k as i32)).collect();

    let mut values = vec![vec![None::<f64>; bins]; PHI_SCALES];
    let mut u_extent = vec![0.0f64; PHI_SCALES];
    for p in &samples.points {
        let (u, v) = (p.w.re, p.w.im);
        if !u.is_finite() || !v.is_finite() {
            continue;
        }
        let b = (((u + span) / width) as usize).min(bins - 1);
        let rz = p.z.norm();
        let first = scales.iter().position(|&s| rz <= s * (1.0 + 1e-12)).unwrap_or(PHI_SCALES);
        for k in first..PHI_SCALES {
            let slot = &mut values[k][b];
            let clipped = v.max(0.0);
            *slot = Some(slot.map_or(clipped, |old: f64| old.max(clipped)));
            u_extent[k] = u_extent[k].max(u.abs());
        }
    }
    let empty_bins = values[PHI_SCALES - 1].iter().filter(|v| v.is_none()).count();
    Ok(PhiProfile { radius, edges, scales, values, u_extent, empty_bins })
}

/// Tail ratio at one scale: the largest `Φ(u)/|u|` over bins with
/// `|u| ∈ [U/4, U/2]`, `U` the u-extent at that scale.
fn tail_ratio(profile: &PhiProfile, k: usize) -> Option<(f64, f64)> {
    let ext = profile.u_extent[k];
    if ext <= 0.0 {
        return None;
    }
    let (lo, hi) = (ext / 4.0, ext / 2.0);
    let mut best: Option<(f64, f64)> = None;
    for (c, val) in profile.bin_centers().iter().zip(&profile.values[k]) {
        if c.abs() < lo || c.abs() > hi {
            continue;
        }
        if let Some(phi) = val {
            let r = phi / c.abs();
            if best.map_or(true, |(_, b)| r > b) {
                best = Some((*c, r));
            }
        }
    }
    best
}

/// Checks `Φ(u)/|u| → 0`: the tail ratio, measured at dyadic domain scales
/// over a window `|u| ∈ [U/4, U/2]` that moves out with the scale, must not
/// increase and must end at most a tenth of where it started.
pub fn phi_sublinearity_check(profile: &PhiProfile) -> Result<TheoremVerdict> {
    let k_last = profile.scales.len() - 1;
    let first = (0..=k_last).find(|&k| profile.u_extent[k] > 0.0);
    let Some(k0) = first else {
        return Err(Error::InsufficientData("u vanishes on every sample".into()));
    };
    let span = (profile.u_extent[k_last] / 2.0) / (profile.u_extent[k0] / 4.0);
    if span < 100.0 {
        return Err(Error::InsufficientData(format!(
            "u-range spans {:.1}x across scales, need at least two decades",
            span
        )));
    }
    let mut ratios = Vec::new();
    for k in k0..=k_last {
        match tail_ratio(profile, k) {
            Some(r) => ratios.push((k, r)),
            None => {
                return Err(Error::InsufficientData(format!(
                    "no covered u-bins in the tail window at scale {}",
                    profile.scales[k]
                )))
            }
        }
    }
    let mut violations = Vec::new();
    for w in ratios.windows(2) {
        let (_, (_, prev)) = w[0];
        let (k, (u, cur)) = w[1];
        if cur > prev * (1.0 + 1e-9) + 1e-15 {
            violations.push(
                Witness::note(format!("tail ratio grows at domain radius {}", profile.scales[k]))
                    .with("u", u)
                    .with("ratio", cur)
                    .with("previous_ratio", prev),
            );
        }
    }
    let initial = ratios[0].1 .1;
    let last = ratios[ratios.len() - 1].1;
    if last.1 > 0.1 * initial + 1e-15 {
        violations.push(
            Witness::note("final tail ratio exceeds a tenth of the initial one")
                .with("u", last.0)
                .with("ratio", last.1)
                .with("initial_ratio", initial),
        );
    }
    let ratio_list: Vec<f64> = ratios.iter().map(|(_, (_, r))| *r).collect();
    let mut verdict = TheoremVerdict::new(
        TheoremId::PhiGrowth,
        Check::pass(),
        Check::from_violations(violations),
    )
    .param("tail_ratios", ratio_list)
    .sampled("radius", profile.radius)
    .sampled("bins", profile.edges.len() - 1)
    .noted("checks the growth conclusion Φ(u)/|u| → 0 only; the half-plane hypothesis on directions is not evaluated here");
    verdict.applicable = false;
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arcs::lewis_cross;

    #[test]
    fn antipodal_examples() {
        assert!(antipodal_pairs(&lewis_cross(), 1e-3).is_empty());
        let pair = antipodal_pairs(&ArcSet::points(&[0.0, PI]), 1e-6);
        assert!(pair.contains(0.0) && pair.contains(PI));
        let wedge = ArcSet::arc(-FRAC_PI_2, FRAC_PI_2).union(&ArcSet::point(PI));
        let anti = antipodal_pairs(&wedge, 0.0);
        for t in [0.0, FRAC_PI_2, PI, 1.5 * PI] {
            assert!(anti.contains(t), "{t}");
        }
        assert!(!anti.contains(0.5));
    }

    #[test]
    fn gap_alpha_examples() {
        let tol = 1e-2;
        let lewis = lewis_cross();
        assert!(gap_margin(&lewis, PI / 8.0) >= tol);
        let a = antipodal_gap_alpha(&lewis, tol).unwrap();
        assert!(gap_margin(&lewis, a) >= gap_margin(&lewis, PI / 8.0) - 1e-3);

        assert_eq!(antipodal_gap_alpha(&ArcSet::points(&[0.0, PI]), tol), None);
        let ten = 10f64.to_radians();
        assert_eq!(antipodal_gap_alpha(&ArcSet::arc(ten, TAU), tol), None);
    }

    #[test]
    fn normalization_examples() {
        let tol = 1e-2;
        let n = cone_avoidance_normalize(&lewis_cross(), tol).unwrap();
        assert!(n.a > 1.0);
        let forbidden = n.whole_cone.directions().union(&n.half_cone.directions());
        assert!(n.rotated_arcs.intersection(&forbidden).is_empty());

        assert!(cone_avoidance_normalize(&ArcSet::points(&[0.0, PI]), tol).is_none());
        let single = cone_avoidance_normalize(&ArcSet::point(PI / 3.0), tol).unwrap();
        assert!(single.a > 1.0);
    }

    #[test]
    fn cones_membership() {
        let whole = Cone { axis: FRAC_PI_2, half_aperture: 0.3, kind: ConeKind::Whole };
        assert!(whole.contains(Complex64::new(0.0, -5.0)));
        assert!(!whole.contains(Complex64::new(1.0, 0.0)));
        let half = Cone { axis: PI, half_aperture: 0.3, kind: ConeKind::Half };
        assert!(half.contains(Complex64::new(-2.0, 0.1)));
        assert!(!half.contains(Complex64::new(2.0, 0.1)));
    }

    #[test]
    fn i_alpha_shape() {
        let s = i_alpha(0.2);
        assert!(s.contains(0.0) && s.contains(3.0 * FRAC_PI_4) && s.contains(5.0 * FRAC_PI_4));
        assert!(!s.contains(FRAC_PI_2) && !s.contains(PI) && !s.contains(1.5 * PI));
        // the arcs contain antipodal pairs, e.g. 3π/4 and -π/4
        assert!(s.contains(-FRAC_PI_4));
    }

    #[test]
    fn fit_i_alpha_for_diagonal_line() {
        let d = ArcSet::points(&[FRAC_PI_4, 5.0 * FRAC_PI_4]);
        let fit = fit_i_alpha(&d, 1e-2).unwrap();
        assert!(d.rotate(fit.rotation).is_subset_of(&i_alpha(fit.alpha)));
        assert!(fit_i_alpha(&ArcSet::full(), 1e-2).is_none());
    }
}
