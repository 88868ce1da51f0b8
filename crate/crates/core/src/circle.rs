//! Circle functionals of harmonic functions.
//!
//! `M(u, z, r)` is the maximum of `u` over the circle `|w - z| = r`, and
//! `M(|u|, z, r)` the maximum of `|u|` there. For harmonic `u` these agree
//! with the suprema over the closed disc by the maximum principle.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::HarmonicComponent;

pub const DEFAULT_CIRCLE_SAMPLES: usize = 4096;
pub const FOURIER_NODES: usize = 1024;
/// Relative slack used by every "holds" comparison in this module.
pub const HOLDS_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleMax {
    pub center: Complex64,
    pub radius: f64,
    pub value: f64,
    pub argmax_angle: f64,
    pub samples_used: usize,
}

/// Maximum and minimum of a periodic function of the angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrema {
    pub max: f64,
    pub argmax: f64,
    pub min: f64,
    pub argmin: f64,
}

impl Extrema {
    pub fn abs_max(&self) -> f64 {
        self.max.abs().max(self.min.abs())
    }
}

fn golden_max(g: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = g(x1);
    let mut f2 = g(x2);
    for _ in 0..80 {
        if (b - a).abs() < 1e-14 * (1.0 + a.abs()) {
            break;
        }
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = g(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = g(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Samples `g` at `n` uniform angles, then refines the best three local
/// maxima (and minima) by golden-section search on their brackets.
/// Ties resolve to the smaller angle.
pub fn periodic_extrema(g: impl Fn(f64) -> f64, n: usize) -> Extrema {
    let n = n.max(8);
    let h = TAU / n as f64;
    let vals: Vec<f64> = (0..n).map(|k| g(k as f64 * h)).collect();

    let refine = |sign: f64| -> (f64, f64) {
        let s = |t: f64| sign * g(t);
        let mut peaks: Vec<usize> = (0..n)
            .filter(|&k| {
                let v = sign * vals[k];
                v >= sign * vals[(k + n - 1) % n] && v >= sign * vals[(k + 1) % n]
            })
            .collect();
        if peaks.is_empty() {
            peaks.push(0);
        }
        peaks.sort_by(|&a, &b| {
            (sign * vals[b]).partial_cmp(&(sign * vals[a])).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b))
        });
        let mut best_t = peaks[0] as f64 * h;
        let mut best_v = sign * vals[peaks[0]];
        for &k in peaks.iter().take(3) {
            let t0 = k as f64 * h;
            let (t, v) = golden_max(&s, t0 - h, t0 + h);
            if v > best_v || (v == best_v && t.rem_euclid(TAU) < best_t) {
                best_v = v;
                best_t = t.rem_euclid(TAU);
            }
        }
        (best_t, sign * best_v)
    };

    let (argmax, max) = refine(1.0);
    let (argmin, min) = refine(-1.0);
    Extrema { max, argmax, min, argmin }
}

fn on_circle(z: Complex64, r: f64, t: f64) -> Complex64 {
    z + Complex64::from_polar(r, t)
}

pub fn circle_extrema(u: &HarmonicComponent, z: Complex64, r: f64, n: usize) -> Extrema {
    periodic_extrema(|t| u.eval(on_circle(z, r, t)), n)
}

/// `M(u, z, r)`.
pub fn circle_max(u: &HarmonicComponent, z: Complex64, r: f64) -> CircleMax {
    circle_max_with(u, z, r, DEFAULT_CIRCLE_SAMPLES)
}

pub fn circle_max_with(u: &HarmonicComponent, z: Complex64, r: f64, n: usize) -> CircleMax {
    let e = circle_extrema(u, z, r, n);
    CircleMax { center: z, radius: r, value: e.max, argmax_angle: e.argmax, samples_used: n }
}

/// `M(|u|, z, r)`.
pub fn circle_max_abs(u: &HarmonicComponent, z: Complex64, r: f64) -> f64 {
    circle_extrema(u, z, r, DEFAULT_CIRCLE_SAMPLES).abs_max()
}

/// Trapezoidal Fourier coefficients of `θ ↦ u(center + r e^{iθ})`, normalized
/// so that `u = Σ_k Re(c_k e^{ikθ})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierProfile {
    pub center: Complex64,
    pub radius: f64,
    pub coefficients: Vec<Complex64>,
}

impl FourierProfile {
    pub fn reconstruct(&self, theta: f64) -> f64 {
        self.coefficients
            .iter()
            .enumerate()
            .map(|(k, c)| (c * Complex64::from_polar(1.0, k as f64 * theta)).re)
            .sum()
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

pub fn fourier_profile(u: &HarmonicComponent, center: Complex64, radius: f64, k_max: usize) -> FourierProfile {
    let n = FOURIER_NODES.max(4 * (k_max + 1));
    let h = TAU / n as f64;
    let vals: Vec<f64> = (0..n).map(|j| u.eval(on_circle(center, radius, j as f64 * h))).collect();
    let coefficients = (0..=k_max)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, v) in vals.iter().enumerate() {
                // reduce the phase index mod n to keep the angle small
                let phase = ((k * j) % n) as f64 * h;
                acc += Complex64::from_polar(*v, -phase);
            }
            if k == 0 {
                acc / n as f64
            } else {
                acc * (2.0 / n as f64)
            }
        })
        .collect();
    FourierProfile { center, radius, coefficients }
}

/// Result of a pointwise inequality check `lhs ≤ rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl InequalityCheck {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        let holds = lhs <= rhs + HOLDS_SLACK * rhs.abs().max(lhs.abs());
        Self { lhs, rhs, holds }
    }
}

/// Smallest value of `u` found on the closed disc: the refined boundary
/// minimum plus a polar grid of the interior.
fn disc_minimum(u: &HarmonicComponent, z0: Complex64, r: f64) -> (Complex64, f64) {
    let e = circle_extrema(u, z0, r, DEFAULT_CIRCLE_SAMPLES);
    let mut best = (on_circle(z0, r, e.argmin), e.min);
    let c = u.eval(z0);
    if c < best.1 {
        best = (z0, c);
    }
    for i in 1..16 {
        let rho = r * i as f64 / 16.0;
        for j in 0..256 {
            let w = on_circle(z0, rho, TAU * j as f64 / 256.0);
            let val = u.eval(w);
            if val < best.1 {
                best = (w, val);
            }
        }
    }
    best
}

/// Harnack's bound `M(u, z0, s) ≤ (r+s)/(r-s) · u(z0)` for `u > 0` on `D̄(z0, r)`.
pub fn harnack_bound_check(u: &HarmonicComponent, z0: Complex64, r: f64, s: f64) -> Result<InequalityCheck> {
    if !(r > 0.0) || !(s > 0.0 && s < r) {
        return Err(Error::InvalidArgument(format!("need 0 < s < r, got s = {s}, r = {r}")));
    }
    let (w, min) = disc_minimum(u, z0, r);
    if !(min > 0.0) {
        return Err(Error::NotPositive { x: w.re, y: w.im, value: min });
    }
    let lhs = circle_max(u, z0, s).value;
    let rhs = harnack_factor(r, s) * u.eval(z0);
    Ok(InequalityCheck::new(lhs, rhs))
}

pub fn harnack_factor(r: f64, s: f64) -> f64 {
    (r + s) / (r - s)
}

/// `M(|u|, z0, 2r/3) ≤ 4 M(u, z0, r)` for `u(z0) = 0`.
pub fn lemma_abs_check(u: &HarmonicComponent, z0: Complex64, r: f64) -> Result<InequalityCheck> {
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {r}")));
    }
    let outer = circle_extrema(u, z0, r, DEFAULT_CIRCLE_SAMPLES);
    let at_center = u.eval(z0);
    if at_center.abs() > 1e-9 * outer.abs_max().max(1.0) {
        return Err(Error::CenterNotZero { value: at_center });
    }
    let lhs = circle_max_abs(u, z0, 2.0 * r / 3.0);
    Ok(InequalityCheck::new(lhs, 4.0 * outer.max))
}

/// Multiplicity of a zero together with the radius where it stabilized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Multiplicity {
    pub order: usize,
    pub radius: f64,
}

const MULTIPLICITY_K: usize = 64;

fn leading_index(p: &FourierProfile, tol: f64) -> Option<usize> {
    let scale = p.coefficients[1..].iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return None;
    }
    (1..p.coefficients.len()).find(|&k| p.coefficients[k].norm() > tol * scale)
}

/// Order of the zero of `u` at `z0`: the first Fourier index on a small circle
/// whose coefficient is not negligible. The radius is halved (at most eight
/// times) until two consecutive radii agree.
pub fn multiplicity(u: &HarmonicComponent, z0: Complex64, r: f64, tol: f64) -> Result<Multiplicity> {
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {r}")));
    }
    let first = fourier_profile(u, z0, r, MULTIPLICITY_K);
    let scale = first.max_abs_coefficient();
    if u.eval(z0).abs() > tol * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::CenterNotZero { value: u.eval(z0) });
    }
    let mut prev = leading_index(&first, tol);
    let mut radius = r;
    for _ in 0..8 {
        radius /= 2.0;
        let p = fourier_profile(u, z0, radius, MULTIPLICITY_K);
        let cur = leading_index(&p, tol);
        if let (Some(a), Some(b)) = (prev, cur) {
            if a == b {
                return Ok(Multiplicity { order: a, radius: radius * 2.0 });
            }
        }
        prev = cur;
    }
    Err(Error::Degenerate(format!(
        "no stable leading Fourier index near {}+{}i (u may vanish identically)",
        z0.re, z0.im
    )))
}

/// Roots of `g` on `[0, 2π)` located by sign changes on `n` samples and
/// refined by bisection.
pub fn periodic_sign_changes(g: impl Fn(f64) -> f64, n: usize) -> Vec<f64> {
    let h = TAU / n as f64;
    let vals: Vec<f64> = (0..n).map(|k| g(k as f64 * h)).collect();
    let mut roots = Vec::new();
    for k in 0..n {
        let (a, b) = (vals[k], vals[(k + 1) % n]);
        if a == 0.0 {
            roots.push(k as f64 * h);
            continue;
        }
        if b != 0.0 && (a < 0.0) != (b < 0.0) {
            let (mut lo, mut hi) = (k as f64 * h, (k + 1) as f64 * h);
            let neg_lo = a < 0.0;
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let m = g(mid);
                if m == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (m < 0.0) == neg_lo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            roots.push((0.5 * (lo + hi)).rem_euclid(TAU));
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots
}

/// Angular distance on the circle.
pub fn angle_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

#[allow(dead_code)]
pub(crate) fn wrap_pi(t: f64) -> f64 {
    let x = (t + PI).rem_euclid(TAU) - PI;
    if x == -PI {
        PI
    } else {
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_expr, HarmonicComponent};

    fn re(s: &str) -> HarmonicComponent {
        HarmonicComponent::re(parse_expr(s).unwrap())
    }
    fn im(s: &str) -> HarmonicComponent {
        HarmonicComponent::im(parse_expr(s).unwrap())
    }
    fn c(x: f64, y: f64) -> Complex64 {
        Complex64::new(x, y)
    }

    #[test]
    fn circle_max_of_linear() {
        let m = circle_max(&re("z"), c(0.0, 0.0), 2.0);
        assert!((m.value - 2.0).abs() < 1e-12);
        assert!(angle_dist(m.argmax_angle, 0.0) < 1e-6);
    }

    #[test]
    fn circle_max_of_cubic() {
        let m = circle_max(&re("z^3"), c(0.0, 0.0), 1.0);
        assert!((m.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn circle_max_matches_brute_force() {
        // brute-force oracle: 10^6 uniform angles of e^{cos t} sin(sin t)
        let n = 1_000_000;
        let brute = (0..n)
            .map(|k| {
                let t = TAU * k as f64 / n as f64;
                t.cos().exp() * t.sin().sin()
            })
            .fold(f64::MIN, f64::max);
        let m = circle_max(&im("exp(z)"), c(0.0, 0.0), 1.0);
        assert!(m.value >= brute - 1e-12);
        assert!((m.value - brute).abs() < 1e-8, "{} vs {}", m.value, brute);
    }

    #[test]
    fn mean_value_and_reconstruction() {
        let u = im("exp(z) + z^3");
        let z0 = c(0.3, -0.2);
        let p = fourier_profile(&u, z0, 1.0, 64);
        assert!((p.coefficients[0].re - u.eval(z0)).abs() < 1e-9 * u.eval(z0).abs().max(1.0));
        for k in 0..50 {
            let t = 0.1234 + k as f64 * 0.37;
            let direct = u.eval(z0 + Complex64::from_polar(1.0, t));
            let rec = p.reconstruct(t);
            assert!((direct - rec).abs() <= 1e-8 * direct.abs().max(1.0));
        }
    }

    #[test]
    fn harnack_examples() {
        let one = re("1");
        let chk = harnack_bound_check(&one, c(0.0, 0.0), 3.0, 2.0).unwrap();
        assert!((chk.rhs - 5.0).abs() < 1e-12);
        assert!((chk.lhs - 1.0).abs() < 1e-12);
        assert!(chk.holds);

        let u = re("10 + z");
        let chk = harnack_bound_check(&u, c(0.0, 0.0), 1.0, 2.0 / 3.0).unwrap();
        assert!((chk.lhs - (10.0 + 2.0 / 3.0)).abs() < 1e-12);
        assert!((chk.rhs - 50.0).abs() < 1e-12);
        assert!(chk.holds);
    }

    #[test]
    fn harnack_factor_is_five() {
        assert_eq!(harnack_factor(3.0, 2.0), 5.0);
        assert!((harnack_factor(1.0, 2.0 / 3.0) - 5.0).abs() < 1e-15);
    }

    #[test]
    fn harnack_rejects_non_positive() {
        let err = harnack_bound_check(&re("z"), c(0.0, 0.0), 1.0, 0.5).unwrap_err();
        match err {
            Error::NotPositive { value, .. } => assert!(value <= 0.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn abs_lemma_examples() {
        let chk = lemma_abs_check(&re("z"), c(0.0, 0.0), 1.0).unwrap();
        assert!((chk.lhs - 2.0 / 3.0).abs() < 1e-12);
        assert!((chk.rhs - 4.0).abs() < 1e-12);
        assert!(chk.holds);

        let chk = lemma_abs_check(&im("exp(z)"), c(0.0, 0.0), 1.0).unwrap();
        let oracle_rhs = 4.0 * circle_max(&im("exp(z)"), c(0.0, 0.0), 1.0).value;
        assert!((chk.rhs - oracle_rhs).abs() < 1e-12);
        assert!(chk.holds);

        let chk = lemma_abs_check(&re("z^5"), c(0.0, 0.0), 1.0).unwrap();
        assert!((chk.lhs - (2.0f64 / 3.0).powi(5)).abs() < 1e-12);
        assert!(chk.holds);

        assert!(matches!(lemma_abs_check(&re("1 + z"), c(0.0, 0.0), 1.0), Err(Error::CenterNotZero { .. })));
    }

    #[test]
    fn multiplicity_examples() {
        let z0 = c(0.0, 0.0);
        assert_eq!(multiplicity(&re("z^3"), z0, 1.0, 1e-6).unwrap().order, 3);
        assert_eq!(multiplicity(&im("exp(z)"), z0, 1e-2, 1e-6).unwrap().order, 1);
        assert_eq!(multiplicity(&re("z^2 + 0.001*z^3"), z0, 1.0, 1e-6).unwrap().order, 2);
    }

    #[test]
    fn multiplicity_degenerate() {
        assert!(multiplicity(&re("i*z^2 - i*z^2"), c(0.0, 0.0), 1.0, 1e-6).is_err());
    }

    #[test]
    fn maximum_principle_monotone() {
        let u = im("exp(z) + 0.5*z^2");
        let z = c(0.2, 0.1);
        let vals: Vec<f64> = [0.25, 0.5, 1.0, 2.0].iter().map(|&r| circle_max(&u, z, r).value).collect();
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        assert!(vals[0] >= u.eval(z));
    }

    #[test]
    fn sign_changes_of_cos3() {
        let roots = periodic_sign_changes(|t| (3.0 * t).cos(), 4096);
        assert_eq!(roots.len(), 6);
        for (k, r) in roots.iter().enumerate() {
            let expect = PI / 6.0 + k as f64 * PI / 3.0;
            assert!((r - expect).abs() < 1e-12);
        }
    }
}
