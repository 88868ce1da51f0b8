//! Finite unions of closed arcs on the unit circle.

use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::circle::angle_dist;

/// A closed subset of the circle made of finitely many closed arcs.
///
/// Internally the arcs are cut at angle 0 and kept as sorted, pairwise
/// disjoint intervals of `[0, 2π]`; an arc through angle 0 is stored as two
/// pieces `[a, 2π]` and `[0, b]` and reassembled by [`ArcSet::arcs`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ArcSet {
    pieces: Vec<(f64, f64)>,
}

const EPS: f64 = 1e-12;

impl ArcSet {
    pub fn empty() -> Self {
        Self { pieces: Vec::new() }
    }

    pub fn full() -> Self {
        Self { pieces: vec![(0.0, TAU)] }
    }

    /// Closed arc from `lo` counter-clockwise to `hi`. When `hi - lo ≥ 2π`
    /// the arc is the full circle.
    pub fn arc(lo: f64, hi: f64) -> Self {
        let mut s = Self::empty();
        s.push_arc(lo, hi);
        s.normalize();
        s
    }

    pub fn point(theta: f64) -> Self {
        Self::arc(theta, theta)
    }

    pub fn points(thetas: &[f64]) -> Self {
        Self::from_arcs(thetas.iter().map(|&t| (t, t)))
    }

    pub fn from_arcs(arcs: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let mut s = Self::empty();
        for (lo, hi) in arcs {
            s.push_arc(lo, hi);
        }
        s.normalize();
        s
    }

    fn push_arc(&mut self, lo: f64, hi: f64) {
        let len = hi - lo;
        if len >= TAU - EPS {
            self.pieces.push((0.0, TAU));
            return;
        }
        let len = len.max(0.0);
        let a = lo.rem_euclid(TAU);
        let b = a + len;
        if b <= TAU {
            self.pieces.push((a, b));
        } else {
            self.pieces.push((a, TAU));
            self.pieces.push((0.0, b - TAU));
        }
    }

    fn normalize(&mut self) {
        self.pieces.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap().then(x.1.partial_cmp(&y.1).unwrap()));
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(self.pieces.len());
        for &(a, b) in &self.pieces {
            match out.last_mut() {
                Some(last) if a <= last.1 + EPS => last.1 = last.1.max(b),
                _ => out.push((a, b)),
            }
        }
        self.pieces = out;
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.measure() >= TAU - 1e-9
    }

    pub fn measure(&self) -> f64 {
        self.pieces.iter().map(|(a, b)| b - a).sum()
    }

    /// Arcs as `(lo, hi)` with `lo ∈ [0, 2π)` and `hi ≥ lo`; an arc through
    /// angle 0 has `hi > 2π`.
    pub fn arcs(&self) -> Vec<(f64, f64)> {
        if self.is_full() {
            return vec![(0.0, TAU)];
        }
        let mut p = self.pieces.clone();
        if p.len() >= 2 && p[0].0 <= EPS && p[p.len() - 1].1 >= TAU - EPS {
            let first = p.remove(0);
            let last = p.last_mut().unwrap();
            last.1 = TAU + first.1;
        } else if p.len() == 1 && p[0].0 <= EPS && p[0].1 >= TAU - EPS {
            return vec![(0.0, TAU)];
        }
        p.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        p
    }

    pub fn contains(&self, theta: f64) -> bool {
        self.distance_to(theta) <= EPS
    }

    /// Angular distance from `theta` to the set (`∞` for the empty set).
    pub fn distance_to(&self, theta: f64) -> f64 {
        let t = theta.rem_euclid(TAU);
        let mut best = f64::INFINITY;
        for &(a, b) in &self.pieces {
            if t >= a - EPS && t <= b + EPS {
                return 0.0;
            }
            best = best.min(angle_dist(t, a)).min(angle_dist(t, b));
        }
        best
    }

    pub fn union(&self, other: &ArcSet) -> ArcSet {
        let mut s = ArcSet { pieces: self.pieces.iter().chain(other.pieces.iter()).copied().collect() };
        s.normalize();
        s
    }

    pub fn intersection(&self, other: &ArcSet) -> ArcSet {
        let mut out = Vec::new();
        for &(a, b) in &self.pieces {
            for &(c, d) in &other.pieces {
                let lo = a.max(c);
                let hi = b.min(d);
                if lo <= hi + EPS {
                    out.push((lo, hi.max(lo)));
                }
            }
        }
        let mut s = ArcSet { pieces: out };
        s.normalize();
        s
    }

    /// Closure of the complement.
    pub fn complement(&self) -> ArcSet {
        if self.pieces.is_empty() {
            return ArcSet::full();
        }
        let mut out = Vec::new();
        let mut cursor = 0.0;
        for &(a, b) in &self.pieces {
            if a > cursor + EPS {
                out.push((cursor, a));
            }
            cursor = cursor.max(b);
        }
        if cursor < TAU - EPS {
            out.push((cursor, TAU));
        }
        let mut s = ArcSet { pieces: out };
        s.normalize();
        s
    }

    pub fn rotate(&self, by: f64) -> ArcSet {
        ArcSet::from_arcs(self.arcs().into_iter().map(|(a, b)| (a + by, b + by)))
    }

    /// Closed `tol`-neighbourhood.
    pub fn fatten(&self, tol: f64) -> ArcSet {
        if tol <= 0.0 {
            return self.clone();
        }
        ArcSet::from_arcs(self.arcs().into_iter().map(|(a, b)| (a - tol, b + tol)))
    }

    /// Whether every point of `self` lies in `other`.
    pub fn is_subset_of(&self, other: &ArcSet) -> bool {
        (self.intersection(other).measure() - self.measure()).abs() <= 1e-9
            && self.arcs().iter().all(|&(a, b)| other.contains(a) && other.contains(b))
    }

    /// Open gaps between consecutive pieces, as `(start, end)` with `end`
    /// possibly beyond `2π` for the gap through angle 0.
    fn gaps(&self) -> Vec<(f64, f64)> {
        let p = &self.pieces;
        let mut out = Vec::new();
        for w in p.windows(2) {
            if w[1].0 > w[0].1 + EPS {
                out.push((w[0].1, w[1].0));
            }
        }
        if let (Some(first), Some(last)) = (p.first(), p.last()) {
            if first.0 + TAU > last.1 + EPS {
                out.push((last.1, first.0 + TAU));
            }
        }
        out
    }

    /// Sup over `self` of the distance to `other`.
    fn directed_hausdorff(&self, other: &ArcSet) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        if other.is_empty() {
            return f64::INFINITY;
        }
        // The distance to `other` is piecewise linear along an arc; its
        // maxima sit at arc endpoints or at midpoints of gaps of `other`.
        let mut candidates: Vec<f64> = Vec::new();
        for (a, b) in self.arcs() {
            candidates.push(a);
            candidates.push(b);
        }
        for (a, b) in other.gaps() {
            let mid = 0.5 * (a + b);
            if self.contains(mid) {
                candidates.push(mid);
            }
        }
        candidates.into_iter().map(|t| other.distance_to(t)).fold(0.0, f64::max)
    }

    /// Hausdorff distance on the circle (angular metric).
    pub fn hausdorff(&self, other: &ArcSet) -> f64 {
        match (self.is_empty(), other.is_empty()) {
            (true, true) => 0.0,
            (true, false) | (false, true) => f64::INFINITY,
            _ => self.directed_hausdorff(other).max(other.directed_hausdorff(self)),
        }
    }

    /// Midpoints of the arcs, useful as representative directions.
    pub fn midpoints(&self) -> Vec<f64> {
        self.arcs().into_iter().map(|(a, b)| (0.5 * (a + b)).rem_euclid(TAU)).collect()
    }
}

impl fmt::Display for ArcSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .arcs()
            .into_iter()
            .map(|(a, b)| {
                if (b - a).abs() <= EPS {
                    format!("{{{:.4}}}", a)
                } else {
                    format!("[{:.4}, {:.4}]", a, b)
                }
            })
            .collect();
        write!(f, "{}", if parts.is_empty() { "∅".to_string() } else { parts.join(" ∪ ") })
    }
}

impl Serialize for ArcSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.arcs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ArcSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let arcs: Vec<(f64, f64)> = Vec::deserialize(d)?;
        Ok(ArcSet::from_arcs(arcs))
    }
}

/// Directions of the Lewis range set: `e^{iπ/4}`, `-1`, `-i`.
pub fn lewis_cross() -> ArcSet {
    ArcSet::points(&[PI / 4.0, PI, 1.5 * PI])
}
