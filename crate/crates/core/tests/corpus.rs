//! Direction estimates and theorem verdicts over the built-in catalog.

use std::f64::consts::{FRAC_PI_2, PI};

use harmonic_range::catalog::{Catalog, CatalogItem};
use harmonic_range::range::{
    antipodal_pairs, default_radius, estimate_directions, phi_profile, phi_sublinearity_check, sample_range,
    DirectionConfig, DirectionEstimate, DEFAULT_N_GRID,
};
use harmonic_range::theorems::{check_antipodal_theorem, check_halfplane_theorem};
use harmonic_range::{ArcSet, Error, HarmonicMap};

const TOL: f64 = 2.0 * PI / 180.0;

fn estimate(f: &HarmonicMap) -> DirectionEstimate {
    let s = sample_range(f, default_radius(f), DEFAULT_N_GRID, 0).unwrap();
    estimate_directions(&s, &DirectionConfig::default()).unwrap()
}

#[test]
fn catalog_expectations_hold() {
    let cat = Catalog::builtin().unwrap();
    for e in &cat.entries {
        let arcs = match e.item().unwrap() {
            CatalogItem::Arcs(a) => a,
            CatalogItem::Map(f) => estimate(&f).arcs,
        };
        if let Some(want) = e.expected.directions() {
            let h = arcs.hausdorff(&want);
            let both_empty = arcs.is_empty() && want.is_empty();
            assert!(both_empty || h <= TOL, "{}: got {arcs}, want {want} (distance {:.3} deg)", e.name, h.to_degrees());
        }
        assert_eq!(!antipodal_pairs(&arcs, TOL).is_empty(), e.expected.antipodal_pair, "{}: {arcs}", e.name);
    }
}

#[test]
fn every_nonconstant_map_has_an_antipodal_pair() {
    let cat = Catalog::builtin().unwrap();
    let mut seen = 0;
    for e in cat.maps() {
        let f = e.map().unwrap();
        if f.is_constant() {
            continue;
        }
        let est = estimate(&f);
        assert!(!antipodal_pairs(&est.arcs, TOL).is_empty(), "{}: {}", e.name, est.arcs);
        assert!(check_antipodal_theorem(&f, &est, TOL).consistent());
        seen += 1;
    }
    assert!(seen >= 12);
}

#[test]
fn bounded_map_has_no_directions() {
    let f = HarmonicMap::parse("u=re(3); v=re(-7)").unwrap();
    let est = estimate(&f);
    assert!(est.arcs.is_empty());
    let v = check_antipodal_theorem(&f, &est, TOL);
    assert!(v.hypothesis.holds && v.conclusion.holds);
}

#[test]
fn vertical_line_fits_the_half_plane() {
    let f = HarmonicMap::parse("u=re(5); v=im(z)").unwrap();
    let v = check_halfplane_theorem(&f, 0.0, &estimate(&f), TOL);
    assert!(v.hypothesis.holds && v.conclusion.holds);
    assert_eq!(v.params["boundary_case"], true);
}

#[test]
fn dependent_line_is_a_boundary_case() {
    // directions atan2(2, 1) and its opposite; the half circle centered a
    // quarter turn away has them as endpoints
    let f = HarmonicMap::parse("u=re(z); v=re(2*z)").unwrap();
    let est = estimate(&f);
    let t = 2f64.atan2(1.0);
    assert!(est.arcs.hausdorff(&ArcSet::points(&[t, t + PI])) <= TOL);
    let v = check_halfplane_theorem(&f, t + FRAC_PI_2, &est, TOL);
    assert!(v.hypothesis.holds && v.conclusion.holds && v.consistent());
    let off = check_halfplane_theorem(&f, t, &est, TOL);
    assert!(!off.hypothesis.holds && off.consistent());
}

#[test]
fn identity_has_full_circle_and_fails_half_plane() {
    let f = HarmonicMap::parse("u=re(z); v=im(z)").unwrap();
    let est = estimate(&f);
    assert!(est.arcs.is_full());
    assert!(!check_halfplane_theorem(&f, 0.3, &est, TOL).hypothesis.holds);
}

#[test]
fn phi_examples() {
    // v bounded above: Φ/|u| → 0
    let f = HarmonicMap::parse("u=re(z); v=re(2)").unwrap();
    let s = sample_range(&f, 100.0, 256, 0).unwrap();
    let v = phi_sublinearity_check(&phi_profile(&s, 4096).unwrap()).unwrap();
    assert!(v.conclusion.holds);
    // identity: Φ(u)/|u| stays of order one
    let f = HarmonicMap::parse("u=re(z); v=im(z)").unwrap();
    let s = sample_range(&f, 100.0, 256, 0).unwrap();
    let v = phi_sublinearity_check(&phi_profile(&s, 4096).unwrap()).unwrap();
    assert!(!v.conclusion.holds && !v.conclusion.witnesses.is_empty());
    // u = x, v = e^x sin y: Φ grows like e^u
    let f = HarmonicMap::parse("u=re(z); v=im(exp(z))").unwrap();
    let s = sample_range(&f, 30.0, 256, 0).unwrap();
    let v = phi_sublinearity_check(&phi_profile(&s, 4096).unwrap()).unwrap();
    assert!(!v.conclusion.holds);
}

#[test]
fn phi_profile_of_identity_is_a_half_circle() {
    let f = HarmonicMap::parse("u=re(z); v=im(z)").unwrap();
    let s = sample_range(&f, 1.0, 256, 0).unwrap();
    let p = phi_profile(&s, 64).unwrap();
    for (u, phi) in p.bin_centers().iter().zip(p.phi()) {
        let phi = phi.expect("every bin is covered");
        // the bin's sup is attained somewhere in [u - w/2, u + w/2]
        let w = 2.0 / 64.0;
        let hi = (1.0 - (u.abs() - w / 2.0).max(0.0).powi(2)).sqrt();
        let lo = (1.0 - (u.abs() + w / 2.0).min(1.0).powi(2)).sqrt();
        assert!(phi <= hi + 1e-9 && phi >= lo - 1e-3, "u = {u}: {phi} not in [{lo}, {hi}]");
    }
}

#[test]
fn phi_rejects_short_spans() {
    let f = HarmonicMap::parse("u=re(3); v=im(z)").unwrap();
    let s = sample_range(&f, 10.0, 64, 0).unwrap();
    let p = phi_profile(&s, 256).unwrap();
    assert!(matches!(phi_sublinearity_check(&p), Err(Error::InsufficientData(_))));
}

#[test]
fn estimates_are_deterministic() {
    let f = HarmonicMap::parse("u=re(z); v=im(exp(z) + z^2)").unwrap();
    let a = serde_json::to_string(&estimate(&f)).unwrap();
    let b = serde_json::to_string(&estimate(&f)).unwrap();
    assert_eq!(a, b);
}
