//! Cross-module flows through the public API: preset -> curvature pair ->
//! ambient -> margin, and a miniature search.

use curvgauge::claim::{claim_margin, CaseLabel, DEFAULT_LCF_TOL};
use curvgauge::search::{maximize_margin, Family, SearchConfig};
use curvgauge::slices::{integrate_slice, slice_hypersurface};
use curvgauge::{
    epsilon0_threshold, kappa, rotsym_margin, warped_ambient, ShapeSpectrum, TangentProjection,
    WarpedPreset,
};

#[test]
fn sphere_preset_flows_to_the_equality_margin() {
    // the equator slice of the round 5-sphere seen through every layer:
    // kappa = (1,1), umbilic spectrum, margin exactly zero, case I
    let preset = WarpedPreset::Sin;
    let t = std::f64::consts::FRAC_PI_2;
    let k = kappa(&preset, t).unwrap();
    assert!((k.kappa1 - 1.0).abs() < 1e-9 && (k.kappa2 - 1.0).abs() < 1e-9);

    let amb = warped_ambient(&k, &TangentProjection::zero());
    let slice = slice_hypersurface(&preset, t).unwrap();
    let spec = ShapeSpectrum::from_traceless([0.0; 4], slice.h);
    let report = claim_margin(&amb, &spec, DEFAULT_LCF_TOL).unwrap();
    assert_eq!(report.case, CaseLabel::I);
    assert!(report.margin.abs() < 1e-9);

    let integrals = integrate_slice(&slice);
    assert!((integrals.euler_number - 2.0).abs() < 1e-9);
    assert!(integrals.slack.abs() < 1e-9);
}

#[test]
fn rotsym_chain_and_search_agree_on_the_cylinder() {
    let preset = WarpedPreset::Const1;
    let k = kappa(&preset, 3.3).unwrap();
    assert_eq!((k.kappa1, k.kappa2), (0.0, 1.0));
    let t = TangentProjection::new([0.5, 0.0, 0.0, 0.0]).unwrap();
    let chain = rotsym_margin(&k, &t, 0.3, 0.7).unwrap();
    assert!(chain.max_link_violation() <= 1e-9);
    assert!(chain.q <= chain.global_bound + 1e-9);

    let mut cfg = SearchConfig::new(Family::Warped, 3_000, 1);
    cfg.restarts = 2;
    cfg.ascent_iters = 50;
    let r = maximize_margin(&cfg);
    assert_eq!(r.accepted, 3_000);
    assert!(r.max_margin.unwrap() <= 1e-8);
}

#[test]
fn threshold_separates_the_two_bound_regimes() {
    let e = epsilon0_threshold();
    assert!(e.root > 0.13 && e.root < 0.14);
    // below the root the quartic profile is nonpositive on the whole
    // high-bending range
    let p = curvgauge::f_profile((12.0 + 24.0 * e.root * e.root).sqrt(), e.root);
    assert!(p.f <= 1e-9);
}
