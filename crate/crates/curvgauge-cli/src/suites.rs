//! Seeded verification suites behind the `identities`, `rotsym`, and
//! `lemma` subcommands, plus the proof-step and orientation suites used by
//! the acceptance tests. Each suite fans samples out with rayon and folds
//! worst-case residuals, so runs are reproducible for a fixed seed.

use crate::report::Check;
use curvgauge::claim::{claim_margin_with, classify_case, BoundKind, CaseLabel, LcfGate};
use curvgauge::rng::{gaussian, stream_rng, unit_ball4};
use curvgauge::{
    gauss_induced, lcf_classify, lcf_weyl, pattern_distance, q_decomposed, q_direct, rotsym_margin,
    warped_ambient, AmbientRestriction, CurvatureTensor, KappaPair, ShapeOperator, ShapeSpectrum,
    TangentProjection,
};
use rand::Rng;
use rayon::prelude::*;

pub const DECOMPOSITION_TOL: f64 = 1e-9;
pub const POWER_SUM_TOL: f64 = 1e-10;
pub const PROOF_STEP_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const RICCI_SPLIT_TOL: f64 = 1e-9;
pub const ROTSYM_LINK_TOL: f64 = 1e-9;
pub const ROTSYM_MU4_TOL: f64 = 1e-12;
pub const LEMMA_FLAT_TOL: f64 = 1e-10;
pub const LEMMA_SEPARATION_FLOOR: f64 = 1e-3;
pub const LEMMA_DISTANCE: f64 = 0.1;
pub const ORIENTATION_TOL: f64 = 1e-12;

fn fold_max(a: f64, b: f64) -> f64 {
    a.max(b)
}

/// |q_decomposed - q_direct(gauss_induced)| over random (ambient, shape)
/// pairs, admissible or not. The tensor and the spectrum draw from disjoint
/// streams so the pair is independent.
pub fn decomposition_certificate(samples: u64, seed: u64) -> Check {
    let worst = (0..samples)
        .into_par_iter()
        .map(|i| {
            let amb =
                AmbientRestriction::new(CurvatureTensor::random(4, 4, seed, 2 * i).expect("dim 4"))
                    .expect("dim 4");
            let mut rng = stream_rng(seed.wrapping_add(0x5eed), i);
            let lam = [
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
            ];
            let spec = ShapeSpectrum::from_principal_curvatures(lam);
            let induced = gauss_induced(&amb, &ShapeOperator::new(lam.to_vec())).expect("dims");
            (q_direct(&induced).expect("dim 4") - q_decomposed(&amb, &spec)).abs()
        })
        .reduce(|| 0.0, fold_max);
    Check::residual("identities.decomposition", worst, DECOMPOSITION_TOL)
}

/// Quartic identity, lambda-substitution identities, and the cubic
/// power-sum bound on traceless quadruples, plus the bound's equality on
/// the exceptional pattern.
pub fn power_sum_suite(samples: u64, seed: u64) -> Vec<Check> {
    let worst = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed.wrapping_add(1), i);
            let mut mu = [0.0; 4];
            for x in mu.iter_mut() {
                *x = rng.gen_range(-2.0..2.0);
            }
            let h: f64 = rng.gen_range(-3.0..3.0);
            let spec = ShapeSpectrum::from_traceless(mu, h);
            let a2 = spec.a_norm_sq();
            let quartic = (spec.p4() - (0.5 * a2 * a2 - 4.0 * spec.gauss_kronecker())).abs();
            let lam = spec.lambda_frame();
            let l3: f64 = lam.iter().map(|x| x * x * x).sum();
            let l4: f64 = lam.iter().map(|x| x * x * x * x).sum();
            let cubic_sub = (l3 - (spec.p3() + 4.0 * h.powi(3) + 3.0 * h * a2)).abs();
            let quartic_sub =
                (l4 - (spec.p4() - 12.0 * h.powi(4) - 6.0 * h * h * a2 + 4.0 * h * l3)).abs();
            let cubic_bound = (spec.p3() - a2.powf(1.5) / 3.0_f64.sqrt()).max(0.0);
            quartic.max(cubic_sub).max(quartic_sub).max(cubic_bound)
        })
        .reduce(|| 0.0, fold_max);

    let pattern_equality = (0..200)
        .into_par_iter()
        .map(|i| {
            let m = 0.01 + 1.49 * (i as f64 / 199.0);
            let spec = ShapeSpectrum::from_traceless([3.0 * m, -m, -m, -m], 0.0);
            (spec.p3() - spec.a_norm_sq().powf(1.5) / 3.0_f64.sqrt()).abs()
        })
        .reduce(|| 0.0, fold_max);

    vec![
        Check::residual("identities.power-sums", worst, POWER_SUM_TOL),
        Check::residual(
            "identities.cubic-bound-equality",
            pattern_equality,
            POWER_SUM_TOL,
        ),
    ]
}

/// Einstein trace, total Weyl trace, and the orthogonal Ricci split on
/// random curvature tensors.
pub fn trace_suite(samples: u64, seed: u64) -> Vec<Check> {
    let (trace_worst, split_worst) = (0..samples)
        .into_par_iter()
        .map(|i| {
            let t = CurvatureTensor::random(4, 4, seed.wrapping_add(2), i).expect("dim 4");
            let inv = t.invariants();
            let mut worst: f64 = (0..4).map(|k| inv.einstein[k * 4 + k]).sum::<f64>().abs();
            for a in 0..4 {
                for b in 0..4 {
                    let mut s = 0.0;
                    for k in 0..4 {
                        s += inv.weyl.get(a, k, b, k);
                    }
                    worst = worst.max(s.abs());
                }
            }
            let e_sq: f64 = inv.einstein.iter().map(|x| x * x).sum();
            let split = (inv.ric_norm_sq - (e_sq + inv.scalar * inv.scalar / 4.0)).abs();
            (worst, split)
        })
        .reduce(|| (0.0, 0.0), |a, b| (a.0.max(b.0), a.1.max(b.1)));

    vec![
        Check::residual("identities.weyl-trace", trace_worst, TRACE_TOL),
        Check::residual("identities.ricci-split", split_worst, RICCI_SPLIT_TOL),
    ]
}

/// The estimate steps of the high-bending case, each on its own admissible
/// random population:
/// - diag bound: a_ii - sigma/3 <= 1 for every i;
/// - square completion: -12 H sum mu_i a_ii - 3 |aring|^2 <= 12 H^2 |Aring|^2;
/// - refined diag bound under the (+,-,-,-) ordering:
///   3 sum mu_i^2 (a_ii - sigma/3) <= (3/2) |Aring|^2;
/// - the assembled estimate they combine into:
///   Q <= 3(1+H^2)^2 + (1/12)(-|Aring|^4/2 + 12 H sum mu^3
///        + 6(1-H^2)|Aring|^2 + 12 GK).
pub fn proof_step_suite(samples: u64, seed: u64) -> Vec<Check> {
    let diag_bound = (0..samples)
        .into_par_iter()
        .map(|i| {
            let amb = AmbientRestriction::random_admissible(seed.wrapping_add(3), i);
            let sigma = amb.sigma();
            let mut worst = f64::NEG_INFINITY;
            for k in 0..4 {
                worst = worst.max(amb.a(k, k) - sigma / 3.0 - 1.0);
            }
            worst
        })
        .reduce(|| f64::NEG_INFINITY, fold_max);

    let square_completion = (0..samples)
        .into_par_iter()
        .map(|i| {
            let amb = AmbientRestriction::random_admissible(seed.wrapping_add(4), i);
            let mut rng = stream_rng(seed.wrapping_add(5), i);
            let mut mu = [0.0; 4];
            for x in mu.iter_mut() {
                *x = rng.gen_range(-2.0..2.0);
            }
            let h: f64 = rng.gen_range(-3.0..3.0);
            let spec = ShapeSpectrum::from_traceless(mu, h);
            let mf = spec.mu_frame();
            let mut mu_a = 0.0;
            for (k, m) in mf.iter().enumerate() {
                mu_a += m * amb.a(k, k);
            }
            let lhs = -12.0 * h * mu_a - 3.0 * amb.a_ring_norm_sq();
            lhs - 12.0 * h * h * spec.a_norm_sq()
        })
        .reduce(|| f64::NEG_INFINITY, fold_max);

    let refined_diag = (0..samples)
        .into_par_iter()
        .map(|i| {
            let amb = AmbientRestriction::random_admissible(seed.wrapping_add(6), i);
            let mut rng = stream_rng(seed.wrapping_add(7), i);
            // mu_1 > 0 > mu_2 >= mu_3 >= mu_4 in frame order
            let mut negs = [
                -rng.gen_range(0.01..2.0_f64),
                -rng.gen_range(0.01..2.0_f64),
                -rng.gen_range(0.01..2.0_f64),
            ];
            negs.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
            let mu = [-(negs[0] + negs[1] + negs[2]), negs[0], negs[1], negs[2]];
            let spec = ShapeSpectrum::from_traceless(mu, 0.0);
            let mf = spec.mu_frame();
            let sigma = amb.sigma();
            let mut lhs = 0.0;
            for (k, m) in mf.iter().enumerate() {
                lhs += 3.0 * m * m * (amb.a(k, k) - sigma / 3.0);
            }
            lhs - 1.5 * spec.a_norm_sq()
        })
        .reduce(|| f64::NEG_INFINITY, fold_max);

    let assembled = (0..samples)
        .into_par_iter()
        .map(|i| {
            let amb = AmbientRestriction::random_admissible(seed.wrapping_add(10), i);
            let mut rng = stream_rng(seed.wrapping_add(11), i);
            let mut mu = [0.0; 4];
            for x in mu.iter_mut() {
                *x = 1.2 * gaussian(&mut rng);
            }
            let h: f64 = rng.gen_range(-3.0..3.0);
            let spec = ShapeSpectrum::from_traceless(mu, h);
            let induced = gauss_induced(&amb, &ShapeOperator::new(spec.lambda_frame().to_vec()))
                .expect("dims");
            let q = q_direct(&induced).expect("dim 4");
            let a2 = spec.a_norm_sq();
            let rhs = 3.0 * (1.0 + h * h).powi(2)
                + (-0.5 * a2 * a2
                    + 12.0 * h * spec.p3()
                    + 6.0 * (1.0 - h * h) * a2
                    + 12.0 * spec.gauss_kronecker())
                    / 12.0;
            q - rhs
        })
        .reduce(|| f64::NEG_INFINITY, fold_max);

    vec![
        Check::residual(
            "proof-steps.diag-bound",
            diag_bound.max(0.0),
            PROOF_STEP_TOL,
        ),
        Check::residual(
            "proof-steps.square-completion",
            square_completion.max(0.0),
            PROOF_STEP_TOL,
        ),
        Check::residual(
            "proof-steps.refined-diag-bound",
            refined_diag.max(0.0),
            PROOF_STEP_TOL,
        ),
        Check::residual(
            "proof-steps.assembled-estimate",
            assembled.max(0.0),
            PROOF_STEP_TOL,
        ),
    ]
}

/// Decomposition certificate, power-sum identities, and trace suites (the
/// `identities` subcommand).
pub fn identities(samples: u64, seed: u64) -> Vec<Check> {
    let mut checks = vec![decomposition_certificate(samples, seed)];
    checks.extend(power_sum_suite(samples, seed));
    checks.extend(trace_suite((samples / 10).max(100), seed));
    checks
}

/// Chain ordering, closed-form agreement, and the quartic pattern identity
/// over random admissible rotationally symmetric tuples.
pub fn rotsym(samples: u64, seed: u64) -> Vec<Check> {
    let (worst_link, worst_sr, worst_mu4) = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i);
            let a: f64 = rng.gen_range(0.0..1.0);
            let b: f64 = rng.gen_range(0.0..1.0);
            let k = KappaPair::new(a.min(b), a.max(b));
            let t = TangentProjection::new(unit_ball4(&mut rng)).expect("ball");
            let m: f64 = rng.gen_range(-1.5..1.5);
            let h: f64 = rng.gen_range(-3.0..3.0);
            let chain = rotsym_margin(&k, &t, m, h).expect("admissible");
            (
                chain.max_link_violation(),
                chain.sr_residual(),
                chain.mu4_residual(),
            )
        })
        .reduce(
            || (f64::NEG_INFINITY, 0.0, 0.0),
            |x, y| (x.0.max(y.0), x.1.max(y.1), x.2.max(y.2)),
        );

    vec![
        Check::residual(
            "rotsym.chain-monotone",
            worst_link.max(0.0),
            ROTSYM_LINK_TOL,
        ),
        Check::residual("rotsym.closed-form", worst_sr, ROTSYM_LINK_TOL),
        Check::residual("rotsym.quartic-pattern", worst_mu4, ROTSYM_MU4_TOL),
    ]
}

/// Flatness of pattern spectra at full tensor level, Weyl separation away
/// from the pattern set, and agreement of the pattern classifier with the
/// Weyl test.
pub fn lemma(samples: u64, seed: u64) -> Vec<Check> {
    let flat_samples = (samples / 10).max(100);
    let worst_flat = (0..flat_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i);
            let a: f64 = rng.gen_range(0.0..1.0);
            let b: f64 = rng.gen_range(0.0..1.0);
            let k = KappaPair::new(a.min(b), a.max(b));
            let t = TangentProjection::new(unit_ball4(&mut rng)).expect("ball");
            let m: f64 = rng.gen_range(-2.0..2.0);
            let h: f64 = rng.gen_range(-2.0..2.0);
            let pos = rng.gen_range(0..4usize);
            let mut mu = [m; 4];
            mu[pos] = -3.0 * m;
            let spec = ShapeSpectrum::from_traceless(mu, h);
            let amb = warped_ambient(&k, &t);
            let induced = gauss_induced(&amb, &ShapeOperator::new(spec.lambda_frame().to_vec()))
                .expect("dims");
            induced.invariants().weyl_norm_sq
        })
        .reduce(|| 0.0, fold_max);

    // spectra at distance >= 0.1 from the pattern set keep a visible
    // diagonal Weyl component
    let min_sep = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed.wrapping_add(1), i);
            let mut mu = [0.0; 4];
            for x in mu.iter_mut() {
                *x = gaussian(&mut rng);
            }
            let mean: f64 = mu.iter().sum::<f64>() / 4.0;
            for x in mu.iter_mut() {
                *x -= mean;
            }
            if pattern_distance(&mu) < LEMMA_DISTANCE {
                return f64::INFINITY; // outside the tested population
            }
            let w = lcf_weyl(&mu, 4).expect("traceless");
            w.iter().fold(0.0_f64, |a, v| a.max(v.abs()))
        })
        .reduce(|| f64::INFINITY, f64::min);

    // classifier vs Weyl test on a near-pattern / far population mix
    let disagreements = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed.wrapping_add(2), i);
            let mu: [f64; 4] = if rng.gen_bool(0.5) {
                let m: f64 = if rng.gen_bool(0.5) {
                    rng.gen_range(0.2..2.0)
                } else {
                    -rng.gen_range(0.2..2.0)
                };
                let pos = rng.gen_range(0..4usize);
                let mut v = [m; 4];
                v[pos] = -3.0 * m;
                for x in v.iter_mut() {
                    *x += 1e-9 * gaussian(&mut rng);
                }
                v
            } else {
                let mut v = [0.0; 4];
                for x in v.iter_mut() {
                    *x = gaussian(&mut rng);
                }
                v
            };
            let mean: f64 = mu.iter().sum::<f64>() / 4.0;
            let mut mu = mu;
            for x in mu.iter_mut() {
                *x -= mean;
            }
            // skip the ambiguous shell between the two populations
            let d = pattern_distance(&mu);
            if d > 1e-7 && d < LEMMA_DISTANCE {
                return 0u64;
            }
            let fit = lcf_classify(&mu, 1e-6);
            let w = lcf_weyl(&mu, 4).expect("traceless");
            let wmax = w.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
            let weyl_flat = wmax <= 1e-5;
            u64::from(fit.is_pattern != weyl_flat)
        })
        .reduce(|| 0, |a, b| a + b);

    vec![
        Check::residual("lemma.pattern-flatness", worst_flat, LEMMA_FLAT_TOL),
        Check::floor("lemma.weyl-separation", min_sep, LEMMA_SEPARATION_FLOOR),
        Check::residual("lemma.classifier-agreement", disagreements as f64, 0.0),
    ]
}

/// Margin invariance and case-label equivariance under the joint flip
/// (H, mu) -> (-H, -mu). The flip negates lambda, so the induced tensor and
/// Q are bitwise unchanged; the case label is unchanged for H != 0 and
/// swaps the two strict-sign patterns at H = 0 exactly.
pub fn orientation_suite(samples: u64, seed: u64) -> Vec<Check> {
    let gate = LcfGate::DiagonalWeyl(f64::INFINITY); // margins compared off-hypothesis too
    let (worst_margin, label_mismatches) = (0..samples)
        .into_par_iter()
        .map(|i| {
            let amb = AmbientRestriction::random_admissible(seed.wrapping_add(8), i);
            let mut rng = stream_rng(seed.wrapping_add(9), i);
            let mut mu = [0.0; 4];
            for x in mu.iter_mut() {
                *x = rng.gen_range(-2.0..2.0);
            }
            // keep an exact-zero-H subpopulation: the flip acts nontrivially
            // on labels only there
            let h: f64 = if i % 10 == 0 {
                0.0
            } else {
                rng.gen_range(-2.0..2.0)
            };
            let spec = ShapeSpectrum::from_traceless(mu, h);
            let flipped = spec.flipped();
            let a = claim_margin_with(&amb, &spec, gate, BoundKind::Full).expect("admissible");
            let b = claim_margin_with(&amb, &flipped, gate, BoundKind::Full).expect("admissible");
            let margin_diff = (a.margin - b.margin).abs();
            let la = classify_case(&spec).expect("total");
            let lb = classify_case(&flipped).expect("total");
            let expected = if spec.h() == 0.0 {
                match la {
                    CaseLabel::IIb => CaseLabel::IIc,
                    CaseLabel::IIc => CaseLabel::IIb,
                    other => other,
                }
            } else {
                la
            };
            (margin_diff, u64::from(lb != expected))
        })
        .reduce(|| (0.0, 0), |x, y| (x.0.max(y.0), x.1 + y.1));

    vec![
        Check::residual(
            "orientation.margin-invariance",
            worst_margin,
            ORIENTATION_TOL,
        ),
        Check::residual(
            "orientation.classify-equivariance",
            label_mismatches as f64,
            0.0,
        ),
    ]
}
