//! The pointwise quantity Q = S^2/12 - |Ric|^2/4, its frame decomposition,
//! the mean-curvature bound, and the case classification used to certify
//! Q <= 3(1+H^2)^2 + 3|H| f(|H|) on admissible, conformally flat data.

use crate::ambient::{AmbientRestriction, ADMISSIBLE_TOL};
use crate::error::{Error, Result};
use crate::spectrum::ShapeSpectrum;
use crate::tensor::{gauss_induced, CurvatureTensor, ShapeOperator};
use serde::Serialize;

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Which proof branch a point falls into.
///
/// `I` is the low-bending regime |Aring|^2 <= 12 + 24 H^2 (boundary ties
/// included). The `II*` labels split the complement by the sign of the
/// Gauss-Kronecker value and of the sorted traceless eigenvalues, after
/// normalizing the orientation so H >= 0:
/// - `IIa`: GK >= 0 (then mu_2 >= 0 >= mu_3 automatically),
/// - `IIb`: GK < 0 and mu_3 > 0 > mu_4,
/// - `IIc`: GK < 0 and mu_1 > 0 > mu_2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CaseLabel {
    I,
    IIa,
    IIb,
    IIc,
}

impl std::fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CaseLabel::I => "I",
            CaseLabel::IIa => "IIa",
            CaseLabel::IIb => "IIb",
            CaseLabel::IIc => "IIc",
        };
        f.write_str(s)
    }
}

/// Bound to compare Q against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    /// 3(1+H^2)^2 + 3|H| f(|H|), valid for every admissible LCF point.
    Full,
    /// 3(1+H^2)^2, valid when |H| is below the smallness threshold.
    Bare,
}

/// Conformal-flatness gate used before asserting the bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum LcfGate {
    /// Require the full squared Weyl norm of the induced tensor below `tol`.
    FullWeyl(f64),
    /// Require only the six principal-frame components W_ijij below `tol`
    /// in absolute value. This is exactly what the case analysis consumes,
    /// so it is the right gate for data that is flat on the diagonal only.
    DiagonalWeyl(f64),
}

/// Default full-Weyl gate tolerance.
pub const DEFAULT_LCF_TOL: f64 = 1e-8;

/// Evaluation of the claim bound at a mean curvature value.
#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ClaimBound {
    /// Maximizer x0 = 3 sqrt(3) |H| + sqrt(3 + 21 H^2) of the quartic profile.
    pub x0: f64,
    /// f(|H|) >= 0, the piecewise correction (f_1 or f_2)/3.
    pub f_of_h: f64,
    /// True when the evaluation point is sqrt(12 + 24 H^2) (low-|H| branch).
    pub low_branch: bool,
    /// 3(1+H^2)^2 + 3|H| f(|H|).
    pub bound: f64,
}

/// Quartic profile F(|Aring|) with its factorization roots eta_1 <= eta_2.
#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FProfile {
    pub f: f64,
    pub eta1: f64,
    pub eta2: f64,
}

/// Outcome of one pointwise margin evaluation, with the witness data
/// needed to reproduce it.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MarginReport {
    pub q: f64,
    pub bound: f64,
    /// q - bound; nonpositive confirms the inequality at this point.
    pub margin: f64,
    pub case: CaseLabel,
    pub bound_kind: BoundKind,
    /// Full squared Weyl norm of the induced tensor.
    pub weyl_norm_sq: f64,
    /// Largest |W_ijij| over the six coordinate planes.
    pub weyl_diag_max: f64,
    pub witness: Witness,
}

/// The (spectrum, ambient, H) triple behind a margin value.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Witness {
    pub spectrum: ShapeSpectrum,
    pub h: f64,
    pub sigma: f64,
    pub coordinate_sectionals: [f64; 6],
}

/// Q from the contracted invariants of an induced dim-4 tensor.
pub fn q_direct(induced: &CurvatureTensor) -> Result<f64> {
    if induced.dim() != 4 {
        return Err(Error::Dimension {
            dim: induced.dim(),
            min: 4,
            max: 4,
        });
    }
    let inv = induced.invariants();
    Ok(inv.scalar * inv.scalar / 12.0 - inv.ric_norm_sq / 4.0)
}

/// Q evaluated term by term from the frame decomposition
///
/// (1/12) [ sigma^2/4 + 6 sigma H^2 + 36 H^4 + |Aring|^4 - 3 sum mu^4
///          + 6 sum mu_i^2 (a_ii - sigma/3) - 12 H sum mu_i a_ii
///          - 18 H^2 |Aring|^2 + 12 H sum mu^3 - 3 |aring|^2 ].
///
/// This must agree with [`q_direct`] of the Gauss-induced tensor; it exists
/// to certify the decomposition, not to compute. `q_direct` is authoritative
/// if they ever disagree. The spectrum's frame order must match the ambient
/// frame.
pub fn q_decomposed(amb: &AmbientRestriction, spec: &ShapeSpectrum) -> f64 {
    let h = spec.h();
    let mu = spec.mu_frame();
    let a2 = spec.a_norm_sq();
    let sigma = amb.sigma();
    let a_diag = amb.a_diag();
    let mut mu2_a = 0.0;
    let mut mu_a = 0.0;
    for i in 0..4 {
        mu2_a += mu[i] * mu[i] * (a_diag[i] - sigma / 3.0);
        mu_a += mu[i] * a_diag[i];
    }
    (sigma * sigma / 4.0 + 6.0 * sigma * h * h + 36.0 * h.powi(4) + a2 * a2 - 3.0 * spec.p4()
        + 6.0 * mu2_a
        - 12.0 * h * mu_a
        - 18.0 * h * h * a2
        + 12.0 * h * spec.p3()
        - 3.0 * amb.a_ring_norm_sq())
        / 12.0
}

/// The claim bound 3(1+H^2)^2 + 3|H| f(|H|).
///
/// f is the nonnegative piecewise function (f_1 or f_2)/3, where
/// f_i = (sqrt(3)/3) x^3 - (|H|/2) x^2 evaluated at x = sqrt(12 + 24 H^2)
/// when x0 <= sqrt(12 + 24 H^2) and at x = x0 otherwise.
pub fn claim_bound(h: f64) -> ClaimBound {
    let ah = h.abs();
    let x0 = 3.0 * SQRT3 * ah + (3.0 + 21.0 * h * h).sqrt();
    let x_case = (12.0 + 24.0 * h * h).sqrt();
    let low_branch = x0 <= x_case;
    let x = if low_branch { x_case } else { x0 };
    let fi = SQRT3 / 3.0 * x.powi(3) - 0.5 * ah * x * x;
    let f_of_h = fi / 3.0;
    let base = 1.0 + h * h;
    ClaimBound {
        x0,
        f_of_h,
        low_branch,
        bound: 3.0 * base * base + 3.0 * ah * f_of_h,
    }
}

/// Bound value for the requested kind.
pub fn bound_value(h: f64, kind: BoundKind) -> f64 {
    match kind {
        BoundKind::Full => claim_bound(h).bound,
        BoundKind::Bare => {
            let base = 1.0 + h * h;
            3.0 * base * base
        }
    }
}

/// The quartic profile
/// F = (1/12) ( -(1/2) a^4 + 4 sqrt(3) |H| a^3 + 3 (1 - 2 H^2) a^2 )
/// together with the roots of its factorization
/// F = -(a^2/24)(a - eta1)(a - eta2), eta_{1,2} = 4 sqrt(3)|H| -+ sqrt(6+36H^2).
pub fn f_profile(a_norm: f64, h: f64) -> FProfile {
    let ah = h.abs();
    let a2 = a_norm * a_norm;
    let f =
        (-0.5 * a2 * a2 + 4.0 * SQRT3 * ah * a2 * a_norm + 3.0 * (1.0 - 2.0 * h * h) * a2) / 12.0;
    let s = (6.0 + 36.0 * h * h).sqrt();
    FProfile {
        f,
        eta1: 4.0 * SQRT3 * ah - s,
        eta2: 4.0 * SQRT3 * ah + s,
    }
}

/// Case label of a spectrum, after normalizing the orientation:
/// if H < 0 the pair (H, mu) is replaced by (-H, -mu) and re-sorted.
/// Q and the bound are invariant under this joint flip.
///
/// Boundary ties |Aring|^2 = 12 + 24 H^2 go to case I; a vanishing mu_2
/// while GK < 0 cannot occur (GK < 0 needs all mu_i nonzero), so the
/// classification is total and the error arm asserts internal consistency.
pub fn classify_case(spec: &ShapeSpectrum) -> Result<CaseLabel> {
    let flipped;
    let s = if spec.h() < 0.0 {
        flipped = spec.flipped();
        &flipped
    } else {
        spec
    };
    let h = s.h();
    let mu = s.mu();
    let a2 = s.a_norm_sq();
    let gk = s.gauss_kronecker();
    if a2 <= 12.0 + 24.0 * h * h {
        return Ok(CaseLabel::I);
    }
    if gk >= 0.0 {
        return Ok(CaseLabel::IIa);
    }
    if mu[1] <= 0.0 {
        return Ok(CaseLabel::IIc);
    }
    if mu[2] > 0.0 {
        return Ok(CaseLabel::IIb);
    }
    Err(Error::Unclassifiable)
}

/// Margin of Q against the full claim bound under the default full-Weyl
/// gate at tolerance `lcf_tol`.
pub fn claim_margin(
    amb: &AmbientRestriction,
    spec: &ShapeSpectrum,
    lcf_tol: f64,
) -> Result<MarginReport> {
    claim_margin_with(amb, spec, LcfGate::FullWeyl(lcf_tol), BoundKind::Full)
}

/// Margin of Q against the chosen bound, gated on admissibility and the
/// chosen flatness test. Non-admissible or non-flat points are reported as
/// errors, not asserted against the bound — they sit outside the hypothesis.
pub fn claim_margin_with(
    amb: &AmbientRestriction,
    spec: &ShapeSpectrum,
    gate: LcfGate,
    bound_kind: BoundKind,
) -> Result<MarginReport> {
    amb.check_admissible(ADMISSIBLE_TOL)?;
    let shape = ShapeOperator::new(spec.lambda_frame().to_vec());
    let induced = gauss_induced(amb, &shape)?;
    let inv = induced.invariants();
    let weyl_norm_sq = inv.weyl_norm_sq;
    let mut weyl_diag_max = 0.0_f64;
    for i in 0..4 {
        for j in (i + 1)..4 {
            weyl_diag_max = weyl_diag_max.max(inv.weyl.get(i, j, i, j).abs());
        }
    }
    match gate {
        LcfGate::FullWeyl(tol) => {
            if weyl_norm_sq > tol {
                return Err(Error::NotLcf {
                    residual: weyl_norm_sq,
                    tol,
                });
            }
        }
        LcfGate::DiagonalWeyl(tol) => {
            if weyl_diag_max > tol {
                return Err(Error::NotLcf {
                    residual: weyl_diag_max,
                    tol,
                });
            }
        }
    }
    let q = inv.scalar * inv.scalar / 12.0 - inv.ric_norm_sq / 4.0;
    let h = spec.h();
    let bound = bound_value(h, bound_kind);
    let case = classify_case(spec)?;
    Ok(MarginReport {
        q,
        bound,
        margin: q - bound,
        case,
        bound_kind,
        weyl_norm_sq,
        weyl_diag_max,
        witness: Witness {
            spectrum: spec.clone(),
            h,
            sigma: amb.sigma(),
            coordinate_sectionals: amb.coordinate_sectionals(),
        },
    })
}
