//! Rotationally symmetric ambients R x_phi S^4: curvature pairs
//! (kappa_1, kappa_2), the tangential ambient tensor for a hypersurface
//! frame, the two-eigenvalue flatness criterion, and the pointwise chain
//! bounding Q by 3(kappa_2 + H^2)^2 on pattern spectra.

use crate::ambient::AmbientRestriction;
use crate::claim::q_direct;
use crate::error::{Error, Result};
use crate::spectrum::ShapeSpectrum;
use crate::tensor::{gauss_induced, CurvatureTensor, ShapeOperator};
use serde::Serialize;

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Warping function with closed-form derivatives.
///
/// Presets only: numerical differentiation would leak discretization error
/// into the acceptance tolerances. `Polynomial` differentiates its
/// coefficient list exactly.
#[derive(Debug, Clone, PartialEq)]
pub enum WarpedPreset {
    /// phi = sin t on (0, pi); the round 5-sphere, kappa_1 = kappa_2 = 1.
    Sin,
    /// phi = 1; the cylinder over S^4, kappa_1 = 0, kappa_2 = 1.
    Const1,
    /// phi = cosh t; kappa_1 = -1, not admissible for the rotsym bound.
    Cosh,
    /// phi = sum_i c_i t^i with the given coefficients.
    Polynomial(Vec<f64>),
}

impl WarpedPreset {
    pub fn phi(&self, t: f64) -> f64 {
        match self {
            WarpedPreset::Sin => t.sin(),
            WarpedPreset::Const1 => 1.0,
            WarpedPreset::Cosh => t.cosh(),
            WarpedPreset::Polynomial(c) => horner(c, t),
        }
    }

    pub fn phi_dot(&self, t: f64) -> f64 {
        match self {
            WarpedPreset::Sin => t.cos(),
            WarpedPreset::Const1 => 0.0,
            WarpedPreset::Cosh => t.sinh(),
            WarpedPreset::Polynomial(c) => horner(&differentiate(c), t),
        }
    }

    pub fn phi_ddot(&self, t: f64) -> f64 {
        match self {
            WarpedPreset::Sin => -t.sin(),
            WarpedPreset::Const1 => 0.0,
            WarpedPreset::Cosh => t.cosh(),
            WarpedPreset::Polynomial(c) => horner(&differentiate(&differentiate(c)), t),
        }
    }

    /// Worst mismatch between the closed-form derivatives and central finite
    /// differences of phi at `t`. Used by the self-test invariant.
    ///
    /// The second difference uses a wider step: at h = 1e-5 the roundoff
    /// amplification eps/h^2 alone exceeds the 1e-6 budget.
    pub fn derivative_residual(&self, t: f64) -> f64 {
        let h1 = 1e-5;
        let fd1 = (self.phi(t + h1) - self.phi(t - h1)) / (2.0 * h1);
        let h2 = 1e-4;
        let fd2 = (self.phi(t + h2) - 2.0 * self.phi(t) + self.phi(t - h2)) / (h2 * h2);
        (self.phi_dot(t) - fd1)
            .abs()
            .max((self.phi_ddot(t) - fd2).abs())
    }

    /// Parses `sin`, `const1`, `cosh`, or `poly:c0,c1,...`.
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "sin" => Some(WarpedPreset::Sin),
            "const1" => Some(WarpedPreset::Const1),
            "cosh" => Some(WarpedPreset::Cosh),
            _ => {
                let rest = s.strip_prefix("poly:")?;
                let coeffs: Option<Vec<f64>> =
                    rest.split(',').map(|c| c.trim().parse().ok()).collect();
                coeffs.map(WarpedPreset::Polynomial)
            }
        }
    }

    pub fn id(&self) -> String {
        match self {
            WarpedPreset::Sin => "sin".into(),
            WarpedPreset::Const1 => "const1".into(),
            WarpedPreset::Cosh => "cosh".into(),
            WarpedPreset::Polynomial(c) => {
                let list: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                format!("poly:{}", list.join(","))
            }
        }
    }
}

fn horner(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

fn differentiate(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| i as f64 * c)
        .collect()
}

/// The two curvatures of a warped product at a fixed t:
/// kappa_1 = -phi''/phi for planes containing the axis direction,
/// kappa_2 = (1 - phi'^2)/phi^2 for planes tangent to the fiber.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct KappaPair {
    pub kappa1: f64,
    pub kappa2: f64,
}

impl KappaPair {
    pub fn new(kappa1: f64, kappa2: f64) -> Self {
        KappaPair { kappa1, kappa2 }
    }

    /// The hypothesis of the rotationally symmetric bound.
    pub fn admissible_for_rotsym(&self) -> bool {
        0.0 <= self.kappa1 && self.kappa1 <= self.kappa2 && self.kappa2 <= 1.0
    }
}

/// kappa pair of a preset at parameter t. Fails if phi(t) <= 0.
pub fn kappa(preset: &WarpedPreset, t: f64) -> Result<KappaPair> {
    let phi = preset.phi(t);
    if phi.is_nan() || phi <= 0.0 || phi.is_infinite() {
        return Err(Error::Domain { t, phi });
    }
    let dot = preset.phi_dot(t);
    let ddot = preset.phi_ddot(t);
    Ok(KappaPair {
        kappa1: -ddot / phi,
        kappa2: (1.0 - dot * dot) / (phi * phi),
    })
}

/// Tangential part of the axis direction in the hypersurface frame;
/// |T|^2 <= 1 because T is the projection of a unit vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TangentProjection {
    t: [f64; 4],
}

impl TangentProjection {
    pub fn new(t: [f64; 4]) -> Result<Self> {
        let n: f64 = t.iter().map(|x| x * x).sum();
        if n > 1.0 + 1e-12 {
            return Err(Error::Constraint {
                detail: format!("|T|^2 = {n} exceeds 1"),
            });
        }
        Ok(TangentProjection { t })
    }

    pub fn zero() -> Self {
        TangentProjection { t: [0.0; 4] }
    }

    pub fn components(&self) -> [f64; 4] {
        self.t
    }

    pub fn norm_sq(&self) -> f64 {
        self.t.iter().map(|x| x * x).sum()
    }
}

/// Tangential ambient curvature of a warped product in a frame where the
/// axis projects to T:
///
/// Rbar_ijkl = kappa_2 (d_ik d_jl - d_il d_jk)
///           + (kappa_1 - kappa_2)(T_i T_k d_jl + T_j T_l d_ik
///                                 - T_i T_l d_jk - T_j T_k d_il).
pub fn warped_ambient(k: &KappaPair, t: &TangentProjection) -> AmbientRestriction {
    let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    let tt = t.components();
    let diff = k.kappa1 - k.kappa2;
    let mut comp = vec![0.0; 256];
    let mut idx = 0;
    for i in 0..4 {
        for j in 0..4 {
            for kk in 0..4 {
                for l in 0..4 {
                    comp[idx] = k.kappa2 * (d(i, kk) * d(j, l) - d(i, l) * d(j, kk))
                        + diff
                            * (tt[i] * tt[kk] * d(j, l) + tt[j] * tt[l] * d(i, kk)
                                - tt[i] * tt[l] * d(j, kk)
                                - tt[j] * tt[kk] * d(i, l));
                    idx += 1;
                }
            }
        }
    }
    let tensor = CurvatureTensor::from_components(4, comp)
        .expect("warped ambient tensor carries curvature symmetries by construction");
    AmbientRestriction::new(tensor).expect("dimension is 4")
}

/// Closed forms for the contracted scalars of [`warped_ambient`]:
/// (sigma, a_11..a_44, |aring|^2). Used to cross-check the tensor route.
pub fn warped_scalars(k: &KappaPair, t: &TangentProjection) -> (f64, [f64; 4], f64) {
    let u = t.norm_sq();
    let diff = k.kappa1 - k.kappa2;
    let sigma = 12.0 * k.kappa2 + 6.0 * diff * u;
    let tt = t.components();
    let mut a_diag = [0.0; 4];
    for (x, t_i) in a_diag.iter_mut().zip(tt.iter()) {
        *x = 3.0 * k.kappa2 + diff * (2.0 * t_i * t_i + u);
    }
    let aring_sq = 3.0 * diff * diff * u * u;
    (sigma, a_diag, aring_sq)
}

/// The six principal-frame Weyl diagonal values W_ijij (i < j, row-major
/// order) of a hypersurface of a warped product, reduced to the traceless
/// shape eigenvalues:
///
/// W_ijij = [(mu_i + mu_j)^2 + (n-4) mu_i mu_j]/(n-2) - |Aring|^2/((n-1)(n-2)).
///
/// The ambient contributions cancel identically in these components, so the
/// formula is valid for any hypersurface of the warped product, not only
/// flat ones.
pub fn lcf_weyl(mu: &[f64], n: usize) -> Result<Vec<f64>> {
    if n < 4 {
        return Err(Error::Dimension {
            dim: n,
            min: 4,
            max: usize::MAX,
        });
    }
    if mu.len() != n {
        return Err(Error::Shape {
            dim: n,
            expected: n,
            got: mu.len(),
        });
    }
    let sum: f64 = mu.iter().sum();
    if sum.abs() > 1e-12 {
        return Err(Error::Constraint {
            detail: format!("mu must be traceless, sum = {sum:.3e}"),
        });
    }
    let a2: f64 = mu.iter().map(|x| x * x).sum();
    let nf = n as f64;
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            let s = mu[i] + mu[j];
            out.push(
                (s * s + (nf - 4.0) * mu[i] * mu[j]) / (nf - 2.0) - a2 / ((nf - 1.0) * (nf - 2.0)),
            );
        }
    }
    Ok(out)
}

/// Result of testing a traceless quadruple against the two-eigenvalue
/// pattern {m, m, m, -3m} (up to permutation).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PatternFit {
    pub is_pattern: bool,
    /// Fitted repeated eigenvalue.
    pub m: f64,
    /// 1-based position of the exceptional eigenvalue -3m.
    pub position: usize,
    /// Worst per-component deviation at the best position.
    pub deviation: f64,
}

/// Euclidean distance from `mu` to the pattern set, the union of the four
/// lines {m (1,1,1,-3) up to permutation} inside the traceless hyperplane.
pub fn pattern_distance(mu: &[f64; 4]) -> f64 {
    let norm_sq: f64 = mu.iter().map(|x| x * x).sum();
    let mut best = f64::INFINITY;
    for p in 0..4 {
        // unit direction with the exceptional slot at p
        let mut v = [1.0; 4];
        v[p] = -3.0;
        let vn = 12.0_f64.sqrt();
        let dot: f64 = mu.iter().zip(v.iter()).map(|(a, b)| a * b).sum::<f64>() / vn;
        let d_sq = (norm_sq - dot * dot).max(0.0);
        best = best.min(d_sq.sqrt());
    }
    best
}

/// Tests whether `mu` matches the pattern {m, m, m, -3m} up to permutation
/// within `tol` (per component). Equivalent to all six W_ijij vanishing.
pub fn lcf_classify(mu: &[f64; 4], tol: f64) -> PatternFit {
    let mut best = PatternFit {
        is_pattern: false,
        m: 0.0,
        position: 1,
        deviation: f64::INFINITY,
    };
    for p in 0..4 {
        let m = -mu[p] / 3.0;
        let mut dev = (mu[p] + 3.0 * m).abs();
        for (q, &x) in mu.iter().enumerate() {
            if q != p {
                dev = dev.max((x - m).abs());
            }
        }
        if dev < best.deviation {
            best = PatternFit {
                is_pattern: false,
                m,
                position: p + 1,
                deviation: dev,
            };
        }
    }
    best.is_pattern = best.deviation <= tol;
    best
}

/// The pointwise chain certifying Q <= 3(kappa_2 + H^2)^2 <= 3(1 + H^2)^2
/// for a pattern spectrum over a warped ambient.
///
/// `sr_value` is the exact closed form of Q in (kappa, T, m, H); the chain
/// then proceeds by dropping the manifestly nonpositive T-group, merging the
/// remaining T-term into the -6 kappa_2 |Aring|^2 budget, bounding the cubic
/// power sum, and collapsing the negative-discriminant quadratic:
///
///   Q = sr_value <= after_t_drop <= after_merge <= after_cubic
///     <= 3(kappa_2+H^2)^2 <= 3(1+H^2)^2.
#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RotsymChain {
    pub q: f64,
    /// Exact closed form; |q - sr_value| certifies the decomposition.
    pub sr_value: f64,
    pub after_t_drop: f64,
    pub after_merge: f64,
    pub after_cubic: f64,
    pub kappa_bound: f64,
    pub global_bound: f64,
    /// sum mu^4 and (7/12)|Aring|^4, equal on pattern spectra.
    pub mu4_power_sum: f64,
    pub mu4_closed_form: f64,
}

impl RotsymChain {
    /// |Q - closed form|.
    pub fn sr_residual(&self) -> f64 {
        (self.q - self.sr_value).abs()
    }

    /// Largest violation of the monotone ordering (negative when every
    /// link holds strictly).
    pub fn max_link_violation(&self) -> f64 {
        let links = [
            self.q - self.after_t_drop,
            self.after_t_drop - self.after_merge,
            self.after_merge - self.after_cubic,
            self.after_cubic - self.kappa_bound,
            self.kappa_bound - self.global_bound,
        ];
        links.into_iter().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn mu4_residual(&self) -> f64 {
        (self.mu4_power_sum - self.mu4_closed_form).abs()
    }
}

/// Evaluates the chain at (kappa, T, m, H) with the pattern (m, m, m, -3m)
/// in frame order. Requires 0 <= kappa_1 <= kappa_2 <= 1.
pub fn rotsym_margin(k: &KappaPair, t: &TangentProjection, m: f64, h: f64) -> Result<RotsymChain> {
    if !k.admissible_for_rotsym() {
        return Err(Error::NotAdmissibleForRotsym {
            kappa1: k.kappa1,
            kappa2: k.kappa2,
        });
    }
    let spec = ShapeSpectrum::from_traceless([m, m, m, -3.0 * m], h);
    let amb = warped_ambient(k, t);
    let shape = ShapeOperator::new(spec.lambda_frame().to_vec());
    let induced = gauss_induced(&amb, &shape)?;
    let q = q_direct(&induced)?;

    let mu = spec.mu_frame();
    let a2 = spec.a_norm_sq();
    let p3 = spec.p3();
    let u = t.norm_sq();
    let tt = t.components();
    let diff = k.kappa1 - k.kappa2;
    let kappa_term = 3.0 * (k.kappa2 + h * h).powi(2);
    let bracket = (-0.75 * a2 * a2 + 12.0 * h * p3 - 6.0 * (k.kappa2 + 3.0 * h * h) * a2) / 12.0;
    let mut t_mu_sq = 0.0;
    for i in 0..4 {
        let d = mu[i] - h;
        t_mu_sq += tt[i] * tt[i] * d * d;
    }
    let t_group = 0.5 * diff * ((6.0 * k.kappa2 - a2 + 4.0 * h * h) * u + 2.0 * t_mu_sq);
    let sr_value = kappa_term + bracket + t_group;

    // drop the nonpositive part of the T-group; what remains of it is
    // +(kappa_2 - kappa_1) u |Aring|^2 / 2
    let after_t_drop = kappa_term + bracket + 0.5 * (k.kappa2 - k.kappa1) * u * a2;
    // merge that remainder into the -6 kappa_2 |Aring|^2 budget:
    // their sum is -(|Aring|^2/2)((1-u) kappa_2 + u kappa_1) <= 0
    let after_merge = kappa_term + (-0.75 * a2 * a2 + 12.0 * h * p3 - 18.0 * h * h * a2) / 12.0;
    // 12 H sum mu^3 <= 4 sqrt(3) |H| |Aring|^3 (equality on patterns)
    let after_cubic = kappa_term
        + (-0.75 * a2 * a2 + 4.0 * SQRT3 * h.abs() * a2.powf(1.5) - 18.0 * h * h * a2) / 12.0;
    let global = 1.0 + h * h;

    Ok(RotsymChain {
        q,
        sr_value,
        after_t_drop,
        after_merge,
        after_cubic,
        kappa_bound: kappa_term,
        global_bound: 3.0 * global * global,
        mu4_power_sum: spec.p4(),
        mu4_closed_form: 7.0 / 12.0 * a2 * a2,
    })
}
