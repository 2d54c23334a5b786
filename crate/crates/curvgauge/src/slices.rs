//! Slice hypersurfaces {t = const} of a warped product, their
//! Gauss-Bonnet-Chern integrals, and the volume functional int (1+H^2)^2.
//!
//! Slices are umbilic with H = phi'/phi and constant intrinsic curvature
//! 1/phi^2, so both integrals have closed forms; an optional Monte Carlo
//! mode re-integrates over the sphere to exercise a quadrature path that
//! generalizes.

use crate::error::{Error, Result};
use crate::rng::{gaussian, stream_rng};
use crate::tensor::CurvatureTensor;
use crate::warped::{kappa, WarpedPreset};
use serde::Serialize;
use std::f64::consts::PI;

/// Vol(S^4) for the unit 4-sphere.
pub fn unit_sphere_volume() -> f64 {
    8.0 * PI * PI / 3.0
}

/// Geometry of the slice {t = c}: a round sphere of radius phi(c).
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SliceGeometry {
    pub preset_id: String,
    pub t: f64,
    pub phi: f64,
    pub phi_dot: f64,
    /// Mean curvature phi'/phi (umbilic: A = H I).
    pub h: f64,
    /// Intrinsic sectional curvature 1/phi^2 = kappa_2 + H^2.
    pub intrinsic_sec: f64,
    /// Vol(S^4) phi^4.
    pub volume: f64,
}

/// Integrals over one slice and their topological comparison value.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IntegralReport {
    pub gbc_integral: f64,
    /// gbc_integral / (4 pi^2); 2 for a sphere.
    pub euler_number: f64,
    /// int (1+H^2)^2 = Vol(S^4) (phi^2 + phi'^2)^2.
    pub volume_functional: f64,
    /// (4 pi^2 / 3) chi.
    pub rhs: f64,
    /// volume_functional - rhs; nonnegative whenever kappa_2 <= 1.
    pub slack: f64,
}

/// Monte Carlo re-computation of the slice integrals by uniform sphere
/// sampling (normalized 5-dimensional Gaussians).
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MonteCarloIntegral {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: usize,
    pub seed: u64,
}

/// Builds the slice at parameter t. Fails if phi(t) <= 0.
pub fn slice_hypersurface(preset: &WarpedPreset, t: f64) -> Result<SliceGeometry> {
    let phi = preset.phi(t);
    if phi.is_nan() || phi <= 0.0 || phi.is_infinite() {
        return Err(Error::Domain { t, phi });
    }
    let phi_dot = preset.phi_dot(t);
    let h = phi_dot / phi;
    Ok(SliceGeometry {
        preset_id: preset.id(),
        t,
        phi,
        phi_dot,
        h,
        intrinsic_sec: 1.0 / (phi * phi),
        volume: unit_sphere_volume() * phi.powi(4),
    })
}

impl SliceGeometry {
    /// Induced curvature tensor of the slice (constant curvature 1/phi^2).
    pub fn induced_tensor(&self) -> CurvatureTensor {
        CurvatureTensor::constant_curvature(4, self.intrinsic_sec).expect("dim 4 valid")
    }

    /// Residual of the Gauss-equation consistency check
    /// 1/phi^2 = kappa_2 + H^2.
    pub fn gauss_consistency_residual(&self, preset: &WarpedPreset) -> Result<f64> {
        let k = kappa(preset, self.t)?;
        Ok((self.intrinsic_sec - (k.kappa2 + self.h * self.h)).abs())
    }
}

/// Pointwise integrand S^2/12 - |Ric|^2/4 + |W|^2/8 of a dim-4 tensor.
pub fn gbc_integrand(t: &CurvatureTensor) -> Result<f64> {
    if t.dim() != 4 {
        return Err(Error::Dimension {
            dim: t.dim(),
            min: 4,
            max: 4,
        });
    }
    let inv = t.invariants();
    Ok(inv.scalar * inv.scalar / 12.0 - inv.ric_norm_sq / 4.0 + inv.weyl_norm_sq / 8.0)
}

/// Closed-form integrals over the slice.
pub fn integrate_slice(slice: &SliceGeometry) -> IntegralReport {
    let integrand = gbc_integrand(&slice.induced_tensor()).expect("slice tensor is dim 4");
    let gbc_integral = integrand * slice.volume;
    let euler_number = gbc_integral / (4.0 * PI * PI);
    let h2 = slice.h * slice.h;
    let volume_functional = (1.0 + h2) * (1.0 + h2) * slice.volume;
    let rhs = 4.0 * PI * PI / 3.0 * euler_number;
    IntegralReport {
        gbc_integral,
        euler_number,
        volume_functional,
        rhs,
        slack: volume_functional - rhs,
    }
}

/// Monte Carlo estimate of int_slice f over the slice, where `f` is
/// evaluated at points of the unit 4-sphere (the slice rescales by phi^4,
/// which is folded into the returned estimate).
pub fn monte_carlo_integral<F: Fn(&[f64; 5]) -> f64>(
    slice: &SliceGeometry,
    f: F,
    samples: usize,
    seed: u64,
) -> MonteCarloIntegral {
    let mut rng = stream_rng(seed, 0);
    let n = samples.max(1);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..n {
        let mut x = [0.0_f64; 5];
        let norm_sq = loop {
            for xi in x.iter_mut() {
                *xi = gaussian(&mut rng);
            }
            let n2: f64 = x.iter().map(|v| v * v).sum();
            if n2 > 1e-24 {
                break n2;
            }
        };
        let inv_norm = 1.0 / norm_sq.sqrt();
        for xi in x.iter_mut() {
            *xi *= inv_norm;
        }
        let v = f(&x);
        sum += v;
        sum_sq += v * v;
    }
    let mean = sum / n as f64;
    let var = (sum_sq / n as f64 - mean * mean).max(0.0);
    let scale = slice.volume;
    MonteCarloIntegral {
        estimate: mean * scale,
        std_error: (var / n as f64).sqrt() * scale,
        samples: n,
        seed,
    }
}

/// Monte Carlo version of the slice GBC integral: evaluates the pointwise
/// integrand at every sampled point of the sphere.
pub fn monte_carlo_gbc(slice: &SliceGeometry, samples: usize, seed: u64) -> MonteCarloIntegral {
    let tensor = slice.induced_tensor();
    monte_carlo_integral(
        slice,
        |_x| gbc_integrand(&tensor).expect("dim 4"),
        samples,
        seed,
    )
}
