//! Tangential restriction of ambient curvature at a hypersurface point.
//!
//! Only components with all four indices tangent are represented; the
//! hypothesis on the ambient space enters solely through the coordinate-plane
//! sectionals Rbar_ijij, so components with a normal index are deliberately
//! unrepresented.

use crate::error::{Error, Result};
use crate::tensor::CurvatureTensor;

/// Hypersurface frame dimension.
pub const DIM: usize = 4;

/// Tolerance for the coordinate-sectional admissibility box [0, 1].
pub const ADMISSIBLE_TOL: f64 = 1e-9;

/// Tangential ambient curvature data at a point, in the principal frame of
/// the hypersurface, with its contracted scalars:
/// sigma = sum_{i,j} Rbar_ijij, a_ij = sum_k Rbar_ikjk, and the traceless
/// part aring = a - (sigma/4) I.
#[derive(Debug, Clone, PartialEq)]
pub struct AmbientRestriction {
    tensor: CurvatureTensor,
    sigma: f64,
    a: [[f64; DIM]; DIM],
    a_ring: [[f64; DIM]; DIM],
    a_ring_norm_sq: f64,
}

impl AmbientRestriction {
    /// Wraps a dim-4 curvature tensor as tangential ambient data and derives
    /// the contracted fields.
    pub fn new(tensor: CurvatureTensor) -> Result<Self> {
        if tensor.dim() != DIM {
            return Err(Error::DimensionMismatch {
                ambient: tensor.dim(),
                shape: DIM,
            });
        }
        let mut a = [[0.0; DIM]; DIM];
        for (i, row) in a.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                let mut s = 0.0;
                for k in 0..DIM {
                    s += tensor.get(i, k, j, k);
                }
                *entry = s;
            }
        }
        let sigma: f64 = (0..DIM).map(|i| a[i][i]).sum();
        let mut a_ring = a;
        for (i, row) in a_ring.iter_mut().enumerate() {
            row[i] -= sigma / DIM as f64;
        }
        let a_ring_norm_sq = a_ring.iter().flatten().map(|x| x * x).sum();
        Ok(AmbientRestriction {
            tensor,
            sigma,
            a,
            a_ring,
            a_ring_norm_sq,
        })
    }

    /// Restriction of a constant-curvature ambient space.
    pub fn constant_curvature(c: f64) -> Self {
        Self::new(CurvatureTensor::constant_curvature(DIM, c).expect("dim 4 is valid"))
            .expect("constant curvature restriction is well-formed")
    }

    /// Flat ambient space.
    pub fn flat() -> Self {
        Self::constant_curvature(0.0)
    }

    /// Random valid curvature tensor with its six coordinate-plane
    /// sectionals affinely remapped into a sub-box of [0, 1]. Off-coordinate
    /// planes are left free (the relaxed admissibility the bound's proof
    /// consumes). Deterministic in (seed, stream).
    pub fn random_admissible(seed: u64, stream: u64) -> Self {
        let raw = CurvatureTensor::random(DIM, 4, seed, 2 * stream).expect("dim 4");
        let mut rng = crate::rng::stream_rng(seed, 2 * stream + 1);
        let planes = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let vals: Vec<f64> = planes.iter().map(|&(i, j)| raw.get(i, j, i, j)).collect();
        let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        use rand::Rng;
        let t0: f64 = rng.gen_range(0.02..0.3);
        let t1: f64 = rng.gen_range(0.7..0.98);
        let span = hi - lo;
        let (scale, shift) = if span > 1e-9 {
            let s = (t1 - t0) / span;
            (s, t0 - lo * s)
        } else {
            (1.0, 0.5 * (t0 + t1) - lo)
        };
        let shift_tensor = CurvatureTensor::constant_curvature(DIM, shift).expect("dim 4");
        let tensor =
            CurvatureTensor::combine(&[(scale, &raw), (1.0, &shift_tensor)]).expect("dims");
        Self::new(tensor).expect("dim 4")
    }

    pub fn tensor(&self) -> &CurvatureTensor {
        &self.tensor
    }

    /// sigma = sum_{i,j} Rbar_ijij = trace(a).
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// a_ij = sum_k Rbar_ikjk.
    pub fn a(&self, i: usize, j: usize) -> f64 {
        self.a[i][j]
    }

    pub fn a_diag(&self) -> [f64; DIM] {
        let mut d = [0.0; DIM];
        for (i, x) in d.iter_mut().enumerate() {
            *x = self.a[i][i];
        }
        d
    }

    /// Traceless part of a.
    pub fn a_ring(&self, i: usize, j: usize) -> f64 {
        self.a_ring[i][j]
    }

    /// |aring|^2.
    pub fn a_ring_norm_sq(&self) -> f64 {
        self.a_ring_norm_sq
    }

    /// The six coordinate-plane sectionals Rbar_ijij, ordered
    /// (12, 13, 14, 23, 24, 34).
    pub fn coordinate_sectionals(&self) -> [f64; 6] {
        let t = &self.tensor;
        [
            t.get(0, 1, 0, 1),
            t.get(0, 2, 0, 2),
            t.get(0, 3, 0, 3),
            t.get(1, 2, 1, 2),
            t.get(1, 3, 1, 3),
            t.get(2, 3, 2, 3),
        ]
    }

    /// Checks the admissibility box: every coordinate-plane sectional in
    /// [0, 1] within `tol`. Returns the first offending plane on failure.
    pub fn check_admissible(&self, tol: f64) -> Result<()> {
        const PLANES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        for &(i, j) in &PLANES {
            let v = self.tensor.get(i, j, i, j);
            if !(-tol..=1.0 + tol).contains(&v) {
                return Err(Error::NotAdmissible { i, j, value: v });
            }
        }
        Ok(())
    }

    pub fn is_admissible(&self) -> bool {
        self.check_admissible(ADMISSIBLE_TOL).is_ok()
    }

    /// Strict admissibility: additionally estimates the sectional range over
    /// all 2-planes and requires it inside [-tol, 1+tol]. The range is an
    /// estimate, so this can only strengthen the rejection side.
    pub fn is_admissible_strict(&self, budget: usize, seed: u64, tol: f64) -> bool {
        if !self.is_admissible() {
            return false;
        }
        let range = self.tensor.sectional_range(budget, seed);
        range.min_est >= -tol && range.max_est <= 1.0 + tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::CurvatureTensor;

    fn approx(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn constant_curvature_scalars() {
        let amb = AmbientRestriction::constant_curvature(1.0);
        approx(amb.sigma(), 12.0, 1e-12);
        for i in 0..4 {
            approx(amb.a(i, i), 3.0, 1e-12);
        }
        approx(amb.a_ring_norm_sq(), 0.0, 1e-24);
        assert!(amb.is_admissible());
    }

    #[test]
    fn sigma_is_trace_and_aring_traceless() {
        for stream in 0..50 {
            let t = CurvatureTensor::random(4, 4, 31, stream).unwrap();
            let amb = AmbientRestriction::new(t).unwrap();
            let tr: f64 = (0..4).map(|i| amb.a(i, i)).sum();
            approx(amb.sigma(), tr, 1e-12);
            let tr_ring: f64 = (0..4).map(|i| amb.a_ring(i, i)).sum();
            approx(tr_ring, 0.0, 1e-12);
        }
    }

    #[test]
    fn admissibility_box() {
        assert!(AmbientRestriction::constant_curvature(0.0).is_admissible());
        assert!(AmbientRestriction::constant_curvature(1.0).is_admissible());
        assert!(!AmbientRestriction::constant_curvature(1.5).is_admissible());
        assert!(!AmbientRestriction::constant_curvature(-0.2).is_admissible());
    }

    #[test]
    fn strict_admissibility_catches_off_axis_planes() {
        // Gauss form of diag(2,-2,0,0) rotated 45 degrees in the (1,3)-plane:
        // coordinate sectionals sit in [-2, 0] but the rotated eigenplane
        // reaches -4, so a shifted copy passes the box and fails strict mode.
        let b = [
            1.0, 0.0, 1.0, 0.0, //
            0.0, -2.0, 0.0, 0.0, //
            1.0, 0.0, 1.0, 0.0, //
            0.0, 0.0, 0.0, 0.0,
        ];
        let g = CurvatureTensor::gauss_form(4, &b).unwrap();
        let c = CurvatureTensor::constant_curvature(4, 0.45).unwrap();
        let mix = CurvatureTensor::combine(&[(0.2, &g), (1.0, &c)]).unwrap();
        let amb = AmbientRestriction::new(mix).unwrap();
        assert!(amb.is_admissible());
        // true minimum sectional is 0.45 - 0.8 = -0.35
        assert!(!amb.is_admissible_strict(500, 9, 1e-6));
    }

    #[test]
    fn rejects_wrong_dimension() {
        let t = CurvatureTensor::zero(5).unwrap();
        assert!(AmbientRestriction::new(t).is_err());
    }
}
