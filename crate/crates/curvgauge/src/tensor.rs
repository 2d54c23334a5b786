//! Algebraic curvature tensors in an orthonormal frame.
//!
//! Components are stored as a dense rank-4 table; the metric is the identity
//! throughout. Construction antisymmetrizes each index pair, symmetrizes the
//! pair exchange, and then *validates* the first Bianchi identity rather than
//! projecting onto it, so malformed input is rejected instead of silently
//! repaired.

use crate::error::{Error, Result};
use crate::rng::{gaussian, stream_rng};
use rand::Rng;

/// Smallest supported frame dimension (the Weyl coefficients need n >= 3).
pub const MIN_DIM: usize = 3;
/// Largest supported frame dimension (ambient 5-space).
pub const MAX_DIM: usize = 5;

/// Residual above which post-symmetrization input is rejected as malformed.
pub const BIANCHI_TOL: f64 = 1e-9;

/// Rank-4 curvature component table R_ijkl with the pair symmetries
/// R_ijkl = -R_jikl = -R_ijlk = R_klij and the first Bianchi identity.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureTensor {
    dim: usize,
    comp: Vec<f64>,
}

/// Contracted invariants of a curvature tensor: Ricci, scalar, Einstein
/// (traceless Ricci), and the Weyl tensor with its squared norm.
#[derive(Debug, Clone)]
pub struct CurvatureInvariants {
    pub dim: usize,
    /// Ricci tensor R_ij = sum_k R_ikjk, row-major dim x dim.
    pub ric: Vec<f64>,
    /// Scalar curvature S = trace Ric.
    pub scalar: f64,
    /// Einstein tensor E = Ric - (S/dim) I, row-major.
    pub einstein: Vec<f64>,
    /// Weyl tensor (totally trace-free part).
    pub weyl: CurvatureTensor,
    /// |W|^2 as the plain sum of squared components.
    pub weyl_norm_sq: f64,
    /// |Ric|^2 as the plain sum of squared components.
    pub ric_norm_sq: f64,
}

/// Diagonal second fundamental form in the principal frame.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeOperator {
    diag: Vec<f64>,
}

/// Min/max sectional-curvature estimate from sampling plus local refinement.
///
/// These are estimates, not certificates: the true range can exceed
/// `[min_est, max_est]`. The budget and seed are carried so the estimate is
/// reproducible.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SectionalRange {
    pub min_est: f64,
    pub max_est: f64,
    pub budget: usize,
    pub seed: u64,
}

#[inline]
fn table_len(dim: usize) -> usize {
    dim * dim * dim * dim
}

fn check_dim(dim: usize) -> Result<()> {
    if (MIN_DIM..=MAX_DIM).contains(&dim) {
        Ok(())
    } else {
        Err(Error::Dimension {
            dim,
            min: MIN_DIM,
            max: MAX_DIM,
        })
    }
}

impl CurvatureTensor {
    #[inline]
    fn idx(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.dim + j) * self.dim + k) * self.dim + l
    }

    /// Builds a tensor from a raw component table of shape `dim^4`
    /// (row-major in (i, j, k, l)).
    ///
    /// The table is antisymmetrized in (i,j) and (k,l), then symmetrized
    /// under pair exchange; the first Bianchi identity is then validated.
    /// Input that is already symmetric round-trips exactly.
    pub fn from_components(dim: usize, comp: Vec<f64>) -> Result<Self> {
        check_dim(dim)?;
        let expected = table_len(dim);
        if comp.len() != expected {
            return Err(Error::Shape {
                dim,
                expected,
                got: comp.len(),
            });
        }
        if comp.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let mut t = CurvatureTensor { dim, comp };
        t.symmetrize();
        let residual = t.bianchi_residual();
        if residual > BIANCHI_TOL {
            return Err(Error::BianchiViolation {
                residual,
                tol: BIANCHI_TOL,
            });
        }
        Ok(t)
    }

    /// Zero tensor (flat space).
    pub fn zero(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(CurvatureTensor {
            dim,
            comp: vec![0.0; table_len(dim)],
        })
    }

    /// Constant-sectional-curvature tensor:
    /// R_ijkl = c (delta_ik delta_jl - delta_il delta_jk).
    pub fn constant_curvature(dim: usize, c: f64) -> Result<Self> {
        check_dim(dim)?;
        let mut t = CurvatureTensor {
            dim,
            comp: vec![0.0; table_len(dim)],
        };
        for i in 0..dim {
            for j in 0..dim {
                if i != j {
                    let p = t.idx(i, j, i, j);
                    t.comp[p] = c;
                    let q = t.idx(i, j, j, i);
                    t.comp[q] = -c;
                }
            }
        }
        Ok(t)
    }

    /// Gauss-equation form of a symmetric matrix `b` (row-major dim x dim):
    /// R_ijkl = b_ik b_jl - b_il b_jk.
    ///
    /// These tensors carry all curvature symmetries and satisfy Bianchi
    /// exactly; linear combinations of them span the whole space of
    /// algebraic curvature tensors, which makes them the workhorse for
    /// random-tensor generation.
    pub fn gauss_form(dim: usize, b: &[f64]) -> Result<Self> {
        check_dim(dim)?;
        if b.len() != dim * dim {
            return Err(Error::Shape {
                dim,
                expected: dim * dim,
                got: b.len(),
            });
        }
        let mut t = CurvatureTensor {
            dim,
            comp: vec![0.0; table_len(dim)],
        };
        // the form only sees the symmetric part of b
        let sym = |i: usize, j: usize| 0.5 * (b[i * dim + j] + b[j * dim + i]);
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    for l in 0..dim {
                        let p = t.idx(i, j, k, l);
                        t.comp[p] = sym(i, k) * sym(j, l) - sym(i, l) * sym(j, k);
                    }
                }
            }
        }
        Ok(t)
    }

    /// Random algebraic curvature tensor: a combination of `terms`
    /// Gauss forms of Gaussian symmetric matrices with uniform weights.
    /// Satisfies all symmetries and Bianchi by construction.
    pub fn random(dim: usize, terms: usize, seed: u64, stream: u64) -> Result<Self> {
        check_dim(dim)?;
        let mut rng = stream_rng(seed, stream);
        let mut acc = CurvatureTensor {
            dim,
            comp: vec![0.0; table_len(dim)],
        };
        for _ in 0..terms.max(1) {
            let mut b = vec![0.0; dim * dim];
            for i in 0..dim {
                for j in i..dim {
                    let v = gaussian(&mut rng);
                    b[i * dim + j] = v;
                    b[j * dim + i] = v;
                }
            }
            let w: f64 = rng.gen_range(-1.0..1.0);
            let g = Self::gauss_form(dim, &b)?;
            for (a, x) in acc.comp.iter_mut().zip(g.comp.iter()) {
                *a += w * x;
            }
        }
        Ok(acc)
    }

    /// Linear combination sum_i c_i T_i. All terms must share a dimension.
    pub fn combine(terms: &[(f64, &CurvatureTensor)]) -> Result<Self> {
        let dim = terms.first().map(|(_, t)| t.dim).ok_or(Error::Constraint {
            detail: "empty combination".into(),
        })?;
        let mut acc = CurvatureTensor {
            dim,
            comp: vec![0.0; table_len(dim)],
        };
        for (c, t) in terms {
            if t.dim != dim {
                return Err(Error::DimensionMismatch {
                    ambient: dim,
                    shape: t.dim,
                });
            }
            for (a, x) in acc.comp.iter_mut().zip(t.comp.iter()) {
                *a += c * x;
            }
        }
        Ok(acc)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.comp[self.idx(i, j, k, l)]
    }

    pub fn components(&self) -> &[f64] {
        &self.comp
    }

    /// Sum of squared components.
    pub fn norm_sq(&self) -> f64 {
        self.comp.iter().map(|x| x * x).sum()
    }

    /// Copy with the six coordinate-plane sectionals R_ijij (i < j, order
    /// 12, 13, 14, 23, 24, 34; dim 4 only) replaced by `vals`, writing the
    /// full sign orbit of each. The R_ijij components never enter a
    /// nontrivial Bianchi cycle, so the result remains a valid curvature
    /// tensor.
    pub fn with_coordinate_sectionals(&self, vals: &[f64; 6]) -> CurvatureTensor {
        assert_eq!(self.dim, 4, "coordinate-sectional surgery is dim-4 only");
        let mut out = self.clone();
        let planes = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        for (&v, &(i, j)) in vals.iter().zip(planes.iter()) {
            let p = out.idx(i, j, i, j);
            out.comp[p] = v;
            let p = out.idx(j, i, j, i);
            out.comp[p] = v;
            let p = out.idx(i, j, j, i);
            out.comp[p] = -v;
            let p = out.idx(j, i, i, j);
            out.comp[p] = -v;
        }
        out
    }

    fn symmetrize(&mut self) {
        let d = self.dim;
        let mut out = vec![0.0; self.comp.len()];
        // antisymmetrize (i,j)
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        out[self.idx(i, j, k, l)] =
                            0.5 * (self.get(i, j, k, l) - self.get(j, i, k, l));
                    }
                }
            }
        }
        self.comp.copy_from_slice(&out);
        // antisymmetrize (k,l)
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        out[self.idx(i, j, k, l)] =
                            0.5 * (self.get(i, j, k, l) - self.get(i, j, l, k));
                    }
                }
            }
        }
        self.comp.copy_from_slice(&out);
        // symmetrize pair exchange (ij) <-> (kl)
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        out[self.idx(i, j, k, l)] =
                            0.5 * (self.get(i, j, k, l) + self.get(k, l, i, j));
                    }
                }
            }
        }
        self.comp.copy_from_slice(&out);
    }

    /// Largest first-Bianchi cyclic sum |R_ijkl + R_jkil + R_kijl|.
    pub fn bianchi_residual(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let s = self.get(i, j, k, l) + self.get(j, k, i, l) + self.get(k, i, j, l);
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }

    /// Worst deviation from the pair symmetries (zero after construction;
    /// exposed for property tests).
    pub fn symmetry_residual(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let v = self.get(i, j, k, l);
                        worst = worst
                            .max((v + self.get(j, i, k, l)).abs())
                            .max((v + self.get(i, j, l, k)).abs())
                            .max((v - self.get(k, l, i, j)).abs());
                    }
                }
            }
        }
        worst
    }

    /// Ricci, scalar, Einstein, and Weyl data.
    ///
    /// The Weyl tensor uses the dimension-n coefficients 1/(n-2) and
    /// S/((n-1)(n-2)); at n = 4 these are the familiar 1/2 and S/6.
    pub fn invariants(&self) -> CurvatureInvariants {
        let d = self.dim;
        let mut ric = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                let mut s = 0.0;
                for k in 0..d {
                    s += self.get(i, k, j, k);
                }
                ric[i * d + j] = s;
            }
        }
        let scalar: f64 = (0..d).map(|i| ric[i * d + i]).sum();
        let mut einstein = ric.clone();
        for i in 0..d {
            einstein[i * d + i] -= scalar / d as f64;
        }
        let c1 = 1.0 / (d as f64 - 2.0);
        let c2 = scalar / ((d as f64 - 1.0) * (d as f64 - 2.0));
        let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        let mut weyl = CurvatureTensor {
            dim: d,
            comp: vec![0.0; table_len(d)],
        };
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let r = |a: usize, b: usize| ric[a * d + b];
                        let w = self.get(i, j, k, l)
                            - c1 * (r(i, k) * delta(j, l) - r(i, l) * delta(j, k)
                                + r(j, l) * delta(i, k)
                                - r(j, k) * delta(i, l))
                            + c2 * (delta(j, l) * delta(i, k) - delta(j, k) * delta(i, l));
                        let p = weyl.idx(i, j, k, l);
                        weyl.comp[p] = w;
                    }
                }
            }
        }
        let weyl_norm_sq = weyl.norm_sq();
        let ric_norm_sq = ric.iter().map(|x| x * x).sum();
        CurvatureInvariants {
            dim: d,
            ric,
            scalar,
            einstein,
            weyl,
            weyl_norm_sq,
            ric_norm_sq,
        }
    }

    /// Sectional curvature of the plane spanned by orthonormal `u`, `v`:
    /// sum R_ijkl u_i v_j u_k v_l.
    pub fn sectional(&self, u: &[f64], v: &[f64]) -> Result<f64> {
        let d = self.dim;
        if u.len() != d || v.len() != d {
            return Err(Error::Frame {
                detail: format!("vector length {} / {} vs dim {}", u.len(), v.len(), d),
            });
        }
        const FRAME_TOL: f64 = 1e-12;
        let nu: f64 = u.iter().map(|x| x * x).sum::<f64>();
        let nv: f64 = v.iter().map(|x| x * x).sum::<f64>();
        let uv: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
        if (nu - 1.0).abs() > FRAME_TOL || (nv - 1.0).abs() > FRAME_TOL || uv.abs() > FRAME_TOL {
            return Err(Error::Frame {
                detail: format!("|u|^2 = {nu}, |v|^2 = {nv}, u.v = {uv}"),
            });
        }
        Ok(self.sectional_unchecked(u, v))
    }

    fn sectional_unchecked(&self, u: &[f64], v: &[f64]) -> f64 {
        let d = self.dim;
        let mut s = 0.0;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        s += self.get(i, j, k, l) * u[i] * v[j] * u[k] * v[l];
                    }
                }
            }
        }
        s
    }

    /// Estimates the min/max sectional curvature over 2-planes by `budget`
    /// random plane samples followed by local hill descent/ascent from the
    /// best samples. Deterministic in `seed`.
    pub fn sectional_range(&self, budget: usize, seed: u64) -> SectionalRange {
        let budget = budget.max(1);
        let d = self.dim;
        let mut rng = stream_rng(seed, 0);
        let sample_plane = |rng: &mut rand_chacha::ChaCha8Rng| -> ([f64; MAX_DIM], [f64; MAX_DIM]) {
            loop {
                let mut u = [0.0; MAX_DIM];
                let mut v = [0.0; MAX_DIM];
                for x in u.iter_mut().take(d) {
                    *x = gaussian(rng);
                }
                for x in v.iter_mut().take(d) {
                    *x = gaussian(rng);
                }
                if let Some(pair) = orthonormalize(d, u, v) {
                    return pair;
                }
            }
        };
        let mut best_min = f64::INFINITY;
        let mut best_max = f64::NEG_INFINITY;
        let mut arg_min = ([0.0; MAX_DIM], [0.0; MAX_DIM]);
        let mut arg_max = ([0.0; MAX_DIM], [0.0; MAX_DIM]);
        for _ in 0..budget {
            let (u, v) = sample_plane(&mut rng);
            let s = self.sectional_unchecked(&u[..d], &v[..d]);
            if s < best_min {
                best_min = s;
                arg_min = (u, v);
            }
            if s > best_max {
                best_max = s;
                arg_max = (u, v);
            }
        }
        // local refinement: random perturbations with shrinking step
        let refine = |rng: &mut rand_chacha::ChaCha8Rng,
                      start: ([f64; MAX_DIM], [f64; MAX_DIM]),
                      start_val: f64,
                      sign: f64| {
            let (mut u, mut v) = start;
            let mut val = start_val;
            let mut step = 0.3_f64;
            for it in 0..400 {
                let mut cu = u;
                let mut cv = v;
                for x in cu.iter_mut().take(d) {
                    *x += step * gaussian(rng);
                }
                for x in cv.iter_mut().take(d) {
                    *x += step * gaussian(rng);
                }
                if let Some((nu, nv)) = orthonormalize(d, cu, cv) {
                    let s = self.sectional_unchecked(&nu[..d], &nv[..d]);
                    if sign * s > sign * val {
                        val = s;
                        u = nu;
                        v = nv;
                    }
                }
                if it % 40 == 39 {
                    step *= 0.6;
                }
            }
            val
        };
        let refined_min = refine(&mut rng, arg_min, best_min, -1.0);
        let refined_max = refine(&mut rng, arg_max, best_max, 1.0);
        SectionalRange {
            min_est: refined_min,
            max_est: refined_max,
            budget,
            seed,
        }
    }
}

fn orthonormalize(
    d: usize,
    mut u: [f64; MAX_DIM],
    mut v: [f64; MAX_DIM],
) -> Option<([f64; MAX_DIM], [f64; MAX_DIM])> {
    const DEGENERATE: f64 = 1e-8;
    let nu: f64 = u[..d].iter().map(|x| x * x).sum::<f64>().sqrt();
    if nu < DEGENERATE {
        return None;
    }
    for x in u.iter_mut().take(d) {
        *x /= nu;
    }
    let uv: f64 = u[..d].iter().zip(&v[..d]).map(|(a, b)| a * b).sum();
    for (x, y) in v.iter_mut().take(d).zip(&u[..d]) {
        *x -= uv * y;
    }
    let nv: f64 = v[..d].iter().map(|x| x * x).sum::<f64>().sqrt();
    if nv < DEGENERATE {
        return None;
    }
    for x in v.iter_mut().take(d) {
        *x /= nv;
    }
    // one more projection pass tightens orthogonality to ~1e-16
    let uv2: f64 = u[..d].iter().zip(&v[..d]).map(|(a, b)| a * b).sum();
    for (x, y) in v.iter_mut().take(d).zip(&u[..d]) {
        *x -= uv2 * y;
    }
    let nv2: f64 = v[..d].iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in v.iter_mut().take(d) {
        *x /= nv2;
    }
    Some((u, v))
}

impl ShapeOperator {
    /// Shape operator with the given principal curvatures (any real spectrum
    /// is legal).
    pub fn new(diag: Vec<f64>) -> Self {
        ShapeOperator { diag }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn principal_curvatures(&self) -> &[f64] {
        &self.diag
    }
}

/// Gauss equation: induced tensor R_ijkl = Rbar_ijkl + h_ik h_jl - h_il h_jk
/// with h = diag(lambda) in the shared principal frame.
pub fn gauss_induced(
    ambient: &crate::ambient::AmbientRestriction,
    shape: &ShapeOperator,
) -> Result<CurvatureTensor> {
    let amb = ambient.tensor();
    let d = amb.dim();
    if shape.dim() != d {
        return Err(Error::DimensionMismatch {
            ambient: d,
            shape: shape.dim(),
        });
    }
    let lam = shape.principal_curvatures();
    let mut out = amb.clone();
    for i in 0..d {
        for j in 0..d {
            if i != j {
                let p = out.idx(i, j, i, j);
                out.comp[p] += lam[i] * lam[j];
                let q = out.idx(i, j, j, i);
                out.comp[q] -= lam[i] * lam[j];
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::AmbientRestriction;

    fn approx(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn slot(i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * 4 + j) * 4 + k) * 4 + l
    }

    #[test]
    fn zero_table_accepted() {
        let t = CurvatureTensor::from_components(4, vec![0.0; 256]).unwrap();
        assert_eq!(t.norm_sq(), 0.0);
    }

    #[test]
    fn constant_curvature_round_trips() {
        let c = CurvatureTensor::constant_curvature(4, 1.0).unwrap();
        let back = CurvatureTensor::from_components(4, c.components().to_vec()).unwrap();
        assert_eq!(c, back);
    }

    #[test]
    fn asymmetric_entry_symmetrizes_to_quarter() {
        // only R_1212 = 1 set (0-based (0,1,0,1)); symmetrization spreads it
        // over the 4-element orbit, so each signed slot carries 1/4
        let mut table = vec![0.0; 256];
        table[slot(0, 1, 0, 1)] = 1.0;
        let t = CurvatureTensor::from_components(4, table).unwrap();
        approx(t.get(0, 1, 0, 1), 0.25, 0.0);
        approx(t.get(1, 0, 1, 0), t.get(0, 1, 0, 1), 0.0);
        approx(t.get(1, 0, 0, 1), -t.get(0, 1, 0, 1), 0.0);
    }

    #[test]
    fn symmetric_input_round_trips_with_tiny_bianchi_residual() {
        for stream in 0..100 {
            let t = CurvatureTensor::random(4, 4, 55, stream).unwrap();
            let back = CurvatureTensor::from_components(4, t.components().to_vec()).unwrap();
            assert_eq!(t.components(), back.components());
            assert_eq!(back.symmetry_residual(), 0.0);
            assert!(back.bianchi_residual() <= 1e-12);
        }
    }

    #[test]
    fn wrong_shape_rejected() {
        let err = CurvatureTensor::from_components(4, vec![0.0; 100]).unwrap_err();
        assert!(matches!(err, Error::Shape { .. }));
    }

    #[test]
    fn dim_out_of_range_rejected() {
        assert!(matches!(
            CurvatureTensor::zero(2),
            Err(Error::Dimension { .. })
        ));
        assert!(matches!(
            CurvatureTensor::zero(6),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn bianchi_violation_rejected() {
        // R_1234 = 1 with no compensating cyclic partners survives pair
        // symmetrization but fails the cyclic sum
        let mut table = vec![0.0; 256];
        table[slot(0, 1, 2, 3)] = 1.0;
        let err = CurvatureTensor::from_components(4, table).unwrap_err();
        assert!(matches!(err, Error::BianchiViolation { .. }));
    }

    #[test]
    fn constant_curvature_invariants() {
        // S = dim (dim-1) c; Ric = (dim-1) c I; W = 0
        let inv = CurvatureTensor::constant_curvature(4, 1.0)
            .unwrap()
            .invariants();
        approx(inv.scalar, 12.0, 1e-12);
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 3.0 } else { 0.0 };
                approx(inv.ric[i * 4 + j], want, 1e-12);
            }
        }
        approx(inv.ric_norm_sq, 36.0, 1e-12);
        approx(inv.weyl_norm_sq, 0.0, 1e-20);

        let inv2 = CurvatureTensor::constant_curvature(4, 2.0)
            .unwrap()
            .invariants();
        approx(inv2.scalar, 24.0, 1e-12);
    }

    #[test]
    fn einstein_trace_and_weyl_trace_vanish_on_random_tensors() {
        for stream in 0..200 {
            let t = CurvatureTensor::random(4, 4, 99, stream).unwrap();
            let inv = t.invariants();
            let tr: f64 = (0..4).map(|i| inv.einstein[i * 4 + i]).sum();
            assert!(tr.abs() < 1e-10, "einstein trace {tr}");
            for i in 0..4 {
                for j in 0..4 {
                    let mut s = 0.0;
                    for k in 0..4 {
                        s += inv.weyl.get(i, k, j, k);
                    }
                    assert!(s.abs() < 1e-10, "weyl trace ({i},{j}) = {s}");
                }
            }
        }
    }

    #[test]
    fn ricci_decomposes_orthogonally() {
        // |Ric|^2 = |E|^2 + S^2/dim
        for stream in 0..100 {
            let t = CurvatureTensor::random(4, 4, 123, stream).unwrap();
            let inv = t.invariants();
            let e_sq: f64 = inv.einstein.iter().map(|x| x * x).sum();
            approx(inv.ric_norm_sq, e_sq + inv.scalar * inv.scalar / 4.0, 1e-9);
        }
    }

    #[test]
    fn sectional_on_constant_curvature() {
        let t = CurvatureTensor::constant_curvature(4, 2.5).unwrap();
        let u = [1.0, 0.0, 0.0, 0.0];
        let v = [0.0, 1.0, 0.0, 0.0];
        approx(t.sectional(&u, &v).unwrap(), 2.5, 1e-12);
        // rotated plane
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u2 = [s, s, 0.0, 0.0];
        let v2 = [0.0, 0.0, 1.0, 0.0];
        approx(t.sectional(&u2, &v2).unwrap(), 2.5, 1e-9);
    }

    #[test]
    fn sectional_coordinate_plane_reads_component() {
        let t = CurvatureTensor::random(4, 3, 5, 0).unwrap();
        let u = [1.0, 0.0, 0.0, 0.0];
        let v = [0.0, 1.0, 0.0, 0.0];
        approx(t.sectional(&u, &v).unwrap(), t.get(0, 1, 0, 1), 1e-12);
    }

    #[test]
    fn sectional_rejects_bad_frames() {
        let t = CurvatureTensor::constant_curvature(4, 1.0).unwrap();
        let u = [1.0, 0.0, 0.0, 0.0];
        assert!(t.sectional(&u, &[0.5, 0.5, 0.0, 0.0]).is_err());
        assert!(t.sectional(&u, &u).is_err());
    }

    #[test]
    fn sectional_is_linear_in_the_tensor() {
        let a = CurvatureTensor::random(4, 3, 1, 0).unwrap();
        let b = CurvatureTensor::random(4, 3, 1, 1).unwrap();
        let mix = CurvatureTensor::combine(&[(0.3, &a), (0.7, &b)]).unwrap();
        let mut rng = stream_rng(2, 0);
        for _ in 0..50 {
            let mut u = [0.0; 5];
            let mut v = [0.0; 5];
            for x in u.iter_mut().take(4) {
                *x = gaussian(&mut rng);
            }
            for x in v.iter_mut().take(4) {
                *x = gaussian(&mut rng);
            }
            if let Some((u, v)) = orthonormalize(4, u, v) {
                let s = mix.sectional_unchecked(&u[..4], &v[..4]);
                let sa = a.sectional_unchecked(&u[..4], &v[..4]);
                let sb = b.sectional_unchecked(&u[..4], &v[..4]);
                approx(s, 0.3 * sa + 0.7 * sb, 1e-10);
            }
        }
    }

    #[test]
    fn sectional_range_of_constant_curvature_is_tight() {
        for &c in &[0.0, 1.0, -0.7] {
            let t = CurvatureTensor::constant_curvature(4, c).unwrap();
            let r = t.sectional_range(200, 11);
            approx(r.min_est, c, 1e-9);
            approx(r.max_est, c, 1e-9);
        }
    }

    #[test]
    fn sectional_range_convex_combination() {
        let a = CurvatureTensor::constant_curvature(4, 0.0).unwrap();
        let b = CurvatureTensor::constant_curvature(4, 1.0).unwrap();
        let mix = CurvatureTensor::combine(&[(0.3, &a), (0.7, &b)]).unwrap();
        let r = mix.sectional_range(200, 3);
        approx(r.min_est, 0.7, 1e-9);
        approx(r.max_est, 0.7, 1e-9);
    }

    #[test]
    fn sectional_range_is_deterministic() {
        let t = CurvatureTensor::random(4, 4, 8, 2).unwrap();
        let a = t.sectional_range(300, 21);
        let b = t.sectional_range(300, 21);
        assert_eq!(a, b);
    }

    #[test]
    fn gauss_induced_totally_geodesic() {
        let amb = AmbientRestriction::constant_curvature(1.0);
        let ind = gauss_induced(&amb, &ShapeOperator::new(vec![0.0; 4])).unwrap();
        let want = CurvatureTensor::constant_curvature(4, 1.0).unwrap();
        for (x, y) in ind.components().iter().zip(want.components()) {
            approx(*x, *y, 1e-15);
        }
    }

    #[test]
    fn gauss_induced_umbilic_shifts_curvature() {
        // umbilic t over unit ambient: constant curvature 1 + t^2
        let amb = AmbientRestriction::constant_curvature(1.0);
        for &t in &[0.5, 1.0, -2.0] {
            let ind = gauss_induced(&amb, &ShapeOperator::new(vec![t; 4])).unwrap();
            let want = CurvatureTensor::constant_curvature(4, 1.0 + t * t).unwrap();
            for (x, y) in ind.components().iter().zip(want.components()) {
                approx(*x, *y, 1e-12);
            }
        }
        let ind = gauss_induced(&amb, &ShapeOperator::new(vec![1.0; 4])).unwrap();
        let r = ind.sectional_range(100, 4);
        approx(r.min_est, 2.0, 1e-9);
        approx(r.max_est, 2.0, 1e-9);
    }

    #[test]
    fn gauss_induced_saddle_over_flat() {
        let amb = AmbientRestriction::flat();
        let ind = gauss_induced(&amb, &ShapeOperator::new(vec![1.0, -1.0, 0.0, 0.0])).unwrap();
        approx(ind.get(0, 1, 0, 1), -1.0, 1e-15);
        for (i, j) in [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)] {
            approx(ind.get(i, j, i, j), 0.0, 1e-15);
        }
    }

    #[test]
    fn gauss_induced_additive_in_ambient() {
        // gauss_induced(amb1 + amb2, A) = gauss_induced(amb1, A) + amb2
        let t1 = CurvatureTensor::random(4, 3, 77, 0).unwrap();
        let t2 = CurvatureTensor::random(4, 3, 77, 1).unwrap();
        let sum = CurvatureTensor::combine(&[(1.0, &t1), (1.0, &t2)]).unwrap();
        let shape = ShapeOperator::new(vec![0.3, -0.2, 0.9, 0.1]);
        let lhs = gauss_induced(&AmbientRestriction::new(sum).unwrap(), &shape).unwrap();
        let part = gauss_induced(&AmbientRestriction::new(t1).unwrap(), &shape).unwrap();
        for idx in 0..256 {
            approx(
                lhs.components()[idx],
                part.components()[idx] + t2.components()[idx],
                1e-12,
            );
        }
    }

    #[test]
    fn gauss_induced_dimension_mismatch() {
        let amb = AmbientRestriction::flat();
        let err = gauss_induced(&amb, &ShapeOperator::new(vec![0.0; 3])).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }
}
