//! Principal-curvature spectra and their traceless power sums.

use serde::Serialize;

/// Spectrum of the second fundamental form at a point: mean curvature H,
/// principal curvatures lambda_i, traceless eigenvalues mu_i = lambda_i - H,
/// their power sums, and the Gauss-Kronecker value of the traceless part.
///
/// `lambda` and `mu` are sorted descending for case classification;
/// `mu_frame` keeps the caller's index order so contractions against
/// frame-indexed ambient data (a_ii, T_i) pair correctly.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ShapeSpectrum {
    h: f64,
    lambda: [f64; 4],
    mu: [f64; 4],
    mu_frame: [f64; 4],
    a_norm_sq: f64,
    p3: f64,
    p4: f64,
    gk: f64,
}

impl ShapeSpectrum {
    /// Derives the spectrum from principal curvatures in frame order.
    pub fn from_principal_curvatures(lambda_frame: [f64; 4]) -> Self {
        let h = lambda_frame.iter().sum::<f64>() / 4.0;
        let mut mu_frame = [0.0; 4];
        for (m, l) in mu_frame.iter_mut().zip(lambda_frame.iter()) {
            *m = l - h;
        }
        let mut lambda = lambda_frame;
        lambda.sort_by(|a, b| b.partial_cmp(a).expect("finite principal curvatures"));
        let mut mu = mu_frame;
        mu.sort_by(|a, b| b.partial_cmp(a).expect("finite principal curvatures"));
        // power sums in frame order, so a sign flip of every entry negates
        // p3 exactly and preserves the even sums bit-for-bit
        let a_norm_sq = mu_frame.iter().map(|m| m * m).sum();
        let p3 = mu_frame.iter().map(|m| m * m * m).sum();
        let p4 = mu_frame.iter().map(|m| m * m * m * m).sum();
        let gk = mu_frame.iter().product();
        ShapeSpectrum {
            h,
            lambda,
            mu,
            mu_frame,
            a_norm_sq,
            p3,
            p4,
            gk,
        }
    }

    /// Spectrum from traceless eigenvalues plus a mean curvature.
    ///
    /// `mu` is re-centered onto the traceless hyperplane and `h` is stored
    /// exactly as given, so a pattern like (m, m, m, -3m) with h = 0 keeps
    /// H = 0 bit-for-bit even when the float sum of mu is a rounding hair
    /// off zero.
    pub fn from_traceless(mu: [f64; 4], h: f64) -> Self {
        let mean = mu.iter().sum::<f64>() / 4.0;
        let mut mu_frame = mu;
        for x in mu_frame.iter_mut() {
            *x -= mean;
        }
        let mut lambda = [0.0; 4];
        for (l, m) in lambda.iter_mut().zip(mu_frame.iter()) {
            *l = m + h;
        }
        lambda.sort_by(|a, b| b.partial_cmp(a).expect("finite principal curvatures"));
        let mut mu_sorted = mu_frame;
        mu_sorted.sort_by(|a, b| b.partial_cmp(a).expect("finite principal curvatures"));
        let a_norm_sq = mu_frame.iter().map(|m| m * m).sum();
        let p3 = mu_frame.iter().map(|m| m * m * m).sum();
        let p4 = mu_frame.iter().map(|m| m * m * m * m).sum();
        let gk = mu_frame.iter().product();
        ShapeSpectrum {
            h,
            lambda,
            mu: mu_sorted,
            mu_frame,
            a_norm_sq,
            p3,
            p4,
            gk,
        }
    }

    /// Mean curvature H.
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Principal curvatures sorted descending.
    pub fn lambda(&self) -> [f64; 4] {
        self.lambda
    }

    /// Traceless eigenvalues sorted descending.
    pub fn mu(&self) -> [f64; 4] {
        self.mu
    }

    /// Traceless eigenvalues in the caller's frame order.
    pub fn mu_frame(&self) -> [f64; 4] {
        self.mu_frame
    }

    /// Principal curvatures in the caller's frame order.
    pub fn lambda_frame(&self) -> [f64; 4] {
        let mut l = self.mu_frame;
        for x in l.iter_mut() {
            *x += self.h;
        }
        l
    }

    /// |Aring|^2 = sum mu_i^2.
    pub fn a_norm_sq(&self) -> f64 {
        self.a_norm_sq
    }

    /// sum mu_i^3.
    pub fn p3(&self) -> f64 {
        self.p3
    }

    /// sum mu_i^4.
    pub fn p4(&self) -> f64 {
        self.p4
    }

    /// Gauss-Kronecker value of the traceless part: mu_1 mu_2 mu_3 mu_4.
    pub fn gauss_kronecker(&self) -> f64 {
        self.gk
    }

    /// The orientation flip (H, mu) -> (-H, -mu), i.e. lambda -> -lambda.
    ///
    /// Built by negating the stored fields directly: negation is exact in
    /// floating point, so the even power sums are preserved bit-for-bit and
    /// p3 is negated bit-for-bit.
    pub fn flipped(&self) -> Self {
        let mut mu_frame = self.mu_frame;
        for x in mu_frame.iter_mut() {
            *x = -*x;
        }
        let mut lambda = self.lambda;
        for x in lambda.iter_mut() {
            *x = -*x;
        }
        lambda.reverse(); // negation reverses the descending order
        let mut mu = self.mu;
        for x in mu.iter_mut() {
            *x = -*x;
        }
        mu.reverse();
        ShapeSpectrum {
            h: -self.h,
            lambda,
            mu,
            mu_frame,
            a_norm_sq: self.a_norm_sq,
            p3: -self.p3,
            p4: self.p4,
            gk: self.gk,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn approx(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn umbilic_spectrum_is_trivial() {
        let s = ShapeSpectrum::from_principal_curvatures([0.7; 4]);
        approx(s.h(), 0.7, 0.0);
        approx(s.a_norm_sq(), 0.0, 0.0);
        approx(s.gauss_kronecker(), 0.0, 0.0);
    }

    #[test]
    fn exceptional_pattern_power_sums() {
        // lambda = (3m, -m, -m, -m): H = 0, |Aring|^2 = 12 m^2,
        // p3 = 24 m^3, p4 = 84 m^4, GK = -3 m^4
        let m = 1.3_f64;
        let s = ShapeSpectrum::from_principal_curvatures([3.0 * m, -m, -m, -m]);
        approx(s.h(), 0.0, 1e-15);
        approx(s.a_norm_sq(), 12.0 * m * m, 1e-12);
        approx(s.p3(), 24.0 * m.powi(3), 1e-12);
        approx(s.p4(), 84.0 * m.powi(4), 1e-11);
        approx(s.gauss_kronecker(), -3.0 * m.powi(4), 1e-12);
        // quartic identity: p4 = (1/2)|Aring|^4 - 4 GK
        approx(
            s.p4(),
            0.5 * s.a_norm_sq().powi(2) - 4.0 * s.gauss_kronecker(),
            1e-11,
        );
        // cubic bound is an equality on this pattern
        approx(s.p3(), s.a_norm_sq().powf(1.5) / 3f64.sqrt(), 1e-11);
    }

    #[test]
    fn sorting_and_frame_order_coexist() {
        let s = ShapeSpectrum::from_principal_curvatures([-1.0, 3.0, 0.5, 0.5]);
        let mu = s.mu();
        assert!(mu[0] >= mu[1] && mu[1] >= mu[2] && mu[2] >= mu[3]);
        let mf = s.mu_frame();
        approx(mf[1], 3.0 - s.h(), 1e-15);
        approx(mf[0], -1.0 - s.h(), 1e-15);
    }

    #[test]
    fn flip_negates_frame_mu_exactly() {
        let s = ShapeSpectrum::from_principal_curvatures([1.7, -0.3, 2.2, -4.0]);
        let f = s.flipped();
        assert_eq!(f.h(), -s.h());
        for i in 0..4 {
            assert_eq!(f.mu_frame()[i], -s.mu_frame()[i]);
        }
        assert_eq!(f.a_norm_sq(), s.a_norm_sq());
        assert_eq!(f.p3(), -s.p3());
        assert_eq!(f.p4(), s.p4());
        assert_eq!(f.gauss_kronecker(), s.gauss_kronecker());
    }

    proptest! {
        #[test]
        fn mu_sums_to_zero(l in prop::array::uniform4(-10.0..10.0f64)) {
            let s = ShapeSpectrum::from_principal_curvatures(l);
            prop_assert!(s.mu_frame().iter().sum::<f64>().abs() <= 1e-12);
        }

        #[test]
        fn quartic_identity_holds(l in prop::array::uniform4(-5.0..5.0f64)) {
            // p4 = (1/2)|Aring|^4 - 4 GK for any traceless quadruple
            let s = ShapeSpectrum::from_principal_curvatures(l);
            let rhs = 0.5 * s.a_norm_sq() * s.a_norm_sq() - 4.0 * s.gauss_kronecker();
            prop_assert!((s.p4() - rhs).abs() <= 1e-10 * (1.0 + s.p4().abs()));
        }

        #[test]
        fn cubic_power_sum_bound(l in prop::array::uniform4(-5.0..5.0f64)) {
            // sum mu^3 <= |Aring|^3 / sqrt(3)
            let s = ShapeSpectrum::from_principal_curvatures(l);
            let bound = s.a_norm_sq().powf(1.5) / 3f64.sqrt();
            prop_assert!(s.p3() <= bound + 1e-10 * (1.0 + bound));
        }

        #[test]
        fn lambda_substitution_identities(l in prop::array::uniform4(-3.0..3.0f64)) {
            // sum lambda^3 = p3 + 4H^3 + 3H|Aring|^2
            // sum lambda^4 = p4 - 12H^4 - 6H^2|Aring|^2 + 4H sum lambda^3
            let s = ShapeSpectrum::from_principal_curvatures(l);
            let h = s.h();
            let l3: f64 = l.iter().map(|x| x * x * x).sum();
            let l4: f64 = l.iter().map(|x| x * x * x * x).sum();
            let want3 = s.p3() + 4.0 * h.powi(3) + 3.0 * h * s.a_norm_sq();
            prop_assert!((l3 - want3).abs() <= 1e-10 * (1.0 + l3.abs()));
            let want4 = s.p4() - 12.0 * h.powi(4) - 6.0 * h * h * s.a_norm_sq() + 4.0 * h * l3;
            prop_assert!((l4 - want4).abs() <= 1e-10 * (1.0 + l4.abs()));
        }
    }
}
