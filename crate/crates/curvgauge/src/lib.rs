//! Numerical verification toolkit for curvature inequalities of locally
//! conformally flat hypersurfaces in 5-manifolds with sectional curvature
//! in [0, 1].
//!
//! The crate provides:
//! - algebraic curvature tensors with their Ricci/Weyl invariants
//!   ([`tensor`]),
//! - the pointwise quantity Q = S^2/12 - |Ric|^2/4, its frame decomposition,
//!   the case analysis, and the mean-curvature bound ([`claim`]),
//! - randomized and optimization-driven falsification searches over
//!   admissible data families ([`search`]),
//! - rotationally symmetric warped-product ambients and the two-eigenvalue
//!   flatness criterion ([`warped`]),
//! - slice hypersurfaces with analytic and Monte Carlo Gauss-Bonnet-Chern
//!   integrals ([`slices`]).
//!
//! All values are immutable after construction and all operations are pure
//! functions, so everything here is safe to fan out across threads.

pub mod ambient;
pub mod claim;
pub mod error;
pub mod rng;
pub mod search;
mod simplex;
pub mod slices;
pub mod spectrum;
pub mod tensor;
pub mod warped;

pub use ambient::AmbientRestriction;
pub use claim::{
    claim_bound, claim_margin, classify_case, f_profile, q_decomposed, q_direct, CaseLabel,
    ClaimBound, LcfGate, MarginReport,
};
pub use error::{Error, Result};
pub use search::{
    epsilon0_threshold, maximize_margin, sample_point, Family, SearchConfig, SearchReport,
};
pub use spectrum::ShapeSpectrum;
pub use tensor::{
    gauss_induced, CurvatureInvariants, CurvatureTensor, SectionalRange, ShapeOperator,
};
pub use warped::{
    kappa, lcf_classify, lcf_weyl, pattern_distance, rotsym_margin, warped_ambient, KappaPair,
    TangentProjection, WarpedPreset,
};
