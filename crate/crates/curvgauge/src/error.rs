use thiserror::Error;

/// Errors raised by curvature construction, frame checks, and margin gates.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("component table has {got} entries, expected {expected} for dimension {dim}")]
    Shape {
        dim: usize,
        expected: usize,
        got: usize,
    },

    #[error("dimension {dim} outside supported range {min}..={max}")]
    Dimension { dim: usize, min: usize, max: usize },

    #[error("first Bianchi identity violated after symmetrization (residual {residual:.3e} > {tol:.3e})")]
    BianchiViolation { residual: f64, tol: f64 },

    #[error("non-finite component in input table")]
    NonFinite,

    #[error("frame vectors fail orthonormality: {detail}")]
    Frame { detail: String },

    #[error("dimension mismatch: ambient dim {ambient} vs shape operator dim {shape}")]
    DimensionMismatch { ambient: usize, shape: usize },

    #[error("ambient data not admissible: coordinate sectional {value:.6} at plane ({i},{j}) outside [0,1]")]
    NotAdmissible { i: usize, j: usize, value: f64 },

    #[error(
        "point is not locally conformally flat at tolerance {tol:.3e} (residual {residual:.3e})"
    )]
    NotLcf { residual: f64, tol: f64 },

    #[error("traceless spectrum matches no case pattern (internal consistency failure)")]
    Unclassifiable,

    #[error("warping function not positive at t = {t} (phi = {phi})")]
    Domain { t: f64, phi: f64 },

    #[error("constraint violated: {detail}")]
    Constraint { detail: String },

    #[error("kappa pair not admissible for the rotationally symmetric bound: kappa1 = {kappa1}, kappa2 = {kappa2}")]
    NotAdmissibleForRotsym { kappa1: f64, kappa2: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
