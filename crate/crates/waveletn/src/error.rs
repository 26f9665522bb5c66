//! Error types shared by all modules.

use thiserror::Error;

/// Everything that can go wrong outside of I/O.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// The single-row condition `(1/N) Σ_{w^N=z} |m(w)|² = 1` fails.
    #[error("filter is not an isometry row (residual {residual:e})")]
    NotIsometric { residual: f64 },

    /// A filter family fails the N×N unitarity condition.
    #[error("filter bank is not unitary (max residual {residual:e})")]
    NotUnitaryBank { residual: f64 },

    /// Completion asked for a shape this crate does not solve.
    #[error("unsupported completion shape: {0}")]
    UnsupportedShape(String),

    /// The requested monomial window cannot hold the operator's action.
    #[error("window too small: need degree {required}, got {given}")]
    WindowTooSmall { required: i64, given: i64 },

    /// `m₀(1) ≠ √N`, so product/cascade normalization is undefined.
    #[error("low-pass filter not normalized: |m0(1) - sqrt(N)| = {defect:e}")]
    NotNormalized { defect: f64 },

    /// The cascade iteration's residual grew three times in a row.
    #[error("cascade iteration diverging (residual {residual:e} after {iters} iterations)")]
    Diverging { residual: f64, iters: usize },

    /// Cesàro averages did not settle below threshold.
    #[error("moment averages not convergent (tail variation {variation:e})")]
    NonConvergent { variation: f64 },

    /// The two orthonormality tests disagree; numerics are suspect.
    #[error("orthonormality tests disagree: {0}")]
    Inconsistent(String),

    /// A polynomial expected to be real-valued on the circle is not.
    #[error("polynomial is not real-valued on the circle (defect {defect:e})")]
    NotRealValued { defect: f64 },

    /// Branch or filter index outside `0..N`.
    #[error("index {index} out of range for N = {n}")]
    IndexOutOfRange { index: usize, n: usize },

    /// An arc with `end <= start`.
    #[error("malformed arc: [{start}, {end}) is empty or reversed")]
    MalformedArc { start: String, end: String },

    /// Cocycle table entry off the unit circle, wrong size, or order too large.
    #[error("invalid cocycle: {0}")]
    InvalidCocycle(String),

    /// Scale parameter outside its documented domain.
    #[error("invalid scale: {0}")]
    InvalidScale(String),

    /// Quadrature accounting lost too much energy to trust the output.
    #[error("grid quadrature unstable (defect {defect:e})")]
    QuadratureUnstable { defect: f64 },

    /// The low-pass filter fails the scaling-function criterion.
    #[error("filter does not generate orthonormal translates: {0}")]
    NotAFatherFilter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
