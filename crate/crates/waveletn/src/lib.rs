//! Scale-N multiresolution wavelet toolkit built on the operator calculus
//! of filter banks acting on `L²(T)`.
//!
//! A filter bank `m_0, …, m_{N-1}` of Laurent polynomials on the circle
//! induces the isometries `(S_i ξ)(z) = m_i(z) ξ(z^N)`. This crate
//! validates the unitarity condition behind that picture, completes a
//! low-pass row to a full bank, decides orthonormality of the scaling
//! function's translates through the spectrum of the associated transfer
//! operator, constructs scaling and mother functions by cascade and
//! infinite products, classifies the isometries (shift versus unitary
//! part), runs exact pyramid analysis/synthesis, and decides coboundary
//! questions for the diagonal representations' classifying cocycles.
//!
//! All numerics are generic over the scalar type through [`Scalar`];
//! `…64` aliases below fix `f64`, which the command-line tool and the
//! acceptance suite use.

pub mod cascade;
pub mod cuntz;
mod dense;
pub mod diagonal;
pub mod error;
pub mod filterbank;
pub mod filters;
pub mod io;
pub mod laurent;
pub mod multiscale;
pub mod pyramid;
pub mod scalar;
pub mod transfer;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Complex coefficient over the crate's default `f64` scalar.
pub type Complex64 = num_complex::Complex<f64>;
/// `f64` Laurent polynomial.
pub type LaurentPoly64 = laurent::LaurentPoly<f64>;
/// `f64` filter bank.
pub type FilterBank64 = filterbank::FilterBank<f64>;
/// `f64` polyphase vector.
pub type PolyphaseVector64 = filterbank::PolyphaseVector<f64>;
/// `f64` Wold classification report.
pub type WoldReport64 = cuntz::WoldReport<f64>;
/// `f64` transfer-operator matrix.
pub type TransferMatrix64 = transfer::TransferMatrix<f64>;
/// `f64` moment data for the limit measure.
pub type MeasureD64 = transfer::MeasureD<f64>;
/// `f64` scaling-function grid.
pub type ScalingGrid64 = cascade::ScalingGrid<f64>;
/// `f64` spectral samples.
pub type SpectralSamples64 = cascade::SpectralSamples<f64>;
/// `f64` pyramid coefficients.
pub type WaveletCoeffs64 = pyramid::WaveletCoeffs<f64>;
/// `f64` cylinder cocycle.
pub type CylinderCocycle64 = diagonal::CylinderCocycle<f64>;
/// `f64` two-scale decomposition.
pub type ScaleDecomposition64 = multiscale::ScaleDecomposition<f64>;
