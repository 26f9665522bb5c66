//! The real scalar type underlying all computations.
//!
//! Everything in this crate is generic over a floating-point type `T`
//! implementing [`Scalar`]; coefficients and samples are `Complex<T>`.
//! Concrete aliases for the `f64` instantiation live at the crate root.

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar: `f32` or `f64`, plus the tolerances the crate's
/// residual tests are calibrated to for that precision.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + nalgebra::RealField
    + Default
    + std::fmt::Display
    + std::fmt::LowerExp
    + 'static
{
    /// Coefficients with modulus below this are dropped after arithmetic.
    fn prune_tol() -> Self;

    /// Default bound on residual norms for unitarity/isometry checks.
    fn residual_tol() -> Self;

    /// Threshold for `||λ| - 1|` and for singular values counted as zero.
    fn spectral_tol() -> Self;

    /// Lossless-enough conversion from `f64` literals.
    fn of(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("f64 constant not representable")
    }

    /// Conversion from sizes and indices.
    fn of_usize(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("usize not representable")
    }

    /// Infallible widening to `f64` for reporting.
    fn as_f64(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn prune_tol() -> Self {
        1e-12
    }
    fn residual_tol() -> Self {
        1e-10
    }
    fn spectral_tol() -> Self {
        1e-8
    }
}

impl Scalar for f32 {
    fn prune_tol() -> Self {
        1e-6
    }
    fn residual_tol() -> Self {
        1e-4
    }
    fn spectral_tol() -> Self {
        1e-3
    }
}

/// `Float::abs`, disambiguated from `ComplexField::abs`.
#[inline]
pub(crate) fn fabs<T: Scalar>(x: T) -> T {
    Float::abs(x)
}

/// `Float::sqrt`, disambiguated from `ComplexField::sqrt`.
#[inline]
pub(crate) fn fsqrt<T: Scalar>(x: T) -> T {
    Float::sqrt(x)
}

/// `Float::max`, disambiguated.
#[inline]
pub(crate) fn fmax<T: Scalar>(a: T, b: T) -> T {
    Float::max(a, b)
}

/// `Float::min`, disambiguated.
#[inline]
pub(crate) fn fmin<T: Scalar>(a: T, b: T) -> T {
    Float::min(a, b)
}

/// The point `e^{2πi q}` for a rational or real fraction `q` of a full turn.
#[inline]
pub(crate) fn unit_point<T: Scalar>(turns: T) -> Complex<T> {
    let theta = T::TAU() * turns;
    Complex::new(Float::cos(theta), Float::sin(theta))
}

/// `e^{2πi jk/n}` computed from the reduced residue, so large `j*k` do not
/// lose the exact periodicity.
pub(crate) fn root_of_unity_pow<T: Scalar>(n: u32, jk: i64) -> Complex<T> {
    let r = jk.rem_euclid(n as i64);
    unit_point(T::of_usize(r as usize) / T::of_usize(n as usize))
}
