//! Stock filters used in examples, tests and benchmarks.

use num_complex::Complex;

use crate::filterbank::FilterBank;
use crate::laurent::LaurentPoly;
use crate::scalar::{fsqrt, Scalar};

/// Haar low-pass at scale 2: `(1 + z)/√2`.
pub fn haar_low_pass<T: Scalar>() -> LaurentPoly<T> {
    let s = fsqrt(T::of(0.5));
    LaurentPoly::from_real_terms([(0, s), (1, s)])
}

/// The Haar bank `(m_0, m_1) = ((1+z)/√2, (1-z)/√2)`, the pair generated
/// by the box scaling function and the step mother function.
pub fn haar_bank<T: Scalar>() -> FilterBank<T> {
    let s = fsqrt(T::of(0.5));
    let m0 = LaurentPoly::from_real_terms([(0, s), (1, s)]);
    let m1 = LaurentPoly::from_real_terms([(0, s), (1, -s)]);
    FilterBank::new(2, vec![m0, m1]).expect("haar bank")
}

/// Scale-`n` box low-pass `(1 + z + … + z^{n-1})/√n`, whose scaling
/// function is again the unit box.
pub fn haar_scale_low_pass<T: Scalar>(n: u32) -> LaurentPoly<T> {
    let s = T::one() / fsqrt(T::of_usize(n as usize));
    LaurentPoly::from_real_terms((0..n as i64).map(|k| (k, s)))
}

/// Stretched Haar low-pass `(1 + z³)/√2`: satisfies the isometry row
/// condition but its box-on-`[0,3]` scaling function has non-orthonormal
/// translates.
pub fn stretched_haar_low_pass<T: Scalar>() -> LaurentPoly<T> {
    let s = fsqrt(T::of(0.5));
    LaurentPoly::from_real_terms([(0, s), (3, s)])
}

/// The monomial bank `m_k = z^k` at scale `n`; every filter has modulus 1.
pub fn monomial_bank<T: Scalar>(n: u32) -> FilterBank<T> {
    let filters = (0..n as i64)
        .map(|k| LaurentPoly::monomial(k, Complex::new(T::one(), T::zero())))
        .collect();
    FilterBank::new(n, filters).expect("monomial bank")
}

/// Daubechies-4 low-pass at scale 2 (two vanishing moments), normalized to
/// `m(1) = √2`.
pub fn db4_low_pass<T: Scalar>() -> LaurentPoly<T> {
    let r3 = 3f64.sqrt();
    let d = 4.0 * std::f64::consts::SQRT_2;
    let coeffs = [
        (1.0 + r3) / d,
        (3.0 + r3) / d,
        (3.0 - r3) / d,
        (1.0 - r3) / d,
    ];
    LaurentPoly::from_real_terms(coeffs.iter().enumerate().map(|(k, &c)| (k as i64, T::of(c))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filterbank::{check_isometry_row, normalization_defect};

    #[test]
    fn fixtures_satisfy_row_condition() {
        assert!(check_isometry_row(&haar_low_pass::<f64>(), 2) < 1e-14);
        assert!(check_isometry_row(&stretched_haar_low_pass::<f64>(), 2) < 1e-14);
        assert!(check_isometry_row(&haar_scale_low_pass::<f64>(3), 3) < 1e-14);
        assert!(check_isometry_row(&db4_low_pass::<f64>(), 2) < 1e-13);
    }

    #[test]
    fn fixtures_are_normalized() {
        assert!(normalization_defect(&haar_low_pass::<f64>(), 2) < 1e-14);
        assert!(normalization_defect(&haar_scale_low_pass::<f64>(5), 5) < 1e-14);
        assert!(normalization_defect(&db4_low_pass::<f64>(), 2) < 1e-13);
    }

    #[test]
    fn monomial_bank_unitary() {
        for n in [2u32, 3, 4] {
            assert!(monomial_bank::<f64>(n).unitarity_residual() < 1e-14);
        }
    }
}
