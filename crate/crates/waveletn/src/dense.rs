//! Dense matrix realizations of circle operators on a monomial window
//! `span{z^k : |k| ≤ d}`, with eigenvalue and kernel extraction. Internal.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use num_traits::Zero;

use crate::laurent::LaurentPoly;
use crate::scalar::{fabs, Scalar};

/// Monomial window `z^{-d}, …, z^d`; column index `i` holds exponent
/// `i - d`.
pub(crate) struct Window {
    pub d: i64,
}

impl Window {
    pub fn len(&self) -> usize {
        (2 * self.d + 1) as usize
    }

    pub fn exponent(&self, i: usize) -> i64 {
        i as i64 - self.d
    }

    pub fn poly_to_vec<T: Scalar>(&self, p: &LaurentPoly<T>) -> Option<DVector<Complex<T>>> {
        let mut v = DVector::from_element(self.len(), Complex::zero());
        for (k, c) in p.terms() {
            if k.abs() > self.d {
                return None;
            }
            v[(k + self.d) as usize] = c;
        }
        Some(v)
    }

    pub fn vec_to_poly<T: Scalar>(&self, v: &DVector<Complex<T>>) -> LaurentPoly<T> {
        LaurentPoly::from_terms(
            v.iter()
                .enumerate()
                .map(|(i, &c)| (self.exponent(i), c)),
        )
    }

    /// Matrix of a linear operator given by its action on monomials.
    /// Returns `None` if the action leaves the window (caller must pick a
    /// window the operator keeps invariant).
    pub fn operator_matrix<T: Scalar>(
        &self,
        mut apply: impl FnMut(&LaurentPoly<T>) -> LaurentPoly<T>,
    ) -> Option<DMatrix<Complex<T>>> {
        let len = self.len();
        let mut m = DMatrix::from_element(len, len, Complex::zero());
        for i in 0..len {
            let e = LaurentPoly::monomial(self.exponent(i), Complex::new(T::one(), T::zero()));
            let col = self.poly_to_vec(&apply(&e))?;
            m.set_column(i, &col);
        }
        Some(m)
    }
}

/// Orthonormal basis of the numerical kernel: right singular vectors whose
/// singular value is at most `threshold`.
pub(crate) fn kernel_basis<T: Scalar>(
    m: &DMatrix<Complex<T>>,
    threshold: T,
) -> Vec<DVector<Complex<T>>> {
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.expect("svd requested v_t");
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= threshold)
        .map(|(i, _)| vt.row(i).adjoint())
        .collect()
}

/// All eigenvalues (with multiplicity) of a complex matrix.
pub(crate) fn eigenvalues<T: Scalar>(m: &DMatrix<Complex<T>>) -> Vec<Complex<T>> {
    match m.clone().eigenvalues() {
        Some(v) => v.iter().copied().collect(),
        // Schur did not converge with the default iteration budget; fall
        // back to a long budget before giving up.
        None => m
            .clone()
            .try_schur(T::default_epsilon(), 10_000)
            .and_then(|s| s.eigenvalues())
            .map(|v| v.iter().copied().collect())
            .unwrap_or_default(),
    }
}

/// Eigenpairs with `||λ| - 1| ≤ tol`: eigenvalues from the Schur form,
/// eigenvectors as kernels of `M - λI`, duplicates merged.
pub(crate) fn unimodular_eigenpairs<T: Scalar>(
    m: &DMatrix<Complex<T>>,
    tol: T,
) -> Vec<(Complex<T>, DVector<Complex<T>>)> {
    let mut candidates: Vec<Complex<T>> = eigenvalues(m)
        .into_iter()
        .filter(|l| fabs(l.norm() - T::one()) <= tol)
        .collect();
    // merge eigenvalues that are numerically identical
    let merge_tol = T::of(1e-6);
    let mut unique: Vec<Complex<T>> = Vec::new();
    candidates.drain(..).for_each(|l| {
        if !unique.iter().any(|u| (*u - l).norm() <= merge_tol) {
            unique.push(l);
        }
    });
    let scale = m.norm();
    let threshold = tol * if scale > T::one() { scale } else { T::one() };
    let mut pairs = Vec::new();
    for lambda in unique {
        let shifted = m - DMatrix::from_diagonal_element(m.nrows(), m.ncols(), lambda);
        for v in kernel_basis(&shifted, threshold) {
            pairs.push((lambda, v));
        }
    }
    pairs
}
