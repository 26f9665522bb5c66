//! Interplay between the dyadic theory and scale `N`: when do a scale-2
//! and a scale-N low-pass filter share their scaling function, and how
//! does the `N`-rescaled scaling function decompose over the dyadic
//! ladder.
//!
//! The rescaling `N^{-1/2} φ(x/N)` of a dyadic scaling function splits
//! orthogonally as `Σ_k A_k φ(x-k) + Σ_k B_k ψ(x-k) + ξ₋`, with the tail
//! `ξ₋` determined level by level by `C_n(z) = ∏_{j<n} m₀(z^{N·2^j})·B(z)`
//! and total energy `‖A‖² + ‖B‖² + Σ_n ‖C_n‖² = 1`. A vanishing `B` (and
//! tail) says the dyadic base space is invariant under scaling by `N`.

use num_complex::Complex;
use num_traits::Zero;

use crate::cascade::{cascade_iterate, ScalingGrid};
use crate::error::{Error, Result};
use crate::filterbank::{check_isometry_row, FilterBank};
use crate::laurent::LaurentPoly;
use crate::scalar::{fabs, fsqrt, Scalar};
use crate::transfer::{father_criterion, FatherVerdict};

/// Residual of the commutation identity
/// `m₀(z^N) M₀(z) = m₀(z) M₀(z²)` between a scale-2 filter `m₀` and a
/// scale-N filter `M₀`; zero iff the two scaling functions coincide.
pub fn commute_check<T: Scalar>(
    m0_scale2: &LaurentPoly<T>,
    m0_scale_n: &LaurentPoly<T>,
    n: u32,
) -> Result<T> {
    if n == 2 {
        return Err(Error::InvalidScale(
            "the comparison scale must differ from 2".into(),
        ));
    }
    let r2 = check_isometry_row(m0_scale2, 2);
    if r2 > T::residual_tol() {
        return Err(Error::NotIsometric {
            residual: r2.as_f64(),
        });
    }
    let rn = check_isometry_row(m0_scale_n, n);
    if rn > T::residual_tol() {
        return Err(Error::NotIsometric {
            residual: rn.as_f64(),
        });
    }
    let lhs = m0_scale2.upsample(n).mul(m0_scale_n);
    let rhs = m0_scale2.mul(&m0_scale_n.upsample(2));
    Ok(lhs.sub(&rhs).norm())
}

/// The orthogonal decomposition data of `N^{-1/2} φ(x/N)`.
#[derive(Clone, Debug)]
pub struct ScaleDecomposition<T: Scalar> {
    /// Projection onto the base space, `A(z) = Σ_k A_k z^k`.
    pub a: LaurentPoly<T>,
    /// Projection onto the first detail space.
    pub b: LaurentPoly<T>,
    /// Deeper detail components `C_1 .. C_{n_max}`.
    pub c: Vec<LaurentPoly<T>>,
    /// `1 - (‖A‖² + ‖B‖² + Σ ‖C_n‖²)`, the untruncated tail energy plus
    /// quadrature error.
    pub parseval_defect: T,
    /// Residual of `A(z²) m₀(z) + B(z²) m₁(z) = A(z) m₀(z^N)`.
    pub consistency_residual: T,
}

impl<T: Scalar> ScaleDecomposition<T> {
    /// Partial energy sums `‖A‖² + ‖B‖² + Σ_{n≤j} ‖C_n‖²`, `j = 0..`.
    pub fn energy_partial_sums(&self) -> Vec<T> {
        let mut acc = self.a.norm_sq() + self.b.norm_sq();
        let mut out = vec![acc];
        for c in &self.c {
            acc = acc + c.norm_sq();
            out.push(acc);
        }
        out
    }
}

const DETAIL_DEPTH: usize = 16;

/// Decompose `N^{-1/2} φ(x/N)` for the scaling function of a dyadic bank
/// `(m₀, m₁)` whose low-pass passes the orthonormality criterion.
///
/// `A_k = ⟨φ(·-k), U_N φ⟩` and `B_k = ⟨ψ(·-k), U_N φ⟩` are computed from
/// level-`L` grids; sub-cell alignment makes the sums exact for
/// piecewise-constant scaling functions.
pub fn decompose<T: Scalar>(
    m0: &LaurentPoly<T>,
    m1: &LaurentPoly<T>,
    n: u32,
    level: u32,
) -> Result<ScaleDecomposition<T>> {
    let bank = FilterBank::validated(2, vec![m0.clone(), m1.clone()], T::residual_tol())?;
    match father_criterion(m0, 2)? {
        FatherVerdict::IsFatherFilter => {}
        FatherVerdict::Fails(reason) => return Err(Error::NotAFatherFilter(reason)),
    }
    let (phi, _) = cascade_iterate(m0, 2, level, 200)?;
    let psi = mother_grid(&phi, m1);

    let a = translate_inner_products(&phi, &phi, n);
    let b = translate_inner_products(&psi, &phi, n);

    let mut c = Vec::with_capacity(DETAIL_DEPTH);
    let mut prod = LaurentPoly::one();
    let mut stride = n as i64;
    for _ in 0..DETAIL_DEPTH {
        // C_{j+1} = m₀(z^{N·2^j}) · C_j, unrolled from C_0 = B
        prod = prod.mul(&upsample_by(m0, stride));
        c.push(prod.mul(&b));
        stride *= 2;
    }

    let total = a.norm_sq()
        + b.norm_sq()
        + c.iter().fold(T::zero(), |acc, p| acc + p.norm_sq());
    let parseval_defect = T::one() - total;
    if fabs(parseval_defect) > T::of(0.05) {
        return Err(Error::QuadratureUnstable {
            defect: parseval_defect.as_f64(),
        });
    }
    let lhs = a.upsample(2).mul(bank.filter(0)).add(&b.upsample(2).mul(bank.filter(1)));
    let rhs = a.mul(&m0.upsample(n));
    let consistency_residual = lhs.sub(&rhs).norm();

    Ok(ScaleDecomposition {
        a,
        b,
        c,
        parseval_defect,
        consistency_residual,
    })
}

fn upsample_by<T: Scalar>(p: &LaurentPoly<T>, stride: i64) -> LaurentPoly<T> {
    LaurentPoly::from_terms(p.terms().map(|(k, c)| (k * stride, c)))
}

/// `ψ(y) = √2 Σ_k b_k φ(2y - k)` on the grid of `φ`.
fn mother_grid<T: Scalar>(phi: &ScalingGrid<T>, m1: &LaurentPoly<T>) -> ScalingGrid<T> {
    let cells = 2i64.pow(phi.level());
    let root2 = Complex::new(fsqrt(T::of(2.0)), T::zero());
    // support of ψ: y with 2y - k in supp(φ) for some coefficient k
    let k_lo = m1.min_index().unwrap_or(0);
    let k_hi = m1.max_index().unwrap_or(0);
    let lo = (phi.offset() + k_lo * cells).div_euclid(2) - 1;
    let hi = (phi.offset() + phi.len() as i64 + k_hi * cells).div_euclid(2) + 1;
    let samples = (lo..=hi)
        .map(|g| {
            let mut acc = Complex::<T>::zero();
            for (k, ck) in m1.terms() {
                acc += ck * phi.at_global(2 * g - k * cells);
            }
            acc * root2
        })
        .collect();
    ScalingGrid::from_samples(2, phi.level(), lo, samples)
}

/// `Σ_k ⟨g(·-k), U_N f⟩ z^k = √N Σ_k (∫ conj(g(Ny-k)) f(y) dy) z^k`,
/// integrated on the common grid refined `N`-fold so every jump of the
/// rescaled factor lands on a sub-cell boundary.
fn translate_inner_products<T: Scalar>(
    g: &ScalingGrid<T>,
    f: &ScalingGrid<T>,
    n: u32,
) -> LaurentPoly<T> {
    debug_assert_eq!(g.level(), f.level());
    let cells = 2i64.pow(f.level());
    let n_i = n as i64;
    // k with supp(g(N·-k)) meeting supp(f): k in [N·lo_f - hi_g, N·hi_f - lo_g]
    let f_lo = f.offset();
    let f_hi = f.offset() + f.len() as i64;
    let g_lo = g.offset();
    let g_hi = g.offset() + g.len() as i64;
    let k_lo = (n_i * f_lo - g_hi).div_euclid(cells) - 1;
    let k_hi = (n_i * f_hi - g_lo).div_euclid(cells) + 1;
    let weight = Complex::new(
        fsqrt(T::of_usize(n as usize)) * f.step() / T::of_usize(n as usize),
        T::zero(),
    );
    let mut terms = Vec::new();
    for k in k_lo..=k_hi {
        // sub-grid index m: y = m·h/N, g-factor lives at h-index m - k·cells
        let m_lo = (g_lo + k * cells).max(n_i * f_lo);
        let m_hi = (g_hi + k * cells).min(n_i * f_hi);
        let mut acc = Complex::<T>::zero();
        for m in m_lo..m_hi {
            let gv = g.at_global(m - k * cells);
            if gv.norm_sqr() > T::zero() {
                acc += gv.conj() * f.at_global(m.div_euclid(n_i));
            }
        }
        terms.push((k, acc * weight));
    }
    LaurentPoly::from_terms(terms)
}
