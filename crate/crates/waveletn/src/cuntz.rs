//! The isometries `(S_i ξ)(z) = m_i(z) ξ(z^N)` of a filter bank, relation
//! and covariance checks, the associated infinite family `S_0^{k-1} S_j`,
//! the z-transform expansion of the scaling function, and Wold
//! classification (shift versus unitary part) for single filters and for
//! the rotation-averaged operator of a whole bank.

use num_complex::Complex;

use crate::dense::{unimodular_eigenpairs, Window};
use crate::error::{Error, Result};
use crate::filterbank::{check_isometry_row, FilterBank};
use crate::laurent::LaurentPoly;
use crate::scalar::{fmax, fsqrt, Scalar};

/// `S_i ξ = m_i · ξ(z^N)`.
pub fn apply_s<T: Scalar>(
    bank: &FilterBank<T>,
    i: usize,
    xi: &LaurentPoly<T>,
) -> Result<LaurentPoly<T>> {
    let n = bank.scale();
    if i >= n as usize {
        return Err(Error::IndexOutOfRange {
            index: i,
            n: n as usize,
        });
    }
    Ok(bank.filter(i).mul(&xi.upsample(n)))
}

/// `S_i* ξ = (1/N) Σ_{w^N=z} conj(m_i(w)) ξ(w)`, computed as
/// `downsample(conj(m_i)·ξ)`.
pub fn apply_s_adj<T: Scalar>(
    bank: &FilterBank<T>,
    i: usize,
    xi: &LaurentPoly<T>,
) -> Result<LaurentPoly<T>> {
    let n = bank.scale();
    if i >= n as usize {
        return Err(Error::IndexOutOfRange {
            index: i,
            n: n as usize,
        });
    }
    Ok(bank.filter(i).conj_reflect().mul(xi).downsample(n))
}

/// Worst defect of the relations `S_i* S_j = δ_ij` and `Σ_i S_i S_i* = 1`
/// over all monomials `z^k`, `|k| ≤ degree`.
pub fn verify_cuntz<T: Scalar>(bank: &FilterBank<T>, degree: i64) -> T {
    let n = bank.scale() as usize;
    let mut worst = T::zero();
    for k in -degree..=degree {
        let e = LaurentPoly::monomial(k, Complex::new(T::one(), T::zero()));
        let mut completeness = LaurentPoly::zero();
        for i in 0..n {
            let si_e = apply_s(bank, i, &e).unwrap();
            for j in 0..n {
                let mut r = apply_s_adj(bank, j, &si_e).unwrap();
                if i == j {
                    r = r.sub(&e);
                }
                worst = fmax(worst, r.norm());
            }
            let adj = apply_s_adj(bank, i, &e).unwrap();
            completeness = completeness.add(&apply_s(bank, i, &adj).unwrap());
        }
        worst = fmax(worst, completeness.sub(&e).norm());
    }
    worst
}

/// Worst defect of the covariance relation
/// `Σ_i S_i M_f S_i* = M_{f(z^N)}` over monomials `z^k`, `|k| ≤ degree`.
pub fn verify_covariance<T: Scalar>(bank: &FilterBank<T>, f: &LaurentPoly<T>, degree: i64) -> T {
    let n = bank.scale();
    let mut worst = T::zero();
    let f_up = f.upsample(n);
    for k in -degree..=degree {
        let e = LaurentPoly::monomial(k, Complex::new(T::one(), T::zero()));
        let mut lhs = LaurentPoly::zero();
        for i in 0..n as usize {
            let adj = apply_s_adj(bank, i, &e).unwrap();
            lhs = lhs.add(&apply_s(bank, i, &f.mul(&adj)).unwrap());
        }
        worst = fmax(worst, lhs.sub(&f_up.mul(&e)).norm());
    }
    worst
}

/// `S_0^{k-1} S_j ξ`, the `(k, j)` generator of the infinite family that a
/// shift `S_0` splits the bank into (`j = 1..N-1`, `k ≥ 1`).
pub fn o_infinity<T: Scalar>(
    bank: &FilterBank<T>,
    j: usize,
    k: usize,
    xi: &LaurentPoly<T>,
) -> Result<LaurentPoly<T>> {
    let n = bank.scale() as usize;
    if j == 0 || j >= n {
        return Err(Error::IndexOutOfRange { index: j, n });
    }
    if k == 0 {
        return Err(Error::IndexOutOfRange { index: 0, n });
    }
    let mut out = apply_s(bank, j, xi)?;
    for _ in 1..k {
        out = apply_s(bank, 0, &out)?;
    }
    Ok(out)
}

/// The z-transform coefficients of the scaling function in its expansion
/// over scaled mother functions: `w[n-1][j-1] = (S_0^{n-1} S_j)* 1` for
/// `n = 1..=depth`, `j = 1..N-1`.
pub fn father_ztransform<T: Scalar>(
    bank: &FilterBank<T>,
    depth: usize,
) -> Vec<Vec<LaurentPoly<T>>> {
    let n = bank.scale() as usize;
    let mut out = Vec::with_capacity(depth);
    let mut g = LaurentPoly::one();
    for _ in 0..depth {
        let row: Vec<LaurentPoly<T>> = (1..n)
            .map(|j| apply_s_adj(bank, j, &g).unwrap())
            .collect();
        out.push(row);
        g = apply_s_adj(bank, 0, &g).unwrap();
    }
    out
}

/// Shift-versus-unitary classification of one isometry or of the averaged
/// bank operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WoldKind {
    /// No unitary part: `∩_n S^n H = {0}` (within the searched window).
    Shift,
    /// Nontrivial unitary part, spanned by the reported eigenvectors.
    UnitaryPart,
}

/// A detected unitary-part eigenvector with its eigenvalue and the defect
/// of the defining relation.
#[derive(Clone, Debug)]
pub struct WoldEigenpair<T: Scalar> {
    pub eigenvalue: Complex<T>,
    pub vector: LaurentPoly<T>,
    pub residual: T,
}

/// Result of a Wold classification.
///
/// For a single filter the unitary part is at most one-dimensional; for
/// the averaged operator of an `N`-bank it is at most `N`-dimensional.
/// Polynomial windows can only certify polynomial eigenvectors, so `Shift`
/// here means "no polynomial unitary part up to the window used".
#[derive(Clone, Debug)]
pub struct WoldReport<T: Scalar> {
    pub kind: WoldKind,
    pub eigenpairs: Vec<WoldEigenpair<T>>,
}

impl<T: Scalar> WoldReport<T> {
    pub fn dim(&self) -> usize {
        self.eigenpairs.len()
    }

    fn shift() -> Self {
        Self {
            kind: WoldKind::Shift,
            eigenpairs: Vec::new(),
        }
    }

    fn from_pairs(eigenpairs: Vec<WoldEigenpair<T>>) -> Self {
        Self {
            kind: if eigenpairs.is_empty() {
                WoldKind::Shift
            } else {
                WoldKind::UnitaryPart
            },
            eigenpairs,
        }
    }
}

fn require_isometry_row<T: Scalar>(m: &LaurentPoly<T>, n: u32) -> Result<()> {
    let r = check_isometry_row(m, n);
    if r > T::residual_tol() {
        return Err(Error::NotIsometric {
            residual: r.as_f64(),
        });
    }
    Ok(())
}

fn require_window<T: Scalar>(given: i64, required: i64) -> Result<()> {
    if given < required {
        return Err(Error::WindowTooSmall { required, given });
    }
    Ok(())
}

/// Wold classification of `S_m` for a single isometry row `m`, by the
/// closed-form criterion.
///
/// A Laurent polynomial with `|m(z)| = 1` a.e. forces `m·m̄ = 1`, hence `m`
/// is a unimodular monomial `λ z^n`; only those can carry a unitary part,
/// and they do exactly when `(N-1) | n`, with eigenvector `z^{-n/(N-1)}`
/// and eigenvalue `λ`. Everything else is a shift. The purely numerical
/// route over the same window is [`wold_scalar_matrix`].
pub fn wold_scalar<T: Scalar>(m: &LaurentPoly<T>, n: u32, window: i64) -> Result<WoldReport<T>> {
    require_isometry_row(m, n)?;
    require_window::<T>(window, scalar_window_bound(m, n))?;
    if let Some((k, lambda)) = m.as_monomial() {
        let step = n as i64 - 1;
        if k.rem_euclid(step) == 0 {
            let idx = -k / step;
            let xi = LaurentPoly::monomial(idx, Complex::new(T::one(), T::zero()));
            let residual = apply_sm(m, n, &xi).sub(&xi.scale(lambda)).norm();
            return Ok(WoldReport::from_pairs(vec![WoldEigenpair {
                eigenvalue: lambda,
                vector: xi,
                residual,
            }]));
        }
        return Ok(WoldReport::shift());
    }
    Ok(WoldReport::shift())
}

/// Spec'd window floor for [`wold_scalar`]: `ceil(deg_spread / (N-1))`.
pub fn scalar_window_bound<T: Scalar>(m: &LaurentPoly<T>, n: u32) -> i64 {
    div_ceil(m.deg_spread(), n as i64 - 1)
}

fn div_ceil(a: i64, b: i64) -> i64 {
    debug_assert!(a >= 0 && b > 0);
    (a + b - 1) / b
}

fn apply_sm<T: Scalar>(m: &LaurentPoly<T>, n: u32, xi: &LaurentPoly<T>) -> LaurentPoly<T> {
    m.mul(&xi.upsample(n))
}

fn apply_sm_adj<T: Scalar>(m: &LaurentPoly<T>, n: u32, xi: &LaurentPoly<T>) -> LaurentPoly<T> {
    m.conj_reflect().mul(xi).downsample(n)
}

/// Wold classification of `S_m` via the dense matrix of `S_m*` on a
/// monomial window, the general cross-check path for [`wold_scalar`].
///
/// The working window is enlarged to
/// `max(window, ceil(max|support index| / (N-1)))`, the smallest monomial
/// window invariant under `S_m*`, so no truncation occurs. Each candidate
/// pair is verified against `m(z) ξ(z^N) = λ ξ(z)`; pairs failing the
/// verification are discarded.
pub fn wold_scalar_matrix<T: Scalar>(
    m: &LaurentPoly<T>,
    n: u32,
    window: i64,
) -> Result<WoldReport<T>> {
    require_isometry_row(m, n)?;
    require_window::<T>(window, scalar_window_bound(m, n))?;
    let d_eff = window.max(div_ceil(m.max_abs_index(), n as i64 - 1));
    let win = Window { d: d_eff };
    let matrix = win
        .operator_matrix(|e| apply_sm_adj(m, n, e))
        .expect("window invariant under S_m*");
    let mut pairs = Vec::new();
    for (mu, v) in unimodular_eigenpairs(&matrix, T::spectral_tol()) {
        let xi = win.vec_to_poly(&v).normalized();
        // S* ξ = μ ξ with |μ| = 1 forces S ξ = conj(μ) ξ for an isometry
        let lambda = mu.conj();
        let residual = apply_sm(m, n, &xi).sub(&xi.scale(lambda)).norm();
        if residual <= T::spectral_tol() {
            pairs.push(WoldEigenpair {
                eigenvalue: lambda,
                vector: xi,
                residual,
            });
        }
    }
    Ok(WoldReport::from_pairs(pairs))
}

/// `T ξ = N^{-1/2} Σ_k m_k · ξ(ρ^k z^N)` for the whole bank.
pub fn apply_averaged<T: Scalar>(bank: &FilterBank<T>, xi: &LaurentPoly<T>) -> LaurentPoly<T> {
    let n = bank.scale();
    let scale = Complex::new(T::one() / fsqrt(T::of_usize(n as usize)), T::zero());
    let mut out = LaurentPoly::zero();
    for k in 0..n {
        let term = bank
            .filter(k as usize)
            .mul(&xi.rotate(k as i64, n).upsample(n));
        out = out.add(&term);
    }
    out.scale(scale)
}

/// `T* ξ = N^{-1/2} Σ_k rotate(S_k* ξ, -k)`.
pub fn apply_averaged_adj<T: Scalar>(bank: &FilterBank<T>, xi: &LaurentPoly<T>) -> LaurentPoly<T> {
    let n = bank.scale();
    let scale = Complex::new(T::one() / fsqrt(T::of_usize(n as usize)), T::zero());
    let mut out = LaurentPoly::zero();
    for k in 0..n as usize {
        let term = apply_s_adj(bank, k, xi).unwrap().rotate(-(k as i64), n);
        out = out.add(&term);
    }
    out.scale(scale)
}

/// Wold classification of the averaged operator `T` of a bank.
///
/// Detected eigenvectors satisfy
/// `N^{-1/2} Σ_k m_k(z) ξ(ρ^k z^N) = conj(λ) ξ(z)`
/// within the reported residual; the unitary part has dimension at most
/// `N`. Non-detection over the window is reported as `Shift` (no
/// polynomial unitary part up to the window used).
pub fn wold_vector<T: Scalar>(bank: &FilterBank<T>, window: i64) -> Result<WoldReport<T>> {
    let worst = bank.unitarity_residual();
    if worst > T::residual_tol() {
        return Err(Error::NotUnitaryBank {
            residual: worst.as_f64(),
        });
    }
    let n = bank.scale();
    let spread_bound = bank
        .filters()
        .iter()
        .map(|m| div_ceil(m.deg_spread(), n as i64 - 1))
        .max()
        .unwrap_or(0);
    require_window::<T>(window, spread_bound)?;
    let abs_bound = bank
        .filters()
        .iter()
        .map(|m| div_ceil(m.max_abs_index(), n as i64 - 1))
        .max()
        .unwrap_or(0);
    let win = Window {
        d: window.max(abs_bound),
    };
    let matrix = win
        .operator_matrix(|e| apply_averaged_adj(bank, e))
        .expect("window invariant under T*");
    let mut pairs = Vec::new();
    for (mu, v) in unimodular_eigenpairs(&matrix, T::spectral_tol()) {
        let xi = win.vec_to_poly(&v).normalized();
        let lambda = mu;
        let residual = apply_averaged(bank, &xi)
            .sub(&xi.scale(lambda.conj()))
            .norm();
        if residual <= T::spectral_tol() {
            pairs.push(WoldEigenpair {
                eigenvalue: lambda,
                vector: xi,
                residual,
            });
        }
    }
    let report = WoldReport::from_pairs(pairs);
    debug_assert!(report.dim() <= n as usize);
    Ok(report)
}
