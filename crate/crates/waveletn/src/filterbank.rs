//! Filter banks: `N` Laurent filters whose matrix of values at the N-th
//! roots of a point is unitary, validators for that condition, polyphase
//! packaging, and completion of a single low-pass row to a full bank.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::scalar::{fabs, fmax, fsqrt, Scalar};

/// A family `m_0, …, m_{N-1}` of filters at scale `N`; `m[0]` is low-pass.
///
/// The defining condition is that
/// `(1/N) Σ_{w^N=z} conj(m_i(w)) m_j(w) = δ_ij` identically on the circle,
/// i.e. the N×N matrix `N^{-1/2} (m_j(ρ^k z))_{k,j}` is unitary for every
/// `z`. [`check_unitarity`] measures the defect.
#[derive(Clone, Debug, PartialEq)]
pub struct FilterBank<T: Scalar> {
    n: u32,
    filters: Vec<LaurentPoly<T>>,
}

impl<T: Scalar> FilterBank<T> {
    /// Assemble a bank without validating it; use [`FilterBank::validated`]
    /// or [`check_unitarity`] to test the unitarity condition.
    pub fn new(n: u32, filters: Vec<LaurentPoly<T>>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidScale(format!("N must be >= 2, got {n}")));
        }
        if filters.len() != n as usize {
            return Err(Error::InvalidScale(format!(
                "expected {n} filters, got {}",
                filters.len()
            )));
        }
        if let Some(i) = filters.iter().position(LaurentPoly::is_zero) {
            return Err(Error::NotUnitaryBank {
                residual: 1.0 + i as f64 * 0.0,
            });
        }
        Ok(Self { n, filters })
    }

    /// Assemble and reject banks whose unitarity residual exceeds `tol`.
    pub fn validated(n: u32, filters: Vec<LaurentPoly<T>>, tol: T) -> Result<Self> {
        let bank = Self::new(n, filters)?;
        let worst = bank.unitarity_residual();
        if worst > tol {
            return Err(Error::NotUnitaryBank {
                residual: worst.as_f64(),
            });
        }
        Ok(bank)
    }

    /// The scale `N`.
    pub fn scale(&self) -> u32 {
        self.n
    }

    /// Filter `m_i`.
    pub fn filter(&self, i: usize) -> &LaurentPoly<T> {
        &self.filters[i]
    }

    /// All filters, low-pass first.
    pub fn filters(&self) -> &[LaurentPoly<T>] {
        &self.filters
    }

    /// Low-pass filter `m_0`.
    pub fn low_pass(&self) -> &LaurentPoly<T> {
        &self.filters[0]
    }

    /// Largest entry of [`check_unitarity`].
    pub fn unitarity_residual(&self) -> T {
        check_unitarity(self)
            .into_iter()
            .flatten()
            .fold(T::zero(), fmax)
    }
}

/// Residual of the single-row isometry condition
/// `(1/N) Σ_{w^N=z} |m(w)|² = 1`, as the `L²(T)` norm of the defect.
pub fn check_isometry_row<T: Scalar>(m: &LaurentPoly<T>, n: u32) -> T {
    m.modulus_sq()
        .downsample(n)
        .sub(&LaurentPoly::one())
        .norm()
}

/// Pairwise residual matrix: entry `(i, j)` is the norm of
/// `downsample(conj(m_i)·m_j, N) - δ_ij`. All entries small iff the bank
/// satisfies the unitarity condition.
pub fn check_unitarity<T: Scalar>(bank: &FilterBank<T>) -> Vec<Vec<T>> {
    let n = bank.scale();
    (0..n as usize)
        .map(|i| {
            (0..n as usize)
                .map(|j| {
                    let prod = bank.filters[i]
                        .conj_reflect()
                        .mul(&bank.filters[j])
                        .downsample(n);
                    let target = if i == j {
                        LaurentPoly::one()
                    } else {
                        LaurentPoly::zero()
                    };
                    prod.sub(&target).norm()
                })
                .collect()
        })
        .collect()
}

/// The polyphase split `m(z) = Σ_j z^j p_j(z^N)` of a single filter.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyphaseVector<T: Scalar> {
    n: u32,
    components: Vec<LaurentPoly<T>>,
}

impl<T: Scalar> PolyphaseVector<T> {
    pub fn scale(&self) -> u32 {
        self.n
    }

    /// Component `p_j`; the coefficient of `z^k` in `p_j` is `a_{j+Nk}`.
    pub fn component(&self, j: usize) -> &LaurentPoly<T> {
        &self.components[j]
    }

    pub fn components(&self) -> &[LaurentPoly<T>] {
        &self.components
    }

    /// Reassemble `m(z) = Σ_j z^j p_j(z^N)`; exact inverse of [`polyphase`].
    pub fn reassemble(&self) -> LaurentPoly<T> {
        let mut m = LaurentPoly::zero();
        for (j, p) in self.components.iter().enumerate() {
            m = m.add(&p.upsample(self.n).shift(j as i64));
        }
        m
    }

    /// Residual of the unit-row condition `Σ_j |p_j|² = 1`, equivalent to
    /// the isometry row condition on the reassembled filter.
    pub fn unit_row_residual(&self) -> T {
        let mut sum = LaurentPoly::zero();
        for p in &self.components {
            sum = sum.add(&p.modulus_sq());
        }
        sum.sub(&LaurentPoly::one()).norm()
    }

    /// When every component is a single monomial `c_j z^{d_j}`, return
    /// `(c, d)`. This is the shape [`complete`] knows how to extend.
    pub fn as_monomial_type(&self) -> Option<(Vec<Complex<T>>, Vec<i64>)> {
        let mut cs = Vec::with_capacity(self.components.len());
        let mut ds = Vec::with_capacity(self.components.len());
        for p in &self.components {
            if p.is_zero() {
                cs.push(Complex::zero());
                ds.push(0);
            } else {
                let (d, c) = p.as_monomial()?;
                cs.push(c);
                ds.push(d);
            }
        }
        Some((cs, ds))
    }
}

/// Split `m` into its `N` polyphase components.
pub fn polyphase<T: Scalar>(m: &LaurentPoly<T>, n: u32) -> PolyphaseVector<T> {
    let mut components = vec![LaurentPoly::zero(); n as usize];
    for (k, c) in m.terms() {
        let j = k.rem_euclid(n as i64);
        let block = (k - j) / n as i64;
        components[j as usize] = components[j as usize].add(&LaurentPoly::monomial(block, c));
    }
    PolyphaseVector { n, components }
}

/// How to extend a low-pass row to a full bank.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompletionMethod {
    /// `flip2` for N = 2, otherwise the Householder frame.
    Auto,
    /// N = 2 high-pass `m_1(z) = z · conj(m_0)(-z)`, computed exactly.
    Flip2,
    /// Householder reflection frame on monomial-type polyphase data.
    HouseholderConst,
    /// Quaternion imaginary units acting on a real monomial-type row, N = 4.
    Quaternion,
    /// Octonion imaginary units acting on a real monomial-type row, N = 8.
    Cayley,
}

/// Extend a validated low-pass row `m_0` to a bank passing
/// [`check_unitarity`].
///
/// Supported inputs are exactly the rows whose polyphase components are
/// single monomials `c_j z^{d_j}` (every filter in the fixture family is of
/// this type), plus arbitrary rows when `N = 2` via `flip2`. The general
/// polynomial unitary-completion problem is out of scope and reported as
/// [`Error::UnsupportedShape`].
pub fn complete<T: Scalar>(
    m0: &LaurentPoly<T>,
    n: u32,
    method: CompletionMethod,
) -> Result<FilterBank<T>> {
    if n < 2 {
        return Err(Error::InvalidScale(format!("N must be >= 2, got {n}")));
    }
    let row_residual = check_isometry_row(m0, n);
    if row_residual > T::residual_tol() {
        return Err(Error::NotIsometric {
            residual: row_residual.as_f64(),
        });
    }
    match method {
        CompletionMethod::Auto => {
            if n == 2 {
                complete(m0, n, CompletionMethod::Flip2)
            } else {
                complete(m0, n, CompletionMethod::HouseholderConst)
            }
        }
        CompletionMethod::Flip2 => {
            if n != 2 {
                return Err(Error::InvalidScale(format!("flip2 requires N = 2, got {n}")));
            }
            let m1 = m0.conj_reflect().rotate(1, 2).shift(1);
            FilterBank::new(2, vec![m0.clone(), m1])
        }
        CompletionMethod::HouseholderConst => {
            let (c, d) = monomial_polyphase(m0, n)?;
            let u = householder_frame(&c);
            bank_from_frame(m0, n, &u, &d)
        }
        CompletionMethod::Quaternion => {
            if n != 4 {
                return Err(Error::InvalidScale(format!(
                    "quaternion completion requires N = 4, got {n}"
                )));
            }
            let (c, d) = monomial_polyphase(m0, n)?;
            let u = division_algebra_frame::<T>(&real_parts(&c)?, quaternion_left_mul);
            bank_from_frame(m0, n, &u, &d)
        }
        CompletionMethod::Cayley => {
            if n != 8 {
                return Err(Error::InvalidScale(format!(
                    "cayley completion requires N = 8, got {n}"
                )));
            }
            let (c, d) = monomial_polyphase(m0, n)?;
            let u = division_algebra_frame::<T>(&real_parts(&c)?, octonion_left_mul);
            bank_from_frame(m0, n, &u, &d)
        }
    }
}

fn monomial_polyphase<T: Scalar>(
    m0: &LaurentPoly<T>,
    n: u32,
) -> Result<(Vec<Complex<T>>, Vec<i64>)> {
    polyphase(m0, n).as_monomial_type().ok_or_else(|| {
        Error::UnsupportedShape(
            "polyphase components are not single monomials; general polynomial \
             unitary completion is not provided"
                .into(),
        )
    })
}

fn real_parts<T: Scalar>(c: &[Complex<T>]) -> Result<Vec<T>> {
    for x in c {
        if fabs(x.im) > T::residual_tol() {
            return Err(Error::UnsupportedShape(
                "division-algebra completion needs real polyphase constants".into(),
            ));
        }
    }
    Ok(c.iter().map(|x| x.re).collect())
}

/// Rows of a unitary matrix whose first row is the unit vector `c`.
///
/// For `c` close to a multiple of `e_0` the frame degenerates to a diagonal
/// matrix (`I` when `c = e_0`, `diag(-1, 1, …, 1)` when `c = -e_0`).
/// Otherwise take the reflection `2uu* - I` about `u ∝ c + μ e_0`, where
/// `μ` is the phase of `c_0`; the extra `μ` twist makes the reflected
/// `e_0` land exactly on `c`, and drops out for real `c`.
fn householder_frame<T: Scalar>(c: &[Complex<T>]) -> Vec<Vec<Complex<T>>> {
    let n = c.len();
    let one = Complex::new(T::one(), T::zero());
    let mu = if c[0].norm() <= T::prune_tol() {
        one
    } else {
        c[0] / Complex::new(c[0].norm(), T::zero())
    };
    let mut w: Vec<Complex<T>> = c.to_vec();
    w[0] += mu;
    let wnorm_sq = w.iter().fold(T::zero(), |acc, x| acc + x.norm_sqr());
    if wnorm_sq <= T::residual_tol() {
        // c = -μ e_0: diagonal completion
        let mut rows = vec![vec![Complex::zero(); n]; n];
        rows[0][0] = -mu;
        for (r, row) in rows.iter_mut().enumerate().skip(1) {
            row[r] = one;
        }
        return rows;
    }
    let tail_mass = c[1..].iter().fold(T::zero(), |acc, x| acc + x.norm_sqr());
    if tail_mass <= T::prune_tol() * T::prune_tol() && (c[0] - one).norm() <= T::prune_tol() {
        // c = e_0: identity
        let mut rows = vec![vec![Complex::zero(); n]; n];
        for (r, row) in rows.iter_mut().enumerate() {
            row[r] = one;
        }
        return rows;
    }
    // K = μ (2uu* - I) maps e_0 to c; the returned rows are K^T so that
    // row 0 reproduces c itself.
    let scale = Complex::new(T::of(2.0) / wnorm_sq, T::zero()) * mu;
    let mut rows = vec![vec![Complex::zero(); n]; n];
    for r in 0..n {
        for j in 0..n {
            // K[j][r] = μ(2 u_j conj(u_r) - δ_jr)
            let mut entry = scale * w[j] * w[r].conj();
            if r == j {
                entry -= mu;
            }
            rows[r][j] = entry;
        }
    }
    rows
}

/// Orthonormal frame `(x, e_1·x, …, e_{k-1}·x)` from the imaginary units
/// of a normed division algebra acting by left multiplication.
fn division_algebra_frame<T: Scalar>(x: &[T], mul: fn(&[T], &[T]) -> Vec<T>) -> Vec<Vec<Complex<T>>> {
    let n = x.len();
    let mut rows = Vec::with_capacity(n);
    rows.push(x.to_vec());
    for r in 1..n {
        let mut unit = vec![T::zero(); n];
        unit[r] = T::one();
        rows.push(mul(&unit, x));
    }
    rows.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|v| Complex::new(v, T::zero()))
                .collect()
        })
        .collect()
}

fn quaternion_left_mul<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    vec![
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

fn quaternion_conj<T: Scalar>(a: &[T]) -> Vec<T> {
    vec![a[0], -a[1], -a[2], -a[3]]
}

/// Cayley–Dickson product on pairs of quaternions: `(a,b)(c,d) = (ac - d̄b, da + bc̄)`.
fn octonion_left_mul<T: Scalar>(x: &[T], y: &[T]) -> Vec<T> {
    let (a, b) = (&x[..4], &x[4..]);
    let (c, d) = (&y[..4], &y[4..]);
    let ac = quaternion_left_mul(a, c);
    let db_bar = quaternion_left_mul(&quaternion_conj(d), b);
    let da = quaternion_left_mul(d, a);
    let bc_bar = quaternion_left_mul(b, &quaternion_conj(c));
    let mut out = Vec::with_capacity(8);
    for i in 0..4 {
        out.push(ac[i] - db_bar[i]);
    }
    for i in 0..4 {
        out.push(da[i] + bc_bar[i]);
    }
    out
}

fn bank_from_frame<T: Scalar>(
    m0: &LaurentPoly<T>,
    n: u32,
    frame: &[Vec<Complex<T>>],
    degrees: &[i64],
) -> Result<FilterBank<T>> {
    let mut filters = Vec::with_capacity(n as usize);
    filters.push(m0.clone());
    for row in frame.iter().skip(1) {
        let components = row
            .iter()
            .zip(degrees)
            .map(|(&c, &d)| LaurentPoly::monomial(d, c))
            .collect();
        let pv = PolyphaseVector { n, components };
        filters.push(pv.reassemble());
    }
    FilterBank::new(n, filters)
}

/// `m_0(1)`, the value of the low-pass filter at `z = 1`; a father filter
/// at scale `N` has `m_0(1) = √N`.
pub fn dc_value<T: Scalar>(m: &LaurentPoly<T>) -> Complex<T> {
    m.terms().fold(Complex::zero(), |acc, (_, c)| acc + c)
}

/// `|m_0(1) - √N|`, the normalization defect.
pub fn normalization_defect<T: Scalar>(m: &LaurentPoly<T>, n: u32) -> T {
    (dc_value(m) - Complex::new(fsqrt(T::of_usize(n as usize)), T::zero())).norm()
}
