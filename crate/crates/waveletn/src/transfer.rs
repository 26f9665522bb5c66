//! The transfer (root mean) operator of a low-pass filter,
//! `R f = (1/N) Σ_{w^N=z} |m₀(w)|² f(w)`, realized exactly on a monomial
//! window. Its eigenvalue-1 multiplicity decides orthonormality of the
//! scaling function's translates; its Cesàro limits define the boundary
//! measure whose atom at `z = 1` carries `‖φ‖²`; root-of-unity orbits on
//! which `|m₀| = √N` are the classical obstruction cycles.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use num_traits::Zero;

use crate::dense::{eigenvalues, kernel_basis, Window};
use crate::error::{Error, Result};
use crate::filterbank::{check_isometry_row, normalization_defect};
use crate::laurent::{unit_powi, LaurentPoly};
use crate::scalar::{fabs, fmax, fsqrt, unit_point, Scalar};

/// The operator `R` restricted to `span{z^k : |k| ≤ d}`, which it leaves
/// invariant when `d ≥ ceil(deg_spread(m₀)/(N-1))`.
#[derive(Clone, Debug)]
pub struct TransferMatrix<T: Scalar> {
    n: u32,
    d: i64,
    matrix: DMatrix<Complex<T>>,
    m0: LaurentPoly<T>,
    modulus_sq: LaurentPoly<T>,
    row_residual: T,
}

/// Verdict of the eigenvalue-1 multiplicity test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orthonormality {
    /// Fixed space is one-dimensional (the constants): the translates of
    /// the scaling function are orthonormal.
    Orthonormal,
    /// Extra fixed vectors exist: translates are not orthonormal.
    NotOrthonormal,
}

/// Eigenvalue-1 eigenspace of the windowed operator.
#[derive(Clone, Debug)]
pub struct FixedSpace<T: Scalar> {
    pub dim: usize,
    pub basis: Vec<LaurentPoly<T>>,
    pub verdict: Orthonormality,
}

/// Smallest window the operator of `m0` leaves invariant at scale `n`.
pub fn window_bound<T: Scalar>(m0: &LaurentPoly<T>, n: u32) -> i64 {
    let s = m0.deg_spread();
    (s + n as i64 - 2) / (n as i64 - 1)
}

/// Build the windowed transfer matrix. The isometry row condition is
/// diagnosed, not required: `R` is defined for any filter, and
/// [`TransferMatrix::row_residual`] reports the defect.
pub fn build<T: Scalar>(m0: &LaurentPoly<T>, n: u32, d: i64) -> Result<TransferMatrix<T>> {
    if n < 2 {
        return Err(Error::InvalidScale(format!("N must be >= 2, got {n}")));
    }
    let required = window_bound(m0, n);
    if d < required {
        return Err(Error::WindowTooSmall { required, given: d });
    }
    let modulus_sq = m0.modulus_sq();
    let win = Window { d };
    let matrix = win
        .operator_matrix(|f| modulus_sq.mul(f).downsample(n))
        .expect("window chosen invariant");
    Ok(TransferMatrix {
        n,
        d,
        matrix,
        m0: m0.clone(),
        modulus_sq,
        row_residual: check_isometry_row(m0, n),
    })
}

impl<T: Scalar> TransferMatrix<T> {
    pub fn scale(&self) -> u32 {
        self.n
    }

    pub fn window(&self) -> i64 {
        self.d
    }

    pub fn low_pass(&self) -> &LaurentPoly<T> {
        &self.m0
    }

    /// Defect of `(1/N) Σ_{w^N=z} |m₀(w)|² = 1` for the source filter.
    pub fn row_residual(&self) -> T {
        self.row_residual
    }

    pub fn matrix(&self) -> &DMatrix<Complex<T>> {
        &self.matrix
    }

    /// Apply `R` by exact polynomial arithmetic (valid for any `f`, not
    /// just window members).
    pub fn apply(&self, f: &LaurentPoly<T>) -> LaurentPoly<T> {
        self.modulus_sq.mul(f).downsample(self.n)
    }

    /// All eigenvalues of the windowed matrix, sorted by decreasing
    /// modulus (ties by argument) for reproducible reports.
    pub fn eigenvalues(&self) -> Vec<Complex<T>> {
        let mut eigs = eigenvalues(&self.matrix);
        eigs.sort_by(|a, b| {
            b.norm()
                .partial_cmp(&a.norm())
                .unwrap()
                .then(a.arg().partial_cmp(&b.arg()).unwrap())
        });
        eigs
    }

    /// Numerical kernel of `R - I`, with the singular-value threshold
    /// `spectral_tol · max(1, ‖R‖)`.
    pub fn fixed_space(&self) -> FixedSpace<T> {
        let len = self.matrix.nrows();
        let shifted = &self.matrix - DMatrix::<Complex<T>>::identity(len, len);
        let scale = self.matrix.norm();
        let threshold = T::spectral_tol() * fmax(scale, T::one());
        let win = Window { d: self.d };
        let basis: Vec<LaurentPoly<T>> = kernel_basis(&shifted, threshold)
            .iter()
            .map(|v| win.vec_to_poly(v).normalized())
            .collect();
        let dim = basis.len();
        let constant_fixed = dim == 1 && {
            let b = &basis[0];
            let dc = LaurentPoly::monomial(0, b.coeff(0));
            b.sub(&dc).norm() <= T::spectral_tol()
        };
        FixedSpace {
            dim,
            basis,
            verdict: if constant_fixed {
                Orthonormality::Orthonormal
            } else {
                Orthonormality::NotOrthonormal
            },
        }
    }
}

/// A point `e^{2πi·num/den}` of finite order on the circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RootOfUnity {
    pub num: u64,
    pub den: u64,
}

impl RootOfUnity {
    pub fn new(num: u64, den: u64) -> Self {
        debug_assert!(den > 0);
        let g = gcd(num % den, den);
        if g == 0 {
            Self { num: 0, den: 1 }
        } else {
            Self {
                num: (num % den) / g,
                den: den / g,
            }
        }
    }

    pub fn one() -> Self {
        Self { num: 0, den: 1 }
    }

    pub fn point<T: Scalar>(&self) -> Complex<T> {
        unit_point(T::of_usize(self.num as usize) / T::of_usize(self.den as usize))
    }

    /// Image under `z ↦ z^N`.
    pub fn pow(&self, n: u32) -> Self {
        Self::new((self.num % self.den) * n as u64 % self.den, self.den)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Orbits `{a, a^N, a^{N²}, …}` of roots of unity with `a^{N^k} = a` for
/// some `k ≤ max_period`, on which `|m₀|` equals `√N` at every point.
/// These obstruct orthonormality even when the isometry row condition
/// holds. The fixed point `{1}` is listed when `|m₀(1)| = √N`.
pub fn cohen_cycles<T: Scalar>(
    m0: &LaurentPoly<T>,
    n: u32,
    max_period: u32,
) -> Result<Vec<Vec<RootOfUnity>>> {
    if max_period == 0 {
        return Err(Error::InvalidScale("max_period must be >= 1".into()));
    }
    let mut points: BTreeSet<RootOfUnity> = BTreeSet::new();
    let mut den: u64 = 1;
    for _ in 0..max_period {
        den = den
            .checked_mul(n as u64)
            .ok_or_else(|| Error::InvalidScale("max_period too large".into()))?;
        let order = den - 1; // solutions of a^{N^k - 1} = 1
        if order > 1 << 22 {
            return Err(Error::InvalidScale(
                "max_period enumerates too many roots of unity".into(),
            ));
        }
        for j in 0..order {
            points.insert(RootOfUnity::new(j, order));
        }
    }
    let sqrt_n = fsqrt(T::of_usize(n as usize));
    let tol = T::of(1e-9);
    let on_sphere =
        |p: &RootOfUnity| fabs(m0.eval_point(p.point::<T>()).norm() - sqrt_n) <= tol;

    let mut seen: BTreeSet<RootOfUnity> = BTreeSet::new();
    let mut cycles = Vec::new();
    for &start in &points {
        if seen.contains(&start) {
            continue;
        }
        // walk the orbit
        let mut orbit = vec![start];
        let mut cur = start.pow(n);
        while cur != start {
            orbit.push(cur);
            cur = cur.pow(n);
            if orbit.len() > points.len() {
                break; // not closed inside the candidate set
            }
        }
        for p in &orbit {
            seen.insert(*p);
        }
        if cur == start && orbit.iter().all(on_sphere) {
            cycles.push(orbit);
        }
    }
    Ok(cycles)
}

/// Moments and fitted atoms of the boundary measure
/// `D(f) = lim_n ⟨1, S₀*ⁿ M_f S₀ⁿ 1⟩`.
#[derive(Clone, Debug)]
pub struct MeasureD<T: Scalar> {
    /// `D(z^k)` for `|k| ≤` the transfer window.
    pub moments: BTreeMap<i64, Complex<T>>,
    /// Nonnegative point masses on root-of-unity candidates, when the
    /// moment fit succeeds.
    pub atoms: Vec<(RootOfUnity, T)>,
    /// Root-mean-square moment defect of the atomic fit.
    pub fit_residual: T,
}

impl<T: Scalar> MeasureD<T> {
    pub fn moment(&self, k: i64) -> Complex<T> {
        self.moments.get(&k).copied().unwrap_or_else(Complex::zero)
    }

    /// Weight of the atom at `z = 1`, zero if absent.
    pub fn weight_at_one(&self) -> T {
        self.atoms
            .iter()
            .find(|(p, _)| *p == RootOfUnity::one())
            .map(|&(_, w)| w)
            .unwrap_or_else(T::zero)
    }
}

/// Compute `D(z^k)` for `|k| ≤ d` by windowed Cesàro averages of the
/// constant coefficient of `Rⁿ z^k`: the first `cesaro_len` iterates are
/// discarded as transient and the next `cesaro_len` averaged. Atoms are
/// then fitted on `{1} ∪ cohen_cycles` points by least squares.
pub fn measure_d<T: Scalar>(tm: &TransferMatrix<T>, cesaro_len: usize) -> Result<MeasureD<T>> {
    let len = tm.matrix.nrows();
    let m = cesaro_len.max(8);
    // track the z^0-coefficient functional through powers of R: one
    // transposed iteration yields all moments at once
    let mut u: DVector<Complex<T>> = DVector::from_element(len, Complex::zero());
    u[tm.d as usize] = Complex::new(T::one(), T::zero());
    for _ in 0..m {
        u = tm.matrix.tr_mul(&u);
    }
    let mut half1: DVector<Complex<T>> = DVector::from_element(len, Complex::zero());
    let mut half2: DVector<Complex<T>> = DVector::from_element(len, Complex::zero());
    let half = m / 2;
    for step in 0..m {
        u = tm.matrix.tr_mul(&u);
        if step < half {
            half1 += &u;
        } else {
            half2 += &u;
        }
    }
    let h1 = Complex::new(T::of_usize(half), T::zero());
    let h2 = Complex::new(T::of_usize(m - half), T::zero());
    let variation = (0..len)
        .map(|i| (half1[i] / h1 - half2[i] / h2).norm())
        .fold(T::zero(), fmax);
    if variation > T::of(0.05) {
        return Err(Error::NonConvergent {
            variation: variation.as_f64(),
        });
    }
    let total = T::of_usize(m);
    let mean = (half1 + half2) / Complex::new(total, T::zero());
    let mut moments: BTreeMap<i64, Complex<T>> = BTreeMap::new();
    for i in 0..len {
        let k = i as i64 - tm.d;
        moments.insert(k, mean[i]);
    }
    // enforce the Hermitian symmetry D(z^{-k}) = conj(D(z^k)) exactly
    let keys: Vec<i64> = moments.keys().copied().filter(|&k| k > 0).collect();
    for k in keys {
        let sym = (moments[&k] + moments[&-k].conj()) * Complex::new(T::of(0.5), T::zero());
        moments.insert(k, sym);
        moments.insert(-k, sym.conj());
    }

    let candidates = atom_candidates(tm)?;
    let (atoms, fit_residual) = fit_atoms(&moments, &candidates);
    let atoms = if fit_residual <= T::of(1e-3) {
        atoms
    } else {
        Vec::new()
    };
    Ok(MeasureD {
        moments,
        atoms,
        fit_residual,
    })
}

fn atom_candidates<T: Scalar>(tm: &TransferMatrix<T>) -> Result<Vec<RootOfUnity>> {
    let mut set: BTreeSet<RootOfUnity> = BTreeSet::new();
    set.insert(RootOfUnity::one());
    // periods beyond 6 explode combinatorially and never occur in the
    // windowed moment problems this crate handles
    let max_period = 6.min(32 - tm.n.leading_zeros());
    for cycle in cohen_cycles(&tm.m0, tm.n, max_period.max(1))? {
        for p in cycle {
            set.insert(p);
        }
    }
    Ok(set.into_iter().collect())
}

/// Least-squares weights for `D(z^k) ≈ Σ_i w_i p_i^k` over real `w`,
/// returning the fitted nonnegative weights and the rms residual.
fn fit_atoms<T: Scalar>(
    moments: &BTreeMap<i64, Complex<T>>,
    candidates: &[RootOfUnity],
) -> (Vec<(RootOfUnity, T)>, T) {
    let rows = 2 * moments.len();
    let cols = candidates.len();
    let mut a = DMatrix::<T>::zeros(rows, cols);
    let mut b = DVector::<T>::zeros(rows);
    for (r, (&k, &m)) in moments.iter().enumerate() {
        for (c, p) in candidates.iter().enumerate() {
            let v = unit_powi(p.point::<T>(), k);
            a[(2 * r, c)] = v.re;
            a[(2 * r + 1, c)] = v.im;
        }
        b[2 * r] = m.re;
        b[2 * r + 1] = m.im;
    }
    let svd = a.clone().svd(true, true);
    let w = svd
        .solve(&b, T::spectral_tol())
        .unwrap_or_else(|_| DVector::zeros(cols));
    let residual_vec = &a * &w - &b;
    let rms = fsqrt(residual_vec.norm_squared() / T::of_usize(rows));
    let atoms = candidates
        .iter()
        .zip(w.iter())
        .filter(|(_, &wi)| wi > T::of(1e-9))
        .map(|(p, &wi)| (*p, wi))
        .collect();
    (atoms, rms)
}

/// Outcome of the scaling-function criterion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FatherVerdict {
    /// `D = δ₁` and the fixed space is the constants: `m₀` generates a
    /// scaling function with orthonormal translates.
    IsFatherFilter,
    /// The obstruction found (extra fixed vectors / off-1 mass).
    Fails(String),
}

/// Decide whether `m₀` is the low-pass filter of an orthonormal scaling
/// function, by running both the fixed-space test and the moment test and
/// insisting they agree.
pub fn father_criterion<T: Scalar>(m0: &LaurentPoly<T>, n: u32) -> Result<FatherVerdict> {
    let row = check_isometry_row(m0, n);
    if row > T::residual_tol() {
        return Err(Error::NotIsometric {
            residual: row.as_f64(),
        });
    }
    let norm_defect = normalization_defect(m0, n);
    if norm_defect > T::of(1e-9) {
        return Err(Error::NotNormalized {
            defect: norm_defect.as_f64(),
        });
    }
    let d = window_bound(m0, n).max(1);
    let tm = build(m0, n, d)?;
    let fixed = tm.fixed_space();
    let d_measure = measure_d(&tm, 512)?;
    let moments_delta_one = d_measure
        .moments
        .values()
        .all(|m| (*m - Complex::new(T::one(), T::zero())).norm() <= T::of(1e-6));
    let fixed_ok = fixed.verdict == Orthonormality::Orthonormal;
    match (fixed_ok, moments_delta_one) {
        (true, true) => Ok(FatherVerdict::IsFatherFilter),
        (false, false) => {
            let cycles = cohen_cycles(m0, n, 4)?;
            let nontrivial: Vec<String> = cycles
                .iter()
                .filter(|c| !(c.len() == 1 && c[0] == RootOfUnity::one()))
                .map(|c| {
                    let pts: Vec<String> = c
                        .iter()
                        .map(|p| format!("e^(2*pi*i*{}/{})", p.num, p.den))
                        .collect();
                    format!("{{{}}}", pts.join(", "))
                })
                .collect();
            let reason = if nontrivial.is_empty() {
                format!("fixed space dimension {}", fixed.dim)
            } else {
                format!(
                    "fixed space dimension {}, cycle(s) at {}",
                    fixed.dim,
                    nontrivial.join(", ")
                )
            };
            Ok(FatherVerdict::Fails(reason))
        }
        (f, m) => Err(Error::Inconsistent(format!(
            "fixed-space test says {}, moment test says {}",
            if f { "orthonormal" } else { "not orthonormal" },
            if m { "delta at 1" } else { "mass off 1" },
        ))),
    }
}
