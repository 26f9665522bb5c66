//! Sparse Laurent polynomials on the unit circle.
//!
//! A [`LaurentPoly`] is a finitely supported series `p(z) = Σ_k a_k z^k`
//! with integer exponents of either sign. Throughout the crate the circle
//! variable is `z = e^{-it}`, so `p` is also the trigonometric polynomial
//! `t ↦ Σ_k a_k e^{-ikt}` and `Σ_k |a_k|²` is its squared `L²(T)` norm.
//!
//! Besides ring arithmetic the module provides the two structural maps of
//! the substitution `z ↦ z^N`: [`LaurentPoly::upsample`] (`p(z) ↦ p(z^N)`)
//! and [`LaurentPoly::downsample`] (the root-mean `(1/N) Σ_{w^N=z} p(w)`),
//! plus rotation by N-th roots of unity and the circle conjugate. These
//! generate every operator in the rest of the crate.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::{Float, Zero};

use crate::scalar::{fabs, fsqrt, root_of_unity_pow, Scalar};

/// Finitely supported `Σ_k a_k z^k` with complex coefficients.
///
/// Coefficients with modulus below [`Scalar::prune_tol`] are dropped after
/// every operation, so `is_zero` and support bounds are meaningful.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPoly<T: Scalar> {
    coeffs: BTreeMap<i64, Complex<T>>,
}

impl<T: Scalar> Default for LaurentPoly<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Scalar> LaurentPoly<T> {
    /// The zero polynomial.
    pub fn zero() -> Self {
        Self {
            coeffs: BTreeMap::new(),
        }
    }

    /// The constant polynomial `1`.
    pub fn one() -> Self {
        Self::monomial(0, Complex::new(T::one(), T::zero()))
    }

    /// A real constant.
    pub fn constant(c: T) -> Self {
        Self::monomial(0, Complex::new(c, T::zero()))
    }

    /// `c·z^k`.
    pub fn monomial(k: i64, c: Complex<T>) -> Self {
        let mut coeffs = BTreeMap::new();
        if c.norm() > T::prune_tol() {
            coeffs.insert(k, c);
        }
        Self { coeffs }
    }

    /// Build from `(exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms<I: IntoIterator<Item = (i64, Complex<T>)>>(terms: I) -> Self {
        let mut coeffs: BTreeMap<i64, Complex<T>> = BTreeMap::new();
        for (k, c) in terms {
            *coeffs.entry(k).or_insert_with(Complex::zero) += c;
        }
        let mut p = Self { coeffs };
        p.prune();
        p
    }

    /// Build from real `(exponent, value)` pairs.
    pub fn from_real_terms<I: IntoIterator<Item = (i64, T)>>(terms: I) -> Self {
        Self::from_terms(
            terms
                .into_iter()
                .map(|(k, x)| (k, Complex::new(x, T::zero()))),
        )
    }

    fn prune(&mut self) {
        let tol = T::prune_tol();
        self.coeffs.retain(|_, c| c.norm() > tol);
    }

    /// Coefficient of `z^k` (zero when absent).
    pub fn coeff(&self, k: i64) -> Complex<T> {
        self.coeffs.get(&k).copied().unwrap_or_else(Complex::zero)
    }

    /// Stored `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, Complex<T>)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Smallest exponent in the support, `None` for the zero polynomial.
    pub fn min_index(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// Largest exponent in the support.
    pub fn max_index(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// `max_index - min_index`; 0 for monomials and for 0.
    pub fn deg_spread(&self) -> i64 {
        match (self.min_index(), self.max_index()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => 0,
        }
    }

    /// Largest |exponent| in the support; 0 for the zero polynomial.
    pub fn max_abs_index(&self) -> i64 {
        self.coeffs.keys().map(|k| k.abs()).max().unwrap_or(0)
    }

    /// Number of stored coefficients.
    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    /// `Σ_k |a_k|²`, the squared `L²(T)` norm (Parseval).
    pub fn norm_sq(&self) -> T {
        self.coeffs
            .values()
            .fold(T::zero(), |acc, c| acc + c.norm_sqr())
    }

    /// `L²(T)` norm.
    pub fn norm(&self) -> T {
        fsqrt(self.norm_sq())
    }

    /// Parseval pairing `⟨p, q⟩ = Σ_k conj(p_k) q_k`, conjugate-linear in `p`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        let mut acc = Complex::zero();
        for (&k, &c) in &self.coeffs {
            acc += c.conj() * other.coeff(k);
        }
        acc
    }

    /// Coefficientwise sum.
    pub fn add(&self, other: &Self) -> Self {
        let mut coeffs = self.coeffs.clone();
        for (&k, &c) in &other.coeffs {
            *coeffs.entry(k).or_insert_with(Complex::zero) += c;
        }
        let mut p = Self { coeffs };
        p.prune();
        p
    }

    /// Coefficientwise difference.
    pub fn sub(&self, other: &Self) -> Self {
        let mut coeffs = self.coeffs.clone();
        for (&k, &c) in &other.coeffs {
            *coeffs.entry(k).or_insert_with(Complex::zero) -= c;
        }
        let mut p = Self { coeffs };
        p.prune();
        p
    }

    /// Scalar multiple.
    pub fn scale(&self, c: Complex<T>) -> Self {
        let mut p = Self {
            coeffs: self.coeffs.iter().map(|(&k, &a)| (k, a * c)).collect(),
        };
        p.prune();
        p
    }

    /// Product (convolution of coefficient maps).
    pub fn mul(&self, other: &Self) -> Self {
        let mut coeffs: BTreeMap<i64, Complex<T>> = BTreeMap::new();
        for (&i, &a) in &self.coeffs {
            for (&j, &b) in &other.coeffs {
                *coeffs.entry(i + j).or_insert_with(Complex::zero) += a * b;
            }
        }
        let mut p = Self { coeffs };
        p.prune();
        p
    }

    /// Multiplication by `z^n`.
    pub fn shift(&self, n: i64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&k, &c)| (k + n, c)).collect(),
        }
    }

    /// The circle conjugate `p̄`: coefficient at `k` is `conj(a_{-k})`, so
    /// evaluating the result at any `|z| = 1` gives `conj(p(z))`.
    pub fn conj_reflect(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&k, &c)| (-k, c.conj())).collect(),
        }
    }

    /// `|p|²` as a polynomial on the circle: `p · p̄`.
    pub fn modulus_sq(&self) -> Self {
        self.mul(&self.conj_reflect())
    }

    /// `p(z^n)`: every exponent multiplied by `n`.
    pub fn upsample(&self, n: u32) -> Self {
        debug_assert!(n >= 1);
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&k, &c)| (k * n as i64, c))
                .collect(),
        }
    }

    /// The root mean `(1/n) Σ_{w^n=z} p(w)`: keeps exponents divisible by
    /// `n`, reindexed `k ↦ k/n`. Left inverse of [`Self::upsample`].
    pub fn downsample(&self, n: u32) -> Self {
        debug_assert!(n >= 1);
        Self {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(&k, _)| k.rem_euclid(n as i64) == 0)
                .map(|(&k, &c)| (k / n as i64, c))
                .collect(),
        }
    }

    /// `p(ρ^j z)` for `ρ = e^{2πi/n}`: coefficient at `k` picks up `ρ^{jk}`.
    pub fn rotate(&self, j: i64, n: u32) -> Self {
        let mut p = Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&k, &c)| (k, c * root_of_unity_pow::<T>(n, j * k)))
                .collect(),
        };
        p.prune();
        p
    }

    /// Evaluate at an arbitrary point `z` of the unit circle.
    pub fn eval_point(&self, z: Complex<T>) -> Complex<T> {
        let mut acc = Complex::zero();
        for (&k, &c) in &self.coeffs {
            acc += c * unit_powi(z, k);
        }
        acc
    }

    /// Evaluate as a function of the angle: `p(e^{-it}) = Σ_k a_k e^{-ikt}`.
    pub fn eval_angle(&self, t: T) -> Complex<T> {
        let mut acc = Complex::zero();
        for (&k, &c) in &self.coeffs {
            let phase = -t * T::of(k as f64);
            acc += c * Complex::new(Float::cos(phase), Float::sin(phase));
        }
        acc
    }

    /// Whether `p` is real-valued on the circle, i.e. `a_{-k} = conj(a_k)`;
    /// returns the worst violation.
    pub fn hermitian_defect(&self) -> T {
        let mut worst = T::zero();
        for (&k, &c) in &self.coeffs {
            let d = (c - self.coeff(-k).conj()).norm();
            if d > worst {
                worst = d;
            }
        }
        worst
    }

    /// `max_k |a_k - b_k|` against another polynomial.
    pub fn max_coeff_dist(&self, other: &Self) -> T {
        let mut worst = T::zero();
        for (&k, _) in self.coeffs.iter().chain(other.coeffs.iter()) {
            let d = (self.coeff(k) - other.coeff(k)).norm();
            if d > worst {
                worst = d;
            }
        }
        worst
    }

    /// Distance in `L²(T)` norm to another polynomial.
    pub fn dist(&self, other: &Self) -> T {
        self.sub(other).norm()
    }

    /// If `p = λ z^n` is a single monomial, return `(n, λ)`.
    pub fn as_monomial(&self) -> Option<(i64, Complex<T>)> {
        if self.coeffs.len() == 1 {
            let (&k, &c) = self.coeffs.iter().next().unwrap();
            Some((k, c))
        } else {
            None
        }
    }

    /// Global phase fixed so the lowest-index coefficient is positive real,
    /// and norm 1. No-op on the zero polynomial.
    pub fn normalized(&self) -> Self {
        let n = self.norm();
        if n <= T::prune_tol() {
            return self.clone();
        }
        let lead = self.coeff(self.min_index().unwrap());
        let phase = lead / Complex::new(lead.norm(), T::zero());
        self.scale(phase.conj() / Complex::new(n, T::zero()))
    }
}

/// `z^k` for unit-modulus `z` and possibly negative `k`, via conjugation so
/// the modulus never drifts through an inversion.
pub(crate) fn unit_powi<T: Scalar>(z: Complex<T>, k: i64) -> Complex<T> {
    if k >= 0 {
        z.powu(k as u32)
    } else {
        z.conj().powu((-k) as u32)
    }
}

/// Riemann-sum estimate of `∫ |p(e^{-it})|² dt/2π` on a uniform grid;
/// test oracle for the Parseval identity.
pub fn grid_norm_sq<T: Scalar>(p: &LaurentPoly<T>, points: usize) -> T {
    let mut acc = T::zero();
    for i in 0..points {
        let t = T::TAU() * T::of_usize(i) / T::of_usize(points);
        acc = acc + p.eval_angle(t).norm_sqr();
    }
    acc / T::of_usize(points)
}

impl<T: Scalar> std::fmt::Display for LaurentPoly<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&k, &c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if fabs(c.im) <= T::prune_tol() {
                write!(f, "{}", c.re)?;
            } else {
                write!(f, "({}{:+}i)", c.re, c.im)?;
            }
            match k {
                0 => {}
                1 => write!(f, "·z")?,
                _ => write!(f, "·z^{}", k)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type P = LaurentPoly<f64>;
    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        Complex::new(re, im)
    }

    #[test]
    fn add_cancels_inverse() {
        let z = P::monomial(1, c(1.0, 0.0));
        let mz = P::monomial(1, c(-1.0, 0.0));
        assert!(z.add(&mz).is_zero());
    }

    #[test]
    fn add_one_plus_z_pair() {
        let p = P::from_real_terms([(0, 1.0), (1, 1.0)]);
        let q = P::from_real_terms([(0, 1.0), (1, -1.0)]);
        assert_eq!(p.add(&q), P::constant(2.0));
    }

    #[test]
    fn add_haar_rows() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let m0 = P::from_real_terms([(0, s), (1, s)]);
        let m1 = P::from_real_terms([(0, s), (1, -s)]);
        let sum = m0.add(&m1);
        assert!(sum.dist(&P::constant(2f64.sqrt())) < 1e-15);
    }

    #[test]
    fn mul_monomials_and_expansion() {
        let za = P::monomial(3, c(1.0, 0.0));
        let zb = P::monomial(-5, c(1.0, 0.0));
        assert_eq!(za.mul(&zb), P::monomial(-2, c(1.0, 0.0)));

        let p = P::from_real_terms([(0, 1.0), (1, 1.0)]);
        let q = P::from_real_terms([(0, 1.0), (1, -1.0)]);
        assert_eq!(p.mul(&q), P::from_real_terms([(0, 1.0), (2, -1.0)]));

        // (1+z)(1+z²+z⁴) = 1+z+z²+z³+z⁴+z⁵
        let r = P::from_real_terms([(0, 1.0), (2, 1.0), (4, 1.0)]);
        let all_ones = P::from_real_terms((0..6).map(|k| (k, 1.0)));
        assert_eq!(p.mul(&r), all_ones);
    }

    #[test]
    fn conj_reflect_cases() {
        let z = P::monomial(1, c(1.0, 0.0));
        assert_eq!(z.conj_reflect(), P::monomial(-1, c(1.0, 0.0)));
        let k = P::constant(2.5);
        assert_eq!(k.conj_reflect(), k);
        let p = P::from_terms([(0, c(0.0, 1.0)), (2, c(1.0, 0.0))]);
        let expected = P::from_terms([(0, c(0.0, -1.0)), (-2, c(1.0, 0.0))]);
        assert_eq!(p.conj_reflect(), expected);
    }

    #[test]
    fn conj_reflect_is_pointwise_conjugate() {
        let p = P::from_terms([(-2, c(0.3, -0.4)), (0, c(1.0, 2.0)), (5, c(-0.7, 0.1))]);
        for i in 0..17 {
            let t = 2.0 * std::f64::consts::PI * i as f64 / 17.0;
            let lhs = p.conj_reflect().eval_angle(t);
            let rhs = p.eval_angle(t).conj();
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn upsample_cases() {
        assert_eq!(P::one().upsample(3), P::one());
        let p = P::from_real_terms([(1, 1.0), (-1, 1.0)]);
        assert_eq!(p.upsample(2), P::from_real_terms([(2, 1.0), (-2, 1.0)]));
        let q = P::from_real_terms([(0, 1.0), (1, 1.0)]);
        assert_eq!(q.upsample(2), P::from_real_terms([(0, 1.0), (2, 1.0)]));
    }

    #[test]
    fn downsample_cases() {
        assert_eq!(
            P::monomial(6, c(1.0, 0.0)).downsample(3),
            P::monomial(2, c(1.0, 0.0))
        );
        assert!(P::monomial(1, c(1.0, 0.0)).downsample(2).is_zero());
        // |Haar m0|² averages to 1
        let p = P::from_real_terms([(-1, 0.5), (0, 1.0), (1, 0.5)]);
        assert_eq!(p.downsample(2), P::one());
    }

    #[test]
    fn downsample_is_root_mean() {
        // (1/N) Σ_{w^N=z} p(w) against direct evaluation at roots
        let p = P::from_terms([(-3, c(0.2, 0.1)), (0, c(1.0, 0.0)), (4, c(0.0, -0.9))]);
        let n = 3u32;
        let d = p.downsample(n);
        for i in 0..11 {
            let t = 2.0 * std::f64::consts::PI * i as f64 / 11.0;
            let z = Complex::from_polar(1.0, -t);
            let mut mean = Complex::new(0.0, 0.0);
            for j in 0..n {
                // w = z^{1/N} e^{2πi j/N}
                let w = Complex::from_polar(1.0, -t / n as f64)
                    * Complex::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / n as f64);
                mean += p.eval_point(w);
            }
            mean /= n as f64;
            assert!((d.eval_point(z) - mean).norm() < 1e-12);
        }
    }

    #[test]
    fn rotate_cases() {
        let z = P::monomial(1, c(1.0, 0.0));
        assert!(z.rotate(4, 4).dist(&z) < 1e-15);
        assert!(z.rotate(1, 2).dist(&P::monomial(1, c(-1.0, 0.0))) < 1e-15);
        let p = P::from_real_terms([(0, 1.0), (3, 1.0)]);
        assert!(p.rotate(1, 3).dist(&p) < 1e-15);
    }

    #[test]
    fn inner_cases() {
        let z = P::monomial(1, c(1.0, 0.0));
        let z2 = P::monomial(2, c(1.0, 0.0));
        assert_eq!(z.inner(&z), c(1.0, 0.0));
        assert_eq!(z.inner(&z2), c(0.0, 0.0));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let m0 = P::from_real_terms([(0, s), (1, s)]);
        let m1 = P::from_real_terms([(0, -s), (1, s)]);
        assert!(m0.inner(&m1).norm() < 1e-15);
    }

    #[test]
    fn parseval_against_grid() {
        let p = P::from_terms([(-4, c(0.3, 0.2)), (0, c(-1.0, 0.5)), (7, c(0.1, -0.1))]);
        let est = grid_norm_sq(&p, 4096);
        assert!((est - p.norm_sq()).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn adjunction_upsample_downsample(
            pk in proptest::collection::vec((-8i64..8, -1.0f64..1.0, -1.0f64..1.0), 1..6),
            qk in proptest::collection::vec((-8i64..8, -1.0f64..1.0, -1.0f64..1.0), 1..6),
            n in prop::sample::select(vec![2u32, 3, 5]),
        ) {
            let p = P::from_terms(pk.iter().map(|&(k, re, im)| (k, c(re, im))));
            let q = P::from_terms(qk.iter().map(|&(k, re, im)| (k, c(re, im))));
            let lhs = q.upsample(n).inner(&p);
            let rhs = q.inner(&p.downsample(n));
            prop_assert!((lhs - rhs).norm() < 1e-10);
        }

        #[test]
        fn rotate_preserves_inner(
            pk in proptest::collection::vec((-8i64..8, -1.0f64..1.0, -1.0f64..1.0), 1..6),
            qk in proptest::collection::vec((-8i64..8, -1.0f64..1.0, -1.0f64..1.0), 1..6),
            j in -5i64..5,
            n in 2u32..6,
        ) {
            let p = P::from_terms(pk.iter().map(|&(k, re, im)| (k, c(re, im))));
            let q = P::from_terms(qk.iter().map(|&(k, re, im)| (k, c(re, im))));
            let lhs = p.rotate(j, n).inner(&q.rotate(j, n));
            let rhs = p.inner(&q);
            prop_assert!((lhs - rhs).norm() < 1e-10);
        }

        #[test]
        fn downsample_after_upsample_is_identity(
            pk in proptest::collection::vec((-8i64..8, -1.0f64..1.0, -1.0f64..1.0), 1..6),
            n in 2u32..6,
        ) {
            let p = P::from_terms(pk.iter().map(|&(k, re, im)| (k, c(re, im))));
            prop_assert!(p.upsample(n).downsample(n).dist(&p) < 1e-12);
        }

        #[test]
        fn downsample_module_identity(
            qk in proptest::collection::vec((-6i64..6, -1.0f64..1.0, -1.0f64..1.0), 1..5),
            gk in proptest::collection::vec((-6i64..6, -1.0f64..1.0, -1.0f64..1.0), 1..5),
            n in 2u32..5,
        ) {
            // downsample(upsample(q)·g) = q·downsample(g)
            let q = P::from_terms(qk.iter().map(|&(k, re, im)| (k, c(re, im))));
            let g = P::from_terms(gk.iter().map(|&(k, re, im)| (k, c(re, im))));
            let lhs = q.upsample(n).mul(&g).downsample(n);
            let rhs = q.mul(&g.downsample(n));
            prop_assert!(lhs.dist(&rhs) < 1e-10);
        }
    }
}
