//! Scaling-function construction: fixed-point iteration of the refinement
//! map on a dyadic-in-`N` grid, the infinite-product form of its Fourier
//! transform, mother-function spectra, the periodized `|φ̂|²` as an
//! autocorrelation polynomial, and frame bounds read off from it.

use num_complex::Complex;
use num_traits::{Float, Zero};

use crate::error::{Error, Result};
use crate::filterbank::{normalization_defect, FilterBank};
use crate::laurent::LaurentPoly;
use crate::scalar::{fabs, fmax, fmin, fsqrt, Scalar};

/// Samples of a function on the grid `N^{-L}·(offset .. offset+len)`.
///
/// Sample `i` sits at `x = (offset + i)·N^{-L}`; functions are understood
/// as constant on the half-open cell to the right of each point, so left
/// Riemann sums are exact for piecewise-constant limits like the box.
#[derive(Clone, Debug)]
pub struct ScalingGrid<T: Scalar> {
    n: u32,
    level: u32,
    offset: i64,
    samples: Vec<Complex<T>>,
}

impl<T: Scalar> ScalingGrid<T> {
    pub fn from_samples(n: u32, level: u32, offset: i64, samples: Vec<Complex<T>>) -> Self {
        Self {
            n,
            level,
            offset,
            samples,
        }
    }

    pub fn scale(&self) -> u32 {
        self.n
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn samples(&self) -> &[Complex<T>] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Grid step `N^{-L}`.
    pub fn step(&self) -> T {
        T::one() / T::of_usize(self.cells_per_unit() as usize)
    }

    fn cells_per_unit(&self) -> i64 {
        (self.n as i64).pow(self.level)
    }

    /// Abscissa of sample `i`.
    pub fn x(&self, i: usize) -> T {
        T::of((self.offset + i as i64) as f64) * self.step()
    }

    /// Sample at global grid index `g` (i.e. at `x = g·N^{-L}`), zero
    /// outside the stored range.
    pub fn at_global(&self, g: i64) -> Complex<T> {
        let rel = g - self.offset;
        if rel < 0 || rel as usize >= self.samples.len() {
            Complex::zero()
        } else {
            self.samples[rel as usize]
        }
    }

    /// `∫ φ dx` by the left Riemann sum.
    pub fn mass(&self) -> Complex<T> {
        let h = Complex::new(self.step(), T::zero());
        self.samples
            .iter()
            .fold(Complex::<T>::zero(), |a, &s| a + s)
            * h
    }

    /// `∫ |φ|² dx`.
    pub fn norm_sq(&self) -> T {
        let h = self.step();
        self.samples
            .iter()
            .fold(T::zero(), |a, s| a + s.norm_sqr())
            * h
    }

    /// `∫ conj(φ(x)) ψ(x - m) dx` for an integer translate of a function
    /// on the same grid.
    pub fn inner_translate(&self, other: &Self, m: i64) -> Complex<T> {
        debug_assert_eq!(self.level, other.level);
        debug_assert_eq!(self.n, other.n);
        let shift = m * self.cells_per_unit();
        let h = Complex::new(self.step(), T::zero());
        let mut acc = Complex::<T>::zero();
        for (i, &s) in self.samples.iter().enumerate() {
            let g = self.offset + i as i64;
            acc += s.conj() * other.at_global(g - shift);
        }
        acc * h
    }

    /// `(2π)^{-1/2} ∫ φ(x) e^{-ixt} dx`, the same normalization as the
    /// infinite-product transform.
    pub fn fourier_at(&self, t: T) -> Complex<T> {
        let h = self.step();
        let mut acc = Complex::<T>::zero();
        for (i, &s) in self.samples.iter().enumerate() {
            let phase = -self.x(i) * t;
            acc += s * Complex::new(Float::cos(phase), Float::sin(phase));
        }
        acc * Complex::new(h / fsqrt(T::TAU()), T::zero())
    }
}

fn refinement_support<T: Scalar>(m0: &LaurentPoly<T>, n: u32) -> (T, T) {
    let lo = T::of(m0.min_index().unwrap_or(0) as f64) / T::of((n - 1) as f64);
    let hi = T::of(m0.max_index().unwrap_or(0) as f64) / T::of((n - 1) as f64);
    (lo, hi)
}

/// One application of the refinement map `φ ↦ √N Σ_k a_k φ(N·x - k)` on a
/// fixed grid (output on the same grid as the input).
fn refine_on_grid<T: Scalar>(grid: &ScalingGrid<T>, m0: &LaurentPoly<T>) -> ScalingGrid<T> {
    let n = grid.n as i64;
    let cells = grid.cells_per_unit();
    let root_n = Complex::new(fsqrt(T::of_usize(grid.n as usize)), T::zero());
    let samples = (0..grid.samples.len() as i64)
        .map(|i| {
            let g = grid.offset + i;
            let mut acc = Complex::<T>::zero();
            for (k, a) in m0.terms() {
                acc += a * grid.at_global(n * g - k * cells);
            }
            acc * root_n
        })
        .collect();
    ScalingGrid {
        n: grid.n,
        level: grid.level,
        offset: grid.offset,
        samples,
    }
}

/// Sup-norm defect of the refinement equation on the grid, recomputable
/// independently of the iteration that produced `grid`.
pub fn refinement_residual<T: Scalar>(grid: &ScalingGrid<T>, m0: &LaurentPoly<T>) -> T {
    let refined = refine_on_grid(grid, m0);
    grid.samples
        .iter()
        .zip(&refined.samples)
        .fold(T::zero(), |acc, (a, b)| fmax(acc, (*a - *b).norm()))
}

/// Iterate the refinement map from the unit box on the level-`L` grid.
///
/// Returns the final grid together with the sup-norm distance between the
/// last two iterates. For a low-pass filter with orthonormal translates
/// the box converges to the scaling function; for filters that merely
/// satisfy the isometry row condition the iterates may keep oscillating,
/// and the honest (large) residual is the signal that the fixed point is
/// not an attractor.
pub fn cascade_iterate<T: Scalar>(
    m0: &LaurentPoly<T>,
    n: u32,
    level: u32,
    iters: usize,
) -> Result<(ScalingGrid<T>, T)> {
    let defect = normalization_defect(m0, n);
    if defect > T::of(1e-9) {
        return Err(Error::NotNormalized {
            defect: defect.as_f64(),
        });
    }
    let (lo, hi) = refinement_support(m0, n);
    let cells = (n as i64).pow(level);
    let first = <T as Float>::floor(lo * T::of_usize(cells as usize)).as_f64() as i64 - 1;
    let last = <T as Float>::ceil(hi * T::of_usize(cells as usize)).as_f64() as i64 + 1;
    let len = (last - first + 1).max(1) as usize;
    let samples = (0..len)
        .map(|i| {
            let x = T::of((first + i as i64) as f64) / T::of_usize(cells as usize);
            if x >= T::zero() && x < T::one() {
                Complex::new(T::one(), T::zero())
            } else {
                Complex::zero()
            }
        })
        .collect();
    let mut grid = ScalingGrid {
        n,
        level,
        offset: first,
        samples,
    };
    let mut residual = T::infinity();
    let mut growth_streak = 0usize;
    for it in 0..iters {
        let next = refine_on_grid(&grid, m0);
        let r = grid
            .samples
            .iter()
            .zip(&next.samples)
            .fold(T::zero(), |acc, (a, b)| fmax(acc, (*a - *b).norm()));
        if it > 0 && r > residual {
            growth_streak += 1;
            if growth_streak >= 3 {
                return Err(Error::Diverging {
                    residual: r.as_f64(),
                    iters: it + 1,
                });
            }
        } else {
            growth_streak = 0;
        }
        residual = r;
        grid = next;
        if residual <= T::prune_tol() {
            break;
        }
    }
    Ok((grid, residual))
}

/// Samples of a Fourier-side function on an explicit angular grid.
#[derive(Clone, Debug)]
pub struct SpectralSamples<T: Scalar> {
    pub t: Vec<T>,
    pub values: Vec<Complex<T>>,
    /// Number of product factors used.
    pub depth: usize,
    /// Bound on the relative truncation error of the dropped tail, from
    /// the Lipschitz constant of the filter at `t = 0`.
    pub tail_bound: T,
}

/// Evaluate one point of `∏_{k=1}^{depth} N^{-1/2} m₀(t N^{-k})`.
fn product_factor<T: Scalar>(m0: &LaurentPoly<T>, n: u32, t: T, depth: usize) -> Complex<T> {
    let inv_root = T::one() / T::of_usize(n as usize);
    let root = fsqrt(inv_root);
    let mut acc = Complex::new(T::one(), T::zero());
    let mut s = t;
    for _ in 0..depth {
        s = s * inv_root;
        acc *= m0.eval_angle(s) * Complex::new(root, T::zero());
    }
    acc
}

fn lipschitz_at_zero<T: Scalar>(m0: &LaurentPoly<T>) -> T {
    m0.terms()
        .fold(T::zero(), |acc, (k, c)| acc + fabs(T::of(k as f64)) * c.norm())
}

/// `φ̂(t) ≈ (2π)^{-1/2} ∏_{k=1}^{depth} N^{-1/2} m₀(t N^{-k})` on a grid.
pub fn infinite_product<T: Scalar>(
    m0: &LaurentPoly<T>,
    n: u32,
    t_grid: &[T],
    depth: usize,
) -> Result<SpectralSamples<T>> {
    let defect = normalization_defect(m0, n);
    if defect > T::of(1e-9) {
        return Err(Error::NotNormalized {
            defect: defect.as_f64(),
        });
    }
    let norm = T::one() / fsqrt(T::TAU());
    let values = t_grid
        .iter()
        .map(|&t| product_factor(m0, n, t, depth) * Complex::new(norm, T::zero()))
        .collect();
    let t_max = t_grid.iter().fold(T::zero(), |a, &t| fmax(a, fabs(t)));
    let lip = lipschitz_at_zero(m0) / fsqrt(T::of_usize(n as usize));
    let n_t = T::of_usize(n as usize);
    let tail_bound =
        lip * t_max * Float::powi(T::one() / n_t, depth as i32) / (T::one() - T::one() / n_t);
    Ok(SpectralSamples {
        t: t_grid.to_vec(),
        values,
        depth,
        tail_bound,
    })
}

/// Spectra `ψ̂_k(t) = N^{-1/2} m_k(e^{-it/N}) φ̂(t/N)` of the `N-1` mother
/// functions of a bank, `k = 1..N-1`.
pub fn mother_spectra<T: Scalar>(
    bank: &FilterBank<T>,
    t_grid: &[T],
    depth: usize,
) -> Result<Vec<SpectralSamples<T>>> {
    let worst = bank.unitarity_residual();
    if worst > T::residual_tol() {
        return Err(Error::NotUnitaryBank {
            residual: worst.as_f64(),
        });
    }
    let n = bank.scale();
    let m0 = bank.low_pass();
    let defect = normalization_defect(m0, n);
    if defect > T::of(1e-9) {
        return Err(Error::NotNormalized {
            defect: defect.as_f64(),
        });
    }
    let inv_n = T::one() / T::of_usize(n as usize);
    let root = fsqrt(inv_n);
    let norm = T::one() / fsqrt(T::TAU());
    let mut out = Vec::with_capacity(n as usize - 1);
    for k in 1..n as usize {
        let mk = bank.filter(k);
        let values = t_grid
            .iter()
            .map(|&t| {
                let s = t * inv_n;
                let phi_hat = product_factor(m0, n, s, depth) * Complex::new(norm, T::zero());
                mk.eval_angle(s) * phi_hat * Complex::new(root, T::zero())
            })
            .collect();
        let t_max = t_grid.iter().fold(T::zero(), |a, &t| fmax(a, fabs(t)));
        let lip = lipschitz_at_zero(m0) * root;
        let tail_bound =
            lip * t_max * Float::powi(inv_n, depth as i32 + 1) / (T::one() - inv_n);
        out.push(SpectralSamples {
            t: t_grid.to_vec(),
            values,
            depth,
            tail_bound,
        });
    }
    Ok(out)
}

/// Autocorrelation polynomial `Σ_m ⟨φ, φ(·-m)⟩ z^m` from a grid, equal on
/// the circle to `2π · Σ_k |φ̂(t + 2πk)|²`.
pub fn per_from_grid<T: Scalar>(grid: &ScalingGrid<T>) -> LaurentPoly<T> {
    let cells = grid.cells_per_unit();
    let width = (grid.len() as i64 + cells - 1) / cells + 1;
    let mut terms = Vec::new();
    for m in -width..=width {
        let r = grid.inner_translate(grid, m);
        terms.push((m, r));
    }
    LaurentPoly::from_terms(terms)
}

/// The same polynomial recovered from Fourier-side samples by folding the
/// translates `t + 2πk` and reading off Fourier coefficients; cross-check
/// path for [`per_from_grid`]. The grid must be uniform with an integer
/// number of points per `2π` period.
pub fn per_from_spectra<T: Scalar>(ss: &SpectralSamples<T>, max_lag: i64) -> Result<LaurentPoly<T>> {
    if ss.t.len() < 2 {
        return Err(Error::InvalidScale("need at least two samples".into()));
    }
    let dt = ss.t[1] - ss.t[0];
    for w in ss.t.windows(2) {
        if fabs(w[1] - w[0] - dt) > T::of(1e-9) {
            return Err(Error::InvalidScale("spectral grid not uniform".into()));
        }
    }
    let period = T::TAU() / dt;
    let stride = <T as Float>::round(period).as_f64() as usize;
    if stride == 0 || fabs(period - T::of_usize(stride)) > T::of(1e-6) {
        return Err(Error::InvalidScale(
            "spectral grid step does not divide 2π".into(),
        ));
    }
    // fold |φ̂|² over full periods
    let folds = ss.t.len() / stride;
    if folds == 0 {
        return Err(Error::InvalidScale("grid shorter than one period".into()));
    }
    let mut folded = vec![T::zero(); stride];
    for (j, v) in ss.values.iter().enumerate().take(folds * stride) {
        folded[j % stride] = folded[j % stride] + v.norm_sqr();
    }
    let mut terms = Vec::new();
    for m in -max_lag..=max_lag {
        let mut acc = Complex::<T>::zero();
        for (j, &p) in folded.iter().enumerate() {
            let t = ss.t[j];
            let phase = -T::of(m as f64) * t;
            // r_m = ∫ PER(t) e^{-imt} dt  (z = e^{-it} convention pairs
            // coefficient m with e^{-imt})
            acc += Complex::new(p * Float::cos(phase), p * Float::sin(phase));
        }
        terms.push((m, acc * Complex::new(dt, T::zero())));
    }
    Ok(LaurentPoly::from_terms(terms))
}

/// Min and max of a real-valued trigonometric polynomial on a uniform
/// grid: the sharp frame bounds of the integer translates when applied to
/// the autocorrelation polynomial. Invertibility needs `b > 0`.
pub fn frame_bounds<T: Scalar>(per_poly: &LaurentPoly<T>, grid_size: usize) -> Result<(T, T)> {
    let defect = per_poly.hermitian_defect();
    if defect > T::of(1e-7) {
        return Err(Error::NotRealValued {
            defect: defect.as_f64(),
        });
    }
    if per_poly.is_zero() {
        return Ok((T::zero(), T::zero()));
    }
    let mut lo = T::infinity();
    let mut hi = T::neg_infinity();
    for i in 0..grid_size {
        let t = T::TAU() * T::of_usize(i) / T::of_usize(grid_size);
        let v = per_poly.eval_angle(t).re;
        lo = fmin(lo, v);
        hi = fmax(hi, v);
    }
    Ok((lo, hi))
}

/// Uniform grid of `points` samples covering `[lo, hi]` inclusive.
pub fn uniform_grid<T: Scalar>(lo: T, hi: T, points: usize) -> Vec<T> {
    debug_assert!(points >= 2);
    let step = (hi - lo) / T::of_usize(points - 1);
    (0..points).map(|i| lo + step * T::of_usize(i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filters;
    use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

    fn box_grid(level: u32) -> ScalingGrid<f64> {
        // exact unit box sampled at level `level`, scale 2
        let cells = 2i64.pow(level);
        let first = -1i64;
        let len = (cells + 3) as usize;
        let samples = (0..len)
            .map(|i| {
                let g = first + i as i64;
                if g >= 0 && g < cells {
                    Complex::new(1.0, 0.0)
                } else {
                    Complex::new(0.0, 0.0)
                }
            })
            .collect();
        ScalingGrid::from_samples(2, level, first, samples)
    }

    #[test]
    fn haar_cascade_fixes_box_immediately() {
        let (grid, residual) = cascade_iterate(&filters::haar_low_pass::<f64>(), 2, 6, 10).unwrap();
        assert!(residual < 1e-15);
        assert!((grid.mass().re - 1.0).abs() < 1e-12);
        assert!((grid.norm_sq() - 1.0).abs() < 1e-12);
        assert!(refinement_residual(&grid, &filters::haar_low_pass()) < 1e-15);
        // the limit is the box
        let expected = box_grid(6);
        for i in 0..grid.len() {
            let g = grid.offset() + i as i64;
            assert!((grid.at_global(g) - expected.at_global(g)).norm() < 1e-14);
        }
    }

    #[test]
    fn scale3_haar_cascade_fixes_box() {
        let (grid, residual) = cascade_iterate(&filters::haar_scale_low_pass::<f64>(3), 3, 4, 10).unwrap();
        assert!(residual < 1e-15);
        assert!((grid.norm_sq() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn stretched_haar_fixed_point_is_wide_box() {
        // closed form: φ = (1/3)χ_[0,3) satisfies φ(x) = φ(2x) + φ(2x-3)
        let m0 = filters::stretched_haar_low_pass::<f64>();
        let level = 7u32;
        let cells = 2i64.pow(level);
        let first = -1i64;
        let len = (3 * cells + 3) as usize;
        let samples = (0..len)
            .map(|i| {
                let g = first + i as i64;
                if g >= 0 && g < 3 * cells {
                    Complex::new(1.0 / 3.0, 0.0)
                } else {
                    Complex::new(0.0, 0.0)
                }
            })
            .collect();
        let phi = ScalingGrid::from_samples(2, level, first, samples);
        assert!(refinement_residual(&phi, &m0) < 1e-15);
        assert!((phi.mass().re - 1.0).abs() < 1e-12);
        assert!((phi.norm_sq() - 1.0 / 3.0).abs() < 1e-12);

        // the iteration itself does not settle: the fixed point is not an
        // attractor for this filter, and the residual stays order one
        let (_, residual) = cascade_iterate(&m0, 2, 6, 40).unwrap();
        assert!(residual > 0.5);
    }

    #[test]
    fn unnormalized_filter_rejected() {
        let bad = LaurentPoly::from_real_terms([(0, 1.0), (1, 0.5)]);
        assert!(matches!(
            cascade_iterate(&bad, 2, 4, 10),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(
            infinite_product(&bad, 2, &[0.0], 8),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn diverging_iteration_detected() {
        // m(1) = √2 but |m| ≡ √2: refinement doubles sup norm each pass
        let bad = LaurentPoly::constant(2f64.sqrt());
        assert!(matches!(
            cascade_iterate(&bad, 2, 4, 30),
            Err(Error::Diverging { .. })
        ));
    }

    #[test]
    fn haar_product_matches_closed_form() {
        let m0 = filters::haar_low_pass::<f64>();
        let grid = uniform_grid(-8.0 * PI, 8.0 * PI, 257);
        let ss = infinite_product(&m0, 2, &grid, 40).unwrap();
        let norm = (TAU).sqrt().recip();
        for (i, &t) in ss.t.iter().enumerate() {
            // φ̂(t) = (2π)^{-1/2} e^{-it/2} sin(t/2)/(t/2)
            let sinc = if t.abs() < 1e-12 {
                1.0
            } else {
                (t / 2.0).sin() / (t / 2.0)
            };
            let expected = Complex::from_polar(norm * sinc.abs(), -t / 2.0)
                * if sinc < 0.0 { -1.0 } else { 1.0 };
            assert!(
                (ss.values[i] - expected).norm() < 1e-9,
                "t = {t}: {} vs {}",
                ss.values[i],
                expected
            );
        }
        // value at 0 and at 2π
        let at = infinite_product(&m0, 2, &[0.0, TAU], 40).unwrap();
        assert!((at.values[0].re - norm).abs() < 1e-12);
        assert!(at.values[1].norm() < 1e-9);
    }

    #[test]
    fn grid_and_product_transforms_agree() {
        for (m0, n) in [
            (filters::haar_low_pass::<f64>(), 2u32),
            (filters::db4_low_pass::<f64>(), 2),
            (filters::haar_scale_low_pass::<f64>(3), 3),
        ] {
            let (grid, _) = cascade_iterate(&m0, n, 10, 80).unwrap();
            let t_grid = uniform_grid(-8.0 * PI, 8.0 * PI, 513);
            let ss = infinite_product(&m0, n, &t_grid, 30).unwrap();
            let mut err = 0.0f64;
            let dt = t_grid[1] - t_grid[0];
            for (i, &t) in t_grid.iter().enumerate() {
                err += (grid.fourier_at(t) - ss.values[i]).norm_sqr() * dt;
            }
            assert!(err.sqrt() < 1e-3, "L2 mismatch {} for scale {n}", err.sqrt());
        }
    }

    #[test]
    fn haar_mother_spectrum_matches_step_function() {
        let bank = filters::haar_bank::<f64>();
        let grid = uniform_grid(-6.0 * PI, 6.0 * PI, 241);
        let spectra = mother_spectra(&bank, &grid, 40).unwrap();
        assert_eq!(spectra.len(), 1);
        let norm = (TAU).sqrt().recip();
        for (i, &t) in grid.iter().enumerate() {
            // ψ = χ_[0,1/2) - χ_[1/2,1): ψ̂(t) = (2π)^{-1/2} (1-e^{-it/2})²/(it)
            let expected = if t.abs() < 1e-9 {
                Complex::new(0.0, 0.0)
            } else {
                let e = Complex::from_polar(1.0, -t / 2.0);
                let num = (Complex::new(1.0, 0.0) - e) * (Complex::new(1.0, 0.0) - e);
                num / Complex::new(0.0, t) * norm
            };
            assert!(
                (spectra[0].values[i] - expected).norm() < 1e-6,
                "t = {t}"
            );
        }
        // ψ̂_k(0) = 0 whenever m_k(1) = 0
        let at0 = mother_spectra(&bank, &[0.0], 40).unwrap();
        assert!(at0[0].values[0].norm() < 1e-12);
    }

    #[test]
    fn per_of_haar_is_one() {
        let (grid, _) = cascade_iterate(&filters::haar_low_pass::<f64>(), 2, 8, 10).unwrap();
        let p = per_from_grid(&grid);
        assert!(p.dist(&LaurentPoly::one()) < 1e-10);
        let (b, c) = frame_bounds(&p, 1024).unwrap();
        assert!((b - 1.0).abs() < 1e-10);
        assert!((c - 1.0).abs() < 1e-10);
    }

    #[test]
    fn per_of_wide_box_is_triangle_autocorrelation() {
        // φ = χ_[0,3)/√3 (normalized): overlaps (3-|m|)/3 at lags |m| ≤ 2
        let level = 8u32;
        let cells = 2i64.pow(level);
        let s = (3.0f64).sqrt().recip();
        let samples = (0..(3 * cells + 2) as usize)
            .map(|i| {
                let g = -1 + i as i64;
                if g >= 0 && g < 3 * cells {
                    Complex::new(s, 0.0)
                } else {
                    Complex::new(0.0, 0.0)
                }
            })
            .collect();
        let phi = ScalingGrid::from_samples(2, level, -1, samples);
        let p = per_from_grid(&phi);
        let expected = LaurentPoly::from_real_terms([
            (-2, 1.0 / 3.0),
            (-1, 2.0 / 3.0),
            (0, 1.0),
            (1, 2.0 / 3.0),
            (2, 1.0 / 3.0),
        ]);
        assert!(p.dist(&expected) < 1e-10);
        // coefficient at 0 is the squared norm
        assert!((p.coeff(0).re - phi.norm_sq()).abs() < 1e-12);

        // extrema: max 3 at t = 0; the polynomial vanishes at t = ±2π/3,
        // so the lower frame bound is 0 (translates are not a Riesz basis)
        let (b, c) = frame_bounds(&p, 3 * 1024).unwrap();
        assert!((c - 3.0).abs() < 1e-9);
        assert!(b.abs() < 1e-9);
        // the interior local minimum at t = π has value 1/3
        assert!((p.eval_angle(PI).re - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn per_spectral_path_agrees_with_grid_path() {
        let m0 = filters::haar_low_pass::<f64>();
        let (grid, _) = cascade_iterate(&m0, 2, 9, 10).unwrap();
        let p_grid = per_from_grid(&grid);
        // 64 points per period, 64 periods: t in [-64π, 64π)
        let stride = 64usize;
        let periods = 64usize;
        let lo = -(periods as f64) * PI;
        let t: Vec<f64> = (0..stride * periods)
            .map(|i| lo + TAU * i as f64 / stride as f64)
            .collect();
        let ss = infinite_product(&m0, 2, &t, 40).unwrap();
        let p_spec = per_from_spectra(&ss, 3).unwrap();
        assert!(p_grid.dist(&p_spec) < 1e-2, "{}", p_grid.dist(&p_spec));
    }

    #[test]
    fn frame_bounds_edge_cases() {
        assert_eq!(frame_bounds(&LaurentPoly::<f64>::zero(), 64).unwrap(), (0.0, 0.0));
        let not_real = LaurentPoly::from_terms([(1, Complex::new(1.0, 0.0))]);
        assert!(matches!(
            frame_bounds(&not_real, 64),
            Err(Error::NotRealValued { .. })
        ));
        let s = FRAC_1_SQRT_2;
        let _ = s;
    }

    #[test]
    fn normalization_integral_close_to_one() {
        for (m0, n) in [
            (filters::db4_low_pass::<f64>(), 2u32),
            (filters::haar_scale_low_pass::<f64>(3), 3),
        ] {
            let (grid, _) = cascade_iterate(&m0, n, 8, 60).unwrap();
            assert!((grid.mass().norm() - 1.0).abs() < 1e-4);
        }
    }

    #[test]
    fn per_is_transfer_fixed_for_father_filters() {
        for (m0, n) in [
            (filters::haar_low_pass::<f64>(), 2u32),
            (filters::db4_low_pass::<f64>(), 2),
        ] {
            let (grid, _) = cascade_iterate(&m0, n, 10, 80).unwrap();
            let p = per_from_grid(&grid);
            let tm = crate::transfer::build(&m0, n, crate::transfer::window_bound(&m0, n).max(3)).unwrap();
            assert!(tm.apply(&p).dist(&p) < 1e-4);
        }
    }
}
