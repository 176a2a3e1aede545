//! Exact harmonic analysis on the torus `U(1)^n`.
//!
//! Everything is a finite linear combination of characters
//! `χ_k(θ) = e^{i k·θ}`, stored sparsely by lattice index. In that basis the
//! Haar integral, inner products, and the Fourier transform are *exact*
//! coefficient manipulations — no quadrature anywhere. A sampled-grid FFT
//! ([`fft_oracle`]) is kept alongside as an independent cross-check of the
//! coefficient engine, never as the engine itself.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::collections::BTreeMap;
use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Coefficients at or below this modulus are dropped from supports; it sits
/// below double-precision accumulation noise for the sizes we handle.
pub const PRUNE_TOL: f64 = 1e-15;

/// The FFT oracle prunes recovered coefficients at this threshold, well
/// under its 1e-9 agreement contract but above FFT roundoff.
pub const ORACLE_PRUNE_TOL: f64 = 1e-12;

fn accumulate(map: &mut BTreeMap<Vec<i64>, Complex64>, key: Vec<i64>, value: Complex64) {
    use std::collections::btree_map::Entry;
    match map.entry(key) {
        Entry::Vacant(slot) => {
            if value.norm() > PRUNE_TOL {
                slot.insert(value);
            }
        }
        Entry::Occupied(mut slot) => {
            let sum = *slot.get() + value;
            if sum.norm() > PRUNE_TOL {
                *slot.get_mut() = sum;
            } else {
                slot.remove();
            }
        }
    }
}

/// A trigonometric polynomial on `U(1)^dim`: a finitely supported map from
/// frequency vectors to complex coefficients. `dim = 0` is the one-point
/// torus, i.e. a single scalar stored at the empty index.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    dim: usize,
    coeffs: BTreeMap<Vec<i64>, Complex64>,
}

impl TrigPoly {
    pub fn zero(dim: usize) -> Self {
        TrigPoly {
            dim,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, value: Complex64) -> Self {
        let mut coeffs = BTreeMap::new();
        accumulate(&mut coeffs, vec![0; dim], value);
        TrigPoly { dim, coeffs }
    }

    /// The character `χ_k`, a single unit coefficient at `k`.
    pub fn character(dim: usize, k: Vec<i64>) -> Result<Self> {
        if k.len() != dim {
            return Err(Error::DimMismatch {
                expected: dim,
                found: k.len(),
            });
        }
        let mut coeffs = BTreeMap::new();
        coeffs.insert(k, Complex64::ONE);
        Ok(TrigPoly { dim, coeffs })
    }

    /// Builds a polynomial from `(frequency, coefficient)` pairs, summing
    /// duplicates and pruning.
    pub fn from_coeffs<I>(dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i64>, Complex64)>,
    {
        let mut coeffs = BTreeMap::new();
        for (k, c) in entries {
            if k.len() != dim {
                return Err(Error::DimMismatch {
                    expected: dim,
                    found: k.len(),
                });
            }
            accumulate(&mut coeffs, k, c);
        }
        Ok(TrigPoly { dim, coeffs })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &BTreeMap<Vec<i64>, Complex64> {
        &self.coeffs
    }

    /// Coefficient at `k` (zero when absent from the support).
    pub fn coeff(&self, k: &[i64]) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(Complex64::ZERO)
    }

    pub fn support_size(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn check_dim(&self, other: &TrigPoly) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &TrigPoly) -> Result<TrigPoly> {
        self.check_dim(other)?;
        let mut coeffs = self.coeffs.clone();
        for (k, c) in &other.coeffs {
            accumulate(&mut coeffs, k.clone(), *c);
        }
        Ok(TrigPoly {
            dim: self.dim,
            coeffs,
        })
    }

    pub fn sub(&self, other: &TrigPoly) -> Result<TrigPoly> {
        self.add(&other.scale(-Complex64::ONE))
    }

    pub fn scale(&self, factor: Complex64) -> TrigPoly {
        let mut coeffs = BTreeMap::new();
        for (k, c) in &self.coeffs {
            accumulate(&mut coeffs, k.clone(), c * factor);
        }
        TrigPoly {
            dim: self.dim,
            coeffs,
        }
    }

    /// Product of polynomials = convolution of coefficients; characters
    /// multiply by adding frequencies.
    pub fn mul(&self, other: &TrigPoly) -> Result<TrigPoly> {
        self.check_dim(other)?;
        let mut coeffs = BTreeMap::new();
        for (k, c) in &self.coeffs {
            for (m, d) in &other.coeffs {
                let sum: Vec<i64> = k.iter().zip(m).map(|(a, b)| a + b).collect();
                accumulate(&mut coeffs, sum, c * d);
            }
        }
        Ok(TrigPoly {
            dim: self.dim,
            coeffs,
        })
    }

    /// Complex conjugate: `conj(χ_k) = χ_{-k}`.
    pub fn conj(&self) -> TrigPoly {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(k, c)| (k.iter().map(|x| -x).collect(), c.conj()))
            .collect();
        TrigPoly {
            dim: self.dim,
            coeffs,
        }
    }

    /// Integral against normalized Haar measure. Characters other than the
    /// constant integrate to zero, so this is the coefficient at 0.
    pub fn haar_integral(&self) -> Complex64 {
        self.coeff(&vec![0; self.dim])
    }

    /// `⟨p, q⟩ = ∫ conj(p)·q dμ₀ = Σ_k conj(p̂(k)) q̂(k)`, computed on the
    /// coefficient side (the two expressions agree exactly; the tests check
    /// the convolution route against this one).
    pub fn inner_product(&self, other: &TrigPoly) -> Result<Complex64> {
        self.check_dim(other)?;
        let mut acc = Complex64::ZERO;
        for (k, c) in &self.coeffs {
            acc += c.conj() * other.coeff(k);
        }
        Ok(acc)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Pointwise evaluation `Σ_k p̂(k) e^{i k·θ}`.
    pub fn eval_at(&self, theta: &[f64]) -> Result<Complex64> {
        if theta.len() != self.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                found: theta.len(),
            });
        }
        let mut acc = Complex64::ZERO;
        for (k, c) in &self.coeffs {
            let phase: f64 = k.iter().zip(theta).map(|(&ki, &ti)| ki as f64 * ti).sum();
            acc += c * Complex64::from_polar(1.0, phase);
        }
        Ok(acc)
    }

    /// The level Fourier transform: on the character span it is simply the
    /// coefficient map, and Parseval holds with no error term.
    pub fn fourier(&self) -> CoeffFunction {
        CoeffFunction {
            dim: self.dim,
            values: self.coeffs.clone(),
        }
    }

    /// Largest `|k|` in the support along each axis; the Nyquist data the
    /// FFT oracle needs.
    pub fn max_abs_freq(&self) -> Vec<i64> {
        let mut out = vec![0i64; self.dim];
        for k in self.coeffs.keys() {
            for (axis, &ki) in k.iter().enumerate() {
                out[axis] = out[axis].max(ki.abs());
            }
        }
        out
    }
}

/// A finitely supported function on the frequency lattice `Z^dim` — the
/// Fourier side of a level.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffFunction {
    dim: usize,
    values: BTreeMap<Vec<i64>, Complex64>,
}

impl CoeffFunction {
    pub fn zero(dim: usize) -> Self {
        CoeffFunction {
            dim,
            values: BTreeMap::new(),
        }
    }

    pub fn from_values<I>(dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i64>, Complex64)>,
    {
        let poly = TrigPoly::from_coeffs(dim, entries)?;
        Ok(poly.fourier())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn values(&self) -> &BTreeMap<Vec<i64>, Complex64> {
        &self.values
    }

    pub fn value(&self, k: &[i64]) -> Complex64 {
        self.values.get(k).copied().unwrap_or(Complex64::ZERO)
    }

    pub fn support_size(&self) -> usize {
        self.values.len()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values.values().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn inner_product(&self, other: &CoeffFunction) -> Result<Complex64> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut acc = Complex64::ZERO;
        for (k, c) in &self.values {
            acc += c.conj() * other.value(k);
        }
        Ok(acc)
    }

    /// Largest per-frequency discrepancy over the union of supports.
    pub fn max_distance(&self, other: &CoeffFunction) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut worst = 0.0f64;
        for k in self.values.keys().chain(other.values.keys()) {
            worst = worst.max((self.value(k) - other.value(k)).norm());
        }
        Ok(worst)
    }

    /// Reads the values back as a polynomial (the inverse Fourier map).
    pub fn to_poly(&self) -> TrigPoly {
        TrigPoly::from_coeffs(self.dim, self.values.clone())
            .expect("stored keys have the stored dimension")
    }
}

/// Recovers coefficients by brute force: sample the polynomial on a uniform
/// grid, run a forward FFT along every axis, normalize, and map bins back
/// to symmetric frequencies. Completely independent of the coefficient
/// algebra, which is the point.
///
/// Grid sizes must be odd — so bins split evenly into positive and negative
/// frequencies — and large enough for the support (`size > 2·max|k|` per
/// axis); anything else is refused rather than aliased.
/// Checks a sampling grid against a polynomial: every axis must be odd and
/// strictly finer than twice the largest frequency there (Nyquist).
pub fn validate_grid(poly: &TrigPoly, grid: &[usize]) -> Result<()> {
    if grid.len() != poly.dim() {
        return Err(Error::DimMismatch {
            expected: poly.dim(),
            found: grid.len(),
        });
    }
    let needed = poly.max_abs_freq();
    for (axis, (&size, &max_k)) in grid.iter().zip(&needed).enumerate() {
        if size % 2 == 0 || size == 0 {
            return Err(Error::GridEven { axis, size });
        }
        if size as i64 <= 2 * max_k {
            return Err(Error::GridTooSmall {
                axis,
                size,
                needed: max_k,
            });
        }
    }
    Ok(())
}

pub fn fft_oracle(poly: &TrigPoly, grid: &[usize]) -> Result<CoeffFunction> {
    validate_grid(poly, grid)?;

    let total: usize = grid.iter().product();
    let dim = poly.dim();

    // Row-major samples over the product grid.
    let mut samples = Vec::with_capacity(total);
    let mut index = vec![0usize; dim];
    let mut theta = vec![0.0f64; dim];
    for flat in 0..total {
        let mut rest = flat;
        for axis in (0..dim).rev() {
            index[axis] = rest % grid[axis];
            rest /= grid[axis];
        }
        for axis in 0..dim {
            theta[axis] = TAU * index[axis] as f64 / grid[axis] as f64;
        }
        samples.push(poly.eval_at(&theta)?);
    }

    // Separable DFT: transform every line along each axis in place.
    let mut planner = FftPlanner::new();
    for axis in 0..dim {
        let size = grid[axis];
        let fft = planner.plan_fft_forward(size);
        let inner: usize = grid[axis + 1..].iter().product();
        let outer: usize = grid[..axis].iter().product();
        let mut line = vec![Complex64::ZERO; size];
        for o in 0..outer {
            for i in 0..inner {
                let start = o * size * inner + i;
                for (t, slot) in line.iter_mut().enumerate() {
                    *slot = samples[start + t * inner];
                }
                fft.process(&mut line);
                for (t, value) in line.iter().enumerate() {
                    samples[start + t * inner] = *value;
                }
            }
        }
    }

    // Bin b on an odd axis of size N is frequency b for b ≤ (N-1)/2 and
    // b - N beyond; normalize by the number of samples.
    let scale = 1.0 / total as f64;
    let mut values = BTreeMap::new();
    for (flat, value) in samples.iter().enumerate() {
        let scaled = value * scale;
        if scaled.norm() <= ORACLE_PRUNE_TOL {
            continue;
        }
        let mut rest = flat;
        let mut k = vec![0i64; dim];
        for axis in (0..dim).rev() {
            let bin = rest % grid[axis];
            rest /= grid[axis];
            let size = grid[axis] as i64;
            let b = bin as i64;
            k[axis] = if b <= (size - 1) / 2 { b } else { b - size };
        }
        values.insert(k, scaled);
    }
    Ok(CoeffFunction { dim, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi(dim: usize, k: &[i64]) -> TrigPoly {
        TrigPoly::character(dim, k.to_vec()).unwrap()
    }

    fn one(dim: usize) -> TrigPoly {
        TrigPoly::constant(dim, Complex64::ONE)
    }

    #[test]
    fn characters_multiply_by_adding_frequencies() {
        let p = chi(2, &[2, -1]).mul(&chi(2, &[1, 1])).unwrap();
        assert_eq!(p.support_size(), 1);
        assert_eq!(p.coeff(&[3, 0]), Complex64::ONE);
    }

    #[test]
    fn conjugation_negates_frequencies() {
        let p = chi(1, &[3]).scale(Complex64::new(0.0, 2.0));
        let q = p.conj();
        assert_eq!(q.coeff(&[-3]), Complex64::new(0.0, -2.0));
        assert_eq!(q.coeff(&[3]), Complex64::ZERO);
    }

    #[test]
    fn expands_product_of_conjugate_factors() {
        // (1 + χ₁)(1 + χ₋₁) = 2 + χ₁ + χ₋₁
        let f = one(1).add(&chi(1, &[1])).unwrap();
        let g = one(1).add(&chi(1, &[-1])).unwrap();
        let p = f.mul(&g).unwrap();
        assert_eq!(p.coeff(&[0]), Complex64::new(2.0, 0.0));
        assert_eq!(p.coeff(&[1]), Complex64::ONE);
        assert_eq!(p.coeff(&[-1]), Complex64::ONE);
        assert_eq!(p.support_size(), 3);
    }

    #[test]
    fn haar_integral_reads_the_constant_coefficient() {
        assert_eq!(one(2).haar_integral(), Complex64::ONE);
        assert_eq!(chi(1, &[5]).haar_integral(), Complex64::ZERO);
        // ∫ |1+χ₁|² = 2
        let f = one(1).add(&chi(1, &[1])).unwrap();
        let p = f.conj().mul(&f).unwrap();
        assert_eq!(p.haar_integral(), Complex64::new(2.0, 0.0));
    }

    #[test]
    fn characters_are_orthonormal() {
        let a = chi(2, &[1, 2]);
        let b = chi(2, &[1, 3]);
        assert_eq!(a.inner_product(&a).unwrap(), Complex64::ONE);
        assert_eq!(a.inner_product(&b).unwrap(), Complex64::ZERO);
        let f = one(1).add(&chi(1, &[1])).unwrap();
        assert_eq!(f.inner_product(&f).unwrap(), Complex64::new(2.0, 0.0));
    }

    #[test]
    fn evaluates_pointwise() {
        assert_eq!(one(3).eval_at(&[0.4, 1.0, 2.2]).unwrap(), Complex64::ONE);
        let v = chi(1, &[1]).eval_at(&[std::f64::consts::PI]).unwrap();
        assert!((v - Complex64::new(-1.0, 0.0)).norm() <= 1e-15);
        let p = TrigPoly::from_coeffs(
            1,
            vec![
                (vec![0], Complex64::new(2.0, 0.0)),
                (vec![1], Complex64::ONE),
                (vec![-1], Complex64::ONE),
            ],
        )
        .unwrap();
        assert!((p.eval_at(&[0.0]).unwrap() - Complex64::new(4.0, 0.0)).norm() <= 1e-15);
    }

    #[test]
    fn fourier_is_the_coefficient_map() {
        let p = TrigPoly::from_coeffs(
            1,
            vec![
                (vec![0], Complex64::new(2.0, 0.0)),
                (vec![1], Complex64::ONE),
                (vec![-1], Complex64::ONE),
            ],
        )
        .unwrap();
        let f = p.fourier();
        assert_eq!(f.value(&[0]), Complex64::new(2.0, 0.0));
        assert_eq!(f.value(&[1]), Complex64::ONE);
        assert_eq!(f.value(&[-1]), Complex64::ONE);
        assert_eq!(f.support_size(), 3);
        assert_eq!(f.to_poly(), p);
        // Parseval with no error term.
        assert_eq!(f.norm_sqr(), p.norm_sqr());
    }

    #[test]
    fn pruning_removes_cancelled_terms() {
        let p = chi(1, &[4]).sub(&chi(1, &[4])).unwrap();
        assert!(p.is_zero());
        let q = chi(1, &[2]).scale(Complex64::new(1e-16, 0.0));
        assert!(q.is_zero());
    }

    #[test]
    fn dim_zero_is_a_scalar() {
        let c = TrigPoly::constant(0, Complex64::new(0.5, -0.25));
        assert_eq!(c.haar_integral(), Complex64::new(0.5, -0.25));
        assert_eq!(c.eval_at(&[]).unwrap(), Complex64::new(0.5, -0.25));
        let sq = c.mul(&c).unwrap();
        assert_eq!(sq.coeff(&[]), Complex64::new(0.1875, -0.25));
        let oracle = fft_oracle(&c, &[]).unwrap();
        assert_eq!(oracle.value(&[]), Complex64::new(0.5, -0.25));
    }

    #[test]
    fn mismatched_dims_are_rejected() {
        assert!(matches!(
            one(1).add(&one(2)),
            Err(Error::DimMismatch { .. })
        ));
        assert!(matches!(
            one(2).eval_at(&[0.0]),
            Err(Error::DimMismatch { .. })
        ));
        assert!(matches!(
            TrigPoly::character(2, vec![1]),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    fn fft_oracle_recovers_a_pure_tone() {
        let recovered = fft_oracle(&chi(1, &[1]), &[5]).unwrap();
        assert!((recovered.value(&[1]) - Complex64::ONE).norm() <= 1e-12);
        assert_eq!(recovered.support_size(), 1);
        let constant = fft_oracle(&one(1), &[3]).unwrap();
        assert!((constant.value(&[0]) - Complex64::ONE).norm() <= 1e-12);
    }

    #[test]
    fn fft_oracle_matches_fourier_in_two_dims() {
        let p = TrigPoly::from_coeffs(
            2,
            vec![
                (vec![3, -2], Complex64::new(0.5, 0.25)),
                (vec![-3, 1], Complex64::new(-1.0, 0.75)),
                (vec![0, 0], Complex64::new(0.1, 0.0)),
                (vec![1, 3], Complex64::new(0.0, -2.0)),
            ],
        )
        .unwrap();
        let recovered = fft_oracle(&p, &[9, 9]).unwrap();
        assert!(recovered.max_distance(&p.fourier()).unwrap() <= 1e-9);
    }

    #[test]
    fn fft_oracle_refuses_bad_grids() {
        let p = chi(1, &[3]);
        assert!(matches!(
            fft_oracle(&p, &[8]),
            Err(Error::GridEven { axis: 0, size: 8 })
        ));
        // 2·3 + 1 = 7 is the smallest valid size; 5 aliases.
        assert!(matches!(
            fft_oracle(&p, &[5]),
            Err(Error::GridTooSmall {
                axis: 0,
                size: 5,
                needed: 3
            })
        ));
        assert!(fft_oracle(&p, &[7]).is_ok());
        assert!(matches!(
            fft_oracle(&p, &[7, 7]),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    fn quadrature_average_agrees_with_haar() {
        let p = TrigPoly::from_coeffs(
            1,
            vec![
                (vec![0], Complex64::new(0.3, -0.7)),
                (vec![2], Complex64::new(1.0, 1.0)),
                (vec![-1], Complex64::new(0.0, 0.5)),
            ],
        )
        .unwrap();
        let n = 7usize;
        let mut avg = Complex64::ZERO;
        for t in 0..n {
            avg += p.eval_at(&[TAU * t as f64 / n as f64]).unwrap();
        }
        avg /= n as f64;
        assert!((avg - p.haar_integral()).norm() <= 1e-9);
    }
}
