//! Measures on the torus as densities, and their character functionals.
//!
//! A measure `dμ = p·dμ₀` with a trigonometric-polynomial density `p`
//! corresponds to the functional `ℓ(k) = ∫ conj(χ_k) dμ = p̂(k)` on Wilson
//! characters — a correspondence that is a plain coefficient identity here,
//! hence exactly invertible. Positive measures are recognized two ways, and
//! the verdicts are reported separately: positive-definiteness of Gram
//! matrices `ℓ(kᵢ-kⱼ)` over finite windows (sound always; complete in
//! dimension 1 by Fejér–Riesz), and the minimum of the density on a dense
//! sampling grid.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::harmonics::{validate_grid, TrigPoly};

/// Tolerance for the Hermitian-symmetry invariant of densities.
pub const HERMITIAN_TOL: f64 = 1e-14;

/// Additive slack in the L² continuity bound, absorbing eigen/roundoff
/// noise in quantities that are mathematically equal at the boundary.
pub const L2_SLACK: f64 = 1e-9;

/// A real-valued (possibly signed) density on the torus: a trigonometric
/// polynomial with Hermitian coefficients, `p̂(-k) = conj p̂(k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureDensity {
    poly: TrigPoly,
}

impl MeasureDensity {
    /// Validates the Hermitian symmetry within [`HERMITIAN_TOL`].
    pub fn new(poly: TrigPoly) -> Result<Self> {
        for (k, c) in poly.coeffs() {
            let mirrored: Vec<i64> = k.iter().map(|x| -x).collect();
            if (poly.coeff(&mirrored) - c.conj()).norm() > HERMITIAN_TOL {
                return Err(Error::NotHermitian(k.clone()));
            }
        }
        Ok(MeasureDensity { poly })
    }

    /// The density `|q|² = conj(q)·q`, nonnegative by construction. The
    /// convolution is symmetrized pairwise afterwards so the Hermitian
    /// invariant holds bit-exactly, not just up to summation order.
    pub fn modulus_squared(q: &TrigPoly) -> Self {
        let raw = q
            .conj()
            .mul(q)
            .expect("conjugate has the same dimension");
        let mut coeffs: BTreeMap<Vec<i64>, Complex64> = BTreeMap::new();
        for (k, c) in raw.coeffs() {
            let mirrored: Vec<i64> = k.iter().map(|x| -x).collect();
            let symmetrized = (c + raw.coeff(&mirrored).conj()) * 0.5;
            coeffs.insert(k.clone(), symmetrized);
        }
        let poly = TrigPoly::from_coeffs(raw.dim(), coeffs)
            .expect("keys carry the polynomial's dimension");
        MeasureDensity { poly }
    }

    /// Normalized Haar measure itself (`p = 1`).
    pub fn haar(dim: usize) -> Self {
        MeasureDensity {
            poly: TrigPoly::constant(dim, Complex64::ONE),
        }
    }

    pub fn poly(&self) -> &TrigPoly {
        &self.poly
    }

    pub fn dim(&self) -> usize {
        self.poly.dim()
    }

    /// Total mass `∫ dμ = ∫ p dμ₀` (equals `‖μ‖` when `p ≥ 0`).
    pub fn total_mass(&self) -> f64 {
        self.poly.haar_integral().re
    }
}

/// A finitely supported functional on Wilson characters: `values[k]` is the
/// number the functional assigns to the character at frequency `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacterFunctional {
    dim: usize,
    values: BTreeMap<Vec<i64>, Complex64>,
}

impl CharacterFunctional {
    pub fn new<I>(dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i64>, Complex64)>,
    {
        let poly = TrigPoly::from_coeffs(dim, entries)?;
        Ok(CharacterFunctional {
            dim,
            values: poly.coeffs().clone(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn values(&self) -> &BTreeMap<Vec<i64>, Complex64> {
        &self.values
    }

    /// The value at `k`, zero off the support.
    pub fn value(&self, k: &[i64]) -> Complex64 {
        self.values.get(k).copied().unwrap_or(Complex64::ZERO)
    }

    pub fn support_size(&self) -> usize {
        self.values.len()
    }
}

/// Reads off `ℓ(k) = ∫ conj(χ_k) p dμ₀ = p̂(k)`: the functional induced by
/// the measure with density `p`. Linear and injective in `p`.
pub fn functional_from_density(density: &MeasureDensity) -> CharacterFunctional {
    CharacterFunctional {
        dim: density.dim(),
        values: density.poly().coeffs().clone(),
    }
}

/// The inverse direction: a functional with Hermitian symmetry is the
/// functional of exactly one density, namely `p̂(k) = ℓ(k)`. Together with
/// [`functional_from_density`] this is an exact round trip.
pub fn density_from_functional(functional: &CharacterFunctional) -> Result<MeasureDensity> {
    let poly = TrigPoly::from_coeffs(functional.dim, functional.values.clone())?;
    MeasureDensity::new(poly)
}

/// Smallest eigenvalue of the Gram matrix `M[i][j] = ℓ(kᵢ - kⱼ)` over a
/// finite window of lattice points. For a functional induced by a
/// nonnegative density the quadratic form is `∫ |Σᵢ cᵢ χ_{kᵢ}|² dμ ≥ 0`,
/// so every window must come out (numerically) positive semidefinite.
/// An empty window imposes no constraint and reports `+∞`.
pub fn psd_test(functional: &CharacterFunctional, window: &[Vec<i64>]) -> Result<f64> {
    if window.is_empty() {
        return Ok(f64::INFINITY);
    }
    let n = window.len();
    for point in window {
        if point.len() != functional.dim {
            return Err(Error::DimMismatch {
                expected: functional.dim,
                found: point.len(),
            });
        }
    }
    // Assemble the Hermitization (M + M†)/2 entry by entry — same quadratic
    // form, and it keeps the real embedding exactly symmetric even if the
    // functional itself is slightly asymmetric.
    let mut gram = vec![vec![Complex64::ZERO; n]; n];
    for i in 0..n {
        for j in i..n {
            let diff_ij: Vec<i64> = window[i]
                .iter()
                .zip(&window[j])
                .map(|(a, b)| a - b)
                .collect();
            let diff_ji: Vec<i64> = diff_ij.iter().map(|x| -x).collect();
            let value = (functional.value(&diff_ij) + functional.value(&diff_ji).conj()) * 0.5;
            gram[i][j] = value;
            gram[j][i] = value.conj();
        }
    }
    // Real embedding [[A, -B], [B, A]] of the Hermitian matrix A + iB has
    // the same eigenvalues, doubled in multiplicity.
    let embedded = DMatrix::from_fn(2 * n, 2 * n, |r, c| {
        let (i, j) = (r % n, c % n);
        match (r / n, c / n) {
            (0, 0) | (1, 1) => gram[i][j].re,
            (0, 1) => -gram[i][j].im,
            _ => gram[i][j].im,
        }
    });
    let eigenvalues = embedded.symmetric_eigenvalues();
    Ok(eigenvalues.iter().copied().fold(f64::INFINITY, f64::min))
}

/// Minimum of the density over a uniform Nyquist-valid sampling grid; the
/// band-limited surrogate for pointwise nonnegativity. Values at or above
/// `-1e-9` count as positive. Refuses undersized or even grids.
pub fn grid_positivity_test(density: &MeasureDensity, grid: &[usize]) -> Result<f64> {
    validate_grid(density.poly(), grid)?;
    let dim = density.dim();
    let total: usize = grid.iter().product();
    let mut min = f64::INFINITY;
    let mut index = vec![0usize; dim];
    let mut theta = vec![0.0f64; dim];
    for flat in 0..total {
        let mut rest = flat;
        for axis in (0..dim).rev() {
            index[axis] = rest % grid[axis];
            rest /= grid[axis];
        }
        for axis in 0..dim {
            theta[axis] = std::f64::consts::TAU * index[axis] as f64 / grid[axis] as f64;
        }
        // Hermitian coefficients make the value real up to roundoff.
        min = min.min(density.poly().eval_at(&theta)?.re);
    }
    Ok(min)
}

/// Checks the L² continuity bound of the measure-side transform: for the
/// measure `dμ_ψ = ψ dμ`, every character pairing is dominated by
/// `‖ψ‖_{L²(μ)}·‖μ‖^{1/2}` (Cauchy–Schwarz). The density must first pass
/// the grid nonnegativity test on the supplied grid — for a signed density
/// the inequality has no reason to hold and the input is rejected.
pub fn l2_continuity_check(
    density: &MeasureDensity,
    psi: &TrigPoly,
    grid: &[usize],
) -> Result<bool> {
    let min = grid_positivity_test(density, grid)?;
    if min < -L2_SLACK {
        return Err(Error::SignedDensity(min));
    }
    let p = density.poly();
    let product = psi.mul(p)?;
    let psi_norm_sqr = psi.conj().mul(psi)?.mul(p)?.haar_integral().re;
    let mass = density.total_mass();
    // Tiny negatives from roundoff are clamped; the gate above has already
    // vouched for nonnegativity.
    let bound = psi_norm_sqr.max(0.0).sqrt() * mass.max(0.0).sqrt() + L2_SLACK;
    Ok(product.coeffs().values().all(|c| c.norm() <= bound))
}
