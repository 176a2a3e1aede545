//! The loop transform as an inductive limit of level Fourier transforms.
//!
//! A [`CylinderFunction`] lives on the torus of one level; a [`LoopState`]
//! is a finitely supported function on the ambient hoop lattice with the
//! counting-measure ℓ² structure. Including a cylinder function into a finer
//! level pushes its Fourier coefficients forward along the refinement
//! matrix, an exact and isometric index relabeling; the loop transform
//! embeds coefficients all the way into the hoop lattice via the level
//! basis. Every map here is coefficient surgery — the floating-point values
//! are moved, never recomputed — which is why the round-trip identities in
//! the tests hold exactly and not merely to a tolerance.

use num_complex::Complex64;
use std::collections::BTreeMap;

use crate::basis::GeneratorBasis;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::harmonics::{CoeffFunction, TrigPoly, PRUNE_TOL};
use crate::levels::{
    join_levels, level_from_generators, refinement_matrix, Level, RefinementMatrix,
};

/// A trigonometric polynomial on the torus coordinatized by a level: the
/// concrete form of an L² element at a finite stage of the limit.
#[derive(Debug, Clone, PartialEq)]
pub struct CylinderFunction {
    level: Level,
    poly: TrigPoly,
}

impl CylinderFunction {
    /// The polynomial's dimension must equal the level's rank.
    pub fn new(level: Level, poly: TrigPoly) -> Result<Self> {
        if poly.dim() != level.rank() {
            return Err(Error::DimMismatch {
                expected: level.rank(),
                found: poly.dim(),
            });
        }
        Ok(CylinderFunction { level, poly })
    }

    /// The zero function, placed at the trivial level.
    pub fn zero(ambient: usize) -> Self {
        CylinderFunction {
            level: Level::trivial(ambient),
            poly: TrigPoly::zero(0),
        }
    }

    /// The constant function `value`, placed at the trivial level.
    pub fn constant(ambient: usize, value: Complex64) -> Self {
        CylinderFunction {
            level: Level::trivial(ambient),
            poly: TrigPoly::constant(0, value),
        }
    }

    pub fn level(&self) -> &Level {
        &self.level
    }

    pub fn poly(&self) -> &TrigPoly {
        &self.poly
    }

    pub fn ambient(&self) -> usize {
        self.level.ambient()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.poly.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.poly.norm()
    }

    /// Equality in the inductive limit: include both functions into the
    /// join of their levels and compare coefficients there.
    pub fn equivalent(&self, other: &CylinderFunction, tol: f64) -> Result<bool> {
        if self.ambient() != other.ambient() {
            return Err(Error::DimMismatch {
                expected: self.ambient(),
                found: other.ambient(),
            });
        }
        let common = join_levels(&self.level, &other.level)?;
        let a = include_function(self, &common)?;
        let b = include_function(other, &common)?;
        Ok(a.poly()
            .fourier()
            .max_distance(&b.poly().fourier())?
            <= tol)
    }
}

/// A finitely supported function on the hoop lattice `Z^ambient` — the
/// image side of the loop transform, with counting-measure ℓ² pairing.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopState {
    ambient: usize,
    support: BTreeMap<Vec<i64>, Complex64>,
}

impl LoopState {
    pub fn zero(ambient: usize) -> Self {
        LoopState {
            ambient,
            support: BTreeMap::new(),
        }
    }

    /// Builds a state from `(hoop, mass)` pairs, summing duplicates and
    /// pruning masses below the support threshold.
    pub fn new<I>(ambient: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i64>, Complex64)>,
    {
        let mut support = BTreeMap::new();
        for (h, c) in entries {
            if h.len() != ambient {
                return Err(Error::DimMismatch {
                    expected: ambient,
                    found: h.len(),
                });
            }
            merge_mass(&mut support, h, c);
        }
        Ok(LoopState { ambient, support })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn support(&self) -> &BTreeMap<Vec<i64>, Complex64> {
        &self.support
    }

    pub fn value(&self, hoop: &[i64]) -> Complex64 {
        self.support.get(hoop).copied().unwrap_or(Complex64::ZERO)
    }

    pub fn support_size(&self) -> usize {
        self.support.len()
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.support.values().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn inner_product(&self, other: &LoopState) -> Result<Complex64> {
        if self.ambient != other.ambient {
            return Err(Error::DimMismatch {
                expected: self.ambient,
                found: other.ambient,
            });
        }
        let mut acc = Complex64::ZERO;
        for (h, c) in &self.support {
            acc += c.conj() * other.value(h);
        }
        Ok(acc)
    }

    /// Largest per-hoop discrepancy over the union of supports.
    pub fn max_distance(&self, other: &LoopState) -> Result<f64> {
        if self.ambient != other.ambient {
            return Err(Error::DimMismatch {
                expected: self.ambient,
                found: other.ambient,
            });
        }
        let mut worst = 0.0f64;
        for h in self.support.keys().chain(other.support.keys()) {
            worst = worst.max((self.value(h) - other.value(h)).norm());
        }
        Ok(worst)
    }

    /// Relocates every mass along an integer matrix: `h ↦ K·h`. Used to
    /// carry loop states into the edge lattice for path comparisons.
    pub fn pushforward(&self, matrix: &RefinementMatrix) -> Result<LoopState> {
        if matrix.col_count() != self.ambient {
            return Err(Error::DimMismatch {
                expected: self.ambient,
                found: matrix.col_count(),
            });
        }
        let mut support = BTreeMap::new();
        for (h, c) in &self.support {
            merge_mass(&mut support, matrix.apply(h)?, *c);
        }
        Ok(LoopState {
            ambient: matrix.row_count(),
            support,
        })
    }
}

fn merge_mass(map: &mut BTreeMap<Vec<i64>, Complex64>, key: Vec<i64>, value: Complex64) {
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

/// Pushes coefficient indices forward along a refinement matrix. The matrix
/// has full column rank, so distinct indices stay distinct and the move is
/// an exact isometry.
fn pushforward_coeffs(
    values: &BTreeMap<Vec<i64>, Complex64>,
    matrix: &RefinementMatrix,
) -> Result<BTreeMap<Vec<i64>, Complex64>> {
    let mut out = BTreeMap::new();
    for (m, c) in values {
        let moved = matrix.apply(m)?;
        debug_assert!(
            !out.contains_key(&moved),
            "full-column-rank pushforward cannot collide"
        );
        merge_mass(&mut out, moved, *c);
    }
    Ok(out)
}

/// Includes a cylinder function into a finer level: the coefficient at `m`
/// moves to `K·m`, where `K` expresses the function's level inside `fine`.
/// On the function side this is precomposition with the torus projection,
/// so point evaluations satisfy `include(ψ)(θ') = ψ(Kᵀ·θ')`.
pub fn include_function(psi: &CylinderFunction, fine: &Level) -> Result<CylinderFunction> {
    let Some(k) = refinement_matrix(psi.level(), fine)? else {
        return Err(Error::NotASublevel);
    };
    let values = pushforward_coeffs(psi.poly().coeffs(), &k)?;
    let poly = TrigPoly::from_coeffs(fine.rank(), values)?;
    CylinderFunction::new(fine.clone(), poly)
}

/// The coefficient-side inclusion: the unique map that makes the square
/// `fourier ∘ include_function = include_coeffs ∘ fourier` commute, namely
/// the same index pushforward `m ↦ K·m`.
pub fn include_coeffs(
    coeffs: &CoeffFunction,
    coarse: &Level,
    fine: &Level,
) -> Result<CoeffFunction> {
    if coeffs.dim() != coarse.rank() {
        return Err(Error::DimMismatch {
            expected: coarse.rank(),
            found: coeffs.dim(),
        });
    }
    let Some(k) = refinement_matrix(coarse, fine)? else {
        return Err(Error::NotASublevel);
    };
    let values = pushforward_coeffs(coeffs.values(), &k)?;
    CoeffFunction::from_values(fine.rank(), values)
}

/// Both paths around the inclusion square, and the largest coefficient
/// discrepancy between them. Index arithmetic is exact, so the residual is
/// genuinely zero; the contract tolerance (1e-12) exists for the sweeps.
pub fn verify_diagram(psi: &CylinderFunction, fine: &Level) -> Result<f64> {
    let through_functions = include_function(psi, fine)?.poly().fourier();
    let through_coeffs = include_coeffs(&psi.poly().fourier(), psi.level(), fine)?;
    through_functions.max_distance(&through_coeffs)
}

fn state_from_cylinder(psi: &CylinderFunction) -> Result<LoopState> {
    let mut support = BTreeMap::new();
    for (m, c) in psi.poly().coeffs() {
        merge_mass(&mut support, psi.level().apply(m)?, *c);
    }
    Ok(LoopState {
        ambient: psi.ambient(),
        support,
    })
}

/// The loop transform ℒ: sends the coefficient at torus frequency `m` to a
/// mass at the hoop `B·m`, where `B` is the level basis. Characters of the
/// level land on their own hoops — Wilson functions become point masses —
/// and the map is unitary onto finitely supported states once levels are
/// joined. The generator basis pins the ambient lattice to a graph: its
/// rank must match.
pub fn loop_transform(psi: &CylinderFunction, basis: &GeneratorBasis) -> Result<LoopState> {
    if basis.rank() != psi.ambient() {
        return Err(Error::DimMismatch {
            expected: basis.rank(),
            found: psi.ambient(),
        });
    }
    state_from_cylinder(psi)
}

/// The inverse loop transform: the support hoops generate a level (with its
/// canonical basis), and each mass becomes the coefficient of the character
/// at that hoop's coordinates. Empty states produce the zero function at
/// the trivial level. `loop_transform ∘ inverse_transform` is the identity
/// exactly — every coefficient is copied, never recomputed.
pub fn inverse_transform(state: &LoopState) -> Result<CylinderFunction> {
    let hoops: Vec<Vec<i64>> = state.support.keys().cloned().collect();
    let level = level_from_generators(state.ambient, &hoops)?;
    let mut coeffs = Vec::with_capacity(state.support.len());
    for (h, c) in &state.support {
        let coords = level
            .coordinates_of(h)?
            .expect("support hoops generate the level");
        coeffs.push((coords, *c));
    }
    let poly = TrigPoly::from_coeffs(level.rank(), coeffs)?;
    CylinderFunction::new(level, poly)
}

/// Inner product in the inductive limit: include both functions into the
/// join of their levels and pair them there. Independent of the common
/// refinement used, because inclusions are isometric.
pub fn cylinder_inner_product(
    psi: &CylinderFunction,
    phi: &CylinderFunction,
) -> Result<Complex64> {
    if psi.ambient() != phi.ambient() {
        return Err(Error::DimMismatch {
            expected: psi.ambient(),
            found: phi.ambient(),
        });
    }
    let common = join_levels(psi.level(), phi.level())?;
    let a = include_function(psi, &common)?;
    let b = include_function(phi, &common)?;
    a.poly().inner_product(b.poly())
}

/// The path-side transform: identical machinery with the edge lattice
/// `Z^{|E|}` in place of the hoop lattice, matching the torus `U(1)^E` of
/// connections-on-edges. The level must live in the graph's edge lattice.
pub fn path_transform(psi: &CylinderFunction, graph: &Graph) -> Result<LoopState> {
    if psi.ambient() != graph.edge_count() {
        return Err(Error::DimMismatch {
            expected: graph.edge_count(),
            found: psi.ambient(),
        });
    }
    state_from_cylinder(psi)
}
