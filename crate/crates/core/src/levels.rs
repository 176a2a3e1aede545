//! Finitely generated sublattices of the hoop lattice, with exact integer
//! linear algebra.
//!
//! A [`Level`] is a sublattice of `Z^n` carrying a chosen *ordered* basis —
//! order matters because the basis coordinatizes a torus. Membership,
//! refinement between nested levels, and joins all reduce to Hermite normal
//! form over arbitrary-precision integers: intermediate entries of an HNF
//! reduction can outgrow any fixed width even for small inputs, and silent
//! wraparound is the one failure mode this module refuses to have. Results
//! are converted back to `i64` with explicit overflow errors.

use num_bigint::{BigInt, Sign};

use crate::error::{Error, Result};

// ---------------------------------------------------------------------------
// arbitrary-precision core
// ---------------------------------------------------------------------------

fn to_big(vectors: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    vectors
        .iter()
        .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

fn to_i64(value: &BigInt) -> Result<i64> {
    i64::try_from(value).map_err(|_| Error::IntegerOverflow)
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    let q = a / b;
    let r = a % b;
    if r.sign() != Sign::NoSign && (r.sign() == Sign::Minus) != (b.sign() == Sign::Minus) {
        q - 1
    } else {
        q
    }
}

/// rows[i] -= q * rows[j]
fn row_sub(rows: &mut [Vec<BigInt>], i: usize, j: usize, q: &BigInt) {
    let source = rows[j].clone();
    for (target, s) in rows[i].iter_mut().zip(&source) {
        *target -= q * s;
    }
}

fn negate_row(rows: &mut [Vec<BigInt>], i: usize) {
    for x in rows[i].iter_mut() {
        *x = -std::mem::take(x);
    }
}

/// Row-style Hermite normal form with a recorded transform.
///
/// Returns `(h, u, pivots)` with `h = u · rows`, `u` unimodular, `h` in
/// echelon form whose pivots are positive and whose above-pivot entries are
/// reduced into `[0, pivot)`. `pivots[i]` is the pivot column of row `i`;
/// `pivots.len()` is the rank. The reduction is fully deterministic.
fn hermite_rows(
    mut rows: Vec<Vec<BigInt>>,
) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>, Vec<usize>) {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    let mut u: Vec<Vec<BigInt>> = (0..m)
        .map(|i| (0..m).map(|j| BigInt::from(u64::from(i == j))).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;

    for col in 0..n {
        if row == m {
            break;
        }
        // Euclidean elimination below `row` in this column.
        loop {
            let mut best: Option<usize> = None;
            for i in row..m {
                if rows[i][col].sign() != Sign::NoSign {
                    best = match best {
                        Some(j) if rows[j][col].magnitude() <= rows[i][col].magnitude() => {
                            Some(j)
                        }
                        _ => Some(i),
                    };
                }
            }
            let Some(p) = best else {
                break; // column is empty below; no pivot here
            };
            rows.swap(row, p);
            u.swap(row, p);
            let mut clean = true;
            for i in row + 1..m {
                if rows[i][col].sign() == Sign::NoSign {
                    continue;
                }
                let q = &rows[i][col] / &rows[row][col];
                if q.sign() != Sign::NoSign {
                    row_sub(&mut rows, i, row, &q);
                    row_sub(&mut u, i, row, &q);
                }
                if rows[i][col].sign() != Sign::NoSign {
                    clean = false; // a remainder survived; another round
                }
            }
            if clean {
                if rows[row][col].sign() == Sign::Minus {
                    negate_row(&mut rows, row);
                    negate_row(&mut u, row);
                }
                for i in 0..row {
                    let q = floor_div(&rows[i][col], &rows[row][col]);
                    if q.sign() != Sign::NoSign {
                        row_sub(&mut rows, i, row, &q);
                        row_sub(&mut u, i, row, &q);
                    }
                }
                pivots.push(col);
                row += 1;
                break;
            }
        }
    }
    (rows, u, pivots)
}

/// A prepared basis: HNF plus transform, ready to answer membership queries.
struct HermiteBasis {
    h: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    count: usize,
    ambient: usize,
}

impl HermiteBasis {
    fn new(vectors: &[Vec<i64>], ambient: usize) -> Self {
        let (h, u, pivots) = hermite_rows(to_big(vectors));
        HermiteBasis {
            h,
            u,
            pivots,
            count: vectors.len(),
            ambient,
        }
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Integer coordinates of `target` in the original vectors, or `None`
    /// if it lies outside the lattice. Requires an independent basis.
    fn solve(&self, target: &[i64]) -> Option<Vec<BigInt>> {
        debug_assert_eq!(self.rank(), self.count, "solve needs independence");
        let mut residual: Vec<BigInt> = target.iter().map(|&x| BigInt::from(x)).collect();
        let mut z = Vec::with_capacity(self.count);
        for (i, &p) in self.pivots.iter().enumerate() {
            let den = &self.h[i][p];
            if (&residual[p] % den).sign() != Sign::NoSign {
                return None;
            }
            let zi = &residual[p] / den;
            if zi.sign() != Sign::NoSign {
                for k in p..self.ambient {
                    let delta = &zi * &self.h[i][k];
                    residual[k] -= delta;
                }
            }
            z.push(zi);
        }
        if residual.iter().any(|x| x.sign() != Sign::NoSign) {
            return None;
        }
        // x = Uᵀ z : coordinates with respect to the *original* ordering.
        let x = (0..self.count)
            .map(|s| {
                let mut acc = BigInt::from(0);
                for (i, zi) in z.iter().enumerate() {
                    acc += zi * &self.u[i][s];
                }
                acc
            })
            .collect();
        Some(x)
    }
}

// ---------------------------------------------------------------------------
// public operations
// ---------------------------------------------------------------------------

/// True iff the vectors are Z-linearly independent (exact integer rank).
pub fn is_independent(vectors: &[Vec<i64>]) -> Result<bool> {
    let ambient = match vectors.first() {
        None => return Ok(true),
        Some(v) => v.len(),
    };
    for v in vectors {
        if v.len() != ambient {
            return Err(Error::DimMismatch {
                expected: ambient,
                found: v.len(),
            });
        }
    }
    Ok(HermiteBasis::new(vectors, ambient).rank() == vectors.len())
}

/// Solves `Σ_s x_s · basis[s] = target` over the integers. Returns the
/// unique solution, or `None` when `target` is outside the sublattice.
/// The basis must be independent; arithmetic is exact throughout.
pub fn hnf_solve(basis: &[Vec<i64>], target: &[i64]) -> Result<Option<Vec<i64>>> {
    let ambient = target.len();
    for v in basis {
        if v.len() != ambient {
            return Err(Error::DimMismatch {
                expected: ambient,
                found: v.len(),
            });
        }
    }
    let prepared = HermiteBasis::new(basis, ambient);
    if prepared.rank() != basis.len() {
        return Err(Error::DependentBasis);
    }
    match prepared.solve(target) {
        None => Ok(None),
        Some(big) => {
            let mut out = Vec::with_capacity(big.len());
            for value in &big {
                out.push(to_i64(value)?);
            }
            Ok(Some(out))
        }
    }
}

/// A finitely generated sublattice of `Z^ambient` with a chosen ordered
/// basis. The basis is independent by construction, so its size never
/// exceeds the ambient dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Level {
    ambient: usize,
    basis: Vec<Vec<i64>>,
}

impl Level {
    pub fn new(ambient: usize, basis: Vec<Vec<i64>>) -> Result<Self> {
        for v in &basis {
            if v.len() != ambient {
                return Err(Error::DimMismatch {
                    expected: ambient,
                    found: v.len(),
                });
            }
        }
        if !is_independent(&basis)? {
            return Err(Error::DependentBasis);
        }
        Ok(Level { ambient, basis })
    }

    /// The whole lattice `Z^ambient` with its standard basis.
    pub fn full(ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| {
                let mut v = vec![0i64; ambient];
                v[i] = 1;
                v
            })
            .collect();
        Level { ambient, basis }
    }

    /// The zero sublattice (empty basis).
    pub fn trivial(ambient: usize) -> Self {
        Level {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Number of basis vectors; the dimension of the torus this level
    /// coordinatizes.
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    /// The ambient vector with the given coordinates: `Σ_s coords[s]·basis[s]`.
    pub fn apply(&self, coords: &[i64]) -> Result<Vec<i64>> {
        if coords.len() != self.rank() {
            return Err(Error::DimMismatch {
                expected: self.rank(),
                found: coords.len(),
            });
        }
        let mut out = vec![0i64; self.ambient];
        for (c, v) in coords.iter().zip(&self.basis) {
            for (slot, x) in out.iter_mut().zip(v) {
                let term = (*c as i128) * (*x as i128) + (*slot as i128);
                *slot = i64::try_from(term).map_err(|_| Error::IntegerOverflow)?;
            }
        }
        Ok(out)
    }

    /// Coordinates of `vector` in this level's basis, if it belongs to the
    /// sublattice.
    pub fn coordinates_of(&self, vector: &[i64]) -> Result<Option<Vec<i64>>> {
        if vector.len() != self.ambient {
            return Err(Error::DimMismatch {
                expected: self.ambient,
                found: vector.len(),
            });
        }
        hnf_solve(&self.basis, vector)
    }

    /// The canonical (Hermite) basis of the same sublattice: positive
    /// pivots, reduced off-pivot entries. Level equality as *lattices* is
    /// equality of canonical bases.
    pub fn canonical_basis(&self) -> Result<Vec<Vec<i64>>> {
        let (h, _, pivots) = hermite_rows(to_big(&self.basis));
        let mut out = Vec::with_capacity(pivots.len());
        for row in h.iter().take(pivots.len()) {
            let mut v = Vec::with_capacity(self.ambient);
            for x in row {
                v.push(to_i64(x)?);
            }
            out.push(v);
        }
        Ok(out)
    }

    /// The same sublattice re-equipped with its canonical basis.
    pub fn canonicalized(&self) -> Result<Level> {
        Ok(Level {
            ambient: self.ambient,
            basis: self.canonical_basis()?,
        })
    }

    /// Whether two levels generate the same sublattice (basis order and
    /// choice notwithstanding).
    pub fn same_lattice(&self, other: &Level) -> Result<bool> {
        if self.ambient != other.ambient {
            return Ok(false);
        }
        Ok(self.canonical_basis()? == other.canonical_basis()?)
    }
}

/// The integer matrix expressing one level inside a finer one.
///
/// `entries` has one row per fine basis vector and one column per coarse
/// basis vector: column `s` gives the fine coordinates of coarse generator
/// `s`, so `fine_basis · K = coarse_basis` as matrices of column vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinementMatrix {
    entries: Vec<Vec<i64>>,
    cols: usize,
}

impl RefinementMatrix {
    /// Validates shape and full column rank (an inclusion of independent
    /// families can never collapse directions).
    pub fn new(entries: Vec<Vec<i64>>, cols: usize) -> Result<Self> {
        for row in &entries {
            if row.len() != cols {
                return Err(Error::DimMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
        }
        let columns: Vec<Vec<i64>> = (0..cols)
            .map(|s| entries.iter().map(|row| row[s]).collect())
            .collect();
        if !is_independent(&columns)? {
            return Err(Error::DependentBasis);
        }
        Ok(RefinementMatrix { entries, cols })
    }

    pub fn identity(n: usize) -> Self {
        let entries = (0..n)
            .map(|i| {
                let mut row = vec![0i64; n];
                row[i] = 1;
                row
            })
            .collect();
        RefinementMatrix { entries, cols: n }
    }

    pub fn row_count(&self) -> usize {
        self.entries.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        self.entries.len() == self.cols
            && self
                .entries
                .iter()
                .enumerate()
                .all(|(i, row)| row.iter().enumerate().all(|(j, &x)| x == i64::from(i == j)))
    }

    /// Matrix-vector product `K·m` with overflow checking.
    pub fn apply(&self, coords: &[i64]) -> Result<Vec<i64>> {
        if coords.len() != self.cols {
            return Err(Error::DimMismatch {
                expected: self.cols,
                found: coords.len(),
            });
        }
        self.entries
            .iter()
            .map(|row| {
                let acc: i128 = row
                    .iter()
                    .zip(coords)
                    .map(|(&a, &b)| (a as i128) * (b as i128))
                    .sum();
                i64::try_from(acc).map_err(|_| Error::IntegerOverflow)
            })
            .collect()
    }

    /// `self · inner`: the matrix of the composite refinement when `inner`
    /// runs first (two nested inclusions chained).
    pub fn compose(&self, inner: &RefinementMatrix) -> Result<RefinementMatrix> {
        if inner.row_count() != self.cols {
            return Err(Error::DimMismatch {
                expected: self.cols,
                found: inner.row_count(),
            });
        }
        let mut entries = Vec::with_capacity(self.entries.len());
        for row in &self.entries {
            let mut out_row = Vec::with_capacity(inner.cols);
            for s in 0..inner.cols {
                let acc: i128 = row
                    .iter()
                    .enumerate()
                    .map(|(r, &a)| (a as i128) * (inner.entries[r][s] as i128))
                    .sum();
                out_row.push(i64::try_from(acc).map_err(|_| Error::IntegerOverflow)?);
            }
            entries.push(out_row);
        }
        RefinementMatrix::new(entries, inner.cols)
    }
}

/// Expresses `coarse` inside `fine`: the matrix `K` with
/// `fine_basis · K = coarse_basis`, or `None` when some coarse generator
/// falls outside the fine sublattice. Functorial along chains.
pub fn refinement_matrix(coarse: &Level, fine: &Level) -> Result<Option<RefinementMatrix>> {
    if coarse.ambient() != fine.ambient() {
        return Err(Error::DimMismatch {
            expected: fine.ambient(),
            found: coarse.ambient(),
        });
    }
    let prepared = HermiteBasis::new(fine.basis(), fine.ambient());
    debug_assert_eq!(prepared.rank(), fine.rank());
    let mut columns = Vec::with_capacity(coarse.rank());
    for generator in coarse.basis() {
        match prepared.solve(generator) {
            None => return Ok(None),
            Some(col) => columns.push(col),
        }
    }
    let mut entries = vec![vec![0i64; coarse.rank()]; fine.rank()];
    for (s, col) in columns.iter().enumerate() {
        for (r, value) in col.iter().enumerate() {
            entries[r][s] = to_i64(value)?;
        }
    }
    Ok(Some(RefinementMatrix::new(entries, coarse.rank())?))
}

/// The level generated by an arbitrary family of vectors (dependencies and
/// zero vectors allowed), equipped with its canonical Hermite basis.
pub fn level_from_generators(ambient: usize, generators: &[Vec<i64>]) -> Result<Level> {
    for v in generators {
        if v.len() != ambient {
            return Err(Error::DimMismatch {
                expected: ambient,
                found: v.len(),
            });
        }
    }
    let (h, _, pivots) = hermite_rows(to_big(generators));
    let mut basis = Vec::with_capacity(pivots.len());
    for row in h.iter().take(pivots.len()) {
        let mut v = Vec::with_capacity(ambient);
        for x in row {
            v.push(to_i64(x)?);
        }
        basis.push(v);
    }
    Level::new(ambient, basis)
}

/// The smallest level containing both arguments: stack the two bases and
/// reduce to the canonical Hermite basis. Each input refines into the join.
pub fn join_levels(a: &Level, b: &Level) -> Result<Level> {
    if a.ambient() != b.ambient() {
        return Err(Error::DimMismatch {
            expected: a.ambient(),
            found: b.ambient(),
        });
    }
    let mut stacked = a.basis().to_vec();
    stacked.extend_from_slice(b.basis());
    level_from_generators(a.ambient(), &stacked)
}
