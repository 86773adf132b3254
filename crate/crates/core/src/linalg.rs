//! Dense complex matrix kernels for the small dimensions used throughout the
//! crate, plus deterministic orthonormal completion of partially specified
//! unitaries.
//!
//! Matrices are stored row-major. Residuals are measured with the entrywise
//! max-abs norm.

use std::fmt;
use std::ops::Deref;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Default tolerance on `max |U^dag U - I|` for a matrix to count as unitary.
pub const DEFAULT_UNITARITY_TOL: f64 = 1e-10;

/// Tolerance on pairwise orthonormality of the columns handed to
/// [`complete_to_unitary`].
pub const ORTHONORMAL_INPUT_TOL: f64 = 1e-10;

/// Candidates whose norm falls below this after projection are discarded
/// during completion.
const COMPLETION_KEEP_NORM: f64 = 1e-6;

/// Entries at or below this magnitude are treated as zero when fixing the
/// phase of completed columns.
const PHASE_ZERO_TOL: f64 = 1e-10;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(idx) = data
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite {
                row: idx / cols.max(1),
                col: idx % cols.max(1),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { ONE } else { ZERO })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Square diagonal matrix with the given diagonal.
    pub fn diagonal(diag: &[Complex64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |r, c| if r == c { diag[r] } else { ZERO })
    }

    /// Builds a matrix from real row slices. Panics on ragged input.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == n_cols), "ragged rows");
        Self::from_fn(n_rows, n_cols, |r, c| Complex64::new(rows[r][c], 0.0))
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<Complex64>]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, |c| c.len());
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::DimensionMismatch("columns of unequal length".into()));
        }
        let m = Self::from_fn(rows, cols, |r, c| columns[c][r]);
        Self::new(rows, cols, m.data)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: Complex64) {
        self.data[r * self.cols + c] = value;
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Complex64>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> Result<Complex64> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok((0..self.rows).map(|i| self.get(i, i)).sum())
    }

    pub fn mat_mul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        mat_mul(self, other)
    }

    /// `self^p` for a square matrix.
    pub fn pow(&self, p: usize) -> Result<ComplexMatrix> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut acc = Self::identity(self.rows);
        for _ in 0..p {
            acc = mat_mul(&acc, self)?;
        }
        Ok(acc)
    }

    /// Entrywise max-abs distance. Panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch"
        );
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |A^dag A - I|`, or infinity for non-square input.
    pub fn unitarity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let mut acc = ZERO;
                for r in 0..n {
                    acc += self.get(r, i).conj() * self.get(r, j);
                }
                if i == j {
                    acc -= ONE;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    /// Largest off-diagonal magnitude.
    pub fn off_diagonal_max(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.rows {
            for c in 0..self.cols {
                if r != c {
                    worst = worst.max(self.get(r, c).norm());
                }
            }
        }
        worst
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot apply {}x{} matrix to a vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c) * v[c]).sum())
            .collect())
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self.get(r, c);
                write!(f, "{:>9.5}{:+.5}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

pub fn mat_mul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut out = ComplexMatrix::zeros(a.rows, b.cols);
    for r in 0..a.rows {
        for k in 0..a.cols {
            let lhs = a.get(r, k);
            if lhs == ZERO {
                continue;
            }
            for c in 0..b.cols {
                out.data[r * b.cols + c] += lhs * b.get(k, c);
            }
        }
    }
    Ok(out)
}

pub fn dagger(a: &ComplexMatrix) -> ComplexMatrix {
    a.dagger()
}

pub fn trace(a: &ComplexMatrix) -> Result<Complex64> {
    a.trace()
}

/// `U ⊗ I_d` on the joint space with basis index `m * d + n`.
pub fn kron_with_identity(u: &ComplexMatrix, d: usize) -> ComplexMatrix {
    let n = u.rows() * d;
    let m = u.cols() * d;
    ComplexMatrix::from_fn(n, m, |r, c| {
        if r % d == c % d {
            u.get(r / d, c / d)
        } else {
            ZERO
        }
    })
}

/// `<a|b>`, conjugate-linear in the first slot.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `e^{2πi k/n}`, evaluated directly from the exponent.
pub fn root_of_unity(n: usize, k: i64) -> Complex64 {
    let k = k.rem_euclid(n as i64);
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64)
}

/// Square matrix with the unitarity contract `max |U^dag U - I| <= tol`.
#[derive(Clone, PartialEq)]
pub struct UnitaryMatrix(ComplexMatrix);

impl UnitaryMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(m, DEFAULT_UNITARITY_TOL)
    }

    pub fn with_tolerance(m: ComplexMatrix, tol: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NonSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let residual = m.unitarity_residual();
        if residual.is_nan() || residual > tol {
            return Err(Error::NotUnitary {
                residual,
                tolerance: tol,
            });
        }
        Ok(Self(m))
    }

    pub fn identity(d: usize) -> Self {
        Self(ComplexMatrix::identity(d))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_inner(self) -> ComplexMatrix {
        self.0
    }

    /// Products of unitaries are unitary; the result is re-checked at the
    /// default tolerance.
    pub fn compose(&self, other: &UnitaryMatrix) -> Result<UnitaryMatrix> {
        UnitaryMatrix::new(mat_mul(&self.0, &other.0)?)
    }

    pub fn dagger(&self) -> UnitaryMatrix {
        UnitaryMatrix(self.0.dagger())
    }

    pub fn conj(&self) -> UnitaryMatrix {
        UnitaryMatrix(self.0.conj())
    }
}

impl Deref for UnitaryMatrix {
    type Target = ComplexMatrix;

    fn deref(&self) -> &ComplexMatrix {
        &self.0
    }
}

impl fmt::Debug for UnitaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Unitary{:?}", self.0)
    }
}

/// Subtracts from `v` its projection on each of `basis` (assumed orthonormal),
/// one vector at a time.
fn project_out(v: &mut [Complex64], basis: &[Vec<Complex64>]) {
    for q in basis {
        let coeff = inner(q, v);
        for (x, y) in v.iter_mut().zip(q) {
            *x -= coeff * y;
        }
    }
}

fn normalize(v: &mut [Complex64]) -> f64 {
    let n = norm(v);
    if n > 0.0 {
        for x in v.iter_mut() {
            *x /= n;
        }
    }
    n
}

/// Max deviation of the Gram matrix of `cols` from the identity.
pub fn orthonormality_defect(cols: &[Vec<Complex64>]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..cols.len() {
        for j in i..cols.len() {
            let mut g = inner(&cols[i], &cols[j]);
            if i == j {
                g -= ONE;
            }
            worst = worst.max(g.norm());
        }
    }
    worst
}

/// Extends orthonormal columns to a `d x d` unitary whose leading columns are
/// the inputs.
///
/// The completion is deterministic: the canonical basis vectors `e_0..e_{d-1}`
/// are appended in index order and run through modified Gram-Schmidt (with one
/// re-orthogonalisation pass); a candidate is kept when its projected norm
/// exceeds `1e-6`, and each kept column is rotated so that its first nonzero
/// entry is real and positive. The given columns are re-orthonormalised in
/// place, so they move by at most the input defect (`<= 1e-10`).
pub fn complete_to_unitary(partial_columns: &[Vec<Complex64>], d: usize) -> Result<UnitaryMatrix> {
    if partial_columns.len() > d {
        return Err(Error::TooManyColumns {
            given: partial_columns.len(),
            dim: d,
        });
    }
    if let Some(bad) = partial_columns.iter().find(|c| c.len() != d) {
        return Err(Error::DimensionMismatch(format!(
            "column of length {} in dimension {d}",
            bad.len()
        )));
    }
    let defect = orthonormality_defect(partial_columns);
    if defect.is_nan() || defect > ORTHONORMAL_INPUT_TOL {
        return Err(Error::NotOrthonormal(defect));
    }

    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(d);
    for col in partial_columns {
        let mut v = col.clone();
        project_out(&mut v, &basis);
        normalize(&mut v);
        basis.push(v);
    }

    for e in 0..d {
        if basis.len() == d {
            break;
        }
        let mut v = vec![ZERO; d];
        v[e] = ONE;
        project_out(&mut v, &basis);
        if norm(&v) <= COMPLETION_KEEP_NORM {
            continue;
        }
        project_out(&mut v, &basis);
        normalize(&mut v);
        if let Some(lead) = v.iter().find(|z| z.norm() > PHASE_ZERO_TOL).copied() {
            let phase = lead.conj() / lead.norm();
            for x in v.iter_mut() {
                *x *= phase;
            }
        }
        basis.push(v);
    }
    debug_assert_eq!(basis.len(), d);

    UnitaryMatrix::with_tolerance(ComplexMatrix::from_columns(&basis)?, 1e-12)
}

/// Haar-random unitary from Gram-Schmidt on a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> UnitaryMatrix {
    loop {
        let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(d);
        let mut degenerate = false;
        for _ in 0..d {
            let mut v: Vec<Complex64> = (0..d)
                .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            project_out(&mut v, &basis);
            project_out(&mut v, &basis);
            if normalize(&mut v) < 1e-8 {
                degenerate = true;
                break;
            }
            basis.push(v);
        }
        if degenerate {
            continue;
        }
        let m = ComplexMatrix::from_columns(&basis).expect("finite gaussian columns");
        if let Ok(u) = UnitaryMatrix::new(m) {
            return u;
        }
    }
}

/// Random complex matrix with standard normal real and imaginary parts.
pub fn random_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}
