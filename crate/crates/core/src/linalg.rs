//! Dense complex linear algebra used by every other module.
//!
//! All flattening is row-major. SVD and Hermitian eigendecomposition come
//! from `nalgebra`; rank decisions, truncation and kernel extraction are done
//! here so the tolerance semantics stay in one place.

use nalgebra::{DMatrix, DVector, RowDVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type ComplexMatrix = DMatrix<C64>;
pub type ComplexVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Numerical thresholds shared by rank, positivity and residual checks.
///
/// `rank_tol` is relative to the largest singular value, `psd_tol` relative
/// to the trace of the matrix being tested, `residual_tol` is an absolute
/// Frobenius norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub rank_tol: f64,
    pub psd_tol: f64,
    pub residual_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rank_tol: 1e-10,
            psd_tol: 1e-9,
            residual_tol: 1e-9,
        }
    }
}

impl Tolerance {
    pub fn new(rank_tol: f64, psd_tol: f64, residual_tol: f64) -> Result<Self> {
        for (name, v) in [
            ("rank_tol", rank_tol),
            ("psd_tol", psd_tol),
            ("residual_tol", residual_tol),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidTolerance(format!(
                    "{name} must be strictly positive, got {v}"
                )));
            }
        }
        Ok(Self {
            rank_tol,
            psd_tol,
            residual_tol,
        })
    }

    /// Smallest eigenvalue still accepted as non-negative for a matrix of
    /// the given trace.
    pub fn psd_floor(&self, trace: f64) -> f64 {
        -self.psd_tol * trace.abs()
    }
}

/// Builds a matrix from row-major entries, rejecting NaN/Inf.
pub fn from_row_major(rows: usize, cols: usize, entries: &[C64]) -> Result<ComplexMatrix> {
    if entries.len() != rows * cols {
        return Err(Error::DimensionMismatch(format!(
            "{} entries for a {rows}x{cols} matrix",
            entries.len()
        )));
    }
    if entries
        .iter()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(Error::NonFinite);
    }
    Ok(DMatrix::from_row_slice(rows, cols, entries))
}

pub fn from_real_rows(rows: &[&[f64]]) -> ComplexMatrix {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    DMatrix::from_fn(r, c, |i, j| C64::new(rows[i][j], 0.0))
}

pub fn is_finite(a: &ComplexMatrix) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// `A[k, mu]` lands at position `k * cols + mu`.
pub fn row_flatten(a: &ComplexMatrix) -> RowDVector<C64> {
    RowDVector::from_iterator(a.nrows() * a.ncols(), a.transpose().iter().copied())
}

/// Transpose of [`row_flatten`].
pub fn col_flatten(a: &ComplexMatrix) -> ComplexVector {
    DVector::from_iterator(a.nrows() * a.ncols(), a.transpose().iter().copied())
}

/// Inverse of the flattening maps.
pub fn unflatten(v: &[C64], rows: usize, cols: usize) -> Result<ComplexMatrix> {
    if v.len() != rows * cols {
        return Err(Error::DimensionMismatch(format!(
            "cannot unflatten {} entries into {rows}x{cols}",
            v.len()
        )));
    }
    Ok(DMatrix::from_row_slice(rows, cols, v))
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

pub fn identity(d: usize) -> ComplexMatrix {
    DMatrix::identity(d, d)
}

/// SWAP on `C^d (x) C^d`: `|ij> -> |ji>`.
pub fn swap_matrix(d: usize) -> ComplexMatrix {
    let mut s = DMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            s[(i * d + j, j * d + i)] = ONE;
        }
    }
    s
}

pub fn hermitian_part(h: &ComplexMatrix) -> ComplexMatrix {
    (h + h.adjoint()).scale(0.5)
}

pub fn hermiticity_deviation(h: &ComplexMatrix) -> f64 {
    (h - h.adjoint()).norm()
}

pub fn trace(a: &ComplexMatrix) -> C64 {
    a.trace()
}

/// Singular values in descending order.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    if a.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = a
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

fn rank_cutoff(sigma_max: f64, tol: &Tolerance) -> f64 {
    tol.rank_tol * sigma_max
}

/// Number of singular values above `rank_tol * sigma_max`; zero for the zero matrix.
pub fn numeric_rank(a: &ComplexMatrix, tol: &Tolerance) -> usize {
    let s = singular_values(a);
    let Some(&smax) = s.first() else { return 0 };
    if smax == 0.0 {
        return 0;
    }
    let cut = rank_cutoff(smax, tol);
    s.iter().filter(|&&x| x > cut).count()
}

/// Moore-Penrose inverse from a truncated SVD.
pub fn pseudoinverse(a: &ComplexMatrix, tol: &Tolerance) -> ComplexMatrix {
    let (m, n) = a.shape();
    if a.is_empty() {
        return DMatrix::zeros(n, m);
    }
    let svd = a.clone().svd(true, true);
    let u = svd.u.expect("svd computed with u");
    let v_t = svd.v_t.expect("svd computed with v_t");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let mut pinv = DMatrix::zeros(n, m);
    if smax == 0.0 {
        return pinv;
    }
    let cut = rank_cutoff(smax, tol);
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s > cut {
            // v_i u_i^dag / s_i
            let v = v_t.row(i).adjoint();
            let u_row = u.column(i).adjoint();
            pinv += (v * u_row).unscale(s);
        }
    }
    pinv
}

/// Orthonormal basis of the null space, one vector per zero singular value.
pub fn kernel_basis(a: &ComplexMatrix, tol: &Tolerance) -> Vec<ComplexVector> {
    let (m, n) = a.shape();
    if n == 0 {
        return Vec::new();
    }
    // Thin SVD only yields min(m, n) right vectors; pad to square for the full basis.
    let padded = if m < n {
        let mut p = DMatrix::zeros(n, n);
        p.rows_mut(0, m).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("svd computed with v_t");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cut = rank_cutoff(smax, tol);
    let mut basis: Vec<(f64, ComplexVector)> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| smax == 0.0 || s <= cut)
        .map(|(i, &s)| {
            let mut v: ComplexVector = v_t.row(i).adjoint();
            fix_phase(&mut v);
            (s, v)
        })
        .collect();
    basis.sort_by(|x, y| x.0.total_cmp(&y.0));
    basis.into_iter().map(|(_, v)| v).collect()
}

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending, eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// `sum_i f(lambda_i) v_i v_i^dag`
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.vectors.nrows();
        let mut out = DMatrix::zeros(n, n);
        for (i, &l) in self.values.iter().enumerate() {
            let w = f(l);
            if w != 0.0 {
                let v = self.vectors.column(i);
                out += (v * v.adjoint()).scale(w);
            }
        }
        out
    }
}

/// Symmetrizes to `(H + H^dag) / 2` before solving.
pub fn hermitian_eigs(h: &ComplexMatrix) -> Result<HermitianEigen> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition of a non-square {}x{} matrix",
            h.nrows(),
            h.ncols()
        )));
    }
    if h.is_empty() {
        return Ok(HermitianEigen {
            values: Vec::new(),
            vectors: DMatrix::zeros(0, 0),
        });
    }
    let eig = SymmetricEigen::new(hermitian_part(h));
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let n = h.nrows();
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut v: ComplexVector = eig.eigenvectors.column(src).into_owned();
        fix_phase(&mut v);
        vectors.set_column(dst, &v);
    }
    Ok(HermitianEigen { values, vectors })
}

/// Like [`hermitian_eigs`] but refuses inputs that are not Hermitian within
/// `residual_tol`.
pub fn hermitian_eigs_strict(h: &ComplexMatrix, tol: &Tolerance) -> Result<HermitianEigen> {
    if h.is_square() {
        let deviation = hermiticity_deviation(h);
        if deviation > tol.residual_tol {
            return Err(Error::NotHermitian { deviation });
        }
    }
    hermitian_eigs(h)
}

pub fn eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eigs(h)?.values)
}

/// Rotates a vector so its first non-negligible component is real and positive.
pub fn fix_phase(v: &mut ComplexVector) {
    let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return;
    }
    if let Some(first) = v.iter().find(|z| z.norm() > 1e-8 * scale).copied() {
        let phase = first.conj() / first.norm();
        v.apply(|z| *z *= phase);
    }
}

/// `Tr_1` of an operator on `C^d1 (x) C^d2`.
pub fn partial_trace_first(m: &ComplexMatrix, d1: usize, d2: usize) -> ComplexMatrix {
    DMatrix::from_fn(d2, d2, |l, nu| {
        (0..d1).map(|k| m[(k * d2 + l, k * d2 + nu)]).sum()
    })
}

/// `Tr_2` of an operator on `C^d1 (x) C^d2`.
pub fn partial_trace_second(m: &ComplexMatrix, d1: usize, d2: usize) -> ComplexMatrix {
    DMatrix::from_fn(d1, d1, |k, mu| {
        (0..d2).map(|l| m[(k * d2 + l, mu * d2 + l)]).sum()
    })
}
