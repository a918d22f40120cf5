//! Dense complex linear algebra used throughout the crate.
//!
//! Everything is built on `nalgebra` with `Complex64` entries. Hermitian
//! inputs go through `SymmetricEigen`; ranks and trace norms of general
//! matrices go through the SVD.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

pub type Mat = DMatrix<Complex64>;
pub type Vector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn real(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Build a complex matrix from real row-major data.
pub fn real_matrix(rows: usize, cols: usize, data: &[f64]) -> Mat {
    assert_eq!(data.len(), rows * cols, "real_matrix: wrong data length");
    Mat::from_fn(rows, cols, |i, j| real(data[i * cols + j]))
}

pub fn real_vector(data: &[f64]) -> Vector {
    Vector::from_iterator(data.len(), data.iter().map(|&x| real(x)))
}

pub fn diag(values: &[f64]) -> Mat {
    let n = values.len();
    Mat::from_fn(n, n, |i, j| if i == j { real(values[i]) } else { ZERO })
}

pub fn identity(n: usize) -> Mat {
    Mat::identity(n, n)
}

pub fn zeros(n: usize) -> Mat {
    Mat::zeros(n, n)
}

/// Largest entrywise modulus.
pub fn max_abs(m: &Mat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &Mat, b: &Mat) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn is_finite(m: &Mat) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// `y* A x`, the inner product `(Ax, y)`.
pub fn form(a: &Mat, x: &Vector, y: &Vector) -> Complex64 {
    (a * x).dotc(y).conj()
}

/// `(Ax, x)` for Hermitian `A`; the imaginary part is roundoff.
pub fn quadratic_form(a: &Mat, x: &Vector) -> f64 {
    form(a, x, x).re
}

/// Deviation from Hermiticity relative to the Frobenius norm.
pub fn hermitian_deviation(m: &Mat) -> f64 {
    let scale = m.norm();
    if scale == 0.0 {
        return 0.0;
    }
    (m - m.adjoint()).norm() / scale
}

/// Symmetrize `(M + M*)/2`.
pub fn hermitian_part(m: &Mat) -> Mat {
    (m + m.adjoint()) * real(0.5)
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(m: &Mat) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(hermitian_part(m)).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Eigen-decomposition `(λ, U)` of a Hermitian matrix, eigenvalues ascending
/// and eigenvectors as the matching columns of `U`.
pub fn hermitian_eigen(m: &Mat) -> (Vec<f64>, Mat) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), Mat::zeros(0, 0));
    }
    let eig = SymmetricEigen::new(hermitian_part(m));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = Mat::from_fn(n, n, |r, col| eig.eigenvectors[(r, order[col])]);
    (values, vectors)
}

/// Spectral norm of a Hermitian matrix.
pub fn hermitian_norm(m: &Mat) -> f64 {
    hermitian_eigenvalues(m).iter().map(|x| x.abs()).fold(0.0, f64::max)
}

/// Singular values, descending.
pub fn singular_values(m: &Mat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Number of singular values above `rel_tol * max(σ_max, 1)`.
pub fn numerical_rank(m: &Mat, rel_tol: f64) -> usize {
    let sv = singular_values(m);
    let top = sv.first().copied().unwrap_or(0.0);
    let cutoff = rel_tol * top.max(1.0);
    sv.iter().filter(|&&s| s > cutoff).count()
}

/// Schatten-1 norm via the SVD.
pub fn trace_norm(m: &Mat) -> f64 {
    singular_values(m).iter().sum()
}

/// Schatten-1 norm of a Hermitian matrix via absolute eigenvalues.
pub fn trace_norm_hermitian(m: &Mat) -> f64 {
    hermitian_eigenvalues(m).iter().map(|x| x.abs()).sum()
}

pub fn trace_real(m: &Mat) -> f64 {
    m.trace().re
}

/// Positive and negative parts `M = M₊ − M₋` from the eigen-split.
pub fn hermitian_split(m: &Mat) -> (Mat, Mat) {
    let (values, vectors) = hermitian_eigen(m);
    let n = m.nrows();
    let mut pos = Mat::zeros(n, n);
    let mut neg = Mat::zeros(n, n);
    for (k, &lambda) in values.iter().enumerate() {
        let u = vectors.column(k);
        let outer = &u * u.adjoint();
        if lambda > 0.0 {
            pos += outer * real(lambda);
        } else if lambda < 0.0 {
            neg += outer * real(-lambda);
        }
    }
    (hermitian_part(&pos), hermitian_part(&neg))
}

/// Principal square root of a positive semidefinite matrix; negative
/// roundoff eigenvalues are clamped to zero.
pub fn psd_sqrt(m: &Mat) -> Mat {
    let (values, vectors) = hermitian_eigen(m);
    let n = m.nrows();
    let mut root = Mat::zeros(n, n);
    for (k, &lambda) in values.iter().enumerate() {
        if lambda > 0.0 {
            let u = vectors.column(k);
            root += (&u * u.adjoint()) * real(lambda.sqrt());
        }
    }
    root
}

/// Eigenpairs of a PSD matrix with `λ > rel_tol * λ_max`: an orthonormal
/// basis `U` of `ran A^{1/2}` (columns) and the retained eigenvalues.
pub fn psd_range(a: &Mat, rel_tol: f64) -> (Mat, Vec<f64>) {
    let (values, vectors) = hermitian_eigen(a);
    let top = values.last().copied().unwrap_or(0.0);
    if top <= 0.0 {
        return (Mat::zeros(a.nrows(), 0), Vec::new());
    }
    let keep: Vec<usize> = (0..values.len()).rev().filter(|&k| values[k] > rel_tol * top).collect();
    let basis = Mat::from_fn(a.nrows(), keep.len(), |r, col| vectors[(r, keep[col])]);
    (basis, keep.iter().map(|&k| values[k]).collect())
}

/// Reciprocal condition number `σ_min / σ_max` (zero for the zero matrix).
pub fn rcond(m: &Mat) -> f64 {
    let sv = singular_values(m);
    match (sv.first(), sv.last()) {
        (Some(&top), Some(&bottom)) if top > 0.0 => bottom / top,
        _ => 0.0,
    }
}

/// Square and numerically invertible, or an error.
pub fn check_invertible(t: &Mat, dim: usize) -> Result<()> {
    if t.nrows() != dim || t.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: t.nrows().max(t.ncols()),
        });
    }
    let rc = rcond(t);
    if !(rc > tol::SINGULAR_RCOND) {
        return Err(Error::Singular { rcond: rc });
    }
    Ok(())
}

/// Max-entry deviation of `B* B` from the identity.
pub fn orthonormality_deviation(basis: &Mat) -> f64 {
    let gram = basis.adjoint() * basis;
    max_abs_diff(&gram, &identity(basis.ncols()))
}

pub fn check_orthonormal(basis: &Mat, tol: f64) -> Result<()> {
    let deviation = orthonormality_deviation(basis);
    if deviation > tol {
        return Err(Error::NotOrthonormal { deviation });
    }
    Ok(())
}

/// Stack vectors as the columns of a matrix.
pub fn columns(vectors: &[Vector], dim: usize) -> Mat {
    let mut m = Mat::zeros(dim, vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        m.set_column(j, v);
    }
    m
}

/// Orthonormal basis of the span of the columns, by SVD with the crate's
/// rank rule.
pub fn orthonormal_range(m: &Mat, rel_tol: f64) -> Mat {
    if m.ncols() == 0 {
        return Mat::zeros(m.nrows(), 0);
    }
    let rank = numerical_rank(m, rel_tol);
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("svd requested u");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    Mat::from_fn(m.nrows(), rank, |r, col| u[(r, order[col])])
}

/// Orthonormal basis of the kernel of `m`.
pub fn kernel(m: &Mat, rel_tol: f64) -> Mat {
    let n = m.ncols();
    if m.nrows() == 0 {
        return identity(n);
    }
    // ker M = ker M*M, whose eigenvectors with (numerically) zero eigenvalue span it
    let gram = m.adjoint() * m;
    let (values, vectors) = hermitian_eigen(&gram);
    let top = values.last().copied().unwrap_or(0.0).max(0.0);
    let cutoff = (rel_tol * top.sqrt().max(1.0)).powi(2);
    let keep: Vec<usize> = (0..n).filter(|&k| values[k] <= cutoff).collect();
    Mat::from_fn(n, keep.len(), |r, col| vectors[(r, keep[col])])
}

/// Kronecker product.
pub fn kron(a: &Mat, b: &Mat) -> Mat {
    a.kronecker(b)
}
