//! Seeded Gaussian sampling.
//!
//! Every randomized routine takes an explicit `u64` seed. Parallel lanes get
//! disjoint ChaCha streams of the same seed, so results do not depend on
//! scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::linalg::{self, c, real, Mat, Vector};
use crate::measure::{AcPart, Atom, MatrixCharge, MatrixMeasure};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for lane `lane` of a parallel loop seeded with `seed`.
pub fn lane_rng(seed: u64, lane: u64) -> SeededRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(lane);
    r
}

/// Standard complex normal: real and imaginary parts `N(0, 1/2)`, so `E|z|² = 1`.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> num_complex::Complex64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re * s, im * s)
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vector {
    Vector::from_fn(dim, |_, _| complex_normal(rng))
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Mat {
    Mat::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// Gaussian vector in the span of the orthonormal columns of `basis`.
pub fn gaussian_in_span<R: Rng + ?Sized>(rng: &mut R, basis: &Mat) -> Vector {
    basis * gaussian_vector(rng, basis.ncols())
}

/// Haar-distributed unitary via QR of a Gaussian matrix with phase correction.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Mat {
    let qr = gaussian_matrix(rng, n, n).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    q
}

/// `T = U diag(s) W` with `log s` uniform on `[0, ln max_cond]`, so `κ(T) ≤ max_cond`.
pub fn random_conditioned<R: Rng + ?Sized>(rng: &mut R, n: usize, max_cond: f64) -> Mat {
    let u = random_unitary(rng, n);
    let w = random_unitary(rng, n);
    let span = max_cond.max(1.0).ln();
    let s: Vec<f64> = (0..n).map(|_| (rng.random::<f64>() * span).exp()).collect();
    u * linalg::diag(&s) * w
}

/// `G G*` for a `n × rank` Gaussian `G`.
pub fn random_psd<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> Mat {
    let g = gaussian_matrix(rng, n, rank);
    linalg::hermitian_part(&(&g * g.adjoint()))
}

/// Hermitian matrix with i.i.d. Gaussian entries above the diagonal.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Mat {
    let g = gaussian_matrix(rng, n, n);
    (&g + g.adjoint()) * real(0.5)
}

/// Shape of a random measure: atoms at distinct integers `0..` and grid
/// cells on `[-n_cells, 0)` with unit spacing shifted by `0.5`.
#[derive(Clone, Copy, Debug)]
pub struct MeasureShape {
    pub dim: usize,
    pub atoms: usize,
    pub cells: usize,
}

fn random_ranks<R: Rng + ?Sized>(rng: &mut R, dim: usize, count: usize) -> Vec<usize> {
    (0..count).map(|_| rng.random_range(0..=dim)).collect()
}

fn layout<R: Rng + ?Sized>(rng: &mut R, shape: MeasureShape) -> (Vec<f64>, Vec<f64>) {
    let atoms = (0..shape.atoms).map(|k| k as f64 + rng.random::<f64>() * 0.5).collect();
    let grid = if shape.cells == 0 {
        Vec::new()
    } else {
        let mut t = -(shape.cells as f64) - 0.5;
        let mut grid = vec![t];
        for _ in 0..shape.cells {
            t += 0.25 + rng.random::<f64>();
            grid.push(t);
        }
        grid
    };
    (atoms, grid)
}

/// Random PSD measure with random ranks in `0..=dim` per cell. At least one
/// cell has full rank unless `shape.dim == 0`.
pub fn random_measure<R: Rng + ?Sized>(rng: &mut R, shape: MeasureShape) -> Result<MatrixMeasure> {
    let (locations, grid) = layout(rng, shape);
    let mut ranks = random_ranks(rng, shape.dim, shape.atoms + shape.cells);
    if let Some(r) = ranks.first_mut() {
        *r = shape.dim;
    }
    let atoms = locations
        .iter()
        .zip(&ranks)
        .map(|(&t, &r)| Atom::new(t, random_psd(rng, shape.dim, r)))
        .collect();
    let ac = if grid.is_empty() {
        None
    } else {
        let densities = ranks[shape.atoms..].iter().map(|&r| random_psd(rng, shape.dim, r)).collect();
        Some(AcPart::new(grid, densities)?)
    };
    MatrixMeasure::new(shape.dim, atoms, ac)
}

/// Random atomic POVM: random PSD atoms normalized by `S^{-1/2} (·) S^{-1/2}`.
pub fn random_povm<R: Rng + ?Sized>(rng: &mut R, dim: usize, atoms: usize) -> Result<MatrixMeasure> {
    let raw: Vec<Mat> = (0..atoms)
        .map(|k| {
            let rank = if k == 0 { dim } else { rng.random_range(1..=dim) };
            random_psd(rng, dim, rank)
        })
        .collect();
    let total = raw.iter().fold(Mat::zeros(dim, dim), |acc, a| acc + a);
    let (values, vectors) = linalg::hermitian_eigen(&total);
    let inv_root = &vectors * linalg::diag(&values.iter().map(|v| 1.0 / v.sqrt()).collect::<Vec<_>>()) * vectors.adjoint();
    MatrixMeasure::atomic(
        dim,
        raw.iter()
            .enumerate()
            .map(|(k, a)| (k as f64 + 1.0, &inv_root * a * &inv_root))
            .collect(),
    )
}

/// Random Hermitian charge on the layout of [`random_measure`].
pub fn random_charge<R: Rng + ?Sized>(rng: &mut R, shape: MeasureShape) -> Result<MatrixCharge> {
    let (locations, grid) = layout(rng, shape);
    let atoms = locations.iter().map(|&t| Atom::new(t, random_hermitian(rng, shape.dim))).collect();
    let ac = if grid.is_empty() {
        None
    } else {
        let densities = (0..shape.cells).map(|_| random_hermitian(rng, shape.dim)).collect();
        Some(AcPart::new(grid, densities)?)
    };
    MatrixCharge::new(shape.dim, atoms, ac)
}
