#![allow(dead_code)]

use opmeasure::linalg::{diag, numerical_rank, real, Mat};
use opmeasure::measure::MatrixMeasure;
use opmeasure::sampling::{self, MeasureShape, SeededRng};
use rand::Rng;

pub fn s5() -> MatrixMeasure {
    MatrixMeasure::atomic(
        2,
        vec![(1.0, diag(&[1.0, 0.0])), (2.0, diag(&[0.0, 1.0])), (3.0, diag(&[1.0, 1.0]))],
    )
    .unwrap()
}

pub fn s5_povm() -> MatrixMeasure {
    s5().scaled(0.5).unwrap()
}

/// Random measure with `dim ≤ max_dim`, up to `max_atoms` atoms and `max_cells` grid cells,
/// never zero.
pub fn random_measure(rng: &mut SeededRng, max_dim: usize, max_atoms: usize, max_cells: usize) -> MatrixMeasure {
    let dim = rng.random_range(1..=max_dim);
    let atoms = rng.random_range(0..=max_atoms);
    let min_cells = usize::from(atoms == 0);
    let cells = rng.random_range(min_cells..=max_cells.max(min_cells));
    sampling::random_measure(rng, MeasureShape { dim, atoms, cells }).unwrap()
}

pub fn random_atomic(rng: &mut SeededRng, max_dim: usize, max_atoms: usize) -> MatrixMeasure {
    let dim = rng.random_range(1..=max_dim);
    let atoms = rng.random_range(1..=max_atoms);
    sampling::random_measure(rng, MeasureShape { dim, atoms, cells: 0 }).unwrap()
}

/// Determinant by cofactor expansion, independent of any factorization.
pub fn cofactor_det(m: &Mat) -> num_complex::Complex64 {
    let n = m.nrows();
    if n == 0 {
        return num_complex::Complex64::new(1.0, 0.0);
    }
    if n == 1 {
        return m[(0, 0)];
    }
    let mut total = num_complex::Complex64::new(0.0, 0.0);
    for j in 0..n {
        let minor = m.clone().remove_row(0).remove_column(j);
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        total += m[(0, j)] * cofactor_det(&minor) * sign;
    }
    total
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

pub fn submatrix(m: &Mat, rows: &[usize], cols: &[usize]) -> Mat {
    Mat::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

/// Rank from a Gram–Schmidt sweep over the columns, with absolute cutoff `eps · max column norm`.
pub fn gram_schmidt_rank(m: &Mat, eps: f64) -> usize {
    let scale = (0..m.ncols()).map(|j| m.column(j).norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0;
    }
    let mut basis: Vec<opmeasure::linalg::Vector> = Vec::new();
    for j in 0..m.ncols() {
        let mut v = m.column(j).into_owned();
        for _ in 0..2 {
            for b in &basis {
                let overlap = b.dotc(&v);
                v -= b * overlap;
            }
        }
        let norm = v.norm();
        if norm > eps * scale {
            basis.push(v / num_complex::Complex64::new(norm, 0.0));
        }
    }
    basis.len()
}

/// A measure spectrally equivalent to `a` (`kind == 0`), or one with a changed
/// rank, moved atom, or extra atom.
pub fn perturbed(r: &mut SeededRng, a: &MatrixMeasure, kind: usize) -> MatrixMeasure {
    let extra_dim = r.random_range(0..2);
    let dim = a.dim() + extra_dim;
    let mut atoms: Vec<(f64, Mat)> = a
        .atoms()
        .iter()
        .map(|atom| {
            let rank = numerical_rank(&atom.value, 1e-10);
            (atom.location, sampling::random_psd(r, dim, rank) * real(r.random_range(0.1..5.0)))
        })
        .collect();
    let target = r.random_range(0..atoms.len());
    match kind {
        1 => {
            let rank = numerical_rank(&atoms[target].1, 1e-10);
            let new_rank = if rank == dim { rank - 1 } else { rank + 1 };
            atoms[target].1 = sampling::random_psd(r, dim, new_rank);
        }
        2 => atoms[target].0 += 0.25,
        3 => atoms.push((100.0, sampling::random_psd(r, dim, 1))),
        _ => {}
    }
    MatrixMeasure::atomic(dim, atoms).unwrap()
}
