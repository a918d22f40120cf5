//! Minimal orthogonal (Naimark) dilations of atomic POVMs, compression of
//! resolutions of the identity, and the classical spectral data of a
//! Hermitian matrix.
//!
//! The dilation space is `⊕_i ran A_i^{1/2}`. Block `i` carries the
//! eigenvectors `u_j` of `A_i` with `λ_j > RANGE · λ_max`, and the isometry
//! sends `h` to the coordinates `√λ_j (h, u_j)`. This is the same carrier as
//! `L₂(Σ, H)` of an atomic measure, with `E` the spectral measure of the
//! multiplication operator.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, real, Mat};
use crate::measure::{CellId, MatrixMeasure};
use crate::multiplicity::{is_spectrally_equivalent, MultiplicityCell, MultiplicityFunction};
use crate::tol;

#[derive(Clone, Debug, Serialize)]
pub struct DilationResult {
    pub big_dim: usize,
    /// Orthogonal resolution of the identity on the dilation space.
    #[serde(skip)]
    pub e: MatrixMeasure,
    /// `big_dim × dim` isometry.
    #[serde(serialize_with = "crate::io::serialize_matrix")]
    pub v: Mat,
    pub minimal: bool,
    /// `(t_i, rank A_i)` for every atom of nonzero rank.
    pub blocks: Vec<(f64, usize)>,
}

impl DilationResult {
    /// `‖V*V − I‖_max`.
    pub fn isometry_deviation(&self) -> f64 {
        linalg::orthonormality_deviation(&self.v)
    }

    /// `max_i ‖V* E({t_i}) V − Σ({t_i})‖_max` over the atoms of `m`.
    pub fn reconstruction_deviation(&self, m: &MatrixMeasure) -> f64 {
        m.atoms()
            .iter()
            .map(|a| {
                let p = self.e.mass_on(&CellId::Atom(a.location));
                let back = self.v.adjoint() * p * &self.v;
                linalg::max_abs_diff(&back, &a.value)
            })
            .fold(0.0, f64::max)
    }
}

fn check_povm(m: &MatrixMeasure) -> Result<()> {
    if !m.is_atomic() {
        return Err(Error::NotAtomic);
    }
    let deviation = linalg::max_abs_diff(&m.total(), &linalg::identity(m.dim()));
    if deviation > tol::POVM_SUM {
        return Err(Error::NotPovm { deviation });
    }
    Ok(())
}

/// `span{E(δ) V h}` is the whole dilation space.
pub fn is_minimal(e: &MatrixMeasure, v: &Mat) -> bool {
    let big = v.nrows();
    let atoms = e.atoms();
    let mut stacked = Mat::zeros(big, atoms.len() * v.ncols());
    for (i, atom) in atoms.iter().enumerate() {
        stacked.view_mut((0, i * v.ncols()), (big, v.ncols())).copy_from(&(&atom.value * v));
    }
    linalg::numerical_rank(&stacked, tol::RANK) == big
}

/// The minimal orthogonal dilation of an atomic POVM.
pub fn naimark_dilate(m: &MatrixMeasure) -> Result<DilationResult> {
    check_povm(m)?;
    let dim = m.dim();
    let factors: Vec<(f64, Mat, Vec<f64>)> = m
        .atoms()
        .iter()
        .map(|a| {
            let (u, values) = linalg::psd_range(&a.value, tol::RANGE);
            (a.location, u, values)
        })
        .filter(|(_, _, values)| !values.is_empty())
        .collect();
    let big_dim: usize = factors.iter().map(|f| f.2.len()).sum();
    let mut v = Mat::zeros(big_dim, dim);
    let mut atoms = Vec::with_capacity(factors.len());
    let mut blocks = Vec::with_capacity(factors.len());
    let mut offset = 0;
    for (t, u, values) in &factors {
        let r = values.len();
        for (j, &lambda) in values.iter().enumerate() {
            let row = u.column(j).adjoint() * real(lambda.sqrt());
            v.row_mut(offset + j).copy_from(&row);
        }
        let projection = Mat::from_fn(big_dim, big_dim, |i, k| {
            if i == k && i >= offset && i < offset + r {
                linalg::ONE
            } else {
                linalg::ZERO
            }
        });
        atoms.push((*t, projection));
        blocks.push((*t, r));
        offset += r;
    }
    let e = MatrixMeasure::atomic(big_dim, atoms)?;
    let minimal = is_minimal(&e, &v);
    Ok(DilationResult {
        big_dim,
        e,
        v,
        minimal,
        blocks,
    })
}

/// Checks that `e` is atomic with mutually orthogonal projections summing to `I`.
pub fn check_resolution_of_identity(e: &MatrixMeasure) -> Result<()> {
    if !e.is_atomic() {
        return Err(Error::NotAtomic);
    }
    let atoms = e.atoms();
    for (i, a) in atoms.iter().enumerate() {
        let idem = linalg::max_abs_diff(&(&a.value * &a.value), &a.value);
        if idem > tol::POVM_SUM {
            return Err(Error::NotOrthogonal(format!(
                "value at {} is not a projection (deviation {idem:e})",
                CellId::Atom(a.location)
            )));
        }
        for b in &atoms[i + 1..] {
            let overlap = linalg::max_abs(&(&a.value * &b.value));
            if overlap > tol::POVM_SUM {
                return Err(Error::NotOrthogonal(format!(
                    "projections at {} and {} are not orthogonal",
                    a.location, b.location
                )));
            }
        }
    }
    let deviation = linalg::max_abs_diff(&e.total(), &linalg::identity(e.dim()));
    if deviation > tol::POVM_SUM {
        return Err(Error::NotOrthogonal(format!("projections sum to I only within {deviation:e}")));
    }
    Ok(())
}

/// `V* E(·) V` for a resolution of the identity `E` and an isometry `V`.
pub fn compress_resolution(e: &MatrixMeasure, v: &Mat) -> Result<MatrixMeasure> {
    check_resolution_of_identity(e)?;
    if v.nrows() != e.dim() {
        return Err(Error::DimensionMismatch {
            expected: e.dim(),
            found: v.nrows(),
        });
    }
    let deviation = linalg::orthonormality_deviation(v);
    if deviation > tol::ISOMETRY {
        return Err(Error::NotIsometry { deviation });
    }
    e.compress(v)
}

/// A POVM and its minimal dilation are spectrally equivalent.
pub fn verify_dilation_equivalence(m: &MatrixMeasure) -> Result<bool> {
    let d = naimark_dilate(m)?;
    Ok(is_spectrally_equivalent(m, &d.e))
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralPoint {
    pub value: f64,
    pub multiplicity: usize,
    #[serde(skip)]
    pub projection: Mat,
}

/// Eigenvalues of a Hermitian matrix grouped into spectral points, with
/// eigenprojections.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralDecomposition {
    pub dim: usize,
    pub points: Vec<SpectralPoint>,
}

impl SpectralDecomposition {
    /// `E_A` as an atomic measure.
    pub fn resolution_of_identity(&self) -> MatrixMeasure {
        MatrixMeasure::atomic(self.dim, self.points.iter().map(|p| (p.value, p.projection.clone())).collect())
            .expect("eigenprojections form a valid measure")
    }
}

/// Eigen-decomposition with eigenvalues within `EIGEN_CLUSTER · ‖A‖` merged.
pub fn spectral_decomposition(a: &Mat) -> Result<SpectralDecomposition> {
    spectral_decomposition_with(a, tol::EIGEN_CLUSTER)
}

pub fn spectral_decomposition_with(a: &Mat, cluster_tol: f64) -> Result<SpectralDecomposition> {
    let n = a.nrows();
    if n == 0 || a.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n.max(1),
            found: a.ncols(),
        });
    }
    let deviation = linalg::hermitian_deviation(a);
    if deviation > tol::HERMITIAN {
        return Err(Error::NotHermitian {
            cell: "matrix".into(),
            deviation,
        });
    }
    let (values, vectors) = linalg::hermitian_eigen(a);
    let norm = values.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let gap = cluster_tol * norm;
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for k in 0..n {
        match clusters.last_mut() {
            Some(cluster) if values[k] - values[*cluster.last().unwrap()] <= gap => cluster.push(k),
            _ => clusters.push(vec![k]),
        }
    }
    let points = clusters
        .into_iter()
        .map(|cluster| {
            let value = cluster.iter().map(|&k| values[k]).sum::<f64>() / cluster.len() as f64;
            let mut projection = Mat::zeros(n, n);
            for &k in &cluster {
                let u = vectors.column(k);
                projection += &u * u.adjoint();
            }
            SpectralPoint {
                value,
                multiplicity: cluster.len(),
                projection: linalg::hermitian_part(&projection),
            }
        })
        .collect();
    Ok(SpectralDecomposition { dim: n, points })
}

/// `E_A`.
pub fn resolution_of_identity(a: &Mat) -> Result<MatrixMeasure> {
    Ok(spectral_decomposition(a)?.resolution_of_identity())
}

/// Eigenspace dimensions per spectral point, as a multiplicity function
/// over the atoms of `E_A` (weights are the atom traces).
pub fn classical_multiplicity(a: &Mat) -> Result<MultiplicityFunction> {
    let sd = spectral_decomposition(a)?;
    Ok(MultiplicityFunction::from_cells(
        sd.dim,
        sd.points
            .iter()
            .map(|p| MultiplicityCell {
                cell: CellId::Atom(p.value),
                weight: p.multiplicity as f64,
                multiplicity: p.multiplicity,
            })
            .collect(),
    ))
}

/// `span{E_A(δ) L} = H`, tested as the rank of `[P_λ l]` over spectral
/// points `λ` and basis vectors `l`.
pub fn is_cyclic(a: &Mat, l_basis: &Mat) -> Result<bool> {
    let sd = spectral_decomposition(a)?;
    if l_basis.nrows() != sd.dim {
        return Err(Error::DimensionMismatch {
            expected: sd.dim,
            found: l_basis.nrows(),
        });
    }
    linalg::check_orthonormal(l_basis, tol::ORTHONORMAL)?;
    let k = l_basis.ncols();
    let mut stacked = Mat::zeros(sd.dim, sd.points.len() * k);
    for (i, p) in sd.points.iter().enumerate() {
        stacked.view_mut((0, i * k), (sd.dim, k)).copy_from(&(&p.projection * l_basis));
    }
    Ok(linalg::numerical_rank(&stacked, tol::RANK) == sd.dim)
}
