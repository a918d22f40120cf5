//! `L₂(Σ, H)` for cell-wise constant vector functions.
//!
//! For step functions the Riemann sums defining `(f, g)` are exact, so the
//! inner product is a finite sum over cells. The density form of the norm,
//! `∫ ‖Ψ_T^{1/2} T⁻¹ f‖² dρ`, is computed independently from `Ψ_T = dΣ_T/dρ`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, Mat, Vector, ZERO};
use crate::measure::{self, trace_measure, CellId, MatrixMeasure, ScalarMeasure};
use crate::sampling;
use crate::tol;

/// A vector function that is constant on each cell of a measure.
#[derive(Clone, Debug, PartialEq)]
pub struct StepVectorFunction {
    dim: usize,
    samples: BTreeMap<CellId, Vector>,
}

impl StepVectorFunction {
    pub fn new(dim: usize, samples: impl IntoIterator<Item = (CellId, Vector)>) -> Result<Self> {
        let samples: BTreeMap<CellId, Vector> = samples.into_iter().collect();
        if let Some(v) = samples.values().find(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.len(),
            });
        }
        Ok(StepVectorFunction { dim, samples })
    }

    /// The same vector on every cell of `m`.
    pub fn constant(m: &MatrixMeasure, v: &Vector) -> Result<Self> {
        Self::new(m.dim(), m.cells().into_iter().map(|c| (c.id, v.clone())))
    }

    /// `v` on the cells of `m` for which `on(cell)` holds, zero elsewhere.
    pub fn indicator(m: &MatrixMeasure, v: &Vector, on: impl Fn(&CellId) -> bool) -> Result<Self> {
        let zero = Vector::zeros(m.dim());
        Self::new(
            m.dim(),
            m.cells()
                .into_iter()
                .map(|c| (c.id, if on(&c.id) { v.clone() } else { zero.clone() })),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, id: &CellId) -> Option<&Vector> {
        self.samples.get(id)
    }

    pub fn samples(&self) -> impl Iterator<Item = (&CellId, &Vector)> {
        self.samples.iter()
    }

    pub fn sub(&self, other: &StepVectorFunction) -> Result<StepVectorFunction> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let zero = Vector::zeros(self.dim);
        let mut keys: Vec<CellId> = self.samples.keys().chain(other.samples.keys()).copied().collect();
        keys.sort();
        keys.dedup();
        Self::new(
            self.dim,
            keys.into_iter().map(|k| {
                let a = self.samples.get(&k).unwrap_or(&zero);
                let b = other.samples.get(&k).unwrap_or(&zero);
                (k, a - b)
            }),
        )
    }
}

/// Checks that `f` lives on the cells of `m` and returns its value on each
/// ρ-positive cell (zero on null cells where it is absent).
fn aligned<'a>(f: &'a StepVectorFunction, m: &MatrixMeasure, rho: &ScalarMeasure) -> Result<Vec<(CellId, Mat, Option<&'a Vector>)>> {
    if f.dim != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: f.dim,
        });
    }
    let cells = m.cells();
    if let Some(extra) = f.samples.keys().find(|k| !cells.iter().any(|c| &c.id == *k)) {
        return Err(Error::CellMismatch { cell: extra.to_string() });
    }
    let null_level = tol::NULL_CELL * rho.total();
    let mut out = Vec::with_capacity(cells.len());
    for cell in cells {
        let value = f.samples.get(&cell.id);
        if value.is_none() && rho.mass_on(&cell.id) > null_level {
            return Err(Error::CellMismatch { cell: cell.id.to_string() });
        }
        out.push((cell.id, cell.mass, value));
    }
    Ok(out)
}

/// `(f, g)_{L₂(Σ,H)} = Σ_cells (Σ(cell) f, g)`.
pub fn inner_product(f: &StepVectorFunction, g: &StepVectorFunction, m: &MatrixMeasure) -> Result<Complex64> {
    let rho = trace_measure(m);
    let fa = aligned(f, m, &rho)?;
    let ga = aligned(g, m, &rho)?;
    let mut total = ZERO;
    for ((_, mass, fv), (_, _, gv)) in fa.iter().zip(&ga) {
        if let (Some(fv), Some(gv)) = (fv, gv) {
            total += linalg::form(mass, fv, gv);
        }
    }
    Ok(total)
}

pub fn norm_squared(f: &StepVectorFunction, m: &MatrixMeasure) -> Result<f64> {
    Ok(inner_product(f, f, m)?.re)
}

/// `∫ ‖Ψ_T(t)^{1/2} T⁻¹ f(t)‖² dρ(t)` with `Ψ_T = d(T*ΣT)/dρ` and `ρ` the
/// trace measure of `m`.
pub fn norm_via_density(f: &StepVectorFunction, m: &MatrixMeasure, t: &Mat) -> Result<f64> {
    norm_via_density_with(f, m, t, &trace_measure(m))
}

/// As [`norm_via_density`] against a caller-chosen `ρ ~ Σ`.
pub fn norm_via_density_with(f: &StepVectorFunction, m: &MatrixMeasure, t: &Mat, rho: &ScalarMeasure) -> Result<f64> {
    linalg::check_invertible(t, m.dim())?;
    let t_inv = t.clone().try_inverse().ok_or(Error::Singular { rcond: 0.0 })?;
    let values = aligned(f, m, rho)?;
    let conjugated = m.conjugate_by(t)?;
    let field = measure::density(&conjugated, rho)?;
    let mut total = 0.0;
    for cell in field.cells() {
        let Some(v) = values.iter().find(|(id, _, _)| *id == cell.id).and_then(|x| x.2) else {
            continue;
        };
        let root = linalg::psd_sqrt(&cell.density);
        total += (root * (&t_inv * v)).norm_squared() * cell.weight;
    }
    Ok(total)
}

/// `f` and `g` are the same element of `L₂(Σ, H)`: `‖f − g‖ < L2_NULL`.
pub fn same_class(f: &StepVectorFunction, g: &StepVectorFunction, m: &MatrixMeasure) -> Result<bool> {
    Ok(norm_squared(&f.sub(g)?, m)?.max(0.0).sqrt() < tol::L2_NULL)
}

/// Independent Gaussian values on every cell of `m`.
pub fn random_function<R: rand::Rng + ?Sized>(rng: &mut R, m: &MatrixMeasure) -> StepVectorFunction {
    StepVectorFunction {
        dim: m.dim(),
        samples: m.cells().into_iter().map(|c| (c.id, sampling::gaussian_vector(rng, m.dim()))).collect(),
    }
}

/// `Q: f ↦ x f` on `L₂(Σ, H)` of an atomic measure, in the orthonormal basis
/// of `⊕ ran A_i^{1/2}`.
#[derive(Clone, Debug, Serialize)]
pub struct MultiplicationOperator {
    /// `(t_i, rank A_i)` for each atom with nonzero rank.
    pub blocks: Vec<(f64, usize)>,
    #[serde(skip)]
    pub matrix: Mat,
}

impl MultiplicationOperator {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Eigenvalues with multiplicity, ascending.
    pub fn spectrum(&self) -> Vec<f64> {
        let mut s: Vec<f64> = self
            .blocks
            .iter()
            .flat_map(|&(t, r)| std::iter::repeat_n(t, r))
            .collect();
        s.sort_by(f64::total_cmp);
        s
    }

    /// Spectral projection onto the eigenvalue `t` (the atom of `E_Q` at `t`).
    pub fn spectral_projection(&self, t: f64) -> Mat {
        let n = self.dim();
        Mat::from_fn(n, n, |i, j| if i == j && self.matrix[(i, i)].re == t { linalg::ONE } else { ZERO })
    }
}

pub fn multiplication_operator(m: &MatrixMeasure) -> Result<MultiplicationOperator> {
    if !m.is_atomic() {
        return Err(Error::NotAtomic);
    }
    let blocks: Vec<(f64, usize)> = m
        .atoms()
        .iter()
        .map(|a| (a.location, linalg::psd_range(&a.value, tol::RANGE).1.len()))
        .filter(|&(_, r)| r > 0)
        .collect();
    let diagonal: Vec<f64> = blocks.iter().flat_map(|&(t, r)| std::iter::repeat_n(t, r)).collect();
    Ok(MultiplicationOperator {
        blocks,
        matrix: linalg::diag(&diagonal),
    })
}

/// Unitary equivalence of the multiplication operators: equal eigenvalue
/// multisets.
pub fn q_unitarily_equivalent(m1: &MatrixMeasure, m2: &MatrixMeasure) -> Result<bool> {
    let s1 = multiplication_operator(m1)?.spectrum();
    let s2 = multiplication_operator(m2)?.spectrum();
    Ok(s1.len() == s2.len() && s1.iter().zip(&s2).all(|(a, b)| (a - b).abs() <= tol::SPECTRUM_MATCH))
}
