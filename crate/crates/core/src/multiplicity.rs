//! Multiplicity function, Hellinger supports and the subordination order.
//!
//! The multiplicity of a cell is the numerical rank of the density
//! `Ψ = dΣ/dρ` there. With finitely many dimensions the supremum over
//! leading principal blocks is attained by the full matrix, so the full
//! rank is used directly; [`leading_block_rank`] computes the supremum for
//! cross-checking.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use crate::error::Result;
use crate::linalg::{self, real, Mat};
use crate::measure::{self, common_cells, trace_measure, CellId, DensityField, MatrixMeasure, ScalarMeasure};
use crate::tol::{self, Tolerances};

/// A set of ρ-positive cells together with their ρ-weights.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SupportSet {
    cells: BTreeMap<CellId, f64>,
}

impl SupportSet {
    pub fn new(cells: impl IntoIterator<Item = (CellId, f64)>) -> Self {
        SupportSet {
            cells: cells.into_iter().collect(),
        }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn contains(&self, id: &CellId) -> bool {
        self.cells.contains_key(id)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = &CellId> {
        self.cells.keys()
    }

    /// Atom locations in the set (intervals skipped).
    pub fn atom_locations(&self) -> Vec<f64> {
        self.cells
            .keys()
            .filter_map(|c| match c {
                CellId::Atom(t) => Some(*t),
                CellId::Interval(..) => None,
            })
            .collect()
    }

    pub fn weight(&self) -> f64 {
        self.cells.values().sum()
    }

    pub fn symmetric_difference_weight(&self, other: &SupportSet) -> f64 {
        let only_self: f64 = self.cells.iter().filter(|(k, _)| !other.contains(k)).map(|(_, w)| w).sum();
        let only_other: f64 = other.cells.iter().filter(|(k, _)| !self.contains(k)).map(|(_, w)| w).sum();
        only_self + only_other
    }

    /// Equality modulo ρ-null sets.
    pub fn equivalent(&self, other: &SupportSet) -> bool {
        self.symmetric_difference_weight(other) < tol::SUPPORT_EQUIVALENCE
    }

    /// Inclusion modulo ρ-null sets.
    pub fn is_subset_mod(&self, other: &SupportSet) -> bool {
        let excess: f64 = self.cells.iter().filter(|(k, _)| !other.contains(k)).map(|(_, w)| w).sum();
        excess < tol::SUPPORT_EQUIVALENCE
    }
}

impl Serialize for SupportSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.cells.keys())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MultiplicityCell {
    pub cell: CellId,
    pub weight: f64,
    pub multiplicity: usize,
}

/// `N_Σ` on the ρ-positive cells.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultiplicityFunction {
    dim: usize,
    cells: Vec<MultiplicityCell>,
}

impl MultiplicityFunction {
    pub fn from_cells(dim: usize, mut cells: Vec<MultiplicityCell>) -> Self {
        cells.sort_by(|a, b| a.cell.cmp(&b.cell));
        MultiplicityFunction { dim, cells }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cells(&self) -> &[MultiplicityCell] {
        &self.cells
    }

    pub fn get(&self, id: &CellId) -> Option<usize> {
        self.cells
            .binary_search_by(|c| c.cell.cmp(id))
            .ok()
            .map(|i| self.cells[i].multiplicity)
    }

    /// `m(Σ)`: the largest multiplicity on a positive-weight cell.
    pub fn total(&self) -> usize {
        self.cells.iter().map(|c| c.multiplicity).max().unwrap_or(0)
    }

    /// `Γ_i = {N ≥ i}`.
    pub fn support(&self, i: usize) -> SupportSet {
        SupportSet::new(
            self.cells
                .iter()
                .filter(|c| c.multiplicity >= i)
                .map(|c| (c.cell, c.weight)),
        )
    }

    /// All supports `Γ_1 ⊇ … ⊇ Γ_m`.
    pub fn supports(&self) -> Vec<SupportSet> {
        (1..=self.total()).map(|i| self.support(i)).collect()
    }

    /// Number of `Γ_i` equivalent to `Γ_1` mod ρ.
    pub fn junior_threshold(&self) -> usize {
        let first = self.support(1);
        (1..=self.total()).take_while(|&i| self.support(i).equivalent(&first)).count()
    }

    /// Same cells and same multiplicities.
    pub fn same_values(&self, other: &MultiplicityFunction) -> bool {
        self.cells.len() == other.cells.len()
            && self
                .cells
                .iter()
                .zip(&other.cells)
                .all(|(a, b)| a.cell == b.cell && a.multiplicity == b.multiplicity)
    }
}

/// Multiplicity read off a density field.
pub fn multiplicity_of_density(field: &DensityField, rank_tol: f64) -> MultiplicityFunction {
    let dim = field.cells().first().map(|c| c.density.nrows()).unwrap_or(0);
    let cells = field
        .cells()
        .iter()
        .map(|c| MultiplicityCell {
            cell: c.id,
            weight: c.weight,
            multiplicity: linalg::numerical_rank(&c.density, rank_tol),
        })
        .collect();
    MultiplicityFunction::from_cells(dim, cells)
}

/// `N_Σ` against the trace measure. The zero measure gives the empty function.
pub fn multiplicity_function(m: &MatrixMeasure) -> MultiplicityFunction {
    multiplicity_function_with(m, &trace_measure(m), &Tolerances::DEFAULT)
        .expect("a measure is dominated by its own trace measure")
}

/// `N_Σ` against an arbitrary equivalent scalar measure.
pub fn multiplicity_function_with(
    m: &MatrixMeasure,
    rho: &ScalarMeasure,
    tol: &Tolerances,
) -> Result<MultiplicityFunction> {
    let field = measure::density_with(m, rho, tol.null_cell)?;
    let mut f = multiplicity_of_density(&field, tol.rank);
    f.dim = m.dim();
    Ok(f)
}

/// `m(Σ)`.
pub fn total_multiplicity(m: &MatrixMeasure) -> usize {
    multiplicity_function(m).total()
}

/// `Γ_i(Σ)`; empty for `i > dim`.
pub fn hellinger_support(m: &MatrixMeasure, i: usize) -> SupportSet {
    multiplicity_function(m).support(i)
}

/// `sup_n rank Ψ_n` where `Ψ_n` is the leading `n × n` block of `Ψ` in the
/// orthonormal basis given by the columns of `basis`.
pub fn leading_block_rank(psi: &Mat, basis: &Mat, rank_tol: f64) -> usize {
    let in_basis = basis.adjoint() * psi * basis;
    (1..=in_basis.nrows())
        .map(|n| linalg::numerical_rank(&in_basis.view((0, 0), (n, n)).into_owned(), rank_tol))
        .max()
        .unwrap_or(0)
}

/// Per-cell view of a measure on a refinement shared with other measures.
struct RefinedCell {
    null: bool,
    rank: usize,
}

fn refined(m: &MatrixMeasure, cells: &[CellId], tol: &Tolerances) -> Vec<RefinedCell> {
    let null_level = tol.null_cell * linalg::trace_real(&m.total());
    cells
        .iter()
        .map(|id| {
            let mass = m.mass_on(id);
            let weight = linalg::trace_real(&mass);
            if weight <= null_level {
                RefinedCell { null: true, rank: 0 }
            } else {
                RefinedCell {
                    null: false,
                    rank: linalg::numerical_rank(&(mass * real(1.0 / weight)), tol.rank),
                }
            }
        })
        .collect()
}

/// `Σ₁ ≺ Σ₂`: every cell null for `m2` is null for `m1`.
pub fn is_subordinate(m1: &MatrixMeasure, m2: &MatrixMeasure) -> bool {
    let cells = common_cells(&[m1.breakpoints(), m2.breakpoints()]);
    let tol = Tolerances::DEFAULT;
    refined(m1, &cells, &tol)
        .iter()
        .zip(refined(m2, &cells, &tol))
        .all(|(a, b)| !b.null || a.null)
}

/// `Σ₁ ≺≺ Σ₂`: subordinate and `N_{Σ₁} ≤ N_{Σ₂}` on `Σ₂`-positive cells.
pub fn is_spectrally_subordinate(m1: &MatrixMeasure, m2: &MatrixMeasure) -> bool {
    is_spectrally_subordinate_with(m1, m2, &Tolerances::DEFAULT)
}

pub fn is_spectrally_subordinate_with(m1: &MatrixMeasure, m2: &MatrixMeasure, tol: &Tolerances) -> bool {
    let cells = common_cells(&[m1.breakpoints(), m2.breakpoints()]);
    refined(m1, &cells, tol)
        .iter()
        .zip(refined(m2, &cells, tol))
        .all(|(a, b)| if b.null { a.null } else { a.rank <= b.rank })
}

pub fn is_spectrally_equivalent(m1: &MatrixMeasure, m2: &MatrixMeasure) -> bool {
    is_spectrally_equivalent_with(m1, m2, &Tolerances::DEFAULT)
}

pub fn is_spectrally_equivalent_with(m1: &MatrixMeasure, m2: &MatrixMeasure, tol: &Tolerances) -> bool {
    is_spectrally_subordinate_with(m1, m2, tol) && is_spectrally_subordinate_with(m2, m1, tol)
}
