//! Matrix-valued measures and charges on the line.
//!
//! A measure is a finite list of atoms plus an optional piecewise-constant
//! density on a grid of half-open cells `[t_j, t_{j+1})`. Every quantity the
//! rest of the crate needs is a finite sum over *cells*: an atom, or one grid
//! interval carrying the absolutely continuous mass `D_j (t_{j+1} - t_j)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Deref;

use serde::Serialize;

use crate::borel::BorelSet;
use crate::error::{Error, Result};
use crate::linalg::{self, real, Mat};
use crate::tol;

/// Identifies one cell of a measure: an atom location or a grid interval `[a, b)`.
#[derive(Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CellId {
    Atom(f64),
    Interval(f64, f64),
}

impl CellId {
    fn key(&self) -> (f64, u8, f64) {
        match *self {
            CellId::Atom(t) => (t, 0, t),
            CellId::Interval(a, b) => (a, 1, b),
        }
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, CellId::Atom(_))
    }

    /// Lebesgue length; zero for atoms.
    pub fn length(&self) -> f64 {
        match *self {
            CellId::Atom(_) => 0.0,
            CellId::Interval(a, b) => b - a,
        }
    }

    /// The portion of this cell inside `s`, as a fraction of the cell.
    pub fn fraction_in(&self, s: &BorelSet) -> f64 {
        match *self {
            CellId::Atom(t) => f64::from(u8::from(s.contains(t))),
            CellId::Interval(a, b) => s.overlap_length(a, b) / (b - a),
        }
    }

    pub fn as_set(&self) -> BorelSet {
        match *self {
            CellId::Atom(t) => BorelSet::point(t),
            CellId::Interval(a, b) => BorelSet::interval(a, b),
        }
    }
}

impl PartialEq for CellId {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for CellId {}

impl PartialOrd for CellId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CellId {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, ka, ea) = self.key();
        let (b, kb, eb) = other.key();
        a.total_cmp(&b).then(ka.cmp(&kb)).then(ea.total_cmp(&eb))
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellId::Atom(t) => write!(f, "{{{t}}}"),
            CellId::Interval(a, b) => write!(f, "[{a}, {b})"),
        }
    }
}

/// A cell together with the value of the measure on it.
#[derive(Clone, Debug)]
pub struct Cell {
    pub id: CellId,
    pub mass: Mat,
}

#[derive(Clone, Debug)]
pub struct Atom {
    pub location: f64,
    pub value: Mat,
}

impl Atom {
    pub fn new(location: f64, value: Mat) -> Self {
        Atom { location, value }
    }
}

/// Piecewise-constant density with respect to Lebesgue measure.
#[derive(Clone, Debug)]
pub struct AcPart {
    grid: Vec<f64>,
    densities: Vec<Mat>,
}

impl AcPart {
    pub fn new(grid: Vec<f64>, densities: Vec<Mat>) -> Result<Self> {
        check_grid(&grid)?;
        if densities.len() != grid.len() - 1 {
            return Err(Error::GridDensityMismatch {
                cells: grid.len() - 1,
                densities: densities.len(),
            });
        }
        Ok(AcPart { grid, densities })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn densities(&self) -> &[Mat] {
        &self.densities
    }

    /// `(a, b, D)` for each grid cell.
    pub fn intervals(&self) -> impl Iterator<Item = (f64, f64, &Mat)> + '_ {
        self.grid.windows(2).zip(&self.densities).map(|(w, d)| (w[0], w[1], d))
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 2 || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidGrid);
    }
    if grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::NonFinite("grid".into()));
    }
    Ok(())
}

/// A Hermitian-valued set function with finitely many atoms and a
/// piecewise-constant density.
#[derive(Clone, Debug)]
pub struct MatrixCharge {
    dim: usize,
    atoms: Vec<Atom>,
    ac: Option<AcPart>,
}

impl MatrixCharge {
    /// Validates dimensions and Hermiticity; atoms are sorted by location.
    pub fn new(dim: usize, atoms: Vec<Atom>, ac: Option<AcPart>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Invalid("dimension must be positive".into()));
        }
        let mut atoms = atoms;
        for atom in &mut atoms {
            let id = CellId::Atom(atom.location);
            if !atom.location.is_finite() {
                return Err(Error::NonFinite(format!("atom location {}", atom.location)));
            }
            atom.value = validate_hermitian(&atom.value, dim, &id)?;
        }
        atoms.sort_by(|a, b| a.location.total_cmp(&b.location));
        if let Some(w) = atoms.windows(2).find(|w| w[0].location == w[1].location) {
            return Err(Error::DuplicateAtom(w[0].location));
        }
        let ac = match ac {
            Some(part) => {
                let mut densities = Vec::with_capacity(part.densities.len());
                for (a, b, d) in part.intervals() {
                    densities.push(validate_hermitian(d, dim, &CellId::Interval(a, b))?);
                }
                Some(AcPart {
                    grid: part.grid,
                    densities,
                })
            }
            None => None,
        };
        Ok(MatrixCharge { dim, atoms, ac })
    }

    pub fn atomic(dim: usize, atoms: Vec<(f64, Mat)>) -> Result<Self> {
        Self::new(dim, atoms.into_iter().map(|(t, v)| Atom::new(t, v)).collect(), None)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn ac(&self) -> Option<&AcPart> {
        self.ac.as_ref()
    }

    pub fn is_atomic(&self) -> bool {
        self.ac.is_none()
    }

    /// All cells in order, atoms and grid intervals, with their masses.
    pub fn cells(&self) -> Vec<Cell> {
        let mut cells: Vec<Cell> = self
            .atoms
            .iter()
            .map(|a| Cell {
                id: CellId::Atom(a.location),
                mass: a.value.clone(),
            })
            .collect();
        if let Some(ac) = &self.ac {
            cells.extend(ac.intervals().map(|(a, b, d)| Cell {
                id: CellId::Interval(a, b),
                mass: d * real(b - a),
            }));
        }
        cells.sort_by(|x, y| x.id.cmp(&y.id));
        cells
    }

    /// Mass of an arbitrary cell (not necessarily one of this charge's own cells).
    pub fn mass_on(&self, cell: &CellId) -> Mat {
        match *cell {
            CellId::Atom(t) => self
                .atoms
                .binary_search_by(|a| a.location.total_cmp(&t))
                .map(|i| self.atoms[i].value.clone())
                .unwrap_or_else(|_| linalg::zeros(self.dim)),
            CellId::Interval(a, b) => {
                let mut total = linalg::zeros(self.dim);
                if let Some(ac) = &self.ac {
                    for (x, y, d) in ac.intervals() {
                        let overlap = y.min(b) - x.max(a);
                        if overlap > 0.0 {
                            total += d * real(overlap);
                        }
                    }
                }
                total
            }
        }
    }

    /// `Σ(s)`: atoms inside `s` plus the density integrated over `s`.
    pub fn eval(&self, s: &BorelSet) -> Mat {
        let mut total = linalg::zeros(self.dim);
        for atom in &self.atoms {
            if s.contains(atom.location) {
                total += &atom.value;
            }
        }
        if let Some(ac) = &self.ac {
            for (a, b, d) in ac.intervals() {
                let len = s.overlap_length(a, b);
                if len > 0.0 {
                    total += d * real(len);
                }
            }
        }
        total
    }

    /// `Σ(ℝ)`.
    pub fn total(&self) -> Mat {
        self.eval(&BorelSet::everything())
    }

    /// Atom locations and grid points, for building common refinements.
    pub fn breakpoints(&self) -> (Vec<f64>, Vec<f64>) {
        let atoms = self.atoms.iter().map(|a| a.location).collect();
        let grid = self.ac.as_ref().map(|ac| ac.grid.clone()).unwrap_or_default();
        (atoms, grid)
    }

    /// Apply `f` to every atom value and density; `new_dim` is the dimension of the images.
    pub(crate) fn map_values(&self, new_dim: usize, f: impl Fn(&Mat) -> Mat) -> MatrixCharge {
        MatrixCharge {
            dim: new_dim,
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom::new(a.location, linalg::hermitian_part(&f(&a.value))))
                .collect(),
            ac: self.ac.as_ref().map(|ac| AcPart {
                grid: ac.grid.clone(),
                densities: ac.densities.iter().map(|d| linalg::hermitian_part(&f(d))).collect(),
            }),
        }
    }

    /// `T* Σ(·) T` for invertible `T`.
    pub fn conjugate_by(&self, t: &Mat) -> Result<MatrixCharge> {
        linalg::check_invertible(t, self.dim)?;
        let t_adj = t.adjoint();
        Ok(self.map_values(self.dim, |a| &t_adj * a * t))
    }

    /// `c Σ(·)` for real `c`.
    pub fn scaled(&self, factor: f64) -> MatrixCharge {
        self.map_values(self.dim, |a| a * real(factor))
    }

    /// `Σ(· ∩ s)`: keeps the atoms inside `s` and restricts the density.
    pub fn restricted(&self, s: &BorelSet) -> MatrixCharge {
        let atoms = self.atoms.iter().filter(|a| s.contains(a.location)).cloned().collect();
        let ac = self.ac.as_ref().map(|ac| {
            // refine the grid by the interval endpoints of s so each subcell is inside or outside
            let (lo, hi) = (ac.grid[0], ac.grid[ac.grid.len() - 1]);
            let mut grid = ac.grid.clone();
            for &(a, b) in s.intervals() {
                grid.extend([a, b].into_iter().filter(|&x| x > lo && x < hi));
            }
            grid.sort_by(f64::total_cmp);
            grid.dedup();
            let densities = grid
                .windows(2)
                .map(|w| {
                    if s.overlap_length(w[0], w[1]) > 0.0 {
                        self.mass_on(&CellId::Interval(w[0], w[1])) * real(1.0 / (w[1] - w[0]))
                    } else {
                        linalg::zeros(self.dim)
                    }
                })
                .collect();
            AcPart { grid, densities }
        });
        MatrixCharge {
            dim: self.dim,
            atoms,
            ac,
        }
    }
}

fn validate_hermitian(m: &Mat, dim: usize, cell: &CellId) -> Result<Mat> {
    if m.nrows() != dim || m.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: if m.nrows() != dim { m.nrows() } else { m.ncols() },
        });
    }
    if !linalg::is_finite(m) {
        return Err(Error::NonFinite(cell.to_string()));
    }
    let deviation = linalg::hermitian_deviation(m);
    if deviation > tol::HERMITIAN {
        return Err(Error::NotHermitian {
            cell: cell.to_string(),
            deviation,
        });
    }
    Ok(linalg::hermitian_part(m))
}

fn validate_psd(m: &Mat, cell: &CellId) -> Result<()> {
    let ev = linalg::hermitian_eigenvalues(m);
    let norm = ev.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let min = ev.first().copied().unwrap_or(0.0);
    if min < -tol::PSD * norm {
        return Err(Error::NotPositive {
            cell: cell.to_string(),
            min_eigenvalue: min,
        });
    }
    Ok(())
}

/// A matrix charge whose values are all positive semidefinite.
#[derive(Clone, Debug)]
pub struct MatrixMeasure(MatrixCharge);

impl MatrixMeasure {
    pub fn new(dim: usize, atoms: Vec<Atom>, ac: Option<AcPart>) -> Result<Self> {
        Self::try_from_charge(MatrixCharge::new(dim, atoms, ac)?)
    }

    pub fn atomic(dim: usize, atoms: Vec<(f64, Mat)>) -> Result<Self> {
        Self::try_from_charge(MatrixCharge::atomic(dim, atoms)?)
    }

    pub fn try_from_charge(charge: MatrixCharge) -> Result<Self> {
        for atom in &charge.atoms {
            validate_psd(&atom.value, &CellId::Atom(atom.location))?;
        }
        if let Some(ac) = &charge.ac {
            for (a, b, d) in ac.intervals() {
                validate_psd(d, &CellId::Interval(a, b))?;
            }
        }
        Ok(MatrixMeasure(charge))
    }

    /// Skips validation; for values that are PSD by construction.
    pub(crate) fn from_charge_unchecked(charge: MatrixCharge) -> Self {
        MatrixMeasure(charge)
    }

    pub fn as_charge(&self) -> &MatrixCharge {
        &self.0
    }

    pub fn into_charge(self) -> MatrixCharge {
        self.0
    }

    pub fn conjugate_by(&self, t: &Mat) -> Result<MatrixMeasure> {
        Ok(MatrixMeasure(self.0.conjugate_by(t)?))
    }

    /// Scaling by a nonnegative factor.
    pub fn scaled(&self, factor: f64) -> Result<MatrixMeasure> {
        if !(factor >= 0.0) {
            return Err(Error::Invalid(format!("scale factor {factor} must be nonnegative")));
        }
        Ok(MatrixMeasure(self.0.scaled(factor)))
    }

    pub fn restricted(&self, s: &BorelSet) -> MatrixMeasure {
        MatrixMeasure(self.0.restricted(s))
    }

    /// `B* Σ(·) B` for an orthonormal family `B` (columns).
    pub fn compress(&self, basis: &Mat) -> Result<MatrixMeasure> {
        if basis.nrows() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: basis.nrows(),
            });
        }
        if basis.ncols() == 0 {
            return Err(Error::Invalid("compression basis is empty".into()));
        }
        linalg::check_orthonormal(basis, tol::ORTHONORMAL)?;
        let b_adj = basis.adjoint();
        Ok(MatrixMeasure(self.0.map_values(basis.ncols(), |a| &b_adj * a * basis)))
    }

    /// Direct sum with a zero block of dimension `extra`.
    pub fn padded(&self, extra: usize) -> MatrixMeasure {
        let n = self.dim();
        MatrixMeasure(self.0.map_values(n + extra, |a| {
            let mut big = linalg::zeros(n + extra);
            big.view_mut((0, 0), (n, n)).copy_from(a);
            big
        }))
    }

    /// True when every cell is null relative to the measure's own scale.
    pub fn is_zero(&self) -> bool {
        linalg::trace_real(&self.total()) <= 0.0
    }
}

impl Deref for MatrixMeasure {
    type Target = MatrixCharge;
    fn deref(&self) -> &MatrixCharge {
        &self.0
    }
}

impl AsRef<MatrixCharge> for MatrixMeasure {
    fn as_ref(&self) -> &MatrixCharge {
        &self.0
    }
}

impl AsRef<MatrixCharge> for MatrixCharge {
    fn as_ref(&self) -> &MatrixCharge {
        self
    }
}

/// A nonnegative scalar measure: atoms plus a piecewise-constant density.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalarMeasure {
    atoms: Vec<(f64, f64)>,
    grid: Vec<f64>,
    densities: Vec<f64>,
}

impl ScalarMeasure {
    pub fn new(atoms: Vec<(f64, f64)>, ac: Option<(Vec<f64>, Vec<f64>)>) -> Result<Self> {
        let mut atoms = atoms;
        for &(t, w) in &atoms {
            if !t.is_finite() || !w.is_finite() {
                return Err(Error::NonFinite(format!("atom ({t}, {w})")));
            }
            if w < 0.0 {
                return Err(Error::NegativeWeight {
                    cell: CellId::Atom(t).to_string(),
                    weight: w,
                });
            }
        }
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        if let Some(w) = atoms.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::DuplicateAtom(w[0].0));
        }
        let (grid, densities) = match ac {
            Some((grid, densities)) => {
                check_grid(&grid)?;
                if densities.len() != grid.len() - 1 {
                    return Err(Error::GridDensityMismatch {
                        cells: grid.len() - 1,
                        densities: densities.len(),
                    });
                }
                for (w, &r) in grid.windows(2).zip(&densities) {
                    if !(r >= 0.0) || !r.is_finite() {
                        return Err(Error::NegativeWeight {
                            cell: CellId::Interval(w[0], w[1]).to_string(),
                            weight: r,
                        });
                    }
                }
                (grid, densities)
            }
            None => (Vec::new(), Vec::new()),
        };
        Ok(ScalarMeasure {
            atoms,
            grid,
            densities,
        })
    }

    pub fn zero() -> Self {
        ScalarMeasure {
            atoms: Vec::new(),
            grid: Vec::new(),
            densities: Vec::new(),
        }
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn densities(&self) -> &[f64] {
        &self.densities
    }

    /// `(cell, mass)` for atoms and grid intervals, in order.
    pub fn cells(&self) -> Vec<(CellId, f64)> {
        let mut cells: Vec<(CellId, f64)> = self.atoms.iter().map(|&(t, w)| (CellId::Atom(t), w)).collect();
        cells.extend(
            self.grid
                .windows(2)
                .zip(&self.densities)
                .map(|(w, &r)| (CellId::Interval(w[0], w[1]), r * (w[1] - w[0]))),
        );
        cells.sort_by(|x, y| x.0.cmp(&y.0));
        cells
    }

    pub fn mass_on(&self, cell: &CellId) -> f64 {
        match *cell {
            CellId::Atom(t) => self
                .atoms
                .binary_search_by(|a| a.0.total_cmp(&t))
                .map(|i| self.atoms[i].1)
                .unwrap_or(0.0),
            CellId::Interval(a, b) => self
                .grid
                .windows(2)
                .zip(&self.densities)
                .map(|(w, &r)| r * (w[1].min(b) - w[0].max(a)).max(0.0))
                .sum(),
        }
    }

    pub fn eval(&self, s: &BorelSet) -> f64 {
        let atoms: f64 = self.atoms.iter().filter(|(t, _)| s.contains(*t)).map(|(_, w)| w).sum();
        let ac: f64 = self
            .grid
            .windows(2)
            .zip(&self.densities)
            .map(|(w, &r)| r * s.overlap_length(w[0], w[1]))
            .sum();
        atoms + ac
    }

    pub fn total(&self) -> f64 {
        self.eval(&BorelSet::everything())
    }

    pub fn breakpoints(&self) -> (Vec<f64>, Vec<f64>) {
        (self.atoms.iter().map(|a| a.0).collect(), self.grid.clone())
    }

    /// Multiply each cell's mass by `factor(cell)`; positive factors give an equivalent measure.
    pub fn rescaled(&self, factor: impl Fn(&CellId) -> f64) -> Result<ScalarMeasure> {
        let atoms = self.atoms.iter().map(|&(t, w)| (t, w * factor(&CellId::Atom(t)))).collect();
        let ac = if self.grid.is_empty() {
            None
        } else {
            let densities = self
                .grid
                .windows(2)
                .zip(&self.densities)
                .map(|(w, &r)| r * factor(&CellId::Interval(w[0], w[1])))
                .collect();
            Some((self.grid.clone(), densities))
        };
        ScalarMeasure::new(atoms, ac)
    }
}

/// The trace measure `ρ(Δ) = tr Σ(Δ)`, a scalar measure equivalent to `Σ`.
pub fn trace_measure(m: &MatrixMeasure) -> ScalarMeasure {
    let atoms = m.atoms().iter().map(|a| (a.location, linalg::trace_real(&a.value).max(0.0))).collect();
    let ac = m.ac().map(|ac| {
        (
            ac.grid().to_vec(),
            ac.densities().iter().map(|d| linalg::trace_real(d).max(0.0)).collect(),
        )
    });
    ScalarMeasure::new(atoms, ac).expect("trace of a valid measure is a valid scalar measure")
}

/// `Σ(s)` for a measure or a charge.
pub fn measure_eval<M: AsRef<MatrixCharge>>(m: &M, s: &BorelSet) -> Mat {
    m.as_ref().eval(s)
}

/// `Σ_T(·) = T* Σ(·) T`.
pub fn conjugate_by(m: &MatrixMeasure, t: &Mat) -> Result<MatrixMeasure> {
    m.conjugate_by(t)
}

/// Compression `B* Σ(·) B` onto the span of an orthonormal family.
pub fn compress(m: &MatrixMeasure, basis: &Mat) -> Result<MatrixMeasure> {
    m.compress(basis)
}

/// Cells of the common refinement of several cell structures.
pub fn common_cells(structures: &[(Vec<f64>, Vec<f64>)]) -> Vec<CellId> {
    let mut atoms: Vec<f64> = structures.iter().flat_map(|s| s.0.iter().copied()).collect();
    let mut grid: Vec<f64> = structures.iter().flat_map(|s| s.1.iter().copied()).collect();
    atoms.sort_by(f64::total_cmp);
    atoms.dedup();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let mut cells: Vec<CellId> = atoms.into_iter().map(CellId::Atom).collect();
    cells.extend(grid.windows(2).map(|w| CellId::Interval(w[0], w[1])));
    cells.sort();
    cells
}

/// One cell of a Radon–Nikodym density.
#[derive(Clone, Debug)]
pub struct DensityCell {
    pub id: CellId,
    /// `ρ(cell)`.
    pub weight: f64,
    /// `Ψ(cell) = Σ(cell) / ρ(cell)`.
    pub density: Mat,
}

/// The density `Ψ = dΣ/dρ`, one Hermitian matrix per ρ-positive cell.
#[derive(Clone, Debug)]
pub struct DensityField {
    cells: Vec<DensityCell>,
    base: ScalarMeasure,
}

impl DensityField {
    pub fn cells(&self) -> &[DensityCell] {
        &self.cells
    }

    pub fn base(&self) -> &ScalarMeasure {
        &self.base
    }

    pub fn get(&self, id: &CellId) -> Option<&DensityCell> {
        self.cells.binary_search_by(|c| c.id.cmp(id)).ok().map(|i| &self.cells[i])
    }

    /// `∫_s Ψ dρ`.
    pub fn integrate(&self, s: &BorelSet) -> Mat {
        let dim = self.cells.first().map(|c| c.density.nrows()).unwrap_or(0);
        let mut total = linalg::zeros(dim);
        for cell in &self.cells {
            let frac = cell.id.fraction_in(s);
            if frac > 0.0 {
                total += &cell.density * real(cell.weight * frac);
            }
        }
        total
    }
}

/// `Ψ = dΣ/dρ` on the common refinement of `m` and `rho`.
///
/// Cells where `ρ` is null (at most `NULL_CELL · ρ(ℝ)`) are dropped; such a
/// cell carrying non-null mass of `m` is a domination violation.
pub fn density(m: &MatrixMeasure, rho: &ScalarMeasure) -> Result<DensityField> {
    density_with(m, rho, tol::NULL_CELL)
}

pub fn density_with(m: &MatrixMeasure, rho: &ScalarMeasure, null_cell: f64) -> Result<DensityField> {
    let rho_null = null_cell * rho.total();
    let m_null = null_cell * linalg::trace_real(&m.total());
    let mut cells = Vec::new();
    for id in common_cells(&[m.breakpoints(), rho.breakpoints()]) {
        let weight = rho.mass_on(&id);
        let mass = m.mass_on(&id);
        if weight <= rho_null {
            if linalg::trace_real(&mass) > m_null {
                return Err(Error::DominationViolation { cell: id.to_string() });
            }
            continue;
        }
        cells.push(DensityCell {
            id,
            weight,
            density: mass * real(1.0 / weight),
        });
    }
    Ok(DensityField {
        cells,
        base: rho.clone(),
    })
}
