//! Numerical tolerances.
//!
//! The values here are the documented defaults; [`Tolerances`] lets callers
//! override the few that are exposed on the command line.

/// Relative Hermiticity slack on input matrices.
pub const HERMITIAN: f64 = 1e-12;
/// Minimum eigenvalue must be at least `-PSD * ‖A‖`.
pub const PSD: f64 = 1e-12;
/// Singular values above `RANK * max(σ_max, 1)` count toward the rank.
pub const RANK: f64 = 1e-10;
/// `(Σ(cell) f, f) > SUPPORT * ρ(cell) * ‖f‖²` puts a cell in the support of `μ_f`.
pub const SUPPORT: f64 = 1e-12;
/// A compressed density block is nonsingular when `det > DETERMINANT * ∏ diag`.
pub const DETERMINANT: f64 = 1e-12;
/// Cells whose weight is at most `NULL_CELL * ρ(ℝ)` are treated as null.
pub const NULL_CELL: f64 = 1e-12;
/// Two supports agree mod ρ when their symmetric difference weighs less than this.
pub const SUPPORT_EQUIVALENCE: f64 = 1e-12;
/// Orthonormality checks on user-supplied bases.
pub const ORTHONORMAL: f64 = 1e-10;
/// Eigenvalues within `EIGEN_CLUSTER * ‖A‖` are one spectral point.
pub const EIGEN_CLUSTER: f64 = 1e-9;
/// Atoms of a POVM must sum to the identity within this (max entry).
pub const POVM_SUM: f64 = 1e-10;
/// Eigenvalue multisets of multiplication operators match within this.
pub const SPECTRUM_MATCH: f64 = 1e-10;
/// Eigenvalues above `RANGE * λ_max` span `ran A^{1/2}` in the dilation.
pub const RANGE: f64 = 1e-12;
/// Operators with `σ_min / σ_max` at or below this are singular.
pub const SINGULAR_RCOND: f64 = 1e-14;
/// Isometry check `‖V*V - I‖_max`.
pub const ISOMETRY: f64 = 1e-10;
/// Two step functions are identified when their difference has smaller norm.
pub const L2_NULL: f64 = 1e-12;

/// Overridable tolerances.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub rank: f64,
    pub support: f64,
    pub determinant: f64,
    pub null_cell: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        rank: RANK,
        support: SUPPORT,
        determinant: DETERMINANT,
        null_cell: NULL_CELL,
    };

    pub fn with_rank(self, rank: f64) -> Self {
        Tolerances { rank, ..self }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
