//! Scalar measures `μ_f(δ) = (Σ(δ)f, f)`, their supports, and vectors of
//! maximal type.
//!
//! The reference measure for supports is the trace measure of `Σ`; any
//! vector of maximal type gives an equivalent reference, so supports agree
//! modulo null sets.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, Mat, Vector};
use crate::measure::{trace_measure, MatrixMeasure, ScalarMeasure};
use crate::multiplicity::{hellinger_support, SupportSet};
use crate::sampling;
use crate::tol::{self, Tolerances};

fn check_dim(m: &MatrixMeasure, f: &Vector) -> Result<()> {
    if f.len() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: f.len(),
        });
    }
    Ok(())
}

/// `μ_f`, cell by cell.
pub fn vector_measure(m: &MatrixMeasure, f: &Vector) -> Result<ScalarMeasure> {
    check_dim(m, f)?;
    let atoms = m
        .atoms()
        .iter()
        .map(|a| (a.location, linalg::quadratic_form(&a.value, f).max(0.0)))
        .collect();
    let ac = m.ac().map(|ac| {
        (
            ac.grid().to_vec(),
            ac.densities().iter().map(|d| linalg::quadratic_form(d, f).max(0.0)).collect(),
        )
    });
    ScalarMeasure::new(atoms, ac)
}

/// `Γ(f)`: cells with `(Σ(cell)f, f) > SUPPORT · ρ(cell) · ‖f‖²`.
pub fn support_of_vector(m: &MatrixMeasure, f: &Vector) -> Result<SupportSet> {
    support_of_vector_with(m, f, &Tolerances::DEFAULT)
}

pub fn support_of_vector_with(m: &MatrixMeasure, f: &Vector, tol: &Tolerances) -> Result<SupportSet> {
    check_dim(m, f)?;
    let rho = trace_measure(m);
    let null_level = tol.null_cell * rho.total();
    let norm2 = f.norm_squared();
    let cells = m.cells().into_iter().filter_map(|cell| {
        let weight = rho.mass_on(&cell.id);
        if weight <= null_level {
            return None;
        }
        let q = linalg::quadratic_form(&cell.mass, f);
        (q > tol.support * weight * norm2 && norm2 > 0.0).then_some((cell.id, weight))
    });
    Ok(SupportSet::new(cells))
}

/// `μ_f ~ Σ`, i.e. `Γ(f) = Γ_1(Σ)` mod ρ. The zero vector is never maximal.
pub fn is_maximal_type(m: &MatrixMeasure, f: &Vector) -> Result<bool> {
    if f.norm_squared() == 0.0 {
        check_dim(m, f)?;
        return Ok(false);
    }
    Ok(support_of_vector(m, f)?.equivalent(&hellinger_support(m, 1)))
}

/// A maximal-type vector found by Gaussian search.
#[derive(Clone, Debug, Serialize)]
pub struct MaximalSample {
    #[serde(serialize_with = "crate::io::serialize_vector")]
    pub vector: Vector,
    pub tries: usize,
}

/// Draw standard complex Gaussian vectors until one is of maximal type.
pub fn sample_maximal_type(m: &MatrixMeasure, seed: u64, max_tries: usize) -> Result<MaximalSample> {
    sample_maximal_in_span(m, &linalg::identity(m.dim()), seed, max_tries)
}

/// As [`sample_maximal_type`], drawing from `span(basis)` (orthonormal columns).
pub fn sample_maximal_in_span(m: &MatrixMeasure, basis: &Mat, seed: u64, max_tries: usize) -> Result<MaximalSample> {
    if basis.nrows() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: basis.nrows(),
        });
    }
    if m.is_zero() {
        return Err(Error::ZeroMeasure);
    }
    let gamma1 = hellinger_support(m, 1);
    let mut rng = sampling::rng(seed);
    for tries in 1..=max_tries {
        let v = sampling::gaussian_in_span(&mut rng, basis);
        if v.norm_squared() > 0.0 && support_of_vector(m, &v)?.equivalent(&gamma1) {
            return Ok(MaximalSample { vector: v, tries });
        }
    }
    Err(Error::SearchExhausted {
        what: "maximal-type vector".into(),
        tries: max_tries,
    })
}

/// Fraction of Gaussian samples from `span(subspace_basis)` that are of
/// maximal type for `m`. Sample `k` uses lane `k` of `seed`.
pub fn maximal_type_fraction(m: &MatrixMeasure, subspace_basis: &Mat, n_samples: usize, seed: u64) -> Result<f64> {
    if subspace_basis.nrows() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: subspace_basis.nrows(),
        });
    }
    linalg::check_orthonormal(subspace_basis, tol::ORTHONORMAL)?;
    if n_samples == 0 {
        return Ok(0.0);
    }
    let gamma1 = hellinger_support(m, 1);
    let hits = (0..n_samples as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = sampling::lane_rng(seed, k);
            let g = sampling::gaussian_in_span(&mut rng, subspace_basis);
            let hit = g.norm_squared() > 0.0 && support_of_vector(m, &g)?.equivalent(&gamma1);
            Ok(usize::from(hit))
        })
        .collect::<Result<Vec<usize>>>()?
        .into_iter()
        .sum::<usize>();
    Ok(hits as f64 / n_samples as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{diag, real_vector};
    use crate::measure::CellId;

    fn s5() -> MatrixMeasure {
        MatrixMeasure::atomic(
            2,
            vec![(1.0, diag(&[1.0, 0.0])), (2.0, diag(&[0.0, 1.0])), (3.0, diag(&[1.0, 1.0]))],
        )
        .unwrap()
    }

    #[test]
    fn golden_vector_measures() {
        let m = s5();
        let mu = vector_measure(&m, &real_vector(&[1.0, 1.0])).unwrap();
        assert_eq!(mu.atoms(), &[(1.0, 1.0), (2.0, 1.0), (3.0, 2.0)]);
        let mu = vector_measure(&m, &real_vector(&[1.0, 0.0])).unwrap();
        assert_eq!(mu.atoms(), &[(1.0, 1.0), (2.0, 0.0), (3.0, 1.0)]);
        let mu = vector_measure(&m, &real_vector(&[0.0, 0.0])).unwrap();
        assert_eq!(mu.total(), 0.0);
    }

    #[test]
    fn golden_supports() {
        let m = s5();
        let both = support_of_vector(&m, &real_vector(&[0.3, -2.0])).unwrap();
        assert_eq!(both.atom_locations(), vec![1.0, 2.0, 3.0]);
        let e2 = support_of_vector(&m, &real_vector(&[0.0, 1.0])).unwrap();
        assert_eq!(e2.atom_locations(), vec![2.0, 3.0]);
        let e1 = support_of_vector(&m, &real_vector(&[1.0, 0.0])).unwrap();
        assert_eq!(e1.atom_locations(), vec![1.0, 3.0]);
        assert!(!e1.contains(&CellId::Atom(2.0)));
    }

    #[test]
    fn golden_maximality() {
        let m = s5();
        assert!(is_maximal_type(&m, &real_vector(&[1.0, 1.0])).unwrap());
        assert!(!is_maximal_type(&m, &real_vector(&[1.0, 0.0])).unwrap());
        assert!(!is_maximal_type(&m, &real_vector(&[0.0, 0.0])).unwrap());
        assert!(is_maximal_type(&m, &real_vector(&[1.0])).is_err());
    }

    #[test]
    fn golden_sampling_succeeds_first_try() {
        for seed in 0..20 {
            assert_eq!(sample_maximal_type(&s5(), seed, 10).unwrap().tries, 1);
        }
    }

    #[test]
    fn golden_fractions() {
        let m = s5();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let whole = linalg::identity(2);
        assert_eq!(maximal_type_fraction(&m, &whole, 200, 1).unwrap(), 1.0);
        let e1 = linalg::real_matrix(2, 1, &[1.0, 0.0]);
        assert_eq!(maximal_type_fraction(&m, &e1, 200, 1).unwrap(), 0.0);
        let diag_line = linalg::real_matrix(2, 1, &[h, h]);
        assert_eq!(maximal_type_fraction(&m, &diag_line, 200, 1).unwrap(), 1.0);
    }

    #[test]
    fn zero_measure_cannot_be_sampled() {
        let m = MatrixMeasure::atomic(1, vec![(0.0, diag(&[0.0]))]).unwrap();
        assert!(matches!(sample_maximal_type(&m, 0, 5), Err(Error::ZeroMeasure)));
    }
}
