//! Hellinger subspaces and chains.
//!
//! A chain `H_1 ⊂ … ⊂ H_m` with orthonormal basis `e_1, …, e_m` realizes the
//! Hellinger types when, at every level `k`, the cells where the compressed
//! density block `Ψ_k = [(Ψ e_i, e_j)]_{i,j≤k}` is nonsingular are exactly
//! `Γ_k(Σ)`. Equivalently, the scalar measure
//! `(∧^k Ψ φ_k, φ_k) dρ = det Ψ_k dρ` with `φ_k = e_1 ∧ … ∧ e_k` has support
//! `Γ_k(Σ)`.
//!
//! Chains are grown greedily: each new vector is a Gaussian sample from the
//! orthogonal complement of the current span (inside a given subspace, when
//! one is supplied) and is kept only once the criterion certifies it.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, Mat, Vector};
use crate::maximal::{is_maximal_type, support_of_vector};
use crate::measure::{self, trace_measure, CellId, DensityField, MatrixMeasure, ScalarMeasure};
use crate::multiplicity::{multiplicity_function, MultiplicityFunction, SupportSet};
use crate::sampling;
use crate::tol::{self, Tolerances};

/// Default retry cap per chain level.
pub const DEFAULT_MAX_TRIES: usize = 100;

/// Exact zero-pattern analysis is run only up to these sizes.
pub const EXACT_MAX_DIM: usize = 3;
pub const EXACT_MAX_ATOMS: usize = 6;

#[derive(Clone, Debug, Serialize)]
pub struct HellingerChain {
    #[serde(serialize_with = "crate::io::serialize_vectors")]
    vectors: Vec<Vector>,
    verified_depth: usize,
    tries_per_level: Vec<usize>,
}

impl HellingerChain {
    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn verified_depth(&self) -> usize {
        self.verified_depth
    }

    /// Samples drawn at each level; level 1 is the given vector and counts as one.
    pub fn tries_per_level(&self) -> &[usize] {
        &self.tries_per_level
    }

    /// Orthonormal basis of `H_k` as columns.
    pub fn subspace(&self, k: usize) -> Mat {
        let dim = self.vectors.first().map(|v| v.len()).unwrap_or(0);
        linalg::columns(&self.vectors[..k.min(self.vectors.len())], dim)
    }
}

/// `det` of a Hermitian PSD block, via its eigenvalues.
pub fn block_determinant(block: &Mat) -> f64 {
    linalg::hermitian_eigenvalues(block).iter().product()
}

/// Nonsingularity test for a compressed density block: every diagonal entry
/// above the support threshold and `det > DETERMINANT · ∏ diag`, the latter
/// evaluated on the unit-diagonal rescaling of the block.
pub fn block_is_nonsingular(block: &Mat, tol: &Tolerances) -> bool {
    let k = block.nrows();
    if k == 0 {
        return true;
    }
    let diag: Vec<f64> = (0..k).map(|i| block[(i, i)].re).collect();
    if diag.iter().any(|&d| !(d > tol.support)) {
        return false;
    }
    let scale: Vec<f64> = diag.iter().map(|d| 1.0 / d.sqrt()).collect();
    let normalized = Mat::from_fn(k, k, |i, j| block[(i, j)] * (scale[i] * scale[j]));
    block_determinant(&normalized) > tol.determinant
}

fn compressed_block(density: &Mat, basis: &Mat) -> Mat {
    basis.adjoint() * density * basis
}

/// Cells of the density field where the block in the first `k` basis
/// vectors is nonsingular.
fn nonsingular_cells(field: &DensityField, basis: &Mat, k: usize, tol: &Tolerances) -> SupportSet {
    let sub = basis.columns(0, k).into_owned();
    SupportSet::new(
        field
            .cells()
            .iter()
            .filter(|c| block_is_nonsingular(&compressed_block(&c.density, &sub), tol))
            .map(|c| (c.id, c.weight)),
    )
}

struct ChainContext {
    field: DensityField,
    multiplicity: MultiplicityFunction,
    tol: Tolerances,
}

impl ChainContext {
    fn new(m: &MatrixMeasure) -> Self {
        ChainContext {
            field: measure::density(m, &trace_measure(m)).expect("a measure is dominated by its trace measure"),
            multiplicity: multiplicity_function(m),
            tol: Tolerances::DEFAULT,
        }
    }

    fn level_holds(&self, basis: &Mat, k: usize) -> bool {
        nonsingular_cells(&self.field, basis, k, &self.tol).equivalent(&self.multiplicity.support(k))
    }
}

fn check_vectors(m: &MatrixMeasure, vectors: &[Vector]) -> Result<Mat> {
    if let Some(v) = vectors.iter().find(|v| v.len() != m.dim()) {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: v.len(),
        });
    }
    let basis = linalg::columns(vectors, m.dim());
    linalg::check_orthonormal(&basis, tol::ORTHONORMAL)?;
    Ok(basis)
}

/// For every `j ≤ k`: `{det Ψ_j ≠ 0} = Γ_j(Σ)` mod ρ.
pub fn chain_criterion(m: &MatrixMeasure, vectors: &[Vector]) -> Result<bool> {
    Ok(chain_criterion_levels(m, vectors)?.iter().all(|&ok| ok))
}

/// The criterion level by level.
pub fn chain_criterion_levels(m: &MatrixMeasure, vectors: &[Vector]) -> Result<Vec<bool>> {
    let basis = check_vectors(m, vectors)?;
    let ctx = ChainContext::new(m);
    Ok((1..=vectors.len()).map(|j| ctx.level_holds(&basis, j)).collect())
}

/// Greedy extension of `first` inside `span(search_basis)`.
fn grow_chain(
    m: &MatrixMeasure,
    search_basis: &Mat,
    first: &Vector,
    seed: u64,
    max_tries: usize,
) -> Result<HellingerChain> {
    let ctx = ChainContext::new(m);
    let depth = ctx.multiplicity.total();
    let e1 = first / linalg::real(first.norm());
    let mut vectors = vec![e1];
    let mut tries_per_level = vec![1];
    if !ctx.level_holds(&linalg::columns(&vectors, m.dim()), 1) {
        return Err(Error::NotMaximalType);
    }
    let mut rng = sampling::rng(seed);
    for level in 2..=depth {
        let mut accepted = None;
        for attempt in 1..=max_tries {
            let mut candidate = sampling::gaussian_in_span(&mut rng, search_basis);
            for e in &vectors {
                let overlap = e.dotc(&candidate);
                candidate -= e * overlap;
            }
            // second pass keeps the new vector orthogonal to working precision
            for e in &vectors {
                let overlap = e.dotc(&candidate);
                candidate -= e * overlap;
            }
            let norm = candidate.norm();
            if !(norm > 1e-8) {
                continue;
            }
            candidate /= linalg::real(norm);
            let mut trial = vectors.clone();
            trial.push(candidate);
            if ctx.level_holds(&linalg::columns(&trial, m.dim()), level) {
                accepted = Some((trial, attempt));
                break;
            }
        }
        match accepted {
            Some((trial, attempt)) => {
                vectors = trial;
                tries_per_level.push(attempt);
            }
            None => {
                return Err(Error::SearchExhausted {
                    what: format!("Hellinger chain level {level}"),
                    tries: max_tries,
                })
            }
        }
    }
    Ok(HellingerChain {
        verified_depth: vectors.len(),
        vectors,
        tries_per_level,
    })
}

/// A certified Hellinger chain starting at `H_1 = span{h}`.
pub fn build_hellinger_chain(m: &MatrixMeasure, h: &Vector, seed: u64, max_tries: usize) -> Result<HellingerChain> {
    if !is_maximal_type(m, h)? {
        return Err(Error::NotMaximalType);
    }
    grow_chain(m, &linalg::identity(m.dim()), h, seed, max_tries)
}

/// A certified Hellinger chain lying inside `span(l_basis)`.
pub fn chain_in_subspace(
    m: &MatrixMeasure,
    l_basis: &Mat,
    h: &Vector,
    seed: u64,
    max_tries: usize,
) -> Result<HellingerChain> {
    if l_basis.nrows() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: l_basis.nrows(),
        });
    }
    linalg::check_orthonormal(l_basis, tol::ORTHONORMAL)?;
    if h.len() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: h.len(),
        });
    }
    let distance = (h - l_basis * (l_basis.adjoint() * h)).norm();
    if distance > tol::ORTHONORMAL * h.norm().max(1.0) {
        return Err(Error::NotInSubspace { distance });
    }
    if !is_maximal_type(m, h)? {
        return Err(Error::NotMaximalType);
    }
    let depth = multiplicity_function(m).total();
    if l_basis.ncols() < depth {
        return Err(Error::Invalid(format!(
            "subspace of dimension {} cannot hold a chain of length {depth}",
            l_basis.ncols()
        )));
    }
    grow_chain(m, l_basis, h, seed, max_tries)
}

fn check_level(chain: &HellingerChain, k: usize) -> Result<()> {
    if k == 0 || k > chain.len() {
        return Err(Error::OutOfRange {
            what: "exterior power degree",
            value: k,
            min: 1,
            max: chain.len(),
        });
    }
    Ok(())
}

/// Cells where the level-`k` block of the chain is nonsingular.
pub fn exterior_support(m: &MatrixMeasure, chain: &HellingerChain, k: usize) -> Result<SupportSet> {
    check_level(chain, k)?;
    let basis = check_vectors(m, chain.vectors())?;
    let ctx = ChainContext::new(m);
    Ok(nonsingular_cells(&ctx.field, &basis, k, &ctx.tol))
}

/// `(∧^k Ψ φ_k, φ_k) dρ`: cell weight `det Ψ_k(cell) · ρ(cell)`, with
/// numerically singular blocks given weight zero.
pub fn exterior_density(m: &MatrixMeasure, chain: &HellingerChain, k: usize) -> Result<ScalarMeasure> {
    check_level(chain, k)?;
    let basis = check_vectors(m, chain.vectors())?;
    let sub = basis.columns(0, k).into_owned();
    let ctx = ChainContext::new(m);
    let value = |id: &CellId| -> f64 {
        match ctx.field.get(id) {
            Some(cell) => {
                let block = compressed_block(&cell.density, &sub);
                if block_is_nonsingular(&block, &ctx.tol) {
                    block_determinant(&block) * cell.weight
                } else {
                    0.0
                }
            }
            None => 0.0,
        }
    };
    let atoms = m.atoms().iter().map(|a| (a.location, value(&CellId::Atom(a.location)))).collect();
    let ac = m.ac().map(|ac| {
        let densities = ac
            .grid()
            .windows(2)
            .map(|w| value(&CellId::Interval(w[0], w[1])) / (w[1] - w[0]))
            .collect();
        (ac.grid().to_vec(), densities)
    });
    ScalarMeasure::new(atoms, ac)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMethod {
    StandardBasis,
    Sampling,
    ExactAnalysis,
}

/// Outcome of the zero-pattern analysis of an atomic measure: the supports
/// `Γ(h)` reachable by nonzero vectors `h`.
#[derive(Clone, Debug, Serialize)]
pub struct ExactAnalysis {
    /// Reachable supports, as atom-location lists.
    pub achievable: Vec<Vec<f64>>,
    pub target_achievable: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct JuniorSearch {
    pub level: usize,
    pub target: SupportSet,
    #[serde(serialize_with = "serialize_opt_vector")]
    pub found: Option<Vector>,
    /// How the verdict was reached; `None` when sampling ran out without one.
    pub method: Option<SearchMethod>,
    pub samples_tried: usize,
    pub exact: Option<ExactAnalysis>,
}

fn serialize_opt_vector<S: serde::Serializer>(v: &Option<Vector>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => crate::io::serialize_vector(v, s),
        None => s.serialize_none(),
    }
}

impl JuniorSearch {
    /// Absence established by exact analysis rather than by failed sampling.
    pub fn absence_proved(&self) -> bool {
        self.found.is_none() && self.exact.as_ref().is_some_and(|e| !e.target_achievable)
    }
}

/// Looks for `g` with `Γ(g) = Γ_i(Σ)` mod ρ among the standard basis and
/// `n_samples` Gaussian vectors; small atomic measures fall back to exact
/// zero-pattern analysis.
pub fn junior_type_vector_search(m: &MatrixMeasure, i: usize, n_samples: usize, seed: u64) -> Result<JuniorSearch> {
    let multiplicity = multiplicity_function(m);
    let total = multiplicity.total();
    if i == 0 || i > total {
        return Err(Error::OutOfRange {
            what: "Hellinger type index",
            value: i,
            min: 1,
            max: total,
        });
    }
    let target = multiplicity.support(i);
    let mut search = JuniorSearch {
        level: i,
        target: target.clone(),
        found: None,
        method: None,
        samples_tried: 0,
        exact: None,
    };
    let dim = m.dim();
    for k in 0..dim {
        let mut e = Vector::zeros(dim);
        e[k] = linalg::ONE;
        if support_of_vector(m, &e)?.equivalent(&target) {
            search.found = Some(e);
            search.method = Some(SearchMethod::StandardBasis);
            return Ok(search);
        }
    }
    let mut rng = sampling::rng(seed);
    for n in 1..=n_samples {
        let g = sampling::gaussian_vector(&mut rng, dim);
        search.samples_tried = n;
        if support_of_vector(m, &g)?.equivalent(&target) {
            search.found = Some(g);
            search.method = Some(SearchMethod::Sampling);
            return Ok(search);
        }
    }
    if m.is_atomic() && dim <= EXACT_MAX_DIM && m.atoms().len() <= EXACT_MAX_ATOMS {
        let (analysis, witness) = exact_zero_patterns(m, &target, seed)?;
        search.found = witness;
        search.method = Some(SearchMethod::ExactAnalysis);
        search.exact = Some(analysis);
    }
    Ok(search)
}

/// For an atomic measure `Γ(h) = {t_i : A_i h ≠ 0}`. A pattern `S` is
/// reachable by a nonzero `h` iff `W = ⋂_{i∉S} ker A_i` is nonzero and not
/// contained in `ker A_i` for any `i ∈ S` (a vector space is not a finite
/// union of proper subspaces).
fn exact_zero_patterns(m: &MatrixMeasure, target: &SupportSet, seed: u64) -> Result<(ExactAnalysis, Option<Vector>)> {
    let rho = trace_measure(m);
    let null_level = tol::NULL_CELL * rho.total();
    let atoms: Vec<(f64, Mat)> = m
        .atoms()
        .iter()
        .filter_map(|a| {
            let w = linalg::trace_real(&a.value);
            (w > null_level).then(|| (a.location, &a.value * linalg::real(1.0 / w)))
        })
        .collect();
    let dim = m.dim();
    let target_mask: u32 = atoms
        .iter()
        .enumerate()
        .filter(|(_, (t, _))| target.contains(&CellId::Atom(*t)))
        .fold(0, |acc, (k, _)| acc | (1 << k));
    let mut achievable = Vec::new();
    let mut target_subspace = None;
    for mask in 0u32..(1 << atoms.len()) {
        let outside: Vec<&Mat> = atoms.iter().enumerate().filter(|(k, _)| mask & (1 << k) == 0).map(|(_, a)| &a.1).collect();
        let w = if outside.is_empty() {
            linalg::identity(dim)
        } else {
            let mut stacked = Mat::zeros(dim * outside.len(), dim);
            for (r, a) in outside.iter().enumerate() {
                stacked.view_mut((r * dim, 0), (dim, dim)).copy_from(*a);
            }
            linalg::kernel(&stacked, tol::RANK)
        };
        if w.ncols() == 0 {
            continue;
        }
        let reachable = atoms
            .iter()
            .enumerate()
            .filter(|(k, _)| mask & (1 << k) != 0)
            .all(|(_, (_, a))| linalg::numerical_rank(&(a * &w), tol::RANK) > 0);
        if reachable {
            achievable.push(
                atoms
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask & (1 << k) != 0)
                    .map(|(_, (t, _))| *t)
                    .collect(),
            );
            if mask == target_mask {
                target_subspace = Some(w);
            }
        }
    }
    let witness = match &target_subspace {
        Some(w) => {
            let mut rng = sampling::rng(seed);
            let mut found = None;
            for _ in 0..DEFAULT_MAX_TRIES {
                let g = sampling::gaussian_in_span(&mut rng, w);
                if support_of_vector(m, &g)?.equivalent(target) {
                    found = Some(g);
                    break;
                }
            }
            found
        }
        None => None,
    };
    Ok((
        ExactAnalysis {
            achievable,
            target_achievable: target_subspace.is_some(),
        },
        witness,
    ))
}
