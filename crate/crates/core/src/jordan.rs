//! Measure-charges: weak variation, trace-norm variation, the Jordan
//! decomposition and the Clifford block counterexample.

use rayon::prelude::*;
use serde::Serialize;

use crate::borel::BorelSet;
use crate::error::{Error, Result};
use crate::linalg::{self, real, real_matrix, Mat, Vector};
use crate::measure::{Atom, CellId, MatrixCharge, MatrixMeasure};

/// Largest Clifford block that is materialized (`2^10 = 1024`).
pub const CLIFFORD_CAP: usize = 10;
/// Blocks up to this index are also evaluated by SVD.
pub const CLIFFORD_SVD_MAX: usize = 6;

/// Total variation of `δ ↦ (Σ(δ)f, g)`.
pub fn weak_variation(ch: &MatrixCharge, f: &Vector, g: &Vector) -> Result<f64> {
    for v in [f, g] {
        if v.len() != ch.dim() {
            return Err(Error::DimensionMismatch {
                expected: ch.dim(),
                found: v.len(),
            });
        }
    }
    Ok(ch.cells().iter().map(|cell| linalg::form(&cell.mass, f, g).norm()).sum())
}

#[derive(Clone, Debug, Serialize)]
pub struct VariationReport {
    pub value: f64,
    pub infinite: bool,
    pub partition: Vec<CellId>,
    pub per_cell: Vec<f64>,
}

impl VariationReport {
    fn from_cells(partition: Vec<CellId>, per_cell: Vec<f64>) -> Self {
        let value: f64 = per_cell.iter().sum();
        VariationReport {
            value,
            infinite: !value.is_finite(),
            partition,
            per_cell,
        }
    }
}

/// `c(T) = sup_π Σ ‖T*Σ(Δ_i)T‖₁`. For finitely many cells the supremum is
/// the sum over atoms and grid intervals taken separately.
pub fn trace_norm_variation(ch: &MatrixCharge, t: &Mat) -> Result<VariationReport> {
    let conj = ch.conjugate_by(t)?;
    let (partition, per_cell) = conj
        .cells()
        .into_iter()
        .map(|cell| (cell.id, linalg::trace_norm_hermitian(&cell.mass)))
        .unzip();
    Ok(VariationReport::from_cells(partition, per_cell))
}

/// `Σ_i ‖T*Σ(Δ_i)T‖₁` for `Δ_i = [t_i, t_{i+1})`, including the two unbounded
/// end cells. `cuts` need not be sorted.
pub fn variation_over_partition(ch: &MatrixCharge, t: &Mat, cuts: &[f64]) -> Result<VariationReport> {
    let conj = ch.conjugate_by(t)?;
    let mut points: Vec<f64> = cuts.to_vec();
    if points.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("partition point".into()));
    }
    points.sort_by(f64::total_cmp);
    points.dedup();
    let mut edges = Vec::with_capacity(points.len() + 2);
    edges.push(f64::NEG_INFINITY);
    edges.extend(points);
    edges.push(f64::INFINITY);
    let (partition, per_cell) = edges
        .windows(2)
        .map(|w| {
            let mass = conj.eval(&BorelSet::interval(w[0], w[1]));
            (CellId::Interval(w[0], w[1]), linalg::trace_norm_hermitian(&mass))
        })
        .unzip();
    Ok(VariationReport::from_cells(partition, per_cell))
}

/// `Σ = Σ₁ − Σ₂` with `Σ₁, Σ₂` the cellwise positive and negative parts.
pub fn jordan_decompose(ch: &MatrixCharge) -> (MatrixMeasure, MatrixMeasure) {
    let pos = ch.map_values(ch.dim(), |m| linalg::hermitian_split(m).0);
    let neg = ch.map_values(ch.dim(), |m| linalg::hermitian_split(m).1);
    (MatrixMeasure::from_charge_unchecked(pos), MatrixMeasure::from_charge_unchecked(neg))
}

/// Jordan–Wigner generators `x_k = Z^{⊗(k−1)} ⊗ X ⊗ I^{⊗(n−k)}`.
pub fn clifford_generators(n: usize) -> Result<Vec<Mat>> {
    if n == 0 || n > CLIFFORD_CAP {
        return Err(Error::OutOfRange {
            what: "Clifford block index",
            value: n,
            min: 1,
            max: CLIFFORD_CAP,
        });
    }
    let x = real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0]);
    let z = real_matrix(2, 2, &[1.0, 0.0, 0.0, -1.0]);
    let i2 = linalg::identity(2);
    Ok((1..=n)
        .map(|k| {
            (1..=n).fold(linalg::identity(1), |acc, slot| {
                let factor = match slot.cmp(&k) {
                    std::cmp::Ordering::Less => &z,
                    std::cmp::Ordering::Equal => &x,
                    std::cmp::Ordering::Greater => &i2,
                };
                linalg::kron(&acc, factor)
            })
        })
        .collect())
}

/// `max_{i,j} ‖x_i x_j + x_j x_i − 2δ_ij I‖_max`.
pub fn anticommutation_defect(generators: &[Mat]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, a) in generators.iter().enumerate() {
        let id = linalg::identity(a.nrows());
        for (j, b) in generators.iter().enumerate().skip(i) {
            let anti = a * b + b * a;
            let target = if i == j { &id * real(2.0) } else { Mat::zeros(a.nrows(), a.ncols()) };
            worst = worst.max(linalg::max_abs_diff(&anti, &target));
        }
    }
    worst
}

/// Block `n` of the counterexample: atoms `x_k / √(2n)` at `1/k`, `k ≤ n`.
#[derive(Clone, Debug)]
pub struct CliffordBlockCharge {
    pub n: usize,
    pub generators: Vec<Mat>,
    pub charge: MatrixCharge,
}

impl CliffordBlockCharge {
    pub fn new(n: usize) -> Result<Self> {
        let generators = clifford_generators(n)?;
        let scale = 1.0 / (2.0 * n as f64).sqrt();
        let atoms = generators
            .iter()
            .enumerate()
            .map(|(k, x)| Atom::new(1.0 / (k + 1) as f64, x * real(scale)))
            .collect();
        let charge = MatrixCharge::new(1 << n, atoms, None)?;
        Ok(CliffordBlockCharge { n, generators, charge })
    }

    /// A unit vector attaining `sup_{‖f‖=1} Σ_k |(x_k f, f)| / √(2n) = 1/√2`:
    /// the top eigenvector of `Σ_k x_k`, whose square is `n I`.
    pub fn extremal_vector(&self) -> Vector {
        let sum = self.generators.iter().fold(Mat::zeros(1 << self.n, 1 << self.n), |acc, x| acc + x);
        let (_, vectors) = linalg::hermitian_eigen(&sum);
        vectors.column(vectors.ncols() - 1).into_owned()
    }
}

/// `‖x_k/√(2n)‖₁` summed over `k`, i.e. the block's trace-norm variation with `T = I`.
pub fn clifford_block_variation(n: usize) -> f64 {
    let n = n as f64;
    2f64.powf(n) * (n / 2.0).sqrt()
}

/// Default block weights `t_n = (n^{-3/2} 2^{-n})^{1/2}`.
pub fn default_clifford_weight(n: usize) -> f64 {
    let n = n as f64;
    (n.powf(-1.5) * 2f64.powf(-n)).sqrt()
}

#[derive(Clone, Debug, Serialize)]
pub struct CliffordBlockRow {
    pub n: usize,
    pub weight: f64,
    /// `t_n² 2ⁿ √(n/2)`.
    pub term: f64,
    /// `t_n² 2ⁿ`.
    pub hs_term: f64,
    pub partial_sum: f64,
    pub hs_partial_sum: f64,
    /// Unweighted block variation computed by SVD, for `n ≤ CLIFFORD_SVD_MAX`.
    pub svd_variation: Option<f64>,
    /// `|svd_variation − 2ⁿ√(n/2)|`.
    pub delta: Option<f64>,
    /// Weak variation at the extremal unit vector, for `n ≤ CLIFFORD_SVD_MAX`.
    pub weak_variation: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CliffordSeries {
    pub max_block: usize,
    pub blocks: Vec<CliffordBlockRow>,
    pub s: Vec<f64>,
    pub hs: Vec<f64>,
}

impl CliffordSeries {
    pub fn max_delta(&self) -> f64 {
        self.blocks.iter().filter_map(|b| b.delta).fold(0.0, f64::max)
    }
}

struct BlockNumerics {
    svd_variation: f64,
    weak_variation: f64,
}

fn block_numerics(n: usize) -> Result<BlockNumerics> {
    let block = CliffordBlockCharge::new(n)?;
    let svd_variation = block.charge.atoms().iter().map(|a| linalg::trace_norm(&a.value)).sum();
    let f = block.extremal_vector();
    let weak_variation = weak_variation(&block.charge, &f, &f)?;
    Ok(BlockNumerics {
        svd_variation,
        weak_variation,
    })
}

/// Partial sums `S_N = Σ_{n≤N} t_n² 2ⁿ √(n/2)` and `Σ_{n≤N} t_n² 2ⁿ`.
/// `weights` are the `t_n` for `n = 1..=max_block`; `None` uses the defaults.
pub fn clifford_variation_series(max_block: usize, weights: Option<&[f64]>) -> Result<CliffordSeries> {
    if max_block == 0 {
        return Err(Error::OutOfRange {
            what: "max block",
            value: 0,
            min: 1,
            max: usize::MAX,
        });
    }
    let weights: Vec<f64> = match weights {
        Some(w) => {
            if w.len() != max_block || w.iter().any(|&t| !(t > 0.0 && t.is_finite())) {
                return Err(Error::InvalidWeights);
            }
            w.to_vec()
        }
        None => (1..=max_block).map(default_clifford_weight).collect(),
    };
    let numerics = (1..=max_block.min(CLIFFORD_SVD_MAX))
        .into_par_iter()
        .map(block_numerics)
        .collect::<Result<Vec<_>>>()?;
    let mut blocks = Vec::with_capacity(max_block);
    let (mut partial, mut hs_partial) = (0.0, 0.0);
    for (idx, &t) in weights.iter().enumerate() {
        let n = idx + 1;
        let hs_term = t * t * 2f64.powi(n as i32);
        let term = hs_term * (n as f64 / 2.0).sqrt();
        partial += term;
        hs_partial += hs_term;
        let num = numerics.get(idx);
        blocks.push(CliffordBlockRow {
            n,
            weight: t,
            term,
            hs_term,
            partial_sum: partial,
            hs_partial_sum: hs_partial,
            svd_variation: num.map(|b| b.svd_variation),
            delta: num.map(|b| (b.svd_variation - clifford_block_variation(n)).abs()),
            weak_variation: num.map(|b| b.weak_variation),
        });
    }
    Ok(CliffordSeries {
        max_block,
        s: blocks.iter().map(|b| b.partial_sum).collect(),
        hs: blocks.iter().map(|b| b.hs_partial_sum).collect(),
        blocks,
    })
}
