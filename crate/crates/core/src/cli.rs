//! The `opmeasure` command line.
//!
//! Every command writes one JSON report to standard output and a short
//! summary to standard error. Exit codes: 0 success, 2 invalid input,
//! 3 exhausted randomized search.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::dilation;
use crate::error::{Error, Result};
use crate::hellinger::{self, DEFAULT_MAX_TRIES};
use crate::io;
use crate::jordan;
use crate::l2;
use crate::linalg::{self, Mat};
use crate::maximal;
use crate::measure::MatrixMeasure;
use crate::multiplicity;
use crate::sampling;
use crate::tol::{self, Tolerances};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_EXHAUSTED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "opmeasure", version, about = "Spectral analysis of matrix-valued measures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Multiplicity function, total multiplicity and Hellinger supports.
    Multiplicity {
        measure: PathBuf,
        /// Relative numerical-rank tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Certified Hellinger chain, exterior densities and junior-type searches.
    Hellinger {
        measure: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        subspace: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_MAX_TRIES)]
        tries: usize,
        /// Gaussian samples per junior-type search.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Sample a vector of maximal type and estimate the maximal-type fraction.
    MaximalType {
        measure: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_TRIES)]
        tries: usize,
        #[arg(long)]
        subspace: Option<PathBuf>,
    },
    /// Minimal orthogonal dilation of an atomic POVM.
    Dilate { povm: PathBuf },
    /// Check the density form of the L₂ norm on random step functions.
    L2Check {
        measure: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long, visible_alias = "samples", default_value_t = 100)]
        trials: usize,
    },
    /// Jordan decomposition and trace-norm variation of a charge.
    Jordan { charge: PathBuf },
    /// Partial sums of the Clifford block series.
    CliffordDemo {
        #[arg(long, default_value_t = 6)]
        max_block: usize,
        /// Comma-separated block weights t_1, …, t_N.
        #[arg(long)]
        weights: Option<String>,
    },
    /// Subordination and equivalence between two measures.
    Compare {
        first: PathBuf,
        second: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Serialize)]
struct FileDigest {
    role: &'static str,
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct Inputs {
    files: Vec<FileDigest>,
    flags: BTreeMap<&'static str, Value>,
}

#[derive(Serialize)]
pub struct Report {
    command: &'static str,
    inputs: Inputs,
    results: Value,
    diagnostics: Value,
}

struct Outcome {
    report: Report,
    summary: String,
}

struct Loader {
    files: Vec<FileDigest>,
}

impl Loader {
    fn read(&mut self, role: &'static str, path: &Path) -> Result<String> {
        let bytes = std::fs::read(path)?;
        self.files.push(FileDigest {
            role,
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        });
        String::from_utf8(bytes).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
    }

    fn measure(&mut self, role: &'static str, path: &Path) -> Result<MatrixMeasure> {
        let text = self.read(role, path)?;
        io::parse_measure(&text)
    }

    fn nonzero_measure(&mut self, role: &'static str, path: &Path) -> Result<MatrixMeasure> {
        let m = self.measure(role, path)?;
        if m.is_zero() {
            return Err(Error::ZeroMeasure);
        }
        Ok(m)
    }

    fn basis(&mut self, path: &Path, dim: usize) -> Result<Mat> {
        let text = self.read("subspace", path)?;
        let basis = io::parse_basis(&text, dim)?;
        linalg::check_orthonormal(&basis, tol::ORTHONORMAL)?;
        Ok(basis)
    }
}

fn tolerances(tol: Option<f64>) -> Result<Tolerances> {
    match tol {
        None => Ok(Tolerances::DEFAULT),
        Some(t) if t > 0.0 && t.is_finite() => Ok(Tolerances::DEFAULT.with_rank(t)),
        Some(t) => Err(Error::Invalid(format!("--tol must be a positive number, got {t}"))),
    }
}

fn tolerance_json(t: &Tolerances) -> Value {
    json!({
        "rank": t.rank,
        "support": t.support,
        "determinant": t.determinant,
        "null_cell": t.null_cell,
        "support_equivalence": tol::SUPPORT_EQUIVALENCE,
    })
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

fn labels(set: &multiplicity::SupportSet) -> Vec<String> {
    set.ids().map(|id| id.to_string()).collect()
}

fn multiplicity_cmd(loader: &mut Loader, path: &Path, tol: Option<f64>) -> Result<(Value, Value, String)> {
    let tols = tolerances(tol)?;
    let m = loader.nonzero_measure("measure", path)?;
    let n = multiplicity::multiplicity_function_with(&m, &crate::measure::trace_measure(&m), &tols)?;
    let gamma = n.supports();
    let counts: BTreeMap<String, usize> = n.cells().iter().map(|c| (c.cell.to_string(), c.multiplicity)).collect();
    let summary = format!(
        "m = {}; N = {}; gamma = [{}]",
        n.total(),
        n.cells()
            .iter()
            .map(|c| format!("{}:{}", c.cell, c.multiplicity))
            .collect::<Vec<_>>()
            .join(", "),
        gamma.iter().map(|g| labels(g).join(" ")).collect::<Vec<_>>().join("; ")
    );
    let results = json!({
        "cells": to_value(&n.cells()),
        "N": counts,
        "m": n.total(),
        "gamma": to_value(&gamma),
        "gamma_labels": gamma.iter().map(labels).collect::<Vec<_>>(),
        "i0": n.junior_threshold(),
    });
    Ok((results, json!({ "tolerances": tolerance_json(&tols) }), summary))
}

fn hellinger_cmd(
    loader: &mut Loader,
    path: &Path,
    seed: u64,
    subspace: Option<&Path>,
    tries: usize,
    samples: usize,
) -> Result<(Value, Value, String)> {
    let m = loader.nonzero_measure("measure", path)?;
    let n = multiplicity::multiplicity_function(&m);
    let depth = n.total();
    let (chain, first) = match subspace {
        Some(p) => {
            let basis = loader.basis(p, m.dim())?;
            let first = maximal::sample_maximal_in_span(&m, &basis, seed, tries)?;
            let chain = hellinger::chain_in_subspace(&m, &basis, &first.vector, seed.wrapping_add(1), tries)?;
            (chain, first)
        }
        None => {
            let first = maximal::sample_maximal_type(&m, seed, tries)?;
            let chain = hellinger::build_hellinger_chain(&m, &first.vector, seed.wrapping_add(1), tries)?;
            (chain, first)
        }
    };
    let criterion = hellinger::chain_criterion_levels(&m, chain.vectors())?;
    let mut levels = Vec::with_capacity(depth);
    for k in 1..=chain.len() {
        let exterior = hellinger::exterior_support(&m, &chain, k)?;
        let gamma = multiplicity::hellinger_support(&m, k);
        levels.push(json!({
            "k": k,
            "gamma": to_value(&gamma),
            "exterior_support": to_value(&exterior),
            "support_identity": exterior.equivalent(&gamma),
            "criterion": criterion[k - 1],
            "exterior_density": to_value(&hellinger::exterior_density(&m, &chain, k)?),
        }));
    }
    let junior = (2..=depth)
        .map(|i| hellinger::junior_type_vector_search(&m, i, samples, seed.wrapping_add(i as u64)).map(|s| to_value(&s)))
        .collect::<Result<Vec<_>>>()?;
    let summary = format!(
        "chain of length {} verified to depth {} (m = {depth})",
        chain.len(),
        chain.verified_depth()
    );
    let results = json!({
        "m": depth,
        "i0": n.junior_threshold(),
        "chain": to_value(&chain),
        "levels": levels,
        "junior": junior,
    });
    let diagnostics = json!({
        "tolerances": tolerance_json(&Tolerances::DEFAULT),
        "seed": seed,
        "first_vector_tries": first.tries,
        "tries_per_level": chain.tries_per_level(),
        "max_tries": tries,
    });
    Ok((results, diagnostics, summary))
}

fn maximal_cmd(
    loader: &mut Loader,
    path: &Path,
    seed: u64,
    samples: usize,
    tries: usize,
    subspace: Option<&Path>,
) -> Result<(Value, Value, String)> {
    let m = loader.nonzero_measure("measure", path)?;
    let basis = match subspace {
        Some(p) => loader.basis(p, m.dim())?,
        None => linalg::identity(m.dim()),
    };
    let sample = maximal::sample_maximal_type(&m, seed, tries)?;
    let fraction = maximal::maximal_type_fraction(&m, &basis, samples, seed.wrapping_add(1))?;
    let gamma1 = multiplicity::hellinger_support(&m, 1);
    let summary = format!(
        "maximal-type vector after {} tries; fraction {fraction} over {samples} samples in a {}-dimensional subspace",
        sample.tries,
        basis.ncols()
    );
    let results = json!({
        "vector": to_value(&sample),
        "support": to_value(&maximal::support_of_vector(&m, &sample.vector)?),
        "gamma1": to_value(&gamma1),
        "fraction": fraction,
        "samples": samples,
        "subspace_dim": basis.ncols(),
    });
    let diagnostics = json!({
        "tolerances": tolerance_json(&Tolerances::DEFAULT),
        "seed": seed,
        "tries": sample.tries,
        "max_tries": tries,
    });
    Ok((results, diagnostics, summary))
}

fn dilate_cmd(loader: &mut Loader, path: &Path) -> Result<(Value, Value, String)> {
    let m = loader.measure("povm", path)?;
    let d = dilation::naimark_dilate(&m)?;
    let equivalent = multiplicity::is_spectrally_equivalent(&m, &d.e);
    let summary = format!(
        "dilation dimension {} (minimal: {}, spectrally equivalent: {equivalent})",
        d.big_dim, d.minimal
    );
    let results = json!({
        "big_dim": d.big_dim,
        "E": io::measure_to_json(&d.e),
        "V": to_value(&io::matrix_to_doc(&d.v)),
        "blocks": d.blocks,
        "minimal": d.minimal,
        "spectrally_equivalent": equivalent,
    });
    let diagnostics = json!({
        "isometry_deviation": d.isometry_deviation(),
        "reconstruction_deviation": d.reconstruction_deviation(&m),
        "povm_tolerance": tol::POVM_SUM,
        "range_tolerance": tol::RANGE,
    });
    Ok((results, diagnostics, summary))
}

const L2_IDENTITY_TOL: f64 = 1e-10;
const L2_INDEPENDENCE_TOL: f64 = 1e-8;
const L2_MAX_COND: f64 = 1e3;

fn l2_cmd(loader: &mut Loader, path: &Path, seed: u64, trials: usize) -> Result<(Value, Value, String)> {
    let m = loader.nonzero_measure("measure", path)?;
    let mut identity_dev: f64 = 0.0;
    let mut independence_dev: f64 = 0.0;
    for k in 0..trials {
        let mut rng = sampling::lane_rng(seed, k as u64);
        let f = l2::random_function(&mut rng, &m);
        let direct = l2::norm_squared(&f, &m)?;
        let via_identity = l2::norm_via_density(&f, &m, &linalg::identity(m.dim()))?;
        identity_dev = identity_dev.max((direct - via_identity).abs() / (1.0 + direct));
        let t = sampling::random_conditioned(&mut rng, m.dim(), L2_MAX_COND);
        let via_t = l2::norm_via_density(&f, &m, &t)?;
        independence_dev = independence_dev.max((via_t - via_identity).abs() / via_identity.abs().max(f64::MIN_POSITIVE));
    }
    let identity_ok = identity_dev <= L2_IDENTITY_TOL;
    let independence_ok = independence_dev <= L2_INDEPENDENCE_TOL;
    let summary = format!(
        "{trials} trials: norm identity deviation {identity_dev:e} ({}), T-independence deviation {independence_dev:e} ({})",
        if identity_ok { "pass" } else { "FAIL" },
        if independence_ok { "pass" } else { "FAIL" }
    );
    let results = json!({
        "trials": trials,
        "max_identity_deviation": identity_dev,
        "max_independence_deviation": independence_dev,
        "identity_ok": identity_ok,
        "independence_ok": independence_ok,
    });
    let diagnostics = json!({
        "seed": seed,
        "identity_tolerance": L2_IDENTITY_TOL,
        "independence_tolerance": L2_INDEPENDENCE_TOL,
        "max_condition_number": L2_MAX_COND,
    });
    Ok((results, diagnostics, summary))
}

fn jordan_cmd(loader: &mut Loader, path: &Path) -> Result<(Value, Value, String)> {
    let text = loader.read("charge", path)?;
    let ch = io::parse_charge(&text)?;
    let (pos, neg) = jordan::jordan_decompose(&ch);
    let variation = jordan::trace_norm_variation(&ch, &linalg::identity(ch.dim()))?;
    let splitting: f64 = pos
        .cells()
        .iter()
        .zip(neg.cells())
        .map(|(p, n)| linalg::trace_real(&p.mass) + linalg::trace_real(&n.mass))
        .sum();
    let summary = format!("trace-norm variation {}; Jordan parts have total trace {splitting}", variation.value);
    let results = json!({
        "positive": io::measure_to_json(&pos),
        "negative": io::measure_to_json(&neg),
        "variation": to_value(&variation),
        "split_trace": splitting,
    });
    Ok((results, json!({ "hermitian_tolerance": tol::HERMITIAN }), summary))
}

fn parse_weights(csv: &str) -> Result<Vec<f64>> {
    csv.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| Error::InvalidWeights))
        .collect()
}

fn clifford_cmd(max_block: usize, weights: Option<&str>) -> Result<(Value, Value, String)> {
    let parsed = weights.map(parse_weights).transpose()?;
    let series = jordan::clifford_variation_series(max_block, parsed.as_deref())?;
    let summary = format!(
        "S_{max_block} = {}; HS proxy = {}; max SVD delta {:e}",
        series.s[max_block - 1],
        series.hs[max_block - 1],
        series.max_delta()
    );
    let results = json!({
        "max_block": max_block,
        "S": series.s,
        "hs_proxy": series.hs,
        "deltas": series.blocks.iter().map(|b| b.delta).collect::<Vec<_>>(),
        "blocks": to_value(&series.blocks),
    });
    let diagnostics = json!({
        "default_weights": weights.is_none(),
        "svd_blocks": max_block.min(jordan::CLIFFORD_SVD_MAX),
        "cap": jordan::CLIFFORD_CAP,
    });
    Ok((results, diagnostics, summary))
}

fn compare_cmd(loader: &mut Loader, first: &Path, second: &Path, tol: Option<f64>) -> Result<(Value, Value, String)> {
    let tols = tolerances(tol)?;
    let a = loader.measure("first", first)?;
    let b = loader.measure("second", second)?;
    let q = if a.is_atomic() && b.is_atomic() {
        Some(l2::q_unitarily_equivalent(&a, &b)?)
    } else {
        None
    };
    let equivalent = multiplicity::is_spectrally_equivalent_with(&a, &b, &tols);
    let summary = format!(
        "spectrally equivalent: {equivalent}; Q unitarily equivalent: {}",
        q.map_or("n/a".to_string(), |x| x.to_string())
    );
    let results = json!({
        "subordinate": multiplicity::is_subordinate(&a, &b),
        "subordinate_reverse": multiplicity::is_subordinate(&b, &a),
        "spectrally_subordinate": multiplicity::is_spectrally_subordinate_with(&a, &b, &tols),
        "spectrally_subordinate_reverse": multiplicity::is_spectrally_subordinate_with(&b, &a, &tols),
        "spectrally_equivalent": equivalent,
        "q_unitarily_equivalent": q,
    });
    Ok((results, json!({ "tolerances": tolerance_json(&tols) }), summary))
}

fn flag<T: Serialize>(flags: &mut BTreeMap<&'static str, Value>, name: &'static str, v: T) {
    flags.insert(name, to_value(&v));
}

fn execute(command: Command) -> Result<Outcome> {
    let mut loader = Loader { files: Vec::new() };
    let mut flags = BTreeMap::new();
    let (name, (results, diagnostics, summary)) = match &command {
        Command::Multiplicity { measure, tol } => {
            flag(&mut flags, "tol", tol);
            ("multiplicity", multiplicity_cmd(&mut loader, measure, *tol)?)
        }
        Command::Hellinger {
            measure,
            seed,
            subspace,
            tries,
            samples,
        } => {
            flag(&mut flags, "seed", seed);
            flag(&mut flags, "tries", tries);
            flag(&mut flags, "samples", samples);
            (
                "hellinger",
                hellinger_cmd(&mut loader, measure, *seed, subspace.as_deref(), *tries, *samples)?,
            )
        }
        Command::MaximalType {
            measure,
            seed,
            samples,
            tries,
            subspace,
        } => {
            flag(&mut flags, "seed", seed);
            flag(&mut flags, "samples", samples);
            flag(&mut flags, "tries", tries);
            (
                "maximal-type",
                maximal_cmd(&mut loader, measure, *seed, *samples, *tries, subspace.as_deref())?,
            )
        }
        Command::Dilate { povm } => ("dilate", dilate_cmd(&mut loader, povm)?),
        Command::L2Check { measure, seed, trials } => {
            flag(&mut flags, "seed", seed);
            flag(&mut flags, "trials", trials);
            ("l2-check", l2_cmd(&mut loader, measure, *seed, *trials)?)
        }
        Command::Jordan { charge } => ("jordan", jordan_cmd(&mut loader, charge)?),
        Command::CliffordDemo { max_block, weights } => {
            flag(&mut flags, "max_block", max_block);
            flag(&mut flags, "weights", weights);
            ("clifford-demo", clifford_cmd(*max_block, weights.as_deref())?)
        }
        Command::Compare { first, second, tol } => {
            flag(&mut flags, "tol", tol);
            ("compare", compare_cmd(&mut loader, first, second, *tol)?)
        }
    };
    Ok(Outcome {
        report: Report {
            command: name,
            inputs: Inputs {
                files: loader.files,
                flags,
            },
            results,
            diagnostics,
        },
        summary,
    })
}

/// Runs the command line `args` (including the program name), writing the
/// report to `out` and diagnostics to `err`. Returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command) {
        Ok(outcome) => {
            let text = serde_json::to_string_pretty(&outcome.report).expect("report serializes");
            let _ = writeln!(out, "{text}");
            let _ = writeln!(err, "{}: {}", outcome.report.command, outcome.summary);
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_exhausted() {
                EXIT_EXHAUSTED
            } else {
                EXIT_INVALID
            }
        }
    }
}

/// [`run_with`] on the process's standard streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
