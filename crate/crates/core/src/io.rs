//! JSON formats for measures, charges and vector bases.
//!
//! ```json
//! { "dim": 2,
//!   "kind": "measure",
//!   "atoms": [ { "t": 1.0, "matrix": [[[1,0],[0,0]], [[0,0],[0,0]]] } ],
//!   "ac": { "grid": [0.0, 1.0], "densities": [ [[[1,0],[0,0]], [[0,0],[1,0]]] ] } }
//! ```
//!
//! Matrices are row-major; complex entries are `[re, im]` pairs (a bare
//! number is read as a real entry). `kind` is `"measure"` (default) or
//! `"charge"`.

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{c, Mat, Vector};
use crate::measure::{AcPart, Atom, MatrixCharge, MatrixMeasure};

#[derive(Clone, Copy, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum Entry {
    Pair([f64; 2]),
    Real(f64),
}

impl Entry {
    fn value(self) -> num_complex::Complex64 {
        match self {
            Entry::Pair([re, im]) => c(re, im),
            Entry::Real(re) => c(re, 0.0),
        }
    }
}

pub type MatrixDoc = Vec<Vec<Entry>>;
pub type VectorDoc = Vec<Entry>;

#[derive(Clone, Copy, Debug, Default, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    #[default]
    Measure,
    Charge,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct AtomDoc {
    pub t: f64,
    pub matrix: MatrixDoc,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct AcDoc {
    pub grid: Vec<f64>,
    pub densities: Vec<MatrixDoc>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureDoc {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "is_measure")]
    pub kind: Kind,
    #[serde(default)]
    pub atoms: Vec<AtomDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ac: Option<AcDoc>,
}

fn is_measure(k: &Kind) -> bool {
    *k == Kind::Measure
}

pub fn matrix_from_doc(doc: &MatrixDoc, dim: usize, what: &str) -> Result<Mat> {
    if doc.len() != dim || doc.iter().any(|row| row.len() != dim) {
        return Err(Error::Invalid(format!("{what}: expected a {dim}x{dim} matrix")));
    }
    Ok(Mat::from_fn(dim, dim, |i, j| doc[i][j].value()))
}

pub fn matrix_to_doc(m: &Mat) -> MatrixDoc {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| Entry::Pair([m[(i, j)].re, m[(i, j)].im])).collect())
        .collect()
}

pub fn vector_from_doc(doc: &VectorDoc) -> Vector {
    Vector::from_iterator(doc.len(), doc.iter().map(|e| e.value()))
}

pub fn vector_to_doc(v: &Vector) -> VectorDoc {
    v.iter().map(|z| Entry::Pair([z.re, z.im])).collect()
}

pub fn serialize_vector<S: Serializer>(v: &Vector, s: S) -> std::result::Result<S::Ok, S::Error> {
    vector_to_doc(v).serialize(s)
}

pub fn serialize_vectors<S: Serializer>(vs: &[Vector], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(vs.iter().map(vector_to_doc))
}

pub fn serialize_matrix<S: Serializer>(m: &Mat, s: S) -> std::result::Result<S::Ok, S::Error> {
    matrix_to_doc(m).serialize(s)
}

impl MeasureDoc {
    pub fn to_charge(&self) -> Result<MatrixCharge> {
        let atoms = self
            .atoms
            .iter()
            .map(|a| Ok(Atom::new(a.t, matrix_from_doc(&a.matrix, self.dim, &format!("atom at {}", a.t))?)))
            .collect::<Result<Vec<_>>>()?;
        let ac = match &self.ac {
            Some(ac) => {
                let densities = ac
                    .densities
                    .iter()
                    .enumerate()
                    .map(|(j, d)| matrix_from_doc(d, self.dim, &format!("density {j}")))
                    .collect::<Result<Vec<_>>>()?;
                Some(AcPart::new(ac.grid.clone(), densities)?)
            }
            None => None,
        };
        MatrixCharge::new(self.dim, atoms, ac)
    }

    pub fn from_charge(m: &MatrixCharge, kind: Kind) -> Self {
        MeasureDoc {
            dim: m.dim(),
            kind,
            atoms: m
                .atoms()
                .iter()
                .map(|a| AtomDoc {
                    t: a.location,
                    matrix: matrix_to_doc(&a.value),
                })
                .collect(),
            ac: m.ac().map(|ac| AcDoc {
                grid: ac.grid().to_vec(),
                densities: ac.densities().iter().map(matrix_to_doc).collect(),
            }),
        }
    }
}

pub fn parse_charge(text: &str) -> Result<MatrixCharge> {
    serde_json::from_str::<MeasureDoc>(text)?.to_charge()
}

/// Parses a measure; documents tagged `"kind": "charge"` are rejected.
pub fn parse_measure(text: &str) -> Result<MatrixMeasure> {
    let doc: MeasureDoc = serde_json::from_str(text)?;
    if doc.kind == Kind::Charge {
        return Err(Error::Invalid("expected a measure, found a charge".into()));
    }
    MatrixMeasure::try_from_charge(doc.to_charge()?)
}

pub fn measure_to_json(m: &MatrixMeasure) -> serde_json::Value {
    serde_json::to_value(MeasureDoc::from_charge(m.as_charge(), Kind::Measure)).expect("measure serializes")
}

pub fn charge_to_json(m: &MatrixCharge) -> serde_json::Value {
    serde_json::to_value(MeasureDoc::from_charge(m, Kind::Charge)).expect("charge serializes")
}

/// A basis file: a JSON list of vectors, returned as the columns of a matrix.
pub fn parse_basis(text: &str, dim: usize) -> Result<Mat> {
    let docs: Vec<VectorDoc> = serde_json::from_str(text)?;
    if docs.is_empty() {
        return Err(Error::Invalid("basis is empty".into()));
    }
    let vectors: Vec<Vector> = docs.iter().map(vector_from_doc).collect();
    if let Some(v) = vectors.iter().find(|v| v.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: v.len(),
        });
    }
    Ok(crate::linalg::columns(&vectors, dim))
}
