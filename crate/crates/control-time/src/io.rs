//! JSON exchange formats for matrices, generator sets, algebra bases,
//! schedules and exact word coefficients.

use std::path::Path;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bch::{WordCoefficientTable, WordTable};
use crate::error::{Error, Result};
use crate::lie::{closure, AlgebraBasis};
use crate::numerics::{ComplexMatrix, Tolerances};
use crate::schedule::ControlSchedule;

/// `{"dim": D, "entries": [[[re, im], …], …]}`, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        Self { dim: m.dim(), entries: m.rows().iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect() }
    }
}

impl TryFrom<&MatrixJson> for ComplexMatrix {
    type Error = Error;

    fn try_from(m: &MatrixJson) -> Result<Self> {
        if m.entries.len() != m.dim || m.entries.iter().any(|r| r.len() != m.dim) {
            return Err(Error::InvalidInput(format!("entries do not form a {0}×{0} matrix", m.dim)));
        }
        let rows: Vec<Vec<Complex64>> =
            m.entries.iter().map(|r| r.iter().map(|[re, im]| Complex64::new(*re, *im)).collect()).collect();
        ComplexMatrix::from_rows(&rows)
    }
}

/// Either `{"generators": [matrix, …]}` or a bare array of matrices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GeneratorsJson {
    Wrapped { generators: Vec<MatrixJson> },
    Bare(Vec<MatrixJson>),
}

impl GeneratorsJson {
    pub fn matrices(&self) -> Result<Vec<ComplexMatrix>> {
        let list = match self {
            GeneratorsJson::Wrapped { generators } => generators,
            GeneratorsJson::Bare(v) => v,
        };
        list.iter().map(ComplexMatrix::try_from).collect()
    }
}

/// Orthonormal basis with the origin of each element.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisJson {
    pub dim_space: usize,
    pub dimension: usize,
    pub elements: Vec<MatrixJson>,
    #[serde(default)]
    pub provenance: Vec<String>,
}

impl From<&AlgebraBasis> for BasisJson {
    fn from(b: &AlgebraBasis) -> Self {
        Self {
            dim_space: b.dim_space(),
            dimension: b.len(),
            elements: b.elements().iter().map(MatrixJson::from).collect(),
            provenance: b.provenance().iter().map(|p| p.to_string()).collect(),
        }
    }
}

impl BasisJson {
    /// Rebuilds the algebra as the closure of the stored elements.
    pub fn to_basis(&self, tol: &Tolerances) -> Result<AlgebraBasis> {
        let elems: Result<Vec<_>> = self.elements.iter().map(ComplexMatrix::try_from).collect();
        closure(&elems?, tol)
    }
}

/// `{"segments": [{"h": matrix, "dt": real}, …]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleJson {
    pub segments: Vec<SegmentJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentJson {
    pub h: MatrixJson,
    pub dt: f64,
}

impl From<&ControlSchedule> for ScheduleJson {
    fn from(s: &ControlSchedule) -> Self {
        Self { segments: s.segments().iter().map(|x| SegmentJson { h: MatrixJson::from(&x.h), dt: x.dt }).collect() }
    }
}

impl TryFrom<&ScheduleJson> for ControlSchedule {
    type Error = Error;

    fn try_from(s: &ScheduleJson) -> Result<Self> {
        let segs: Result<Vec<_>> = s.segments.iter().map(|x| Ok((ComplexMatrix::try_from(&x.h)?, x.dt))).collect();
        ControlSchedule::new(segs?)
    }
}

fn integer_value(n: &num_bigint::BigInt) -> Value {
    match n.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(n.to_string()),
    }
}

fn word_table_json(t: &WordTable) -> Value {
    let entries: Vec<Value> = t
        .iter()
        .map(|(w, q)| {
            let word: String = w.letters().iter().map(|c| char::from(b'0' + c)).collect();
            serde_json::json!({ "word": word, "num": integer_value(q.numer()), "den": integer_value(q.denom()) })
        })
        .collect();
    Value::Array(entries)
}

/// Exact `f`, `g` and `h` tables with fractions as `{"num": …, "den": …}`.
pub fn coefficients_json(table: &WordCoefficientTable) -> Value {
    serde_json::json!({
        "f_order": table.f.order(),
        "f": word_table_json(&table.f),
        "g": word_table_json(&table.g),
        "h": word_table_json(&table.h),
    })
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

pub fn read_matrix(path: &Path) -> Result<ComplexMatrix> {
    ComplexMatrix::try_from(&read_json::<MatrixJson>(path)?)
}

pub fn read_schedule(path: &Path) -> Result<ControlSchedule> {
    ControlSchedule::try_from(&read_json::<ScheduleJson>(path)?)
}

pub fn read_basis(path: &Path, tol: &Tolerances) -> Result<AlgebraBasis> {
    read_json::<BasisJson>(path)?.to_basis(tol)
}
