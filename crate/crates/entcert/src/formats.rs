//! Structured text formats for witnesses, states and measurement records.
//!
//! Witness and state files are TOML with a `dims` list, an optional
//! `split` (factor indices of subsystem one) and one payload field:
//! `matrix` (row-major [re, im] pairs), `pauli` (an operator expression on
//! qubits) or, for states, `vector` (amplitudes as [re, im] pairs).
//! Measurement files hold `[[measurement]]` records with a witness
//! reference, the measured expectation value and its uncertainty.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::catalog::{named_witness, Witness, WitnessClass};
use crate::error::{Error, Result};
use crate::operator::{DensityMatrix, HermitianOperator, HilbertShape, StateVector};
use crate::pauli::parse_pauli;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WitnessFile {
    dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    split: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pauli: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    split: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vector: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<[f64; 2]>>,
}

/// One measured expectation value, tied to the witness it was taken with.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasurementRecord {
    /// Catalog name or file path; paths resolve relative to the record
    /// file. Absent means the caller supplies the witness out of band.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub c: f64,
    #[serde(default)]
    pub sigma: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct MeasurementsFile {
    #[serde(default, rename = "measurement")]
    measurements: Vec<MeasurementRecord>,
}

/// Maps a TOML parse failure onto the offending line and column.
fn parse_error(text: &str, err: toml::de::Error) -> Error {
    let (line, column) = err
        .span()
        .map(|span| {
            let upto = &text[..span.start.min(text.len())];
            let line = upto.bytes().filter(|&b| b == b'\n').count() + 1;
            let column = upto.len() - upto.rfind('\n').map_or(0, |k| k + 1) + 1;
            (line, column)
        })
        .unwrap_or((0, 0));
    Error::Parse {
        line,
        column,
        message: err.message().to_string(),
    }
}

fn shape_of(dims: &[usize], split: Option<&Vec<usize>>) -> Result<HilbertShape> {
    let shape = HilbertShape::new(dims)?;
    match split {
        Some(first) => shape.with_split(first),
        None => Ok(shape),
    }
}

fn entries_of(dim: usize, pairs: &[[f64; 2]], what: &str) -> Result<Vec<Complex64>> {
    if pairs.len() != dim * dim {
        return Err(Error::BadInput(format!(
            "{what} lists {} entries but dims give a {dim} x {dim} operator",
            pairs.len()
        )));
    }
    Ok(pairs.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
}

fn pairs_of(data: &[Complex64]) -> Vec<[f64; 2]> {
    data.iter().map(|z| [z.re, z.im]).collect()
}

pub fn parse_witness_text(text: &str) -> Result<Witness> {
    let file: WitnessFile = toml::from_str(text).map_err(|e| parse_error(text, e))?;
    let shape = shape_of(&file.dims, file.split.as_ref())?;
    let op = match (&file.matrix, &file.pauli) {
        (Some(pairs), None) => {
            let entries = entries_of(shape.total_dim(), pairs, "matrix")?;
            HermitianOperator::from_entries(shape.clone(), entries)?
        }
        (None, Some(expr)) => {
            if shape.dims().iter().any(|&d| d != 2) {
                return Err(Error::BadInput(
                    "pauli expressions require all tensor factors to be qubits".into(),
                ));
            }
            let op = parse_pauli(expr, shape.dims().len())?;
            // parse_pauli builds an unsplit qubit shape; reattach the split.
            match shape.split() {
                Some(_) => HermitianOperator::from_entries(shape.clone(), op.data().to_vec())?,
                None => op,
            }
        }
        (Some(_), Some(_)) => {
            return Err(Error::BadInput(
                "witness file sets both matrix and pauli; pick one".into(),
            ))
        }
        (None, None) => {
            return Err(Error::BadInput(
                "witness file needs either matrix or pauli".into(),
            ))
        }
    };
    let class = if shape.dims().len() == 2 || shape.split().is_some() {
        WitnessClass::Bipartite
    } else {
        WitnessClass::GenuineMultipartite
    };
    Ok(Witness::new(
        op,
        class,
        "loaded witness; bounds scale with its normalization",
    ))
}

/// Serializes a witness to the dense matrix form; reloading reproduces the
/// operator entrywise.
pub fn witness_text(w: &Witness) -> String {
    let file = WitnessFile {
        dims: w.op.shape().dims().to_vec(),
        split: w.op.shape().split().map(|s| s.to_vec()),
        matrix: Some(pairs_of(w.op.data())),
        pauli: None,
    };
    toml::to_string(&file).expect("witness serialization cannot fail")
}

pub fn parse_state_text(text: &str) -> Result<DensityMatrix> {
    let file: StateFile = toml::from_str(text).map_err(|e| parse_error(text, e))?;
    let shape = shape_of(&file.dims, file.split.as_ref())?;
    match (&file.vector, &file.matrix) {
        (Some(pairs), None) => {
            if pairs.len() != shape.total_dim() {
                return Err(Error::BadInput(format!(
                    "vector lists {} amplitudes but dims give dimension {}",
                    pairs.len(),
                    shape.total_dim()
                )));
            }
            let amp = pairs.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
            Ok(DensityMatrix::from_state(&StateVector::new(shape, amp)?))
        }
        (None, Some(pairs)) => {
            let entries = entries_of(shape.total_dim(), pairs, "matrix")?;
            DensityMatrix::new(HermitianOperator::from_entries(shape, entries)?)
        }
        (Some(_), Some(_)) => Err(Error::BadInput(
            "state file sets both vector and matrix; pick one".into(),
        )),
        (None, None) => Err(Error::BadInput(
            "state file needs either vector or matrix".into(),
        )),
    }
}

pub fn state_text(rho: &DensityMatrix) -> String {
    let file = StateFile {
        dims: rho.shape().dims().to_vec(),
        split: rho.shape().split().map(|s| s.to_vec()),
        vector: None,
        matrix: Some(pairs_of(rho.op().data())),
    };
    toml::to_string(&file).expect("state serialization cannot fail")
}

pub fn parse_measurements_text(text: &str) -> Result<Vec<MeasurementRecord>> {
    let file: MeasurementsFile = toml::from_str(text).map_err(|e| parse_error(text, e))?;
    for record in &file.measurements {
        if !(record.sigma >= 0.0) {
            return Err(Error::BadInput(format!(
                "measurement{} has negative uncertainty {}",
                record
                    .label
                    .as_deref()
                    .map(|l| format!(" '{l}'"))
                    .unwrap_or_default(),
                record.sigma
            )));
        }
    }
    Ok(file.measurements)
}

pub fn measurements_text(records: &[MeasurementRecord]) -> String {
    let file = MeasurementsFile {
        measurements: records.to_vec(),
    };
    toml::to_string(&file).expect("measurement serialization cannot fail")
}

pub fn load_measurements(path: &Path) -> Result<Vec<MeasurementRecord>> {
    parse_measurements_text(&std::fs::read_to_string(path)?)
}

pub fn load_state(path: &Path) -> Result<DensityMatrix> {
    parse_state_text(&std::fs::read_to_string(path)?)
}

/// Resolves a witness reference: a catalog name wins, anything else is
/// read as a file path, relative paths against `base`.
pub fn resolve_witness(spec: &str, base: Option<&Path>) -> Result<Witness> {
    match named_witness(spec) {
        Ok(w) => Ok(w),
        Err(Error::UnknownCatalogEntry(_)) => {
            let mut path = PathBuf::from(spec);
            if path.is_relative() {
                if let Some(dir) = base {
                    path = dir.join(path);
                }
            }
            let text = std::fs::read_to_string(&path).map_err(|e| {
                Error::BadInput(format!(
                    "witness '{spec}' is neither a catalog name nor a readable file: {e}"
                ))
            })?;
            parse_witness_text(&text)
        }
        Err(other) => Err(other),
    }
}

/// Catalog name or file path, resolved against the working directory.
pub fn load_witness(spec: &str) -> Result<Witness> {
    resolve_witness(spec, None)
}
