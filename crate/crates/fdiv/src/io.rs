//! JSON file formats for measures and circuits.
//!
//! Measure files:
//! ```json
//! { "domain": "theta", "atoms": [ { "params": [0.0, 1.57], "weight": 0.5 }, ... ] }
//! { "domain": "unitary", "atoms": [ { "label": "U2[...]", "weight": 0.5 }, ... ] }
//! ```
//! `theta` atoms carry parameter vectors in radians; `unitary` and
//! `abstract` atoms carry opaque labels.  Weights must be non-negative and
//! sum to one within the measure tolerance.
//!
//! Circuit files:
//! ```json
//! {
//!   "qubits": 2,
//!   "layers": [ [ { "pauli_sum": [[0.5, "IZ"]] }, { "pauli_sum": [[0.5, "ZI"]] } ] ],
//!   "observable": { "pauli_sum": [[1.0, "XX"]] },
//!   "init": "plus_all"
//! }
//! ```
//! `init` is either the string `plus_all` or a list of amplitudes, each a
//! real number or an `[re, im]` pair; the resulting vector must be
//! normalized.

use nalgebra::DVector;
use num_complex::Complex;
use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::circuit::{CircuitSpec, QuantumState};
use crate::error::{Error, Result};
use crate::measure::{DiscreteMeasure, DomainTag, ParameterPoint};
use crate::operator::HermitianOperator;

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct MeasureFile {
    domain: String,
    atoms: Vec<AtomEntry>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct AtomEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    params: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    weight: f64,
}

fn parse_err(path: &Path, detail: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{}: {detail}", path.display()))
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| parse_err(path, e))
}

/// Loads a measure file, validating weights and the domain tag.
pub fn load_measure(path: &Path) -> Result<DiscreteMeasure> {
    let text = read_file(path)?;
    let file: MeasureFile =
        serde_json::from_str(&text).map_err(|e| parse_err(path, e))?;
    match file.domain.as_str() {
        "theta" => {
            let mut atoms = Vec::with_capacity(file.atoms.len());
            for (i, entry) in file.atoms.into_iter().enumerate() {
                if entry.label.is_some() {
                    return Err(parse_err(
                        path,
                        format!("atom {i}: theta atoms carry `params`, not `label`"),
                    ));
                }
                let params = entry.params.ok_or_else(|| {
                    parse_err(path, format!("atom {i}: missing `params`"))
                })?;
                atoms.push((ParameterPoint::new(params)?, entry.weight));
            }
            DiscreteMeasure::from_points(atoms)
        }
        tag @ ("unitary" | "abstract") => {
            let domain = if tag == "unitary" {
                DomainTag::UnitaryGroup
            } else {
                DomainTag::Abstract
            };
            let mut atoms = Vec::with_capacity(file.atoms.len());
            for (i, entry) in file.atoms.into_iter().enumerate() {
                if entry.params.is_some() {
                    return Err(parse_err(
                        path,
                        format!("atom {i}: `{tag}` atoms carry `label`, not `params`"),
                    ));
                }
                let label = entry.label.ok_or_else(|| {
                    parse_err(path, format!("atom {i}: missing `label`"))
                })?;
                atoms.push((label, entry.weight));
            }
            DiscreteMeasure::from_labeled_tagged(domain, atoms)
        }
        other => Err(parse_err(
            path,
            format!("unknown domain `{other}`; expected `theta`, `unitary` or `abstract`"),
        )),
    }
}

/// Saves a measure.  Parameter atoms keep their angle vectors; unitary and
/// abstract atoms are written as labels (matrices are not serialized).
pub fn save_measure(path: &Path, measure: &DiscreteMeasure) -> Result<()> {
    let domain = measure.domain().to_string();
    let atoms = measure
        .atoms()
        .iter()
        .map(|atom| match atom.point() {
            Some(point) => AtomEntry {
                params: Some(point.angles().to_vec()),
                label: None,
                weight: atom.weight(),
            },
            None => AtomEntry {
                params: None,
                label: Some(atom.label().to_string()),
                weight: atom.weight(),
            },
        })
        .collect();
    let file = MeasureFile { domain, atoms };
    let mut text = serde_json::to_string_pretty(&file)
        .map_err(|e| parse_err(path, e))?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct CircuitFile {
    qubits: usize,
    layers: Vec<Vec<GateEntry>>,
    observable: GateEntry,
    init: InitEntry,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct GateEntry {
    pauli_sum: Vec<(f64, String)>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(untagged)]
enum InitEntry {
    Named(String),
    Amplitudes(Vec<AmplitudeEntry>),
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(untagged)]
enum AmplitudeEntry {
    Real(f64),
    Pair([f64; 2]),
}

impl AmplitudeEntry {
    fn to_complex(&self) -> Complex<f64> {
        match self {
            AmplitudeEntry::Real(re) => Complex::new(*re, 0.0),
            AmplitudeEntry::Pair([re, im]) => Complex::new(*re, *im),
        }
    }
}

/// Loads a circuit file: the layered gate generators, the initial state and
/// the observable.
pub fn load_circuit(path: &Path) -> Result<(CircuitSpec, QuantumState, HermitianOperator)> {
    let text = read_file(path)?;
    let file: CircuitFile =
        serde_json::from_str(&text).map_err(|e| parse_err(path, e))?;
    let mut layers = Vec::with_capacity(file.layers.len());
    for (l, layer) in file.layers.iter().enumerate() {
        let mut gates = Vec::with_capacity(layer.len());
        for (m, gate) in layer.iter().enumerate() {
            let op = HermitianOperator::from_pauli_sum(file.qubits, &gate.pauli_sum)
                .map_err(|e| parse_err(path, format!("layer {l} gate {m}: {e}")))?;
            gates.push(op);
        }
        layers.push(gates);
    }
    let circuit = CircuitSpec::new(file.qubits, layers)
        .map_err(|e| parse_err(path, e))?;
    let observable = HermitianOperator::from_pauli_sum(file.qubits, &file.observable.pauli_sum)
        .map_err(|e| parse_err(path, format!("observable: {e}")))?;
    let init = match &file.init {
        InitEntry::Named(name) if name == "plus_all" => QuantumState::plus_all(file.qubits),
        InitEntry::Named(name) => {
            return Err(parse_err(
                path,
                format!("unknown init `{name}`; expected `plus_all` or an amplitude list"),
            ))
        }
        InitEntry::Amplitudes(entries) => {
            let v = DVector::from_iterator(
                entries.len(),
                entries.iter().map(AmplitudeEntry::to_complex),
            );
            QuantumState::new(v).map_err(|e| parse_err(path, format!("init: {e}")))?
        }
    };
    Ok((circuit, init, observable))
}

/// Saves a circuit whose gates and observable were built from Pauli sums.
/// The initial state is written as explicit `[re, im]` amplitude pairs.
pub fn save_circuit(
    path: &Path,
    circuit: &CircuitSpec,
    init: &QuantumState,
    observable: &HermitianOperator,
) -> Result<()> {
    let sum_of = |op: &HermitianOperator, what: &str| -> Result<GateEntry> {
        op.pauli_sum()
            .map(|terms| GateEntry {
                pauli_sum: terms.to_vec(),
            })
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "{what} was not built from a Pauli sum and cannot be saved"
                ))
            })
    };
    let mut layers = Vec::with_capacity(circuit.layer_sizes().len());
    let mut j = 0;
    for &size in circuit.layer_sizes() {
        let mut layer = Vec::with_capacity(size);
        for _ in 0..size {
            layer.push(sum_of(circuit.gate_generator(j)?, "gate generator")?);
            j += 1;
        }
        layers.push(layer);
    }
    let file = CircuitFile {
        qubits: circuit.num_qubits(),
        layers,
        observable: sum_of(observable, "observable")?,
        init: InitEntry::Amplitudes(
            init.amplitudes()
                .iter()
                .map(|a| AmplitudeEntry::Pair([a.re, a.im]))
                .collect(),
        ),
    };
    let mut text = serde_json::to_string_pretty(&file)
        .map_err(|e| parse_err(path, e))?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}
