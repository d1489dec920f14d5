//! JSON form of a circuit:
//!
//! ```json
//! {"qubits": 3, "clbits": 1, "gates": [
//!   {"kind": "H", "targets": [0]},
//!   {"kind": "CPHASE", "targets": [1], "controls": [0], "param": 2},
//!   {"kind": "MEASURE", "targets": [1], "clbit": 0},
//!   {"kind": "X", "targets": [2], "cond": [[0, 1]]}
//! ]}
//! ```
//!
//! Phases are stored as the integer `param = j` of `R_j` (with an optional
//! `num = k` for `R_j^k`), never as floats. Only `FUSED` carries floats: a
//! row-major `matrix` of `[re, im]` pairs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Circuit, CircuitError, Gate, GateKind, Matrix, Op, Rot};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed circuit JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unknown gate kind {0:?}")]
    UnknownKind(String),
    #[error("gate {0} is missing field {1:?}")]
    MissingField(String, &'static str),
    #[error(transparent)]
    Invalid(#[from] CircuitError),
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonCircuit {
    qubits: usize,
    clbits: usize,
    gates: Vec<JsonOp>,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonOp {
    kind: String,
    targets: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    controls: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    cond: Vec<(usize, u8)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    param: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    num: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    clbit: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<[f64; 2]>>,
}

fn encode(op: &Op) -> JsonOp {
    let mut out = JsonOp {
        kind: String::new(),
        targets: Vec::new(),
        controls: Vec::new(),
        cond: Vec::new(),
        param: None,
        num: None,
        clbit: None,
        matrix: None,
    };
    match op {
        Op::Measure { qubit, clbit } => {
            out.kind = "MEASURE".into();
            out.targets = vec![*qubit];
            out.clbit = Some(*clbit);
        }
        Op::Reset { qubit } => {
            out.kind = "RESET".into();
            out.targets = vec![*qubit];
        }
        Op::Gate(g) => {
            out.kind = g.name().into();
            out.targets = g.targets.clone();
            out.controls = g.controls.clone();
            out.cond = g.cond.iter().map(|&(b, v)| (b, v as u8)).collect();
            match &g.kind {
                GateKind::Phase(r) => {
                    out.param = Some(r.level());
                    if r.numerator() != 1 {
                        out.num = Some(r.numerator());
                    }
                }
                GateKind::Fused(f) => {
                    out.matrix = Some(f.matrix.entries().iter().map(|z| [z.re, z.im]).collect());
                }
                _ => {}
            }
        }
    }
    out
}

fn decode(op: JsonOp) -> Result<Op, JsonError> {
    let target = |name: &str| {
        op.targets
            .first()
            .copied()
            .ok_or_else(|| JsonError::MissingField(name.to_string(), "targets"))
    };
    let kind = match op.kind.as_str() {
        "MEASURE" => {
            let clbit = op
                .clbit
                .ok_or_else(|| JsonError::MissingField(op.kind.clone(), "clbit"))?;
            return Ok(Op::Measure {
                qubit: target("MEASURE")?,
                clbit,
            });
        }
        "RESET" => {
            return Ok(Op::Reset {
                qubit: target("RESET")?,
            })
        }
        "H" => GateKind::H,
        "X" | "CX" | "CCX" | "MCX" => GateKind::X,
        "SWAP" => GateKind::Swap,
        "PHASE" | "CPHASE" => {
            let j = op
                .param
                .ok_or_else(|| JsonError::MissingField(op.kind.clone(), "param"))?;
            GateKind::Phase(Rot::new(op.num.unwrap_or(1), j))
        }
        "FUSED" => {
            let entries = op
                .matrix
                .as_ref()
                .ok_or_else(|| JsonError::MissingField(op.kind.clone(), "matrix"))?;
            let data: Vec<Complex64> = entries.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
            let len = data.len();
            let matrix = Matrix::from_row_major(data).ok_or(CircuitError::MatrixShape {
                expected: 1 << (2 * op.targets.len()),
                got: len,
            })?;
            GateKind::Fused(Box::new(super::Fused { matrix }))
        }
        other => return Err(JsonError::UnknownKind(other.to_string())),
    };
    Ok(Op::Gate(Gate {
        kind,
        targets: op.targets,
        controls: op.controls,
        cond: op.cond.into_iter().map(|(b, v)| (b, v != 0)).collect(),
    }))
}

pub fn to_json(circuit: &Circuit) -> String {
    let doc = JsonCircuit {
        qubits: circuit.n_qubits,
        clbits: circuit.n_clbits,
        gates: circuit.ops.iter().map(encode).collect(),
    };
    serde_json::to_string(&doc).expect("circuit serialization cannot fail")
}

/// Parses and validates a circuit.
pub fn from_json(text: &str) -> Result<Circuit, JsonError> {
    let doc: JsonCircuit = serde_json::from_str(text)?;
    let circuit = Circuit {
        n_qubits: doc.qubits,
        n_clbits: doc.clbits,
        ops: doc.gates.into_iter().map(decode).collect::<Result<_, _>>()?,
    };
    circuit.validate()?;
    Ok(circuit)
}
