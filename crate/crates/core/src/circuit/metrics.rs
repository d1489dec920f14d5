use serde::{Deserialize, Serialize};

use super::clifford::classify;
use super::{Circuit, Op};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CircuitMetrics {
    pub n_qubits: usize,
    pub gate_count: usize,
    pub depth: usize,
    pub non_clifford_count: usize,
}

/// Gate count, ASAP depth and non-Clifford count in one pass.
///
/// Every gate occupies one layer on all of its qubits. Measurements and resets
/// are not counted as gates and add no layer, but a measurement fences its
/// classical bit: a gate conditioned on that bit is scheduled after it.
pub fn metrics(circuit: &Circuit) -> CircuitMetrics {
    let mut qubit_level = vec![0usize; circuit.n_qubits];
    let mut clbit_level = vec![0usize; circuit.n_clbits];
    let mut out = CircuitMetrics {
        n_qubits: circuit.n_qubits,
        ..Default::default()
    };
    for op in &circuit.ops {
        match op {
            Op::Gate(g) => {
                out.gate_count += 1;
                if !classify(g) {
                    out.non_clifford_count += 1;
                }
                let start = g
                    .targets
                    .iter()
                    .chain(&g.controls)
                    .map(|&q| qubit_level[q])
                    .chain(g.cond.iter().map(|&(b, _)| clbit_level[b]))
                    .max()
                    .unwrap_or(0);
                let level = start + 1;
                for &q in g.targets.iter().chain(&g.controls) {
                    qubit_level[q] = level;
                }
                out.depth = out.depth.max(level);
            }
            Op::Measure { qubit, clbit } => {
                clbit_level[*clbit] = clbit_level[*clbit].max(qubit_level[*qubit]);
            }
            Op::Reset { .. } => {}
        }
    }
    out
}
