use super::matrix::local_unitary;
use super::{Circuit, Gate, GateKind, Op};

/// Largest qubit support a fused block may have.
pub const MAX_FUSED_QUBITS: usize = 3;

fn mergeable(op: &Op) -> Option<&Gate> {
    match op {
        Op::Gate(g) if g.cond.is_empty() && g.arity() <= MAX_FUSED_QUBITS => Some(g),
        _ => None,
    }
}

fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut u: Vec<usize> = a.iter().chain(b).copied().collect();
    u.sort_unstable();
    u.dedup();
    u
}

/// Greedy peephole fusion.
///
/// Each unconditioned gate is folded into the most recent operation touching
/// any of its qubits when that operation is itself a mergeable gate and the
/// combined support has at most [`MAX_FUSED_QUBITS`] qubits. Everything between
/// the two is disjoint from the incoming gate, so the fold only commutes it
/// past operations it already commutes with. Measurements, resets and
/// classically conditioned gates are never merged and act as barriers on their
/// qubits. Fused blocks that multiply out to the identity are dropped.
pub fn optimize(circuit: &Circuit) -> Circuit {
    let mut out: Vec<Op> = Vec::with_capacity(circuit.ops.len());
    let mut last: Vec<Option<usize>> = vec![None; circuit.n_qubits];

    for op in &circuit.ops {
        let qubits = op.qubits();
        let anchor = qubits.iter().filter_map(|&q| last[q]).max();
        if let (Some(incoming), Some(idx)) = (mergeable(op), anchor) {
            if let Some(existing) = mergeable(&out[idx]) {
                let support = union(&existing.support(), &qubits);
                if support.len() <= MAX_FUSED_QUBITS {
                    let matrix = local_unitary(incoming, &support).mul(&local_unitary(existing, &support));
                    for &q in &qubits {
                        last[q] = Some(idx);
                    }
                    out[idx] = Op::Gate(Gate::fused(support, matrix));
                    continue;
                }
            }
        }
        let idx = out.len();
        for &q in &qubits {
            last[q] = Some(idx);
        }
        out.push(op.clone());
    }

    let ops = out
        .into_iter()
        .filter(|op| match op {
            Op::Gate(Gate {
                kind: GateKind::Fused(f),
                ..
            }) => !f.matrix.is_identity(1e-12),
            _ => true,
        })
        .collect();
    Circuit {
        n_qubits: circuit.n_qubits,
        n_clbits: circuit.n_clbits,
        ops,
    }
}
