use num_complex::Complex64;
use thiserror::Error;

use super::matrix::{local_unitary, Matrix};
use super::{Gate, GateKind};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CliffordError {
    #[error("Clifford test needs a gate on at most 3 qubits, got {0}")]
    TooManyQubits(usize),
}

const TOL: f64 = 1e-9;

/// Decides membership in the Clifford group by conjugating every generator
/// `X_i`, `Z_i` through the gate's unitary and testing for a Pauli string.
pub fn is_clifford(gate: &Gate) -> Result<bool, CliffordError> {
    let support = gate.support();
    if support.len() > 3 {
        return Err(CliffordError::TooManyQubits(support.len()));
    }
    let u = local_unitary(gate, &support);
    Ok(unitary_is_clifford(&u, support.len()))
}

pub(crate) fn unitary_is_clifford(u: &Matrix, n: usize) -> bool {
    let u_dag = u.adjoint();
    (0..n).all(|t| {
        let x = pauli_matrix(n, 1 << t, 0);
        let z = pauli_matrix(n, 0, 1 << t);
        is_pauli(&u.mul(&x).mul(&u_dag)) && is_pauli(&u.mul(&z).mul(&u_dag))
    })
}

/// `X^x_mask Z^z_mask` as a dense matrix.
fn pauli_matrix(n: usize, x_mask: usize, z_mask: usize) -> Matrix {
    let dim = 1 << n;
    let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
    for col in 0..dim {
        let sign = if (col & z_mask).count_ones() % 2 == 1 {
            -1.0
        } else {
            1.0
        };
        data[(col ^ x_mask) * dim + col] = Complex64::new(sign, 0.0);
    }
    Matrix::from_row_major(data).expect("square")
}

/// True iff `m` equals a Pauli string times a unit phase.
fn is_pauli(m: &Matrix) -> bool {
    let dim = m.dim();
    let Some(x_mask) = (0..dim).find(|&j| m.get(0, j).norm() > 0.5) else {
        return false;
    };
    let reference = m.get(0, x_mask);
    if (reference.norm() - 1.0).abs() > TOL {
        return false;
    }
    let mut z_mask = 0;
    let mut bit = 1;
    while bit < dim {
        let ratio = m.get(bit, bit ^ x_mask) / reference;
        if (ratio + 1.0).norm() < TOL {
            z_mask |= bit;
        }
        bit <<= 1;
    }
    for row in 0..dim {
        for col in 0..dim {
            let entry = m.get(row, col);
            if col == row ^ x_mask {
                let sign = if (row & z_mask).count_ones() % 2 == 1 {
                    -1.0
                } else {
                    1.0
                };
                if (entry - reference * sign).norm() > TOL {
                    return false;
                }
            } else if entry.norm() > TOL {
                return false;
            }
        }
    }
    true
}

/// Closed-form classification for the named gate kinds; `None` for fused
/// gates, which need the conjugation test.
pub fn is_clifford_by_table(gate: &Gate) -> Option<bool> {
    let controls = gate.controls.len();
    match &gate.kind {
        GateKind::H => Some(controls == 0),
        GateKind::X => Some(controls <= 1),
        GateKind::Swap => Some(controls == 0),
        GateKind::Phase(r) => Some(match controls {
            0 => r.level() <= 2,
            1 => r.level() <= 1,
            _ => r.is_identity(),
        }),
        GateKind::Fused(_) => None,
    }
}

/// Table lookup with the oracle as fallback for fused gates.
pub(crate) fn classify(gate: &Gate) -> bool {
    match is_clifford_by_table(gate) {
        Some(c) => c,
        None => {
            let GateKind::Fused(f) = &gate.kind else { unreachable!() };
            let n = gate.targets.len();
            n <= 3 && unitary_is_clifford(&f.matrix, n)
        }
    }
}
