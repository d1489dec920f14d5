//! Gate-level circuit representation shared by the builders, the optimizer,
//! the metrics and the simulator.
//!
//! Qubit 0 is the least significant bit of the first register. A gate is a
//! base operation (`H`, `X`, a dyadic phase, `SWAP`, or a dense fused unitary)
//! together with its target qubits, control qubits and an optional classical
//! condition. Names such as `CX`, `CCX`, `MCX` and `CPHASE` are derived from the
//! number of controls.

mod clifford;
mod json;
mod matrix;
mod metrics;
mod optimize;
mod rot;

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

pub use clifford::{is_clifford, is_clifford_by_table, CliffordError};
pub use json::{from_json, to_json, JsonError};
pub use matrix::{local_unitary, Matrix};
pub use metrics::{metrics, CircuitMetrics};
pub use optimize::{optimize, MAX_FUSED_QUBITS};
pub use rot::{Rot, MAX_ROT_LEVEL};

#[derive(Debug, Error, PartialEq)]
pub enum CircuitError {
    #[error("qubit {qubit} out of range for a {n_qubits}-qubit circuit")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },
    #[error("classical bit {bit} out of range for {n_clbits} bits")]
    ClbitOutOfRange { bit: usize, n_clbits: usize },
    #[error("qubit {0} appears more than once in one gate")]
    DuplicateQubit(usize),
    #[error("gate {kind} expects {expected} target(s), got {got}")]
    TargetArity {
        kind: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("classical bit {0} is read before any measurement writes it")]
    UnwrittenCondition(usize),
    #[error("fused matrix is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("fused matrix has {got} entries, expected {expected}")]
    MatrixShape { expected: usize, got: usize },
    #[error("circuits with measurement or reset have no inverse")]
    NotInvertible,
    #[error("register widths differ ({0} vs {1})")]
    WidthMismatch(usize, usize),
}

/// Dense unitary acting on `targets` (bit `b` of the matrix index is `targets[b]`).
#[derive(Debug, Clone, PartialEq)]
pub struct Fused {
    pub matrix: Matrix,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    H,
    X,
    Phase(Rot),
    Swap,
    Fused(Box<Fused>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub targets: Vec<usize>,
    pub controls: Vec<usize>,
    /// Apply only if every listed classical bit has the given value.
    pub cond: Vec<(usize, bool)>,
}

impl Gate {
    pub fn new(kind: GateKind, targets: Vec<usize>, controls: Vec<usize>) -> Self {
        Gate {
            kind,
            targets,
            controls,
            cond: Vec::new(),
        }
    }

    pub fn h(q: usize) -> Self {
        Gate::new(GateKind::H, vec![q], vec![])
    }

    pub fn x(q: usize) -> Self {
        Gate::new(GateKind::X, vec![q], vec![])
    }

    pub fn cx(c: usize, t: usize) -> Self {
        Gate::new(GateKind::X, vec![t], vec![c])
    }

    pub fn ccx(c0: usize, c1: usize, t: usize) -> Self {
        Gate::new(GateKind::X, vec![t], vec![c0, c1])
    }

    pub fn mcx(controls: &[usize], t: usize) -> Self {
        Gate::new(GateKind::X, vec![t], controls.to_vec())
    }

    pub fn phase(rot: Rot, q: usize) -> Self {
        Gate::new(GateKind::Phase(rot), vec![q], vec![])
    }

    pub fn cphase(rot: Rot, controls: &[usize], t: usize) -> Self {
        Gate::new(GateKind::Phase(rot), vec![t], controls.to_vec())
    }

    pub fn swap(a: usize, b: usize) -> Self {
        Gate::new(GateKind::Swap, vec![a, b], vec![])
    }

    pub fn fused(targets: Vec<usize>, matrix: Matrix) -> Self {
        Gate::new(GateKind::Fused(Box::new(Fused { matrix })), targets, vec![])
    }

    pub fn with_cond(mut self, cond: Vec<(usize, bool)>) -> Self {
        self.cond = cond;
        self
    }

    pub fn with_controls(mut self, extra: &[usize]) -> Self {
        self.controls.extend_from_slice(extra);
        self
    }

    /// Display name used in reports and in the JSON format.
    pub fn name(&self) -> &'static str {
        match (&self.kind, self.controls.len()) {
            (GateKind::H, _) => "H",
            (GateKind::X, 0) => "X",
            (GateKind::X, 1) => "CX",
            (GateKind::X, 2) => "CCX",
            (GateKind::X, _) => "MCX",
            (GateKind::Phase(_), 0) => "PHASE",
            (GateKind::Phase(_), _) => "CPHASE",
            (GateKind::Swap, _) => "SWAP",
            (GateKind::Fused(_), _) => "FUSED",
        }
    }

    /// Targets and controls in ascending order.
    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.targets.iter().chain(&self.controls).copied().collect();
        s.sort_unstable();
        s
    }

    pub fn arity(&self) -> usize {
        self.targets.len() + self.controls.len()
    }

    /// A Toffoli-family gate: `X` with exactly two controls.
    pub fn is_toffoli(&self) -> bool {
        matches!(self.kind, GateKind::X) && self.controls.len() == 2
    }

    pub fn inverse(&self) -> Gate {
        let kind = match &self.kind {
            GateKind::Phase(r) => GateKind::Phase(r.inverse()),
            GateKind::Fused(f) => GateKind::Fused(Box::new(Fused {
                matrix: f.matrix.adjoint(),
            })),
            k => k.clone(),
        };
        Gate {
            kind,
            targets: self.targets.clone(),
            controls: self.controls.clone(),
            cond: self.cond.clone(),
        }
    }

    fn expected_targets(&self) -> Option<usize> {
        match &self.kind {
            GateKind::H | GateKind::X | GateKind::Phase(_) => Some(1),
            GateKind::Swap => Some(2),
            GateKind::Fused(_) => None,
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())?;
        if let GateKind::Phase(r) = &self.kind {
            write!(f, "({r})")?;
        }
        write!(f, " t{:?}", self.targets)?;
        if !self.controls.is_empty() {
            write!(f, " c{:?}", self.controls)?;
        }
        if !self.cond.is_empty() {
            write!(f, " if{:?}", self.cond)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Op {
    Gate(Gate),
    Measure { qubit: usize, clbit: usize },
    Reset { qubit: usize },
}

impl Op {
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Op::Gate(g) => g.support(),
            Op::Measure { qubit, .. } | Op::Reset { qubit } => vec![*qubit],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    pub n_qubits: usize,
    pub n_clbits: usize,
    pub ops: Vec<Op>,
}

impl Circuit {
    pub fn new(n_qubits: usize, n_clbits: usize) -> Self {
        Circuit {
            n_qubits,
            n_clbits,
            ops: Vec::new(),
        }
    }

    pub fn push(&mut self, gate: Gate) -> &mut Self {
        self.ops.push(Op::Gate(gate));
        self
    }

    pub fn h(&mut self, q: usize) -> &mut Self {
        self.push(Gate::h(q))
    }

    pub fn x(&mut self, q: usize) -> &mut Self {
        self.push(Gate::x(q))
    }

    pub fn cx(&mut self, c: usize, t: usize) -> &mut Self {
        self.push(Gate::cx(c, t))
    }

    pub fn ccx(&mut self, c0: usize, c1: usize, t: usize) -> &mut Self {
        self.push(Gate::ccx(c0, c1, t))
    }

    /// `X` on `t` controlled by all of `controls` (plain `X` when empty).
    pub fn mcx(&mut self, controls: &[usize], t: usize) -> &mut Self {
        self.push(Gate::mcx(controls, t))
    }

    pub fn phase(&mut self, rot: Rot, q: usize) -> &mut Self {
        if rot.is_identity() {
            return self;
        }
        self.push(Gate::phase(rot, q))
    }

    pub fn cphase(&mut self, rot: Rot, controls: &[usize], t: usize) -> &mut Self {
        if rot.is_identity() {
            return self;
        }
        self.push(Gate::cphase(rot, controls, t))
    }

    pub fn swap(&mut self, a: usize, b: usize) -> &mut Self {
        self.push(Gate::swap(a, b))
    }

    pub fn measure(&mut self, qubit: usize, clbit: usize) -> &mut Self {
        self.ops.push(Op::Measure { qubit, clbit });
        self
    }

    pub fn reset(&mut self, qubit: usize) -> &mut Self {
        self.ops.push(Op::Reset { qubit });
        self
    }

    pub fn extend(&mut self, other: &Circuit) -> &mut Self {
        self.ops.extend(other.ops.iter().cloned());
        self
    }

    pub fn gates(&self) -> impl Iterator<Item = &Gate> {
        self.ops.iter().filter_map(|op| match op {
            Op::Gate(g) => Some(g),
            _ => None,
        })
    }

    pub fn gate_count(&self) -> usize {
        self.gates().count()
    }

    pub fn toffoli_count(&self) -> usize {
        self.gates().filter(|g| g.is_toffoli()).count()
    }

    pub fn has_measurements(&self) -> bool {
        self.ops.iter().any(|op| !matches!(op, Op::Gate(_)))
    }

    /// The adjoint circuit. Only defined for purely unitary, unconditioned circuits.
    pub fn inverse(&self) -> Result<Circuit, CircuitError> {
        let mut ops = Vec::with_capacity(self.ops.len());
        for op in self.ops.iter().rev() {
            match op {
                Op::Gate(g) if g.cond.is_empty() => ops.push(Op::Gate(g.inverse())),
                _ => return Err(CircuitError::NotInvertible),
            }
        }
        Ok(Circuit {
            n_qubits: self.n_qubits,
            n_clbits: self.n_clbits,
            ops,
        })
    }

    pub fn validate(&self) -> Result<(), CircuitError> {
        let mut written = vec![false; self.n_clbits];
        let check_qubit = |q: usize| {
            if q >= self.n_qubits {
                Err(CircuitError::QubitOutOfRange {
                    qubit: q,
                    n_qubits: self.n_qubits,
                })
            } else {
                Ok(())
            }
        };
        let check_clbit = |b: usize| {
            if b >= self.n_clbits {
                Err(CircuitError::ClbitOutOfRange {
                    bit: b,
                    n_clbits: self.n_clbits,
                })
            } else {
                Ok(())
            }
        };
        for op in &self.ops {
            match op {
                Op::Gate(g) => {
                    if let Some(expected) = g.expected_targets() {
                        if g.targets.len() != expected {
                            return Err(CircuitError::TargetArity {
                                kind: g.name(),
                                expected,
                                got: g.targets.len(),
                            });
                        }
                    }
                    let support = g.support();
                    for w in support.windows(2) {
                        if w[0] == w[1] {
                            return Err(CircuitError::DuplicateQubit(w[0]));
                        }
                    }
                    for &q in &support {
                        check_qubit(q)?;
                    }
                    if let GateKind::Fused(f) = &g.kind {
                        let dim = 1usize << g.targets.len();
                        if f.matrix.dim() != dim {
                            return Err(CircuitError::MatrixShape {
                                expected: dim * dim,
                                got: f.matrix.dim() * f.matrix.dim(),
                            });
                        }
                        let dev = f.matrix.unitarity_deviation();
                        if dev > 1e-10 {
                            return Err(CircuitError::NotUnitary(dev));
                        }
                    }
                    for &(b, _) in &g.cond {
                        check_clbit(b)?;
                        if !written[b] {
                            return Err(CircuitError::UnwrittenCondition(b));
                        }
                    }
                }
                Op::Measure { qubit, clbit } => {
                    check_qubit(*qubit)?;
                    check_clbit(*clbit)?;
                    written[*clbit] = true;
                }
                Op::Reset { qubit } => check_qubit(*qubit)?,
            }
        }
        Ok(())
    }
}

/// Unit-modulus complex helper used by builders and tests.
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
