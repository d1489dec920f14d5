//! Exact state-vector simulation with mid-circuit measurement, reset and
//! classical feedforward.

mod branch;
pub mod kernel;
mod sparse;

use std::io::{self, Write};

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, Gate, Op};
use crate::rng::{self, StreamRng};

pub use branch::{
    outcome_distribution, outcome_distribution_with, sample_outcomes, sample_outcomes_with, terminal_measurements,
    Backend,
};
pub use sparse::SparseState;

/// Tolerance for every norm check.
pub const NORM_TOL: f64 = 1e-10;
pub const DEFAULT_QUBIT_CAP: usize = 26;
pub const QUBIT_CAP_ENV: &str = "DLSHOR_QUBIT_CAP";

#[derive(Debug, Error)]
pub enum SimError {
    #[error("{n} qubits exceed the simulation cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("qubit {qubit} out of range for a {n_qubits}-qubit state")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },
    #[error("measurement branch has zero norm (state corrupted)")]
    ZeroNorm,
    #[error("amplitudes are not normalized (norm² = {0})")]
    NotNormalized(f64),
    #[error("amplitude count {0} is not a power of two")]
    BadLength(usize),
    #[error("{0} classical bits are too many for a dense outcome table")]
    TooManyClbits(usize),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Simulation cap from `DLSHOR_QUBIT_CAP`, else [`DEFAULT_QUBIT_CAP`].
pub fn qubit_cap() -> usize {
    std::env::var(QUBIT_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_QUBIT_CAP)
}

pub fn check_cap(n_qubits: usize, cap: usize) -> Result<(), SimError> {
    if n_qubits > cap {
        Err(SimError::CapExceeded { n: n_qubits, cap })
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn new(n_qubits: usize) -> Self {
        StateVector::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[index] = Complex64::new(1.0, 0.0);
        StateVector { n_qubits, amps }
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, SimError> {
        if !amps.len().is_power_of_two() {
            return Err(SimError::BadLength(amps.len()));
        }
        let state = StateVector {
            n_qubits: amps.len().trailing_zeros() as usize,
            amps,
        };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(SimError::NotNormalized(norm));
        }
        Ok(state)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_qubit(&self, qubit: usize) -> Result<(), SimError> {
        if qubit >= self.n_qubits {
            Err(SimError::QubitOutOfRange {
                qubit,
                n_qubits: self.n_qubits,
            })
        } else {
            Ok(())
        }
    }

    /// Applies the gate's unitary; any classical condition must already be resolved.
    pub fn apply_gate(&mut self, gate: &Gate) -> Result<(), SimError> {
        for q in gate.targets.iter().chain(&gate.controls) {
            self.check_qubit(*q)?;
        }
        kernel::apply_gate(&mut self.amps, gate);
        Ok(())
    }

    pub fn prob_one(&self, qubit: usize) -> f64 {
        let bit = 1usize << qubit;
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Projects `qubit` onto `value` and renormalizes. Returns the branch probability.
    pub fn project(&mut self, qubit: usize, value: bool) -> Result<f64, SimError> {
        self.check_qubit(qubit)?;
        let bit = 1usize << qubit;
        let p1 = self.prob_one(qubit);
        let p = if value { p1 } else { 1.0 - p1 };
        if p <= 0.0 {
            return Err(SimError::ZeroNorm);
        }
        let scale = 1.0 / p.sqrt();
        for (i, a) in self.amps.iter_mut().enumerate() {
            if (i & bit != 0) == value {
                *a *= scale;
            } else {
                *a = Complex64::new(0.0, 0.0);
            }
        }
        Ok(p)
    }

    /// Born-rule measurement of one qubit, collapsing the state.
    pub fn measure_qubit<R: Rng + ?Sized>(&mut self, qubit: usize, rng: &mut R) -> Result<bool, SimError> {
        self.check_qubit(qubit)?;
        let p1 = self.prob_one(qubit).clamp(0.0, 1.0);
        let bit = rng.random::<f64>() < p1;
        self.project(qubit, bit)?;
        Ok(bit)
    }

    /// Measures then flips the qubit back to `|0⟩` if needed.
    pub fn reset<R: Rng + ?Sized>(&mut self, qubit: usize, rng: &mut R) -> Result<(), SimError> {
        if self.measure_qubit(qubit, rng)? {
            kernel::apply_gate(&mut self.amps, &Gate::x(qubit));
        }
        Ok(())
    }

    /// Marginal Born distribution over `subset`; bit `b` of the outcome index
    /// is the value of `subset[b]`.
    pub fn distribution(&self, subset: &[usize]) -> Vec<f64> {
        let mut out = vec![0.0; 1 << subset.len()];
        for (i, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p == 0.0 {
                continue;
            }
            let key = subset
                .iter()
                .enumerate()
                .fold(0usize, |k, (b, &q)| k | ((i >> q & 1) << b));
            out[key] += p;
        }
        out
    }

    /// Raw dump: little-endian `f64` pairs `re, im` in index order.
    pub fn write_amplitudes<W: Write>(&self, mut w: W) -> io::Result<()> {
        let mut buf = Vec::with_capacity(self.amps.len() * 16);
        for a in &self.amps {
            buf.extend_from_slice(&a.re.to_le_bytes());
            buf.extend_from_slice(&a.im.to_le_bytes());
        }
        w.write_all(&buf)
    }
}

/// Classical record of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub bits: Vec<bool>,
    pub state: Option<StateVector>,
}

impl RunRecord {
    /// Integer formed by clbits `start..start+len`, first bit least significant.
    pub fn value(&self, start: usize, len: usize) -> u64 {
        bits_value(&self.bits[start..start + len])
    }

    pub fn packed(&self) -> u64 {
        bits_value(&self.bits)
    }
}

pub(crate) fn bits_value(bits: &[bool]) -> u64 {
    bits.iter().enumerate().fold(0, |v, (i, &b)| v | (u64::from(b) << i))
}

pub(crate) fn condition_holds(gate: &Gate, bits: &[bool]) -> bool {
    gate.cond.iter().all(|&(b, v)| bits[b] == v)
}

/// Runs `circuit` from `|0…0⟩` under the configured qubit cap.
pub fn run(circuit: &Circuit, seed: u64, keep_state: bool) -> Result<RunRecord, SimError> {
    run_with_cap(circuit, seed, keep_state, qubit_cap())
}

pub fn run_with_cap(circuit: &Circuit, seed: u64, keep_state: bool, cap: usize) -> Result<RunRecord, SimError> {
    check_cap(circuit.n_qubits, cap)?;
    circuit.validate()?;
    let mut rng = rng::from_seed(seed);
    let mut state = StateVector::new(circuit.n_qubits);
    let bits = execute(&mut state, circuit, &mut rng)?;
    Ok(RunRecord {
        bits,
        state: keep_state.then_some(state),
    })
}

/// Executes every operation on `state`, returning the classical bits.
pub fn execute(state: &mut StateVector, circuit: &Circuit, rng: &mut StreamRng) -> Result<Vec<bool>, SimError> {
    let mut bits = vec![false; circuit.n_clbits];
    for op in &circuit.ops {
        match op {
            Op::Gate(g) => {
                if condition_holds(g, &bits) {
                    state.apply_gate(g)?;
                }
            }
            Op::Measure { qubit, clbit } => bits[*clbit] = state.measure_qubit(*qubit, rng)?,
            Op::Reset { qubit } => state.reset(*qubit, rng)?,
        }
    }
    Ok(bits)
}

/// Applies a measurement-free circuit to a given state.
pub fn apply_unitary(state: &mut StateVector, circuit: &Circuit) -> Result<(), SimError> {
    for op in &circuit.ops {
        match op {
            Op::Gate(g) if g.cond.is_empty() => state.apply_gate(g)?,
            _ => return Err(CircuitError::NotInvertible.into()),
        }
    }
    Ok(())
}
