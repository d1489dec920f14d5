//! Exact classical-outcome distributions and shot sampling.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;

use super::sparse::SparseState;
use super::{check_cap, execute, SimError, StateVector};
use crate::circuit::{Circuit, Gate, Op};
use crate::rng;

/// Branches lighter than this are dropped; the lost mass is far below every
/// tolerance used downstream.
const BRANCH_EPS: f64 = 1e-14;
/// Largest outcome table built densely.
const MAX_CLBITS: usize = 30;

/// Amplitude storage used while enumerating branches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Backend {
    #[default]
    Dense,
    /// Hash map of nonzero amplitudes; fast when the support stays small.
    Sparse,
}

trait BranchState: Clone {
    fn fresh(n_qubits: usize) -> Self;
    fn gate(&mut self, g: &Gate) -> Result<(), SimError>;
    fn prob_one(&self, qubit: usize) -> f64;
    fn project(&mut self, qubit: usize, value: bool) -> Result<f64, SimError>;
    fn marginal(&self, subset: &[usize]) -> Vec<f64>;
}

impl BranchState for StateVector {
    fn fresh(n_qubits: usize) -> Self {
        StateVector::new(n_qubits)
    }
    fn gate(&mut self, g: &Gate) -> Result<(), SimError> {
        self.apply_gate(g)
    }
    fn prob_one(&self, qubit: usize) -> f64 {
        StateVector::prob_one(self, qubit)
    }
    fn project(&mut self, qubit: usize, value: bool) -> Result<f64, SimError> {
        StateVector::project(self, qubit, value)
    }
    fn marginal(&self, subset: &[usize]) -> Vec<f64> {
        self.distribution(subset)
    }
}

impl BranchState for SparseState {
    fn fresh(n_qubits: usize) -> Self {
        SparseState::new(n_qubits)
    }
    fn gate(&mut self, g: &Gate) -> Result<(), SimError> {
        self.apply_gate(g)
    }
    fn prob_one(&self, qubit: usize) -> f64 {
        SparseState::prob_one(self, qubit)
    }
    fn project(&mut self, qubit: usize, value: bool) -> Result<f64, SimError> {
        SparseState::project(self, qubit, value)
    }
    fn marginal(&self, subset: &[usize]) -> Vec<f64> {
        self.distribution(subset)
    }
}

/// `(qubit, clbit)` pairs when every measurement comes after the last gate and
/// there are no resets or conditioned gates; `None` otherwise.
pub fn terminal_measurements(circuit: &Circuit) -> Option<Vec<(usize, usize)>> {
    let first = circuit
        .ops
        .iter()
        .position(|op| !matches!(op, Op::Gate(_)))
        .unwrap_or(circuit.ops.len());
    let (gates, tail) = circuit.ops.split_at(first);
    if gates.iter().any(|op| matches!(op, Op::Gate(g) if !g.cond.is_empty())) {
        return None;
    }
    tail.iter()
        .map(|op| match op {
            Op::Measure { qubit, clbit } => Some((*qubit, *clbit)),
            _ => None,
        })
        .collect()
}

/// Distribution over clbit values induced by measuring `pairs` on `state`.
fn accumulate_terminal<S: BranchState>(state: &S, pairs: &[(usize, usize)], prefix: u64, weight: f64, out: &mut [f64]) {
    let mut qubits: Vec<usize> = pairs.iter().map(|&(q, _)| q).collect();
    qubits.sort_unstable();
    qubits.dedup();
    let marginal = state.marginal(&qubits);
    for (key, &p) in marginal.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let mut value = prefix;
        for &(q, c) in pairs {
            let b = qubits.binary_search(&q).expect("measured qubit");
            value = (value & !(1 << c)) | (((key >> b & 1) as u64) << c);
        }
        out[value as usize] += weight * p;
    }
}

/// Exact probability of every classical outcome (index bit `i` = clbit `i`),
/// enumerating measurement and reset branches.
pub fn outcome_distribution(circuit: &Circuit, cap: usize) -> Result<Vec<f64>, SimError> {
    outcome_distribution_with(circuit, cap, Backend::Dense)
}

pub fn outcome_distribution_with(circuit: &Circuit, cap: usize, backend: Backend) -> Result<Vec<f64>, SimError> {
    check_cap(circuit.n_qubits, cap)?;
    circuit.validate()?;
    if circuit.n_clbits > MAX_CLBITS {
        return Err(SimError::TooManyClbits(circuit.n_clbits));
    }
    let mut out = vec![0.0; 1 << circuit.n_clbits];
    match backend {
        Backend::Dense => explore(circuit, 0, StateVector::new(circuit.n_qubits), 0, 1.0, &mut out)?,
        Backend::Sparse => explore(circuit, 0, SparseState::new(circuit.n_qubits), 0, 1.0, &mut out)?,
    }
    Ok(out)
}

fn explore<S: BranchState>(
    circuit: &Circuit,
    start: usize,
    mut state: S,
    bits: u64,
    weight: f64,
    out: &mut [f64],
) -> Result<(), SimError> {
    let ops = &circuit.ops;
    let mut idx = start;
    while idx < ops.len() {
        match &ops[idx] {
            Op::Gate(g) => {
                if cond_on_packed(g, bits) {
                    state.gate(g)?;
                }
            }
            Op::Measure { .. } | Op::Reset { .. } => {
                let rest = &ops[idx..];
                if rest.iter().all(|op| matches!(op, Op::Measure { .. })) {
                    let pairs: Vec<(usize, usize)> = rest
                        .iter()
                        .map(|op| match op {
                            Op::Measure { qubit, clbit } => (*qubit, *clbit),
                            _ => unreachable!(),
                        })
                        .collect();
                    accumulate_terminal(&state, &pairs, bits, weight, out);
                    return Ok(());
                }
                let (qubit, clbit) = match &ops[idx] {
                    Op::Measure { qubit, clbit } => (*qubit, Some(*clbit)),
                    Op::Reset { qubit } => (*qubit, None),
                    Op::Gate(_) => unreachable!(),
                };
                let p1 = state.prob_one(qubit).clamp(0.0, 1.0);
                let p0 = 1.0 - p1;
                let branches: Vec<bool> = [(false, p0), (true, p1)]
                    .into_iter()
                    .filter(|&(_, p)| p > BRANCH_EPS)
                    .map(|(v, _)| v)
                    .collect();
                let mut pending = Some(state);
                for (i, &value) in branches.iter().enumerate() {
                    let mut s = if i + 1 == branches.len() {
                        pending.take().expect("state")
                    } else {
                        pending.as_ref().expect("state").clone()
                    };
                    let p = s.project(qubit, value)?;
                    let mut next_bits = bits;
                    match clbit {
                        Some(c) => next_bits = (bits & !(1 << c)) | (u64::from(value) << c),
                        None => {
                            if value {
                                s.gate(&Gate::x(qubit))?;
                            }
                        }
                    }
                    explore(circuit, idx + 1, s, next_bits, weight * p, out)?;
                }
                return Ok(());
            }
        }
        idx += 1;
    }
    out[bits as usize] += weight;
    Ok(())
}

fn terminal_table<S: BranchState>(
    circuit: &Circuit,
    pairs: &[(usize, usize)],
    table: &mut [f64],
) -> Result<(), SimError> {
    let mut state = S::fresh(circuit.n_qubits);
    for g in circuit.gates() {
        state.gate(g)?;
    }
    accumulate_terminal(&state, pairs, 0, 1.0, table);
    Ok(())
}

fn cond_on_packed(g: &Gate, bits: u64) -> bool {
    g.cond.iter().all(|&(b, v)| (bits >> b & 1 == 1) == v)
}

/// Draws `shots` packed outcomes. Circuits whose measurements are all terminal
/// are simulated once and sampled from the Born distribution; others run each
/// shot from scratch.
pub fn sample_outcomes(circuit: &Circuit, shots: usize, seed: u64, cap: usize) -> Result<Vec<u64>, SimError> {
    sample_outcomes_with(circuit, shots, seed, cap, Backend::Dense)
}

/// As [`sample_outcomes`]; `backend` is used for the single pass over a
/// circuit with terminal measurements.
pub fn sample_outcomes_with(
    circuit: &Circuit,
    shots: usize,
    seed: u64,
    cap: usize,
    backend: Backend,
) -> Result<Vec<u64>, SimError> {
    check_cap(circuit.n_qubits, cap)?;
    circuit.validate()?;
    if circuit.n_clbits > 64 {
        return Err(SimError::TooManyClbits(circuit.n_clbits));
    }
    let mut rng = rng::from_seed(seed);
    if let Some(pairs) = terminal_measurements(circuit) {
        if circuit.n_clbits <= MAX_CLBITS {
            let mut table = vec![0.0; 1 << circuit.n_clbits];
            match backend {
                Backend::Dense => terminal_table::<StateVector>(circuit, &pairs, &mut table)?,
                Backend::Sparse => terminal_table::<SparseState>(circuit, &pairs, &mut table)?,
            }
            let dist = WeightedIndex::new(&table).map_err(|_| SimError::ZeroNorm)?;
            return Ok((0..shots).map(|_| dist.sample(&mut rng) as u64).collect());
        }
    }
    let mut outcomes = Vec::with_capacity(shots);
    for _ in 0..shots {
        let mut state = StateVector::new(circuit.n_qubits);
        let bits = execute(&mut state, circuit, &mut rng)?;
        outcomes.push(super::bits_value(&bits));
    }
    Ok(outcomes)
}
