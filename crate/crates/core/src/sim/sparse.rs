//! Sparse amplitude map for states whose support stays small.
//!
//! Register arithmetic on a mostly classical state touches only a few basis
//! states at a time even when the register is wide, so storing nonzero
//! amplitudes in a hash map beats a dense vector by orders of magnitude there.
//! Results agree with [`super::StateVector`] up to rounding; amplitudes whose
//! squared modulus falls below [`PRUNE`] after an interfering gate are dropped.

use std::collections::HashMap;
use std::hash::{BuildHasherDefault, Hasher};

use num_complex::Complex64;

use super::SimError;
use crate::circuit::{Gate, GateKind};

/// Squared-modulus threshold below which an amplitude counts as cancelled.
pub const PRUNE: f64 = 1e-26;

/// Multiplicative hash for basis indices.
#[derive(Default, Clone, Copy)]
pub struct IndexHasher(u64);

impl Hasher for IndexHasher {
    fn finish(&self) -> u64 {
        self.0 ^ (self.0 >> 31)
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0 ^ u64::from(b)).wrapping_mul(0x100_0000_01b3);
        }
    }

    fn write_usize(&mut self, n: usize) {
        self.0 = (n as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    }
}

type AmpMap = HashMap<usize, Complex64, BuildHasherDefault<IndexHasher>>;

#[derive(Debug, Clone, PartialEq)]
pub struct SparseState {
    n_qubits: usize,
    amps: AmpMap,
}

impl SparseState {
    pub fn new(n_qubits: usize) -> Self {
        let mut amps = AmpMap::default();
        amps.insert(0, Complex64::new(1.0, 0.0));
        SparseState { n_qubits, amps }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Number of stored amplitudes.
    pub fn support(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps.get(&index).copied().unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    /// Dense copy, for comparisons on small states.
    pub fn to_dense(&self) -> Vec<Complex64> {
        let mut out = vec![Complex64::default(); 1 << self.n_qubits];
        for (&k, &a) in &self.amps {
            out[k] = a;
        }
        out
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

    /// Applies the gate's unitary; the classical condition is ignored.
    pub fn apply_gate(&mut self, gate: &Gate) -> Result<(), SimError> {
        for &q in gate.targets.iter().chain(&gate.controls) {
            self.check_qubit(q)?;
        }
        let ctrl: usize = gate.controls.iter().map(|&c| 1usize << c).sum();
        let on = |k: usize| k & ctrl == ctrl;
        match &gate.kind {
            GateKind::Phase(rot) => {
                if rot.is_identity() {
                    return Ok(());
                }
                let mask = ctrl | 1 << gate.targets[0];
                let phase = rot.phase();
                for (_, a) in self.amps.iter_mut().filter(|(k, _)| *k & mask == mask) {
                    *a *= phase;
                }
            }
            GateKind::X => {
                let t = 1usize << gate.targets[0];
                self.permute(|k| if on(k) { k ^ t } else { k });
            }
            GateKind::Swap => {
                let (a, b) = (gate.targets[0], gate.targets[1]);
                let both = 1usize << a | 1 << b;
                self.permute(|k| {
                    if on(k) && (k >> a & 1) != (k >> b & 1) {
                        k ^ both
                    } else {
                        k
                    }
                });
            }
            GateKind::H => {
                let t = 1usize << gate.targets[0];
                let s = std::f64::consts::FRAC_1_SQRT_2;
                let mut out = AmpMap::with_capacity_and_hasher(self.amps.len() * 2, Default::default());
                for (k, a) in self.amps.drain() {
                    if !on(k) {
                        *out.entry(k).or_default() += a;
                        continue;
                    }
                    let sa = a * s;
                    *out.entry(k & !t).or_default() += sa;
                    *out.entry(k | t).or_default() += if k & t == 0 { sa } else { -sa };
                }
                out.retain(|_, a| a.norm_sqr() >= PRUNE);
                self.amps = out;
            }
            GateKind::Fused(f) => {
                let m = &f.matrix;
                let dim = m.dim();
                let offsets: Vec<usize> = (0..dim)
                    .map(|local| {
                        gate.targets
                            .iter()
                            .enumerate()
                            .filter(|(bit, _)| local >> bit & 1 == 1)
                            .map(|(_, &q)| 1usize << q)
                            .sum()
                    })
                    .collect();
                let tmask = offsets[dim - 1];
                let mut out = AmpMap::with_capacity_and_hasher(self.amps.len() * 2, Default::default());
                for (k, a) in self.amps.drain() {
                    if !on(k) {
                        *out.entry(k).or_default() += a;
                        continue;
                    }
                    let base = k & !tmask;
                    let col = offsets.iter().position(|&o| o == k & tmask).expect("target bits");
                    for (row, &off) in offsets.iter().enumerate() {
                        let e = m.get(row, col);
                        if e.norm_sqr() != 0.0 {
                            *out.entry(base | off).or_default() += e * a;
                        }
                    }
                }
                out.retain(|_, a| a.norm_sqr() >= PRUNE);
                self.amps = out;
            }
        }
        Ok(())
    }

    fn permute(&mut self, f: impl Fn(usize) -> usize) {
        let mut out = AmpMap::with_capacity_and_hasher(self.amps.len(), Default::default());
        out.extend(self.amps.drain().map(|(k, a)| (f(k), a)));
        self.amps = out;
    }

    pub fn prob_one(&self, qubit: usize) -> f64 {
        self.amps
            .iter()
            .filter(|(k, _)| *k >> qubit & 1 == 1)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Projects `qubit` onto `value` and renormalizes. Returns the branch probability.
    pub fn project(&mut self, qubit: usize, value: bool) -> Result<f64, SimError> {
        self.check_qubit(qubit)?;
        let p1 = self.prob_one(qubit);
        let p = if value { p1 } else { 1.0 - p1 };
        if p <= 0.0 {
            return Err(SimError::ZeroNorm);
        }
        let scale = 1.0 / p.sqrt();
        self.amps.retain(|k, a| {
            *a *= scale;
            (k >> qubit & 1 == 1) == value
        });
        Ok(p)
    }

    /// Marginal distribution over `subset`, indexed as in
    /// [`super::StateVector::distribution`].
    pub fn distribution(&self, subset: &[usize]) -> Vec<f64> {
        let mut out = vec![0.0; 1 << subset.len()];
        for (&i, a) in &self.amps {
            let key = subset
                .iter()
                .enumerate()
                .fold(0usize, |k, (b, &q)| k | ((i >> q & 1) << b));
            out[key] += a.norm_sqr();
        }
        out
    }
}
