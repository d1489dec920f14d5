use serde::{Deserialize, Serialize};

use crate::arith::AdderKind;
use crate::numtheory::bit_length;

/// Qubit budget of the two-register circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegisterLayout {
    pub v1: u32,
    pub v2: u32,
    pub w: u32,
    pub ancillas: u32,
    pub total: u32,
    pub adder: AdderKind,
}

/// `v1 = v2 = ⌊log q⌋ + 1`, `w = ⌈log p⌉` (the bit lengths, for odd `p`).
pub fn layout(p: u64, q: u64, adder: AdderKind) -> RegisterLayout {
    let v = bit_length(q);
    let w = bit_length(p);
    let ancillas = adder.ancillas(w as usize) as u32;
    RegisterLayout {
        v1: v,
        v2: v,
        w,
        ancillas,
        total: 2 * v + w + ancillas,
        adder,
    }
}

pub fn total_for_widths(w: u32, v: u32, adder: AdderKind) -> u32 {
    2 * v + w + adder.ancillas(w as usize) as u32
}

pub fn total_qubits(p: u64, q: u64, adder: AdderKind) -> u32 {
    layout(p, q, adder).total
}
