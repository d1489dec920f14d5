use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::layout::{layout, RegisterLayout};
use crate::arith::{AdderKind, ArithError, ExpStep, McxMode, ModArith, WorkRegisters};
use crate::circuit::{Circuit, Gate, Rot};
use crate::numtheory::{mod_pow, DlpInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    /// Two full control registers with coherent inverse QFTs.
    Standard,
    /// `k ∈ {1, 2}` recycled control qubits, measured one at a time.
    Semiclassical(usize),
    /// Blocks of `k` control qubits with a coherent inverse QFT inside each
    /// block and classical corrections between blocks.
    Hsqft(usize),
}

impl Variant {
    /// Physical control qubits.
    pub fn control_qubits(self, lay: &RegisterLayout) -> usize {
        match self {
            Variant::Standard => (lay.v1 + lay.v2) as usize,
            Variant::Semiclassical(k) | Variant::Hsqft(k) => k,
        }
    }

    pub fn check(self, lay: &RegisterLayout) -> Result<(), BuildError> {
        let ok = match self {
            Variant::Standard => true,
            Variant::Semiclassical(k) => k == 1 || k == 2,
            Variant::Hsqft(k) => k >= 1 && k <= lay.v1 as usize && k <= lay.v2 as usize,
        };
        if ok {
            Ok(())
        } else {
            Err(BuildError::BadVariant(self))
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::Standard => write!(f, "standard"),
            Variant::Semiclassical(k) => write!(f, "semiclassical{k}"),
            Variant::Hsqft(k) => write!(f, "hsqft{k}"),
        }
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.to_ascii_lowercase();
        let num = |rest: &str| rest.parse::<usize>().map_err(|_| format!("bad variant {s:?}"));
        if s == "standard" {
            Ok(Variant::Standard)
        } else if let Some(rest) = s.strip_prefix("semiclassical") {
            Ok(Variant::Semiclassical(num(rest)?))
        } else if let Some(rest) = s.strip_prefix("hsqft") {
            Ok(Variant::Hsqft(num(rest)?))
        } else {
            Err(format!("unknown variant {s:?}"))
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("variant {0} does not fit this instance")]
    BadVariant(Variant),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Construction switches; the defaults are used for every reported metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DlpOptions {
    pub adder: AdderKind,
    pub variant: Variant,
    pub mcx: McxMode,
    /// Borrow the idle second control register as clean ancillas while the
    /// first register's multiplications run (standard variant only).
    pub foreign_clean: bool,
}

impl DlpOptions {
    pub fn new(adder: AdderKind, variant: Variant) -> Self {
        DlpOptions {
            adder,
            variant,
            mcx: McxMode::Decompose,
            foreign_clean: true,
        }
    }
}

/// Multiplier of control wire `i` (wire 0 is the most significant bit):
/// `h^(2^(v1-1-i))` for the first register, then `g^(2^(v2-1-i))`.
pub fn wire_bases(inst: &DlpInstance, lay: &RegisterLayout) -> Vec<u64> {
    let pow2 = |base: u64, e: u32| mod_pow(base, 1u64 << e, inst.p);
    (0..lay.v1)
        .map(|i| pow2(inst.h, lay.v1 - 1 - i))
        .chain((0..lay.v2).map(|i| pow2(inst.g, lay.v2 - 1 - i)))
        .collect()
}

pub fn build_dlp_circuit(inst: &DlpInstance, adder: AdderKind, variant: Variant) -> Result<Circuit, BuildError> {
    build_dlp_circuit_with(inst, &DlpOptions::new(adder, variant))
}

/// Circuit whose classical bits are `m_0..m_(v1-1)` then `m'_0..m'_(v2-1)`,
/// with `m = Σ m_i 2^i`.
pub fn build_dlp_circuit_with(inst: &DlpInstance, opts: &DlpOptions) -> Result<Circuit, BuildError> {
    let lay = layout(inst.p, inst.q, opts.adder);
    opts.variant.check(&lay)?;
    let k = opts.variant.control_qubits(&lay);
    let regs = WorkRegisters::allocate(k, lay.w as usize, opts.adder);
    let n_qubits = k + regs.len();
    debug_assert!(opts.variant != Variant::Standard || n_qubits == lay.total as usize);
    let arith = ModArith::new(inst.p, opts.adder, opts.mcx, regs.clone());
    let mut c = Circuit::new(n_qubits, (lay.v1 + lay.v2) as usize);
    c.x(regs.work[0]);
    let bases = wire_bases(inst, &lay);
    match opts.variant {
        Variant::Standard => standard(&mut c, &arith, &lay, &bases, opts.foreign_clean)?,
        Variant::Semiclassical(k) => blocked(&mut c, &arith, &lay, &bases, k, 1)?,
        Variant::Hsqft(k) => blocked(&mut c, &arith, &lay, &bases, k, k)?,
    }
    Ok(c)
}

/// Inverse QFT over wires listed most-significant first; `wires[i]` ends
/// holding output bit `i`.
fn inverse_qft(c: &mut Circuit, wires: &[usize]) {
    for i in 0..wires.len() {
        for j in 0..i {
            c.cphase(Rot::r((i - j + 1) as u32), &[wires[j]], wires[i]);
        }
        c.h(wires[i]);
    }
}

fn standard(
    c: &mut Circuit,
    arith: &ModArith,
    lay: &RegisterLayout,
    bases: &[u64],
    foreign_clean: bool,
) -> Result<(), BuildError> {
    let (v1, v2) = (lay.v1 as usize, lay.v2 as usize);
    let reg1: Vec<usize> = (0..v1).collect();
    let reg2: Vec<usize> = (v1..v1 + v2).collect();
    // wire i of a register is its qubit v-1-i
    let wires1: Vec<usize> = reg1.iter().rev().copied().collect();
    let wires2: Vec<usize> = reg2.iter().rev().copied().collect();

    for &q in &reg1 {
        c.h(q);
    }
    // Register 2 stays |0⟩ until its own Hadamards, so it can lend clean qubits.
    let clean = if foreign_clean { reg2.clone() } else { vec![] };
    let steps: Vec<ExpStep> = wires1
        .iter()
        .zip(&bases[..v1])
        .map(|(&control, &base)| ExpStep {
            base,
            control,
            clean: clean.clone(),
        })
        .collect();
    arith.mod_exp(c, &steps)?;
    for &q in &reg2 {
        c.h(q);
    }
    let steps: Vec<ExpStep> = wires2
        .iter()
        .zip(&bases[v1..])
        .map(|(&control, &base)| ExpStep {
            base,
            control,
            clean: vec![],
        })
        .collect();
    arith.mod_exp(c, &steps)?;

    inverse_qft(c, &wires1);
    inverse_qft(c, &wires2);
    for (i, &q) in wires1.iter().chain(&wires2).enumerate() {
        c.measure(q, i);
    }
    Ok(())
}

/// Recycled control qubits. Each register is cut into blocks of `block`
/// wires; block wires run on control qubits taken round-robin from the `k`
/// available. After a block's multiplications, each wire gets classical
/// corrections from earlier blocks, coherent rotations from earlier wires of
/// the same block and its Hadamard; then the block is measured and reset.
fn blocked(
    c: &mut Circuit,
    arith: &ModArith,
    lay: &RegisterLayout,
    bases: &[u64],
    k: usize,
    block: usize,
) -> Result<(), BuildError> {
    let mut next_qubit = 0;
    let mut clbit_base = 0;
    for (reg_bases, v) in [
        (&bases[..lay.v1 as usize], lay.v1 as usize),
        (&bases[lay.v1 as usize..], lay.v2 as usize),
    ] {
        let mut start = 0;
        while start < v {
            let end = (start + block).min(v);
            let mut qubits = Vec::with_capacity(end - start);
            for base in &reg_bases[start..end] {
                let q = next_qubit % k;
                next_qubit += 1;
                qubits.push(q);
                c.h(q);
                arith.mod_mul(c, *base, q, &[])?;
            }
            for i in start..end {
                let q = qubits[i - start];
                for j in 0..start {
                    c.push(Gate::phase(Rot::r((i - j + 1) as u32), q).with_cond(vec![(clbit_base + j, true)]));
                }
                for j in start..i {
                    c.cphase(Rot::r((i - j + 1) as u32), &[qubits[j - start]], q);
                }
                c.h(q);
            }
            for i in start..end {
                c.measure(qubits[i - start], clbit_base + i);
            }
            for i in start..end {
                c.push(Gate::x(qubits[i - start]).with_cond(vec![(clbit_base + i, true)]));
            }
            start = end;
        }
        clbit_base += v;
    }
    Ok(())
}
