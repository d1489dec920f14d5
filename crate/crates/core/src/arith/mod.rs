//! Reversible arithmetic builders: constant adders, modular addition,
//! product-sum, multiplication and exponentiation, plus multi-controlled NOT
//! decompositions.
//!
//! All modular operations act on a [`WorkRegisters`] block: the work register
//! `y` (`n` bits, `n` the bit length of `p`), an accumulator `t` (`n+1` bits,
//! the extra bit catching the sign of intermediate differences), the ripple
//! carries (`n` bits, R-ADD only) and one flag qubit.

mod adder;
mod mcx;
mod modular;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::Circuit;
use crate::numtheory::bit_length;

pub use mcx::{build_mcx, decompose_mcx};
pub use modular::{ExpStep, ModArith};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArithError {
    #[error("constant {value} out of range (must be < {bound})")]
    ValueOutOfRange { value: u64, bound: u64 },
    #[error("{d} has no inverse modulo {p}")]
    NoInverse { d: u64, p: u64 },
    #[error("{controls}-control NOT needs more ancillas than {clean} clean + {dirty} dirty")]
    InsufficientAncillas {
        controls: usize,
        clean: usize,
        dirty: usize,
    },
    #[error("{0} controls not supported here")]
    UnsupportedControls(usize),
    #[error("modulus {0} must be an odd number ≥ 3")]
    BadModulus(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AdderKind {
    /// Fourier-basis addition.
    Qadd,
    /// Ripple-carry addition.
    Radd,
}

impl AdderKind {
    /// Ancilla qubits beyond the `w`-bit work register.
    pub fn ancillas(self, w: usize) -> usize {
        match self {
            AdderKind::Qadd => w + 2,
            AdderKind::Radd => 2 * w + 2,
        }
    }
}

impl fmt::Display for AdderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AdderKind::Qadd => "qadd",
            AdderKind::Radd => "radd",
        })
    }
}

impl FromStr for AdderKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "qadd" | "q-add" => Ok(AdderKind::Qadd),
            "radd" | "r-add" => Ok(AdderKind::Radd),
            other => Err(format!("unknown adder {other:?} (expected qadd or radd)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AncillaSpec {
    pub clean: usize,
    pub dirty: usize,
}

/// Whether X gates with 3 or 4 controls are kept whole or lowered to Toffolis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum McxMode {
    Native,
    #[default]
    Decompose,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorkRegisters {
    pub work: Vec<usize>,
    pub t: Vec<usize>,
    pub carry: Vec<usize>,
    pub flag: usize,
}

impl WorkRegisters {
    /// Consecutive allocation starting at qubit `first`: work, t, carries, flag.
    pub fn allocate(first: usize, n: usize, adder: AdderKind) -> Self {
        let work: Vec<usize> = (first..first + n).collect();
        let t: Vec<usize> = (first + n..first + 2 * n + 1).collect();
        let n_carry = if adder == AdderKind::Radd { n } else { 0 };
        let carry: Vec<usize> = (first + 2 * n + 1..first + 2 * n + 1 + n_carry).collect();
        let flag = first + 2 * n + 1 + n_carry;
        WorkRegisters { work, t, carry, flag }
    }

    pub fn len(&self) -> usize {
        self.work.len() + self.ancillas().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn ancillas(&self) -> Vec<usize> {
        self.t.iter().chain(&self.carry).copied().chain([self.flag]).collect()
    }
}

/// A standalone circuit piece with its register map.
#[derive(Debug, Clone)]
pub struct Fragment {
    pub circuit: Circuit,
    pub controls: Vec<usize>,
    /// The register the operation acts on.
    pub value: Vec<usize>,
    /// Accumulator of a product-sum; empty elsewhere.
    pub acc: Vec<usize>,
    /// Everything that must return to `|0⟩`.
    pub ancillas: Vec<usize>,
}

fn check_modulus(p: u64) -> Result<(), ArithError> {
    if p < 3 || p % 2 == 0 {
        Err(ArithError::BadModulus(p))
    } else {
        Ok(())
    }
}

fn check_controls(k: usize) -> Result<(), ArithError> {
    if k > 2 {
        Err(ArithError::UnsupportedControls(k))
    } else {
        Ok(())
    }
}

/// `|y⟩ → |y + d mod 2^(width+1)⟩` on a `width+1`-qubit register, active when
/// all `controls` control qubits (0, 1 or 2) are set.
pub fn build_add_const(d: u64, width: usize, adder: AdderKind, controls: usize) -> Result<Fragment, ArithError> {
    check_controls(controls)?;
    if width >= 62 || d >= 1 << width {
        return Err(ArithError::ValueOutOfRange {
            value: d,
            bound: 1u64 << width.min(62),
        });
    }
    let ctrl: Vec<usize> = (0..controls).collect();
    let value: Vec<usize> = (controls..controls + width + 1).collect();
    let carry: Vec<usize> = match adder {
        AdderKind::Qadd => vec![],
        AdderKind::Radd => (controls + width + 1..controls + 2 * width + 1).collect(),
    };
    let mut c = Circuit::new(controls + width + 1 + carry.len(), 0);
    match adder {
        AdderKind::Qadd => {
            adder::qft(&mut c, &value);
            adder::phase_add(&mut c, &value, d, &ctrl);
            adder::iqft(&mut c, &value);
        }
        AdderKind::Radd => adder::ripple_add(&mut c, &value, &carry, d, &ctrl, &mcx::Emitter::native()),
    }
    Ok(Fragment {
        circuit: c,
        controls: ctrl,
        value,
        acc: vec![],
        ancillas: carry,
    })
}

fn standalone(p: u64, adder: AdderKind, controls: usize) -> (ModArith, Vec<usize>, usize) {
    let n = bit_length(p) as usize;
    let regs = WorkRegisters::allocate(controls, n, adder);
    let total = controls + regs.len();
    (
        ModArith::new(p, adder, McxMode::Native, regs),
        (0..controls).collect(),
        total,
    )
}

/// `|t⟩ → |t + d mod p⟩` for `t < p` on the `t` register.
pub fn build_mod_add(d: u64, p: u64, adder: AdderKind, controls: usize) -> Result<Fragment, ArithError> {
    check_modulus(p)?;
    check_controls(controls)?;
    let (m, ctrl, total) = standalone(p, adder, controls);
    let mut c = Circuit::new(total, 0);
    m.mod_add(&mut c, d, &ctrl, &[])?;
    let regs = m.registers();
    Ok(Fragment {
        circuit: c,
        controls: ctrl,
        value: regs.t.clone(),
        acc: vec![],
        ancillas: regs.carry.iter().copied().chain([regs.flag]).collect(),
    })
}

/// `|y⟩|t⟩ → |y⟩|t + d·y mod p⟩`.
pub fn build_mod_ps(d: u64, p: u64, adder: AdderKind, controls: usize) -> Result<Fragment, ArithError> {
    check_modulus(p)?;
    check_controls(controls)?;
    let (m, ctrl, total) = standalone(p, adder, controls);
    let mut c = Circuit::new(total, 0);
    m.mod_ps(&mut c, d, &ctrl, &[])?;
    let regs = m.registers();
    Ok(Fragment {
        circuit: c,
        controls: ctrl,
        value: regs.work.clone(),
        acc: regs.t.clone(),
        ancillas: regs.carry.iter().copied().chain([regs.flag]).collect(),
    })
}

/// `|y⟩ → |d·y mod p⟩` controlled by one qubit.
pub fn build_mod_mul(d: u64, p: u64, adder: AdderKind) -> Result<Fragment, ArithError> {
    check_modulus(p)?;
    let (m, ctrl, total) = standalone(p, adder, 1);
    let mut c = Circuit::new(total, 0);
    m.mod_mul(&mut c, d, ctrl[0], &[])?;
    let regs = m.registers();
    Ok(Fragment {
        circuit: c,
        controls: ctrl,
        value: regs.work.clone(),
        acc: vec![],
        ancillas: regs.ancillas(),
    })
}

/// Controlled-multiplication chain. Step `i` multiplies by `bases[i].0` under
/// control qubit `bases[i].1` of an `n_controls`-qubit control register laid
/// out first. No foreign clean ancillas are assumed, so the fragment is
/// correct for every control-register input.
pub fn build_mod_exp(
    bases: &[(u64, usize)],
    n_controls: usize,
    p: u64,
    adder: AdderKind,
    mode: McxMode,
) -> Result<Fragment, ArithError> {
    check_modulus(p)?;
    let n = bit_length(p) as usize;
    let regs = WorkRegisters::allocate(n_controls, n, adder);
    let total = n_controls + regs.len();
    let m = ModArith::new(p, adder, mode, regs);
    let steps: Vec<ExpStep> = bases
        .iter()
        .map(|&(base, ctrl)| ExpStep {
            base,
            control: ctrl,
            clean: vec![],
        })
        .collect();
    let mut c = Circuit::new(total, 0);
    m.mod_exp(&mut c, &steps)?;
    let regs = m.registers();
    Ok(Fragment {
        circuit: c,
        controls: (0..n_controls).collect(),
        value: regs.work.clone(),
        acc: vec![],
        ancillas: regs.ancillas(),
    })
}
