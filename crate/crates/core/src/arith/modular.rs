use super::adder::{iqft, phase_add, qft, ripple_add};
use super::mcx::Emitter;
use super::{AdderKind, ArithError, McxMode, WorkRegisters};
use crate::circuit::Circuit;
use crate::numtheory::{bit_length, mod_inv};

/// One controlled multiplication of a modular exponentiation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpStep {
    pub base: u64,
    pub control: usize,
    /// Qubits guaranteed `|0⟩` while this step runs, usable as clean ancillas.
    pub clean: Vec<usize>,
}

/// Modular arithmetic over a fixed odd modulus on one set of work registers.
#[derive(Debug, Clone)]
pub struct ModArith {
    p: u64,
    n: usize,
    adder: AdderKind,
    mode: McxMode,
    regs: WorkRegisters,
}

impl ModArith {
    pub fn new(p: u64, adder: AdderKind, mode: McxMode, regs: WorkRegisters) -> Self {
        let n = bit_length(p) as usize;
        assert_eq!(regs.work.len(), n, "work register width must be the bit length of p");
        ModArith {
            p,
            n,
            adder,
            mode,
            regs,
        }
    }

    pub fn registers(&self) -> &WorkRegisters {
        &self.regs
    }

    fn emitter<'a>(&'a self, clean: &'a [usize]) -> Emitter<'a> {
        Emitter {
            mode: self.mode,
            clean,
            dirty: &self.regs.work,
        }
    }

    /// `t += a (mod 2^(n+1))` in the adder's native representation.
    fn add(&self, c: &mut Circuit, a: u64, enable: &[usize], em: &Emitter) {
        match self.adder {
            AdderKind::Qadd => phase_add(c, &self.regs.t, a, enable),
            AdderKind::Radd => ripple_add(c, &self.regs.t, &self.regs.carry, a, enable, em),
        }
    }

    fn sub(&self, c: &mut Circuit, a: u64, enable: &[usize], em: &Emitter) {
        let mut tmp = Circuit::new(c.n_qubits, 0);
        self.add(&mut tmp, a, enable, em);
        c.extend(&tmp.inverse().expect("unitary"));
    }

    /// Runs `f` with the top bit of `t` in the computational basis.
    fn with_top(&self, c: &mut Circuit, f: impl FnOnce(&mut Circuit, usize)) {
        let top = self.regs.t[self.n];
        if self.adder == AdderKind::Qadd {
            iqft(c, &self.regs.t);
        }
        f(c, top);
        if self.adder == AdderKind::Qadd {
            qft(c, &self.regs.t);
        }
    }

    /// `t ← t + a mod p` for `t < p`, on `t` in the adder's representation.
    pub(crate) fn mod_add_core(&self, c: &mut Circuit, a: u64, enable: &[usize], em: &Emitter) {
        let flag = self.regs.flag;
        self.add(c, a, enable, em);
        self.sub(c, self.p, &[], em);
        self.with_top(c, |c, top| {
            c.cx(top, flag);
        });
        self.add(c, self.p, &[flag], em);
        self.sub(c, a, enable, em);
        self.with_top(c, |c, top| {
            c.x(top).cx(top, flag).x(top);
        });
        self.add(c, a, enable, em);
    }

    fn to_native(&self, c: &mut Circuit) {
        if self.adder == AdderKind::Qadd {
            qft(c, &self.regs.t);
        }
    }

    fn leave_native(&self, c: &mut Circuit) {
        if self.adder == AdderKind::Qadd {
            iqft(c, &self.regs.t);
        }
    }

    /// `t ← t + a mod p`, controlled by `controls`.
    pub fn mod_add(&self, c: &mut Circuit, a: u64, controls: &[usize], clean: &[usize]) -> Result<(), ArithError> {
        if a >= self.p {
            return Err(ArithError::ValueOutOfRange {
                value: a,
                bound: self.p,
            });
        }
        let em = self.emitter(clean);
        self.to_native(c);
        self.mod_add_core(c, a, controls, &em);
        self.leave_native(c);
        Ok(())
    }

    /// `t ← t + d·y mod p` with `y` the work register, controlled by `controls`.
    pub fn mod_ps(&self, c: &mut Circuit, d: u64, controls: &[usize], clean: &[usize]) -> Result<(), ArithError> {
        if d >= self.p {
            return Err(ArithError::ValueOutOfRange {
                value: d,
                bound: self.p,
            });
        }
        let em = self.emitter(clean);
        self.to_native(c);
        let mut addend = d;
        for &y in &self.regs.work {
            if addend != 0 {
                let enable: Vec<usize> = controls.iter().copied().chain([y]).collect();
                self.mod_add_core(c, addend, &enable, &em);
            }
            addend = (addend * 2) % self.p;
        }
        self.leave_native(c);
        Ok(())
    }

    /// `y ← d·y mod p` in place, controlled by `control`; `t` is used as scratch.
    /// `d = 1` is built like any other multiplier so resource counts do not
    /// depend on the instance's exponents.
    pub fn mod_mul(&self, c: &mut Circuit, d: u64, control: usize, clean: &[usize]) -> Result<(), ArithError> {
        let d = d % self.p;
        let d_inv = mod_inv(d, self.p).ok_or(ArithError::NoInverse { d, p: self.p })?;
        self.mod_ps(c, d, &[control], clean)?;
        for (&y, &t) in self.regs.work.iter().zip(&self.regs.t) {
            c.cx(t, y).ccx(control, y, t).cx(t, y);
        }
        let mut undo = Circuit::new(c.n_qubits, 0);
        self.mod_ps(&mut undo, d_inv, &[control], clean)?;
        c.extend(&undo.inverse().expect("unitary"));
        Ok(())
    }

    /// Chain of controlled multiplications; with the work register holding 1
    /// on entry it ends holding the product of the active bases.
    pub fn mod_exp(&self, c: &mut Circuit, steps: &[ExpStep]) -> Result<(), ArithError> {
        for step in steps {
            self.mod_mul(c, step.base, step.control, &step.clean)?;
        }
        Ok(())
    }
}
