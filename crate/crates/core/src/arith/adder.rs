use super::mcx::Emitter;
use crate::circuit::{Circuit, Rot};

/// Fourier transform without the final swaps: afterwards qubit `k` of `reg`
/// carries the phase `exp(2πi·b/2^(k+1))` of the encoded value `b`.
pub(crate) fn qft(c: &mut Circuit, reg: &[usize]) {
    for k in (0..reg.len()).rev() {
        c.h(reg[k]);
        for j in (0..k).rev() {
            c.cphase(Rot::add_phase(1 << j, k as u32 + 1), &[reg[j]], reg[k]);
        }
    }
}

pub(crate) fn iqft(c: &mut Circuit, reg: &[usize]) {
    let mut tmp = Circuit::new(c.n_qubits, c.n_clbits);
    qft(&mut tmp, reg);
    c.extend(&tmp.inverse().expect("unitary"));
}

/// Adds `a` (mod `2^len`) to a register held in Fourier form.
pub(crate) fn phase_add(c: &mut Circuit, reg: &[usize], a: u64, enable: &[usize]) {
    for (k, &q) in reg.iter().enumerate() {
        c.cphase(Rot::add_phase(a, k as u32 + 1), enable, q);
    }
}

/// Ripple-carry addition of the constant `a < 2^(len-1)` (mod `2^len`) into
/// `reg`, active only when every `enable` qubit is set. `carry` holds at least
/// `len-1` clean qubits.
///
/// The constant is loaded into `carry` under the enable controls, added with
/// an in-place ripple adder that needs no further ancilla (the top bit of
/// `reg` absorbs the final carry), then unloaded. Only the loading depends on
/// the bits of `a`.
pub(crate) fn ripple_add(c: &mut Circuit, reg: &[usize], carry: &[usize], a: u64, enable: &[usize], em: &Emitter) {
    let n = reg.len() - 1;
    debug_assert!(carry.len() >= n && (n >= 64 || a >> n == 0));
    let k = &carry[..n];
    let load = |c: &mut Circuit| {
        for (i, &q) in k.iter().enumerate() {
            if a >> i & 1 == 1 {
                em.x(c, enable, q);
            }
        }
    };
    load(c);
    add_registers(c, k, &reg[..n], reg[n]);
    load(c);
}

/// `|a, b, z⟩ → |a, a + b mod 2^n, z ⊕ carry⟩` for `n`-bit `a` and `b`,
/// without ancillas.
pub(crate) fn add_registers(c: &mut Circuit, a: &[usize], b: &[usize], z: usize) {
    let n = a.len();
    debug_assert_eq!(n, b.len());
    match n {
        0 => return,
        1 => {
            c.ccx(b[0], a[0], z).cx(a[0], b[0]);
            return;
        }
        _ => {}
    }
    for i in 1..n {
        c.cx(a[i], b[i]);
    }
    c.cx(a[n - 1], z);
    for i in (1..n - 1).rev() {
        c.cx(a[i], a[i + 1]);
    }
    for i in 0..n - 1 {
        c.ccx(b[i], a[i], a[i + 1]);
    }
    c.ccx(b[n - 1], a[n - 1], z);
    for i in (1..n).rev() {
        c.cx(a[i], b[i]);
        c.ccx(b[i - 1], a[i - 1], a[i]);
    }
    for i in 1..n - 1 {
        c.cx(a[i], a[i + 1]);
    }
    for i in 0..n {
        c.cx(a[i], b[i]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::McxMode;
    use crate::sim::{apply_unitary, StateVector};

    fn read(s: &StateVector, reg: &[usize]) -> (usize, f64) {
        let (idx, amp) = s
            .amplitudes()
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .unwrap();
        let v = reg.iter().enumerate().fold(0, |v, (b, &q)| v | ((idx >> q & 1) << b));
        (v, amp.norm())
    }

    #[test]
    fn fourier_adder_exhaustive() {
        let reg = [0, 1, 2, 3];
        for y in 0..16 {
            for a in 0..16u64 {
                let mut c = Circuit::new(4, 0);
                qft(&mut c, &reg);
                phase_add(&mut c, &reg, a, &[]);
                iqft(&mut c, &reg);
                let mut s = StateVector::basis(4, y);
                apply_unitary(&mut s, &c).unwrap();
                let (v, norm) = read(&s, &reg);
                assert_eq!(v, (y + a as usize) % 16);
                assert!((norm - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn register_adder_exhaustive() {
        for n in 1..=4usize {
            let a: Vec<usize> = (0..n).collect();
            let b: Vec<usize> = (n..2 * n).collect();
            let z = 2 * n;
            let mut c = Circuit::new(2 * n + 1, 0);
            add_registers(&mut c, &a, &b, z);
            for input in 0..1usize << (2 * n + 1) {
                let (x, y, zz) = (input & ((1 << n) - 1), (input >> n) & ((1 << n) - 1), input >> (2 * n));
                let mut s = StateVector::basis(2 * n + 1, input);
                apply_unitary(&mut s, &c).unwrap();
                let out = s.amplitudes().iter().position(|v| v.norm() > 0.5).unwrap();
                let sum = x + y;
                let expected = x | ((sum & ((1 << n) - 1)) << n) | ((zz ^ (sum >> n)) << (2 * n));
                assert_eq!(out, expected, "n={n} a={x} b={y} z={zz}");
            }
        }
    }

    #[test]
    fn ripple_adder_exhaustive_with_enable() {
        // enable 0, value 1..5, carries 5..8
        let reg = [1, 2, 3, 4];
        let carry = [5, 6, 7];
        for decompose in [false, true] {
            let em = Emitter {
                mode: if decompose { McxMode::Decompose } else { McxMode::Native },
                clean: &[],
                dirty: &[],
            };
            for a in 0..8u64 {
                let mut c = Circuit::new(9, 0);
                ripple_add(&mut c, &reg, &carry, a, &[0, 8], &em);
                for y in 0..16usize {
                    for en in 0..4usize {
                        let input = (y << 1) | (en & 1) | ((en >> 1) << 8);
                        let mut s = StateVector::basis(9, input);
                        apply_unitary(&mut s, &c).unwrap();
                        let (v, norm) = read(&s, &reg);
                        let expected = if en == 3 { (y + a as usize) % 16 } else { y };
                        assert_eq!(v, expected, "a={a} y={y} en={en}");
                        assert!((norm - 1.0).abs() < 1e-12);
                        let idx = s.amplitudes().iter().position(|z| z.norm() > 0.5).unwrap();
                        assert_eq!(idx & 0b1110_0000, 0, "carries restored");
                    }
                }
            }
        }
    }
}
