//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::TAU;

use dlshor_core::arith::{build_mod_exp, AdderKind, McxMode};
use dlshor_core::circuit::{Circuit, Gate};
use dlshor_core::numtheory::{bit_length, mod_pow, DlpInstance};
use dlshor_core::shor::{layout, postprocess, wire_bases};
use dlshor_core::sim::SparseState;
use num_complex::Complex64;

/// `(1/N) Σ_x exp(2πi·x·(φ − m/N))` for `N = 2^v`.
pub fn register_amplitude(phi: f64, m: u64, v: u32) -> Complex64 {
    let n = (1u64 << v) as f64;
    let sum: Complex64 = (0..1u64 << v)
        .map(|x| Complex64::from_polar(1.0, TAU * x as f64 * (phi - m as f64 / n)))
        .sum();
    sum / n
}

/// Joint probability of `(m1, m2)` from the eigenphase expansion of the
/// two-register state, with no circuit involved.
pub fn analytic_joint(q: u64, s: u64, v1: u32, v2: u32) -> Vec<f64> {
    let mut out = vec![0.0; 1 << (v1 + v2)];
    for m1 in 0..1u64 << v1 {
        for m2 in 0..1u64 << v2 {
            let p: f64 = (0..q)
                .map(|l| {
                    let phi1 = ((s * l) % q) as f64 / q as f64;
                    let phi2 = l as f64 / q as f64;
                    register_amplitude(phi1, m1, v1).norm_sqr() * register_amplitude(phi2, m2, v2).norm_sqr()
                })
                .sum::<f64>()
                / q as f64;
            out[(m1 | m2 << v1) as usize] = p;
        }
    }
    out
}

pub fn analytic_success(q: u64, s: u64) -> f64 {
    let v = bit_length(q);
    let joint = analytic_joint(q, s, v, v);
    joint
        .iter()
        .enumerate()
        .filter(|(o, _)| {
            let (m1, m2) = (*o as u64 & ((1 << v) - 1), *o as u64 >> v);
            postprocess(m1, m2, v, v, q) == Some(s)
        })
        .map(|(_, p)| p)
        .sum()
}

/// Checks that the Mod-EXP chain of the instance sends every
/// `|x1, x2⟩|1⟩` to `|x1, x2⟩|h^x1 g^x2 mod p⟩` with clean ancillas, by running
/// the uniform superposition of all inputs at once and requiring every output
/// amplitude to equal `2^(-(v1+v2)/2)` exactly where expected.
pub fn mod_exp_is_exact(inst: &DlpInstance, adder: AdderKind) -> Result<(), String> {
    let lay = layout(inst.p, inst.q, adder);
    let bases = wire_bases(inst, &lay);
    let (v1, v2) = (lay.v1 as usize, lay.v2 as usize);
    // wire i of register 1 is qubit v1-1-i, of register 2 qubit v1+v2-1-i
    let steps: Vec<(u64, usize)> = (0..v1)
        .map(|i| (bases[i], v1 - 1 - i))
        .chain((0..v2).map(|i| (bases[v1 + i], v1 + v2 - 1 - i)))
        .collect();
    let frag = build_mod_exp(&steps, v1 + v2, inst.p, adder, McxMode::Decompose).map_err(|e| e.to_string())?;
    let mut prep = Circuit::new(frag.circuit.n_qubits, 0);
    for &c in &frag.controls {
        prep.h(c);
    }
    prep.x(frag.value[0]);
    prep.extend(&frag.circuit);

    let mut state = SparseState::new(prep.n_qubits);
    for g in prep.gates() {
        state.apply_gate(g).map_err(|e| e.to_string())?;
    }
    let expected_amp = (0.5f64).powf((v1 + v2) as f64 / 2.0);
    if state.support() != 1 << (v1 + v2) {
        return Err(format!("support {} instead of {}", state.support(), 1 << (v1 + v2)));
    }
    for x1 in 0..1u64 << v1 {
        for x2 in 0..1u64 << v2 {
            let y = mod_pow(inst.h, x1, inst.p) * mod_pow(inst.g, x2, inst.p) % inst.p;
            let idx = (x1 | x2 << v1) as usize
                | frag
                    .value
                    .iter()
                    .enumerate()
                    .map(|(b, &q)| ((y >> b & 1) as usize) << q)
                    .sum::<usize>();
            let a = state.amplitude(idx);
            if (a - Complex64::new(expected_amp, 0.0)).norm() > 1e-9 {
                return Err(format!("x1={x1} x2={x2}: amplitude {a} at expected output"));
            }
        }
    }
    Ok(())
}

/// Random circuit over the base gate set, terminated by measuring every qubit.
pub fn random_circuit(n: usize, len: usize, seed: u64) -> Circuit {
    use dlshor_core::circuit::Rot;
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut c = Circuit::new(n, n);
    for _ in 0..len {
        let mut qs: Vec<usize> = (0..n).collect();
        for i in 0..3.min(n) {
            let j = rng.random_range(i..n);
            qs.swap(i, j);
        }
        let gate = match rng.random_range(0..7) {
            0 => Gate::h(qs[0]),
            1 => Gate::x(qs[0]),
            2 if n >= 2 => Gate::cx(qs[0], qs[1]),
            3 if n >= 3 => Gate::ccx(qs[0], qs[1], qs[2]),
            4 => Gate::phase(Rot::new(rng.random_range(1..16), rng.random_range(1..5)), qs[0]),
            5 if n >= 2 => Gate::cphase(Rot::r(rng.random_range(1..5)), &[qs[0]], qs[1]),
            6 if n >= 2 => Gate::swap(qs[0], qs[1]),
            _ => Gate::h(qs[0]),
        };
        c.push(gate);
    }
    for q in 0..n {
        c.measure(q, q);
    }
    c
}
