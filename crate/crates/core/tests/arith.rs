mod common;

use dlshor_core::arith::{
    build_add_const, build_mcx, build_mod_add, build_mod_exp, build_mod_mul, build_mod_ps, AdderKind, AncillaSpec,
    ExpStep, Fragment, McxMode, ModArith, WorkRegisters,
};
use dlshor_core::circuit::Circuit;
use dlshor_core::numtheory::{bit_length, enumerate_pairs, is_prime, make_instance};
use dlshor_core::shor::total_qubits;
use dlshor_core::sim::SparseState;
use num_complex::Complex64;

const ADDERS: [AdderKind; 2] = [AdderKind::Qadd, AdderKind::Radd];

fn odd_primes_upto(n: u64) -> Vec<u64> {
    (3..=n).filter(|&p| is_prime(p)).collect()
}

fn pack(values: &[(&[usize], u64)]) -> usize {
    values
        .iter()
        .flat_map(|(reg, v)| reg.iter().enumerate().map(move |(b, &q)| ((*v >> b & 1) as usize) << q))
        .sum()
}

fn unpack(idx: usize, reg: &[usize]) -> u64 {
    reg.iter()
        .enumerate()
        .fold(0, |v, (b, &q)| v | (((idx >> q) & 1) as u64) << b)
}

/// Runs a basis input; the output must again be a single basis state with
/// unit-modulus amplitude.
fn run_basis(c: &Circuit, input: usize) -> usize {
    let mut s = SparseState::new(c.n_qubits);
    for (q, bit) in (0..c.n_qubits).map(|q| (q, input >> q & 1)) {
        if bit == 1 {
            s.apply_gate(&dlshor_core::Gate::x(q)).unwrap();
        }
    }
    for g in c.gates() {
        s.apply_gate(g).unwrap();
    }
    assert_eq!(s.support(), 1, "output is not a basis state");
    let dense = s.to_dense();
    let idx = dense.iter().position(|a| a.norm() > 0.5).unwrap();
    assert!((dense[idx].norm() - 1.0).abs() < 1e-9);
    idx
}

fn ancillas_clear(f: &Fragment, out: usize) -> bool {
    f.ancillas.iter().all(|&q| out >> q & 1 == 0)
}

#[test]
fn add_const_width_four_exhaustive() {
    for adder in ADDERS {
        for d in 0..16u64 {
            let f = build_add_const(d, 4, adder, 1).unwrap();
            for y in 0..32u64 {
                for ctrl in 0..2u64 {
                    let out = run_basis(&f.circuit, pack(&[(&f.value, y), (&f.controls, ctrl)]));
                    let expected = if ctrl == 1 { (y + d) % 32 } else { y };
                    assert_eq!(unpack(out, &f.value), expected);
                    assert!(ancillas_clear(&f, out));
                }
            }
        }
        assert!(build_add_const(16, 4, adder, 0).is_err());
    }
}

#[test]
fn mod_add_exhaustive_up_to_31() {
    for adder in ADDERS {
        for p in odd_primes_upto(31) {
            for d in 0..p {
                let f = build_mod_add(d, p, adder, 0).unwrap();
                for y in 0..p {
                    let out = run_basis(&f.circuit, pack(&[(&f.value, y)]));
                    assert_eq!(unpack(out, &f.value), (y + d) % p, "{adder} p={p} d={d} y={y}");
                    assert!(ancillas_clear(&f, out));
                }
            }
        }
    }
}

/// Uniform superposition over every `y` (the product-sum is defined for any
/// `y`), checked amplitude by amplitude.
fn check_mod_ps(p: u64, d: u64, adder: AdderKind) {
    let f = build_mod_ps(d, p, adder, 0).unwrap();
    let n = f.value.len();
    for t in 0..p {
        let mut s = SparseState::new(f.circuit.n_qubits);
        for &q in &f.value {
            s.apply_gate(&dlshor_core::Gate::h(q)).unwrap();
        }
        for (b, &q) in f.acc.iter().enumerate() {
            if t >> b & 1 == 1 {
                s.apply_gate(&dlshor_core::Gate::x(q)).unwrap();
            }
        }
        for g in f.circuit.gates() {
            s.apply_gate(g).unwrap();
        }
        assert_eq!(s.support(), 1 << n);
        let amp = Complex64::new((0.5f64).powf(n as f64 / 2.0), 0.0);
        for y in 0..1u64 << n {
            let idx = pack(&[(&f.value, y), (&f.acc, (t + d * y) % p)]);
            assert!(
                (s.amplitude(idx) - amp).norm() < 1e-9,
                "{adder} p={p} d={d} t={t} y={y}"
            );
        }
    }
}

#[test]
fn mod_ps_exhaustive_up_to_31() {
    for adder in ADDERS {
        for p in odd_primes_upto(31) {
            for d in 0..p {
                check_mod_ps(p, d, adder);
            }
        }
    }
}

#[test]
fn mod_mul_exhaustive_up_to_31() {
    for adder in ADDERS {
        for p in odd_primes_upto(31) {
            for d in 1..p {
                let f = build_mod_mul(d, p, adder).unwrap();
                for y in 0..p {
                    for ctrl in 0..2u64 {
                        let out = run_basis(&f.circuit, pack(&[(&f.value, y), (&f.controls, ctrl)]));
                        let expected = if ctrl == 1 { d * y % p } else { y };
                        assert_eq!(unpack(out, &f.value), expected, "{adder} p={p} d={d} y={y}");
                        assert!(ancillas_clear(&f, out));
                    }
                }
            }
            assert!(build_mod_mul(0, p, adder).is_err());
        }
    }
}

#[test]
fn mod_exp_exhaustive_up_to_23() {
    let pairs: Vec<(u64, u64)> = enumerate_pairs(30, AdderKind::Qadd)
        .unwrap()
        .into_iter()
        .filter(|&(p, _)| p <= 23)
        .collect();
    assert_eq!(pairs.len(), 13);
    for (p, q) in pairs {
        let inst = make_instance(p, q, 11).unwrap();
        for adder in ADDERS {
            common::mod_exp_is_exact(&inst, adder).unwrap_or_else(|e| panic!("{adder} ({p},{q}): {e}"));
        }
    }
}

#[test]
fn mod_exp_example_and_trivial_bases() {
    // h = 4, g = 2, p = 7, x1 = x2 = 1 → 4·2 mod 7 = 1; wires: qubit 1 is x1 bit 0 ... (v = 2)
    for adder in ADDERS {
        let f = build_mod_exp(&[(2, 1), (4, 0), (4, 3), (2, 2)], 4, 7, adder, McxMode::Decompose).unwrap();
        let out = run_basis(&f.circuit, pack(&[(&f.controls, 0b0101), (&f.value, 1)]));
        assert_eq!(unpack(out, &f.value), 1);
        let out = run_basis(&f.circuit, pack(&[(&f.controls, 0b0001), (&f.value, 1)]));
        assert_eq!(unpack(out, &f.value), 4);
        let ones = build_mod_exp(&[(1, 0), (1, 1)], 2, 7, adder, McxMode::Decompose).unwrap();
        for y in 1..7 {
            for x in 0..4 {
                let out = run_basis(&ones.circuit, pack(&[(&ones.controls, x), (&ones.value, y)]));
                assert_eq!(unpack(out, &ones.value), y);
            }
        }
    }
}

#[test]
fn fragments_invert_to_identity() {
    for adder in ADDERS {
        for p in [3u64, 7, 13, 23] {
            let f = build_mod_mul(2 % p, p, adder).unwrap();
            let mut both = f.circuit.clone();
            both.extend(&f.circuit.inverse().unwrap());
            for y in 0..p {
                for ctrl in 0..2u64 {
                    let input = pack(&[(&f.value, y), (&f.controls, ctrl)]);
                    assert_eq!(run_basis(&both, input), input);
                }
            }
        }
    }
}

#[test]
fn modexp_qubits_follow_layout() {
    for (p, q) in [(3u64, 2u64), (7, 3), (23, 11), (47, 23)] {
        let inst = make_instance(p, q, 2).unwrap();
        for adder in ADDERS {
            let v = bit_length(q) as usize;
            let lay = dlshor_core::shor::layout(p, q, adder);
            let bases = dlshor_core::shor::wire_bases(&inst, &lay);
            let steps: Vec<(u64, usize)> = bases.iter().enumerate().map(|(i, &b)| (b, i)).collect();
            let f = build_mod_exp(&steps, 2 * v, p, adder, McxMode::Decompose).unwrap();
            assert_eq!(f.circuit.n_qubits as u32, total_qubits(p, q, adder));
        }
    }
}

#[test]
fn foreign_clean_ancillas_never_cost_more() {
    // two external controls plus a work bit make three-control loads
    for p in [7u64, 13, 23] {
        let n = bit_length(p) as usize;
        let regs = WorkRegisters::allocate(4, n, AdderKind::Radd);
        let total = 4 + regs.len();
        let arith = ModArith::new(p, AdderKind::Radd, McxMode::Decompose, regs);
        let mut dirty_only = Circuit::new(total, 0);
        arith.mod_ps(&mut dirty_only, 3, &[0, 1], &[]).unwrap();
        let mut with_clean = Circuit::new(total, 0);
        arith.mod_ps(&mut with_clean, 3, &[0, 1], &[2, 3]).unwrap();
        assert!(with_clean.toffoli_count() <= dirty_only.toffoli_count());
        assert!(
            with_clean.toffoli_count() < dirty_only.toffoli_count(),
            "clean ancillas were not used"
        );
        // the chain with idle qubits as clean ancillas still computes the same map
        let steps = [ExpStep {
            base: 3,
            control: 0,
            clean: vec![2, 3],
        }];
        let mut c = Circuit::new(total, 0);
        arith.mod_exp(&mut c, &steps).unwrap();
        let work = &arith.registers().work;
        for y in 1..p {
            let out = run_basis(&c, pack(&[(&[0usize][..], 1), (work, y)]));
            assert_eq!(unpack(out, work), 3 * y % p);
        }
    }
}

#[test]
fn mcx_counts_and_budgets() {
    let cases = [(3, 1, 0, 3), (3, 0, 1, 4), (4, 2, 0, 5), (4, 1, 1, 6), (4, 0, 2, 8)];
    for (controls, clean, dirty, toffolis) in cases {
        let (c, count) = build_mcx(controls, AncillaSpec { clean, dirty }).unwrap();
        assert_eq!(count, toffolis);
        assert_eq!(c.toffoli_count(), toffolis);
    }
    assert!(build_mcx(4, AncillaSpec { clean: 1, dirty: 0 }).is_err());
    assert!(build_mcx(3, AncillaSpec { clean: 0, dirty: 0 }).is_err());
    assert!(build_mcx(5, AncillaSpec { clean: 3, dirty: 0 }).is_err());
}

#[test]
fn degenerate_modulus_three() {
    let inst = make_instance(3, 2, 0).unwrap();
    for adder in ADDERS {
        common::mod_exp_is_exact(&inst, adder).unwrap();
        for d in 0..3 {
            let f = build_mod_add(d, 3, adder, 0).unwrap();
            for y in 0..3 {
                let out = run_basis(&f.circuit, pack(&[(&f.value, y)]));
                assert_eq!(unpack(out, &f.value), (y + d) % 3);
            }
        }
    }
}
