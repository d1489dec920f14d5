//! In-place gate kernels over a raw amplitude slice.
//!
//! A gate with fixed qubits `F` (targets plus controls) touches amplitudes in
//! groups sharing every bit outside `F`. With `h` the highest fixed bit, every
//! such group lies inside one aligned block of `2^(h+1)` amplitudes, so blocks
//! are independent and are processed in parallel without any synchronization
//! beyond the end of the gate.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::circuit::{Gate, GateKind, Matrix};

/// States at least this long are split across worker threads.
const PAR_THRESHOLD: usize = 1 << 14;
/// Smallest block handed to one worker.
const MIN_BLOCK: usize = 1 << 12;

/// Inserts a zero bit at each of the ascending `positions`.
#[inline(always)]
fn deposit(mut i: usize, positions: &[usize]) -> usize {
    for &p in positions {
        let low = i & ((1 << p) - 1);
        i = ((i >> p) << (p + 1)) | low;
    }
    i
}

/// Calls `f(block, base)` for every base index (all fixed bits cleared, then
/// `set_mask` ORed in) relative to its block.
fn for_each_base<F>(state: &mut [Complex64], fixed: &[usize], set_mask: usize, f: F)
where
    F: Fn(&mut [Complex64], usize) + Sync,
{
    let top = *fixed.last().expect("gate without qubits");
    let block = (1usize << (top + 1)).max(MIN_BLOCK).min(state.len());
    let bases = block >> fixed.len();
    let body = |chunk: &mut [Complex64]| {
        for i in 0..bases {
            f(chunk, deposit(i, fixed) | set_mask);
        }
    };
    if state.len() >= PAR_THRESHOLD {
        state.par_chunks_mut(block).for_each(body);
    } else {
        state.chunks_mut(block).for_each(body);
    }
}

/// Applies the unitary part of `gate` (its classical condition is ignored).
///
/// Panics if a qubit index does not fit the state; callers validate first.
pub fn apply_gate(state: &mut [Complex64], gate: &Gate) {
    let fixed = gate.support();
    debug_assert!(fixed.windows(2).all(|w| w[0] < w[1]));
    assert!(
        (1usize << (fixed.last().copied().unwrap_or(0) + 1)) <= state.len(),
        "gate {gate} does not fit a state of length {}",
        state.len()
    );
    let ctrl: usize = gate.controls.iter().map(|&c| 1usize << c).sum();

    match &gate.kind {
        GateKind::X => {
            let t = 1usize << gate.targets[0];
            for_each_base(state, &fixed, ctrl, |a, b| a.swap(b, b | t));
        }
        GateKind::H => {
            let t = 1usize << gate.targets[0];
            let s = std::f64::consts::FRAC_1_SQRT_2;
            for_each_base(state, &fixed, ctrl, |a, b| {
                let (x, y) = (a[b], a[b | t]);
                a[b] = (x + y) * s;
                a[b | t] = (x - y) * s;
            });
        }
        GateKind::Phase(rot) => {
            if rot.is_identity() {
                return;
            }
            let phase = rot.phase();
            let t = 1usize << gate.targets[0];
            for_each_base(state, &fixed, ctrl | t, |a, b| a[b] *= phase);
        }
        GateKind::Swap => {
            let (t0, t1) = (1usize << gate.targets[0], 1usize << gate.targets[1]);
            for_each_base(state, &fixed, ctrl, |a, b| a.swap(b | t0, b | t1));
        }
        GateKind::Fused(f) => apply_dense(state, &fixed, ctrl, &gate.targets, &f.matrix),
    }
}

fn apply_dense(state: &mut [Complex64], fixed: &[usize], ctrl: usize, targets: &[usize], m: &Matrix) {
    let dim = m.dim();
    let offsets: Vec<usize> = (0..dim)
        .map(|local| {
            targets
                .iter()
                .enumerate()
                .filter(|(bit, _)| local >> bit & 1 == 1)
                .map(|(_, &q)| 1usize << q)
                .sum()
        })
        .collect();
    let entries = m.entries();
    for_each_base(state, fixed, ctrl, |a, b| {
        let mut input = [Complex64::new(0.0, 0.0); 1 << crate::circuit::MAX_FUSED_QUBITS];
        let mut heap;
        let input: &mut [Complex64] = if dim <= input.len() {
            &mut input[..dim]
        } else {
            heap = vec![Complex64::new(0.0, 0.0); dim];
            &mut heap
        };
        for (slot, &off) in input.iter_mut().zip(&offsets) {
            *slot = a[b | off];
        }
        for (row, &off) in offsets.iter().enumerate() {
            let coeffs = &entries[row * dim..(row + 1) * dim];
            a[b | off] = coeffs.iter().zip(input.iter()).map(|(c, x)| c * x).sum();
        }
    });
}
