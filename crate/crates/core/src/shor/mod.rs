//! Full discrete-logarithm circuits, classical post-processing and success
//! probabilities.

mod build;
pub mod layout;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::AdderKind;
use crate::numtheory::{bit_length, enumerate_pairs, make_instance, mod_inv, DlpInstance, NumTheoryError};
use crate::sim::{self, SimError};

pub use build::{build_dlp_circuit, build_dlp_circuit_with, wire_bases, BuildError, DlpOptions, Variant};
pub use layout::{layout, total_for_widths, total_qubits, RegisterLayout};

#[derive(Debug, Error)]
pub enum ShorError {
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    NumTheory(#[from] NumTheoryError),
}

/// `⌊m·q/2^v + 1/2⌋`, computed exactly.
pub fn round_ratio(m: u64, v: u32, q: u64) -> u64 {
    let num = 2 * u128::from(m) * u128::from(q) + (1u128 << v);
    (num >> (v + 1)) as u64
}

/// Recovers `s` from one pair of measured register values, or `None` when the
/// rounded second value is divisible by `q`.
pub fn postprocess(m1: u64, m2: u64, v1: u32, v2: u32, q: u64) -> Option<u64> {
    let l = round_ratio(m2, v2, q) % q;
    let beta = round_ratio(m1, v1, q) % q;
    let l_inv = mod_inv(l, q)?;
    Some((u128::from(beta) * u128::from(l_inv) % u128::from(q)) as u64)
}

/// Splits a packed outcome into `(m1, m2)`.
pub fn split_outcome(outcome: u64, lay: &RegisterLayout) -> (u64, u64) {
    let m1 = outcome & ((1 << lay.v1) - 1);
    let m2 = (outcome >> lay.v1) & ((1 << lay.v2) - 1);
    (m1, m2)
}

/// Exact joint distribution over `(m1, m2)` packed as `m1 | m2 << v1`.
pub fn outcome_distribution(inst: &DlpInstance, opts: &DlpOptions, cap: usize) -> Result<Vec<f64>, ShorError> {
    let circuit = build_dlp_circuit_with(inst, opts)?;
    Ok(sim::outcome_distribution_with(&circuit, cap, BACKEND)?)
}

/// Arithmetic keeps the support at a few basis states per control value, so
/// the sparse map wins by orders of magnitude over the dense vector. Fusion
/// would only widen the per-gate fan-out, so circuits are simulated as built.
const BACKEND: sim::Backend = sim::Backend::Sparse;

/// Mass of the outcomes that post-process to `inst.s`.
pub fn success_mass(dist: &[f64], inst: &DlpInstance, lay: &RegisterLayout) -> f64 {
    dist.iter()
        .enumerate()
        .filter(|(_, p)| **p > 0.0)
        .filter(|(o, _)| {
            let (m1, m2) = split_outcome(*o as u64, lay);
            postprocess(m1, m2, lay.v1, lay.v2, inst.q) == Some(inst.s)
        })
        .map(|(_, p)| p)
        .sum()
}

/// Probability of each post-processing result: index `s` for `0..q`, index
/// `q` for failures.
pub fn result_distribution(dist: &[f64], inst: &DlpInstance, lay: &RegisterLayout) -> Vec<f64> {
    let mut out = vec![0.0; inst.q as usize + 1];
    for (o, p) in dist.iter().enumerate() {
        let (m1, m2) = split_outcome(o as u64, lay);
        let slot = postprocess(m1, m2, lay.v1, lay.v2, inst.q).unwrap_or(inst.q);
        out[slot as usize] += p;
    }
    out
}

pub fn success_probability_exact(inst: &DlpInstance, adder: AdderKind) -> Result<f64, ShorError> {
    success_probability_variant(inst, &DlpOptions::new(adder, Variant::Standard), sim::qubit_cap())
}

pub fn success_probability_variant(inst: &DlpInstance, opts: &DlpOptions, cap: usize) -> Result<f64, ShorError> {
    let lay = layout(inst.p, inst.q, opts.adder);
    let dist = outcome_distribution(inst, opts, cap)?;
    Ok(success_mass(&dist, inst, &lay))
}

pub fn sample_success_rate(inst: &DlpInstance, adder: AdderKind, shots: usize, seed: u64) -> Result<f64, ShorError> {
    sample_success_rate_with(
        inst,
        &DlpOptions::new(adder, Variant::Standard),
        shots,
        seed,
        sim::qubit_cap(),
    )
}

pub fn sample_success_rate_with(
    inst: &DlpInstance,
    opts: &DlpOptions,
    shots: usize,
    seed: u64,
    cap: usize,
) -> Result<f64, ShorError> {
    if shots == 0 {
        return Ok(0.0);
    }
    let counts = sample_result_counts(inst, opts, shots, seed, cap)?;
    Ok(counts[inst.s as usize] as f64 / shots as f64)
}

/// Sampled counterpart of [`result_distribution`]: how many of `shots` runs
/// post-process to each `s`, with failures counted at index `q`.
pub fn sample_result_counts(
    inst: &DlpInstance,
    opts: &DlpOptions,
    shots: usize,
    seed: u64,
    cap: usize,
) -> Result<Vec<usize>, ShorError> {
    let lay = layout(inst.p, inst.q, opts.adder);
    let circuit = build_dlp_circuit_with(inst, opts)?;
    let mut counts = vec![0; inst.q as usize + 1];
    for o in sim::sample_outcomes_with(&circuit, shots, seed, cap, BACKEND)? {
        let (m1, m2) = split_outcome(o, &lay);
        counts[postprocess(m1, m2, lay.v1, lay.v2, inst.q).unwrap_or(inst.q) as usize] += 1;
    }
    Ok(counts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepMode {
    Exact,
    Shots(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub p: u64,
    pub q: u64,
    pub bits_p: u32,
    pub bits_q: u32,
    pub g: u64,
    pub h: u64,
    pub s: u64,
    pub probability: f64,
    pub mode: String,
    pub shots: usize,
    pub seed: u64,
}

/// One instance per in-budget pair, evaluated in parallel; rows come back
/// sorted by `(p, q)` whatever the scheduling.
pub fn sweep(
    budget: u32,
    adder: AdderKind,
    mode: SweepMode,
    seed: u64,
    cap: usize,
) -> Result<Vec<SweepRow>, ShorError> {
    let pairs = enumerate_pairs(budget, adder)?;
    if let Some(&(p, q)) = pairs.iter().find(|&&(p, q)| total_qubits(p, q, adder) as usize > cap) {
        return Err(SimError::CapExceeded {
            n: total_qubits(p, q, adder) as usize,
            cap,
        }
        .into());
    }
    pairs
        .par_iter()
        .map(|&(p, q)| sweep_row(p, q, adder, mode, seed, cap))
        .collect()
}

pub fn sweep_row(
    p: u64,
    q: u64,
    adder: AdderKind,
    mode: SweepMode,
    seed: u64,
    cap: usize,
) -> Result<SweepRow, ShorError> {
    let inst = make_instance(p, q, seed)?;
    let opts = DlpOptions::new(adder, Variant::Standard);
    let (probability, mode_name, shots) = match mode {
        SweepMode::Exact => (success_probability_variant(&inst, &opts, cap)?, "exact", 0),
        SweepMode::Shots(n) => {
            let shot_seed = crate::rng::derive_seed(seed, p, q, crate::rng::Purpose::Measurement);
            (sample_success_rate_with(&inst, &opts, n, shot_seed, cap)?, "shots", n)
        }
    };
    Ok(SweepRow {
        p,
        q,
        bits_p: bit_length(p),
        bits_q: bit_length(q),
        g: inst.g,
        h: inst.h,
        s: inst.s,
        probability,
        mode: mode_name.to_string(),
        shots,
        seed,
    })
}
