//! Primality, subgroup generators and discrete-log instances.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::AdderKind;
use crate::rng::{self, Purpose};
use crate::shor::layout;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NumTheoryError {
    #[error("({p}, {q}) is not a valid group: p and q must be prime with q | p - 1")]
    InvalidPair { p: u64, q: u64 },
    #[error("qubit budget {0} leaves no room for the ancilla overhead")]
    BudgetTooSmall(i64),
    #[error("qubit budget {0} needs moduli beyond the supported 2^30 enumeration bound")]
    BudgetTooLarge(u32),
}

/// A discrete-log problem `h = g^s (mod p)` in the order-`q` subgroup of `F_p^*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DlpInstance {
    pub p: u64,
    pub q: u64,
    pub g: u64,
    pub h: u64,
    pub s: u64,
}

impl DlpInstance {
    /// Builds an instance from explicit parameters, checking every group invariant.
    pub fn new(p: u64, q: u64, g: u64, s: u64) -> Result<Self, NumTheoryError> {
        check_pair(p, q)?;
        if g <= 1 || g >= p || mod_pow(g, q, p) != 1 || s >= q {
            return Err(NumTheoryError::InvalidPair { p, q });
        }
        Ok(DlpInstance {
            p,
            q,
            g,
            h: mod_pow(g, s, p),
            s,
        })
    }

    pub fn is_valid(&self) -> bool {
        check_pair(self.p, self.q).is_ok()
            && self.g > 1
            && self.g < self.p
            && mod_pow(self.g, self.q, self.p) == 1
            && self.s < self.q
            && self.h == mod_pow(self.g, self.s, self.p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairClass {
    pub safe_prime: bool,
    pub bits_p: u32,
    pub bits_q: u32,
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut base = base % m;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Multiplicative inverse of `a` modulo `m`, if it exists.
pub fn mod_inv(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let quot = r0 / r1;
        (r0, r1) = (r1, r0 - quot * r1);
        (t0, t1) = (t1, t0 - quot * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Number of bits in the binary representation of `n` (0 for 0).
pub fn bit_length(n: u64) -> u32 {
    u64::BITS - n.leading_zeros()
}

/// `⌈log2 n⌉` for `n ≥ 1`.
pub fn ceil_log2(n: u64) -> u32 {
    assert!(n > 0, "log of zero");
    bit_length(n - 1)
}

/// `⌊log2 n⌋` for `n ≥ 1`.
pub fn floor_log2(n: u64) -> u32 {
    assert!(n > 0, "log of zero");
    bit_length(n) - 1
}

// First twelve primes: a complete witness set for every n < 3.3e24.
const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller-Rabin, exact over the whole `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn check_pair(p: u64, q: u64) -> Result<(), NumTheoryError> {
    if p >= 3 && q >= 2 && is_prime(p) && is_prime(q) && (p - 1) % q == 0 {
        Ok(())
    } else {
        Err(NumTheoryError::InvalidPair { p, q })
    }
}

/// Smallest-prime-factor table for `0..=limit`.
fn spf_sieve(limit: usize) -> Vec<u32> {
    let mut spf = vec![0u32; limit + 1];
    for i in 2..=limit {
        if spf[i] == 0 {
            let mut j = i;
            while j <= limit {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

/// All prime pairs `(p, q)` with `q | p - 1` whose circuit fits in `qubit_budget`
/// qubits under the given adder, sorted by `(p, q)`.
pub fn enumerate_pairs(qubit_budget: u32, adder: AdderKind) -> Result<Vec<(u64, u64)>, NumTheoryError> {
    // The cheapest order (q = 2) bounds the modulus width.
    let mut max_width = 0;
    while layout::total_for_widths(max_width + 1, 2, adder) <= qubit_budget {
        max_width += 1;
    }
    if max_width < 2 {
        return Ok(Vec::new());
    }
    if max_width > 30 {
        return Err(NumTheoryError::BudgetTooLarge(qubit_budget));
    }
    let limit = 1usize << max_width;
    let spf = spf_sieve(limit);
    let mut pairs = Vec::new();
    for p in 3..limit {
        if spf[p] as usize != p {
            continue;
        }
        let mut rest = p - 1;
        while rest > 1 {
            let q = spf[rest] as usize;
            while rest % q == 0 {
                rest /= q;
            }
            if layout::total_qubits(p as u64, q as u64, adder) <= qubit_budget {
                pairs.push((p as u64, q as u64));
            }
        }
    }
    Ok(pairs)
}

/// Draws `g = r^((p-1)/q) mod p` for random `r ∈ [2, p-1]` until `g ≠ 1`.
pub fn find_subgroup_generator(p: u64, q: u64, seed: u64) -> Result<u64, NumTheoryError> {
    check_pair(p, q)?;
    let mut rng = rng::stream(seed, p, q, Purpose::Generator);
    let cofactor = (p - 1) / q;
    loop {
        let r = rng.random_range(2..=p - 1);
        let g = mod_pow(r, cofactor, p);
        if g != 1 {
            return Ok(g);
        }
    }
}

pub fn make_instance(p: u64, q: u64, seed: u64) -> Result<DlpInstance, NumTheoryError> {
    let g = find_subgroup_generator(p, q, seed)?;
    let s = rng::stream(seed, p, q, Purpose::Secret).random_range(0..q);
    DlpInstance::new(p, q, g, s)
}

pub fn classify_pair(p: u64, q: u64) -> Result<PairClass, NumTheoryError> {
    check_pair(p, q)?;
    Ok(PairClass {
        safe_prime: q == (p - 1) / 2,
        bits_p: bit_length(p),
        bits_q: bit_length(q),
    })
}

/// Real-valued `(⌈log p⌉, ⌊log q⌋)` maximising the modular-exponentiation gate
/// count `x^m y^n` subject to the qubit constraint `α x + β y = budget - 4`.
pub fn same_qubits_target(qubit_budget: u32, adder: AdderKind) -> Result<(f64, f64), NumTheoryError> {
    let gamma = qubit_budget as i64 - 4;
    if gamma <= 0 {
        return Err(NumTheoryError::BudgetTooSmall(qubit_budget as i64));
    }
    let (alpha, beta, m, n) = match adder {
        AdderKind::Radd => (3.0, 2.0, 2.0, 1.0),
        AdderKind::Qadd => (2.0, 2.0, 3.0, 1.0),
    };
    let gamma = gamma as f64;
    Ok((gamma * m / (alpha * (m + n)), gamma * n / (beta * (m + n))))
}
