//! Makespan of a chain of `L` controlled multiplications when control qubits
//! are recycled, in closed form and by schedule simulation.
//!
//! Every multiplication holds the shared work register for `U`. Measuring a
//! control qubit and applying its classically conditioned correction is one
//! block of length `M`; the corrections chain, so these blocks run one after
//! another, and a control qubit is reusable only once its block is done.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative tolerance for comparing schedule times.
pub const TIME_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum TimingError {
    #[error("invalid timing model: {0}")]
    Invalid(String),
    #[error("the block-size bound needs U < M, got rho = {0}")]
    RhoTooLarge(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// One control wire measured at a time on `k` recycled qubits.
    Semiclassical,
    /// Blocks of `k` wires measured together.
    Hsqft,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Semiclassical => "semiclassical",
            Scheme::Hsqft => "hsqft",
        })
    }
}

impl FromStr for Scheme {
    type Err = TimingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "semiclassical" => Ok(Scheme::Semiclassical),
            "hsqft" => Ok(Scheme::Hsqft),
            _ => Err(TimingError::Invalid(format!("unknown scheme {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimingModel {
    /// Number of multiplications.
    pub l: usize,
    /// Time per multiplication.
    pub u: f64,
    /// Time per measurement plus conditioned correction.
    pub m: f64,
    /// Control qubits.
    pub k: usize,
}

impl TimingModel {
    pub fn new(l: usize, u: f64, m: f64, k: usize) -> Result<Self, TimingError> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if l == 0 || k == 0 || !ok(u) || !ok(m) {
            return Err(TimingError::Invalid(format!("L={l} U={u} M={m} k={k}")));
        }
        Ok(TimingModel { l, u, m, k })
    }

    pub fn rho(&self) -> f64 {
        self.u / self.m
    }

    fn check(&self, scheme: Scheme) -> Result<(), TimingError> {
        TimingModel::new(self.l, self.u, self.m, self.k)?;
        if scheme == Scheme::Hsqft && self.k > self.l {
            return Err(TimingError::Invalid(format!(
                "block size {} exceeds L = {}",
                self.k, self.l
            )));
        }
        Ok(())
    }
}

/// A final block of `r < k` wires is charged `M·r/k`, so the total is
/// `L(U + M/k)` for every `L`, not only multiples of `k`.
pub fn makespan_closed_form(model: &TimingModel, scheme: Scheme) -> Result<f64, TimingError> {
    model.check(scheme)?;
    let TimingModel { l, u, m, k } = *model;
    let l = l as f64;
    Ok(match scheme {
        Scheme::Semiclassical if k == 1 => l * (u + m),
        Scheme::Semiclassical if u >= m => l * u + m,
        Scheme::Semiclassical => u + l * m,
        Scheme::Hsqft => l * (u + m / k as f64),
    })
}

/// Event-driven schedule: one work register, `k` control qubits, and a chain
/// of measurement blocks. Every operation starts as soon as its resources are
/// free.
pub fn schedule_simulate(model: &TimingModel, scheme: Scheme) -> Result<f64, TimingError> {
    model.check(scheme)?;
    let TimingModel { l, u, m, k } = *model;
    let mut work_free = 0.0f64;
    let mut meas_free = 0.0f64;
    let mut qubit_free = vec![0.0f64; k];
    match scheme {
        Scheme::Semiclassical => {
            for i in 0..l {
                let q = i % k;
                let end = work_free.max(qubit_free[q]) + u;
                work_free = end;
                meas_free = end.max(meas_free) + m;
                qubit_free[q] = meas_free;
            }
        }
        Scheme::Hsqft => {
            let mut start = 0;
            while start < l {
                let r = k.min(l - start);
                for &free in &qubit_free[..r] {
                    work_free = work_free.max(free) + u;
                }
                meas_free = work_free.max(meas_free) + m * r as f64 / k as f64;
                for free in &mut qubit_free[..r] {
                    *free = meas_free;
                }
                start += r;
            }
        }
    }
    Ok(work_free.max(meas_free))
}

/// Smallest block size for which blocked measurement beats two or more
/// recycled qubits when `U < M`: the least integer above `L/(L + ρ - Lρ)`.
pub fn min_k_hsqft(l: usize, rho: f64) -> Result<usize, TimingError> {
    if rho.is_nan() || rho <= 0.0 {
        return Err(TimingError::Invalid(format!("rho = {rho}")));
    }
    if rho >= 1.0 {
        return Err(TimingError::RhoTooLarge(rho));
    }
    if l < 2 {
        return Err(TimingError::Invalid(format!("L = {l}")));
    }
    let l = l as f64;
    let bound = l / (l + rho - l * rho);
    Ok((bound + 1e-9).floor() as usize + 1)
}

pub fn times_equal(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIME_TOL * a.abs().max(b.abs()).max(1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "U")]
    pub u: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub k: usize,
    pub scheme: Scheme,
    pub closed_form: f64,
    pub simulated: f64,
}

/// Both schemes at `M = 1`, `U = ρ`, over `L` in `ls`, `ρ` in `rhos` and `k`
/// in `ks` (block sizes above `L` are skipped).
pub fn grid(ls: &[usize], rhos: &[f64], ks: &[usize]) -> Result<Vec<GridRow>, TimingError> {
    let mut rows = Vec::new();
    for &l in ls {
        for &rho in rhos {
            for &k in ks {
                let model = TimingModel::new(l, rho, 1.0, k)?;
                for scheme in [Scheme::Semiclassical, Scheme::Hsqft] {
                    if scheme == Scheme::Hsqft && k > l {
                        continue;
                    }
                    rows.push(GridRow {
                        l,
                        u: rho,
                        m: 1.0,
                        k,
                        scheme,
                        closed_form: makespan_closed_form(&model, scheme)?,
                        simulated: schedule_simulate(&model, scheme)?,
                    });
                }
            }
        }
    }
    Ok(rows)
}

/// The ρ values of the reference grid.
pub fn reference_rhos() -> Vec<f64> {
    (1..=9).map(|i| i as f64 / 10.0).chain([1.5, 2.0]).collect()
}

/// Smallest `k ≤ L` whose simulated blocked schedule is strictly faster than
/// the simulated semiclassical one with two qubits.
pub fn min_k_by_simulation(l: usize, rho: f64) -> Result<Option<usize>, TimingError> {
    let semi = schedule_simulate(&TimingModel::new(l, rho, 1.0, 2)?, Scheme::Semiclassical)?;
    for k in 1..=l {
        let t = schedule_simulate(&TimingModel::new(l, rho, 1.0, k)?, Scheme::Hsqft)?;
        if t < semi && !times_equal(t, semi) {
            return Ok(Some(k));
        }
    }
    Ok(None)
}
