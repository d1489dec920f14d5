//! Resource datasets over `(bits_p, bits_q)` cells, the six-term surface fit
//! `a·x²y + b·x² + c·xy + d·x + e·y + f`, cross-validation and extrapolation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::AdderKind;
use crate::circuit::{metrics, optimize};
use crate::numtheory::{bit_length, is_prime, make_instance, NumTheoryError};
use crate::rng::{self, Purpose};
use crate::shor::{build_dlp_circuit, layout, total_for_widths, BuildError, Variant};

/// Widest qubit range accepted by [`generate_dataset`].
pub const QUBIT_RANGE_LIMITS: (u32, u32) = (12, 90);
pub const DESK_RANGE: (u32, u32) = (12, 45);
/// `(bits_p, bits_q)` of the reference Schnorr group, and the alternates.
pub const SCHNORR_REF: (f64, f64) = (2048.0, 256.0);
pub const SCHNORR_ALTERNATES: [(f64, f64); 2] = [(2048.0, 224.0), (3072.0, 256.0)];
pub const SAFE_PRIME_BRACKET: (f64, f64) = (8.0, 8192.0);
const BISECTION_TOL: f64 = 1e-4;
/// Above this many `(q, k)` candidates a cell is sampled instead of enumerated.
const EXHAUSTIVE_CANDIDATES: u64 = 1 << 22;
/// Fitted constants shipped with the crate, keyed by metric name.
pub const BUNDLED_PARAMS: &str = include_str!("../data/fit_params.json");

#[derive(Debug, Error)]
pub enum EstimateError {
    #[error("qubit range [{0}, {1}] is outside [12, 90]")]
    BadRange(u32, u32),
    #[error("design matrix is rank deficient ({0} usable rows)")]
    RankDeficient(usize),
    #[error("{rows} rows cannot be split into {folds} folds")]
    TooFewRows { rows: usize, folds: usize },
    #[error("no sign change of the safe-prime model in [{0}, {1}] bits")]
    NoRoot(f64, f64),
    #[error("chi must lie in (0, 1], got {0}")]
    BadChi(f64),
    #[error("unknown metric {0:?}")]
    UnknownMetric(String),
    #[error("bad parameter file: {0}")]
    Params(String),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    NumTheory(#[from] NumTheoryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    GatesBefore,
    GatesAfter,
    DepthBefore,
    DepthAfter,
    NoncliffordBefore,
    NoncliffordAfter,
}

impl Metric {
    pub const ALL: [Metric; 6] = [
        Metric::GatesBefore,
        Metric::GatesAfter,
        Metric::DepthBefore,
        Metric::DepthAfter,
        Metric::NoncliffordBefore,
        Metric::NoncliffordAfter,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::GatesBefore => "gates_before",
            Metric::GatesAfter => "gates_after",
            Metric::DepthBefore => "depth_before",
            Metric::DepthAfter => "depth_after",
            Metric::NoncliffordBefore => "nonclifford_before",
            Metric::NoncliffordAfter => "nonclifford_after",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = EstimateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| EstimateError::UnknownMetric(s.to_string()))
    }
}

/// One generated circuit. `bits_q` is the bit length of `q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceRow {
    pub p: u64,
    pub q: u64,
    pub bits_p: u32,
    pub bits_q: u32,
    pub qubits: u32,
    pub gates_before: u64,
    pub gates_after: u64,
    pub depth_before: u64,
    pub depth_after: u64,
    pub nonclifford_before: u64,
    pub nonclifford_after: u64,
}

impl ResourceRow {
    pub fn value(&self, metric: Metric) -> f64 {
        (match metric {
            Metric::GatesBefore => self.gates_before,
            Metric::GatesAfter => self.gates_after,
            Metric::DepthBefore => self.depth_before,
            Metric::DepthAfter => self.depth_after,
            Metric::NoncliffordBefore => self.nonclifford_before,
            Metric::NoncliffordAfter => self.nonclifford_after,
        }) as f64
    }
}

/// `(bits_p, bits_q)` cells whose R-ADD layout uses exactly `qubits` qubits.
pub fn cells_for_qubits(qubits: u32) -> Vec<(u32, u32)> {
    (3..=qubits / 3)
        .flat_map(|w| (2..w).map(move |v| (w, v)))
        .filter(|&(w, v)| total_for_widths(w, v, AdderKind::Radd) == qubits)
        .collect()
}

fn primes_with_bits(bits: u32) -> impl Iterator<Item = u64> {
    let lo = if bits == 2 { 2 } else { 1u64 << (bits - 1) };
    (lo..1u64 << bits).filter(|&n| is_prime(n))
}

/// Every pair of the cell, sorted.
pub fn cell_pairs(bits_p: u32, bits_q: u32) -> Vec<(u64, u64)> {
    let (lo, hi) = (1u64 << (bits_p - 1), 1u64 << bits_p);
    let mut out = Vec::new();
    for q in primes_with_bits(bits_q) {
        let first = (lo - 1).div_ceil(q).max(1);
        for k in first.. {
            let p = k * q + 1;
            if p >= hi {
                break;
            }
            if is_prime(p) {
                out.push((p, q));
            }
        }
    }
    out.sort_unstable();
    out
}

fn candidate_count(bits_p: u32, bits_q: u32) -> u64 {
    let span = 1u64 << (bits_p - 1);
    primes_with_bits(bits_q).map(|q| span / q + 1).sum()
}

/// Up to `per_cell` distinct pairs of the cell, chosen by a seeded draw.
/// Small cells are enumerated and shuffled; large ones are sampled by
/// drawing `q` then a cofactor until enough primes `p` turn up.
pub fn select_pairs(bits_p: u32, bits_q: u32, per_cell: usize, seed: u64) -> Vec<(u64, u64)> {
    let mut rng = rng::stream(seed, u64::from(bits_p), u64::from(bits_q), Purpose::Dataset);
    if candidate_count(bits_p, bits_q) <= EXHAUSTIVE_CANDIDATES {
        let mut all = cell_pairs(bits_p, bits_q);
        all.shuffle(&mut rng);
        all.truncate(per_cell);
        all.sort_unstable();
        return all;
    }
    let qs: Vec<u64> = primes_with_bits(bits_q).collect();
    let (lo, hi) = (1u64 << (bits_p - 1), 1u64 << bits_p);
    let mut chosen = BTreeSet::new();
    while chosen.len() < per_cell {
        let q = qs[rng.random_range(0..qs.len())];
        let k = rng.random_range((lo - 1).div_ceil(q)..=(hi - 2) / q);
        let p = k * q + 1;
        if is_prime(p) {
            chosen.insert((p, q));
        }
    }
    chosen.into_iter().collect()
}

/// Gate, depth and non-Clifford counts of the standard R-ADD circuit for one
/// pair, before and after optimization.
pub fn resource_row(p: u64, q: u64, seed: u64) -> Result<ResourceRow, EstimateError> {
    let inst = make_instance(p, q, seed)?;
    let circuit = build_dlp_circuit(&inst, AdderKind::Radd, Variant::Standard)?;
    let before = metrics(&circuit);
    let after = metrics(&optimize(&circuit));
    Ok(ResourceRow {
        p,
        q,
        bits_p: bit_length(p),
        bits_q: bit_length(q),
        qubits: layout(p, q, AdderKind::Radd).total,
        gates_before: before.gate_count as u64,
        gates_after: after.gate_count as u64,
        depth_before: before.depth as u64,
        depth_after: after.depth as u64,
        nonclifford_before: before.non_clifford_count as u64,
        nonclifford_after: after.non_clifford_count as u64,
    })
}

/// One row per selected pair over every cell with a qubit count in `range`,
/// sorted by `(qubits, bits_p, bits_q, p, q)`. Empty cells contribute nothing.
pub fn generate_dataset(range: (u32, u32), per_cell: usize, seed: u64) -> Result<Vec<ResourceRow>, EstimateError> {
    let (lo, hi) = range;
    if lo > hi || lo < QUBIT_RANGE_LIMITS.0 || hi > QUBIT_RANGE_LIMITS.1 {
        return Err(EstimateError::BadRange(lo, hi));
    }
    let pairs: Vec<(u64, u64)> = (lo..=hi)
        .flat_map(cells_for_qubits)
        .collect::<Vec<_>>()
        .into_par_iter()
        .flat_map_iter(|(w, v)| select_pairs(w, v, per_cell, seed))
        .collect();
    let mut rows = pairs
        .into_par_iter()
        .map(|(p, q)| resource_row(p, q, seed))
        .collect::<Result<Vec<_>, _>>()?;
    rows.sort_by_key(|r| (r.qubits, r.bits_p, r.bits_q, r.p, r.q));
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

impl FitParams {
    pub fn from_array(v: [f64; 6]) -> Self {
        FitParams {
            a: v[0],
            b: v[1],
            c: v[2],
            d: v[3],
            e: v[4],
            f: v[5],
        }
    }

    pub fn to_array(self) -> [f64; 6] {
        [self.a, self.b, self.c, self.d, self.e, self.f]
    }

    pub fn is_finite(self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }
}

fn basis(x: f64, y: f64) -> [f64; 6] {
    [x * x * y, x * x, x * y, x, y, 1.0]
}

/// The model at `(bits_p, bits_q)`.
pub fn extrapolate(params: &FitParams, bits_p: f64, bits_q: f64) -> f64 {
    basis(bits_p, bits_q)
        .iter()
        .zip(params.to_array())
        .map(|(b, k)| b * k)
        .sum()
}

fn mean_std(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count() as f64;
    let mean = values.clone().sum::<f64>() / n;
    let var = values.map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, if var > 0.0 { var.sqrt() } else { 1.0 })
}

/// Linear least squares on points `(x, y, z)`. The fit runs on standardized
/// `u = (x - mx)/sx`, `t = (y - my)/sy` through a QR factorization; the
/// monomial family is closed under these substitutions, so the result is
/// mapped back exactly.
pub fn fit_points(points: &[(f64, f64, f64)]) -> Result<FitParams, EstimateError> {
    let n = points.len();
    if n < 6 {
        return Err(EstimateError::RankDeficient(n));
    }
    let (mx, sx) = mean_std(points.iter().map(|p| p.0));
    let (my, sy) = mean_std(points.iter().map(|p| p.1));
    let design = DMatrix::from_fn(n, 6, |i, j| basis((points[i].0 - mx) / sx, (points[i].1 - my) / sy)[j]);
    let rhs = DVector::from_iterator(n, points.iter().map(|p| p.2));
    let qr = design.qr();
    let r = qr.r();
    let diag_max = (0..6).map(|i| r[(i, i)].abs()).fold(0.0, f64::max);
    if (0..6).any(|i| r[(i, i)].abs() <= 1e-9 * diag_max.max(1e-300)) {
        return Err(EstimateError::RankDeficient(n));
    }
    let qtb = qr.q().transpose() * rhs;
    let sol = r.solve_upper_triangular(&qtb).ok_or(EstimateError::RankDeficient(n))?;
    let [ca, cb, cc, cd, ce, cf] = [sol[0], sol[1], sol[2], sol[3], sol[4], sol[5]];
    // u = αx + β, t = γy + δ
    let (al, be) = (1.0 / sx, -mx / sx);
    let (ga, de) = (1.0 / sy, -my / sy);
    let params = FitParams {
        a: ca * al * al * ga,
        b: ca * al * al * de + cb * al * al,
        c: 2.0 * ca * al * be * ga + cc * al * ga,
        d: 2.0 * ca * al * be * de + 2.0 * cb * al * be + cc * al * de + cd * al,
        e: ca * be * be * ga + cc * be * ga + ce * ga,
        f: ca * be * be * de + cb * be * be + cc * be * de + cd * be + ce * de + cf,
    };
    if params.is_finite() {
        Ok(params)
    } else {
        Err(EstimateError::RankDeficient(n))
    }
}

fn points(rows: &[ResourceRow], metric: Metric) -> Vec<(f64, f64, f64)> {
    rows.iter()
        .map(|r| (f64::from(r.bits_p), f64::from(r.bits_q), r.value(metric)))
        .collect()
}

pub fn fit(rows: &[ResourceRow], metric: Metric) -> Result<FitParams, EstimateError> {
    fit_points(&points(rows, metric))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CvSummary {
    /// Mean over folds of the test-set mean.
    pub mean: f64,
    /// Mean over folds of the test-set RMSE.
    pub rmse: f64,
}

impl CvSummary {
    pub fn relative_rmse(&self) -> f64 {
        self.rmse / self.mean
    }
}

/// k-fold cross-validation after a seeded shuffle; fold `i` is the slice
/// `[i·n/k, (i+1)·n/k)`.
pub fn cross_validate_points(points: &[(f64, f64, f64)], folds: usize, seed: u64) -> Result<CvSummary, EstimateError> {
    let n = points.len();
    if folds < 2 || n < folds {
        return Err(EstimateError::TooFewRows { rows: n, folds });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng::stream(seed, n as u64, folds as u64, Purpose::CrossValidation));
    let (mut mean_sum, mut rmse_sum) = (0.0, 0.0);
    for i in 0..folds {
        let (lo, hi) = (i * n / folds, (i + 1) * n / folds);
        let test: Vec<_> = order[lo..hi].iter().map(|&j| points[j]).collect();
        let train: Vec<_> = order[..lo].iter().chain(&order[hi..]).map(|&j| points[j]).collect();
        let params = fit_points(&train)?;
        let m = test.len() as f64;
        mean_sum += test.iter().map(|p| p.2).sum::<f64>() / m;
        let sse: f64 = test
            .iter()
            .map(|p| (extrapolate(&params, p.0, p.1) - p.2).powi(2))
            .sum();
        rmse_sum += (sse / m).sqrt();
    }
    Ok(CvSummary {
        mean: mean_sum / folds as f64,
        rmse: rmse_sum / folds as f64,
    })
}

pub fn cross_validate(
    rows: &[ResourceRow],
    metric: Metric,
    folds: usize,
    seed: u64,
) -> Result<CvSummary, EstimateError> {
    cross_validate_points(&points(rows, metric), folds, seed)
}

/// Whether both partial derivatives are positive at every listed point.
pub fn is_increasing_at(params: &FitParams, at: &[(f64, f64)]) -> bool {
    let FitParams { a, b, c, d, e, .. } = *params;
    at.iter()
        .all(|&(x, y)| 2.0 * a * x * y + 2.0 * b * x + c * y + d > 0.0 && a * x * x + c * x + e > 0.0)
}

/// The model restricted to `bits_q = bits_p - 1`, as a cubic in `bits_p`.
pub fn safe_prime_model(params: &FitParams, x: f64) -> f64 {
    let FitParams { a, b, c, d, e, f } = *params;
    ((a * x + (-a + b + c)) * x + (-c + d + e)) * x + (-e + f)
}

/// `bits_p` at which the safe-prime model reaches `target`, by bisection over
/// [`SAFE_PRIME_BRACKET`].
pub fn safe_prime_equivalent_bits(params: &FitParams, target: f64) -> Result<f64, EstimateError> {
    let (mut lo, mut hi) = SAFE_PRIME_BRACKET;
    let g = |x: f64| safe_prime_model(params, x) - target;
    let (glo, ghi) = (g(lo), g(hi));
    if !(glo.is_finite() && ghi.is_finite()) || glo.signum() == ghi.signum() {
        return Err(EstimateError::NoRoot(lo, hi));
    }
    let rising = glo < 0.0;
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if (g(mid) < 0.0) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Safe-prime bit length matching the model at the reference Schnorr group.
pub fn schnorr_equivalent_bits(params: &FitParams) -> Result<f64, EstimateError> {
    safe_prime_equivalent_bits(params, extrapolate(params, SCHNORR_REF.0, SCHNORR_REF.1))
}

/// Ratio of safe-prime to Schnorr modulus length when `log q = χ log p`.
pub fn schnorr_ratio(chi: f64) -> Result<f64, EstimateError> {
    if chi > 0.0 && chi <= 1.0 {
        Ok(chi.cbrt())
    } else {
        Err(EstimateError::BadChi(chi))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub metric: Metric,
    pub params: FitParams,
    pub cv: CvSummary,
}

/// Parameter sets from JSON: a map from metric name to parameters, a single
/// [`FitReport`], or an object whose `reports` field lists fit reports.
/// Unknown fields (such as a run header) are ignored.
pub fn parse_params(json: &str) -> Result<BTreeMap<Metric, FitParams>, EstimateError> {
    let bad = |e: serde_json::Error| EstimateError::Params(e.to_string());
    let mut value: serde_json::Value = serde_json::from_str(json).map_err(bad)?;
    if value.get("params").is_some() {
        let report: FitReport = serde_json::from_value(value).map_err(bad)?;
        return Ok(BTreeMap::from([(report.metric, report.params)]));
    }
    if let Some(reports) = value.get_mut("reports") {
        let reports: Vec<FitReport> = serde_json::from_value(reports.take()).map_err(bad)?;
        return Ok(reports.into_iter().map(|r| (r.metric, r.params)).collect());
    }
    let raw: BTreeMap<String, FitParams> = serde_json::from_value(value).map_err(bad)?;
    raw.into_iter().map(|(k, v)| Ok((k.parse()?, v))).collect()
}

pub fn bundled_params() -> BTreeMap<Metric, FitParams> {
    parse_params(BUNDLED_PARAMS).expect("bundled parameter file parses")
}
