//! `dlshor`: reproducible experiments for Shor's discrete-logarithm
//! algorithm. Exit status 0 on success, 1 on usage errors, 2 on runtime
//! errors.

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use dlshor_core::arith::AdderKind;
use dlshor_core::circuit::{metrics, optimize};
use dlshor_core::estimate::{
    bundled_params, cross_validate, extrapolate, fit, generate_dataset, parse_params, safe_prime_equivalent_bits,
    schnorr_ratio, FitParams, FitReport, Metric, ResourceRow, DESK_RANGE, QUBIT_RANGE_LIMITS, SCHNORR_REF,
};
use dlshor_core::numtheory::{check_pair, classify_pair, enumerate_pairs, make_instance, same_qubits_target};
use dlshor_core::shor::{
    build_dlp_circuit, layout, outcome_distribution, result_distribution, sample_result_counts, sweep, DlpOptions,
    SweepMode, Variant,
};
use dlshor_core::sim::DEFAULT_QUBIT_CAP;
use dlshor_core::timing::{grid, min_k_by_simulation, min_k_hsqft, reference_rhos};

use output::{Format, Header};

const DEFAULT_SEED: u64 = 2024;

#[derive(Debug, Parser)]
#[command(
    name = "dlshor",
    version,
    about = "Shor's discrete-logarithm algorithm: circuits, simulation and resource estimates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output file (default: standard output).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Args)]
struct SimArgs {
    /// Largest circuit width the simulator accepts.
    #[arg(long, env = "DLSHOR_QUBIT_CAP", default_value_t = DEFAULT_QUBIT_CAP)]
    cap: usize,
    /// Read probabilities off the exact distribution (the default).
    #[arg(long, conflicts_with = "shots")]
    exact: bool,
    /// Estimate probabilities from this many sampled runs instead.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    shots: Option<u64>,
}

impl SimArgs {
    fn mode(&self) -> SweepMode {
        match self.shots {
            Some(n) => SweepMode::Shots(n as usize),
            None => SweepMode::Exact,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List every (p, q) group whose circuit fits in the qubit budget.
    #[command(after_help = "Output (csv): p,q,bits_p,bits_q,qubits,safe_prime")]
    Pairs {
        /// Qubit budget.
        #[arg(long, default_value_t = 32)]
        budget: u32,
        /// Adder used for the register layout.
        #[arg(long, default_value = "qadd")]
        adder: AdderKind,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Solve one random instance and report the success probability.
    #[command(
        after_help = "Output (json): p, q, g, h, s_true, probability, mode, shots, modal_s, results \
                      (probability of each recovered s; `failure` for runs that recover nothing)"
    )]
    Solve {
        /// Field prime.
        #[arg(long)]
        p: u64,
        /// Subgroup order, a prime dividing p - 1.
        #[arg(long)]
        q: u64,
        #[arg(long, default_value = "qadd")]
        adder: AdderKind,
        /// Circuit variant: standard, semiclassical1, semiclassical2 or hsqftK.
        #[arg(long, default_value = "standard")]
        variant: Variant,
        /// Master seed for the generator, the secret and sampling.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        sim: SimArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Success probability of one random instance per in-budget pair.
    #[command(after_help = "Output (csv): p,q,bits_p,bits_q,g,h,s,probability,mode,shots,seed")]
    Sweep {
        /// Qubit budget.
        #[arg(long, default_value_t = 20)]
        budget: u32,
        #[arg(long, default_value = "qadd")]
        adder: AdderKind,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Worker threads (0: one per core).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[command(flatten)]
        sim: SimArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Gate count, depth and non-Clifford count before and after optimization.
    #[command(
        after_help = "Output (csv): p,q,adder,qubits,gates_before,gates_after,depth_before,depth_after,\
                      nonclifford_before,nonclifford_after"
    )]
    Metrics {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value = "qadd")]
        adder: AdderKind,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Resource dataset over a range of R-ADD qubit counts.
    #[command(
        after_help = "Output (csv): p,q,bits_p,bits_q,qubits,gates_before,gates_after,depth_before,depth_after,\
                      nonclifford_before,nonclifford_after"
    )]
    Dataset {
        /// Smallest qubit count.
        #[arg(long, default_value_t = DESK_RANGE.0)]
        min_qubits: u32,
        /// Largest qubit count.
        #[arg(long, default_value_t = DESK_RANGE.1)]
        budget: u32,
        /// Pairs drawn per (bits_p, bits_q) cell.
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
        per_cell: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Worker threads (0: one per core).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Fit the resource model to a dataset, with k-fold cross-validation.
    #[command(
        after_help = "Output (json): metric, params {a..f}, cv {mean, rmse} for one metric, or \
                      reports [...] for all six. Model: a x^2 y + b x^2 + c x y + d x + e y + f with \
                      x = bits_p, y = bits_q."
    )]
    Fit {
        /// Dataset CSV written by `dataset`.
        #[arg(long, value_name = "PATH")]
        data: PathBuf,
        /// One metric (default: all six).
        #[arg(long)]
        metric: Option<Metric>,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(2..))]
        folds: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate the fitted model at (bits_p, bits_q).
    #[command(after_help = "Output (json or csv): metric, bits_p, bits_q, value")]
    Extrapolate {
        /// Parameter file (default: the bundled published constants).
        #[arg(long, value_name = "PATH")]
        params_file: Option<PathBuf>,
        #[arg(long)]
        metric: Option<Metric>,
        #[arg(long)]
        bits_p: f64,
        #[arg(long)]
        bits_q: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Safe-prime bit length with the same cost as a Schnorr group.
    #[command(
        after_help = "Output (json or csv): metric, bits_p, bits_q, target, equivalent_bits, ratio. \
                      With --chi the Schnorr group is (bits_p, chi * bits_p) and `ratio` is compared \
                      against the large-size limit chi^(1/3) in `limit_ratio`."
    )]
    Equiv {
        /// Parameter file (default: the bundled published constants).
        #[arg(long, value_name = "PATH")]
        params_file: Option<PathBuf>,
        #[arg(long)]
        metric: Option<Metric>,
        /// Schnorr modulus bits.
        #[arg(long, default_value_t = SCHNORR_REF.0)]
        bits_p: f64,
        /// Schnorr subgroup bits (ignored with --chi).
        #[arg(long, default_value_t = SCHNORR_REF.1)]
        bits_q: f64,
        /// Subgroup-to-modulus bit ratio, in (0, 1].
        #[arg(long)]
        chi: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// (bits_p, bits_q) maximizing the modular-exponentiation cost at a fixed qubit count.
    #[command(after_help = "Output (json or csv): budget, adder, bits_p, bits_q, bits_p_rounded, bits_q_rounded")]
    SameQubits {
        #[arg(long, default_value_t = 6659)]
        budget: u32,
        #[arg(long, default_value = "radd")]
        adder: AdderKind,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Makespan of the multiplication chain under qubit recycling, closed form vs schedule.
    #[command(
        after_help = "Output (csv): L,U,M,k,scheme,closed_form,simulated over L in 1..=max-l, \
                      rho = U/M in {0.1..0.9, 1.5, 2} (M = 1), k in 1..=max-k. With --min-k: \
                      L,rho,formula,simulated for rho < 1."
    )]
    Timing {
        #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
        max_l: u64,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
        max_k: u64,
        /// Report the smallest useful block size instead of the grid.
        #[arg(long)]
        min_k: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
}

enum Failure {
    Usage(String),
    Runtime(String),
}

fn runtime<E: ToString>(e: E) -> Failure {
    Failure::Runtime(e.to_string())
}

fn valid_pair(p: u64, q: u64) -> Result<(), Failure> {
    check_pair(p, q).map_err(|e| Failure::Usage(e.to_string()))
}

fn finish(text: Result<String, String>, out: &OutputArgs) -> Result<(), Failure> {
    let text = text.map_err(Failure::Runtime)?;
    output::emit(&text, out.out.as_deref()).map_err(runtime)
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool, Failure> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(runtime)
}

fn load_params(path: Option<&Path>) -> Result<std::collections::BTreeMap<Metric, FitParams>, Failure> {
    match path {
        None => Ok(bundled_params()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            parse_params(&text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))
        }
    }
}

fn selected(
    all: &std::collections::BTreeMap<Metric, FitParams>,
    metric: Option<Metric>,
) -> Result<Vec<(Metric, FitParams)>, Failure> {
    match metric {
        Some(m) => all
            .get(&m)
            .map(|k| vec![(m, *k)])
            .ok_or_else(|| Failure::Usage(format!("no parameters for {m}"))),
        None => Ok(all.iter().map(|(m, k)| (*m, *k)).collect()),
    }
}

#[derive(Serialize)]
struct PairRow {
    p: u64,
    q: u64,
    bits_p: u32,
    bits_q: u32,
    qubits: u32,
    safe_prime: bool,
}

#[derive(Serialize)]
struct ResultEntry {
    s: String,
    probability: f64,
}

#[derive(Serialize)]
struct Solution {
    p: u64,
    q: u64,
    g: u64,
    h: u64,
    s_true: u64,
    probability: f64,
    mode: String,
    shots: u64,
    modal_s: Option<u64>,
    results: Vec<ResultEntry>,
}

#[derive(Serialize)]
struct MetricsRow {
    p: u64,
    q: u64,
    adder: AdderKind,
    qubits: usize,
    gates_before: usize,
    gates_after: usize,
    depth_before: usize,
    depth_after: usize,
    nonclifford_before: usize,
    nonclifford_after: usize,
}

#[derive(Serialize)]
struct Evaluation {
    metric: Metric,
    bits_p: f64,
    bits_q: f64,
    value: f64,
}

#[derive(Serialize)]
struct Equivalence {
    metric: Metric,
    bits_p: f64,
    bits_q: f64,
    target: f64,
    equivalent_bits: f64,
    ratio: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    limit_ratio: Option<f64>,
}

#[derive(Serialize)]
struct SameQubits {
    budget: u32,
    adder: AdderKind,
    bits_p: f64,
    bits_q: f64,
    bits_p_rounded: u64,
    bits_q_rounded: u64,
}

#[derive(Serialize)]
struct MinKRow {
    #[serde(rename = "L")]
    l: usize,
    rho: f64,
    formula: usize,
    simulated: Option<usize>,
}

#[derive(Serialize)]
struct Reports {
    reports: Vec<FitReport>,
}

/// Single-object commands: JSON as is, CSV as a one-row table.
fn single<T: Serialize>(header: &Header, format: Option<Format>, value: T) -> Result<String, String> {
    match format.unwrap_or(Format::Json) {
        Format::Json => output::json_doc(header, &value),
        Format::Csv => output::csv_rows(header, &[value]),
    }
}

fn read_dataset(path: &Path) -> Result<Vec<ResourceRow>, Failure> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    reader
        .deserialize()
        .collect::<Result<Vec<ResourceRow>, _>>()
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Pairs { budget, adder, output } => {
            let pairs = enumerate_pairs(budget, adder).map_err(|e| Failure::Usage(e.to_string()))?;
            let rows: Vec<PairRow> = pairs
                .into_iter()
                .map(|(p, q)| {
                    let class = classify_pair(p, q).expect("enumerated pairs are valid");
                    PairRow {
                        p,
                        q,
                        bits_p: class.bits_p,
                        bits_q: class.bits_q,
                        qubits: layout(p, q, adder).total,
                        safe_prime: class.safe_prime,
                    }
                })
                .collect();
            let header = Header::new("pairs")
                .with("budget", budget)
                .with("adder", adder)
                .with("rows", rows.len());
            finish(
                output::rows(&header, output.format.unwrap_or(Format::Csv), &rows),
                &output,
            )
        }
        Command::Solve {
            p,
            q,
            adder,
            variant,
            seed,
            sim,
            output,
        } => {
            valid_pair(p, q)?;
            let lay = layout(p, q, adder);
            variant.check(&lay).map_err(|e| Failure::Usage(e.to_string()))?;
            let inst = make_instance(p, q, seed).map_err(runtime)?;
            let opts = DlpOptions::new(adder, variant);
            let (results, mode, shots) = match sim.mode() {
                SweepMode::Exact => {
                    let dist = outcome_distribution(&inst, &opts, sim.cap).map_err(runtime)?;
                    (result_distribution(&dist, &inst, &lay), "exact", 0)
                }
                SweepMode::Shots(n) => {
                    let shot_seed = dlshor_core::rng::derive_seed(seed, p, q, dlshor_core::rng::Purpose::Measurement);
                    let counts = sample_result_counts(&inst, &opts, n, shot_seed, sim.cap).map_err(runtime)?;
                    (counts.iter().map(|&c| c as f64 / n as f64).collect(), "shots", n as u64)
                }
            };
            let modal_s = (0..q as usize)
                .filter(|&s| results[s] > 0.0)
                .max_by(|&a, &b| results[a].total_cmp(&results[b]).then(b.cmp(&a)))
                .map(|s| s as u64);
            let solution = Solution {
                p,
                q,
                g: inst.g,
                h: inst.h,
                s_true: inst.s,
                probability: results[inst.s as usize],
                mode: mode.into(),
                shots,
                modal_s,
                results: results
                    .iter()
                    .enumerate()
                    .map(|(s, &probability)| ResultEntry {
                        s: if s as u64 == q { "failure".into() } else { s.to_string() },
                        probability,
                    })
                    .collect(),
            };
            let header = Header::new("solve")
                .with("p", p)
                .with("q", q)
                .with("adder", adder)
                .with("variant", variant)
                .with("seed", seed)
                .with("mode", mode)
                .with("shots", shots)
                .with("cap", sim.cap);
            let text = match output.format.unwrap_or(Format::Json) {
                Format::Json => output::json_doc(&header, &solution),
                Format::Csv => output::csv_rows(&header, &solution.results),
            };
            finish(text, &output)
        }
        Command::Sweep {
            budget,
            adder,
            seed,
            jobs,
            sim,
            output,
        } => {
            let mode = sim.mode();
            let rows = pool(jobs)?
                .install(|| sweep(budget, adder, mode, seed, sim.cap))
                .map_err(runtime)?;
            let header = Header::new("sweep")
                .with("budget", budget)
                .with("adder", adder)
                .with("seed", seed)
                .with("mode", if sim.shots.is_some() { "shots" } else { "exact" })
                .with("shots", sim.shots.unwrap_or(0))
                .with("cap", sim.cap);
            finish(
                output::rows(&header, output.format.unwrap_or(Format::Csv), &rows),
                &output,
            )
        }
        Command::Metrics {
            p,
            q,
            adder,
            seed,
            output,
        } => {
            valid_pair(p, q)?;
            let inst = make_instance(p, q, seed).map_err(runtime)?;
            let circuit = build_dlp_circuit(&inst, adder, Variant::Standard).map_err(runtime)?;
            let (before, after) = (metrics(&circuit), metrics(&optimize(&circuit)));
            let row = MetricsRow {
                p,
                q,
                adder,
                qubits: before.n_qubits,
                gates_before: before.gate_count,
                gates_after: after.gate_count,
                depth_before: before.depth,
                depth_after: after.depth,
                nonclifford_before: before.non_clifford_count,
                nonclifford_after: after.non_clifford_count,
            };
            let header = Header::new("metrics")
                .with("p", p)
                .with("q", q)
                .with("adder", adder)
                .with("seed", seed);
            finish(
                output::rows(&header, output.format.unwrap_or(Format::Csv), &[row]),
                &output,
            )
        }
        Command::Dataset {
            min_qubits,
            budget,
            per_cell,
            seed,
            jobs,
            output,
        } => {
            let (lo, hi) = QUBIT_RANGE_LIMITS;
            if min_qubits > budget || min_qubits < lo || budget > hi {
                return Err(Failure::Usage(format!("qubit range must lie within {lo}..={hi}")));
            }
            let rows = pool(jobs)?
                .install(|| generate_dataset((min_qubits, budget), per_cell as usize, seed))
                .map_err(runtime)?;
            let header = Header::new("dataset")
                .with("adder", AdderKind::Radd)
                .with("min_qubits", min_qubits)
                .with("budget", budget)
                .with("per_cell", per_cell)
                .with("seed", seed);
            finish(
                output::rows(&header, output.format.unwrap_or(Format::Csv), &rows),
                &output,
            )
        }
        Command::Fit {
            data,
            metric,
            folds,
            seed,
            output,
        } => {
            let rows = read_dataset(&data)?;
            let report = |m: Metric| -> Result<FitReport, Failure> {
                Ok(FitReport {
                    metric: m,
                    params: fit(&rows, m).map_err(runtime)?,
                    cv: cross_validate(&rows, m, folds as usize, seed).map_err(runtime)?,
                })
            };
            let header = Header::new("fit")
                .with("data", data.display())
                .with("rows", rows.len())
                .with("folds", folds)
                .with("seed", seed);
            let text = match metric {
                Some(m) => single(&header, output.format, report(m)?),
                None => {
                    let reports = Metric::ALL.into_iter().map(report).collect::<Result<Vec<_>, _>>()?;
                    match output.format.unwrap_or(Format::Json) {
                        Format::Json => output::json_doc(&header, &Reports { reports }),
                        Format::Csv => Err("fit reports for all metrics are JSON only; pass --metric for CSV".into()),
                    }
                }
            };
            finish(text, &output)
        }
        Command::Extrapolate {
            params_file,
            metric,
            bits_p,
            bits_q,
            output,
        } => {
            let all = load_params(params_file.as_deref())?;
            let rows: Vec<Evaluation> = selected(&all, metric)?
                .into_iter()
                .map(|(metric, k)| Evaluation {
                    metric,
                    bits_p,
                    bits_q,
                    value: extrapolate(&k, bits_p, bits_q),
                })
                .collect();
            let header = Header::new("extrapolate")
                .with(
                    "params_file",
                    params_file
                        .as_ref()
                        .map_or("bundled".into(), |p| p.display().to_string()),
                )
                .with("bits_p", bits_p)
                .with("bits_q", bits_q);
            let text = match rows.len() {
                1 => single(&header, output.format, rows.into_iter().next().expect("one row")),
                _ => output::rows(&header, output.format.unwrap_or(Format::Json), &rows),
            };
            finish(text, &output)
        }
        Command::Equiv {
            params_file,
            metric,
            bits_p,
            bits_q,
            chi,
            output,
        } => {
            let all = load_params(params_file.as_deref())?;
            let limit = chi
                .map(schnorr_ratio)
                .transpose()
                .map_err(|e| Failure::Usage(e.to_string()))?;
            let bits_q = chi.map_or(bits_q, |c| c * bits_p);
            let rows = selected(&all, metric)?
                .into_iter()
                .map(|(metric, k)| {
                    let target = extrapolate(&k, bits_p, bits_q);
                    let bits = safe_prime_equivalent_bits(&k, target).map_err(runtime)?;
                    Ok(Equivalence {
                        metric,
                        bits_p,
                        bits_q,
                        target,
                        equivalent_bits: bits,
                        ratio: bits / bits_p,
                        limit_ratio: limit,
                    })
                })
                .collect::<Result<Vec<_>, Failure>>()?;
            let mut header = Header::new("equiv")
                .with(
                    "params_file",
                    params_file
                        .as_ref()
                        .map_or("bundled".into(), |p| p.display().to_string()),
                )
                .with("bits_p", bits_p)
                .with("bits_q", bits_q);
            if let Some(c) = chi {
                header = header.with("chi", c);
            }
            let text = match rows.len() {
                1 => single(&header, output.format, rows.into_iter().next().expect("one row")),
                _ => output::rows(&header, output.format.unwrap_or(Format::Json), &rows),
            };
            finish(text, &output)
        }
        Command::SameQubits { budget, adder, output } => {
            let (x, y) = same_qubits_target(budget, adder).map_err(|e| Failure::Usage(e.to_string()))?;
            let row = SameQubits {
                budget,
                adder,
                bits_p: x,
                bits_q: y,
                bits_p_rounded: (x + 0.5).floor() as u64,
                bits_q_rounded: (y + 0.5).floor() as u64,
            };
            let header = Header::new("same-qubits").with("budget", budget).with("adder", adder);
            finish(single(&header, output.format, row), &output)
        }
        Command::Timing {
            max_l,
            max_k,
            min_k,
            output,
        } => {
            let header = Header::new("timing")
                .with("max_l", max_l)
                .with("max_k", max_k)
                .with("min_k", min_k);
            let format = output.format.unwrap_or(Format::Csv);
            let text = if min_k {
                let mut rows = Vec::new();
                for l in 2..=max_l as usize {
                    for rho in reference_rhos().into_iter().filter(|&r| r < 1.0) {
                        rows.push(MinKRow {
                            l,
                            rho,
                            formula: min_k_hsqft(l, rho).map_err(runtime)?,
                            simulated: min_k_by_simulation(l, rho).map_err(runtime)?,
                        });
                    }
                }
                output::rows(&header, format, &rows)
            } else {
                let ls: Vec<usize> = (1..=max_l as usize).collect();
                let ks: Vec<usize> = (1..=max_k as usize).collect();
                let rows = grid(&ls, &reference_rhos(), &ks).map_err(runtime)?;
                output::rows(&header, format, &rows)
            };
            finish(text, &output)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("For more information, try '--help'.");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
