//! Acceptance suite. Runs every criterion in sequence (so the timed ones are
//! not competing for the CPU), prints one PASS/FAIL line each and exits
//! nonzero if any criterion fails.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use dlshor_core::arith::{build_mcx, build_mod_exp, AdderKind, AncillaSpec, McxMode};
use dlshor_core::circuit::{optimize, Circuit};
use dlshor_core::estimate::{
    bundled_params, cross_validate, extrapolate, fit, generate_dataset, is_increasing_at, safe_prime_equivalent_bits,
    schnorr_equivalent_bits, Metric, DESK_RANGE,
};
use dlshor_core::numtheory::{classify_pair, enumerate_pairs, make_instance, mod_pow, same_qubits_target, DlpInstance};
use dlshor_core::shor::{
    layout, outcome_distribution, result_distribution, sample_success_rate, success_probability_exact,
    success_probability_variant, sweep, wire_bases, DlpOptions, SweepMode, Variant,
};
use dlshor_core::sim::{outcome_distribution_with, qubit_cap, Backend, SparseState};
use dlshor_core::timing::{grid, min_k_by_simulation, min_k_hsqft, reference_rhos, times_equal};
use dlshor_core::Gate;
use num_complex::Complex64;
use rand::seq::IndexedRandom;

const SEED: u64 = 2024;
const ADDERS: [AdderKind; 2] = [AdderKind::Qadd, AdderKind::Radd];

type Verdict = Result<String, String>;

fn check(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within_time(limit: Duration, took: Duration, verdict: Verdict) -> Verdict {
    match verdict {
        Ok(d) if took > limit => Err(format!("{d}; took {took:.2?}, limit {limit:?}")),
        other => other,
    }
}

fn c1_pair_enumeration() -> Verdict {
    let start = Instant::now();
    let pairs = enumerate_pairs(32, AdderKind::Qadd).map_err(|e| e.to_string())?;
    let took = start.elapsed();
    let safe = pairs
        .iter()
        .filter(|&&(p, q)| p < 300 && classify_pair(p, q).map(|c| c.safe_prime).unwrap_or(false))
        .count();
    let detail = format!(
        "{} pairs (want 1860), {safe} safe-prime pairs with p < 300 (want 11)",
        pairs.len()
    );
    within_time(
        Duration::from_secs(5),
        took,
        check(pairs.len() == 1860 && safe == 11, detail),
    )
}

fn c2_soundness() -> Verdict {
    let rows = sweep(20, AdderKind::Qadd, SweepMode::Exact, SEED, qubit_cap()).map_err(|e| e.to_string())?;
    let mut wrong = Vec::new();
    for row in &rows {
        let inst = DlpInstance::new(row.p, row.q, row.g, row.s).map_err(|e| e.to_string())?;
        let lay = layout(inst.p, inst.q, AdderKind::Qadd);
        let dist = outcome_distribution(&inst, &DlpOptions::new(AdderKind::Qadd, Variant::Standard), qubit_cap())
            .map_err(|e| e.to_string())?;
        let results = result_distribution(&dist, &inst, &lay);
        let modal = (0..inst.q as usize)
            .max_by(|&a, &b| results[a].total_cmp(&results[b]))
            .unwrap_or(0);
        if modal as u64 != inst.s {
            wrong.push((row.p, row.q));
        }
    }
    check(
        wrong.is_empty() && !rows.is_empty(),
        format!("{} pairs, modal result wrong for {:?}", rows.len(), wrong),
    )
}

fn c3_oracle() -> Verdict {
    let mut worst = 0.0f64;
    for (p, q) in [(7, 3), (5, 2), (11, 5), (7, 2)] {
        let inst = make_instance(p, q, SEED).map_err(|e| e.to_string())?;
        let exact = success_probability_exact(&inst, AdderKind::Qadd).map_err(|e| e.to_string())?;
        worst = worst.max((exact - common::analytic_success(q, inst.s)).abs());
    }
    check(worst < 1e-9, format!("max |circuit - oracle| = {worst:.2e}"))
}

fn c4_waveform() -> Verdict {
    let rows = sweep(22, AdderKind::Qadd, SweepMode::Exact, SEED, qubit_cap()).map_err(|e| e.to_string())?;
    let mean = |q: u64| {
        let v: Vec<f64> = rows.iter().filter(|r| r.q == q).map(|r| r.probability).collect();
        (v.iter().sum::<f64>() / v.len() as f64, v.len())
    };
    let ((m5, n5), (m7, n7)) = (mean(5), mean(7));
    let min3 = rows
        .iter()
        .filter(|r| r.q == 3)
        .map(|r| r.probability)
        .fold(f64::INFINITY, f64::min);
    check(
        n5 > 0 && n7 > 0 && m5 > m7 && (min3 - 0.4181).abs() <= 0.01,
        format!("mean q=5 {m5:.4} ({n5}) vs q=7 {m7:.4} ({n7}); min over q=3 {min3:.4} (want 0.4181 ± 0.01)"),
    )
}

fn c5_sampling() -> Verdict {
    let pairs = enumerate_pairs(18, AdderKind::Qadd).map_err(|e| e.to_string())?;
    let mut rng = dlshor_core::rng::from_seed(SEED);
    let shots = 10_000;
    let mut inside = 0;
    let mut report = Vec::new();
    for i in 0..10u64 {
        let &(p, q) = pairs.choose(&mut rng).ok_or("no pairs")?;
        let inst = make_instance(p, q, SEED + i).map_err(|e| e.to_string())?;
        let exact = success_probability_exact(&inst, AdderKind::Qadd).map_err(|e| e.to_string())?;
        let rate = sample_success_rate(&inst, AdderKind::Qadd, shots, SEED ^ (i + 1)).map_err(|e| e.to_string())?;
        let sigma = (exact * (1.0 - exact) / shots as f64).sqrt();
        if (rate - exact).abs() <= 3.0 * sigma {
            inside += 1;
        }
        report.push(format!("({p},{q})"));
    }
    check(
        inside >= 9,
        format!("{inside}/10 within 3 sigma over {}", report.join(" ")),
    )
}

/// Runs `circuit` on one basis state and returns the single output index,
/// provided it carries amplitude 1.
fn basis_image(circuit: &Circuit, input: usize) -> Option<usize> {
    let mut s = SparseState::new(circuit.n_qubits);
    for q in (0..circuit.n_qubits).filter(|q| input >> q & 1 == 1) {
        s.apply_gate(&Gate::x(q)).ok()?;
    }
    for g in circuit.gates() {
        s.apply_gate(g).ok()?;
    }
    if s.support() != 1 {
        return None;
    }
    let idx = s.to_dense().iter().position(|a| a.norm_sqr() > 0.5)?;
    ((s.amplitude(idx) - Complex64::new(1.0, 0.0)).norm() < 1e-9).then_some(idx)
}

fn c6_mod_exp() -> Verdict {
    let pairs: Vec<(u64, u64)> = enumerate_pairs(30, AdderKind::Qadd)
        .map_err(|e| e.to_string())?
        .into_iter()
        .filter(|&(p, _)| p <= 23)
        .collect();
    let mut checked = 0usize;
    for &(p, q) in &pairs {
        let inst = make_instance(p, q, SEED).map_err(|e| e.to_string())?;
        for adder in ADDERS {
            let lay = layout(p, q, adder);
            let (v1, v2) = (lay.v1 as usize, lay.v2 as usize);
            let bases = wire_bases(&inst, &lay);
            let steps: Vec<(u64, usize)> = (0..v1)
                .map(|i| (bases[i], v1 - 1 - i))
                .chain((0..v2).map(|i| (bases[v1 + i], v1 + v2 - 1 - i)))
                .collect();
            let f = build_mod_exp(&steps, v1 + v2, p, adder, McxMode::Decompose).map_err(|e| e.to_string())?;
            let value_bits = |y: u64| -> usize {
                f.value
                    .iter()
                    .enumerate()
                    .map(|(b, &w)| ((y >> b & 1) as usize) << w)
                    .sum()
            };
            for x in 0..1usize << (v1 + v2) {
                let (x1, x2) = ((x & ((1 << v1) - 1)) as u64, (x >> v1) as u64);
                let y = mod_pow(inst.h, x1, p) * mod_pow(inst.g, x2, p) % p;
                let got = basis_image(&f.circuit, x | value_bits(1));
                if got != Some(x | value_bits(y)) {
                    return Err(format!("({p},{q}) {adder}: |{x1},{x2},1> maps to {got:?}"));
                }
                checked += 1;
            }
        }
    }
    check(
        pairs.len() == 13,
        format!("{} pairs, {checked} basis inputs, both adders", pairs.len()),
    )
}

fn c7_variants() -> Verdict {
    let mut worst = 0.0f64;
    for (p, q) in [(7, 3), (11, 5), (13, 3)] {
        let inst = make_instance(p, q, SEED).map_err(|e| e.to_string())?;
        let probs: Vec<f64> = [
            Variant::Standard,
            Variant::Semiclassical(1),
            Variant::Semiclassical(2),
            Variant::Hsqft(2),
        ]
        .into_iter()
        .map(|v| success_probability_variant(&inst, &DlpOptions::new(AdderKind::Qadd, v), qubit_cap()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
        worst = probs.iter().map(|p| (p - probs[0]).abs()).fold(worst, f64::max);
    }
    check(worst < 1e-9, format!("max spread {worst:.2e}"))
}

fn c8_mcx() -> Verdict {
    let cases = [(3, 1, 0, 3), (3, 0, 1, 4), (4, 2, 0, 5), (4, 1, 1, 6), (4, 0, 2, 8)];
    let mut counts = Vec::new();
    for (n, clean, dirty, want) in cases {
        let (c, count) = build_mcx(n, AncillaSpec { clean, dirty }).map_err(|e| e.to_string())?;
        counts.push(count);
        if count != want || c.toffoli_count() != want {
            return Err(format!(
                "{n} controls, {clean} clean, {dirty} dirty: {count} Toffolis, want {want}"
            ));
        }
        let clean_mask: usize = (n + 1..n + 1 + clean).map(|q| 1 << q).sum();
        let all_controls = (1usize << n) - 1;
        for input in (0..1usize << c.n_qubits).filter(|i| i & clean_mask == 0) {
            let want = if input & all_controls == all_controls {
                input ^ 1 << n
            } else {
                input
            };
            if basis_image(&c, input) != Some(want) {
                return Err(format!(
                    "{n} controls, {clean} clean, {dirty} dirty: wrong image of {input:#b}"
                ));
            }
        }
    }
    Ok(format!("Toffoli counts {counts:?}, truth tables exact"))
}

fn c9_published_constants() -> Verdict {
    let start = Instant::now();
    let params = bundled_params();
    // (metric, safe-prime value, Schnorr value, equivalent bits)
    let reference = [
        (Metric::GatesBefore, 2.46e13, 3.09e12, 1024.510),
        (Metric::GatesAfter, 7.98e12, 1.00e12, 1024.533),
        (Metric::DepthBefore, 1.33e13, 1.67e12, 1024.846),
        (Metric::DepthAfter, 6.00e12, 7.55e11, 1024.861),
        (Metric::NoncliffordBefore, 1.14e13, 1.43e12, 1024.515),
        (Metric::NoncliffordAfter, 7.62e12, 9.59e11, 1024.532),
    ];
    let mut worst_rel = 0.0f64;
    let mut worst_bits = 0.0f64;
    for (metric, sp, schnorr, bits) in reference {
        let k = &params[&metric];
        worst_rel = worst_rel
            .max((extrapolate(k, 2048.0, 2047.0) / sp - 1.0).abs())
            .max((extrapolate(k, 2048.0, 256.0) / schnorr - 1.0).abs());
        let eq = schnorr_equivalent_bits(k).map_err(|e| e.to_string())?;
        worst_bits = worst_bits.max((eq - bits).abs());
    }
    let (x, y) = same_qubits_target(6659, AdderKind::Radd).map_err(|e| e.to_string())?;
    let rounded = ((x + 0.5).floor(), (y + 0.5).floor());
    let took = start.elapsed();
    let detail = format!(
        "max relative error {:.3}%, max bit error {worst_bits:.4}, same-qubits target ({}, {})",
        100.0 * worst_rel,
        rounded.0,
        rounded.1
    );
    within_time(
        Duration::from_secs(1),
        took,
        check(
            worst_rel <= 0.01 && worst_bits <= 0.01 && rounded == (1479.0, 1109.0),
            detail,
        ),
    )
}

struct DeskFits {
    cv: Vec<(Metric, f64)>,
    equivalents: Vec<(Metric, Result<f64, String>)>,
}

fn desk_fits() -> Result<DeskFits, String> {
    let rows = generate_dataset(DESK_RANGE, 5, SEED).map_err(|e| e.to_string())?;
    let mut cv = Vec::new();
    let mut equivalents = Vec::new();
    for metric in Metric::ALL {
        let summary = cross_validate(&rows, metric, 10, SEED).map_err(|e| e.to_string())?;
        cv.push((metric, summary.relative_rmse()));
        let params = fit(&rows, metric).map_err(|e| e.to_string())?;
        let eq = if is_increasing_at(&params, &[(2048.0, 256.0), (1024.0, 1023.0)]) {
            safe_prime_equivalent_bits(&params, extrapolate(&params, 2048.0, 256.0)).map_err(|e| e.to_string())
        } else {
            Err("fit is not increasing".to_string())
        };
        equivalents.push((metric, eq));
    }
    Ok(DeskFits { cv, equivalents })
}

fn c10_cv(fits: &Result<DeskFits, String>) -> Verdict {
    let fits = fits.as_ref().map_err(Clone::clone)?;
    let worst = fits.cv.iter().map(|(_, r)| *r).fold(0.0, f64::max);
    let list: Vec<String> = fits.cv.iter().map(|(m, r)| format!("{m} {:.1}%", 100.0 * r)).collect();
    check(worst <= 0.15, format!("relative CV RMSE {}", list.join(", ")))
}

fn c11_equivalence(fits: &Result<DeskFits, String>) -> Verdict {
    let fits = fits.as_ref().map_err(Clone::clone)?;
    let mut ok = true;
    let list: Vec<String> = fits
        .equivalents
        .iter()
        .map(|(m, eq)| match eq {
            Ok(bits) => {
                ok &= (1000.0..=1100.0).contains(bits);
                format!("{m} {bits:.1}")
            }
            Err(e) => {
                ok = false;
                format!("{m} error: {e}")
            }
        })
        .collect();
    check(ok, format!("safe-prime bits matching (2048, 256): {}", list.join(", ")))
}

fn c12_timing() -> Verdict {
    let ls: Vec<usize> = (1..=50).collect();
    let ks: Vec<usize> = (1..=8).collect();
    let rows = grid(&ls, &reference_rhos(), &ks).map_err(|e| e.to_string())?;
    if let Some(r) = rows.iter().find(|r| !times_equal(r.closed_form, r.simulated)) {
        return Err(format!("{r:?}"));
    }
    let mut compared = 0;
    for l in 2..=50 {
        for rho in reference_rhos().into_iter().filter(|&r| r < 1.0) {
            let formula = min_k_hsqft(l, rho).map_err(|e| e.to_string())?;
            let simulated = min_k_by_simulation(l, rho).map_err(|e| e.to_string())?;
            let agrees = match simulated {
                Some(k) => k == formula,
                None => formula > l,
            };
            if !agrees {
                return Err(format!("L={l} rho={rho}: formula {formula}, simulation {simulated:?}"));
            }
            compared += 1;
        }
    }
    Ok(format!(
        "{} grid rows agree, minimum block size matches at {compared} points",
        rows.len()
    ))
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn c13_optimizer() -> Verdict {
    let mut worst = 0.0f64;
    for seed in 0..100u64 {
        let c = common::random_circuit(1 + (seed % 10) as usize, 80, seed);
        let before = outcome_distribution_with(&c, 10, Backend::Dense).map_err(|e| e.to_string())?;
        let after = outcome_distribution_with(&optimize(&c), 10, Backend::Dense).map_err(|e| e.to_string())?;
        worst = worst.max(max_diff(&before, &after));
    }
    let mut sizes = Vec::new();
    for (p, q, adder) in [
        (7, 3, AdderKind::Qadd),
        (11, 5, AdderKind::Qadd),
        (13, 3, AdderKind::Radd),
    ] {
        let inst = make_instance(p, q, SEED).map_err(|e| e.to_string())?;
        let lay = layout(p, q, adder);
        let nc = (lay.v1 + lay.v2) as usize;
        let steps: Vec<(u64, usize)> = wire_bases(&inst, &lay)
            .into_iter()
            .enumerate()
            .map(|(i, b)| (b, i))
            .collect();
        let f = build_mod_exp(&steps, nc, p, adder, McxMode::Decompose).map_err(|e| e.to_string())?;
        let measured: Vec<usize> = f.controls.iter().chain(&f.value).copied().collect();
        let mut c = Circuit::new(f.circuit.n_qubits, measured.len());
        for &q in &f.controls {
            c.h(q);
        }
        c.x(f.value[0]);
        c.extend(&f.circuit);
        for (bit, &q) in measured.iter().enumerate() {
            c.measure(q, bit);
        }
        let o = optimize(&c);
        let before = outcome_distribution_with(&c, qubit_cap(), Backend::Sparse).map_err(|e| e.to_string())?;
        let after = outcome_distribution_with(&o, qubit_cap(), Backend::Sparse).map_err(|e| e.to_string())?;
        worst = worst.max(max_diff(&before, &after));
        let (n0, n1) = (f.circuit.gates().count(), optimize(&f.circuit).gates().count());
        if n1 >= n0 {
            return Err(format!("({p},{q}) {adder}: optimizer kept {n1} of {n0} gates"));
        }
        sizes.push(format!("({p},{q}) {n0}->{n1}"));
    }
    check(
        worst < 1e-10,
        format!(
            "max distribution change {worst:.2e}; Mod-EXP gates {}",
            sizes.join(", ")
        ),
    )
}

type Criterion<'a> = (&'a str, Box<dyn Fn() -> Verdict + 'a>);

fn main() -> ExitCode {
    panic::set_hook(Box::new(|_| {}));
    let desk = std::cell::OnceCell::new();
    let criteria: Vec<Criterion> = vec![
        ("pair enumeration", Box::new(c1_pair_enumeration)),
        ("end-to-end soundness", Box::new(c2_soundness)),
        ("oracle equivalence", Box::new(c3_oracle)),
        ("success-probability waveform", Box::new(c4_waveform)),
        ("sampling consistency", Box::new(c5_sampling)),
        ("Mod-EXP correctness", Box::new(c6_mod_exp)),
        ("variant equivalence", Box::new(c7_variants)),
        ("MCX decompositions", Box::new(c8_mcx)),
        ("resource model constants", Box::new(c9_published_constants)),
        ("desk fit quality", Box::new(|| c10_cv(desk.get_or_init(desk_fits)))),
        (
            "desk equivalence",
            Box::new(|| c11_equivalence(desk.get_or_init(desk_fits))),
        ),
        ("timing model", Box::new(c12_timing)),
        ("optimizer safety", Box::new(c13_optimizer)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let took = start.elapsed();
        let (tag, detail) = match verdict {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} criterion {:>2} {name}: {detail} [{took:.2?}]", i + 1);
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
