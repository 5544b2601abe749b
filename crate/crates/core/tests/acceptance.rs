//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits non-zero
//! if any criterion fails. Every tolerance is pinned below.

use std::collections::HashMap;
use std::process::ExitCode;

use itertools::Itertools;
use rand::Rng;
use sbo_core::classifier::{abscissa_analytic, abscissa_numeric, classify_descriptor};
use sbo_core::probkernel::chain_prob;
use sbo_core::samplers::{replicate_seed, rng_from_seed, transition_matrix_tsetlin, SizeProfile};
use sbo_core::stats::{c_q, count_inversions, count_records, expected_inversions, steele_grid, steele_sup_deviation};
use sbo_core::verify::run_identity_suite;
use sbo_core::{Extended, FiniteOrder, OrderType, SizeFunction};
use statrs::distribution::{ChiSquared, ContinuousCDF};

const SEED: u64 = 20_260_101;

const IDENTITY_TRIALS: usize = 1000;

const EQUIV_DRAWS: usize = 200_000;
const EQUIV_SIGNIFICANCE: f64 = 0.001;

const RECORD_THETA: f64 = 2.0;
const RECORD_N: usize = 20;
const RECORD_DRAWS: usize = 100_000;
const RECORD_SIGMAS: f64 = 3.0;

const TSETLIN_TOL: f64 = 1e-12;

const INV_Q: f64 = 0.5;
const INV_N: usize = 20_000;
const INV_SEEDS: u64 = 10;
const INV_REL_TOL: f64 = 0.05;
const INV_MC_N: usize = 100;
const INV_MC_DRAWS: usize = 10_000;
const INV_MC_SIGMAS: f64 = 3.0;

const ABSCISSA_I_MAX: usize = 1_000_000;
const ABSCISSA_WINDOW: usize = 1000;
const ABSCISSA_TOL: f64 = 0.1;

const STEELE_N: usize = 100_000;
const STEELE_TOL: f64 = 0.01;

const ORACLE_ARRANGEMENTS: usize = 500;
const ORACLE_MAX_N: usize = 200;

struct Outcome {
    passed: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome);
type Draw = fn(&SizeProfile, &mut sbo_core::SboRng) -> FiniteOrder;

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 exact identities", exact_identities),
        ("2 sampler equivalence", sampler_equivalence),
        ("3 record law", record_law),
        ("4 tsetlin stationarity", tsetlin_stationarity),
        ("5 inversion asymptotics", inversion_asymptotics),
        ("6 classification table", classification_table),
        ("7 abscissa", abscissa),
        ("8 steele limit", steele_limit),
        ("9 inversion oracle", inversion_oracle),
    ];
    let mut failures = 0;
    for (name, run) in criteria {
        let o = run();
        if !o.passed {
            failures += 1;
        }
        println!("{} criterion {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn exact_identities() -> Outcome {
    let checks = run_identity_suite(SEED, IDENTITY_TRIALS);
    let worst = checks.iter().map(|c| c.max_residual).fold(0.0, f64::max);
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    outcome(
        failed.is_empty(),
        format!("{} identities x {IDENTITY_TRIALS} tuples, max residual {worst:.2e}, failed {failed:?}", checks.len()),
    )
}

fn sampler_equivalence() -> Outcome {
    let sizes = vec![1.0, 2.0, 3.0, 4.0];
    let profile = SizeProfile::from_sizes(sizes.clone()).unwrap();
    let cells: Vec<Vec<usize>> = (1..=4).permutations(4).collect();
    let expected: Vec<f64> = cells
        .iter()
        .map(|perm| chain_prob(&perm.iter().map(|&l| sizes[l - 1]).collect::<Vec<_>>()).unwrap() * EQUIV_DRAWS as f64)
        .collect();
    let critical = ChiSquared::new((cells.len() - 1) as f64).unwrap().inverse_cdf(1.0 - EQUIV_SIGNIFICANCE);

    let samplers: [(&str, Draw); 3] = [
        ("exponential", |p, r| p.exponential(r)),
        ("picks", |p, r| p.by_picks(r).unwrap()),
        ("insertion", |p, r| p.by_insertion(r).unwrap().0),
    ];
    let mut all = true;
    let mut parts = Vec::new();
    for (k, (name, draw)) in samplers.iter().enumerate() {
        let mut rng = rng_from_seed(replicate_seed(SEED, k as u64));
        let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
        for _ in 0..EQUIV_DRAWS {
            *counts.entry(draw(&profile, &mut rng).into_vec()).or_default() += 1;
        }
        let stat: f64 = cells
            .iter()
            .zip(&expected)
            .map(|(c, e)| {
                let o = *counts.get(c).unwrap_or(&0) as f64;
                (o - e).powi(2) / e
            })
            .sum();
        all &= stat < critical;
        parts.push(format!("{name} {stat:.2}"));
    }
    outcome(all, format!("chi2 (df=23, critical {critical:.2}): {}", parts.join(", ")))
}

fn record_law() -> Outcome {
    let desc = SizeFunction::karamata_stirling(RECORD_THETA).unwrap();
    let profile = SizeProfile::new(&desc, RECORD_N).unwrap();
    let mut rng = rng_from_seed(SEED);
    let mut indicators = vec![vec![false; RECORD_N]; RECORD_DRAWS];
    for row in &mut indicators {
        for i in count_records(&profile.exponential(&mut rng)).unwrap() {
            row[i - 1] = true;
        }
    }
    let n = RECORD_DRAWS as f64;
    let freq: Vec<f64> = (0..RECORD_N).map(|i| indicators.iter().filter(|r| r[i]).count() as f64 / n).collect();
    let mut worst_z = 0.0f64;
    for (i, &f) in freq.iter().enumerate() {
        let p = RECORD_THETA / (RECORD_THETA + i as f64);
        let sigma = (p * (1.0 - p) / n).sqrt();
        let z = if sigma == 0.0 { if f == p { 0.0 } else { f64::INFINITY } } else { (f - p).abs() / sigma };
        worst_z = worst_z.max(z);
    }
    // item 1 is always a record, so its indicator has no correlation
    let corr_bound = RECORD_SIGMAS / n.sqrt();
    let mut worst_rho = 0.0f64;
    let mut violations = 0;
    let mut pairs = 0;
    for (a, b) in (1..RECORD_N).tuple_combinations() {
        pairs += 1;
        let both = indicators.iter().filter(|r| r[a] && r[b]).count() as f64 / n;
        let cov = both - freq[a] * freq[b];
        let rho = cov / (freq[a] * (1.0 - freq[a]) * freq[b] * (1.0 - freq[b])).sqrt();
        worst_rho = worst_rho.max(rho.abs());
        if rho.abs() > corr_bound {
            violations += 1;
        }
    }
    outcome(
        worst_z <= RECORD_SIGMAS && violations == 0,
        format!(
            "max |z| {worst_z:.2} (<= {RECORD_SIGMAS}), max |rho| {worst_rho:.5} (<= {corr_bound:.5}), {violations} of {pairs} pairs over"
        ),
    )
}

fn tsetlin_stationarity() -> Outcome {
    let desc = SizeFunction::table(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
    let matrix = transition_matrix_tsetlin(&[1, 2, 3, 4], &desc).unwrap();
    let pi = matrix.stationary().unwrap();
    let exact: Vec<f64> = matrix
        .states()
        .iter()
        .map(|s| chain_prob(&s.iter().map(|&l| l as f64).collect::<Vec<_>>()).unwrap())
        .collect();
    let total: f64 = exact.iter().sum();
    let err = pi.iter().zip(&exact).map(|(a, b)| (a - b / total).abs()).fold(0.0, f64::max);
    outcome(matrix.len() == 24 && err <= TSETLIN_TOL, format!("{} states, max |pi - p| {err:.2e} (<= {TSETLIN_TOL:e})", matrix.len()))
}

fn inversion_asymptotics() -> Outcome {
    let desc = SizeFunction::geometric(INV_Q).unwrap();
    let c = c_q(INV_Q, 1e-15).unwrap().value;
    // independent oracle: 200 direct terms leave a tail below 2^-200
    let oracle: f64 = (1..=200).map(|k| 1.0 / (1.0 + INV_Q.powi(-k))).sum();
    let oracle_ok = (c - oracle).abs() < 1e-12;

    let profile = SizeProfile::new(&desc, INV_N).unwrap();
    let ratios: Vec<f64> = (0..INV_SEEDS)
        .map(|s| {
            let order = profile.exponential(&mut rng_from_seed(replicate_seed(SEED, s)));
            count_inversions(&order).normalized
        })
        .collect();
    let worst_rel = ratios.iter().map(|r| (r - c).abs() / c).fold(0.0, f64::max);

    let exact = expected_inversions(&desc, INV_MC_N).unwrap();
    let small = SizeProfile::new(&desc, INV_MC_N).unwrap();
    let mut rng = rng_from_seed(SEED ^ 0x5eed);
    let draws: Vec<f64> = (0..INV_MC_DRAWS).map(|_| count_inversions(&small.exponential(&mut rng)).d_n as f64).collect();
    let mean = draws.iter().sum::<f64>() / INV_MC_DRAWS as f64;
    let var = draws.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (INV_MC_DRAWS - 1) as f64;
    let se = (var / INV_MC_DRAWS as f64).sqrt();
    let z = (mean - exact).abs() / se;

    outcome(
        oracle_ok && worst_rel <= INV_REL_TOL && z <= INV_MC_SIGMAS,
        format!(
            "c_q {c:.6} (oracle {oracle:.6}), worst |D_n/n - c_q|/c_q {worst_rel:.4} (<= {INV_REL_TOL}), E[D_100] {exact:.4} vs MC {mean:.4}, |z| {z:.2} (<= {INV_MC_SIGMAS})"
        ),
    )
}

fn classification_table() -> Outcome {
    let rows: Vec<(&str, SizeFunction, OrderType)> = vec![
        ("geometric q=0.5", SizeFunction::geometric(0.5).unwrap(), OrderType::ZPos),
        ("geometric q=2", SizeFunction::geometric(2.0).unwrap(), OrderType::ZNeg),
        ("constant c=1", SizeFunction::constant(1.0).unwrap(), OrderType::Q),
        ("constant c=3", SizeFunction::constant(3.0).unwrap(), OrderType::Q),
        ("log_power p=0.5", SizeFunction::log_power(0.5).unwrap(), OrderType::Q),
        ("log_power p=2", SizeFunction::log_power(2.0).unwrap(), OrderType::ZNeg),
        ("log i", SizeFunction::log_power(1.0).unwrap(), OrderType::QThenZNeg),
        ("log + 2 log log", SizeFunction::log_plus_two_log_log(), OrderType::QThenFinite),
        ("karamata_stirling theta=0.5", SizeFunction::karamata_stirling(0.5).unwrap(), OrderType::Q),
        ("karamata_stirling theta=1", SizeFunction::karamata_stirling(1.0).unwrap(), OrderType::Q),
        ("karamata_stirling theta=2", SizeFunction::karamata_stirling(2.0).unwrap(), OrderType::Q),
        ("karamata_stirling theta=3", SizeFunction::karamata_stirling(3.0).unwrap(), OrderType::Q),
        ("power alpha=-2", SizeFunction::power(-2.0).unwrap(), OrderType::ZPos),
    ];
    let mut mismatches = Vec::new();
    for (name, desc, want) in &rows {
        let got = classify_descriptor(desc).unwrap().order_type;
        if got != *want {
            mismatches.push(format!("{name}: got {got}, expected {want}"));
        }
    }
    let detail = if mismatches.is_empty() {
        format!("{} rows match", rows.len())
    } else {
        format!("{} of {} rows match; {}", rows.len() - mismatches.len(), rows.len(), mismatches.join("; "))
    };
    outcome(mismatches.is_empty(), detail)
}

fn abscissa() -> Outcome {
    let log = SizeFunction::log_power(1.0).unwrap();
    let analytic_ok = abscissa_analytic(&log).unwrap() == Extended::Finite(1.0);
    let families = [
        ("log i", log, 1.0),
        ("log^2 i", SizeFunction::log_power(2.0).unwrap(), 0.0),
        ("geometric q=2", SizeFunction::geometric(2.0).unwrap(), 0.0),
        ("geometric q=1.5", SizeFunction::geometric(1.5).unwrap(), 0.0),
    ];
    let mut all = analytic_ok;
    let mut parts = Vec::new();
    for (name, desc, beta) in &families {
        let est = abscissa_numeric(desc, ABSCISSA_I_MAX, ABSCISSA_WINDOW).unwrap().estimate;
        all &= (est - beta).abs() <= ABSCISSA_TOL;
        parts.push(format!("{name} {est:.4} (beta {beta})"));
    }
    outcome(all, format!("analytic beta(log i) = 1: {analytic_ok}; numeric at i_max=1e6: {}", parts.join(", ")))
}

fn steele_limit() -> Outcome {
    let desc = SizeFunction::power(1.0).unwrap();
    let dev = steele_sup_deviation(&steele_grid(&desc, STEELE_N).unwrap(), 2.0);
    outcome(dev < STEELE_TOL, format!("sup |F_n(t) - t^2| {dev:.2e} (< {STEELE_TOL})"))
}

fn inversion_oracle() -> Outcome {
    let mut rng = rng_from_seed(SEED);
    let mut mismatches = 0;
    for _ in 0..ORACLE_ARRANGEMENTS {
        let n = rng.random_range(1..=ORACLE_MAX_N);
        let mut arr: Vec<usize> = (1..=n).collect();
        for i in (1..n).rev() {
            arr.swap(i, rng.random_range(0..=i));
        }
        let mut brute = 0u64;
        for a in 0..n {
            for b in a + 1..n {
                brute += u64::from(arr[a] > arr[b]);
            }
        }
        if count_inversions(&FiniteOrder::new(arr).unwrap()).d_n != brute {
            mismatches += 1;
        }
    }
    outcome(mismatches == 0, format!("{ORACLE_ARRANGEMENTS} arrangements, {mismatches} mismatches"))
}
