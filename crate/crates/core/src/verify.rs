//! Randomized check of the exact algebraic identities satisfied by the chain
//! probabilities. Each identity is evaluated on random positive size tuples and
//! reports its largest absolute residual.

use itertools::Itertools;
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::probkernel::{chain_prob, head_prob, insertion_rank_pmf, transposition_ratio};
use crate::samplers::{replicate_seed, rng_from_seed};

/// Absolute tolerance applied to every residual.
pub const IDENTITY_TOLERANCE: f64 = 1e-10;

/// Every identity the suite must cover.
pub const REQUIRED_IDENTITIES: &[&str] = &[
    "symmetrization",
    "cycle_reversion",
    "transposition",
    "recursion",
    "head_block",
    "consistency",
    "shuffle",
    "monotonicity",
    "tsetlin_reversal",
    "insertion_quotient",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub trials: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

type Check = fn(&mut dyn RngCore) -> f64;

fn registry() -> Vec<(&'static str, Check)> {
    vec![
        ("symmetrization", symmetrization),
        ("cycle_reversion", cycle_reversion),
        ("transposition", transposition),
        ("recursion", recursion),
        ("head_block", head_block),
        ("consistency", consistency),
        ("shuffle", shuffle),
        ("monotonicity", monotonicity),
        ("tsetlin_reversal", tsetlin_reversal),
        ("insertion_quotient", insertion_quotient),
    ]
}

/// Run every identity on `trials` random tuples. Identity `k` draws from its
/// own stream derived from `seed`, so adding identities does not perturb the
/// others.
pub fn run_identity_suite(seed: u64, trials: usize) -> Vec<IdentityCheck> {
    registry()
        .into_iter()
        .enumerate()
        .map(|(k, (name, check))| {
            let mut rng = rng_from_seed(replicate_seed(seed, k as u64));
            let max_residual = (0..trials).map(|_| check(&mut rng)).fold(0.0, f64::max);
            IdentityCheck {
                name: name.to_string(),
                trials,
                max_residual,
                tolerance: IDENTITY_TOLERANCE,
                passed: max_residual < IDENTITY_TOLERANCE && max_residual.is_finite(),
            }
        })
        .collect()
}

/// Log-uniform sizes on `[e^-3, e^3]`.
fn sizes(rng: &mut dyn RngCore, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.random_range(-3.0f64..3.0).exp()).collect()
}

fn p(x: &[f64]) -> f64 {
    chain_prob(x).expect("random sizes are valid")
}

fn symmetrization(rng: &mut dyn RngCore) -> f64 {
    let n = rng.random_range(1..=7);
    let x = sizes(rng, n);
    let total: f64 = x.iter().copied().permutations(n).map(|perm| p(&perm)).sum();
    (total - 1.0).abs()
}

/// Around a closed cycle `x_1 -> x_2 -> ... -> x_n -> x_1` the product of
/// pairwise probabilities equals the product around the reversed cycle.
fn cycle_reversion(rng: &mut dyn RngCore) -> f64 {
    let n = rng.random_range(2..=7);
    let x = sizes(rng, n);
    let forward: f64 = (0..n).map(|k| p(&[x[k], x[(k + 1) % n]])).product();
    let backward: f64 = (0..n).map(|k| p(&[x[(k + 1) % n], x[k]])).product();
    (forward - backward).abs()
}

fn transposition(rng: &mut dyn RngCore) -> f64 {
    let (n, m) = (rng.random_range(0..=3), rng.random_range(0..=3));
    let a = sizes(rng, n);
    let xy = sizes(rng, 2);
    let b = sizes(rng, m);
    let build = |u: f64, v: f64| [a.as_slice(), &[u, v], b.as_slice()].concat();
    let quotient = p(&build(xy[0], xy[1])) / p(&build(xy[1], xy[0]));
    let expected = transposition_ratio(xy[0], xy[1], b.iter().sum()).expect("valid sizes");
    (quotient - expected).abs()
}

fn recursion(rng: &mut dyn RngCore) -> f64 {
    let n = rng.random_range(1..=4);
    let m = rng.random_range(1..=7 - n);
    let x = sizes(rng, n);
    let y = sizes(rng, m);
    let lhs = p(&[x.as_slice(), y.as_slice()].concat());
    let mut head = x.clone();
    head.push(y.iter().sum());
    (lhs - p(&head) * p(&y)).abs()
}

/// Probability that a chain precedes a whole block equals the sum over the
/// block's internal orders.
fn head_block(rng: &mut dyn RngCore) -> f64 {
    let n = rng.random_range(1..=3);
    let m = rng.random_range(1..=4);
    let x = sizes(rng, n);
    let block = sizes(rng, m);
    let direct = head_prob(&x, block.iter().sum()).expect("valid sizes");
    let summed: f64 = block.iter().copied().permutations(m).map(|perm| p(&[x.as_slice(), &perm].concat())).sum();
    (direct - summed).abs()
}

/// Marginalising a new item out of an (n+1)-chain recovers the n-chain; the
/// three-item case is `p_2(x,y) = p_3(x,y,z) + p_3(x,z,y) + p_3(z,x,y)`.
fn consistency(rng: &mut dyn RngCore) -> f64 {
    let v = sizes(rng, 3);
    let (x, y, z) = (v[0], v[1], v[2]);
    let three = (p(&[x, y]) - (p(&[x, y, z]) + p(&[x, z, y]) + p(&[z, x, y]))).abs();
    let n = rng.random_range(1..=6);
    let chain = sizes(rng, n);
    let extra = sizes(rng, 1)[0];
    let marginal: f64 = (0..=n)
        .map(|k| {
            let mut c = chain.clone();
            c.insert(k, extra);
            p(&c)
        })
        .sum();
    three.max((marginal - p(&chain)).abs())
}

fn shuffle(rng: &mut dyn RngCore) -> f64 {
    let n = rng.random_range(1..=5);
    let m = rng.random_range(1..=5);
    let x = sizes(rng, n);
    let y = sizes(rng, m);
    let total: f64 = (0..n + m)
        .combinations(n)
        .map(|slots| {
            let (mut xi, mut yi) = (0, 0);
            let z: Vec<f64> = (0..n + m)
                .map(|pos| {
                    if slots.contains(&pos) {
                        xi += 1;
                        x[xi - 1]
                    } else {
                        yi += 1;
                        y[yi - 1]
                    }
                })
                .collect();
            p(&z)
        })
        .sum();
    (total - p(&x) * p(&y)).abs()
}

/// The decreasing arrangement is the most likely and the increasing one the
/// least likely; the residual is how far any arrangement beats either bound.
fn monotonicity(rng: &mut dyn RngCore) -> f64 {
    let n = rng.random_range(2..=6);
    let x = sizes(rng, n);
    let mut dec = x.clone();
    dec.sort_by(|a, b| b.total_cmp(a));
    let mut inc = x.clone();
    inc.sort_by(|a, b| a.total_cmp(b));
    let (p_dec, p_inc) = (p(&dec), p(&inc));
    let (lo, hi) = x
        .iter()
        .copied()
        .permutations(n)
        .map(|perm| p(&perm))
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
    (hi - p_dec).max(0.0) + (p_inc - lo).max(0.0)
}

/// Stationary flow reversal between move-to-front and size-biased insertion:
/// `p(ins_k) / p(y, x) * p_2(y, x_1 + ... + x_n) = p(ins_k) / p(x)`.
fn tsetlin_reversal(rng: &mut dyn RngCore) -> f64 {
    let n = rng.random_range(1..=6);
    let x = sizes(rng, n);
    let y = sizes(rng, 1)[0];
    let k = rng.random_range(0..=n);
    let mut ins = x.clone();
    ins.insert(k, y);
    let mut front = vec![y];
    front.extend_from_slice(&x);
    let lhs = p(&ins) / p(&front) * p(&[y, x.iter().sum()]);
    let rhs = p(&ins) / p(&x);
    (lhs - rhs).abs()
}

fn insertion_quotient(rng: &mut dyn RngCore) -> f64 {
    let n = rng.random_range(0..=6);
    let x = sizes(rng, n);
    let new = sizes(rng, 1)[0];
    let pmf = insertion_rank_pmf(&x, new).expect("valid sizes");
    let base = if n == 0 { 1.0 } else { p(&x) };
    (0..=n)
        .map(|k| {
            let mut ins = x.clone();
            ins.insert(k, new);
            (pmf.probabilities()[k] - p(&ins) / base).abs()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_covers_required_identities() {
        let names: Vec<&str> = registry().iter().map(|(n, _)| *n).collect();
        for required in REQUIRED_IDENTITIES {
            assert!(names.contains(required), "missing identity {required}");
        }
        assert_eq!(names.len(), REQUIRED_IDENTITIES.len());
    }

    #[test]
    fn suite_passes() {
        for check in run_identity_suite(42, 200) {
            assert!(check.passed, "{} residual {}", check.name, check.max_residual);
        }
    }

    #[test]
    fn literal_printed_reversal_form_fails() {
        // with p_2(y, y + x_1 + ... + x_n) the identity does not hold
        let x = [1.0, 2.0];
        let y = 3.0;
        let ins = [1.0, 3.0, 2.0];
        let lhs = p(&ins) / p(&[y, 1.0, 2.0]) * p(&[y, y + 3.0]);
        let rhs = p(&ins) / p(&x);
        assert!((lhs - rhs).abs() > 0.01);
    }
}
