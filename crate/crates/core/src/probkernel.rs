//! Exact finite-dimensional probabilities of the size-biased order.
//!
//! Everything here is a function of a finite list of positive sizes. The basic
//! object is the chain probability
//!
//! ```text
//! p_n(x_1, ..., x_n) = prod_k x_k / (x_k + x_{k+1} + ... + x_n),
//! ```
//!
//! the probability that items with those sizes are ranked in the given order.
//! Products are accumulated as sums of logs; suffix sums are formed once per
//! query in a single backward pass.

use crate::error::{Error, Result};
use crate::lehmer::LehmerCode;
use crate::numeric::suffix_sums;
use crate::sizes::SizeFunction;

/// Agreement required between the complement form and the direct form of the
/// last insertion-rank probability before the complement is used.
const COMPLEMENT_AGREEMENT: f64 = 1e-9;

fn check_sizes(sizes: &[f64]) -> Result<()> {
    match sizes.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
        Some(&bad) => Err(Error::NonPositiveSize(bad)),
        None => Ok(()),
    }
}

fn check_nonempty(sizes: &[f64]) -> Result<()> {
    if sizes.is_empty() {
        return Err(Error::InvalidArgument("chain query must contain at least one size".into()));
    }
    check_sizes(sizes)
}

/// `log p_n(x_1, ..., x_n)`.
pub fn ln_chain_prob(sizes: &[f64]) -> Result<f64> {
    check_nonempty(sizes)?;
    let suffix = suffix_sums(sizes);
    Ok(sizes.iter().zip(&suffix).map(|(x, s)| x.ln() - s.ln()).sum())
}

/// Probability that items of the given sizes are ranked in exactly this order.
pub fn chain_prob(sizes: &[f64]) -> Result<f64> {
    ln_chain_prob(sizes).map(f64::exp)
}

/// Probability that a chain with the given sizes precedes, as a whole, a
/// disjoint block of total size `tail_total`.
pub fn head_prob(prefix_sizes: &[f64], tail_total: f64) -> Result<f64> {
    check_nonempty(prefix_sizes)?;
    check_sizes(&[tail_total])?;
    let mut sizes = Vec::with_capacity(prefix_sizes.len() + 1);
    sizes.extend_from_slice(prefix_sizes);
    sizes.push(tail_total);
    chain_prob(&sizes)
}

/// Ratio of the chain probabilities of `(.., x, y, b_1..b_m)` and
/// `(.., y, x, b_1..b_m)`, where `tail_total = b_1 + ... + b_m`.
pub fn transposition_ratio(x: f64, y: f64, tail_total: f64) -> Result<f64> {
    check_sizes(&[x, y])?;
    if !(tail_total.is_finite() && tail_total >= 0.0) {
        return Err(Error::NonPositiveSize(tail_total));
    }
    Ok((x + tail_total) / (y + tail_total))
}

/// Distribution of the rank at which a new item lands when inserted into a
/// size-biased list.
#[derive(Debug, Clone, PartialEq)]
pub struct RankPmf(Vec<f64>);

impl RankPmf {
    /// Entry `k-1` is the probability of rank `k`.
    pub fn probabilities(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Probability of rank `k` (1-based).
    pub fn prob(&self, k: usize) -> f64 {
        self.0[k - 1]
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

/// Conditional law of the relative rank of a new item of size `new_size`
/// given the ordered sizes already in the list.
///
/// Rank `k` has probability
/// `prod_{l<k} s_l / (s_l + x) * x / (s_k + x)` with `s_l = x_l + ... + x_{i-1}`.
pub fn insertion_rank_pmf(existing_sizes: &[f64], new_size: f64) -> Result<RankPmf> {
    check_sizes(existing_sizes)?;
    check_sizes(&[new_size])?;
    let x = new_size;
    let suffix = suffix_sums(existing_sizes);
    let len = existing_sizes.len() + 1;
    let mut out = Vec::with_capacity(len);
    // log of the probability of passing every gap before the current one
    let mut ln_pass = 0.0f64;
    for s in &suffix[..len - 1] {
        out.push((ln_pass + x.ln() - (s + x).ln()).exp());
        ln_pass += s.ln() - (s + x).ln();
    }
    let direct = ln_pass.exp();
    let complement = 1.0 - out.iter().sum::<f64>();
    let last = if complement >= 0.0 && (complement - direct).abs() <= COMPLEMENT_AGREEMENT {
        complement
    } else {
        direct
    };
    out.push(last);
    Ok(RankPmf(out))
}

/// Probability that index `i` is a record: `w(i) / (w(1) + ... + w(i))`.
pub fn record_prob(desc: &SizeFunction, i: usize) -> Result<f64> {
    if let (Ok(w), Ok(s)) = (desc.evaluate(i), desc.partial_sum(i)) {
        return Ok(w / s);
    }
    // out of f64 range: log-sum-exp around the largest size
    let ln = desc.ln_values(i)?;
    let top = ln.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ln_total = top + crate::numeric::compensated_sum(ln.iter().map(|l| (l - top).exp())).ln();
    Ok((ln[i - 1] - ln_total).exp())
}

/// `record_prob(desc, i)` for `i = 1..=n` in one pass, with `log S_i`
/// accumulated by log-add-exp.
pub fn record_probs(desc: &SizeFunction, n: usize) -> Result<Vec<f64>> {
    let ln = desc.ln_values(n)?;
    let mut ln_total = f64::NEG_INFINITY;
    Ok(ln
        .iter()
        .map(|&l| {
            let (hi, lo) = if l > ln_total { (l, ln_total) } else { (ln_total, l) };
            ln_total = hi + (lo - hi).exp().ln_1p();
            (l - ln_total).exp()
        })
        .collect())
}

/// Log-likelihood of a Lehmer-code prefix under the size-biased order:
/// the sum over `i` of the log insertion probability of rank `R_i`, inserting
/// item `i` into the list built from items `1..i`.
pub fn lehmer_log_likelihood(desc: &SizeFunction, code: &LehmerCode) -> Result<f64> {
    let n = code.len();
    if n == 0 {
        return Ok(0.0);
    }
    let sizes = desc.values(n)?;
    let mut list: Vec<f64> = Vec::with_capacity(n);
    let mut total = 0.0;
    for (i, &rank) in code.ranks().iter().enumerate() {
        let pmf = insertion_rank_pmf(&list, sizes[i])?;
        total += pmf.prob(rank).ln();
        list.insert(rank - 1, sizes[i]);
    }
    Ok(total)
}
