//! Heuristic metadata for explicit tables.
//!
//! A finite table says nothing certain about limits, so every field here is a
//! guess read off the shape of the tail, and the result carries
//! `heuristic = true`. The rules, with `n` the table length:
//!
//! * a part (sizes `<= 1`, or sizes `> 1`) is treated as infinite when at
//!   least `max(2, n/16)` of its entries lie in the second half of the table;
//! * an infinite small part accumulates at `0` when every entry in the last
//!   quarter is below every entry in the first half; an infinite large part
//!   accumulates at `inf` when every late entry exceeds every early one; a part
//!   that fails its trend test is taken to accumulate in `(0, inf)`;
//! * the small part is summable when its second half contributes less than 1%
//!   of its total;
//! * `beta` is the windowed maximum of `log i / w(i)` over the large part in
//!   the second half; it is read as `0` below 0.1 and as infinite above 10 or
//!   when it grew by more than 5% against the third quarter;
//! * the Dirichlet series at the estimated `beta` is read as divergent when its
//!   last doubling adds more than 0.2 (a harmonic tail adds `ln 2`).

use crate::error::{Error, Result};
use crate::numeric::compensated_sum;
use crate::sizes::{AccumulationSet, Extended, SizeMetadata, Tristate};

const MIN_TABLE: usize = 16;
const SMALL_TAIL_SHARE: f64 = 0.01;
const BETA_ZERO: f64 = 0.1;
const BETA_INFINITE: f64 = 10.0;
const BETA_GROWTH: f64 = 0.05;
const DIVERGENT_INCREMENT: f64 = 0.2;

pub fn estimate_table_metadata(values: &[f64]) -> Result<SizeMetadata> {
    let n = values.len();
    if n < MIN_TABLE {
        return Err(Error::InvalidArgument(format!("table of length {n} is too short to estimate limits (min {MIN_TABLE})")));
    }
    if let Some(&bad) = values.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
        return Err(Error::NonPositiveSize(bad));
    }
    let indexed: Vec<(usize, f64)> = values.iter().copied().enumerate().map(|(k, w)| (k + 1, w)).collect();
    let small: Vec<(usize, f64)> = indexed.iter().copied().filter(|&(_, w)| w <= 1.0).collect();
    let large: Vec<(usize, f64)> = indexed.iter().copied().filter(|&(_, w)| w > 1.0).collect();

    let half = n / 2;
    let last_quarter = n - n / 4;
    let min_tail = (n / 16).max(2);
    let is_infinite = |part: &[(usize, f64)]| part.iter().filter(|(i, _)| *i > half).count() >= min_tail;
    let early = |part: &[(usize, f64)]| part.iter().filter(|(i, _)| *i <= half).map(|p| p.1).collect::<Vec<_>>();
    let late = |part: &[(usize, f64)]| part.iter().filter(|(i, _)| *i > last_quarter).map(|p| p.1).collect::<Vec<_>>();

    let mut acc = AccumulationSet::default();
    let small_infinite = is_infinite(&small);
    let large_infinite = is_infinite(&large);
    if small_infinite {
        let (e, l) = (early(&small), late(&small));
        let min_early = e.iter().copied().fold(f64::INFINITY, f64::min);
        let max_late = l.iter().copied().fold(0.0, f64::max);
        if !l.is_empty() && max_late < min_early {
            acc.zero = true;
        } else {
            acc.interior = true;
        }
    }
    if large_infinite {
        let (e, l) = (early(&large), late(&large));
        let max_early = e.iter().copied().fold(1.0, f64::max);
        let min_late = l.iter().copied().fold(f64::INFINITY, f64::min);
        if !l.is_empty() && min_late > max_early {
            acc.infinity = true;
        } else {
            acc.interior = true;
        }
    }
    if acc.is_empty() {
        // neither part reaches the tail in force: call it bounded and dense
        acc.interior = true;
    }

    let small_summable = if !small_infinite {
        Tristate::Yes
    } else {
        let total = compensated_sum(small.iter().map(|p| p.1));
        let tail = compensated_sum(small.iter().filter(|(i, _)| *i > half).map(|p| p.1));
        if tail < SMALL_TAIL_SHARE * total {
            Tristate::Yes
        } else {
            Tristate::No
        }
    };
    let total_summable = if large_infinite || acc.interior || small_summable == Tristate::No {
        Tristate::No
    } else {
        Tristate::Yes
    };

    let (beta, at_beta) = if total_summable == Tristate::Yes {
        (Extended::Finite(0.0), Tristate::NotApplicable)
    } else if !acc.infinity {
        (Extended::Infinity, Tristate::NotApplicable)
    } else {
        estimate_beta(&large, half, last_quarter)
    };

    Ok(SizeMetadata {
        accumulation_points: Some(acc),
        small_part_summable: Some(small_summable),
        total_summable: Some(total_summable),
        beta: Some(beta),
        converges_at_beta: Some(at_beta),
        heuristic: true,
    })
}

fn estimate_beta(large: &[(usize, f64)], half: usize, last_quarter: usize) -> (Extended, Tristate) {
    let ratio = |&(i, w): &(usize, f64)| (i as f64).ln() / w;
    let third_quarter = large.iter().filter(|(i, _)| *i > half && *i <= last_quarter).map(ratio).fold(0.0, f64::max);
    let estimate = large.iter().filter(|(i, _)| *i > half).map(ratio).fold(0.0, f64::max);
    let final_quarter = large.iter().filter(|(i, _)| *i > last_quarter).map(ratio).fold(0.0, f64::max);
    if estimate < BETA_ZERO {
        return (Extended::Finite(0.0), Tristate::No);
    }
    if estimate > BETA_INFINITE || final_quarter > (1.0 + BETA_GROWTH) * third_quarter {
        return (Extended::Infinity, Tristate::NotApplicable);
    }
    let partial = |upto: usize| compensated_sum(large.iter().filter(|(i, _)| *i <= upto).map(|&(_, w)| (-estimate * w).exp()));
    let n = large.last().map(|p| p.0).unwrap_or(0);
    let increment = partial(n) - partial(n / 2);
    let at_beta = if increment > DIVERGENT_INCREMENT { Tristate::No } else { Tristate::Yes };
    (Extended::Finite(estimate), at_beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::{classify, classify_descriptor, OrderType};
    use crate::sizes::SizeFunction;

    fn table_type(values: Vec<f64>) -> OrderType {
        let m = estimate_table_metadata(&values).unwrap();
        assert!(m.heuristic);
        classify(&m).unwrap().0
    }

    #[test]
    fn recognises_clear_cases() {
        assert_eq!(table_type((1..=200).map(|i| 0.5f64.powi(i)).collect()), OrderType::ZPos);
        assert_eq!(table_type(vec![1.0; 1000]), OrderType::Q);
        assert_eq!(table_type(vec![3.0; 1000]), OrderType::Q);
        assert_eq!(table_type((1..=1000).map(|i| (i as f64).powi(2)).collect()), OrderType::ZNeg);
        assert_eq!(table_type((1..=100_000).map(|i| (i as f64 + 1.0).ln()).collect()), OrderType::QThenZNeg);
        assert_eq!(table_type((1..=10_000).map(|i| (i as f64).powf(-0.5)).collect()), OrderType::Q);
    }

    #[test]
    fn combined_table() {
        // tiny geometric sizes at odd indices, linear growth at even ones
        let v: Vec<f64> = (1..=2000).map(|i| if i % 2 == 1 { 0.5f64.powi(i.min(1000)) } else { i as f64 }).collect();
        let m = estimate_table_metadata(&v).unwrap();
        assert_eq!(m.accumulation_points, Some(AccumulationSet::ZERO_AND_INFINITY));
        assert_eq!(classify(&m).unwrap().0, OrderType::Z);
    }

    #[test]
    fn report_is_flagged() {
        let d = SizeFunction::table((1..=200).map(|i| 0.5f64.powi(i)).collect()).unwrap();
        assert!(classify_descriptor(&d).unwrap().heuristic);
    }

    #[test]
    fn short_tables_rejected() {
        assert!(estimate_table_metadata(&[1.0; 5]).is_err());
    }
}
