//! The size-biased top-to-random shuffle (time reversal of the Tsetlin library).
//!
//! One step takes the front item and reinserts it into the rest of the list by
//! one size-biased insertion cycle. Its stationary law is the size-biased
//! permutation of the list's items.

use std::collections::HashMap;

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use rand::Rng;

use super::insertion::insertion_gap;
use crate::error::{Error, Result};
use crate::lehmer::FiniteOrder;
use crate::probkernel::insertion_rank_pmf;
use crate::sizes::SizeFunction;

/// Largest label set for which the full transition matrix is assembled.
pub const MAX_TSETLIN_LABELS: usize = 8;

/// States up to this count get an exact linear solve for the stationary law.
const DENSE_SOLVE_LIMIT: usize = 720;

fn label_sizes(labels: &[usize], desc: &SizeFunction) -> Result<Vec<f64>> {
    labels.iter().map(|&l| desc.evaluate(l)).collect()
}

/// One transition of the chain.
pub fn tsetlin_step<R: Rng + ?Sized>(state: &FiniteOrder, desc: &SizeFunction, rng: &mut R) -> Result<FiniteOrder> {
    let sizes = label_sizes(state.arrangement(), desc)?;
    let front = state.arrangement()[0];
    let rest_sizes = &sizes[1..];
    let gap = insertion_gap(rest_sizes, sizes[0], rng);
    let mut next: Vec<usize> = state.arrangement()[1..].to_vec();
    next.insert(gap, front);
    Ok(FiniteOrder::from_vec_unchecked(next))
}

/// Exact transition matrix over all arrangements of a label set, stored as
/// sparse rows (each state has at most `n` successors).
#[derive(Debug, Clone)]
pub struct TsetlinMatrix {
    states: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    rows: Vec<Vec<(usize, f64)>>,
}

/// Assemble the transition matrix from the insertion-rank probabilities.
pub fn transition_matrix_tsetlin(labels: &[usize], desc: &SizeFunction) -> Result<TsetlinMatrix> {
    if labels.len() > MAX_TSETLIN_LABELS {
        return Err(Error::TooLargeStateSpace { labels: labels.len(), max: MAX_TSETLIN_LABELS });
    }
    FiniteOrder::new(labels.to_vec())?;
    let sizes: HashMap<usize, f64> = labels.iter().map(|&l| desc.evaluate(l).map(|w| (l, w))).collect::<Result<_>>()?;
    let states: Vec<Vec<usize>> = labels.iter().copied().permutations(labels.len()).collect();
    let index: HashMap<Vec<usize>, usize> = states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let mut rows = Vec::with_capacity(states.len());
    for state in &states {
        let front = state[0];
        let rest = &state[1..];
        let rest_sizes: Vec<f64> = rest.iter().map(|l| sizes[l]).collect();
        let pmf = insertion_rank_pmf(&rest_sizes, sizes[&front])?;
        let row = pmf
            .probabilities()
            .iter()
            .enumerate()
            .map(|(gap, &p)| {
                let mut next = rest.to_vec();
                next.insert(gap, front);
                (index[&next], p)
            })
            .collect();
        rows.push(row);
    }
    Ok(TsetlinMatrix { states, index, rows })
}

impl TsetlinMatrix {
    pub fn states(&self) -> &[Vec<usize>] {
        &self.states
    }

    pub fn state_index(&self, arrangement: &[usize]) -> Option<usize> {
        self.index.get(arrangement).copied()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Nonzero entries `(to, probability)` of row `from`.
    pub fn row(&self, from: usize) -> &[(usize, f64)] {
        &self.rows[from]
    }

    pub fn entry(&self, from: usize, to: usize) -> f64 {
        self.rows[from].iter().filter(|(j, _)| *j == to).map(|(_, p)| p).sum()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.iter().map(|(_, p)| p).sum()).collect()
    }

    pub fn dense(&self) -> DMatrix<f64> {
        let n = self.len();
        let mut m = DMatrix::zeros(n, n);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, p) in row {
                m[(i, j)] += p;
            }
        }
        m
    }

    /// `pi P` for a row vector `pi`.
    pub fn apply_left(&self, pi: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.len()];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, p) in row {
                out[j] += pi[i] * p;
            }
        }
        out
    }

    /// Stationary distribution. Exact linear solve of `pi (P - I) = 0`,
    /// `sum pi = 1` for up to 720 states, power iteration beyond.
    pub fn stationary(&self) -> Result<Vec<f64>> {
        let n = self.len();
        if n <= DENSE_SOLVE_LIMIT {
            // transpose system: (P^T - I) pi = 0 with the last equation replaced
            // by the normalisation
            let mut a = self.dense().transpose() - DMatrix::identity(n, n);
            for j in 0..n {
                a[(n - 1, j)] = 1.0;
            }
            let mut b = DVector::zeros(n);
            b[n - 1] = 1.0;
            let pi = a
                .lu()
                .solve(&b)
                .ok_or_else(|| Error::InvalidArgument("transition matrix is singular".into()))?;
            return Ok(pi.iter().copied().collect());
        }
        let mut pi = vec![1.0 / n as f64; n];
        for _ in 0..100_000 {
            let next = self.apply_left(&pi);
            let diff = next.iter().zip(&pi).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            pi = next;
            if diff < 1e-15 {
                break;
            }
        }
        Ok(pi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplers::rng_from_seed;

    #[test]
    fn single_element_is_fixed() {
        let d = SizeFunction::constant(2.0).unwrap();
        let s = FiniteOrder::new(vec![1]).unwrap();
        let mut rng = rng_from_seed(1);
        assert_eq!(tsetlin_step(&s, &d, &mut rng).unwrap(), s);
        let m = transition_matrix_tsetlin(&[1], &d).unwrap();
        assert_eq!(m.entry(0, 0), 1.0);
    }

    #[test]
    fn two_equal_sizes() {
        let d = SizeFunction::constant(1.0).unwrap();
        let m = transition_matrix_tsetlin(&[1, 2], &d).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(m.entry(i, j), 0.5);
            }
        }
    }

    #[test]
    fn rows_are_stochastic() {
        let d = SizeFunction::table(vec![0.4, 1.0, 2.5, 3.0, 7.0]).unwrap();
        let m = transition_matrix_tsetlin(&[1, 2, 3, 4, 5], &d).unwrap();
        assert_eq!(m.len(), 120);
        for s in m.row_sums() {
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn too_many_labels() {
        let d = SizeFunction::constant(1.0).unwrap();
        let labels: Vec<usize> = (1..=9).collect();
        assert!(matches!(
            transition_matrix_tsetlin(&labels, &d),
            Err(Error::TooLargeStateSpace { labels: 9, max: 8 })
        ));
    }

    #[test]
    fn empirical_step_matches_row() {
        let d = SizeFunction::table(vec![1.0, 2.0, 3.0]).unwrap();
        let m = transition_matrix_tsetlin(&[1, 2, 3], &d).unwrap();
        let start = FiniteOrder::new(vec![2, 3, 1]).unwrap();
        let from = m.state_index(start.arrangement()).unwrap();
        let mut rng = rng_from_seed(77);
        let n = 60_000;
        let mut counts = vec![0usize; m.len()];
        for _ in 0..n {
            let next = tsetlin_step(&start, &d, &mut rng).unwrap();
            counts[m.state_index(next.arrangement()).unwrap()] += 1;
        }
        for (j, &c) in counts.iter().enumerate() {
            let p = m.entry(from, j);
            let sd = (p * (1.0 - p) / n as f64).sqrt();
            assert!((c as f64 / n as f64 - p).abs() <= 4.0 * sd + 1e-12, "state {j}");
        }
    }
}
