use rand::Rng;

use super::standard_exponential;
use crate::lehmer::FiniteOrder;

/// `log X_i = log E_i - log w(i)` with `E_i` standard exponential. Working with
/// logs keeps the clocks finite when `w(i)` is far outside the `f64` range.
pub(super) fn log_clocks<R: Rng + ?Sized>(ln_sizes: &[f64], rng: &mut R) -> Vec<f64> {
    ln_sizes.iter().map(|lw| standard_exponential(rng).ln() - lw).collect()
}

pub(super) fn sample<R: Rng + ?Sized>(ln_sizes: &[f64], rng: &mut R) -> FiniteOrder {
    let mut keys = log_clocks(ln_sizes, rng);
    let labels = sort_resampling_ties(&mut keys, |i| standard_exponential(rng).ln() - ln_sizes[i]);
    FiniteOrder::from_vec_unchecked(labels.into_iter().map(|i| i + 1).collect())
}

/// Indices sorted by key. Both members of any tied adjacent pair are redrawn
/// and the sort repeated until all keys are distinct.
fn sort_resampling_ties(keys: &mut [f64], mut redraw: impl FnMut(usize) -> f64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..keys.len()).collect();
    loop {
        idx.sort_by(|&a, &b| keys[a].total_cmp(&keys[b]));
        let mut tied: Vec<usize> = idx
            .windows(2)
            .filter(|w| keys[w[0]] == keys[w[1]])
            .flat_map(|w| [w[0], w[1]])
            .collect();
        if tied.is_empty() {
            return idx;
        }
        tied.sort_unstable();
        tied.dedup();
        for i in tied {
            keys[i] = redraw(i);
        }
    }
}
