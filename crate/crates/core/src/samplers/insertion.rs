use rand::Rng;

use crate::lehmer::{FiniteOrder, LehmerCode};
use crate::numeric::suffix_sums;

/// Size-biased insertion.
///
/// Item `i` of size `x` starts at the leftmost gap of the target list. With
/// `t` the total size to the right of the pointer, the pointer advances with
/// probability `t / (t + x)`; otherwise the item is inserted in that gap. The
/// realized gap (1-based) is the relative rank `R_i`.
pub(super) fn sample<R: Rng + ?Sized>(sizes: &[f64], rng: &mut R) -> (FiniteOrder, LehmerCode) {
    let mut labels: Vec<usize> = Vec::with_capacity(sizes.len());
    let mut list_sizes: Vec<f64> = Vec::with_capacity(sizes.len());
    let mut ranks = Vec::with_capacity(sizes.len());
    for (i, &x) in sizes.iter().enumerate() {
        let gap = insertion_gap(&list_sizes, x, rng);
        labels.insert(gap, i + 1);
        list_sizes.insert(gap, x);
        ranks.push(gap + 1);
    }
    let code = LehmerCode::new(ranks).expect("insertion gaps are valid relative ranks");
    (FiniteOrder::from_vec_unchecked(labels), code)
}

/// One insertion cycle; returns the 0-based gap.
pub(crate) fn insertion_gap<R: Rng + ?Sized>(list_sizes: &[f64], x: f64, rng: &mut R) -> usize {
    let right = suffix_sums(list_sizes);
    let mut gap = 0;
    while gap < list_sizes.len() {
        let t = right[gap];
        if rng.random::<f64>() >= t / (t + x) {
            break;
        }
        gap += 1;
    }
    gap
}
