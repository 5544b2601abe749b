use rand::Rng;

use crate::lehmer::FiniteOrder;
use crate::numeric::suffix_sums;

/// Size-biased picks run as pointer cycles.
///
/// Each cycle starts at the front of the source list. At an item of size `x`
/// with total size `t` strictly to its right the pointer moves on with
/// probability `t / (t + x)`; otherwise the item goes to the rear of the
/// target. The last item has `t = 0` and is always taken.
pub(super) fn sample<R: Rng + ?Sized>(sizes: &[f64], rng: &mut R) -> FiniteOrder {
    let mut source: Vec<(usize, f64)> = sizes.iter().enumerate().map(|(i, &w)| (i + 1, w)).collect();
    let mut target = Vec::with_capacity(sizes.len());
    while !source.is_empty() {
        let weights: Vec<f64> = source.iter().map(|&(_, w)| w).collect();
        let tails = suffix_sums(&weights);
        let mut k = 0;
        while k + 1 < source.len() {
            let x = source[k].1;
            let t = tails[k + 1];
            if rng.random::<f64>() >= t / (t + x) {
                break;
            }
            k += 1;
        }
        target.push(source.remove(k).0);
    }
    FiniteOrder::from_vec_unchecked(target)
}
