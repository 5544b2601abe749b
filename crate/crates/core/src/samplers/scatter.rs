use rand::Rng;
use serde::{Deserialize, Serialize};

use super::standard_exponential;
use crate::lehmer::FiniteOrder;
use crate::numeric::CompensatedSum;

/// Lowest atom `(t, x)` of a unit-rate Poisson process in strip `i`, the strip
/// being `[S_{i-1}, S_i) x [0, inf)` with `S_i` the size partial sums.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatterPoint {
    pub strip: usize,
    pub t: f64,
    pub x: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoissonScatterSample {
    pub points: Vec<ScatterPoint>,
    /// `S_0 = 0, S_1, ..., S_n`.
    pub boundaries: Vec<f64>,
}

impl PoissonScatterSample {
    /// Strip labels sorted by the heights of their lowest atoms.
    pub fn order(&self) -> FiniteOrder {
        let mut pts: Vec<&ScatterPoint> = self.points.iter().collect();
        pts.sort_by(|a, b| a.x.total_cmp(&b.x));
        FiniteOrder::from_vec_unchecked(pts.into_iter().map(|p| p.strip).collect())
    }

    /// Strip of the overall lowest atom.
    pub fn lowest(&self) -> usize {
        self.points
            .iter()
            .min_by(|a, b| a.x.total_cmp(&b.x))
            .map(|p| p.strip)
            .expect("scatter samples are nonempty")
    }
}

/// The lowest atom in a strip of width `w` has an exponential height of rate
/// `w` and an abscissa uniform across the strip, independently.
pub(super) fn sample<R: Rng + ?Sized>(sizes: &[f64], rng: &mut R) -> PoissonScatterSample {
    let mut boundaries = Vec::with_capacity(sizes.len() + 1);
    boundaries.push(0.0);
    let mut acc = CompensatedSum::new();
    for &w in sizes {
        acc.add(w);
        boundaries.push(acc.value());
    }
    let points = sizes
        .iter()
        .enumerate()
        .map(|(k, &w)| {
            let x = standard_exponential(rng) / w;
            let (lo, hi) = (boundaries[k], boundaries[k + 1]);
            let mut t = lo + rng.random::<f64>() * (hi - lo);
            if t >= hi {
                t = lo.max(hi.next_down());
            }
            ScatterPoint { strip: k + 1, t, x }
        })
        .collect();
    PoissonScatterSample { points, boundaries }
}
