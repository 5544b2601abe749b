//! Statistics of sampled orders: records, inversions, the inversion-rate
//! constant of the geometric order, and Steele's empirical size profile.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lehmer::FiniteOrder;
use crate::numeric::CompensatedSum;
use crate::sizes::{SizeFamily, SizeFunction};

/// Grid size used by [`steele_grid`]: `t = 0, 0.01, ..., 1`.
pub const STEELE_GRID_POINTS: usize = 101;

/// Indices `i` (1-based labels) whose item precedes every item `j < i`.
pub fn count_records(order: &FiniteOrder) -> Result<Vec<usize>> {
    let pos = order.positions()?;
    let mut best = usize::MAX;
    let mut out = Vec::new();
    for (i, &p) in pos.iter().enumerate() {
        if p < best {
            best = p;
            out.push(i + 1);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InversionSummary {
    pub n: usize,
    pub d_n: u64,
    pub normalized: f64,
}

/// Pairs of labels `i < j` with `j` before `i`, by merge counting.
pub fn count_inversions(order: &FiniteOrder) -> InversionSummary {
    let mut buf = order.arrangement().to_vec();
    let mut scratch = vec![0; buf.len()];
    let d_n = merge_count(&mut buf, &mut scratch);
    let n = order.len();
    InversionSummary { n, d_n, normalized: d_n as f64 / n as f64 }
}

fn merge_count(v: &mut [usize], scratch: &mut [usize]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut count = {
        let (left, right) = v.split_at_mut(mid);
        let (sl, sr) = scratch.split_at_mut(mid);
        merge_count(left, sl) + merge_count(right, sr)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if v[i] <= v[j] {
            scratch[k] = v[i];
            i += 1;
        } else {
            scratch[k] = v[j];
            count += (mid - i) as u64;
            j += 1;
        }
        k += 1;
    }
    scratch[k..k + mid - i].copy_from_slice(&v[i..mid]);
    k += mid - i;
    scratch[k..k + n - j].copy_from_slice(&v[j..n]);
    v.copy_from_slice(&scratch[..n]);
    count
}

/// A truncated series with a bound on the omitted tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: f64,
    pub tail_bound: f64,
    pub terms: usize,
}

/// `c_q = sum_{k >= 1} 1 / (1 + q^{-k})`, truncated once the geometric tail
/// bound `q^{K+1} / (1 - q)` drops below `tol`.
pub fn c_q(q: f64, tol: f64) -> Result<SeriesValue> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidArgument(format!("q must lie in (0, 1), got {q}")));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tol must be positive, got {tol}")));
    }
    let mut acc = CompensatedSum::new();
    let mut k = 0usize;
    loop {
        let bound = q.powi(k as i32 + 1) / (1.0 - q);
        if bound < tol {
            return Ok(SeriesValue { value: acc.value(), tail_bound: bound, terms: k });
        }
        k += 1;
        acc.add(1.0 / (1.0 + q.powi(-(k as i32))));
    }
}

/// Exact `E[D_n] = sum_{k=1}^{n-1} (n - k) / (1 + q^{-k})` for geometric sizes
/// with `q < 1`.
pub fn expected_inversions(desc: &SizeFunction, n: usize) -> Result<f64> {
    let SizeFamily::Geometric { q } = *desc.family() else {
        return Err(Error::InvalidArgument(format!("expected_inversions needs geometric sizes, got {desc}")));
    };
    if q >= 1.0 {
        return Err(Error::InvalidArgument(format!("expected_inversions needs q < 1, got {q}")));
    }
    if n < 2 {
        return Err(Error::InvalidArgument("n must be >= 2".into()));
    }
    let mut acc = CompensatedSum::new();
    for k in 1..n {
        // 1 / (1 + q^-k) = q^k / (q^k + 1), finite for every k
        let qk = q.powf(k as f64);
        acc.add((n - k) as f64 * qk / (1.0 + qk));
    }
    Ok(acc.value())
}

/// `F_n(t) = sum_{i <= n t} w(i) / (w(1) + ... + w(n))`.
pub fn steele_fn(desc: &SizeFunction, n: usize, t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidArgument(format!("t must lie in [0, 1], got {t}")));
    }
    let m = ((n as f64) * t).floor() as usize;
    let profile = SteeleProfile::new(desc, n)?;
    Ok(profile.at_index(m.min(n)))
}

/// Cumulative normalized sizes `F_n` for repeated evaluation.
#[derive(Debug, Clone)]
pub struct SteeleProfile {
    cumulative: Vec<f64>,
}

impl SteeleProfile {
    pub fn new(desc: &SizeFunction, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be >= 1".into()));
        }
        let ln_w = desc.ln_values(n)?;
        // normalise by the largest size so nothing overflows
        let top = ln_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut acc = CompensatedSum::new();
        let mut cumulative = Vec::with_capacity(n + 1);
        cumulative.push(0.0);
        for l in ln_w {
            acc.add((l - top).exp());
            cumulative.push(acc.value());
        }
        let total = cumulative[n];
        for c in &mut cumulative {
            *c /= total;
        }
        cumulative[n] = 1.0;
        Ok(Self { cumulative })
    }

    pub fn n(&self) -> usize {
        self.cumulative.len() - 1
    }

    /// `F_n` evaluated at `t = m / n`.
    pub fn at_index(&self, m: usize) -> f64 {
        self.cumulative[m]
    }

    pub fn at(&self, t: f64) -> f64 {
        let n = self.n();
        let m = ((n as f64) * t.clamp(0.0, 1.0)).floor() as usize;
        self.cumulative[m.min(n)]
    }
}

/// `(t_k, F_n(t_k))` on the 101-point grid `t_k = k / 100`, with `floor(n t_k)`
/// computed in integer arithmetic.
pub fn steele_grid(desc: &SizeFunction, n: usize) -> Result<Vec<(f64, f64)>> {
    let profile = SteeleProfile::new(desc, n)?;
    let last = STEELE_GRID_POINTS - 1;
    Ok((0..=last).map(|k| (k as f64 / last as f64, profile.at_index(n * k / last))).collect())
}

/// `sup_k |F_n(t_k) - t_k^theta|` over the grid.
pub fn steele_sup_deviation(grid: &[(f64, f64)], theta: f64) -> f64 {
    grid.iter().map(|&(t, f)| (f - t.powf(theta)).abs()).fold(0.0, f64::max)
}
