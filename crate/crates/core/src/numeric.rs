//! Small numeric helpers shared by the summation-heavy modules.

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    /// An infinite or NaN running sum is returned as is.
    pub fn value(&self) -> f64 {
        if self.sum.is_finite() {
            self.sum + self.compensation
        } else {
            self.sum
        }
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for v in iter {
            self.add(v);
        }
    }
}

/// Compensated sum of an iterator.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    let mut acc = CompensatedSum::new();
    acc.extend(iter);
    acc.value()
}

/// Suffix sums `s[k] = x[k] + ... + x[n-1]`, with a trailing zero (`s[n] = 0`).
pub fn suffix_sums(x: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; x.len() + 1];
    let mut acc = CompensatedSum::new();
    for k in (0..x.len()).rev() {
        acc.add(x[k]);
        out[k] = acc.value();
    }
    out
}
