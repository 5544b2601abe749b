use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;
use crate::sizes::{Extended, SizeFamily, SizeFunction};

/// Relative change per doubling below which the numeric estimate counts as
/// settled.
const STABLE_RELATIVE: f64 = 0.05;
/// Absolute change that always counts as settled (estimates near zero).
const STABLE_ABSOLUTE: f64 = 0.01;

/// Closed-form abscissa `limsup log i / w(i)` for families with `w(i) -> inf`.
pub fn abscissa_analytic(desc: &SizeFunction) -> Result<Extended> {
    match *desc.family() {
        SizeFamily::ExplicitTable(_) => Err(Error::UnsupportedFamily("explicit_table")),
        SizeFamily::Geometric { q } if q > 1.0 => Ok(Extended::Finite(0.0)),
        SizeFamily::Power { alpha } if alpha > 0.0 => Ok(Extended::Finite(0.0)),
        SizeFamily::LogPower { p } if p < 1.0 => Ok(Extended::Infinity),
        SizeFamily::LogPower { p: 1.0 } => Ok(Extended::Finite(1.0)),
        SizeFamily::LogPower { .. } => Ok(Extended::Finite(0.0)),
        SizeFamily::LogPlusTwoLogLog => Ok(Extended::Finite(1.0)),
        SizeFamily::KaramataStirling { theta } if theta > 1.0 => Ok(Extended::Finite(0.0)),
        SizeFamily::Constant { .. } => Err(Error::FamilyNotDivergent("constant")),
        SizeFamily::Geometric { .. } => Err(Error::FamilyNotDivergent("geometric with q <= 1")),
        SizeFamily::Power { .. } => Err(Error::FamilyNotDivergent("power with alpha <= 0")),
        SizeFamily::KaramataStirling { .. } => Err(Error::FamilyNotDivergent("karamata_stirling with theta <= 1")),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AbscissaEstimate {
    /// `max log i / w(i)` over the final window.
    pub estimate: f64,
    /// The estimate moved by more than 5% over one of the last two doublings.
    pub low_confidence: bool,
    /// `(m, estimate over the window ending at m)` for `m = i_max/4, i_max/2, i_max`.
    pub checkpoints: Vec<(usize, f64)>,
}

/// Windowed limsup proxy for `log i / w(i)`.
pub fn abscissa_numeric(desc: &SizeFunction, i_max: usize, window: usize) -> Result<AbscissaEstimate> {
    if window < 100 || i_max < window {
        return Err(Error::InvalidArgument(format!("need i_max >= window >= 100, got i_max={i_max}, window={window}")));
    }
    let ln_w = desc.ln_values(i_max)?;
    let ratio = |i: usize| {
        if i < 2 {
            0.0
        } else {
            ((i as f64).ln().ln() - ln_w[i - 1]).exp()
        }
    };
    let window_max = |m: usize| {
        let lo = m.saturating_sub(window).max(1);
        (lo..=m).map(ratio).fold(0.0f64, f64::max)
    };
    let checkpoints: Vec<(usize, f64)> = [i_max / 4, i_max / 2, i_max]
        .into_iter()
        .filter(|&m| m >= 1)
        .map(|m| (m, window_max(m)))
        .collect();
    let estimate = checkpoints.last().map(|c| c.1).unwrap_or(0.0);
    let settled = |a: f64, b: f64| {
        let d = (b - a).abs();
        d <= STABLE_ABSOLUTE || d <= STABLE_RELATIVE * b.abs()
    };
    let low_confidence = !estimate.is_finite() || checkpoints.windows(2).any(|w| !settled(w[0].1, w[1].1));
    Ok(AbscissaEstimate { estimate, low_confidence, checkpoints })
}

/// `sum_{i <= n} exp(-x w(i))`.
pub fn dirichlet_partial(desc: &SizeFunction, x: f64, n: usize) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::InvalidArgument(format!("x must be positive, got {x}")));
    }
    let mut acc = CompensatedSum::new();
    for w in desc.raw_values(n)? {
        acc.add((-x * w).exp());
    }
    Ok(acc.value())
}

/// Expected number of clocks `X_i, i <= n` in `(x, y]`:
/// `sum_i exp(-w(i) x) - exp(-w(i) y)`. `y` may be infinite.
pub fn mean_measure(desc: &SizeFunction, x: f64, y: f64, n_terms: usize) -> Result<f64> {
    if !(x >= 0.0 && x.is_finite() && y >= x) {
        return Err(Error::InvalidArgument(format!("need 0 <= x <= y, got x={x}, y={y}")));
    }
    if x == y {
        return Ok(0.0);
    }
    let mut acc = CompensatedSum::new();
    for w in desc.raw_values(n_terms)? {
        let below = if x == 0.0 { 1.0 } else { (-w * x).exp() };
        acc.add(below * -(-w * (y - x)).exp_m1());
    }
    Ok(acc.value())
}
