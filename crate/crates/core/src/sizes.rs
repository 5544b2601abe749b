//! Size functions `w(i) > 0` on the positive integers and their analytic metadata.
//!
//! A [`SizeFunction`] is one of a fixed set of parametric families or an explicit
//! table. Values are served three ways:
//!
//! * [`SizeFunction::evaluate`] for a single index, validated positive and finite;
//! * [`SizeFunction::ln_evaluate`], which never overflows for the parametric
//!   families and is what the samplers sort on;
//! * [`SizeFunction::values`] / [`SizeFunction::ln_values`] for a whole prefix in
//!   one pass (the Karamata-Stirling family is a product recurrence, so bulk
//!   evaluation is linear where repeated single evaluation is quadratic).
//!
//! [`SizeFunction::analytic_metadata`] reports the limit behaviour of the sequence
//! that the order-type classifier needs. It is a hard-coded table per family and
//! parameter region; no limit is ever computed at runtime.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

/// Above this magnitude the Karamata-Stirling recurrence switches to log-space.
const KS_LINEAR_LIMIT: f64 = 1e300;

/// Default prefix length handed to samplers when none is given.
pub const DEFAULT_TRUNCATION: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub enum SizeFamily {
    /// `w(i) = values[i-1]`.
    ExplicitTable(Vec<f64>),
    /// `w(i) = c`.
    Constant { c: f64 },
    /// `w(i) = q^i`.
    Geometric { q: f64 },
    /// `w(i) = i^alpha`.
    Power { alpha: f64 },
    /// `w(i) = (log(i+1))^p`.
    LogPower { p: f64 },
    /// `w(i) = log(i+1) + 2 log log(i+1)` for `i >= 2`, `w(1) = log 2`.
    LogPlusTwoLogLog,
    /// `w(i) = (theta)_{i-1} / (i-1)!` (rising factorial over factorial).
    KaramataStirling { theta: f64 },
}

impl SizeFamily {
    pub fn name(&self) -> &'static str {
        match self {
            SizeFamily::ExplicitTable(_) => "explicit_table",
            SizeFamily::Constant { .. } => "constant",
            SizeFamily::Geometric { .. } => "geometric",
            SizeFamily::Power { .. } => "power",
            SizeFamily::LogPower { .. } => "log_power",
            SizeFamily::LogPlusTwoLogLog => "log_plus_two_log_log",
            SizeFamily::KaramataStirling { .. } => "karamata_stirling",
        }
    }
}

/// An immutable, validated size function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DescriptorJson", into = "DescriptorJson")]
pub struct SizeFunction {
    family: SizeFamily,
    truncation_default: usize,
}

fn positive_finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::InvalidDescriptor(format!("{name} must be positive and finite, got {v}")))
    }
}

impl SizeFunction {
    pub fn new(family: SizeFamily) -> Result<Self> {
        match &family {
            SizeFamily::ExplicitTable(values) => {
                if values.is_empty() {
                    return Err(Error::InvalidDescriptor("table is empty".into()));
                }
                for (k, &v) in values.iter().enumerate() {
                    if !(v.is_finite() && v > 0.0) {
                        return Err(Error::InvalidDescriptor(format!(
                            "table entry {} is {v}; entries must be positive and finite",
                            k + 1
                        )));
                    }
                }
            }
            SizeFamily::Constant { c } => {
                positive_finite("c", *c)?;
            }
            SizeFamily::Geometric { q } => {
                positive_finite("q", *q)?;
            }
            SizeFamily::Power { alpha } => {
                if !alpha.is_finite() {
                    return Err(Error::InvalidDescriptor(format!("alpha must be finite, got {alpha}")));
                }
            }
            SizeFamily::LogPower { p } => {
                positive_finite("p", *p)?;
            }
            SizeFamily::LogPlusTwoLogLog => {}
            SizeFamily::KaramataStirling { theta } => {
                positive_finite("theta", *theta)?;
            }
        }
        let truncation_default = match &family {
            SizeFamily::ExplicitTable(values) => values.len(),
            _ => DEFAULT_TRUNCATION,
        };
        Ok(Self { family, truncation_default })
    }

    pub fn table(values: Vec<f64>) -> Result<Self> {
        Self::new(SizeFamily::ExplicitTable(values))
    }

    pub fn constant(c: f64) -> Result<Self> {
        Self::new(SizeFamily::Constant { c })
    }

    pub fn geometric(q: f64) -> Result<Self> {
        Self::new(SizeFamily::Geometric { q })
    }

    pub fn power(alpha: f64) -> Result<Self> {
        Self::new(SizeFamily::Power { alpha })
    }

    pub fn log_power(p: f64) -> Result<Self> {
        Self::new(SizeFamily::LogPower { p })
    }

    pub fn log_plus_two_log_log() -> Self {
        Self { family: SizeFamily::LogPlusTwoLogLog, truncation_default: DEFAULT_TRUNCATION }
    }

    pub fn karamata_stirling(theta: f64) -> Result<Self> {
        Self::new(SizeFamily::KaramataStirling { theta })
    }

    pub fn with_truncation_default(mut self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDescriptor("truncation_default must be >= 1".into()));
        }
        if let Some(len) = self.table_len() {
            if n > len {
                return Err(Error::InvalidDescriptor(format!(
                    "truncation_default {n} exceeds table length {len}"
                )));
            }
        }
        self.truncation_default = n;
        Ok(self)
    }

    pub fn family(&self) -> &SizeFamily {
        &self.family
    }

    pub fn truncation_default(&self) -> usize {
        self.truncation_default
    }

    /// Number of defined indices, `None` for the infinite parametric families.
    pub fn table_len(&self) -> Option<usize> {
        match &self.family {
            SizeFamily::ExplicitTable(v) => Some(v.len()),
            _ => None,
        }
    }

    pub fn is_table(&self) -> bool {
        matches!(self.family, SizeFamily::ExplicitTable(_))
    }

    fn check_index(&self, i: usize) -> Result<()> {
        let len = self.table_len().unwrap_or(usize::MAX);
        if i == 0 || i > len {
            return Err(Error::IndexOutOfRange { index: i, len });
        }
        Ok(())
    }

    /// `w(i)` without the positivity/finiteness check; may be `0` or `inf` for
    /// extreme indices of the geometric and power families.
    fn raw(&self, i: usize) -> f64 {
        let x = i as f64;
        match &self.family {
            SizeFamily::ExplicitTable(v) => v[i - 1],
            SizeFamily::Constant { c } => *c,
            SizeFamily::Geometric { q } => q.powf(x),
            SizeFamily::Power { alpha } => x.powf(*alpha),
            SizeFamily::LogPower { p } => (x + 1.0).ln().powf(*p),
            SizeFamily::LogPlusTwoLogLog => log_plus_two_log_log(i),
            SizeFamily::KaramataStirling { theta } => {
                let mut w = 1.0f64;
                for j in 1..i {
                    w *= (theta + j as f64 - 1.0) / j as f64;
                    if w > KS_LINEAR_LIMIT {
                        return self.ln_raw(i).exp();
                    }
                }
                w
            }
        }
    }

    fn ln_raw(&self, i: usize) -> f64 {
        let x = i as f64;
        match &self.family {
            SizeFamily::ExplicitTable(v) => v[i - 1].ln(),
            SizeFamily::Constant { c } => c.ln(),
            SizeFamily::Geometric { q } => x * q.ln(),
            SizeFamily::Power { alpha } => alpha * x.ln(),
            SizeFamily::LogPower { p } => p * (x + 1.0).ln().ln(),
            SizeFamily::LogPlusTwoLogLog => log_plus_two_log_log(i).ln(),
            SizeFamily::KaramataStirling { theta } => {
                (1..i).map(|j| ((theta - 1.0) / j as f64).ln_1p()).sum()
            }
        }
    }

    /// `w(i)`, checked to be a positive finite `f64`.
    pub fn evaluate(&self, i: usize) -> Result<f64> {
        self.check_index(i)?;
        let w = self.raw(i);
        if w.is_finite() && w > 0.0 {
            Ok(w)
        } else {
            Err(Error::Unrepresentable { index: i })
        }
    }

    /// `log w(i)`. Finite for every valid index of every family.
    pub fn ln_evaluate(&self, i: usize) -> Result<f64> {
        self.check_index(i)?;
        Ok(self.ln_raw(i))
    }

    /// `w(1), ..., w(n)` with every entry checked positive and finite.
    pub fn values(&self, n: usize) -> Result<Vec<f64>> {
        let raw = self.raw_values(n)?;
        if let Some(k) = raw.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::Unrepresentable { index: k + 1 });
        }
        Ok(raw)
    }

    /// `w(1), ..., w(n)`, possibly containing `0` or `inf` where the true value
    /// falls outside the `f64` range.
    pub(crate) fn raw_values(&self, n: usize) -> Result<Vec<f64>> {
        if n == 0 {
            return Ok(Vec::new());
        }
        self.check_index(n)?;
        match &self.family {
            SizeFamily::KaramataStirling { theta } => {
                let ln = self.ln_values(n)?;
                let mut out = Vec::with_capacity(n);
                let mut w = 1.0f64;
                let mut linear = true;
                for i in 1..=n {
                    if linear && i > 1 {
                        w *= (theta + i as f64 - 2.0) / (i - 1) as f64;
                        linear = (f64::MIN_POSITIVE..=KS_LINEAR_LIMIT).contains(&w);
                    }
                    out.push(if linear { w } else { ln[i - 1].exp() });
                }
                Ok(out)
            }
            _ => Ok((1..=n).map(|i| self.raw(i)).collect()),
        }
    }

    /// `log w(1), ..., log w(n)` in one pass.
    pub fn ln_values(&self, n: usize) -> Result<Vec<f64>> {
        if n == 0 {
            return Ok(Vec::new());
        }
        self.check_index(n)?;
        match &self.family {
            SizeFamily::KaramataStirling { theta } => {
                let mut out = Vec::with_capacity(n);
                let mut acc = CompensatedSum::new();
                out.push(0.0);
                for j in 1..n {
                    acc.add(((theta - 1.0) / j as f64).ln_1p());
                    out.push(acc.value());
                }
                Ok(out)
            }
            _ => Ok((1..=n).map(|i| self.ln_raw(i)).collect()),
        }
    }

    /// `S_n = w(1) + ... + w(n)` by compensated summation.
    pub fn partial_sum(&self, n: usize) -> Result<f64> {
        if n == 0 {
            return Err(Error::IndexOutOfRange { index: 0, len: self.table_len().unwrap_or(usize::MAX) });
        }
        let raw = self.raw_values(n)?;
        let mut acc = CompensatedSum::new();
        for (k, w) in raw.iter().enumerate() {
            if !w.is_finite() {
                return Err(Error::Unrepresentable { index: k + 1 });
            }
            acc.add(*w);
        }
        let s = acc.value();
        if s.is_finite() && s > 0.0 {
            Ok(s)
        } else {
            Err(Error::Unrepresentable { index: n })
        }
    }

    /// Closed-form limit metadata for the parametric families.
    ///
    /// | family | region | accumulation | small part | total | beta | at beta |
    /// |---|---|---|---|---|---|---|
    /// | constant | any c | interior | c <= 1: no, else yes | no | inf | n/a |
    /// | geometric | q < 1 | zero | yes | yes | 0 | n/a |
    /// | geometric | q = 1 | interior | no | no | inf | n/a |
    /// | geometric | q > 1 | infinity | yes | no | 0 | diverges |
    /// | power | alpha < -1 | zero | yes | yes | 0 | n/a |
    /// | power | -1 <= alpha < 0 | zero | no | no | inf | n/a |
    /// | power | alpha = 0 | interior | no | no | inf | n/a |
    /// | power | alpha > 0 | infinity | yes | no | 0 | diverges |
    /// | log power | p < 1 | infinity | yes | no | inf | n/a |
    /// | log power | p = 1 | infinity | yes | no | 1 | diverges (harmonic) |
    /// | log power | p > 1 | infinity | yes | no | 0 | diverges |
    /// | log + 2 log log | | infinity | yes | no | 1 | converges |
    /// | Karamata-Stirling | theta < 1 | zero | no | no | inf | n/a |
    /// | Karamata-Stirling | theta = 1 | interior | no | no | inf | n/a |
    /// | Karamata-Stirling | theta > 1 | infinity | yes | no | 0 | diverges |
    ///
    /// A finite (possibly empty) set of indices with `w(i) <= 1` counts as a
    /// summable small part. Summable sequences report `beta = 0`: the mean
    /// measure of every bounded interval is finite.
    pub fn analytic_metadata(&self) -> Result<SizeMetadata> {
        use Tristate::*;
        let zero = AccumulationSet::ZERO;
        let inf = AccumulationSet::INFINITY;
        let interior = AccumulationSet::INTERIOR;
        let summable = || SizeMetadata::complete(zero, Yes, Yes, Extended::Finite(0.0), NotApplicable);
        let dense_small = || SizeMetadata::complete(zero, No, No, Extended::Infinity, NotApplicable);
        let constant = |c: f64| {
            SizeMetadata::complete(interior, if c <= 1.0 { No } else { Yes }, No, Extended::Infinity, NotApplicable)
        };
        let growing = |beta: Extended, at_beta: Tristate| SizeMetadata::complete(inf, Yes, No, beta, at_beta);

        let meta = match self.family {
            SizeFamily::ExplicitTable(_) => return Err(Error::UnsupportedFamily("explicit_table")),
            SizeFamily::Constant { c } => constant(c),
            SizeFamily::Geometric { q } => {
                if q < 1.0 {
                    summable()
                } else if q == 1.0 {
                    constant(1.0)
                } else {
                    growing(Extended::Finite(0.0), No)
                }
            }
            SizeFamily::Power { alpha } => {
                if alpha < -1.0 {
                    summable()
                } else if alpha < 0.0 {
                    dense_small()
                } else if alpha == 0.0 {
                    constant(1.0)
                } else {
                    growing(Extended::Finite(0.0), No)
                }
            }
            SizeFamily::LogPower { p } => {
                if p < 1.0 {
                    growing(Extended::Infinity, NotApplicable)
                } else if p == 1.0 {
                    growing(Extended::Finite(1.0), No)
                } else {
                    growing(Extended::Finite(0.0), No)
                }
            }
            SizeFamily::LogPlusTwoLogLog => growing(Extended::Finite(1.0), Yes),
            SizeFamily::KaramataStirling { theta } => {
                if theta < 1.0 {
                    dense_small()
                } else if theta == 1.0 {
                    constant(1.0)
                } else {
                    growing(Extended::Finite(0.0), No)
                }
            }
        };
        Ok(meta)
    }
}

fn log_plus_two_log_log(i: usize) -> f64 {
    if i == 1 {
        std::f64::consts::LN_2
    } else {
        let l = (i as f64 + 1.0).ln();
        l + 2.0 * l.ln()
    }
}

impl fmt::Display for SizeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            SizeFamily::ExplicitTable(v) => write!(f, "explicit_table(len={})", v.len()),
            SizeFamily::Constant { c } => write!(f, "constant(c={c})"),
            SizeFamily::Geometric { q } => write!(f, "geometric(q={q})"),
            SizeFamily::Power { alpha } => write!(f, "power(alpha={alpha})"),
            SizeFamily::LogPower { p } => write!(f, "log_power(p={p})"),
            SizeFamily::LogPlusTwoLogLog => write!(f, "log_plus_two_log_log"),
            SizeFamily::KaramataStirling { theta } => write!(f, "karamata_stirling(theta={theta})"),
        }
    }
}

// ---------------------------------------------------------------------------
// Metadata
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tristate {
    Yes,
    No,
    NotApplicable,
}

/// A nonnegative extended real.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extended {
    Finite(f64),
    Infinity,
}

impl Extended {
    pub fn is_zero(&self) -> bool {
        matches!(self, Extended::Finite(v) if *v == 0.0)
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            Extended::Finite(v) => *v,
            Extended::Infinity => f64::INFINITY,
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => write!(f, "{v}"),
            Extended::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for Extended {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Extended::Finite(v) => s.serialize_f64(*v),
            Extended::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Extended {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) if v >= 0.0 => Ok(Extended::Finite(v)),
            Raw::Num(v) => Err(serde::de::Error::custom(format!("negative abscissa {v}"))),
            Raw::Str(s) if s == "inf" => Ok(Extended::Infinity),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("expected number or \"inf\", got {s:?}"))),
        }
    }
}

/// Which of `0`, `inf`, and points of `(0, inf)` are accumulation points of
/// the multiset of sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct AccumulationSet {
    pub zero: bool,
    pub infinity: bool,
    pub interior: bool,
}

impl AccumulationSet {
    pub const ZERO: Self = Self { zero: true, infinity: false, interior: false };
    pub const INFINITY: Self = Self { zero: false, infinity: true, interior: false };
    pub const INTERIOR: Self = Self { zero: false, infinity: false, interior: true };
    pub const ZERO_AND_INFINITY: Self = Self { zero: true, infinity: true, interior: false };

    pub fn is_empty(&self) -> bool {
        !(self.zero || self.infinity || self.interior)
    }
}

/// Limit behaviour of a size sequence. `None` fields are unknown.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SizeMetadata {
    pub accumulation_points: Option<AccumulationSet>,
    /// Convergence of the sum over `{i : w(i) <= 1}`.
    pub small_part_summable: Option<Tristate>,
    pub total_summable: Option<Tristate>,
    /// Convergence abscissa of `sum exp(-x w(i))` over the part tending to
    /// infinity (the whole sequence when `w(i) -> inf`).
    pub beta: Option<Extended>,
    pub converges_at_beta: Option<Tristate>,
    /// Set when the fields were estimated from a finite table.
    #[serde(default)]
    pub heuristic: bool,
}

impl SizeMetadata {
    pub fn complete(
        accumulation_points: AccumulationSet,
        small_part_summable: Tristate,
        total_summable: Tristate,
        beta: Extended,
        converges_at_beta: Tristate,
    ) -> Self {
        Self {
            accumulation_points: Some(accumulation_points),
            small_part_summable: Some(small_part_summable),
            total_summable: Some(total_summable),
            beta: Some(beta),
            converges_at_beta: Some(converges_at_beta),
            heuristic: false,
        }
    }

    pub fn unknown() -> Self {
        Self {
            accumulation_points: None,
            small_part_summable: None,
            total_summable: None,
            beta: None,
            converges_at_beta: None,
            heuristic: false,
        }
    }
}

// ---------------------------------------------------------------------------
// JSON descriptor
// ---------------------------------------------------------------------------

/// Wire form: `{"family": "...", "params": {...}, "table": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct DescriptorJson {
    family: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    table: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    truncation_default: Option<usize>,
}

impl From<SizeFunction> for DescriptorJson {
    fn from(desc: SizeFunction) -> Self {
        let mut params = BTreeMap::new();
        let mut table = None;
        let family = desc.family.name().to_string();
        match desc.family {
            SizeFamily::ExplicitTable(v) => table = Some(v),
            SizeFamily::Constant { c } => {
                params.insert("c".into(), c);
            }
            SizeFamily::Geometric { q } => {
                params.insert("q".into(), q);
            }
            SizeFamily::Power { alpha } => {
                params.insert("alpha".into(), alpha);
            }
            SizeFamily::LogPower { p } => {
                params.insert("p".into(), p);
            }
            SizeFamily::LogPlusTwoLogLog => {}
            SizeFamily::KaramataStirling { theta } => {
                params.insert("theta".into(), theta);
            }
        }
        DescriptorJson { family, params, table, truncation_default: Some(desc.truncation_default) }
    }
}

impl TryFrom<DescriptorJson> for SizeFunction {
    type Error = Error;

    fn try_from(json: DescriptorJson) -> Result<Self> {
        SizeFunction::from_parts(&json.family, &json.params, json.table, json.truncation_default)
    }
}

impl SizeFunction {
    /// Build a descriptor from a family name and parameter map.
    pub fn from_parts(
        family: &str,
        params: &BTreeMap<String, f64>,
        table: Option<Vec<f64>>,
        truncation_default: Option<usize>,
    ) -> Result<Self> {
        let allowed: &[&str] = match family {
            "explicit_table" => &[],
            "constant" => &["c"],
            "geometric" => &["q"],
            "power" => &["alpha"],
            "log_power" => &["p"],
            "log_plus_two_log_log" => &[],
            "karamata_stirling" => &["theta"],
            other => return Err(Error::InvalidDescriptor(format!("unknown family {other:?}"))),
        };
        if let Some(extra) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(Error::InvalidDescriptor(format!("unexpected parameter {extra:?} for {family}")));
        }
        let get = |key: &str| {
            params
                .get(key)
                .copied()
                .ok_or_else(|| Error::InvalidDescriptor(format!("{family} requires parameter {key:?}")))
        };
        if family != "explicit_table" && table.is_some() {
            return Err(Error::InvalidDescriptor(format!("{family} does not take a table")));
        }
        let desc = match family {
            "explicit_table" => SizeFunction::table(
                table.ok_or_else(|| Error::InvalidDescriptor("explicit_table requires \"table\"".into()))?,
            )?,
            "constant" => SizeFunction::constant(get("c")?)?,
            "geometric" => SizeFunction::geometric(get("q")?)?,
            "power" => SizeFunction::power(get("alpha")?)?,
            "log_power" => SizeFunction::log_power(get("p")?)?,
            "log_plus_two_log_log" => SizeFunction::log_plus_two_log_log(),
            _ => SizeFunction::karamata_stirling(get("theta")?)?,
        };
        match truncation_default {
            Some(n) => desc.with_truncation_default(n),
            None => Ok(desc),
        }
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("descriptor serialization is infallible")
    }
}
