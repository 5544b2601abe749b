//! Order-type classification of the size-biased order.
//!
//! The realization by exponential clocks turns the order type into a question
//! about the random point set `{X_i}` on the half-line: where it is dense,
//! where it accumulates, and whether it has finitely many points above a
//! level. Those facts are driven by the accumulation points of the sizes, the
//! summability of the small sizes, and the convergence abscissa `beta` of the
//! Dirichlet series `sum_i exp(-x w(i))` over the sizes tending to infinity.
//!
//! [`classify`] is the complete decision table on [`SizeMetadata`];
//! [`abt_embeddable`] checks the three conditions under which the order embeds
//! in the integers.

mod abscissa;
mod table;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sizes::{AccumulationSet, Extended, SizeFunction, SizeMetadata, Tristate};

pub use abscissa::{abscissa_analytic, abscissa_numeric, dirichlet_partial, mean_measure, AbscissaEstimate};
pub use table::estimate_table_metadata;

/// Order type of the size-biased order on the positive integers.
///
/// `QThen*` types stack a dense part below a discrete part: `QThenZNeg` is
/// `Q` followed by a copy of the negative integers, and so on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrderType {
    ZPos,
    ZNeg,
    Z,
    Q,
    /// `Q` followed by a finite order of random cardinality; the only type
    /// that is not pure.
    QThenFinite,
    QThenZNeg,
    QThenZPos,
    QThenZ,
}

impl OrderType {
    pub fn tag(&self) -> &'static str {
        match self {
            OrderType::ZPos => "ZPos",
            OrderType::ZNeg => "ZNeg",
            OrderType::Z => "Z",
            OrderType::Q => "Q",
            OrderType::QThenFinite => "QThenFinite",
            OrderType::QThenZNeg => "QThenZNeg",
            OrderType::QThenZPos => "QThenZPos",
            OrderType::QThenZ => "QThenZ",
        }
    }

    pub fn is_pure(&self) -> bool {
        *self != OrderType::QThenFinite
    }

    /// Whether the type is a suborder of the integers.
    pub fn embeds_in_z(&self) -> bool {
        matches!(self, OrderType::ZPos | OrderType::ZNeg | OrderType::Z)
    }
}

impl fmt::Display for OrderType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Which branch of the decision table fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FiredCase {
    /// `sum w(i) < inf`.
    Summable,
    /// Some size value in `(0, inf)` is an accumulation point.
    InteriorAccumulation,
    /// `w(i) -> 0` with `sum w(i) = inf`.
    VanishingNonsummable,
    DivergentBetaZero,
    DivergentBetaInfinite,
    DivergentBetaFiniteConvergent,
    DivergentBetaFiniteDivergent,
    CombinedBetaFiniteConvergent,
    CombinedBetaFiniteDivergent,
    CombinedBetaZero,
    CombinedBetaInfinite,
    /// Accumulation at both `0` and `inf` with a nonsummable small part. The
    /// mean measure of every interval diverges through the small sizes, so the
    /// point set is dense.
    CombinedSmallNonsummable,
}

impl FiredCase {
    pub fn order_type(&self) -> OrderType {
        use FiredCase::*;
        match self {
            Summable => OrderType::ZPos,
            InteriorAccumulation | VanishingNonsummable | DivergentBetaInfinite => OrderType::Q,
            DivergentBetaZero => OrderType::ZNeg,
            DivergentBetaFiniteConvergent => OrderType::QThenFinite,
            DivergentBetaFiniteDivergent => OrderType::QThenZNeg,
            CombinedBetaFiniteConvergent => OrderType::QThenZPos,
            CombinedBetaFiniteDivergent => OrderType::QThenZ,
            CombinedBetaZero => OrderType::Z,
            CombinedBetaInfinite | CombinedSmallNonsummable => OrderType::Q,
        }
    }

    pub fn name(&self) -> String {
        serde_json::to_value(self).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
    }

    /// Branches that extend the enumerated case analysis.
    pub fn is_extension(&self) -> bool {
        *self == FiredCase::CombinedSmallNonsummable
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationEvidence {
    pub fired_case: FiredCase,
    pub beta_value: Extended,
    pub dirichlet_converges_at_beta: Tristate,
    pub small_part_summable: Tristate,
    pub accumulation_points: AccumulationSet,
}

fn require<T: Copy>(v: Option<T>, what: &'static str) -> Result<T> {
    v.ok_or(Error::IncompleteMetadata(what))
}

/// Apply the decision table to complete metadata.
pub fn classify(meta: &SizeMetadata) -> Result<(OrderType, ClassificationEvidence)> {
    use FiredCase::*;
    let acc = require(meta.accumulation_points, "accumulation_points")?;
    let total = require(meta.total_summable, "total_summable")?;
    let small = require(meta.small_part_summable, "small_part_summable")?;
    let beta = require(meta.beta, "beta")?;
    let at_beta = require(meta.converges_at_beta, "converges_at_beta")?;
    if acc.is_empty() {
        return Err(Error::IncompleteMetadata("an infinite size sequence has an accumulation point"));
    }

    let finite_beta_case = |conv: FiredCase, div: FiredCase| match at_beta {
        Tristate::Yes => Ok(conv),
        Tristate::No => Ok(div),
        Tristate::NotApplicable => Err(Error::IncompleteMetadata("converges_at_beta is required when 0 < beta < inf")),
    };

    let case = if total == Tristate::Yes {
        Summable
    } else if acc.interior {
        InteriorAccumulation
    } else if acc.zero && !acc.infinity {
        VanishingNonsummable
    } else if acc.infinity && !acc.zero {
        match beta {
            Extended::Infinity => DivergentBetaInfinite,
            b if b.is_zero() => DivergentBetaZero,
            _ => finite_beta_case(DivergentBetaFiniteConvergent, DivergentBetaFiniteDivergent)?,
        }
    } else {
        match small {
            Tristate::No => CombinedSmallNonsummable,
            _ => match beta {
                Extended::Infinity => CombinedBetaInfinite,
                b if b.is_zero() => CombinedBetaZero,
                _ => finite_beta_case(CombinedBetaFiniteConvergent, CombinedBetaFiniteDivergent)?,
            },
        }
    };

    let evidence = ClassificationEvidence {
        fired_case: case,
        beta_value: beta,
        dirichlet_converges_at_beta: at_beta,
        small_part_summable: small,
        accumulation_points: acc,
    };
    Ok((case.order_type(), evidence))
}

/// Metadata for a descriptor: closed form for parametric families, the
/// heuristic estimate for tables.
pub fn metadata_for(desc: &SizeFunction) -> Result<SizeMetadata> {
    match desc.family() {
        crate::sizes::SizeFamily::ExplicitTable(values) => estimate_table_metadata(values),
        _ => desc.analytic_metadata(),
    }
}

/// Classification report in its JSON wire form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    #[serde(rename = "type")]
    pub order_type: OrderType,
    pub case: FiredCase,
    pub beta: Extended,
    pub evidence: ClassificationEvidence,
    pub heuristic: bool,
    /// Set for branches that extend the enumerated case analysis.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

pub fn classify_descriptor(desc: &SizeFunction) -> Result<ClassificationReport> {
    let meta = metadata_for(desc)?;
    let (order_type, evidence) = classify(&meta)?;
    let note = evidence.fired_case.is_extension().then(|| {
        "small sizes accumulate at 0 with infinite sum: every interval has infinite mean measure, so the order is dense"
            .to_string()
    });
    Ok(ClassificationReport {
        order_type,
        case: evidence.fired_case,
        beta: evidence.beta_value,
        evidence,
        heuristic: meta.heuristic,
        note,
    })
}

/// Outcome of the embeddability test, condition by condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbtVerdict {
    pub embeddable: bool,
    /// (a) no accumulation points other than `0` and `inf`.
    pub no_interior_accumulation: bool,
    /// (b) the sizes `w(i) <= 1` have a finite sum.
    pub small_part_summable: bool,
    /// (c) `limsup log i / w(i) = 0` over `w(i) > 1` when `inf` accumulates.
    pub abscissa_zero: bool,
}

impl AbtVerdict {
    pub fn failed(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.no_interior_accumulation {
            out.push("a");
        }
        if !self.small_part_summable {
            out.push("b");
        }
        if !self.abscissa_zero {
            out.push("c");
        }
        out
    }
}

/// Whether the order embeds in the integers. Refuses heuristic metadata; see
/// [`abt_embeddable_heuristic`].
pub fn abt_embeddable(meta: &SizeMetadata) -> Result<AbtVerdict> {
    if meta.heuristic {
        return Err(Error::HeuristicMetadata);
    }
    abt_embeddable_heuristic(meta)
}

/// [`abt_embeddable`] with heuristic metadata explicitly accepted.
pub fn abt_embeddable_heuristic(meta: &SizeMetadata) -> Result<AbtVerdict> {
    let acc = require(meta.accumulation_points, "accumulation_points")?;
    let small = require(meta.small_part_summable, "small_part_summable")?;
    let a = !acc.interior;
    let b = small != Tristate::No;
    let c = if acc.infinity { require(meta.beta, "beta")?.is_zero() } else { true };
    Ok(AbtVerdict { embeddable: a && b && c, no_interior_accumulation: a, small_part_summable: b, abscissa_zero: c })
}
