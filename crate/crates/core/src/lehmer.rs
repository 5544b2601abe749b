//! Finite arrangements and their Lehmer codes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Distinct item labels read left to right in increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FiniteOrder {
    arrangement: Vec<usize>,
}

impl FiniteOrder {
    pub fn new(arrangement: Vec<usize>) -> Result<Self> {
        if arrangement.is_empty() {
            return Err(Error::InvalidOrder("arrangement is empty".into()));
        }
        let mut seen = arrangement.clone();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidOrder("labels must be distinct".into()));
        }
        if seen[0] == 0 {
            return Err(Error::InvalidOrder("labels must be positive".into()));
        }
        Ok(Self { arrangement })
    }

    /// Caller guarantees distinct positive labels.
    pub(crate) fn from_vec_unchecked(arrangement: Vec<usize>) -> Self {
        debug_assert!(!arrangement.is_empty());
        Self { arrangement }
    }

    /// `1, 2, ..., n`.
    pub fn identity(n: usize) -> Result<Self> {
        Self::new((1..=n).collect())
    }

    pub fn arrangement(&self) -> &[usize] {
        &self.arrangement
    }

    pub fn len(&self) -> usize {
        self.arrangement.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrangement.is_empty()
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.arrangement
    }

    /// `positions[l-1]` is the 0-based position of label `l`, for labels `1..=n`.
    pub fn positions(&self) -> Result<Vec<usize>> {
        let n = self.len();
        let mut pos = vec![usize::MAX; n];
        for (p, &label) in self.arrangement.iter().enumerate() {
            if label > n {
                return Err(Error::InvalidOrder(format!("labels are not 1..={n}: found {label}")));
            }
            pos[label - 1] = p;
        }
        Ok(pos)
    }

    /// Whether `a` precedes `b`.
    pub fn precedes(&self, a: usize, b: usize) -> Option<bool> {
        let pa = self.arrangement.iter().position(|&l| l == a)?;
        let pb = self.arrangement.iter().position(|&l| l == b)?;
        Some(pa < pb)
    }

    /// The induced arrangement of the labels in `subset`.
    pub fn restrict(&self, subset: &[usize]) -> Vec<usize> {
        self.arrangement.iter().copied().filter(|l| subset.contains(l)).collect()
    }
}

/// Relative ranks `R_1, R_2, ...` with `1 <= R_i <= i`: item `i` sits at
/// position `R_i` among items `1..=i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LehmerCode {
    ranks: Vec<usize>,
}

impl LehmerCode {
    pub fn new(ranks: Vec<usize>) -> Result<Self> {
        for (i, &r) in ranks.iter().enumerate() {
            if r == 0 || r > i + 1 {
                return Err(Error::InvalidCode { position: i + 1, rank: r });
            }
        }
        Ok(Self { ranks })
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    /// Code of an order over labels `1..=n`.
    pub fn from_order(order: &FiniteOrder) -> Result<Self> {
        let pos = order.positions()?;
        let ranks = (0..pos.len())
            .map(|i| 1 + (0..i).filter(|&j| pos[j] < pos[i]).count())
            .collect();
        Ok(Self { ranks })
    }

    /// The arrangement of `1..=n` obtained by inserting item `i` at position
    /// `R_i` for `i = 1, 2, ..., n`.
    pub fn to_order(&self) -> Result<FiniteOrder> {
        let mut list = Vec::with_capacity(self.len());
        for (i, &r) in self.ranks.iter().enumerate() {
            list.insert(r - 1, i + 1);
        }
        FiniteOrder::new(list)
    }

    /// Indices with `R_i = 1`.
    pub fn records(&self) -> Vec<usize> {
        self.ranks.iter().enumerate().filter(|(_, &r)| r == 1).map(|(i, _)| i + 1).collect()
    }

    /// `sum_i (i - R_i)`.
    pub fn inversions(&self) -> u64 {
        self.ranks.iter().enumerate().map(|(i, &r)| (i + 1 - r) as u64).sum()
    }

    /// Code of the reversed order: `i - R_i + 1`.
    pub fn reversed(&self) -> Self {
        Self { ranks: self.ranks.iter().enumerate().map(|(i, &r)| i + 2 - r).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn known_code() {
        let code = LehmerCode::new(vec![1, 2, 1, 3]).unwrap();
        assert_eq!(code.to_order().unwrap().arrangement(), &[3, 1, 4, 2]);
    }

    #[test]
    fn invalid_inputs() {
        assert!(LehmerCode::new(vec![1, 3]).is_err());
        assert!(LehmerCode::new(vec![0]).is_err());
        assert!(FiniteOrder::new(vec![]).is_err());
        assert!(FiniteOrder::new(vec![1, 1]).is_err());
        assert!(FiniteOrder::new(vec![0, 1]).is_err());
        assert!(FiniteOrder::new(vec![1, 5]).unwrap().positions().is_err());
    }

    #[test]
    fn reversal_code() {
        let code = LehmerCode::new(vec![1, 2, 1, 3]).unwrap();
        let mut rev = code.to_order().unwrap().into_vec();
        rev.reverse();
        let rev_code = LehmerCode::from_order(&FiniteOrder::new(rev).unwrap()).unwrap();
        assert_eq!(rev_code, code.reversed());
    }

    proptest! {
        #[test]
        fn code_order_round_trip(perm in Just((1..=9usize).collect::<Vec<_>>()).prop_shuffle()) {
            let order = FiniteOrder::new(perm).unwrap();
            let code = LehmerCode::from_order(&order).unwrap();
            prop_assert_eq!(code.to_order().unwrap(), order);
        }
    }
}
