//! Vertex orders: exact and local median orders, order analysis and sedimentation.
//!
//! The weight of an arc `(u, v)` is `ω(u)·ω(v)`; an order's forward weight is
//! the total weight of its forward arcs. With unit weights this is the number
//! of forward arcs. The feedback property compares `ω` of neighborhood sets
//! inside intervals of the order.

mod analysis;
mod exact;
mod items;
mod local;
mod sed;

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digraph::{Digraph, GraphError, VertexSet, Weight, Weighting};

pub use analysis::{analyze, OrderAnalysis};
pub use exact::{
    exact_median_order, good_median_order, good_median_order_with, Exactness, MedianOrder, Tiebreak, DEFAULT_EXACT_CAP,
    MAX_EXACT_CAP,
};
pub use local::{feedback_violation, local_median_order, satisfies_feedback, FeedbackSide, FeedbackViolation};
pub use sed::{default_budget, sed, sediment, SedCase, SedStep, SedimentOutcome, SedimentationTrace};

pub(crate) use analysis::analyze_in;
pub(crate) use sed::sediment_in;

/// Forward weights may exceed the range of a single vertex weight.
pub type Value = Ratio<i128>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("not a permutation of 0..{n}: {detail}")]
    InvalidPermutation { n: usize, detail: String },
    #[error("{n} items exceed the exact solver cap of {cap}")]
    ExceedsExactCap { n: usize, cap: usize },
    #[error("digraph is not good: K(ξ) = {0} is not an interval")]
    NotGood(VertexSet),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A permutation of all vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LinearOrder(Vec<usize>);

impl LinearOrder {
    pub fn new(n: usize, perm: Vec<usize>) -> Result<Self, OrderError> {
        if perm.len() != n {
            return Err(OrderError::InvalidPermutation { n, detail: format!("length {}", perm.len()) });
        }
        let mut seen = vec![false; n];
        for &v in &perm {
            if v >= n || seen[v] {
                return Err(OrderError::InvalidPermutation { n, detail: format!("vertex {v} repeated or out of range") });
            }
            seen[v] = true;
        }
        Ok(LinearOrder(perm))
    }

    pub fn identity(n: usize) -> Self {
        LinearOrder((0..n).collect())
    }

    pub(crate) fn from_vec_unchecked(perm: Vec<usize>) -> Self {
        LinearOrder(perm)
    }

    pub fn for_digraph(d: &Digraph, perm: Vec<usize>) -> Result<Self, OrderError> {
        LinearOrder::new(d.n(), perm)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Last vertex.
    pub fn feed(&self) -> Option<usize> {
        self.0.last().copied()
    }

    /// 1-based index of `v`.
    pub fn index_of(&self, v: usize) -> Option<usize> {
        self.0.iter().position(|&u| u == v).map(|p| p + 1)
    }

    fn check(&self, d: &Digraph) -> Result<(), OrderError> {
        if self.0.len() != d.n() {
            return Err(OrderError::InvalidPermutation { n: d.n(), detail: format!("length {}", self.0.len()) });
        }
        Ok(())
    }
}

impl fmt::Display for LinearOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl fmt::Debug for LinearOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearOrder[{self}]")
    }
}

impl FromStr for LinearOrder {
    type Err = OrderError;

    /// Comma- or space-separated vertex ids; validated as a permutation of `0..len`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let perm = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().map_err(|_| OrderError::InvalidPermutation { n: 0, detail: format!("bad token {t:?}") }))
            .collect::<Result<Vec<_>, _>>()?;
        let n = perm.len();
        LinearOrder::new(n, perm)
    }
}

/// Vertex weights over a common denominator, for exact integer arithmetic.
#[derive(Debug, Clone)]
pub(crate) struct Scaled {
    pub w: Vec<i128>,
    pub denom: i128,
}

impl Scaled {
    pub fn new(w: &Weighting) -> Self {
        let (w, denom) = w.scaled();
        Scaled { w, denom }
    }

    pub fn unit(n: usize) -> Self {
        Scaled { w: vec![1; n], denom: 1 }
    }

    pub fn of(&self, set: VertexSet) -> i128 {
        set.iter().map(|v| self.w[v]).sum()
    }

    pub fn weight(&self, x: i128) -> Weight {
        Weight::new(i64::try_from(x).expect("weight sum fits i64"), i64::try_from(self.denom).expect("denominator fits i64"))
    }

    /// Converts a sum of arc weights (products of two scaled weights).
    pub fn value(&self, x: i128) -> Value {
        Value::new(x, self.denom * self.denom)
    }
}

/// Sum of `ω(u)·ω(v)` over arcs `(u, v)` with `u` before `v`, in scaled units.
pub(crate) fn forward_scaled(d: &Digraph, w: &Scaled, order: &[usize]) -> i128 {
    let mut seen = VertexSet::EMPTY;
    let mut total = 0;
    for &v in order {
        total += w.w[v] * w.of(d.in_set(v).intersection(seen));
        seen.insert(v);
    }
    total
}

pub fn forward_weight(d: &Digraph, w: &Weighting, order: &LinearOrder) -> Result<Value, OrderError> {
    order.check(d)?;
    w.check_len(d.n())?;
    let s = Scaled::new(w);
    Ok(s.value(forward_scaled(d, &s, order.as_slice())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forge::fixture;

    fn order(v: &[usize]) -> LinearOrder {
        LinearOrder::new(v.len(), v.to_vec()).unwrap()
    }

    #[test]
    fn forward_weight_examples() {
        let tt3 = fixture("TT3").unwrap();
        let c3 = fixture("C3").unwrap();
        let unit = Weighting::unit(3);
        assert_eq!(forward_weight(&tt3, &unit, &order(&[0, 1, 2])).unwrap(), Value::from_integer(3));
        assert_eq!(forward_weight(&c3, &unit, &order(&[0, 1, 2])).unwrap(), Value::from_integer(2));
        let w = Weighting::new(vec![Weight::from_integer(1), Weight::from_integer(1), Weight::from_integer(5)]).unwrap();
        assert_eq!(forward_weight(&tt3, &w, &order(&[0, 1, 2])).unwrap(), Value::from_integer(11));
    }

    #[test]
    fn linear_order_validation() {
        assert!(LinearOrder::new(3, vec![0, 1, 1]).is_err());
        assert!(LinearOrder::new(3, vec![0, 1]).is_err());
        assert_eq!("2, 0,1".parse::<LinearOrder>().unwrap(), order(&[2, 0, 1]));
        assert!("0,x".parse::<LinearOrder>().is_err());
        assert_eq!(order(&[2, 0, 1]).to_string(), "2,0,1");
        assert_eq!(order(&[2, 0, 1]).index_of(1), Some(3));
    }

    #[test]
    fn forward_weight_rejects_wrong_length() {
        let c3 = fixture("C3").unwrap();
        assert!(forward_weight(&c3, &Weighting::unit(3), &order(&[0, 1])).is_err());
    }
}
