use serde::{Deserialize, Serialize};

use crate::digraph::{Digraph, Weighting};

use super::items::Items;
use super::{LinearOrder, OrderError, Scaled};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FeedbackSide {
    /// `ω(N⁺(v_i)) < ω(N⁻(v_i))` inside `[i, j]`.
    First,
    /// `ω(N⁻(v_j)) < ω(N⁺(v_j))` inside `[i, j]`.
    Last,
}

/// A failed feedback inequality on the interval `[i, j]` (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeedbackViolation {
    pub i: usize,
    pub j: usize,
    pub side: FeedbackSide,
}

/// First violation, scanning `i` upward and, for each `i`, `j` downward.
pub(crate) fn violation_items(items: &Items, order: &[usize]) -> Option<FeedbackViolation> {
    let m = order.len();
    let mut prefix = vec![0u64; m + 1];
    for (p, &x) in order.iter().enumerate() {
        prefix[p + 1] = prefix[p] | 1 << x;
    }
    for i in 0..m {
        for j in (i + 1..m).rev() {
            let span = prefix[j + 1] & !prefix[i];
            let (a, b) = (order[i], order[j]);
            if items.wsum(items.out[a] & span) < items.wsum(items.inn[a] & span) {
                return Some(FeedbackViolation { i: i + 1, j: j + 1, side: FeedbackSide::First });
            }
            if items.wsum(items.inn[b] & span) < items.wsum(items.out[b] & span) {
                return Some(FeedbackViolation { i: i + 1, j: j + 1, side: FeedbackSide::Last });
            }
        }
    }
    None
}

fn apply(order: &mut Vec<usize>, v: FeedbackViolation) {
    let (i, j) = (v.i - 1, v.j - 1);
    match v.side {
        FeedbackSide::First => {
            let x = order.remove(i);
            order.insert(j, x);
        }
        FeedbackSide::Last => {
            let x = order.remove(j);
            order.insert(i, x);
        }
    }
}

/// Repairs violations until none remain. Each move raises `(weight, aux)` strictly.
pub(crate) fn repair_items(items: &Items, mut order: Vec<usize>) -> Vec<usize> {
    let mut last = items.potential(&order);
    while let Some(v) = violation_items(items, &order) {
        apply(&mut order, v);
        let now = items.potential(&order);
        debug_assert!(now > last, "feedback repair must increase the potential");
        last = now;
    }
    order
}

/// Feedback check of an order over a subset of the vertices, inside the induced subdigraph.
pub(crate) fn first_violation(d: &Digraph, s: &Scaled, order: &[usize]) -> Option<FeedbackViolation> {
    let items = Items::vertices(d, s, order, Default::default());
    let local: Vec<usize> = (0..order.len()).collect();
    violation_items(&items, &local)
}

pub(crate) fn repair_order(d: &Digraph, s: &Scaled, order: &[usize]) -> Vec<usize> {
    let items = Items::vertices(d, s, order, Default::default());
    let fixed = repair_items(&items, (0..order.len()).collect());
    items.expand(&fixed)
}

pub fn feedback_violation(d: &Digraph, w: &Weighting, order: &LinearOrder) -> Result<Option<FeedbackViolation>, OrderError> {
    order.check(d)?;
    w.check_len(d.n())?;
    Ok(first_violation(d, &Scaled::new(w), order.as_slice()))
}

pub fn satisfies_feedback(d: &Digraph, w: &Weighting, order: &LinearOrder) -> Result<bool, OrderError> {
    Ok(feedback_violation(d, w, order)?.is_none())
}

/// Local median order reached from `init` by moving endpoints of violated intervals.
pub fn local_median_order(d: &Digraph, w: &Weighting, init: &LinearOrder) -> Result<LinearOrder, OrderError> {
    init.check(d)?;
    w.check_len(d.n())?;
    Ok(LinearOrder::from_vec_unchecked(repair_order(d, &Scaled::new(w), init.as_slice())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forge::{fixture, random_digraph};
    use crate::order::{exact_median_order, forward_weight, Tiebreak, Value};

    fn order(v: &[usize]) -> LinearOrder {
        LinearOrder::new(v.len(), v.to_vec()).unwrap()
    }

    #[test]
    fn feedback_examples() {
        let tt3 = fixture("TT3").unwrap();
        let unit = Weighting::unit(3);
        assert!(satisfies_feedback(&tt3, &unit, &order(&[0, 1, 2])).unwrap());
        assert_eq!(
            feedback_violation(&tt3, &unit, &order(&[2, 1, 0])).unwrap(),
            Some(FeedbackViolation { i: 1, j: 3, side: FeedbackSide::First })
        );
        assert!(satisfies_feedback(&fixture("C3").unwrap(), &unit, &order(&[0, 1, 2])).unwrap());
    }

    #[test]
    fn repair_examples() {
        let tt3 = fixture("TT3").unwrap();
        let unit = Weighting::unit(3);
        assert_eq!(local_median_order(&tt3, &unit, &order(&[2, 1, 0])).unwrap(), order(&[0, 1, 2]));
        assert_eq!(local_median_order(&tt3, &unit, &order(&[0, 1, 2])).unwrap(), order(&[0, 1, 2]));
        let c4x = fixture("C4X").unwrap();
        let unit4 = Weighting::unit(4);
        for init in [[0, 1, 2, 3], [3, 2, 1, 0], [2, 0, 3, 1]] {
            let got = local_median_order(&c4x, &unit4, &order(&init)).unwrap();
            assert!(satisfies_feedback(&c4x, &unit4, &got).unwrap());
            assert!(forward_weight(&c4x, &unit4, &got).unwrap() >= Value::from_integer(3));
        }
    }

    #[test]
    fn local_orders_never_beat_exact() {
        for seed in 0..30 {
            let d = random_digraph(8, seed, 0.6);
            let w = Weighting::unit(8);
            let exact = exact_median_order(&d, &w, &Tiebreak::None, 15).unwrap();
            let init = LinearOrder::new(8, (0..8).rev().collect()).unwrap();
            let local = local_median_order(&d, &w, &init).unwrap();
            assert!(satisfies_feedback(&d, &w, &local).unwrap());
            assert!(forward_weight(&d, &w, &local).unwrap() <= exact.value);
        }
    }
}
