use std::collections::HashMap;

use serde::Serialize;

use crate::dependency::{Blocks, ComponentIndex};
use crate::digraph::{Digraph, VertexSet, Weight, Weighting};

use super::analysis::analyze_in;
use super::local::first_violation;
use super::{forward_scaled, LinearOrder, OrderError, Scaled};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SedCase {
    /// `ω(N⁺(f)\J) < ω(G_L\J)`: the order is kept.
    Strict,
    /// Equality: bad vertices outside `J`, then `J`, then the rest.
    Equality,
    /// Some `x ∈ J` has `ω(N⁺(x)\J) > ω(G_L\J)`; the order is kept.
    Lemma1Violated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SedStep {
    pub case: SedCase,
    pub order: Vec<usize>,
    pub feed: usize,
    pub j_set: VertexSet,
    pub lhs: Weight,
    pub rhs: Weight,
    /// Forward weight unchanged by the step.
    pub weight_preserved: bool,
    /// The resulting order satisfies the feedback property.
    pub feedback_ok: bool,
}

impl SedStep {
    /// The post-conditions of an equality step hold.
    pub fn consistent(&self) -> bool {
        self.weight_preserved && self.feedback_ok
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SedimentOutcome {
    Stable {
        q: usize,
    },
    Periodic {
        start: usize,
        length: usize,
    },
    BudgetExceeded,
    /// The order at rank `q` breaks the inequality the process relies on.
    Invalid {
        q: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SedimentationTrace {
    /// `Sed⁰(L), Sed¹(L), …`; a periodic trace ends with the repeated order.
    pub orders: Vec<Vec<usize>>,
    pub steps: Vec<SedStep>,
    pub outcome: SedimentOutcome,
}

impl SedimentationTrace {
    /// Last order of the trace.
    pub fn last(&self) -> &[usize] {
        self.orders.last().expect("trace holds the initial order")
    }

    pub fn consistent(&self) -> bool {
        self.steps.iter().all(|s| s.case != SedCase::Equality || s.consistent())
    }
}

/// One step on an order of a vertex subset; `J` is the block of the feed restricted to the subset.
pub(crate) fn sed_in(d: &Digraph, s: &Scaled, blocks: &Blocks, order: &[usize]) -> SedStep {
    let a = analyze_in(d, s, order);
    let scope: VertexSet = order.iter().copied().collect();
    let j = blocks.block_of(a.feed).intersection(scope);
    let rhs = s.of(a.good.difference(j));
    let lhs = s.of(a.out_of_feed.difference(j));
    let lemma1 = j.iter().all(|x| s.of(d.out_set(x).intersection(scope).difference(j)) <= rhs);
    let mut step = SedStep {
        case: SedCase::Strict,
        order: order.to_vec(),
        feed: a.feed,
        j_set: j,
        lhs: s.weight(lhs),
        rhs: s.weight(rhs),
        weight_preserved: true,
        feedback_ok: true,
    };
    if !lemma1 {
        step.case = SedCase::Lemma1Violated;
    } else if lhs == rhs {
        let bad: Vec<usize> = order.iter().copied().filter(|&v| !j.contains(v) && a.bad.contains(v)).collect();
        let inside: Vec<usize> = order.iter().copied().filter(|&v| j.contains(v)).collect();
        let rest: Vec<usize> = order.iter().copied().filter(|&v| !j.contains(v) && !a.bad.contains(v)).collect();
        let next: Vec<usize> = bad.into_iter().chain(inside).chain(rest).collect();
        step.case = SedCase::Equality;
        step.weight_preserved = forward_scaled(d, s, &next) == forward_scaled(d, s, order);
        step.feedback_ok = first_violation(d, s, &next).is_none();
        step.order = next;
    }
    step
}

pub(crate) fn sediment_in(d: &Digraph, s: &Scaled, blocks: &Blocks, order: &[usize], budget: u64) -> SedimentationTrace {
    let mut orders = vec![order.to_vec()];
    let mut steps = Vec::new();
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
    seen.insert(order.to_vec(), 0);
    let mut current = order.to_vec();
    for q in 0.. {
        let step = sed_in(d, s, blocks, &current);
        let case = step.case;
        match case {
            SedCase::Strict => return SedimentationTrace { orders, steps, outcome: SedimentOutcome::Stable { q } },
            SedCase::Lemma1Violated => {
                steps.push(step);
                return SedimentationTrace { orders, steps, outcome: SedimentOutcome::Invalid { q } };
            }
            SedCase::Equality => {}
        }
        if q as u64 >= budget {
            return SedimentationTrace { orders, steps, outcome: SedimentOutcome::BudgetExceeded };
        }
        current = step.order.clone();
        steps.push(step);
        orders.push(current.clone());
        if let Some(&start) = seen.get(&current) {
            return SedimentationTrace { orders, steps, outcome: SedimentOutcome::Periodic { start, length: q + 1 - start } };
        }
        seen.insert(current.clone(), q + 1);
    }
    unreachable!("the loop returns")
}

/// Default step budget: `10·n!`, at most one million.
pub fn default_budget(n: usize) -> u64 {
    let mut f: u64 = 10;
    for k in 2..=n as u64 {
        f = f.saturating_mul(k);
        if f >= 1_000_000 {
            return 1_000_000;
        }
    }
    f.min(1_000_000)
}

fn blocks_of(d: &Digraph) -> Blocks {
    ComponentIndex::build(d).blocks(d.n())
}

pub fn sed(d: &Digraph, w: &Weighting, order: &LinearOrder) -> Result<SedStep, OrderError> {
    order.check(d)?;
    w.check_len(d.n())?;
    if order.is_empty() {
        return Err(OrderError::InvalidPermutation { n: 0, detail: "empty order has no feed".into() });
    }
    Ok(sed_in(d, &Scaled::new(w), &blocks_of(d), order.as_slice()))
}

/// Iterates the step until the strict case, a repeated order, or the budget.
pub fn sediment(d: &Digraph, w: &Weighting, order: &LinearOrder, budget: Option<u64>) -> Result<SedimentationTrace, OrderError> {
    order.check(d)?;
    w.check_len(d.n())?;
    if order.is_empty() {
        return Err(OrderError::InvalidPermutation { n: 0, detail: "empty order has no feed".into() });
    }
    let budget = budget.unwrap_or_else(|| default_budget(d.n()));
    Ok(sediment_in(d, &Scaled::new(w), &blocks_of(d), order.as_slice(), budget))
}
