use serde::Serialize;

use crate::digraph::{Digraph, VertexSet, Weighting};

use super::{forward_scaled, LinearOrder, OrderError, Scaled, Value};

/// Classification of the vertices of an order relative to its feed vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderAnalysis {
    pub forward_weight: Value,
    pub feed: usize,
    /// `G_L`: not out-neighbors of the feed, reached by `feed → v_i → v_j` with `i < j`.
    pub good: VertexSet,
    pub bad: VertexSet,
    pub out_of_feed: VertexSet,
}

/// Analysis of an order of a vertex subset, inside the induced subdigraph.
pub(crate) fn analyze_in(d: &Digraph, s: &Scaled, order: &[usize]) -> OrderAnalysis {
    let feed = *order.last().expect("nonempty order");
    let scope: VertexSet = order.iter().copied().collect();
    let outs = d.out_set(feed).intersection(scope);
    let mut seen_outs = VertexSet::EMPTY;
    let mut good = VertexSet::EMPTY;
    let mut bad = VertexSet::EMPTY;
    for &v in order {
        if outs.contains(v) {
            seen_outs.insert(v);
        } else if v != feed {
            if d.in_set(v).is_disjoint(seen_outs) {
                bad.insert(v);
            } else {
                good.insert(v);
            }
        }
    }
    OrderAnalysis { forward_weight: s.value(forward_scaled(d, s, order)), feed, good, bad, out_of_feed: outs }
}

pub fn analyze(d: &Digraph, w: &Weighting, order: &LinearOrder) -> Result<OrderAnalysis, OrderError> {
    order.check(d)?;
    w.check_len(d.n())?;
    if order.is_empty() {
        return Err(OrderError::InvalidPermutation { n: 0, detail: "empty order has no feed".into() });
    }
    Ok(analyze_in(d, &Scaled::new(w), order.as_slice()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::VertexSet;
    use crate::forge::{fixture, random_digraph};

    fn set(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn fixtures() {
        let c3 = fixture("C3").unwrap();
        let a = analyze(&c3, &Weighting::unit(3), &LinearOrder::identity(3)).unwrap();
        assert_eq!((a.feed, a.out_of_feed, a.good, a.bad), (2, set(&[0]), set(&[1]), set(&[])));
        let tt3 = fixture("TT3").unwrap();
        let a = analyze(&tt3, &Weighting::unit(3), &LinearOrder::identity(3)).unwrap();
        assert_eq!((a.feed, a.out_of_feed, a.good, a.bad), (2, set(&[]), set(&[]), set(&[0, 1])));
    }

    #[test]
    fn partition_and_second_neighborhood() {
        for seed in 0..200 {
            let d = random_digraph(7, seed, 0.5);
            let order = LinearOrder::identity(7);
            let a = analyze(&d, &Weighting::unit(7), &order).unwrap();
            let parts = [a.good, a.bad, a.out_of_feed, VertexSet::singleton(a.feed)];
            let mut union = VertexSet::EMPTY;
            for p in parts {
                assert!(union.is_disjoint(p));
                union = union.union(p);
            }
            assert_eq!(union, d.vertices());
            assert!(a.good.is_subset(d.second_out_set(a.feed)));
        }
    }
}
