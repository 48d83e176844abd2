use serde::{Deserialize, Serialize};

use crate::dependency::{Blocks, ComponentIndex};
use crate::digraph::{Digraph, VertexSet, Weighting};

use super::items::{scoped_blocks, Items};
use super::local::repair_items;
use super::{forward_scaled, LinearOrder, OrderError, Scaled, Value};

pub const DEFAULT_EXACT_CAP: usize = 15;
/// Largest item count the subset table accepts.
pub const MAX_EXACT_CAP: usize = 20;

/// Secondary objective among maximum-weight orders.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Tiebreak {
    #[default]
    None,
    /// Maximize the 1-based index of a vertex.
    MaxIndex(usize),
    /// Maximize the sum of the indices of a set.
    MaxIndexSum(VertexSet),
}

impl Tiebreak {
    pub fn target(&self) -> VertexSet {
        match self {
            Tiebreak::None => VertexSet::EMPTY,
            Tiebreak::MaxIndex(v) => VertexSet::singleton(*v),
            Tiebreak::MaxIndexSum(s) => *s,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Exactness {
    Exact,
    Local,
}

/// An order with its forward weight and tiebreak score.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MedianOrder {
    pub order: LinearOrder,
    pub value: Value,
    pub tiebreak_score: i64,
    pub exactness: Exactness,
}

/// Lexicographic DP value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default)]
pub(crate) struct DpScore {
    pub weight: i128,
    pub tiebreak: i64,
    pub aux: i128,
}

/// Optimal item order by subset DP. `offset` is the number of positions before the items.
///
/// `best[S]` is the best score for placing `S` as a suffix; the first item of the
/// suffix sits at position `offset + m − |S| + 1`.
pub(crate) fn dp_order(items: &Items, offset: i64) -> Result<(Vec<usize>, DpScore), OrderError> {
    let m = items.len();
    if m > MAX_EXACT_CAP {
        return Err(OrderError::ExceedsExactCap { n: m, cap: MAX_EXACT_CAP });
    }
    let full = (1usize << m) - 1;
    let mut wsum = vec![0i128; full + 1];
    let mut ssum = vec![0i128; full + 1];
    for s in 1..=full {
        let low = s.trailing_zeros() as usize;
        wsum[s] = wsum[s & (s - 1)] + items.w[low];
        ssum[s] = ssum[s & (s - 1)] + items.size[low];
    }
    let total = ssum[full];
    let mut best = vec![DpScore::default(); full + 1];
    let mut choice = vec![0u8; full + 1];
    for s in 1..=full {
        let start = offset + (total - ssum[s]) as i64 + 1;
        let mut top: Option<DpScore> = None;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let after = s & !(1 << v);
            let fwd = items.out[v] as usize & after;
            let prev = best[after];
            let cand = DpScore {
                weight: prev.weight + items.w[v] * wsum[fwd],
                tiebreak: prev.tiebreak + items.tie_cnt[v] * start + items.tie_base[v],
                aux: prev.aux + items.w[v] * ssum[fwd] + items.size[v] * wsum[fwd],
            };
            if top.is_none_or(|t| cand > t) {
                top = Some(cand);
                choice[s] = v as u8;
            }
        }
        best[s] = top.expect("nonempty subset");
    }
    let mut order = Vec::with_capacity(m);
    let mut s = full;
    while s != 0 {
        let v = choice[s] as usize;
        order.push(v);
        s &= !(1 << v);
    }
    Ok((order, best[full]))
}

fn check_cap(n: usize, cap: usize) -> Result<(), OrderError> {
    let cap = cap.min(MAX_EXACT_CAP);
    if n > cap {
        return Err(OrderError::ExceedsExactCap { n, cap });
    }
    Ok(())
}

/// Maximum forward weight order; ties go to the tiebreak, then to the smallest first vertex.
pub fn exact_median_order(d: &Digraph, w: &Weighting, tiebreak: &Tiebreak, cap: usize) -> Result<MedianOrder, OrderError> {
    w.check_len(d.n())?;
    d.check_subset(tiebreak.target())?;
    check_cap(d.n(), cap)?;
    let s = Scaled::new(w);
    let verts: Vec<usize> = (0..d.n()).collect();
    let items = Items::vertices(d, &s, &verts, tiebreak.target());
    let (order, score) = dp_order(&items, 0)?;
    let order = items.expand(&order);
    Ok(MedianOrder {
        value: s.value(score.weight),
        tiebreak_score: score.tiebreak,
        order: LinearOrder::from_vec_unchecked(order),
        exactness: Exactness::Exact,
    })
}

/// Median order in which every `K(ξ)` is contiguous.
pub fn good_median_order(d: &Digraph, w: &Weighting, exactness: Exactness, cap: usize) -> Result<MedianOrder, OrderError> {
    good_median_order_with(d, w, exactness, &Tiebreak::None, cap)
}

pub fn good_median_order_with(
    d: &Digraph,
    w: &Weighting,
    exactness: Exactness,
    tiebreak: &Tiebreak,
    cap: usize,
) -> Result<MedianOrder, OrderError> {
    w.check_len(d.n())?;
    d.check_subset(tiebreak.target())?;
    let index = ComponentIndex::build(d);
    for &k in &index.xi_sets {
        if !d.is_interval(k)? {
            return Err(OrderError::NotGood(k));
        }
    }
    let s = Scaled::new(w);
    let blocks = index.blocks(d.n());
    let (order, score) = good_order_with(d, &s, &blocks, d.vertices(), exactness, tiebreak.target(), cap)?;
    Ok(MedianOrder {
        value: s.value(forward_scaled(d, &s, &order)),
        tiebreak_score: score.tiebreak,
        order: LinearOrder::from_vec_unchecked(order),
        exactness,
    })
}

/// Order of `scope` keeping each block contiguous: the quotient is ordered first,
/// then each block internally.
pub(crate) fn good_order_with(
    d: &Digraph,
    s: &Scaled,
    blocks: &Blocks,
    scope: VertexSet,
    exactness: Exactness,
    target: VertexSet,
    cap: usize,
) -> Result<(Vec<usize>, DpScore), OrderError> {
    let sets = scoped_blocks(blocks, scope);
    let mut internal = Vec::with_capacity(sets.len());
    let mut inner = DpScore::default();
    for &b in &sets {
        let verts = b.to_vec();
        let items = Items::vertices(d, s, &verts, target);
        let order = match exactness {
            Exactness::Exact => {
                check_cap(verts.len(), cap)?;
                let (order, score) = dp_order(&items, -1)?;
                inner.weight += score.weight;
                inner.aux += score.aux;
                order
            }
            Exactness::Local => repair_items(&items, (0..verts.len()).collect()),
        };
        internal.push(items.expand(&order));
    }
    let quotient = Items::quotient(d, s, &internal, target)?;
    let order = match exactness {
        Exactness::Exact => {
            check_cap(sets.len(), cap)?;
            let (order, score) = dp_order(&quotient, 0)?;
            inner.weight += score.weight;
            inner.aux += score.aux;
            inner.tiebreak += score.tiebreak;
            order
        }
        Exactness::Local => repair_items(&quotient, (0..sets.len()).collect()),
    };
    Ok((quotient.expand(&order), inner))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::Weight;
    use crate::forge::{fixture, random_digraph};
    use crate::order::{forward_weight, satisfies_feedback};

    fn brute(d: &Digraph, w: &Weighting, target: VertexSet) -> (Value, i64) {
        let mut perm: Vec<usize> = (0..d.n()).collect();
        let mut best = (Value::from_integer(-1), -1);
        permute(&mut perm, 0, &mut |p| {
            let v = forward_weight(d, w, &LinearOrder::from_vec_unchecked(p.to_vec())).unwrap();
            let t: i64 = p.iter().enumerate().filter(|&(_, &x)| target.contains(x)).map(|(i, _)| i as i64 + 1).sum();
            if (v, t) > best {
                best = (v, t);
            }
        });
        best
    }

    fn permute(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
        if k == p.len() {
            f(p);
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            permute(p, k + 1, f);
            p.swap(k, i);
        }
    }

    #[test]
    fn small_fixtures() {
        let unit = Weighting::unit(3);
        let tt3 = exact_median_order(&fixture("TT3").unwrap(), &unit, &Tiebreak::None, 15).unwrap();
        assert_eq!(tt3.order.as_slice(), &[0, 1, 2]);
        assert_eq!(tt3.value, Value::from_integer(3));
        let c3 = exact_median_order(&fixture("C3").unwrap(), &unit, &Tiebreak::None, 15).unwrap();
        assert_eq!(c3.order.as_slice(), &[0, 1, 2]);
        assert_eq!(c3.value, Value::from_integer(2));
        let c4x = exact_median_order(&fixture("C4X").unwrap(), &Weighting::unit(4), &Tiebreak::None, 15).unwrap();
        assert_eq!(c4x.value, Value::from_integer(3));
    }

    #[test]
    fn cap_is_enforced() {
        let d = random_digraph(9, 1, 0.5);
        let err = exact_median_order(&d, &Weighting::unit(9), &Tiebreak::None, 8).unwrap_err();
        assert_eq!(err, OrderError::ExceedsExactCap { n: 9, cap: 8 });
    }

    #[test]
    fn matches_enumeration_with_tiebreaks() {
        for seed in 0..40u64 {
            let n = 3 + (seed as usize % 5);
            let d = random_digraph(n, seed, 0.6);
            let weights: Vec<Weight> = (0..n).map(|v| Weight::new((v as i64 * 7 + seed as i64) % 4, 2)).collect();
            let w = Weighting::new(weights).unwrap();
            for tb in
                [Tiebreak::None, Tiebreak::MaxIndex(seed as usize % n), Tiebreak::MaxIndexSum([0, n - 1].into_iter().collect())]
            {
                let got = exact_median_order(&d, &w, &tb, 15).unwrap();
                let (v, t) = brute(&d, &w, tb.target());
                assert_eq!(got.value, v, "seed {seed}");
                assert_eq!(got.value, forward_weight(&d, &w, &got.order).unwrap());
                if tb != Tiebreak::None {
                    assert_eq!(got.tiebreak_score, t, "seed {seed} {tb:?}");
                }
            }
        }
    }

    #[test]
    fn exact_orders_satisfy_feedback() {
        for seed in 0..60u64 {
            let d = random_digraph(7, seed, 0.7);
            let weights: Vec<Weight> = (0..7).map(|v| Weight::from_integer((v as i64 + seed as i64) % 3)).collect();
            let w = Weighting::new(weights).unwrap();
            let got = exact_median_order(&d, &w, &Tiebreak::None, 15).unwrap();
            assert!(satisfies_feedback(&d, &w, &got.order).unwrap(), "seed {seed}");
        }
    }

    #[test]
    fn good_order_on_tournament_is_plain_median() {
        let c3 = fixture("C3").unwrap();
        let got = good_median_order(&c3, &Weighting::unit(3), Exactness::Exact, 15).unwrap();
        assert_eq!(got.value, Value::from_integer(2));
        let c4x = fixture("C4X").unwrap();
        let got = good_median_order(&c4x, &Weighting::unit(4), Exactness::Exact, 15).unwrap();
        assert_eq!(got.value, Value::from_integer(3));
    }
}
