//! Structure of a losing cycle `a_1b_1 → … → a_kb_k → a_1b_1` of Δ, checked inside `D[K(C)]`.

use serde::{Deserialize, Serialize};

use crate::dependency::DependencyDigraph;
use crate::digraph::{Digraph, VertexSet};

/// Endpoint labels of a directed cycle of Δ with `a_i → a_{i+1}` and `b_i → b_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LosingCycle {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

impl LosingCycle {
    pub fn k(&self) -> usize {
        self.a.len()
    }

    pub fn vertices(&self) -> VertexSet {
        self.a.iter().chain(&self.b).copied().collect()
    }

    /// `a_i` for 1-based `i`.
    fn a(&self, i: usize) -> usize {
        self.a[i - 1]
    }

    fn b(&self, i: usize) -> usize {
        self.b[i - 1]
    }

    /// `(a_{i+1}, b_{i+1})` with the wrap: plain for odd `k`, swapped for even `k`.
    fn next(&self, i: usize) -> (usize, usize) {
        let k = self.k();
        if i < k {
            (self.a(i + 1), self.b(i + 1))
        } else if k % 2 == 1 {
            (self.a(1), self.b(1))
        } else {
            (self.b(1), self.a(1))
        }
    }
}

/// Labeled cycles for every weak component of Δ that is a directed cycle of length at least 2.
pub fn losing_cycles(d: &Digraph) -> Vec<LosingCycle> {
    let delta = DependencyDigraph::build(d);
    delta.weak_components().iter().filter_map(|c| label_cycle(&delta, c)).collect()
}

/// The losing cycle whose endpoint set is `k`, if there is one.
pub fn cycle_in(d: &Digraph, k: VertexSet) -> Option<LosingCycle> {
    losing_cycles(d).into_iter().find(|c| c.vertices() == k)
}

fn label_cycle(delta: &DependencyDigraph, comp: &[usize]) -> Option<LosingCycle> {
    let k = comp.len();
    if k < 2 || comp.iter().any(|&i| delta.out_degree(i) != 1 || delta.in_degree(i) != 1) {
        return None;
    }
    let start = comp[0];
    let mut a = vec![delta.edge(start).lo()];
    let mut b = vec![delta.edge(start).hi()];
    let mut cur = start;
    for step in 0..k {
        let next = delta.out_neighbors(cur)[0];
        if step + 1 == k {
            return (next == start).then_some(LosingCycle { a, b });
        }
        let roles = delta.arc(cur, next).expect("listed arc").roles;
        let ai = *a.last().expect("nonempty");
        let (an, bn) = if roles.x1 == ai { (roles.x2, roles.y2) } else { (roles.y2, roles.x2) };
        a.push(an);
        b.push(bn);
        cur = next;
    }
    None
}

fn ensure(ok: bool, detail: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(detail())
    }
}

/// Closing arcs of the cycle.
pub fn lemma6(d: &Digraph, c: &LosingCycle) -> Result<(), String> {
    let kset = c.vertices();
    let k = c.k();
    let pp = |v: usize| d.second_out_within(v, kset);
    let (ak, bk, a1, b1) = (c.a(k), c.b(k), c.a(1), c.b(1));
    let (head_a, head_b) = if k % 2 == 1 { (a1, b1) } else { (b1, a1) };
    ensure(d.has_arc(ak, head_a), || format!("missing arc {ak}->{head_a}"))?;
    ensure(!pp(ak).contains(head_b), || format!("{head_b} ∈ N⁺⁺({ak})"))?;
    ensure(d.has_arc(bk, head_b), || format!("missing arc {bk}->{head_b}"))?;
    ensure(!pp(bk).contains(head_a), || format!("{head_a} ∈ N⁺⁺({bk})"))
}

/// `N⁺(a_1) = N⁻(b_1) = {a_j : j even} ∪ {b_j : j odd, j ≥ 3}` and the complementary in-neighborhood.
pub fn lemma7(d: &Digraph, c: &LosingCycle) -> Result<(), String> {
    let kset = c.vertices();
    let k = c.k();
    let (a1, b1) = (c.a(1), c.b(1));
    let plus: VertexSet = (2..=k).map(|j| if j % 2 == 0 { c.a(j) } else { c.b(j) }).collect();
    let minus: VertexSet = (2..=k).map(|j| if j % 2 == 0 { c.b(j) } else { c.a(j) }).collect();
    let sets = [
        ("N⁺(a_1)", d.out_within(a1, kset), plus),
        ("N⁻(b_1)", d.in_within(b1, kset), plus),
        ("N⁻(a_1)", d.in_within(a1, kset), minus),
        ("N⁺(b_1)", d.out_within(b1, kset), minus),
    ];
    for (name, got, want) in sets {
        ensure(got == want, || format!("{name} = {got}, expected {want}"))?;
    }
    Ok(())
}

/// Neighborhood identities for every `a_i, b_i` and `d⁺ = d⁻ = d⁺⁺ = k − 1` on `K(C)`.
pub fn lemma8(d: &Digraph, c: &LosingCycle) -> Result<(), String> {
    let kset = c.vertices();
    let k = c.k();
    let out = |v| d.out_within(v, kset);
    let inn = |v| d.in_within(v, kset);
    let pp = |v| d.second_out_within(v, kset);
    for i in 1..=k {
        let (ai, bi) = (c.a(i), c.b(i));
        let (an, bn) = c.next(i);
        ensure(out(ai) == inn(bi), || format!("N⁺(a_{i}) ≠ N⁻(b_{i})"))?;
        ensure(inn(ai) == out(bi), || format!("N⁻(a_{i}) ≠ N⁺(b_{i})"))?;
        let mut want = inn(ai).union(VertexSet::singleton(bi));
        want.remove(bn);
        ensure(pp(ai) == want, || format!("N⁺⁺(a_{i}) = {}, expected {want}", pp(ai)))?;
        let mut want = inn(bi).union(VertexSet::singleton(ai));
        want.remove(an);
        ensure(pp(bi) == want, || format!("N⁺⁺(b_{i}) = {}, expected {want}", pp(bi)))?;
    }
    for v in kset {
        let (p, m, q) = (out(v).len(), inn(v).len(), pp(v).len());
        ensure(p == k - 1 && m == k - 1 && q == k - 1, || format!("vertex {v}: d⁺={p}, d⁻={m}, d⁺⁺={q}"))?;
    }
    Ok(())
}

pub fn lemma6_holds(d: &Digraph, c: &LosingCycle) -> bool {
    lemma6(d, c).is_ok()
}

pub fn lemma7_holds(d: &Digraph, c: &LosingCycle) -> bool {
    lemma7(d, c).is_ok()
}

pub fn lemma8_holds(d: &Digraph, c: &LosingCycle) -> bool {
    lemma8(d, c).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forge::{fixture, losing_cycle_gadget};

    #[test]
    fn lc3_cycle() {
        let lc3 = fixture("LC3").unwrap();
        let cycles = losing_cycles(&lc3);
        assert_eq!(cycles.len(), 1);
        let c = &cycles[0];
        assert_eq!(c.k(), 3);
        assert_eq!(c.vertices(), VertexSet::full(6));
        lemma6(&lc3, c).unwrap();
        lemma7(&lc3, c).unwrap();
        lemma8(&lc3, c).unwrap();
    }

    #[test]
    fn gadgets_satisfy_lemmas() {
        for k in 2..=8 {
            let g = losing_cycle_gadget(k).unwrap();
            let c = cycle_in(&g, VertexSet::full(2 * k)).unwrap();
            assert_eq!(c.k(), k);
            assert!(lemma6_holds(&g, &c) && lemma7_holds(&g, &c) && lemma8_holds(&g, &c), "k = {k}");
        }
    }

    #[test]
    fn detects_broken_labels() {
        let lc3 = fixture("LC3").unwrap();
        let mut c = losing_cycles(&lc3).remove(0);
        c.a.swap(1, 2);
        c.b.swap(1, 2);
        assert!(!lemma7_holds(&lc3, &c));
    }
}
