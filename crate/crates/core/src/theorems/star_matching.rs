use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::dependency::{goodness, ComponentIndex, DependencyDigraph};
use crate::digraph::{Digraph, VertexSet, Weighting};
use crate::missing::{decompose, is_convenient, OrientationPlan, Provenance};
use crate::order::{analyze, exact_median_order, good_median_order, Exactness, Tiebreak};

use super::assembly::two_witnesses;
use super::gates::hypotheses;
use super::lemmas::{cycle_in, lemma8};
use super::oracle::has_snp;
use super::{is_median, Run, SnpCertificate, TheoremError, TheoremId};

/// An arc of `F`: the orientation given to a missing edge on a path component of Δ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FArc {
    pub tail: usize,
    pub head: usize,
    /// The edge is the last vertex of its path.
    pub last: bool,
}

/// `F` for the components of Δ that are directed paths (isolated vertices included)
/// and avoid the star center `x`.
pub fn build_f(d: &Digraph, x: Option<usize>) -> Vec<FArc> {
    f_arcs(d, &DependencyDigraph::build(d), x)
}

pub(crate) fn f_arcs(d: &Digraph, delta: &DependencyDigraph, x: Option<usize>) -> Vec<FArc> {
    let mut out = Vec::new();
    for comp in delta.weak_components() {
        if x.is_some_and(|x| comp.iter().any(|&i| delta.edge(i).contains(x))) {
            continue;
        }
        let Some(path) = as_path(delta, &comp) else { continue };
        let first = delta.edge(path[0]);
        let mut a = vec![first.lo()];
        for w in path.windows(2) {
            let roles = delta.arc(w[0], w[1]).expect("path arc").roles;
            let ai = *a.last().expect("nonempty");
            a.push(if roles.x1 == ai { roles.x2 } else { roles.y2 });
        }
        let forward = is_convenient(d, first.lo(), first.hi());
        for (pos, (&i, &ai)) in path.iter().zip(&a).enumerate() {
            let bi = delta.edge(i).other(ai);
            let (tail, head) = if forward { (ai, bi) } else { (bi, ai) };
            out.push(FArc { tail, head, last: pos + 1 == path.len() });
        }
    }
    out
}

/// Vertices of a weak component in path order, if the component is a directed path.
fn as_path(delta: &DependencyDigraph, comp: &[usize]) -> Option<Vec<usize>> {
    if comp.iter().any(|&i| delta.out_degree(i) > 1 || delta.in_degree(i) > 1) {
        return None;
    }
    let starts: Vec<usize> = comp.iter().copied().filter(|&i| delta.in_degree(i) == 0).collect();
    if starts.len() != 1 {
        return None;
    }
    let mut path = vec![starts[0]];
    while let Some(&next) = delta.out_neighbors(*path.last().expect("nonempty")).first() {
        path.push(next);
    }
    (path.len() == comp.len()).then_some(path)
}

pub(crate) fn require_good(run: &Run, d: &Digraph, index: &ComponentIndex) -> Result<(), TheoremError> {
    match goodness(d, index).verdicts.iter().find(|(_, ok)| !ok) {
        Some(&(set, _)) => Err(TheoremError::GoodnessViolation { theorem: run.theorem, set }),
        None => Ok(()),
    }
}

/// Star plus matching: good median order of `D + F`, witness inside `J(f)`, lifted back to `D`.
pub fn star_matching_witness(d: &Digraph, cap: usize) -> Result<SnpCertificate, TheoremError> {
    let mut run = Run::new(TheoremId::StarMatching, cap);
    run.gate(hypotheses(TheoremId::StarMatching, d))?;
    let dec = decompose(d)?;
    let x = dec.stars.first().map(|s| s.center);
    let delta = DependencyDigraph::build(d);
    let f = f_arcs(d, &delta, x);
    run.note(format!("|F| = {}", f.len()));
    let d2 = d.with_arcs(f.iter().map(|a| (a.tail, a.head)))?;
    let index = ComponentIndex::build(&d2);
    require_good(&run, &d2, &index)?;
    let l = good_median_order(&d2, &Weighting::unit(d.n()), Exactness::Exact, cap)?.order;
    run.order("L", l.as_slice());
    let fv = l.feed().ok_or_else(|| run.inconsistent("empty digraph"))?;
    let j = index.j_set(fv);
    let y = match x {
        _ if j.len() == 1 => {
            run.case("feed-whole");
            fv
        }
        Some(x) if j.contains(x) => {
            run.case("feed-in-star-block");
            lemma5_witness(&mut run, d, &delta, x, j)?
        }
        _ => {
            run.case("feed-in-cycle-block");
            match cycle_in(d, j) {
                Some(c) => {
                    let verdict = lemma8(d, &c);
                    run.check(format!("Lemma 8 identities on {j}: {verdict:?}"), verdict.is_ok());
                }
                None => {
                    run.check(format!("{j} is a losing cycle"), false);
                }
            }
            fv
        }
    };
    lift_cases(&mut run, &d2, &f, y, l.as_slice())?;
    run.finish(d, vec![y])
}

/// How the witness relates to the arcs of `F`.
fn lift_cases(run: &mut Run, d2: &Digraph, f: &[FArc], y: usize, order: &[usize]) -> Result<(), TheoremError> {
    if let Some(a) = f.iter().find(|a| a.head == y) {
        run.case(format!("lift-head({}->{})", a.tail, a.head));
    } else if let Some(a) = f.iter().find(|a| a.tail == y) {
        if a.last {
            run.case(format!("lift-tail-last({}->{})", a.tail, a.head));
            if d2.n() <= run.cap {
                let flipped = d2.reoriented(a.head, a.tail);
                let ok = is_median(&flipped, order, run.cap)?;
                run.check("L stays a median order after reversing the last arc of F", ok);
            }
        } else {
            run.case(format!("lift-tail-inner({}->{})", a.tail, a.head));
        }
    } else {
        run.case("lift-untouched");
    }
    Ok(())
}

/// For every missing edge reachable in Δ from the star, its endpoint on the side of `x`
/// along a shortest path.
fn x_sides(delta: &DependencyDigraph, x: usize) -> Vec<Option<usize>> {
    let mut side = vec![None; delta.len()];
    let mut queue = VecDeque::new();
    for i in 0..delta.len() {
        if delta.edge(i).contains(x) {
            side[i] = Some(x);
            queue.push_back(i);
        }
    }
    while let Some(i) = queue.pop_front() {
        let v = side[i].expect("queued edges have a side");
        for &j in delta.out_neighbors(i) {
            if side[j].is_some() {
                continue;
            }
            let r = delta.arc(i, j).expect("listed arc").roles;
            side[j] = Some(if r.x1 == v { r.x2 } else { r.y2 });
            queue.push_back(j);
        }
    }
    side
}

/// Feed of a median order of `T[K]` maximizing the index of `x`, in the labels of `d`.
fn lemma5_witness(run: &mut Run, d: &Digraph, delta: &DependencyDigraph, x: usize, k: VertexSet) -> Result<usize, TheoremError> {
    let (h, map) = d.induced(k)?;
    let local = |v: usize| map.iter().position(|&u| u == v).expect("vertex of K");
    let sides = x_sides(delta, x);
    let mut plan = OrientationPlan::default();
    for (i, e) in delta.edges().iter().enumerate() {
        if !k.contains(e.lo()) || !k.contains(e.hi()) {
            continue;
        }
        if e.contains(x) {
            plan.set(local(e.other(x)), local(x), Provenance::TowardCenter);
        } else if let Some(v) = sides[i] {
            plan.set(local(e.other(v)), local(v), Provenance::Explicit);
        } else {
            run.check(format!("{e} is reachable in Δ from the star"), false);
            plan.set(local(e.lo()), local(e.hi()), Provenance::Explicit);
        }
    }
    let t = h.complete(&plan)?;
    let xl = local(x);
    let w = Weighting::unit(t.n());
    let l = exact_median_order(&t, &w, &Tiebreak::MaxIndex(xl), run.cap)?.order;
    run.order("T[K] order", &l.as_slice().iter().map(|&v| map[v]).collect::<Vec<_>>());
    let g = l.feed().expect("nonempty");
    if g == xl {
        run.case("lemma5-center");
    } else if h.is_whole(g) {
        run.case("lemma5-whole");
    } else if h.is_missing(g, xl) {
        run.case("lemma5-leaf");
    } else {
        let u = h.non_neighbors(g).first().expect("non-whole vertex");
        if t.has_arc(g, u) {
            run.case("lemma5-matching-out");
        } else {
            run.case("lemma5-matching-in");
            let a = analyze(&t, &w, &l)?;
            let bad_branch = a.good.contains(xl) && t.out_degree(g) == a.good.len();
            run.check("no median order with a larger index of x (x ∈ G_L and d⁺ = |G_L| not reached)", !bad_branch);
        }
    }
    run.check("T[K] feed has the SNP in D[K]", has_snp(&h, g));
    Ok(map[g])
}

/// Matching with `F = ∅` and no sink: two witnesses from a good median order.
pub fn matching_two_witnesses(d: &Digraph, cap: usize) -> Result<SnpCertificate, TheoremError> {
    let mut run = Run::new(TheoremId::MatchingTwo, cap);
    run.gate(hypotheses(TheoremId::MatchingTwo, d))?;
    let index = ComponentIndex::build(d);
    require_good(&run, d, &index)?;
    let l = good_median_order(d, &Weighting::unit(d.n()), Exactness::Exact, cap)?.order;
    run.order("L", l.as_slice());
    let witnesses = two_witnesses(&mut run, d, &index, l.as_slice(), &mut |run, j| lemma8_block(run, d, j))?;
    run.finish(d, witnesses)
}

/// Every vertex of a losing-cycle block.
fn lemma8_block(run: &mut Run, d: &Digraph, j: VertexSet) -> Result<Vec<usize>, TheoremError> {
    let c = cycle_in(d, j).ok_or_else(|| run.inconsistent(format!("block {j} is not a losing cycle")))?;
    let verdict = lemma8(d, &c);
    run.check(format!("Lemma 8 identities on {j}: {verdict:?}"), verdict.is_ok());
    Ok(j.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forge::{fixture, star_deleted};
    use crate::theorems::snp_set;

    #[test]
    fn c4x_matching() {
        let c4x = fixture("C4X").unwrap();
        assert!(build_f(&c4x, None).is_empty());
        let cert = star_matching_witness(&c4x, 15).unwrap();
        assert!(snp_set(&c4x).contains(cert.witnesses[0]));
        let two = matching_two_witnesses(&c4x, 15).unwrap();
        assert!(two.witnesses.len() >= 2);
        assert!(two.witnesses.iter().all(|&v| snp_set(&c4x).contains(v)));
    }

    #[test]
    fn lc3_all_vertices() {
        let lc3 = fixture("LC3").unwrap();
        let cert = star_matching_witness(&lc3, 15).unwrap();
        assert_eq!(cert.verdicts[0].out_degree, 2);
        assert_eq!(cert.verdicts[0].second_out_degree, 2);
        let two = matching_two_witnesses(&lc3, 15).unwrap();
        assert!(two.witnesses.len() >= 2);
        assert!(two.findings.is_empty());
    }

    #[test]
    fn single_edge_path_gets_convenient_arc() {
        let d = star_deleted(6, &[1], 3).unwrap();
        let f = build_f(&d, None);
        assert_eq!(f.len(), 1);
        assert!(is_convenient(&d, f[0].tail, f[0].head));
        assert!(f[0].last);
    }

    #[test]
    fn sink_is_gated() {
        let lc3 = fixture("LC3").unwrap();
        let d = Digraph::new(7, lc3.arcs().chain((0..6).map(|v| (v, 6)))).unwrap();
        assert!(matches!(
            matching_two_witnesses(&d, 15),
            Err(TheoremError::HypothesisFailed { clause, .. }) if clause == "no-sink"
        ));
    }
}
