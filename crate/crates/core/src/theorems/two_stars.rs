use crate::dependency::{ComponentIndex, DependencyDigraph};
use crate::digraph::{Digraph, VertexSet, Weighting};
use crate::missing::{convenient_orientations, decompose, MissingEdge, OrientationPlan, Provenance, Star};
use crate::order::{analyze, exact_median_order, good_median_order, Exactness, Tiebreak};

use super::assembly::two_witnesses;
use super::gates::{center_assignments, hypotheses};
use super::oracle::has_snp;
use super::star_matching::require_good;
use super::tournament::tournament_witnesses;
use super::{check_cap, is_median, Run, SnpCertificate, TheoremError, TheoremId};

/// Good edges get a convenient orientation, the others point at their center.
pub(crate) fn convenient_completion(run: &mut Run, d: &Digraph, stars: &[Star]) -> Result<Digraph, TheoremError> {
    let delta = DependencyDigraph::build(d);
    let mut plan = OrientationPlan::default();
    for s in stars {
        for a in s.leaves {
            let e = MissingEdge::new(a, s.center).expect("distinct");
            let i = delta.index_of(e).expect("missing edge");
            if delta.in_degree(i) > 0 {
                plan.set(a, s.center, Provenance::TowardCenter);
                continue;
            }
            match convenient_orientations(d, e)?.first() {
                Some(&(tail, head)) => plan.set(tail, head, Provenance::Convenient),
                None => {
                    run.check(format!("good edge {e} has a convenient orientation"), false);
                    plan.set(a, s.center, Provenance::TowardCenter);
                }
            }
        }
    }
    Ok(d.complete(&plan)?)
}

/// Copy of `t` with every edge of `star` pointing at `head_side`: the center when `toward_center`.
pub(crate) fn star_toward(t: &Digraph, star: &Star, toward_center: bool) -> Digraph {
    let mut out = t.clone();
    for a in star.leaves {
        out = if toward_center { out.reoriented(a, star.center) } else { out.reoriented(star.center, a) };
    }
    out
}

/// The two stars as `(S_x, S_y)` with `x -> y`.
fn ordered(d: &Digraph, stars: &[Star]) -> (Star, Star) {
    let (s, t) = (stars[0].clone(), stars[1].clone());
    if d.has_arc(s.center, t.center) {
        (s, t)
    } else {
        (t, s)
    }
}

/// `y -> a` for every leaf `a` of `x` and `b -> x` for every leaf `b` of `y`.
fn claim_holds(d: &Digraph, sx: &Star, sy: &Star) -> bool {
    sx.leaves.iter().all(|a| d.has_arc(sy.center, a)) && sy.leaves.iter().all(|b| d.has_arc(b, sx.center))
}

/// Center choice satisfying the arc claim, falling back to the canonical one.
fn choose(run: &mut Run, d: &Digraph) -> Result<(Star, Star), TheoremError> {
    let dec = decompose(d)?;
    let all = center_assignments(&dec);
    let found = all.iter().map(|s| ordered(d, s)).find(|(sx, sy)| claim_holds(d, sx, sy));
    let ok = found.is_some();
    let (sx, sy) = found.unwrap_or_else(|| ordered(d, &all[0]));
    run.check(format!("y -> A and B -> x (x = {}, y = {})", sx.center, sy.center), ok);
    Ok((sx, sy))
}

/// Two stars with `δ_Δ > 0`: feed of a median order maximizing the index of `x`.
pub fn two_stars_witness(d: &Digraph, cap: usize) -> Result<SnpCertificate, TheoremError> {
    let mut run = Run::new(TheoremId::TwoStars, cap);
    run.gate(hypotheses(TheoremId::TwoStars, d))?;
    check_cap(d.n(), cap)?;
    let (sx, sy) = choose(&mut run, d)?;
    let (x, y) = (sx.center, sy.center);
    let t = convenient_completion(&mut run, d, &[sx.clone(), sy.clone()])?;
    let w = Weighting::unit(d.n());
    let l = exact_median_order(&t, &w, &Tiebreak::MaxIndex(x), cap)?.order;
    run.order("L", l.as_slice());
    let f = l.feed().expect("nonempty");
    let median = |run: &mut Run, t2: &Digraph| -> Result<(), TheoremError> {
        let ok = is_median(t2, l.as_slice(), cap)?;
        run.check("L is a median order of the reoriented completion", ok);
        Ok(())
    };
    if d.is_whole(f) {
        run.case("whole");
        run.check("N⁺⁺(f) = N⁺⁺_T(f)", d.second_out_set(f) == t.second_out_set(f));
    } else if f == x {
        run.case("x");
        median(&mut run, &star_toward(&t, &sx, true))?;
    } else if sy.leaves.contains(f) {
        run.case("b");
        median(&mut run, &t.reoriented(y, f))?;
    } else if f == y {
        run.case("y");
        let t2 = star_toward(&t, &sy, true);
        median(&mut run, &t2)?;
        let a = analyze(&t2, &w, &l)?;
        let covered = sy.leaves.union(VertexSet::singleton(x)).is_subset(a.good);
        run.check("branch B ∪ {x} ⊆ G_L with d⁺_T'(y) = |G_L| not reached", !(covered && t2.out_degree(y) == a.good.len()));
    } else {
        run.case("a");
        let t2 = t.reoriented(x, f);
        median(&mut run, &t2)?;
        let a = analyze(&t2, &w, &l)?;
        let tight = t2.out_degree(f) == a.good.len() && a.good.len() == t2.second_out_set(f).len();
        run.check("branch d⁺_T'(a) = |G_L| = d⁺⁺_T'(a) not reached", !tight);
    }
    run.finish(d, vec![f])
}

/// Two stars, `δ⁺_Δ, δ⁻_Δ > 0`, no sink: two witnesses from a good median order.
pub fn two_stars_two_witnesses(d: &Digraph, cap: usize) -> Result<SnpCertificate, TheoremError> {
    let mut run = Run::new(TheoremId::TwoStarsTwo, cap);
    run.gate(hypotheses(TheoremId::TwoStarsTwo, d))?;
    check_cap(d.n(), cap)?;
    let (sx, sy) = choose(&mut run, d)?;
    let index = ComponentIndex::build(d);
    require_good(&run, d, &index)?;
    let l = good_median_order(d, &Weighting::unit(d.n()), Exactness::Exact, cap)?.order;
    run.order("L", l.as_slice());
    let k = sx.vertices().union(sy.vertices());
    let centers = VertexSet::from_iter([sx.center, sy.center]);
    let witnesses = two_witnesses(&mut run, d, &index, l.as_slice(), &mut |run, j| {
        if j != k {
            return Err(run.inconsistent(format!("block {j} differs from K = {k}")));
        }
        let mut out = vec![sx.center];
        out.extend(sub_tournament_witnesses(run, d, k, centers, 1)?);
        Ok(out)
    })?;
    run.finish(d, witnesses)
}

/// Witnesses of `H = D[K] − centers` (a tournament), at most `limit` of them, checked in `D[K]`.
pub(crate) fn sub_tournament_witnesses(
    run: &mut Run,
    d: &Digraph,
    k: VertexSet,
    centers: VertexSet,
    limit: usize,
) -> Result<Vec<usize>, TheoremError> {
    let (h, map) = d.induced(k.difference(centers))?;
    if !h.is_tournament() {
        return Err(run.inconsistent("H is not a tournament"));
    }
    let saved = std::mem::replace(&mut run.prefix, "H: ".into());
    let local = if limit == 1 {
        let l = exact_median_order(&h, &Weighting::unit(h.n()), &Tiebreak::None, run.cap)?.order;
        run.order("L", l.as_slice());
        vec![l.feed().expect("nonempty")]
    } else if h.has_sink() {
        run.check("H has no sink", false);
        vec![h.sinks().first().expect("sink")]
    } else {
        tournament_witnesses(run, &h)?
    };
    run.prefix = saved;
    let (dk, kmap) = d.induced(k)?;
    let out: Vec<usize> = local.iter().map(|&v| map[v]).collect();
    for &v in &out {
        let lv = kmap.iter().position(|&u| u == v).expect("vertex of K");
        run.check(format!("{v} has the SNP in D[K]"), has_snp(&dk, lv));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forge::fixture;

    #[test]
    fn gate_rejects_single_star() {
        assert!(matches!(
            two_stars_witness(&fixture("ST1").unwrap(), 15),
            Err(TheoremError::HypothesisFailed { clause, .. }) if clause == "two-stars"
        ));
    }

    #[test]
    fn c4x_has_two_stars() {
        // Two single-edge stars whose Δ is a 2-cycle.
        let c4x = fixture("C4X").unwrap();
        let cert = two_stars_witness(&c4x, 15).unwrap();
        assert_eq!(cert.witnesses.len(), 1);
        let two = two_stars_two_witnesses(&c4x, 15).unwrap();
        assert_eq!(two.witnesses.len(), 2);
    }
}
