use crate::dependency::DependencyDigraph;
use crate::digraph::{Digraph, Weighting};
use crate::missing::{decompose, MissingEdge, OrientationPlan, Provenance, Star};
use crate::order::{exact_median_order, Tiebreak};

use super::gates::{hypotheses, kings_assignment};
use super::{check_cap, is_median, Run, SnpCertificate, TheoremError, TheoremId};

pub(crate) fn toward_centers(stars: &[Star]) -> OrientationPlan {
    let mut plan = OrientationPlan::default();
    for s in stars {
        for a in s.leaves {
            plan.set(a, s.center, Provenance::TowardCenter);
        }
    }
    plan
}

/// Disjoint stars whose centers are all kings: the feed of a median order of the
/// completion toward the centers.
pub fn kings_stars_witness(d: &Digraph, cap: usize) -> Result<SnpCertificate, TheoremError> {
    let mut run = Run::new(TheoremId::KingsStars, cap);
    run.gate(hypotheses(TheoremId::KingsStars, d))?;
    check_cap(d.n(), cap)?;
    let dec = decompose(d)?;
    let stars = kings_assignment(d, &dec).ok_or_else(|| run.inconsistent("gate passed without a king center choice"))?;
    if stars.len() <= 1 {
        run.notes.push("all-kings hypothesis is vacuous for at most one center".into());
    }
    let t = d.complete(&toward_centers(&stars))?;
    let l = exact_median_order(&t, &Weighting::unit(d.n()), &Tiebreak::None, cap)?.order;
    run.order("L", l.as_slice());
    let f = l.feed().ok_or_else(|| run.inconsistent("empty digraph"))?;
    if d.is_whole(f) {
        run.case("whole");
        run.check("N⁺⁺(f) = N⁺⁺_T(f)", d.second_out_set(f) == t.second_out_set(f));
    } else if let Some(s) = stars.iter().find(|s| s.center == f) {
        run.case("center");
        run.check("N⁺⁺(f) = N⁺⁺_T(f)", d.second_out_set(f) == t.second_out_set(f));
        run.note(format!("center {} with {} leaves", s.center, s.leaves.len()));
    } else {
        let x = stars.iter().find(|s| s.leaves.contains(f)).map(|s| s.center).expect("non-whole vertex lies in a star");
        let delta = DependencyDigraph::build(d);
        let e = MissingEdge::new(f, x).expect("distinct");
        let i = delta.index_of(e).expect("missing edge");
        if delta.out_degree(i) > 0 {
            run.case("leaf-losing");
            run.check("d⁺⁺(f) = d⁺⁺_T(f)", d.second_out_set(f).len() == t.second_out_set(f).len());
        } else {
            run.case("leaf-non-losing");
            let t2 = t.reoriented(x, f);
            run.check("L is a median order after reorienting fx toward f", is_median(&t2, l.as_slice(), cap)?);
            run.check("N⁺⁺(f) = N⁺⁺_T'(f)", d.second_out_set(f) == t2.second_out_set(f));
        }
    }
    run.finish(d, vec![f])
}
