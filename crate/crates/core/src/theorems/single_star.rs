use crate::digraph::{Digraph, Weighting};
use crate::missing::decompose;
use crate::order::{analyze, exact_median_order, Tiebreak};

use super::gates::hypotheses;
use super::kings::toward_centers;
use super::{check_cap, is_median, Run, SnpCertificate, TheoremError, TheoremId};

/// One missing star: feed of a median order of the completion toward the center
/// that puts the center as late as possible.
pub fn single_star_witness(d: &Digraph, cap: usize) -> Result<SnpCertificate, TheoremError> {
    let mut run = Run::new(TheoremId::SingleStar, cap);
    run.gate(hypotheses(TheoremId::SingleStar, d))?;
    check_cap(d.n(), cap)?;
    let w = Weighting::unit(d.n());
    let stars = decompose(d)?.as_stars();
    let Some(star) = stars.first() else {
        run.case("tournament");
        let l = exact_median_order(d, &w, &Tiebreak::None, cap)?.order;
        run.order("L", l.as_slice());
        let f = l.feed().ok_or_else(|| run.inconsistent("empty digraph"))?;
        return run.finish(d, vec![f]);
    };
    let x = star.center;
    let t = d.complete(&toward_centers(&stars))?;
    let l = exact_median_order(&t, &w, &Tiebreak::MaxIndex(x), cap)?.order;
    run.order("L", l.as_slice());
    let f = l.feed().expect("nonempty");
    if f == x {
        run.case("center");
    } else {
        let t2 = if d.is_missing(f, x) {
            run.case("leaf");
            t.reoriented(x, f)
        } else {
            run.case("whole");
            t.clone()
        };
        run.check("L is a median order after reorienting toward f", is_median(&t2, l.as_slice(), cap)?);
        let a = analyze(&t2, &w, &l)?;
        let contradiction = a.good.contains(x) && t2.out_degree(f) == a.good.len();
        run.check("branch x ∈ G_L with d⁺_T'(f) = |G_L| not reached", !contradiction);
    }
    run.finish(d, vec![f])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forge::{fixture, random_tournament, star_deleted};
    use crate::theorems::{havet_thomasse_witnesses, snp_set};

    #[test]
    fn st1() {
        let st1 = fixture("ST1").unwrap();
        let cert = single_star_witness(&st1, 15).unwrap();
        assert!(snp_set(&st1).contains(cert.witnesses[0]));
        assert!(cert.findings.is_empty());
    }

    #[test]
    fn one_leaf() {
        for seed in 0..20 {
            let d = star_deleted(7, &[1], seed).unwrap();
            let cert = single_star_witness(&d, 15).unwrap();
            assert!(cert.findings.is_empty(), "{:?}", cert.findings);
        }
    }

    #[test]
    fn tournament_matches_feed() {
        let t = random_tournament(7, 3);
        let a = single_star_witness(&t, 15).unwrap();
        let b = havet_thomasse_witnesses(&t, 15).unwrap();
        assert_eq!(a.witnesses[0], b.witnesses[0]);
    }
}
