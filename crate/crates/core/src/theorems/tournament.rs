use crate::dependency::ComponentIndex;
use crate::digraph::{Digraph, Weighting};
use crate::order::{exact_median_order, Tiebreak};

use super::assembly::two_witnesses;
use super::{check_cap, Run, SnpCertificate, TheoremError, TheoremId};

/// Feed of an exact median order, plus a second witness when there is no sink.
pub fn havet_thomasse_witnesses(t: &Digraph, cap: usize) -> Result<SnpCertificate, TheoremError> {
    let mut run = Run::new(TheoremId::HavetThomasse, cap);
    if run.gate(super::gates::hypotheses(TheoremId::HavetThomasse, t)).is_err() {
        return Err(TheoremError::NotTournament);
    }
    check_cap(t.n(), cap)?;
    let witnesses = tournament_witnesses(&mut run, t)?;
    run.finish(t, witnesses)
}

/// Witnesses in the labels of `t`; two of them unless `t` has a sink.
pub(crate) fn tournament_witnesses(run: &mut Run, t: &Digraph) -> Result<Vec<usize>, TheoremError> {
    let l = exact_median_order(t, &Weighting::unit(t.n()), &Tiebreak::None, run.cap)?.order;
    run.order("L", l.as_slice());
    let f = l.feed().ok_or_else(|| run.inconsistent("empty tournament"))?;
    if t.has_sink() {
        run.case("sink");
        return Ok(vec![f]);
    }
    run.case("no-sink");
    let index = ComponentIndex::build(t);
    two_witnesses(run, t, &index, l.as_slice(), &mut |run, _| Err(run.inconsistent("tournament blocks are singletons")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forge::{fixture, random_tournament};
    use crate::theorems::snp_set;

    #[test]
    fn c3_has_two() {
        let cert = havet_thomasse_witnesses(&fixture("C3").unwrap(), 15).unwrap();
        assert_eq!(cert.witnesses.len(), 2);
        assert_eq!(snp_set(&fixture("C3").unwrap()).len(), 3);
    }

    #[test]
    fn tt3_sink() {
        let cert = havet_thomasse_witnesses(&fixture("TT3").unwrap(), 15).unwrap();
        assert_eq!(cert.witnesses, vec![2]);
    }

    #[test]
    fn random_eight() {
        let t = random_tournament(8, 1);
        let cert = havet_thomasse_witnesses(&t, 15).unwrap();
        assert!(cert.witnesses.iter().all(|&w| snp_set(&t).contains(w)));
    }

    #[test]
    fn rejects_non_tournament() {
        assert_eq!(havet_thomasse_witnesses(&fixture("C4X").unwrap(), 15), Err(TheoremError::NotTournament));
    }
}
