use serde::{Deserialize, Serialize};

use crate::dependency::{DeltaStats, DependencyDigraph};
use crate::digraph::{Digraph, VertexSet};
use crate::missing::{decompose, Star, StarDecomposition};

use super::oracle::all_kings;
use super::star_matching::f_arcs;
use super::TheoremId;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisCheck {
    pub clause: String,
    pub passed: bool,
    pub evidence: String,
}

impl HypothesisCheck {
    fn new(clause: &str, passed: bool, evidence: impl Into<String>) -> Self {
        HypothesisCheck { clause: clause.to_string(), passed, evidence: evidence.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub theorem: TheoremId,
    pub applicable: bool,
    pub checks: Vec<HypothesisCheck>,
}

/// Every theorem's hypotheses evaluated on `d`.
pub fn check_hypotheses(d: &Digraph) -> Vec<HypothesisReport> {
    TheoremId::ALL
        .iter()
        .map(|&theorem| {
            let checks = hypotheses(theorem, d);
            HypothesisReport { theorem, applicable: checks.iter().all(|c| c.passed), checks }
        })
        .collect()
}

pub(crate) fn passes(theorem: TheoremId, d: &Digraph) -> bool {
    hypotheses(theorem, d).iter().all(|c| c.passed)
}

/// Clauses in order; evaluation stops after the first failure.
pub(crate) fn hypotheses(theorem: TheoremId, d: &Digraph) -> Vec<HypothesisCheck> {
    let mut out = Vec::new();
    if theorem == TheoremId::HavetThomasse {
        out.push(HypothesisCheck::new("tournament", d.is_tournament(), format!("{} missing edges", d.missing_edges().len())));
        return out;
    }
    let dec = match decompose(d) {
        Ok(dec) => {
            out.push(HypothesisCheck::new(
                "disjoint-stars",
                true,
                format!("{} stars, {} single edges", dec.stars.len(), dec.matching.len()),
            ));
            dec
        }
        Err(e) => {
            out.push(HypothesisCheck::new("disjoint-stars", false, e.to_string()));
            return out;
        }
    };
    let delta = DependencyDigraph::build(d);
    let stats = delta.stats();
    let mut push = |clause: &str, passed: bool, evidence: String| -> bool {
        out.push(HypothesisCheck::new(clause, passed, evidence));
        passed
    };
    let count = dec.component_count();
    let sink = || {
        let s = d.sinks();
        (s.is_empty(), if s.is_empty() { "no sink".to_string() } else { format!("sinks {s}") })
    };
    match theorem {
        TheoremId::HavetThomasse => unreachable!("handled above"),
        TheoremId::KingsStars => {
            let kings = kings_assignment(d, &dec);
            let evidence = match &kings {
                Some(stars) => format!("centers {}", centers(stars)),
                None => format!("no center choice makes all of {} kings", centers(&dec.as_stars())),
            };
            if push("centers-all-kings", kings.is_some(), evidence) {
                push("delta-min-in-positive", stats.positive_in(), delta_evidence(&stats));
            }
        }
        TheoremId::StarMatching => {
            if push("one-star-plus-matching", dec.stars.len() <= 1, format!("{} stars with 2+ leaves", dec.stars.len())) {
                let (ok, evidence) = star_components_positive(&delta, dec.stars.first());
                push("star-components-positive", ok, evidence);
            }
        }
        TheoremId::MatchingTwo => {
            if push("matching", dec.stars.is_empty(), format!("{} stars with 2+ leaves", dec.stars.len())) {
                let f = f_arcs(d, &delta, None);
                if push("F-empty", f.is_empty(), format!("|F| = {}", f.len())) {
                    let (ok, evidence) = sink();
                    push("no-sink", ok, evidence);
                }
            }
        }
        TheoremId::SingleStar => {
            push("one-star", count <= 1, format!("{count} star components"));
        }
        TheoremId::TwoStars => {
            if push("two-stars", count == 2, format!("{count} star components")) {
                push("delta-min-degree-positive", stats.positive(), delta_evidence(&stats));
            }
        }
        TheoremId::TwoStarsTwo => {
            if push("two-stars", count == 2, format!("{count} star components"))
                && push("delta-min-out-positive", stats.positive_out(), delta_evidence(&stats))
                && push("delta-min-in-positive", stats.positive_in(), delta_evidence(&stats))
            {
                let (ok, evidence) = sink();
                push("no-sink", ok, evidence);
            }
        }
        TheoremId::ThreeStars | TheoremId::ThreeStarsTwo => {
            if push("three-stars", count == 3, format!("{count} star components")) {
                let tri = triangle_assignments(d, &dec);
                let evidence = match tri.first() {
                    Some((_, (x, y, z))) => format!("{x}->{y}->{z}->{x}"),
                    None => format!("centers {} span a transitive triangle", centers(&dec.as_stars())),
                };
                if push("directed-triangle", !tri.is_empty(), evidence) {
                    if theorem == TheoremId::ThreeStars {
                        push("delta-min-degree-positive", stats.positive(), delta_evidence(&stats));
                    } else if push("delta-min-out-positive", stats.positive_out(), delta_evidence(&stats))
                        && push("delta-min-in-positive", stats.positive_in(), delta_evidence(&stats))
                    {
                        let (ok, evidence) = sink();
                        push("no-sink", ok, evidence);
                    }
                }
            }
        }
    }
    out
}

fn delta_evidence(stats: &DeltaStats) -> String {
    match (stats.min_out, stats.min_in) {
        (Some(o), Some(i)) => format!("|Δ| = {}, δ⁺ = {o}, δ⁻ = {i}", stats.vertices),
        _ => "Δ is empty".to_string(),
    }
}

fn centers(stars: &[Star]) -> VertexSet {
    stars.iter().map(|s| s.center).collect()
}

/// Every component of Δ containing an edge of the star has positive in- and out-degrees.
fn star_components_positive(delta: &DependencyDigraph, star: Option<&Star>) -> (bool, String) {
    let Some(star) = star else {
        return (true, "no star with 2+ leaves".into());
    };
    let comps = delta.weak_components();
    for comp in &comps {
        if !comp.iter().any(|&i| delta.edge(i).contains(star.center)) {
            continue;
        }
        if let Some(&i) = comp.iter().find(|&&i| delta.in_degree(i) == 0 || delta.out_degree(i) == 0) {
            return (false, format!("{} has Δ-degrees ({}, {})", delta.edge(i), delta.out_degree(i), delta.in_degree(i)));
        }
    }
    (true, format!("star center {}", star.center))
}

/// Center choices: stars with two or more leaves are fixed; a single edge may use either endpoint.
/// The canonical choice (smaller endpoint) comes first; at most the first ten single edges are flipped.
pub(crate) fn center_assignments(dec: &StarDecomposition) -> Vec<Vec<Star>> {
    let flippable = dec.matching.len().min(10);
    (0..1u32 << flippable)
        .map(|mask| {
            let mut stars = dec.stars.clone();
            for (i, e) in dec.matching.iter().enumerate() {
                let flip = i < flippable && mask >> i & 1 == 1;
                let (c, l) = if flip { (e.hi(), e.lo()) } else { (e.lo(), e.hi()) };
                stars.push(Star { center: c, leaves: VertexSet::singleton(l) });
            }
            stars.sort_by_key(|s| s.center);
            stars
        })
        .collect()
}

/// A center choice whose centers induce a tournament of kings (vacuous for one center).
pub(crate) fn kings_assignment(d: &Digraph, dec: &StarDecomposition) -> Option<Vec<Star>> {
    center_assignments(dec).into_iter().find(|stars| centers_all_kings(d, stars))
}

pub(crate) fn centers_all_kings(d: &Digraph, stars: &[Star]) -> bool {
    if stars.len() <= 1 {
        return true;
    }
    let (t, _) = d.induced(centers(stars)).expect("centers lie in the digraph");
    all_kings(&t).unwrap_or(false)
}

/// Center choices of a three-star digraph whose centers form a directed triangle `x -> y -> z -> x`.
pub(crate) fn triangle_assignments(d: &Digraph, dec: &StarDecomposition) -> Vec<(Vec<Star>, (usize, usize, usize))> {
    center_assignments(dec)
        .into_iter()
        .filter_map(|stars| {
            if stars.len() != 3 {
                return None;
            }
            let x = stars[0].center;
            let (p, q) = (stars[1].center, stars[2].center);
            let (y, z) = if d.has_arc(x, p) { (p, q) } else { (q, p) };
            let cyclic = d.has_arc(x, y) && d.has_arc(y, z) && d.has_arc(z, x);
            cyclic.then_some((stars, (x, y, z)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forge::fixture;

    fn applicable(d: &Digraph) -> Vec<TheoremId> {
        check_hypotheses(d).into_iter().filter(|r| r.applicable).map(|r| r.theorem).collect()
    }

    #[test]
    fn fixture_applicability() {
        let c4x = applicable(&fixture("C4X").unwrap());
        assert!(c4x.contains(&TheoremId::StarMatching));
        assert!(c4x.contains(&TheoremId::MatchingTwo));
        assert!(!c4x.contains(&TheoremId::SingleStar));
        assert!(!c4x.contains(&TheoremId::ThreeStars));
        assert!(applicable(&fixture("ST1").unwrap()).contains(&TheoremId::SingleStar));
        let c3 = applicable(&fixture("C3").unwrap());
        assert!(c3.contains(&TheoremId::HavetThomasse));
        assert!(c3.contains(&TheoremId::KingsStars));
    }

    #[test]
    fn sink_gate() {
        let lc3 = fixture("LC3").unwrap();
        let d = Digraph::new(7, lc3.arcs().chain((0..6).map(|v| (v, 6)))).unwrap();
        let checks = hypotheses(TheoremId::MatchingTwo, &d);
        assert!(checks[..checks.len() - 1].iter().all(|c| c.passed));
        let last = checks.last().unwrap();
        assert_eq!((last.clause.as_str(), last.passed), ("no-sink", false));
        assert!(passes(TheoremId::MatchingTwo, &lc3));
    }

    #[test]
    fn flips_single_edges() {
        let dec = decompose(&fixture("C4X").unwrap()).unwrap();
        let all = center_assignments(&dec);
        assert_eq!(all.len(), 4);
        assert_eq!(centers(&all[0]), [0, 1].into_iter().collect());
    }
}
