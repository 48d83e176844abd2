//! Batch runs over enumerated or seeded instances.
//!
//! Each sweep evaluates its instances in parallel and folds the results in
//! instance order, so reports do not depend on scheduling.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dependency::{lemma3_check, ComponentIndex, DependencyDigraph};
use crate::digraph::{Digraph, Weight, Weighting};
use crate::forge::{extend, filtered_search, losing_cycle_gadget, random_digraph, rng, star_deleted};
use crate::format::emit_instance;
use crate::missing::{convenient_orientations, decompose};
use crate::order::{
    exact_median_order, forward_weight, good_median_order_with, local_median_order, satisfies_feedback, sediment, Exactness,
    LinearOrder, SedCase, SedimentOutcome, Tiebreak, DEFAULT_EXACT_CAP,
};
use crate::theorems::{certify, cycle_in, has_snp, havet_thomasse_witnesses, lemma6, lemma7, lemma8, snp_set, TheoremId};

/// One flagged instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Flagged {
    /// Instance in the text format, with weights when the sweep used them.
    pub instance: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub name: String,
    /// Instances that met the sweep's precondition and were checked.
    pub checked: u64,
    /// Candidates generated, including those skipped.
    pub generated: u64,
    pub failures: Vec<Flagged>,
    /// Outcomes worth reporting that do not count as failures.
    pub findings: Vec<Flagged>,
    pub counters: BTreeMap<String, u64>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn counter(&self, key: &str) -> u64 {
        self.counters.get(key).copied().unwrap_or(0)
    }
}

/// Result of one instance.
#[derive(Debug, Default)]
struct Case {
    checked: bool,
    failures: Vec<String>,
    findings: Vec<String>,
    tags: Vec<String>,
    instance: String,
}

impl Case {
    fn on(d: &Digraph, w: Option<&Weighting>) -> Self {
        Case { checked: true, instance: emit_instance(d, w), ..Case::default() }
    }

    fn skipped() -> Self {
        Case::default()
    }

    fn fail(&mut self, detail: impl Into<String>) {
        self.failures.push(detail.into());
    }

    fn expect(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        if !ok {
            self.fail(detail());
        }
    }

    fn tag(&mut self, tag: impl Into<String>) {
        self.tags.push(tag.into());
    }
}

fn collect(name: &str, cases: Vec<Case>) -> SweepReport {
    let mut report = SweepReport {
        name: name.to_string(),
        checked: 0,
        generated: cases.len() as u64,
        failures: Vec::new(),
        findings: Vec::new(),
        counters: BTreeMap::new(),
    };
    for case in cases {
        report.checked += case.checked as u64;
        for tag in case.tags {
            *report.counters.entry(tag).or_insert(0) += 1;
        }
        for detail in case.failures {
            report.failures.push(Flagged { instance: case.instance.clone(), detail });
        }
        for detail in case.findings {
            report.findings.push(Flagged { instance: case.instance.clone(), detail });
        }
    }
    report
}

fn run<F>(name: &str, count: u64, f: F) -> SweepReport
where
    F: Fn(u64) -> Case + Sync + Send,
{
    let cases: Vec<Case> = (0..count).into_par_iter().map(f).collect();
    collect(name, cases)
}

/// The labeled tournament on `n` vertices whose pair `{u, v}` (`u < v`, lexicographic rank `i`)
/// is oriented `u -> v` when bit `i` of `mask` is clear.
pub fn tournament_from_mask(n: usize, mask: u64) -> Digraph {
    let mut arcs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    let mut i = 0;
    for u in 0..n {
        for v in u + 1..n {
            arcs.push(if mask >> i & 1 == 0 { (u, v) } else { (v, u) });
            i += 1;
        }
    }
    Digraph::new(n, arcs).expect("one arc per pair")
}

/// The digon-free digraph on `n` vertices whose pair of rank `i` is digit `i` of `code`
/// in base 3: absent, forward or backward.
pub fn digraph_from_code(n: usize, mut code: u64) -> Digraph {
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            match code % 3 {
                1 => arcs.push((u, v)),
                2 => arcs.push((v, u)),
                _ => {}
            }
            code /= 3;
        }
    }
    Digraph::new(n, arcs).expect("at most one arc per pair")
}

fn pairs(n: usize) -> u32 {
    (n * n.saturating_sub(1) / 2) as u32
}

/// Every labeled tournament on `n` vertices: the feed of an exact median order has the SNP.
pub fn feed_sweep(n: usize) -> SweepReport {
    run(&format!("tournaments-n{n}"), 1u64 << pairs(n), |mask| {
        let t = tournament_from_mask(n, mask);
        let mut case = Case::on(&t, None);
        match exact_median_order(&t, &Weighting::unit(n), &Tiebreak::None, DEFAULT_EXACT_CAP) {
            Ok(m) => {
                let f = m.order.feed().expect("nonempty");
                let (p, pp) = (t.out_degree(f), t.second_out_set(f).len());
                case.expect(p <= pp && has_snp(&t, f), || format!("feed {f} of {}: d⁺ = {p}, d⁺⁺ = {pp}", m.order));
            }
            Err(e) => case.fail(e.to_string()),
        }
        case
    })
}

/// Every labeled sinkless tournament on `2..=max_n` vertices yields two distinct verified witnesses.
pub fn two_witness_sweep(max_n: usize) -> SweepReport {
    let mut cases = Vec::new();
    for n in 2..=max_n {
        let part: Vec<Case> = (0..1u64 << pairs(n))
            .into_par_iter()
            .map(|mask| {
                let t = tournament_from_mask(n, mask);
                if t.has_sink() {
                    return Case::skipped();
                }
                let mut case = Case::on(&t, None);
                case.tag(format!("n={n}"));
                match havet_thomasse_witnesses(&t, DEFAULT_EXACT_CAP) {
                    Ok(cert) => {
                        let w = cert.witness_set();
                        case.expect(w.len() >= 2, || format!("witnesses {:?}", cert.witnesses));
                        case.expect(w.iter().all(|v| has_snp(&t, v)), || format!("unverified witnesses {w}"));
                        case.findings.extend(cert.findings);
                    }
                    Err(e) => case.fail(e.to_string()),
                }
                case
            })
            .collect();
        cases.extend(part);
    }
    collect(&format!("two-witness-n{max_n}"), cases)
}

/// Losing-cycle gadgets for `k` in `ks`: the lemma shapes, degrees and a `k`-cycle Δ.
pub fn gadget_sweep(ks: impl IntoIterator<Item = usize>) -> SweepReport {
    let cases = ks
        .into_iter()
        .map(|k| {
            let d = match losing_cycle_gadget(k) {
                Ok(d) => d,
                Err(e) => {
                    let mut case = Case { checked: true, instance: format!("# gadget k={k}\n"), ..Case::default() };
                    case.fail(e.to_string());
                    return case;
                }
            };
            let mut case = Case::on(&d, None);
            case.tag(format!("k={k}"));
            let delta = DependencyDigraph::build(&d);
            let mut arcs: Vec<(usize, usize)> = delta.arcs().iter().map(|a| (a.from, a.to)).collect();
            arcs.sort();
            let cyclic = delta.len() == k
                && arcs.len() == k
                && (0..k).all(|i| delta.out_degree(i) == 1 && delta.in_degree(i) == 1)
                && delta.strong_components().len() == 1;
            case.expect(cyclic, || format!("Δ arcs {arcs:?} are not a {k}-cycle"));
            match cycle_in(&d, d.vertices()) {
                Some(c) => {
                    for (name, r) in [("lemma 6", lemma6(&d, &c)), ("lemma 7", lemma7(&d, &c)), ("lemma 8", lemma8(&d, &c))] {
                        if let Err(e) = r {
                            case.fail(format!("{name}: {e}"));
                        }
                    }
                }
                None => case.fail("no losing cycle spans the gadget"),
            }
            case
        })
        .collect();
    collect("gadgets", cases)
}

fn leaf_shape(n: usize, r: &mut impl Rng) -> Vec<usize> {
    let mut counts = Vec::new();
    let mut used = 0;
    loop {
        let c = r.gen_range(1..=3);
        if used + c + 1 > n || counts.len() >= 4 {
            break;
        }
        used += c + 1;
        counts.push(c);
        if r.gen_bool(0.3) {
            break;
        }
    }
    counts
}

/// Seeded star-deleted tournaments: a missing edge has Δ-in-degree 0 exactly when it has a convenient orientation.
pub fn good_edge_sweep(count: u64, seed: u64) -> SweepReport {
    run("good-edges", count, |i| {
        let mut r = rng(seed.wrapping_add(i));
        let n = r.gen_range(4..=12);
        let counts = leaf_shape(n, &mut r);
        let d = match star_deleted(n, &counts, r.gen()) {
            Ok(d) => d,
            Err(e) => {
                let mut case = Case::on(&Digraph::empty(n).expect("small"), None);
                case.fail(e.to_string());
                return case;
            }
        };
        let mut case = Case::on(&d, None);
        let delta = DependencyDigraph::build(&d);
        for (idx, &e) in delta.edges().iter().enumerate() {
            let orientations = convenient_orientations(&d, e).expect("edge is missing");
            let good = delta.in_degree(idx) == 0;
            case.tag(if good { "good-edges" } else { "losing-edges" });
            case.expect(good == !orientations.is_empty(), || {
                format!("edge {e}: Δ-in-degree {}, convenient orientations {orientations:?}", delta.in_degree(idx))
            });
        }
        case
    })
}

const WEIGHTS: [(i64, i64); 6] = [(0, 1), (1, 2), (1, 1), (3, 2), (2, 1), (5, 3)];

fn random_weights(n: usize, r: &mut impl Rng) -> Weighting {
    Weighting::new(
        (0..n)
            .map(|_| {
                let (p, q) = *WEIGHTS.choose(r).expect("nonempty");
                Weight::new(p, q)
            })
            .collect(),
    )
    .expect("nonnegative")
}

/// Weighted good digraphs: every equality step of the sedimentation of a good median order
/// keeps the optimum weight and keeps each block contiguous.
pub fn sedimentation_sweep(count: u64, seed: u64) -> SweepReport {
    run("lemma2-sedimentation", count, |i| {
        let mut r = rng(seed.wrapping_add(i));
        let n = r.gen_range(3..=9);
        let d = random_digraph(n, r.gen(), r.gen_range(0.6..=1.0));
        let index = ComponentIndex::build(&d);
        let blocks = index.blocks(n);
        let good = index.xi_sets.iter().all(|&k| d.is_interval(k).expect("in range"));
        if !good {
            return Case::skipped();
        }
        let w = random_weights(n, &mut r);
        let tiebreak = if r.gen_bool(0.5) { Tiebreak::MaxIndex(r.gen_range(0..n)) } else { Tiebreak::None };
        let mut case = Case::on(&d, Some(&w));
        let optimum = exact_median_order(&d, &w, &Tiebreak::None, DEFAULT_EXACT_CAP).expect("n ≤ 9").value;
        let start = good_median_order_with(&d, &w, Exactness::Exact, &tiebreak, DEFAULT_EXACT_CAP).expect("good digraph");
        case.expect(start.value == optimum, || format!("good median order {} weighs {} < {optimum}", start.order, start.value));
        let trace = sediment(&d, &w, &start.order, None).expect("valid order");
        // A weight-0 vertex can sit anywhere in a median order, so the feedback property
        // and the Lemma 1 inequality may fail; those outcomes are findings, not failures.
        let positive = w.as_slice().iter().all(|x| *x > Weight::from_integer(0));
        let mut equalities = 0;
        for step in &trace.steps {
            if step.case != SedCase::Equality {
                continue;
            }
            equalities += 1;
            let next = LinearOrder::from_vec_unchecked(step.order.clone());
            let value = forward_weight(&d, &w, &next).expect("valid order");
            case.expect(value == optimum, || format!("Sed order {next} weighs {value}, optimum {optimum}"));
            case.expect(blocks.contiguous_in(&step.order), || format!("Sed order {next} splits a block"));
            if !step.feedback_ok {
                let detail = format!("Sed order {next} breaks the feedback property");
                if positive {
                    case.fail(detail);
                } else {
                    case.findings.push(format!("{detail} (zero weight)"));
                }
            }
        }
        if let SedimentOutcome::Invalid { q } = trace.outcome {
            let detail = format!("sedimentation hit a Lemma 1 violation at rank {q}");
            if positive {
                case.fail(detail);
            } else {
                case.findings.push(format!("{detail} (zero weight)"));
            }
        }
        if equalities == 0 {
            case.checked = false;
        } else {
            case.tag("equality-steps");
            if positive {
                case.tag("positive-equality-steps");
            }
            case.tag(match trace.outcome {
                SedimentOutcome::Stable { .. } => "stable",
                SedimentOutcome::Periodic { .. } => "periodic",
                SedimentOutcome::BudgetExceeded => "budget-exceeded",
                SedimentOutcome::Invalid { .. } => "invalid",
            });
        }
        case
    })
}

/// Disjoint-star digraphs whose Δ-components are all strongly connected with two or more
/// vertices are good. Candidates are extended gadgets with a few arcs reversed, and plain
/// star-deleted tournaments.
pub fn lemma3_sweep(count: u64, seed: u64) -> SweepReport {
    run("lemma3", count, |i| {
        let mut r = rng(seed.wrapping_add(i));
        let n = r.gen_range(4..=14);
        let d = if i % 4 == 3 {
            let counts = leaf_shape(n, &mut r);
            match star_deleted(n, &counts, r.gen()) {
                Ok(d) => d,
                Err(_) => return Case::skipped(),
            }
        } else {
            let k = r.gen_range(2..=(n / 2).min(7));
            let core = losing_cycle_gadget(k).expect("gadget");
            let mut d = extend(&core, n, &mut r);
            for _ in 0..r.gen_range(0..=3) {
                let arcs: Vec<(usize, usize)> = d.arcs().collect();
                let &(u, v) = arcs.choose(&mut r).expect("arcs exist");
                d = d.reoriented(v, u);
            }
            d
        };
        let Ok(report) = lemma3_check(&d) else {
            return Case::skipped();
        };
        if !report.hypothesis || decompose(&d).is_err() {
            return Case::skipped();
        }
        let mut case = Case::on(&d, None);
        case.tag(format!("components={}", DependencyDigraph::build(&d).weak_components().len()));
        if report.violated() {
            case.findings.push("Δ-components strongly connected but the digraph is not good".into());
            case.fail("lemma 3 violated");
        }
        case
    })
}

/// Hypothesis-filtered instances of one theorem family on `min_n..=max_n` vertices until
/// `target` are found or `max_rounds` searches ran; every returned witness is re-checked.
pub fn theorem_sweep(theorem: TheoremId, target: usize, max_n: usize, seed: u64, budget: u64, max_rounds: u64) -> SweepReport {
    let min_n = 4;
    let mut instances = Vec::new();
    let mut generated = 0;
    let mut round = 0;
    while instances.len() < target && round < max_rounds {
        let batch: Vec<_> = (min_n..=max_n)
            .into_par_iter()
            .map(|n| filtered_search(theorem, n, seed.wrapping_add(round * 1000 + n as u64), budget))
            .collect();
        for rep in batch {
            generated += rep.tried;
            instances.extend(rep.instances.into_iter().map(|d| (rep.n, d)));
        }
        round += 1;
    }
    instances.truncate(target);
    let cases: Vec<Case> = instances
        .par_iter()
        .map(|(n, d)| {
            let mut case = Case::on(d, None);
            case.tag(format!("n={n}"));
            match certify(theorem, d, DEFAULT_EXACT_CAP) {
                Ok(cert) => {
                    let w = cert.witness_set();
                    case.expect(!w.is_empty(), || "no witness".into());
                    case.expect(w.len() == cert.witnesses.len(), || format!("repeated witnesses {:?}", cert.witnesses));
                    if theorem.two_witness() {
                        case.expect(w.len() >= 2, || format!("one witness {:?}", cert.witnesses));
                    }
                    let snp = snp_set(d);
                    case.expect(w.is_subset(snp), || format!("witnesses {w} outside the SNP set {snp}"));
                    for label in cert.case_labels() {
                        case.tag(format!("case:{label}"));
                    }
                    case.findings.extend(cert.findings);
                }
                Err(e) if e.is_gate() => {
                    case.checked = false;
                    case.findings.push(format!("gate rejected a filtered instance: {e}"));
                }
                Err(e) => case.fail(e.to_string()),
            }
            case
        })
        .collect();
    let mut report = collect(&format!("theorem:{theorem}"), cases);
    report.generated = generated;
    report
}

/// Every digon-free digraph on `n` vertices has a vertex with the SNP. Empty SNP sets are findings.
pub fn oracle_exhaustive(n: usize) -> SweepReport {
    run(&format!("oracle-exhaustive-n{n}"), 3u64.pow(pairs(n)), |code| oracle_case(&digraph_from_code(n, code)))
}

/// Seeded digon-free digraphs on `n` vertices with random densities.
pub fn oracle_random(n: usize, count: u64, seed: u64) -> SweepReport {
    run(&format!("oracle-random-n{n}"), count, |i| {
        let mut r = rng(seed.wrapping_add(i));
        oracle_case(&random_digraph(n, r.gen(), r.gen_range(0.0..=1.0)))
    })
}

fn oracle_case(d: &Digraph) -> Case {
    let mut case = Case::on(d, None);
    let snp = snp_set(d);
    if snp.is_empty() {
        case.findings.push("no vertex has the second neighborhood property".into());
        case.tag("counterexamples");
    }
    case
}

/// Exact and locally repaired orders of seeded weighted digraphs satisfy the feedback property.
pub fn feedback_sweep(count: u64, seed: u64) -> SweepReport {
    run("feedback", count, |i| {
        let mut r = rng(seed.wrapping_add(i));
        let n = r.gen_range(2..=12);
        let d = random_digraph(n, r.gen(), r.gen_range(0.3..=1.0));
        let w = random_weights(n, &mut r);
        let mut case = Case::on(&d, Some(&w));
        let exact = exact_median_order(&d, &w, &Tiebreak::None, DEFAULT_EXACT_CAP).expect("n ≤ 12");
        case.expect(satisfies_feedback(&d, &w, &exact.order).expect("valid"), || format!("exact order {}", exact.order));
        let mut init: Vec<usize> = (0..n).collect();
        init.shuffle(&mut r);
        let local = local_median_order(&d, &w, &LinearOrder::from_vec_unchecked(init)).expect("valid");
        case.expect(satisfies_feedback(&d, &w, &local).expect("valid"), || format!("local order {local}"));
        let lw = forward_weight(&d, &w, &local).expect("valid");
        case.expect(lw <= exact.value, || format!("local order {local} beats the optimum"));
        case
    })
}
