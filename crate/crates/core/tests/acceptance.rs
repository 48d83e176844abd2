//! The nine acceptance criteria. Each prints one PASS or FAIL line; the run fails if any does.

use std::time::Instant;

use snc_core::digraph::{Digraph, Weighting};
use snc_core::order::{exact_median_order, sediment, LinearOrder, SedimentOutcome, Tiebreak, DEFAULT_EXACT_CAP};
use snc_core::sweep::{self, SweepReport};
use snc_core::theorems::{havet_thomasse_witnesses, TheoremId};

/// Adjacency-matrix oracle: `(d⁺(v), d⁺⁺(v))` from the arc list alone.
fn degrees(d: &Digraph, v: usize) -> (usize, usize) {
    let n = d.n();
    let mut adj = vec![vec![false; n]; n];
    for (a, b) in d.arcs() {
        adj[a][b] = true;
    }
    let out: Vec<usize> = (0..n).filter(|&u| adj[v][u]).collect();
    let second = (0..n).filter(|&u| u != v && !adj[v][u] && out.iter().any(|&w| adj[w][u])).count();
    (out.len(), second)
}

fn snp(d: &Digraph, v: usize) -> bool {
    let (p, pp) = degrees(d, v);
    p <= pp
}

fn tournament(n: usize, mask: u64) -> Digraph {
    let mut arcs = Vec::new();
    let mut i = 0;
    for u in 0..n {
        for v in u + 1..n {
            arcs.push(if mask >> i & 1 == 0 { (u, v) } else { (v, u) });
            i += 1;
        }
    }
    Digraph::new(n, arcs).unwrap()
}

fn verdict(id: u8, ok: bool, detail: String) {
    println!("{} criterion {id}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {id}: {detail}");
}

fn sweep_detail(r: &SweepReport) -> String {
    let mut s = format!(
        "{} checked {} of {} generated, {} failures, {} findings",
        r.name,
        r.checked,
        r.generated,
        r.failures.len(),
        r.findings.len()
    );
    if let Some(f) = r.failures.first() {
        s.push_str(&format!("; first failure: {} on\n{}", f.detail, f.instance));
    }
    s
}

fn criterion_1_feed_of_median_order_has_snp() {
    let start = Instant::now();
    let mut violations = 0;
    for mask in 0..1u64 << 15 {
        let t = tournament(6, mask);
        let m = exact_median_order(&t, &Weighting::unit(6), &Tiebreak::None, DEFAULT_EXACT_CAP).unwrap();
        if !snp(&t, m.order.feed().unwrap()) {
            violations += 1;
        }
    }
    let elapsed = start.elapsed();
    verdict(
        1,
        violations == 0 && elapsed.as_secs() < 300,
        format!("32768 tournaments on 6 vertices, {violations} feed violations, {elapsed:.1?}"),
    );
}

fn criterion_2_sinkless_tournaments_have_two_witnesses() {
    let mut checked = 0;
    let mut failures = Vec::new();
    for n in 1..=6 {
        for mask in 0..1u64 << (n * (n - 1) / 2) {
            let t = tournament(n, mask);
            if (0..n).any(|v| degrees(&t, v).0 == 0) {
                continue;
            }
            checked += 1;
            match havet_thomasse_witnesses(&t, DEFAULT_EXACT_CAP) {
                Ok(cert) => {
                    let mut w = cert.witnesses.clone();
                    w.sort();
                    w.dedup();
                    if w.len() < 2 || w.len() != cert.witnesses.len() || !w.iter().all(|&v| snp(&t, v)) {
                        failures.push(format!("n={n} mask={mask}: {:?}", cert.witnesses));
                    }
                }
                Err(e) => failures.push(format!("n={n} mask={mask}: {e}")),
            }
        }
    }
    verdict(
        2,
        failures.is_empty() && checked > 0,
        format!("{checked} sinkless tournaments, {} failures {:?}", failures.len(), failures.first()),
    );
}

fn criterion_3_losing_cycle_gadgets() {
    let r = sweep::gadget_sweep(2..=8);
    verdict(3, r.passed() && r.checked == 7, sweep_detail(&r));
}

fn criterion_4_good_edges_are_convenient() {
    let r = sweep::good_edge_sweep(1000, 0x4_0000);
    let detail = format!("{}; {} good and {} losing edges", sweep_detail(&r), r.counter("good-edges"), r.counter("losing-edges"));
    verdict(4, r.passed() && r.checked == 1000, detail);
}

fn criterion_5_sedimentation_keeps_good_median_orders() {
    let c3 = snc_core::forge::fixture("C3").unwrap();
    let trace = sediment(&c3, &Weighting::unit(3), &LinearOrder::identity(3), None).unwrap();
    let c3_ok = matches!(trace.outcome, SedimentOutcome::Periodic { length: 3, .. });
    let r = sweep::sedimentation_sweep(6000, 0x5_0000);
    for f in r.findings.iter().take(3) {
        println!("FINDING criterion 5: {} on\n{}", f.detail, f.instance);
    }
    let positive = r.counter("positive-equality-steps");
    let detail = format!(
        "{}; {positive} with positive weights; {} stable, {} periodic; C3 outcome {:?}",
        sweep_detail(&r),
        r.counter("stable"),
        r.counter("periodic"),
        trace.outcome
    );
    verdict(5, r.passed() && r.checked >= 500 && positive >= 500 && c3_ok, detail);
}

fn criterion_6_strongly_connected_components_give_good_digraphs() {
    let r = sweep::lemma3_sweep(600, 0x6_0000);
    verdict(6, r.passed() && r.findings.is_empty() && r.checked >= 100, sweep_detail(&r));
}

fn criterion_7_theorem_procedures() {
    let start = Instant::now();
    let mut ok = true;
    let mut lines = Vec::new();
    for (i, &t) in TheoremId::FAMILIES.iter().enumerate() {
        let r = sweep::theorem_sweep(t, 120, 14, 0x7_0000 + 97 * i as u64, 1500, 30);
        ok &= r.passed() && r.checked >= 100;
        lines.push(sweep_detail(&r));
    }
    let elapsed = start.elapsed();
    ok &= elapsed.as_secs() < 1800;
    verdict(7, ok, format!("{elapsed:.1?}\n  {}", lines.join("\n  ")));
}

fn criterion_8_oracle_sanity() {
    let small = sweep::oracle_exhaustive(4);
    let large = sweep::oracle_random(7, 100_000, 0x8_0000);
    for f in small.findings.iter().chain(&large.findings) {
        println!("FINDING criterion 8: {} on\n{}", f.detail, f.instance);
    }
    let ok = small.checked == 729 && large.checked == 100_000 && small.findings.is_empty() && large.findings.is_empty();
    verdict(8, ok, format!("{}; {}", sweep_detail(&small), sweep_detail(&large)));
}

fn criterion_9_feedback_property() {
    let r = sweep::feedback_sweep(1000, 0x9_0000);
    verdict(9, r.passed() && r.checked == 1000, sweep_detail(&r));
}

fn main() {
    let criteria: [(u8, fn()); 9] = [
        (1, criterion_1_feed_of_median_order_has_snp),
        (2, criterion_2_sinkless_tournaments_have_two_witnesses),
        (3, criterion_3_losing_cycle_gadgets),
        (4, criterion_4_good_edges_are_convenient),
        (5, criterion_5_sedimentation_keeps_good_median_orders),
        (6, criterion_6_strongly_connected_components_give_good_digraphs),
        (7, criterion_7_theorem_procedures),
        (8, criterion_8_oracle_sanity),
        (9, criterion_9_feedback_property),
    ];
    let only: Vec<u8> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (id, f) in criteria {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        if let Err(e) = std::panic::catch_unwind(f) {
            failed += 1;
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            if !msg.as_deref().is_some_and(|m| m.starts_with("criterion ")) {
                println!("FAIL criterion {id}: panicked: {}", msg.unwrap_or_default());
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
