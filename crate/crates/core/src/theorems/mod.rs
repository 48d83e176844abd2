//! Second-neighborhood oracle and one witness procedure per theorem family.
//!
//! Every procedure checks its hypotheses first, follows the constructive
//! argument (completions, median orders, sedimentation) and re-checks each
//! witness with the brute-force oracle before returning a certificate.

mod assembly;
mod gates;
mod kings;
mod lemmas;
mod oracle;
mod single_star;
mod star_matching;
mod three_stars;
mod tournament;
mod two_stars;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digraph::{Digraph, GraphError, VertexSet, Weighting};
use crate::missing::MissingError;
use crate::order::{exact_median_order, forward_weight, LinearOrder, OrderError, Tiebreak};

pub(crate) use gates::hypotheses;
pub use gates::{check_hypotheses, HypothesisCheck, HypothesisReport};
pub use lemmas::{cycle_in, lemma6, lemma6_holds, lemma7, lemma7_holds, lemma8, lemma8_holds, losing_cycles, LosingCycle};
pub use oracle::{all_kings, has_snp, has_weighted_snp, is_king, snp_set, verdict, weighted_snp_set, OracleVerdict};
pub use star_matching::{build_f, FArc};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum TheoremId {
    HavetThomasse,
    KingsStars,
    StarMatching,
    MatchingTwo,
    SingleStar,
    TwoStars,
    TwoStarsTwo,
    ThreeStars,
    ThreeStarsTwo,
}

impl TheoremId {
    pub const ALL: [TheoremId; 9] = [
        TheoremId::HavetThomasse,
        TheoremId::KingsStars,
        TheoremId::StarMatching,
        TheoremId::MatchingTwo,
        TheoremId::SingleStar,
        TheoremId::TwoStars,
        TheoremId::TwoStarsTwo,
        TheoremId::ThreeStars,
        TheoremId::ThreeStarsTwo,
    ];

    /// Families with a filtered instance generator.
    pub const FAMILIES: [TheoremId; 8] = [
        TheoremId::KingsStars,
        TheoremId::StarMatching,
        TheoremId::MatchingTwo,
        TheoremId::SingleStar,
        TheoremId::TwoStars,
        TheoremId::TwoStarsTwo,
        TheoremId::ThreeStars,
        TheoremId::ThreeStarsTwo,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::HavetThomasse => "havet-thomasse",
            TheoremId::KingsStars => "kings-stars",
            TheoremId::StarMatching => "star+matching",
            TheoremId::MatchingTwo => "matching-F-empty-no-sink",
            TheoremId::SingleStar => "single-star",
            TheoremId::TwoStars => "two-stars",
            TheoremId::TwoStarsTwo => "two-stars-two",
            TheoremId::ThreeStars => "three-stars",
            TheoremId::ThreeStarsTwo => "three-stars-two",
        }
    }

    /// Whether the procedure promises two distinct witnesses.
    pub fn two_witness(self) -> bool {
        matches!(self, TheoremId::MatchingTwo | TheoremId::TwoStarsTwo | TheoremId::ThreeStarsTwo)
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown theorem id {0:?}")]
pub struct UnknownTheorem(pub String);

impl FromStr for TheoremId {
    type Err = UnknownTheorem;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let id = match s.trim() {
            "havet-thomasse" | "tournament" => TheoremId::HavetThomasse,
            "kings-stars" => TheoremId::KingsStars,
            "star+matching" | "star-matching" => TheoremId::StarMatching,
            "matching-F-empty-no-sink" | "matching-f-empty-no-sink" | "matching-two" => TheoremId::MatchingTwo,
            "single-star" => TheoremId::SingleStar,
            "two-stars" => TheoremId::TwoStars,
            "two-stars-two" => TheoremId::TwoStarsTwo,
            "three-stars" => TheoremId::ThreeStars,
            "three-stars-two" => TheoremId::ThreeStarsTwo,
            other => return Err(UnknownTheorem(other.to_string())),
        };
        Ok(id)
    }
}

impl From<TheoremId> for String {
    fn from(id: TheoremId) -> String {
        id.as_str().to_string()
    }
}

impl TryFrom<String> for TheoremId {
    type Error = UnknownTheorem;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoremError {
    #[error("{theorem}: hypothesis {clause:?} fails")]
    HypothesisFailed { theorem: TheoremId, clause: String },
    #[error("not a tournament")]
    NotTournament,
    #[error("{n} vertices exceed the exact solver cap of {cap}")]
    ExceedsExactCap { n: usize, cap: usize },
    #[error("{theorem}: witness {} fails the oracle (d⁺={}, d⁺⁺={})", verdict.vertex, verdict.out_degree, verdict.second_out_degree)]
    WitnessRejected { theorem: TheoremId, verdict: OracleVerdict },
    #[error("{theorem}: expected a good digraph, K(ξ) = {set} is not an interval")]
    GoodnessViolation { theorem: TheoremId, set: VertexSet },
    #[error("{theorem}: {detail}")]
    Inconsistent { theorem: TheoremId, detail: String },
    #[error(transparent)]
    Order(OrderError),
    #[error(transparent)]
    Missing(#[from] MissingError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl From<OrderError> for TheoremError {
    fn from(e: OrderError) -> Self {
        match e {
            OrderError::ExceedsExactCap { n, cap } => TheoremError::ExceedsExactCap { n, cap },
            other => TheoremError::Order(other),
        }
    }
}

impl TheoremError {
    /// A gate rejection rather than a failure of the construction.
    pub fn is_gate(&self) -> bool {
        matches!(self, TheoremError::HypothesisFailed { .. } | TheoremError::NotTournament)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "kebab-case")]
pub enum TraceEvent {
    Order { label: String, order: Vec<usize> },
    Case { label: String },
    Check { label: String, ok: bool },
    Note { text: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnpCertificate {
    pub theorem: TheoremId,
    pub hypotheses: Vec<HypothesisCheck>,
    pub witnesses: Vec<usize>,
    pub verdicts: Vec<OracleVerdict>,
    pub trace: Vec<TraceEvent>,
    /// Consistency checks that failed; the witnesses are still oracle-verified.
    pub findings: Vec<String>,
    pub notes: Vec<String>,
}

impl SnpCertificate {
    pub fn witness_set(&self) -> VertexSet {
        self.witnesses.iter().copied().collect()
    }

    pub fn case_labels(&self) -> impl Iterator<Item = &str> {
        self.trace.iter().filter_map(|e| match e {
            TraceEvent::Case { label } => Some(label.as_str()),
            _ => None,
        })
    }
}

/// Builder shared by the procedures.
pub(crate) struct Run {
    pub theorem: TheoremId,
    pub cap: usize,
    pub hypotheses: Vec<HypothesisCheck>,
    pub trace: Vec<TraceEvent>,
    pub findings: Vec<String>,
    pub notes: Vec<String>,
    /// Prepended to trace labels while working inside a sub-instance.
    pub prefix: String,
}

impl Run {
    pub fn new(theorem: TheoremId, cap: usize) -> Self {
        Run {
            theorem,
            cap,
            hypotheses: Vec::new(),
            trace: Vec::new(),
            findings: Vec::new(),
            notes: Vec::new(),
            prefix: String::new(),
        }
    }

    fn label(&self, label: impl Into<String>) -> String {
        format!("{}{}", self.prefix, label.into())
    }

    pub fn case(&mut self, label: impl Into<String>) {
        let label = self.label(label);
        self.trace.push(TraceEvent::Case { label });
    }

    pub fn order(&mut self, label: impl Into<String>, order: &[usize]) {
        let label = self.label(label);
        self.trace.push(TraceEvent::Order { label, order: order.to_vec() });
    }

    pub fn note(&mut self, text: impl Into<String>) {
        let text = self.label(text);
        self.trace.push(TraceEvent::Note { text });
    }

    /// Records a consistency check; a failure becomes a finding.
    pub fn check(&mut self, label: impl Into<String>, ok: bool) -> bool {
        let label = self.label(label);
        if !ok {
            self.findings.push(label.clone());
        }
        self.trace.push(TraceEvent::Check { label, ok });
        ok
    }

    pub fn inconsistent(&self, detail: impl Into<String>) -> TheoremError {
        TheoremError::Inconsistent { theorem: self.theorem, detail: detail.into() }
    }

    /// Runs the gate and keeps its report; fails on the first false clause.
    pub fn gate(&mut self, checks: Vec<HypothesisCheck>) -> Result<(), TheoremError> {
        let failed = checks.iter().find(|c| !c.passed).map(|c| c.clause.clone());
        self.hypotheses = checks;
        match failed {
            Some(clause) => Err(TheoremError::HypothesisFailed { theorem: self.theorem, clause }),
            None => Ok(()),
        }
    }

    /// Oracle-checks the witnesses in `d`.
    pub fn finish(self, d: &Digraph, witnesses: Vec<usize>) -> Result<SnpCertificate, TheoremError> {
        let mut unique = Vec::new();
        for w in witnesses {
            if !unique.contains(&w) {
                unique.push(w);
            }
        }
        if unique.is_empty() {
            return Err(self.inconsistent("no witness produced"));
        }
        if self.theorem.two_witness() && unique.len() < 2 {
            return Err(self.inconsistent(format!("only one distinct witness {}", unique[0])));
        }
        let verdicts: Vec<OracleVerdict> = unique.iter().map(|&w| verdict(d, w)).collect();
        if let Some(v) = verdicts.iter().find(|v| !v.has_snp) {
            return Err(TheoremError::WitnessRejected { theorem: self.theorem, verdict: *v });
        }
        Ok(SnpCertificate {
            theorem: self.theorem,
            hypotheses: self.hypotheses,
            witnesses: unique,
            verdicts,
            trace: self.trace,
            findings: self.findings,
            notes: self.notes,
        })
    }
}

/// Whether `order` reaches the optimum forward weight of `d` (unit weights).
pub(crate) fn is_median(d: &Digraph, order: &[usize], cap: usize) -> Result<bool, TheoremError> {
    let w = Weighting::unit(d.n());
    let best = exact_median_order(d, &w, &Tiebreak::None, cap)?.value;
    let here = forward_weight(d, &w, &LinearOrder::new(d.n(), order.to_vec())?)?;
    Ok(here == best)
}

pub(crate) fn check_cap(n: usize, cap: usize) -> Result<(), TheoremError> {
    if n > cap {
        Err(TheoremError::ExceedsExactCap { n, cap })
    } else {
        Ok(())
    }
}

pub use kings::kings_stars_witness;
pub use single_star::single_star_witness;
pub use star_matching::{matching_two_witnesses, star_matching_witness};
pub use three_stars::{three_stars_two_witnesses, three_stars_witness};
pub use tournament::havet_thomasse_witnesses;
pub use two_stars::{two_stars_two_witnesses, two_stars_witness};

/// All hypotheses of `theorem` hold on `d`.
pub fn gates_pass(theorem: TheoremId, d: &Digraph) -> bool {
    gates::passes(theorem, d)
}

/// All hypotheses hold except possibly `clause`.
pub fn gates_pass_except(theorem: TheoremId, d: &Digraph, clause: &str) -> bool {
    gates::hypotheses(theorem, d).iter().all(|c| c.passed || c.clause == clause)
}

/// Runs the procedure of `theorem` on `d` with exact orders up to `cap` items.
pub fn certify(theorem: TheoremId, d: &Digraph, cap: usize) -> Result<SnpCertificate, TheoremError> {
    match theorem {
        TheoremId::HavetThomasse => havet_thomasse_witnesses(d, cap),
        TheoremId::KingsStars => kings_stars_witness(d, cap),
        TheoremId::StarMatching => star_matching_witness(d, cap),
        TheoremId::MatchingTwo => matching_two_witnesses(d, cap),
        TheoremId::SingleStar => single_star_witness(d, cap),
        TheoremId::TwoStars => two_stars_witness(d, cap),
        TheoremId::TwoStarsTwo => two_stars_two_witnesses(d, cap),
        TheoremId::ThreeStars => three_stars_witness(d, cap),
        TheoremId::ThreeStarsTwo => three_stars_two_witnesses(d, cap),
    }
}
