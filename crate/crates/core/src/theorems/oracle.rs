//! Brute-force second-neighborhood and king checks.

use serde::{Deserialize, Serialize};

use crate::digraph::{Digraph, VertexSet, Weighting};

use super::TheoremError;

pub fn has_snp(d: &Digraph, v: usize) -> bool {
    d.out_degree(v) <= d.second_out_set(v).len()
}

pub fn snp_set(d: &Digraph) -> VertexSet {
    (0..d.n()).filter(|&v| has_snp(d, v)).collect()
}

pub fn has_weighted_snp(d: &Digraph, w: &Weighting, v: usize) -> bool {
    w.of(d.out_set(v)) <= w.of(d.second_out_set(v))
}

pub fn weighted_snp_set(d: &Digraph, w: &Weighting) -> VertexSet {
    (0..d.n()).filter(|&v| has_weighted_snp(d, w, v)).collect()
}

/// `d⁺` and `d⁺⁺` of a vertex as evidence for a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleVerdict {
    pub vertex: usize,
    pub out_degree: usize,
    pub second_out_degree: usize,
    pub has_snp: bool,
}

pub fn verdict(d: &Digraph, v: usize) -> OracleVerdict {
    let (p, pp) = (d.out_degree(v), d.second_out_set(v).len());
    OracleVerdict { vertex: v, out_degree: p, second_out_degree: pp, has_snp: p <= pp }
}

fn require_tournament(t: &Digraph) -> Result<(), TheoremError> {
    if t.is_tournament() {
        Ok(())
    } else {
        Err(TheoremError::NotTournament)
    }
}

/// `{v} ∪ N⁺(v) ∪ N⁺⁺(v)` covers the tournament.
pub fn is_king(t: &Digraph, v: usize) -> Result<bool, TheoremError> {
    require_tournament(t)?;
    t.check_vertex(v)?;
    Ok(t.reach2(v).union(VertexSet::singleton(v)) == t.vertices())
}

pub fn all_kings(t: &Digraph) -> Result<bool, TheoremError> {
    require_tournament(t)?;
    Ok((0..t.n()).all(|v| t.reach2(v).union(VertexSet::singleton(v)) == t.vertices()))
}
