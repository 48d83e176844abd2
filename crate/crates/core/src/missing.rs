//! Missing edges, their decomposition into disjoint stars and a matching,
//! and orientation plans that turn a digraph into one of its completions.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digraph::{Digraph, GraphError, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MissingError {
    #[error("missing graph is not a disjoint union of stars (component {0})")]
    NotDisjointStars(VertexSet),
    #[error("{0} is not a missing edge")]
    NotMissing(MissingEdge),
    #[error("a missing edge cannot be compared with itself ({0})")]
    IdenticalEdges(MissingEdge),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Unordered pair `{lo, hi}` with `lo < hi`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MissingEdge {
    lo: usize,
    hi: usize,
}

impl MissingEdge {
    pub fn new(u: usize, v: usize) -> Option<Self> {
        match u.cmp(&v) {
            std::cmp::Ordering::Less => Some(MissingEdge { lo: u, hi: v }),
            std::cmp::Ordering::Greater => Some(MissingEdge { lo: v, hi: u }),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn lo(self) -> usize {
        self.lo
    }

    pub fn hi(self) -> usize {
        self.hi
    }

    pub fn endpoints(self) -> VertexSet {
        [self.lo, self.hi].into_iter().collect()
    }

    pub fn contains(self, v: usize) -> bool {
        self.lo == v || self.hi == v
    }

    /// The endpoint that is not `v`.
    pub fn other(self, v: usize) -> usize {
        if self.lo == v {
            self.hi
        } else {
            self.lo
        }
    }

    /// Checked constructor against a host digraph.
    pub fn in_digraph(d: &Digraph, u: usize, v: usize) -> Result<Self, MissingError> {
        d.check_vertex(u)?;
        d.check_vertex(v)?;
        let e = MissingEdge::new(u, v).ok_or(GraphError::Loop(u))?;
        if d.adjacent(u, v) {
            return Err(MissingError::NotMissing(e));
        }
        Ok(e)
    }
}

impl fmt::Display for MissingEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}~{}", self.lo, self.hi)
    }
}

impl fmt::Debug for MissingEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A missing star with at least one leaf.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Star {
    pub center: usize,
    pub leaves: VertexSet,
}

impl Star {
    pub fn vertices(&self) -> VertexSet {
        self.leaves.union(VertexSet::singleton(self.center))
    }

    pub fn edges(&self) -> impl Iterator<Item = MissingEdge> + '_ {
        self.leaves.iter().map(|a| MissingEdge::new(a, self.center).expect("leaf differs from center"))
    }
}

/// Missing graph split into stars with two or more leaves and a matching
/// (the one-leaf components).
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct StarDecomposition {
    pub stars: Vec<Star>,
    pub matching: Vec<MissingEdge>,
}

impl StarDecomposition {
    /// Leaves of the i-th star.
    pub fn leaves(&self, i: usize) -> VertexSet {
        self.stars[i].leaves
    }

    /// All vertices touched by a missing edge.
    pub fn covered(&self) -> VertexSet {
        let stars = self.stars.iter().fold(VertexSet::EMPTY, |acc, s| acc.union(s.vertices()));
        self.matching.iter().fold(stars, |acc, e| acc.union(e.endpoints()))
    }

    pub fn edges(&self) -> Vec<MissingEdge> {
        let mut all: Vec<_> = self.stars.iter().flat_map(|s| s.edges().collect::<Vec<_>>()).collect();
        all.extend(self.matching.iter().copied());
        all.sort();
        all
    }

    pub fn is_empty(&self) -> bool {
        self.stars.is_empty() && self.matching.is_empty()
    }

    /// Every component as a star; a matching edge gets its smaller endpoint as center.
    pub fn as_stars(&self) -> Vec<Star> {
        let mut all = self.stars.clone();
        all.extend(self.matching.iter().map(|e| Star { center: e.lo(), leaves: VertexSet::singleton(e.hi()) }));
        all.sort_by_key(|s| s.center);
        all
    }

    pub fn component_count(&self) -> usize {
        self.stars.len() + self.matching.len()
    }
}

/// Split the missing graph of `d` into disjoint stars.
pub fn decompose(d: &Digraph) -> Result<StarDecomposition, MissingError> {
    let (_, non_whole) = d.missing_graph();
    let mut seen = VertexSet::EMPTY;
    let mut dec = StarDecomposition::default();
    for start in non_whole {
        if seen.contains(start) {
            continue;
        }
        let mut comp = VertexSet::singleton(start);
        let mut frontier = comp;
        while !frontier.is_empty() {
            let next = frontier.iter().fold(VertexSet::EMPTY, |acc, v| acc.union(d.non_neighbors(v))).difference(comp);
            comp = comp.union(next);
            frontier = next;
        }
        seen = seen.union(comp);
        let m = comp.len() - 1;
        let center = comp.iter().find(|&v| d.non_neighbors(v).len() == m);
        let edge_count: usize = comp.iter().map(|v| d.non_neighbors(v).len()).sum::<usize>() / 2;
        match center {
            Some(c) if edge_count == m => {
                if m == 1 {
                    let other = comp.difference(VertexSet::singleton(c)).first().expect("two vertices");
                    dec.matching.push(MissingEdge::new(c, other).expect("distinct"));
                } else {
                    dec.stars.push(Star { center: c, leaves: comp.difference(VertexSet::singleton(c)) });
                }
            }
            _ => return Err(MissingError::NotDisjointStars(comp)),
        }
    }
    dec.stars.sort_by_key(|s| s.center);
    dec.matching.sort();
    Ok(dec)
}

/// Where an orientation in a plan came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    TowardCenter,
    Convenient,
    PathF,
    Explicit,
}

/// One direction per missing edge.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OrientationPlan {
    arcs: BTreeMap<MissingEdge, (usize, usize, Provenance)>,
}

impl OrientationPlan {
    /// Plan from explicit `(tail, head)` pairs. Rejects an edge given twice.
    pub fn explicit<I>(arcs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut plan = OrientationPlan::default();
        for (t, h) in arcs {
            plan.insert(t, h, Provenance::Explicit)?;
        }
        Ok(plan)
    }

    pub fn insert(&mut self, tail: usize, head: usize, why: Provenance) -> Result<(), GraphError> {
        let e = MissingEdge::new(tail, head).ok_or(GraphError::Loop(tail))?;
        if self.arcs.contains_key(&e) {
            return Err(GraphError::PlanConflict(e));
        }
        self.arcs.insert(e, (tail, head, why));
        Ok(())
    }

    /// Set or replace the orientation of one edge.
    pub fn set(&mut self, tail: usize, head: usize, why: Provenance) {
        let e = MissingEdge::new(tail, head).expect("distinct endpoints");
        self.arcs.insert(e, (tail, head, why));
    }

    pub fn get(&self, e: MissingEdge) -> Option<(usize, usize)> {
        self.arcs.get(&e).map(|&(t, h, _)| (t, h))
    }

    pub fn provenance(&self, e: MissingEdge) -> Option<Provenance> {
        self.arcs.get(&e).map(|&(_, _, p)| p)
    }

    pub fn arcs(&self) -> impl Iterator<Item = (MissingEdge, (usize, usize))> + '_ {
        self.arcs.iter().map(|(&e, &(t, h, _))| (e, (t, h)))
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }
}

/// Every missing edge pointed at its star's center; matching edges at their smaller endpoint.
pub fn orient_toward_centers(dec: &StarDecomposition) -> OrientationPlan {
    let mut plan = OrientationPlan::default();
    for star in dec.as_stars() {
        for a in star.leaves {
            plan.set(a, star.center, Provenance::TowardCenter);
        }
    }
    plan
}

/// Whether `(a, b)` satisfies: every in-neighbor of `a` (other than `b`) reaches `b` within two steps.
pub fn is_convenient(d: &Digraph, a: usize, b: usize) -> bool {
    d.in_set(a).difference(VertexSet::singleton(b)).iter().all(|v| d.reach2(v).contains(b))
}

/// Convenient orientations of a missing edge, as `(tail, head)` pairs.
pub fn convenient_orientations(d: &Digraph, e: MissingEdge) -> Result<Vec<(usize, usize)>, MissingError> {
    let e = MissingEdge::in_digraph(d, e.lo(), e.hi())?;
    let (a, b) = (e.lo(), e.hi());
    let mut out = Vec::new();
    if is_convenient(d, a, b) {
        out.push((a, b));
    }
    if is_convenient(d, b, a) {
        out.push((b, a));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forge::fixture;

    fn set(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn decompose_matching_and_star() {
        let dec = decompose(&fixture("C4X").unwrap()).unwrap();
        assert!(dec.stars.is_empty());
        assert_eq!(dec.matching, vec![MissingEdge::new(0, 2).unwrap(), MissingEdge::new(1, 3).unwrap()]);

        // x=0 missing a=1, b=2; u=3, v=4 missing; 5 whole.
        let missing = [(0, 1), (0, 2), (3, 4)];
        let d = complement_of(6, &missing);
        let dec = decompose(&d).unwrap();
        assert_eq!(dec.stars, vec![Star { center: 0, leaves: set(&[1, 2]) }]);
        assert_eq!(dec.matching, vec![MissingEdge::new(3, 4).unwrap()]);
        assert_eq!(dec.covered(), set(&[0, 1, 2, 3, 4]));
        assert_eq!(dec.leaves(0), set(&[1, 2]));
    }

    #[test]
    fn decompose_rejects_triangle_and_long_path() {
        let d = complement_of(4, &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(decompose(&d), Err(MissingError::NotDisjointStars(set(&[0, 1, 2]))));
        let d = complement_of(5, &[(0, 1), (1, 2), (2, 3)]);
        assert!(matches!(decompose(&d), Err(MissingError::NotDisjointStars(_))));
    }

    #[test]
    fn toward_centers() {
        let dec = StarDecomposition { stars: vec![Star { center: 0, leaves: set(&[1, 2]) }], matching: vec![] };
        let plan = orient_toward_centers(&dec);
        let arcs: Vec<_> = plan.arcs().map(|(_, a)| a).collect();
        assert_eq!(arcs, vec![(1, 0), (2, 0)]);

        let dec = StarDecomposition { stars: vec![], matching: vec![MissingEdge::new(0, 2).unwrap()] };
        let arcs: Vec<_> = orient_toward_centers(&dec).arcs().map(|(_, a)| a).collect();
        assert_eq!(arcs, vec![(2, 0)]);

        assert!(orient_toward_centers(&StarDecomposition::default()).is_empty());
    }

    #[test]
    fn convenient_orientation_examples() {
        // Transitive tournament on 3 minus the edge {0,2}: vertex 0 has no in-neighbors.
        let d = Digraph::new(3, [(0, 1), (1, 2)]).unwrap();
        let e = MissingEdge::new(0, 2).unwrap();
        assert!(convenient_orientations(&d, e).unwrap().contains(&(0, 2)));

        let c4x = fixture("C4X").unwrap();
        assert!(convenient_orientations(&c4x, MissingEdge::new(0, 2).unwrap()).unwrap().is_empty());

        let lc3 = fixture("LC3").unwrap();
        assert!(convenient_orientations(&lc3, MissingEdge::new(0, 1).unwrap()).unwrap().is_empty());

        assert!(matches!(convenient_orientations(&c4x, MissingEdge::new(0, 1).unwrap()), Err(MissingError::NotMissing(_))));
    }

    #[test]
    fn plan_rejects_double_orientation() {
        assert!(matches!(OrientationPlan::explicit([(0, 1), (1, 0)]), Err(GraphError::PlanConflict(_))));
    }

    /// Tournament 0..n oriented low-to-high, minus the listed pairs.
    fn complement_of(n: usize, missing: &[(usize, usize)]) -> Digraph {
        let gone: Vec<_> = missing.iter().map(|&(u, v)| MissingEdge::new(u, v).unwrap()).collect();
        let arcs = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| !gone.contains(&MissingEdge::new(u, v).unwrap()));
        Digraph::new(n, arcs).unwrap()
    }
}
