//! Digon-free digraphs on dense vertex ids, vertex sets and vertex weightings.
//!
//! Vertex sets are bitmasks, so a digraph holds at most [`MAX_VERTICES`]
//! vertices. Every set-valued query returns a [`VertexSet`], which iterates in
//! ascending vertex order.

use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::missing::{MissingEdge, OrientationPlan};

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 64;

/// Exact non-negative vertex weight.
pub type Weight = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a digraph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("{0} vertices exceeds the supported maximum of {MAX_VERTICES}")]
    TooManyVertices(usize),
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("digon between {0} and {1}")]
    Digon(usize, usize),
    #[error("duplicate arc {0}->{1}")]
    DuplicateArc(usize, usize),
    #[error("vertex set {set} is not a subset of 0..{n}")]
    NotSubset { set: VertexSet, n: usize },
    #[error("empty vertex set")]
    EmptySet,
    #[error("orientation plan leaves missing edge {0} unoriented")]
    PlanMissesEdge(MissingEdge),
    #[error("orientation plan orients {0}, which is not a missing edge")]
    PlanOrientsPresentPair(MissingEdge),
    #[error("orientation plan orients {0} in both directions")]
    PlanConflict(MissingEdge),
    #[error("negative weight on vertex {0}")]
    NegativeWeight(usize),
    #[error("weighting has {got} entries, digraph has {expected} vertices")]
    WeightCount { expected: usize, got: usize },
}

/// Set of vertex ids backed by a 64-bit mask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub const fn from_mask(mask: u64) -> Self {
        VertexSet(mask)
    }

    /// The set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(1u64 << v)
    }

    pub const fn mask(self) -> u64 {
        self.0
    }

    pub fn contains(self, v: usize) -> bool {
        v < 64 && self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1u64 << v;
    }

    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1u64 << v);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: VertexSet) -> bool {
        self.0 & other.0 == 0
    }

    /// Smallest member.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> VertexIter {
        VertexIter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl IntoIterator for VertexSet {
    type Item = usize;
    type IntoIter = VertexIter;
    fn into_iter(self) -> VertexIter {
        self.iter()
    }
}

/// Ascending iterator over a [`VertexSet`].
#[derive(Clone)]
pub struct VertexIter(u64);

impl Iterator for VertexIter {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let k = self.0.count_ones() as usize;
        (k, Some(k))
    }
}

impl ExactSizeIterator for VertexIter {}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        if let Some(&bad) = v.iter().find(|&&x| x >= MAX_VERTICES) {
            return Err(serde::de::Error::custom(format!("vertex {bad} out of range")));
        }
        Ok(v.into_iter().collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Out,
    In,
}

/// Non-negative exact weights, one per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Weighting(Vec<Weight>);

impl Weighting {
    pub fn unit(n: usize) -> Self {
        Weighting(vec![Weight::one(); n])
    }

    pub fn new(weights: Vec<Weight>) -> Result<Self, GraphError> {
        if let Some(v) = weights.iter().position(|w| w.is_negative()) {
            return Err(GraphError::NegativeWeight(v));
        }
        Ok(Weighting(weights))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: usize) -> Weight {
        self.0[v]
    }

    pub fn set(&mut self, v: usize, w: Weight) -> Result<(), GraphError> {
        if w.is_negative() {
            return Err(GraphError::NegativeWeight(v));
        }
        self.0[v] = w;
        Ok(())
    }

    pub fn as_slice(&self) -> &[Weight] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|w| w.is_one())
    }

    pub fn of(&self, set: VertexSet) -> Weight {
        set.iter().fold(Weight::zero(), |acc, v| acc + self.0[v])
    }

    pub fn check_len(&self, n: usize) -> Result<(), GraphError> {
        if self.0.len() != n {
            return Err(GraphError::WeightCount { expected: n, got: self.0.len() });
        }
        Ok(())
    }

    /// Integer weights sharing one denominator: `w(v) = scaled[v] / denom`.
    pub fn scaled(&self) -> (Vec<i128>, i128) {
        let denom = self.0.iter().fold(1i128, |acc, w| lcm(acc, i128::from(*w.denom())));
        let scaled = self.0.iter().map(|w| i128::from(*w.numer()) * (denom / i128::from(*w.denom()))).collect();
        (scaled, denom)
    }
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

fn lcm(a: i128, b: i128) -> i128 {
    a / gcd(a, b) * b
}

/// Loop-free, digon-free digraph on vertices `0..n`. Immutable once built.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    out: Vec<u64>,
    inn: Vec<u64>,
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Digraph").field("n", &self.n).field("arcs", &self.arcs().collect::<Vec<_>>()).finish()
    }
}

impl Digraph {
    pub fn new<I>(n: usize, arcs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        let mut d = Digraph { n, out: vec![0; n], inn: vec![0; n] };
        for (u, v) in arcs {
            d.try_add_arc(u, v)?;
        }
        Ok(d)
    }

    pub fn empty(n: usize) -> Result<Self, GraphError> {
        Digraph::new(n, [])
    }

    pub(crate) fn try_add_arc(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::Loop(u));
        }
        if self.has_arc(u, v) {
            return Err(GraphError::DuplicateArc(u, v));
        }
        if self.has_arc(v, u) {
            return Err(GraphError::Digon(u, v));
        }
        self.out[u] |= 1 << v;
        self.inn[v] |= 1 << u;
        Ok(())
    }

    pub fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v >= self.n {
            Err(GraphError::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    pub fn check_subset(&self, k: VertexSet) -> Result<(), GraphError> {
        if k.is_subset(self.vertices()) {
            Ok(())
        } else {
            Err(GraphError::NotSubset { set: k, n: self.n })
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out[u] >> v & 1 == 1
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.has_arc(u, v) || self.has_arc(v, u)
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| VertexSet(self.out[u]).iter().map(move |v| (u, v)))
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(|m| m.count_ones() as usize).sum()
    }

    pub fn out_set(&self, v: usize) -> VertexSet {
        VertexSet(self.out[v])
    }

    pub fn in_set(&self, v: usize) -> VertexSet {
        VertexSet(self.inn[v])
    }

    /// Vertices at distance exactly two from (`Out`) or to (`In`) `v`.
    pub fn second_out_set(&self, v: usize) -> VertexSet {
        let first = self.out[v];
        let reach = VertexSet(first).iter().fold(0u64, |acc, u| acc | self.out[u]);
        VertexSet(reach & !first & !(1 << v))
    }

    pub fn second_in_set(&self, v: usize) -> VertexSet {
        let first = self.inn[v];
        let reach = VertexSet(first).iter().fold(0u64, |acc, u| acc | self.inn[u]);
        VertexSet(reach & !first & !(1 << v))
    }

    /// `N⁺(v) ∪ N⁺⁺(v)`.
    pub fn reach2(&self, v: usize) -> VertexSet {
        self.out_set(v).union(self.second_out_set(v))
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].count_ones() as usize
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.inn[v].count_ones() as usize
    }

    pub fn neighbors(&self, v: usize, dir: Direction) -> Result<VertexSet, GraphError> {
        self.check_vertex(v)?;
        Ok(match dir {
            Direction::Out => self.out_set(v),
            Direction::In => self.in_set(v),
        })
    }

    pub fn second_neighborhood(&self, v: usize, dir: Direction) -> Result<VertexSet, GraphError> {
        self.check_vertex(v)?;
        Ok(match dir {
            Direction::Out => self.second_out_set(v),
            Direction::In => self.second_in_set(v),
        })
    }

    /// Vertices not adjacent to `v` (excluding `v`).
    pub fn non_neighbors(&self, v: usize) -> VertexSet {
        VertexSet(self.vertices().mask() & !self.out[v] & !self.inn[v] & !(1 << v))
    }

    pub fn is_whole(&self, v: usize) -> bool {
        self.non_neighbors(v).is_empty()
    }

    pub fn is_tournament(&self) -> bool {
        (0..self.n).all(|v| self.is_whole(v))
    }

    pub fn sinks(&self) -> VertexSet {
        (0..self.n).filter(|&v| self.out[v] == 0).collect()
    }

    pub fn has_sink(&self) -> bool {
        self.out.contains(&0)
    }

    /// Missing edges in ascending order, plus the non-whole vertices.
    pub fn missing_graph(&self) -> (Vec<MissingEdge>, VertexSet) {
        let mut edges = Vec::new();
        let mut non_whole = VertexSet::EMPTY;
        for u in 0..self.n {
            let nn = self.non_neighbors(u);
            if !nn.is_empty() {
                non_whole.insert(u);
            }
            for v in nn.iter().filter(|&v| v > u) {
                edges.push(MissingEdge::new(u, v).expect("distinct endpoints"));
            }
        }
        (edges, non_whole)
    }

    pub fn missing_edges(&self) -> Vec<MissingEdge> {
        self.missing_graph().0
    }

    pub fn is_missing(&self, u: usize, v: usize) -> bool {
        u != v && u < self.n && v < self.n && !self.adjacent(u, v)
    }

    /// Tournament obtained by orienting every missing edge as the plan says.
    pub fn complete(&self, plan: &OrientationPlan) -> Result<Digraph, GraphError> {
        let missing = self.missing_edges();
        for e in &missing {
            if plan.get(*e).is_none() {
                return Err(GraphError::PlanMissesEdge(*e));
            }
        }
        let mut d = self.clone();
        for (edge, (tail, head)) in plan.arcs() {
            if !self.is_missing(edge.lo(), edge.hi()) {
                return Err(GraphError::PlanOrientsPresentPair(edge));
            }
            d.out[tail] |= 1 << head;
            d.inn[head] |= 1 << tail;
        }
        Ok(d)
    }

    /// Copy with extra arcs; each must join a non-adjacent pair.
    pub fn with_arcs<I>(&self, arcs: I) -> Result<Digraph, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut d = self.clone();
        for (u, v) in arcs {
            d.try_add_arc(u, v)?;
        }
        Ok(d)
    }

    /// Copy with the arc between `u` and `v` pointing `u -> v`. The pair must be adjacent.
    pub fn reoriented(&self, u: usize, v: usize) -> Digraph {
        let mut d = self.clone();
        if d.has_arc(v, u) {
            d.out[v] &= !(1 << u);
            d.inn[u] &= !(1 << v);
            d.out[u] |= 1 << v;
            d.inn[v] |= 1 << u;
        }
        d
    }

    /// Copy without the arc between `u` and `v` (either direction).
    pub fn without_pair(&self, u: usize, v: usize) -> Digraph {
        let mut d = self.clone();
        d.out[u] &= !(1 << v);
        d.out[v] &= !(1 << u);
        d.inn[u] &= !(1 << v);
        d.inn[v] &= !(1 << u);
        d
    }

    /// `K` is an interval when all members see the same out- and in-neighbors outside `K`.
    pub fn is_interval(&self, k: VertexSet) -> Result<bool, GraphError> {
        self.check_subset(k)?;
        let mut members = k.iter();
        let Some(first) = members.next() else {
            return Ok(true);
        };
        let out0 = self.out_set(first).difference(k);
        let in0 = self.in_set(first).difference(k);
        Ok(members.all(|v| self.out_set(v).difference(k) == out0 && self.in_set(v).difference(k) == in0))
    }

    /// Induced subdigraph on `K`, relabeled to `0..|K|` in ascending order.
    /// The returned map sends new ids to old ids.
    pub fn induced(&self, k: VertexSet) -> Result<(Digraph, Vec<usize>), GraphError> {
        self.check_subset(k)?;
        if k.is_empty() {
            return Err(GraphError::EmptySet);
        }
        let map = k.to_vec();
        let mut index = [usize::MAX; MAX_VERTICES];
        for (i, &v) in map.iter().enumerate() {
            index[v] = i;
        }
        let mut d = Digraph { n: map.len(), out: vec![0; map.len()], inn: vec![0; map.len()] };
        for (i, &v) in map.iter().enumerate() {
            for u in self.out_set(v).intersection(k) {
                let j = index[u];
                d.out[i] |= 1 << j;
                d.inn[j] |= 1 << i;
            }
        }
        Ok((d, map))
    }

    /// Out-neighborhood of `v` inside `scope`.
    pub fn out_within(&self, v: usize, scope: VertexSet) -> VertexSet {
        self.out_set(v).intersection(scope)
    }

    pub fn in_within(&self, v: usize, scope: VertexSet) -> VertexSet {
        self.in_set(v).intersection(scope)
    }

    /// Second out-neighborhood of `v` in the subdigraph induced by `scope`.
    pub fn second_out_within(&self, v: usize, scope: VertexSet) -> VertexSet {
        let first = self.out_within(v, scope);
        let reach = first.iter().fold(VertexSet::EMPTY, |acc, u| acc.union(self.out_within(u, scope)));
        reach.difference(first).difference(VertexSet::singleton(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forge::fixture;

    #[test]
    fn neighbors_on_fixtures() {
        let c3 = fixture("C3").unwrap();
        assert_eq!(c3.neighbors(0, Direction::Out).unwrap().to_vec(), vec![1]);
        let lc3 = fixture("LC3").unwrap();
        assert_eq!(lc3.neighbors(0, Direction::Out).unwrap().to_vec(), vec![2, 5]);
        let tt3 = fixture("TT3").unwrap();
        assert!(tt3.neighbors(2, Direction::Out).unwrap().is_empty());
        assert_eq!(c3.neighbors(3, Direction::Out), Err(GraphError::VertexOutOfRange { vertex: 3, n: 3 }));
    }

    #[test]
    fn second_neighborhoods_on_fixtures() {
        let c3 = fixture("C3").unwrap();
        assert_eq!(c3.second_neighborhood(0, Direction::Out).unwrap().to_vec(), vec![2]);
        let lc3 = fixture("LC3").unwrap();
        assert_eq!(lc3.second_neighborhood(0, Direction::Out).unwrap().to_vec(), vec![1, 4]);
        let c4x = fixture("C4X").unwrap();
        assert_eq!(c4x.second_neighborhood(0, Direction::Out).unwrap().to_vec(), vec![2]);
        assert_eq!(c4x.second_neighborhood(0, Direction::In).unwrap().to_vec(), vec![2]);
    }

    #[test]
    fn construction_rejects_loops_digons_duplicates() {
        assert_eq!(Digraph::new(2, [(0, 0)]), Err(GraphError::Loop(0)));
        assert_eq!(Digraph::new(2, [(0, 1), (1, 0)]), Err(GraphError::Digon(1, 0)));
        assert_eq!(Digraph::new(2, [(0, 1), (0, 1)]), Err(GraphError::DuplicateArc(0, 1)));
        assert_eq!(Digraph::new(65, []), Err(GraphError::TooManyVertices(65)));
    }

    #[test]
    fn missing_graph_of_fixtures() {
        let (edges, non_whole) = fixture("C3").unwrap().missing_graph();
        assert!(edges.is_empty() && non_whole.is_empty());
        let (edges, non_whole) = fixture("C4X").unwrap().missing_graph();
        let pairs: Vec<_> = edges.iter().map(|e| (e.lo(), e.hi())).collect();
        assert_eq!(pairs, vec![(0, 2), (1, 3)]);
        assert_eq!(non_whole, VertexSet::full(4));
        let pairs: Vec<_> = fixture("LC3").unwrap().missing_edges().iter().map(|e| (e.lo(), e.hi())).collect();
        assert_eq!(pairs, vec![(0, 1), (2, 3), (4, 5)]);
    }

    #[test]
    fn completion() {
        let c4x = fixture("C4X").unwrap();
        let plan = OrientationPlan::explicit([(0, 2), (1, 3)]).unwrap();
        let t = c4x.complete(&plan).unwrap();
        assert!(t.is_tournament());
        assert_eq!(t.arc_count(), 6);

        let c3 = fixture("C3").unwrap();
        assert_eq!(c3.complete(&OrientationPlan::default()).unwrap(), c3);

        let st1 = fixture("ST1").unwrap();
        let plan = OrientationPlan::explicit([(1, 0), (2, 0)]).unwrap();
        let t = st1.complete(&plan).unwrap();
        assert_eq!(t.out_set(0).to_vec(), vec![3]);

        let partial = OrientationPlan::explicit([(1, 0)]).unwrap();
        assert!(matches!(st1.complete(&partial), Err(GraphError::PlanMissesEdge(_))));
        let bogus = OrientationPlan::explicit([(1, 0), (2, 0), (1, 2)]).unwrap();
        assert!(matches!(st1.complete(&bogus), Err(GraphError::PlanOrientsPresentPair(_))));
    }

    #[test]
    fn intervals() {
        let c4x = fixture("C4X").unwrap();
        for v in 0..4 {
            assert!(c4x.is_interval(VertexSet::singleton(v)).unwrap());
        }
        assert!(!c4x.is_interval([0, 2].into_iter().collect()).unwrap());
        assert!(c4x.is_interval(VertexSet::full(4)).unwrap());
        assert!(c4x.is_interval(VertexSet::singleton(7)).is_err());
    }

    #[test]
    fn induced_subdigraphs() {
        let lc3 = fixture("LC3").unwrap();
        let (d, map) = lc3.induced(VertexSet::full(6)).unwrap();
        assert_eq!(d, lc3);
        assert_eq!(map, (0..6).collect::<Vec<_>>());

        let c4x = fixture("C4X").unwrap();
        let (d, _) = c4x.induced([0, 1].into_iter().collect()).unwrap();
        assert_eq!(d.arcs().collect::<Vec<_>>(), vec![(0, 1)]);

        let tt3 = fixture("TT3").unwrap();
        let (d, map) = tt3.induced([0, 2].into_iter().collect()).unwrap();
        assert_eq!(map, vec![0, 2]);
        assert_eq!(d.arcs().collect::<Vec<_>>(), vec![(0, 1)]);

        assert_eq!(c4x.induced(VertexSet::EMPTY), Err(GraphError::EmptySet));
    }

    #[test]
    fn scaled_weights_share_denominator() {
        let w = Weighting::new(vec![Weight::new(1, 2), Weight::new(2, 3), Weight::from_integer(2)]).unwrap();
        let (scaled, denom) = w.scaled();
        assert_eq!(denom, 6);
        assert_eq!(scaled, vec![3, 4, 12]);
        assert!(Weighting::new(vec![Weight::from_integer(-1)]).is_err());
    }
}
