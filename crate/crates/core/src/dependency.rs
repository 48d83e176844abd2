//! The losing relation between missing edges, the dependency digraph it
//! induces, and the interval structure (`K(C)`, `K(ξ)`, `J(f)`) built on top.

use serde::{Deserialize, Serialize};

use crate::digraph::{Digraph, VertexSet};
use crate::missing::{decompose, MissingEdge, MissingError};

/// Endpoint roles under which `x1y1` loses to `x2y2`:
/// `x1 -> x2`, `y2 ∉ N⁺[x1] ∪ N⁺⁺(x1)`, `y1 -> y2`, `x2 ∉ N⁺(y1) ∪ N⁺⁺(y1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Roles {
    pub x1: usize,
    pub y1: usize,
    pub x2: usize,
    pub y2: usize,
}

impl Roles {
    /// Re-evaluate the four defining conditions.
    pub fn holds(&self, d: &Digraph) -> bool {
        role_conditions(d, self.x1, self.y1, self.x2, self.y2, &|v| d.reach2(v))
    }
}

fn role_conditions(d: &Digraph, x1: usize, y1: usize, x2: usize, y2: usize, reach2: &dyn Fn(usize) -> VertexSet) -> bool {
    d.has_arc(x1, x2) && !reach2(x1).contains(y2) && d.has_arc(y1, y2) && !reach2(y1).contains(x2)
}

fn losing_roles_with(d: &Digraph, e1: MissingEdge, e2: MissingEdge, reach2: &dyn Fn(usize) -> VertexSet) -> Option<Roles> {
    let firsts = [(e1.lo(), e1.hi()), (e1.hi(), e1.lo())];
    let seconds = [(e2.lo(), e2.hi()), (e2.hi(), e2.lo())];
    for (x1, y1) in firsts {
        for (x2, y2) in seconds {
            if role_conditions(d, x1, y1, x2, y2, reach2) {
                return Some(Roles { x1, y1, x2, y2 });
            }
        }
    }
    None
}

/// Roles witnessing that `e1` loses to `e2`, if it does.
pub fn losing_roles(d: &Digraph, e1: MissingEdge, e2: MissingEdge) -> Result<Option<Roles>, MissingError> {
    let e1 = MissingEdge::in_digraph(d, e1.lo(), e1.hi())?;
    let e2 = MissingEdge::in_digraph(d, e2.lo(), e2.hi())?;
    if e1 == e2 {
        return Err(MissingError::IdenticalEdges(e1));
    }
    Ok(losing_roles_with(d, e1, e2, &|v| d.reach2(v)))
}

pub fn loses_to(d: &Digraph, e1: MissingEdge, e2: MissingEdge) -> Result<bool, MissingError> {
    losing_roles(d, e1, e2).map(|r| r.is_some())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaArc {
    pub from: usize,
    pub to: usize,
    pub roles: Roles,
}

/// Missing edges as vertices, losing relation as arcs. Digons are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DependencyDigraph {
    edges: Vec<MissingEdge>,
    arcs: Vec<DeltaArc>,
    #[serde(skip)]
    out_adj: Vec<Vec<usize>>,
    #[serde(skip)]
    in_adj: Vec<Vec<usize>>,
}

impl DependencyDigraph {
    pub fn build(d: &Digraph) -> Self {
        let edges = d.missing_edges();
        let reach: Vec<VertexSet> = (0..d.n()).map(|v| d.reach2(v)).collect();
        let lookup = |v: usize| reach[v];
        let mut arcs = Vec::new();
        let mut out_adj = vec![Vec::new(); edges.len()];
        let mut in_adj = vec![Vec::new(); edges.len()];
        for (i, &e1) in edges.iter().enumerate() {
            for (j, &e2) in edges.iter().enumerate() {
                if i == j {
                    continue;
                }
                if let Some(roles) = losing_roles_with(d, e1, e2, &lookup) {
                    arcs.push(DeltaArc { from: i, to: j, roles });
                    out_adj[i].push(j);
                    in_adj[j].push(i);
                }
            }
        }
        DependencyDigraph { edges, arcs, out_adj, in_adj }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[MissingEdge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> MissingEdge {
        self.edges[i]
    }

    pub fn index_of(&self, e: MissingEdge) -> Option<usize> {
        self.edges.binary_search(&e).ok()
    }

    pub fn arcs(&self) -> &[DeltaArc] {
        &self.arcs
    }

    pub fn has_arc(&self, i: usize, j: usize) -> bool {
        self.out_adj[i].contains(&j)
    }

    pub fn arc(&self, i: usize, j: usize) -> Option<&DeltaArc> {
        self.arcs.iter().find(|a| a.from == i && a.to == j)
    }

    pub fn out_neighbors(&self, i: usize) -> &[usize] {
        &self.out_adj[i]
    }

    pub fn in_neighbors(&self, i: usize) -> &[usize] {
        &self.in_adj[i]
    }

    pub fn out_degree(&self, i: usize) -> usize {
        self.out_adj[i].len()
    }

    pub fn in_degree(&self, i: usize) -> usize {
        self.in_adj[i].len()
    }

    /// `δ⁺_Δ`; `None` when Δ has no vertices.
    pub fn min_out_degree(&self) -> Option<usize> {
        (0..self.len()).map(|i| self.out_degree(i)).min()
    }

    pub fn min_in_degree(&self) -> Option<usize> {
        (0..self.len()).map(|i| self.in_degree(i)).min()
    }

    /// `δ_Δ = min(δ⁺_Δ, δ⁻_Δ)`.
    pub fn min_degree(&self) -> Option<usize> {
        self.min_out_degree().min(self.min_in_degree())
    }

    pub fn stats(&self) -> DeltaStats {
        DeltaStats {
            vertices: self.len(),
            arcs: self.arcs.len(),
            min_out: self.min_out_degree(),
            min_in: self.min_in_degree(),
            min: self.min_degree(),
        }
    }

    /// Weakly connected components as sorted lists of edge indices.
    pub fn weak_components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.len());
        for a in &self.arcs {
            uf.union(a.from, a.to);
        }
        uf.groups()
    }

    /// Strongly connected components (Tarjan), each sorted, listed by smallest member.
    pub fn strong_components(&self) -> Vec<Vec<usize>> {
        let mut comps = tarjan(&self.out_adj);
        for c in &mut comps {
            c.sort_unstable();
        }
        comps.sort();
        comps
    }

    pub fn endpoints_of(&self, members: &[usize]) -> VertexSet {
        members.iter().fold(VertexSet::EMPTY, |acc, &i| acc.union(self.edges[i].endpoints()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaStats {
    pub vertices: usize,
    pub arcs: usize,
    pub min_out: Option<usize>,
    pub min_in: Option<usize>,
    pub min: Option<usize>,
}

impl DeltaStats {
    /// `δ⁺_Δ > 0`, vacuously true on an empty Δ.
    pub fn positive_out(&self) -> bool {
        self.min_out.is_none_or(|m| m > 0)
    }

    pub fn positive_in(&self) -> bool {
        self.min_in.is_none_or(|m| m > 0)
    }

    pub fn positive(&self) -> bool {
        self.positive_in() && self.positive_out()
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    /// Groups ordered by smallest member.
    fn groups(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); n];
        for x in 0..n {
            let r = self.find(x);
            by_root[r].push(x);
        }
        by_root.into_iter().filter(|g| !g.is_empty()).collect()
    }
}

fn tarjan(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    const UNSEEN: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        // (vertex, next child position)
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if let Some(&w) = adj[v].get(*pos) {
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

/// Missing edges with no in-arc in Δ.
pub fn good_edges(d: &Digraph) -> Vec<MissingEdge> {
    let delta = DependencyDigraph::build(d);
    (0..delta.len()).filter(|&i| delta.in_degree(i) == 0).map(|i| delta.edge(i)).collect()
}

/// Components of Δ, their vertex sets and the interval-graph structure over them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentIndex {
    pub delta: DependencyDigraph,
    /// Weak components of Δ (edge indices).
    pub components: Vec<Vec<usize>>,
    pub strong: Vec<Vec<usize>>,
    /// `K(C)` per weak component.
    pub k_sets: Vec<VertexSet>,
    /// Pairs of weak components whose `K` sets meet.
    pub interval_edges: Vec<(usize, usize)>,
    /// Connected components `ξ` of the interval graph, as component indices.
    pub xi: Vec<Vec<usize>>,
    /// `K(ξ)` per interval-graph component.
    pub xi_sets: Vec<VertexSet>,
}

impl ComponentIndex {
    pub fn build(d: &Digraph) -> Self {
        Self::from_delta(DependencyDigraph::build(d))
    }

    pub fn from_delta(delta: DependencyDigraph) -> Self {
        let components = delta.weak_components();
        let strong = delta.strong_components();
        let k_sets: Vec<VertexSet> = components.iter().map(|c| delta.endpoints_of(c)).collect();
        let mut interval_edges = Vec::new();
        let mut uf = UnionFind::new(components.len());
        for i in 0..k_sets.len() {
            for j in i + 1..k_sets.len() {
                if !k_sets[i].is_disjoint(k_sets[j]) {
                    interval_edges.push((i, j));
                    uf.union(i, j);
                }
            }
        }
        let xi = uf.groups();
        let xi_sets = xi.iter().map(|g| g.iter().fold(VertexSet::EMPTY, |acc, &c| acc.union(k_sets[c]))).collect();
        ComponentIndex { delta, components, strong, k_sets, interval_edges, xi, xi_sets }
    }

    /// Index of the weak component containing Δ-vertex `i`.
    pub fn component_of(&self, i: usize) -> usize {
        self.components.iter().position(|c| c.contains(&i)).expect("every Δ vertex has a component")
    }

    /// `J(f)`: `{f}` for a whole vertex, otherwise the `K(ξ)` containing `f`.
    pub fn j_set(&self, f: usize) -> VertexSet {
        self.xi_sets.iter().copied().find(|k| k.contains(f)).unwrap_or_else(|| VertexSet::singleton(f))
    }

    pub fn blocks(&self, n: usize) -> Blocks {
        Blocks::new(n, &self.xi_sets)
    }
}

/// Partition of the vertex set into the `K(ξ)` sets and singletons of whole vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Blocks {
    of: Vec<usize>,
    sets: Vec<VertexSet>,
}

impl Blocks {
    /// Blocks from pairwise disjoint sets; uncovered vertices become singletons.
    pub fn new(n: usize, groups: &[VertexSet]) -> Self {
        let mut of = vec![usize::MAX; n];
        let mut sets = Vec::new();
        for v in 0..n {
            if of[v] != usize::MAX {
                continue;
            }
            let set = groups.iter().copied().find(|g| g.contains(v)).unwrap_or_else(|| VertexSet::singleton(v));
            for u in set {
                of[u] = sets.len();
            }
            sets.push(set);
        }
        Blocks { of, sets }
    }

    pub fn singletons(n: usize) -> Self {
        Blocks::new(n, &[])
    }

    pub fn block_of(&self, v: usize) -> VertexSet {
        self.sets[self.of[v]]
    }

    pub fn id_of(&self, v: usize) -> usize {
        self.of[v]
    }

    pub fn sets(&self) -> &[VertexSet] {
        &self.sets
    }

    pub fn non_trivial(&self) -> impl Iterator<Item = VertexSet> + '_ {
        self.sets.iter().copied().filter(|s| s.len() > 1)
    }

    /// Whether each block occupies consecutive positions in `order`.
    pub fn contiguous_in(&self, order: &[usize]) -> bool {
        let mut closed = vec![false; self.sets.len()];
        let mut current = usize::MAX;
        for &v in order {
            let b = self.of[v];
            if b != current {
                if closed[b] {
                    return false;
                }
                if current != usize::MAX {
                    closed[current] = true;
                }
                current = b;
            }
        }
        true
    }
}

/// `J(f)` computed from scratch.
pub fn j_of(d: &Digraph, f: usize) -> Result<VertexSet, crate::digraph::GraphError> {
    d.check_vertex(f)?;
    if d.is_whole(f) {
        return Ok(VertexSet::singleton(f));
    }
    Ok(ComponentIndex::build(d).j_set(f))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Goodness {
    pub good: bool,
    /// `(K(ξ), is interval)` per interval-graph component.
    pub verdicts: Vec<(VertexSet, bool)>,
}

pub fn goodness(d: &Digraph, index: &ComponentIndex) -> Goodness {
    let verdicts: Vec<_> = index.xi_sets.iter().map(|&k| (k, d.is_interval(k).expect("K(ξ) lies inside the digraph"))).collect();
    Goodness { good: verdicts.iter().all(|&(_, ok)| ok), verdicts }
}

/// Every `K(ξ)` is an interval of `d`.
pub fn is_good_digraph(d: &Digraph) -> Goodness {
    goodness(d, &ComponentIndex::build(d))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma3Report {
    /// Every weak component of Δ is a single strongly connected component with at least two vertices.
    pub hypothesis: bool,
    pub good: bool,
}

impl Lemma3Report {
    /// Hypothesis holds but the digraph is not good.
    pub fn violated(&self) -> bool {
        self.hypothesis && !self.good
    }
}

pub fn lemma3_check(d: &Digraph) -> Result<Lemma3Report, MissingError> {
    decompose(d)?;
    let index = ComponentIndex::build(d);
    let hypothesis = index.components.iter().all(|c| c.len() >= 2 && index.strong.contains(c));
    let good = goodness(d, &index).good;
    Ok(Lemma3Report { hypothesis, good })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forge::{fixture, random_tournament};

    fn edge(u: usize, v: usize) -> MissingEdge {
        MissingEdge::new(u, v).unwrap()
    }

    #[test]
    fn losing_relation_on_c4x() {
        let c4x = fixture("C4X").unwrap();
        let roles = losing_roles(&c4x, edge(0, 2), edge(1, 3)).unwrap().unwrap();
        assert_eq!(roles, Roles { x1: 0, y1: 2, x2: 1, y2: 3 });
        assert!(roles.holds(&c4x));
        assert!(loses_to(&c4x, edge(1, 3), edge(0, 2)).unwrap());
        assert!(matches!(loses_to(&c4x, edge(0, 2), edge(0, 2)), Err(MissingError::IdenticalEdges(_))));
        assert!(matches!(loses_to(&c4x, edge(0, 1), edge(0, 2)), Err(MissingError::NotMissing(_))));
    }

    #[test]
    fn lc3_edges_do_not_lose_backwards() {
        let lc3 = fixture("LC3").unwrap();
        assert!(!loses_to(&lc3, edge(0, 1), edge(4, 5)).unwrap());
    }

    #[test]
    fn dependency_digraph_shapes() {
        let t = random_tournament(6, 3);
        assert!(DependencyDigraph::build(&t).is_empty());

        let delta = DependencyDigraph::build(&fixture("C4X").unwrap());
        assert_eq!(delta.len(), 2);
        assert!(delta.has_arc(0, 1) && delta.has_arc(1, 0));
        assert_eq!(delta.min_degree(), Some(1));

        let delta = DependencyDigraph::build(&fixture("LC3").unwrap());
        let arcs: Vec<_> = delta.arcs().iter().map(|a| (delta.edge(a.from), delta.edge(a.to))).collect();
        assert_eq!(arcs, vec![(edge(0, 1), edge(2, 3)), (edge(2, 3), edge(4, 5)), (edge(4, 5), edge(0, 1))]);
        assert_eq!(delta.stats().min_out, Some(1));
        assert_eq!(delta.stats().min_in, Some(1));
        assert!(delta.arcs().iter().all(|a| a.roles.holds(&fixture("LC3").unwrap())));
    }

    #[test]
    fn good_edge_examples() {
        let d = Digraph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(good_edges(&d), vec![edge(0, 2)]);
        assert!(good_edges(&fixture("C4X").unwrap()).is_empty());
        assert!(good_edges(&fixture("LC3").unwrap()).is_empty());
    }

    #[test]
    fn component_index_examples() {
        let idx = ComponentIndex::build(&fixture("C4X").unwrap());
        assert_eq!(idx.components.len(), 1);
        assert_eq!(idx.strong, vec![vec![0, 1]]);
        assert_eq!(idx.k_sets, vec![VertexSet::full(4)]);
        assert_eq!(idx.xi.len(), 1);

        let idx = ComponentIndex::build(&fixture("LC3").unwrap());
        assert_eq!(idx.k_sets, vec![VertexSet::full(6)]);

        // Two C4X blocks, block {0..3} beats block {4..7}.
        let mut arcs = vec![(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4)];
        arcs.extend((0..4).flat_map(|u| (4..8).map(move |v| (u, v))));
        let d = Digraph::new(8, arcs).unwrap();
        let idx = ComponentIndex::build(&d);
        assert_eq!(idx.components.len(), 2);
        assert_eq!(idx.xi_sets.len(), 2);
        assert!(idx.xi_sets[0].is_disjoint(idx.xi_sets[1]));
    }

    #[test]
    fn j_examples() {
        assert_eq!(j_of(&fixture("C3").unwrap(), 0).unwrap(), VertexSet::singleton(0));
        assert_eq!(j_of(&fixture("C4X").unwrap(), 0).unwrap(), VertexSet::full(4));
        // LC3 plus a whole vertex 6 dominated by the gadget.
        let mut arcs: Vec<_> = fixture("LC3").unwrap().arcs().collect();
        arcs.extend((0..6).map(|v| (v, 6)));
        let d = Digraph::new(7, arcs).unwrap();
        assert_eq!(j_of(&d, 6).unwrap(), VertexSet::singleton(6));
        assert_eq!(j_of(&d, 3).unwrap(), VertexSet::full(6));
    }

    #[test]
    fn goodness_examples() {
        assert!(is_good_digraph(&random_tournament(7, 1)).good);
        assert!(is_good_digraph(&fixture("C4X").unwrap()).good);

        // LC3 inside an 8-vertex digraph: 6 -> {0,2,4}, {1,3,5} -> 6, 7 beaten by everything.
        let mut arcs: Vec<_> = fixture("LC3").unwrap().arcs().collect();
        arcs.extend([(6, 0), (6, 2), (6, 4), (1, 6), (3, 6), (5, 6)]);
        arcs.extend((0..7).map(|v| (v, 7)));
        let d = Digraph::new(8, arcs).unwrap();
        let g = is_good_digraph(&d);
        assert!(!g.good);
        // Vertex 6 closes 2-paths across every pair, so Δ has no arcs and each pair is its own K(ξ).
        assert_eq!(DependencyDigraph::build(&d).arcs().len(), 0);
        let pair = |a: usize| [a, a + 1].into_iter().collect::<VertexSet>();
        assert_eq!(g.verdicts, vec![(pair(0), false), (pair(2), false), (pair(4), false)]);
    }

    #[test]
    fn lemma3_examples() {
        let r = lemma3_check(&fixture("C4X").unwrap()).unwrap();
        assert!(r.hypothesis && r.good);
        let r = lemma3_check(&fixture("LC3").unwrap()).unwrap();
        assert!(r.hypothesis && r.good);
        // A single good edge: Δ is one isolated vertex, a trivial component.
        let r = lemma3_check(&Digraph::new(3, [(0, 1), (1, 2)]).unwrap()).unwrap();
        assert!(!r.hypothesis && !r.violated());
        let tri = Digraph::new(4, [(0, 3), (1, 3), (2, 3)]).unwrap();
        assert!(lemma3_check(&tri).is_err());
    }

    #[test]
    fn blocks_contiguity() {
        let b = Blocks::new(5, &[[1, 3].into_iter().collect()]);
        assert!(b.contiguous_in(&[0, 1, 3, 2, 4]));
        assert!(!b.contiguous_in(&[1, 0, 3, 2, 4]));
        assert_eq!(b.block_of(3).to_vec(), vec![1, 3]);
        assert_eq!(b.block_of(4).to_vec(), vec![4]);
    }

    #[test]
    fn tarjan_matches_reachability() {
        let adj = vec![vec![1], vec![2], vec![0, 3], vec![4], vec![3], vec![]];
        let mut comps = tarjan(&adj);
        for c in &mut comps {
            c.sort();
        }
        comps.sort();
        assert_eq!(comps, vec![vec![0, 1, 2], vec![3, 4], vec![5]]);
    }
}
