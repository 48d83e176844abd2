//! Fixtures, seeded generators, losing-cycle gadgets and hypothesis-filtered search.

mod search;
mod spec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dependency::DependencyDigraph;
use crate::digraph::{Digraph, GraphError, VertexSet};
use crate::missing::{MissingEdge, MissingError, Star};
use crate::theorems::all_kings;

pub(crate) use search::extend;
pub use search::{filtered_search, structured_instance, SearchReport};
pub use spec::{InstanceSpec, SpecError};

pub const FIXTURES: [&str; 5] = ["C3", "TT3", "C4X", "LC3", "ST1"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ForgeError {
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
    #[error("no all-kings tournament exists on {0} vertices")]
    Unrealizable(usize),
    #[error("no all-kings tournament found on {n} vertices within {tries} candidates")]
    SearchExhausted { n: usize, tries: u64 },
    #[error("star vertex sets overlap at {0}")]
    Overlap(VertexSet),
    #[error("pair {0}~{1} has no arc to delete")]
    AbsentEdge(usize, usize),
    #[error("gadget for k = {k} deviates from the losing cycle: {detail}")]
    AssertionFailed { k: usize, detail: String },
    #[error("no {theorem} instance on {n} vertices within {tries} candidates")]
    NoInstance { theorem: String, n: usize, tries: u64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Missing(#[from] MissingError),
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture(name: &str) -> Result<Digraph, ForgeError> {
    let (n, arcs): (usize, &[(usize, usize)]) = match name {
        "C3" => (3, &[(0, 1), (1, 2), (2, 0)]),
        "TT3" => (3, &[(0, 1), (0, 2), (1, 2)]),
        "C4X" => (4, &[(0, 1), (1, 2), (2, 3), (3, 0)]),
        "LC3" => (6, &[(0, 2), (0, 5), (1, 3), (1, 4), (2, 4), (2, 1), (3, 5), (3, 0), (4, 0), (4, 3), (5, 1), (5, 2)]),
        "ST1" => (4, &[(1, 2), (2, 3), (3, 1), (0, 3)]),
        _ => return Err(ForgeError::UnknownFixture(name.to_string())),
    };
    Ok(Digraph::new(n, arcs.iter().copied())?)
}

pub fn random_tournament(n: usize, seed: u64) -> Digraph {
    tournament_from(n, &mut rng(seed))
}

pub(crate) fn tournament_from(n: usize, r: &mut impl Rng) -> Digraph {
    let mut arcs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            arcs.push(if r.gen_bool(0.5) { (u, v) } else { (v, u) });
        }
    }
    Digraph::new(n, arcs).expect("one arc per pair")
}

/// Each pair is present with probability `density`, in a uniformly random direction.
pub fn random_digraph(n: usize, seed: u64, density: f64) -> Digraph {
    let mut r = rng(seed);
    let density = density.clamp(0.0, 1.0);
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if r.gen_bool(density) {
                arcs.push(if r.gen_bool(0.5) { (u, v) } else { (v, u) });
            }
        }
    }
    Digraph::new(n, arcs).expect("at most one arc per pair")
}

/// Rotational tournament for odd `n`; seeded search for even `n ≥ 6`.
pub fn all_kings_tournament(n: usize) -> Result<Digraph, ForgeError> {
    if n == 2 || n == 4 {
        return Err(ForgeError::Unrealizable(n));
    }
    if n % 2 == 1 {
        let half = (n - 1) / 2;
        let arcs = (0..n).flat_map(|i| (1..=half).map(move |d| (i, (i + d) % n)));
        return Ok(Digraph::new(n, arcs)?);
    }
    const TRIES: u64 = 100_000;
    for seed in 0..TRIES {
        let t = random_tournament(n, seed);
        if all_kings(&t).unwrap_or(false) {
            return Ok(t);
        }
    }
    Err(ForgeError::SearchExhausted { n, tries: TRIES })
}

/// Removes the arcs realizing each star edge.
pub fn delete_disjoint_stars(t: &Digraph, stars: &[Star]) -> Result<Digraph, ForgeError> {
    let mut used = VertexSet::EMPTY;
    for s in stars {
        t.check_subset(s.vertices())?;
        if !used.is_disjoint(s.vertices()) {
            return Err(ForgeError::Overlap(used.intersection(s.vertices())));
        }
        used = used.union(s.vertices());
    }
    let mut d = t.clone();
    for s in stars {
        for e in s.edges() {
            if !d.adjacent(e.lo(), e.hi()) {
                return Err(ForgeError::AbsentEdge(e.lo(), e.hi()));
            }
            d = d.without_pair(e.lo(), e.hi());
        }
    }
    Ok(d)
}

/// Random tournament minus stars with the given leaf counts on randomly chosen vertices.
pub fn star_deleted(n: usize, leaf_counts: &[usize], seed: u64) -> Result<Digraph, ForgeError> {
    let mut r = rng(seed);
    let t = tournament_from(n, &mut r);
    let stars = random_stars(n, leaf_counts, &mut r)?;
    delete_disjoint_stars(&t, &stars)
}

pub(crate) fn random_stars(n: usize, leaf_counts: &[usize], r: &mut impl Rng) -> Result<Vec<Star>, ForgeError> {
    let needed: usize = leaf_counts.iter().map(|c| c + 1).sum();
    if needed > n {
        return Err(ForgeError::Graph(GraphError::VertexOutOfRange { vertex: needed - 1, n }));
    }
    let mut verts: Vec<usize> = (0..n).collect();
    verts.shuffle(r);
    let mut next = verts.into_iter();
    Ok(leaf_counts
        .iter()
        .map(|&c| {
            let center = next.next().expect("enough vertices");
            let leaves: VertexSet = (0..c).map(|_| next.next().expect("enough vertices")).collect();
            Star { center, leaves }
        })
        .collect())
}

/// `a_i = 2(i−1)`, `b_i = 2(i−1)+1` for `i = 1..k`.
pub fn gadget_a(i: usize) -> usize {
    2 * (i - 1)
}

pub fn gadget_b(i: usize) -> usize {
    2 * (i - 1) + 1
}

/// Vertex `a_j` (`is_a`) or `b_j` for any `j ≥ 1`; for even `k` the labels swap on wrapping.
fn gadget_vertex(k: usize, is_a: bool, j: usize) -> usize {
    let wraps = (j - 1) / k;
    let i = (j - 1) % k + 1;
    let is_a = if k % 2 == 0 && wraps % 2 == 1 { !is_a } else { is_a };
    if is_a {
        gadget_a(i)
    } else {
        gadget_b(i)
    }
}

/// Digraph on `a_1 b_1 … a_k b_k` whose missing edges `a_i b_i` form a losing `k`-cycle.
///
/// `a_i` beats `a_{i+d}` for odd `d` and `b_{i+d}` for even `d`, `b_i` symmetrically.
pub fn losing_cycle_gadget(k: usize) -> Result<Digraph, ForgeError> {
    if k < 2 {
        return Err(ForgeError::AssertionFailed { k, detail: "k must be at least 2".into() });
    }
    let mut arcs = Vec::new();
    for i in 1..=k {
        for d in 1..k {
            let odd = d % 2 == 1;
            arcs.push((gadget_a(i), gadget_vertex(k, odd, i + d)));
            arcs.push((gadget_b(i), gadget_vertex(k, !odd, i + d)));
        }
    }
    let d = Digraph::new(2 * k, arcs).map_err(|e| ForgeError::AssertionFailed { k, detail: e.to_string() })?;
    check_gadget(k, &d)?;
    Ok(d)
}

fn check_gadget(k: usize, d: &Digraph) -> Result<(), ForgeError> {
    let fail = |detail: String| ForgeError::AssertionFailed { k, detail };
    let expected: Vec<MissingEdge> = (1..=k).map(|i| MissingEdge::new(gadget_a(i), gadget_b(i)).expect("distinct")).collect();
    if d.missing_edges() != expected {
        return Err(fail(format!("missing edges {:?}", d.missing_edges())));
    }
    let delta = DependencyDigraph::build(d);
    let mut arcs: Vec<(usize, usize)> = delta.arcs().iter().map(|a| (a.from, a.to)).collect();
    arcs.sort();
    let mut cycle: Vec<(usize, usize)> = (0..k).map(|i| (i, (i + 1) % k)).collect();
    cycle.sort();
    if arcs != cycle {
        return Err(fail(format!("Δ arcs {arcs:?}")));
    }
    for v in 0..2 * k {
        let (p, m, pp) = (d.out_degree(v), d.in_degree(v), d.second_out_set(v).len());
        if p != k - 1 || m != k - 1 || pp != k - 1 {
            return Err(fail(format!("vertex {v}: d⁺={p}, d⁻={m}, d⁺⁺={pp}")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::missing::decompose;

    #[test]
    fn fixture_shapes() {
        for name in FIXTURES {
            let d = fixture(name).unwrap();
            assert_eq!(
                d.n(),
                if name == "LC3" {
                    6
                } else if name == "C4X" || name == "ST1" {
                    4
                } else {
                    3
                }
            );
        }
        assert!(fixture("K5").is_err());
        let dec = decompose(&fixture("ST1").unwrap()).unwrap();
        assert_eq!(dec.stars, vec![Star { center: 0, leaves: [1, 2].into_iter().collect() }]);
        assert!(all_kings(&fixture("C3").unwrap()).unwrap());
    }

    #[test]
    fn random_generators() {
        assert_eq!(random_tournament(3, 9).arc_count(), 3);
        assert_eq!(random_tournament(8, 4), random_tournament(8, 4));
        assert!(random_digraph(5, 2, 1.0).is_tournament());
        assert_eq!(random_digraph(5, 2, 0.0).arc_count(), 0);
    }

    #[test]
    fn kings() {
        assert_eq!(all_kings_tournament(3).unwrap(), fixture("C3").unwrap());
        assert!(matches!(all_kings_tournament(4), Err(ForgeError::Unrealizable(4))));
        assert!(matches!(all_kings_tournament(2), Err(ForgeError::Unrealizable(2))));
        for n in [1, 5, 6, 7, 8, 9] {
            let t = all_kings_tournament(n).unwrap();
            assert!(t.is_tournament() && all_kings(&t).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn star_deletion_round_trip() {
        let st1 = fixture("ST1").unwrap();
        let t = st1.with_arcs([(1, 0), (2, 0)]).unwrap();
        let star = Star { center: 0, leaves: [1, 2].into_iter().collect() };
        assert_eq!(delete_disjoint_stars(&t, std::slice::from_ref(&star)).unwrap(), st1);
        let t = random_tournament(6, 1);
        assert_eq!(delete_disjoint_stars(&t, &[]).unwrap(), t);
        let m = delete_disjoint_stars(
            &t,
            &[Star { center: 0, leaves: VertexSet::singleton(1) }, Star { center: 2, leaves: VertexSet::singleton(3) }],
        )
        .unwrap();
        assert_eq!(decompose(&m).unwrap().matching.len(), 2);
        assert!(matches!(delete_disjoint_stars(&t, &[star.clone(), star]), Err(ForgeError::Overlap(_))));
        for seed in 0..50 {
            let d = star_deleted(11, &[3, 2, 1], seed).unwrap();
            let dec = decompose(&d).unwrap();
            let mut sizes: Vec<usize> = dec.as_stars().iter().map(|s| s.leaves.len()).collect();
            sizes.sort();
            assert_eq!(sizes, vec![1, 2, 3]);
        }
    }

    #[test]
    fn gadget_reproduces_lc3() {
        assert_eq!(losing_cycle_gadget(3).unwrap(), fixture("LC3").unwrap());
        let g4 = losing_cycle_gadget(4).unwrap();
        assert!(g4.has_arc(gadget_a(4), gadget_b(1)));
        let g5 = losing_cycle_gadget(5).unwrap();
        assert!((0..10).all(|v| g5.out_degree(v) == 4));
    }
}
