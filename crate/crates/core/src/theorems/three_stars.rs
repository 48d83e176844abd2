use crate::dependency::{ComponentIndex, DependencyDigraph};
use crate::digraph::{Digraph, VertexSet, Weighting};
use crate::missing::{decompose, Star};
use crate::order::{analyze, exact_median_order, good_median_order, Exactness, Tiebreak};

use super::assembly::two_witnesses;
use super::gates::{hypotheses, triangle_assignments};
use super::star_matching::require_good;
use super::two_stars::{convenient_completion, star_toward, sub_tournament_witnesses};
use super::{check_cap, is_median, Run, SnpCertificate, TheoremError, TheoremId};

/// Stars `S_x, S_y, S_z` with `x -> y -> z -> x`.
struct Triangle {
    stars: [Star; 3],
}

impl Triangle {
    fn new(stars: &[Star], (x, y, z): (usize, usize, usize)) -> Self {
        let find = |c: usize| stars.iter().find(|s| s.center == c).expect("center").clone();
        Triangle { stars: [find(x), find(y), find(z)] }
    }

    fn centers(&self) -> VertexSet {
        self.stars.iter().map(|s| s.center).collect()
    }

    fn vertices(&self) -> VertexSet {
        self.stars.iter().fold(VertexSet::EMPTY, |acc, s| acc.union(s.vertices()))
    }

    fn star_of(&self, v: usize) -> Option<usize> {
        self.stars.iter().position(|s| s.vertices().contains(v))
    }
}

/// Δ arcs only go from a star to the star of the next center.
fn delta_shape(d: &Digraph, tri: &Triangle) -> bool {
    let delta = DependencyDigraph::build(d);
    delta.arcs().iter().all(|arc| {
        let from = tri.star_of(delta.edge(arc.from).lo());
        let to = tri.star_of(delta.edge(arc.to).lo());
        matches!((from, to), (Some(i), Some(j)) if j == (i + 1) % 3)
    })
}

/// `b -> x -> c -> y -> a -> z -> b` for all leaves.
fn arc_pattern(d: &Digraph, tri: &Triangle) -> bool {
    (0..3).all(|i| {
        let s = &tri.stars[i];
        let prev = &tri.stars[(i + 2) % 3];
        prev.leaves.iter().all(|c| d.has_arc(s.center, c)) && s.leaves.iter().all(|a| d.has_arc(a, prev.center))
    })
}

fn choose(
    run: &mut Run,
    d: &Digraph,
    claim: &dyn Fn(&Digraph, &Triangle) -> bool,
    label: &str,
) -> Result<Triangle, TheoremError> {
    let dec = decompose(d)?;
    let all = triangle_assignments(d, &dec);
    let mut tris = all.iter().map(|(stars, xyz)| Triangle::new(stars, *xyz));
    let first = tris.next().ok_or_else(|| run.inconsistent("gate passed without a directed triangle"))?;
    if claim(d, &first) {
        run.check(label, true);
        return Ok(first);
    }
    let found = tris.find(|t| claim(d, t));
    run.check(label, found.is_some());
    Ok(found.unwrap_or(first))
}

/// Three stars on a directed triangle with `δ_Δ > 0`: feed of a median order
/// maximizing the index sum of the centers.
pub fn three_stars_witness(d: &Digraph, cap: usize) -> Result<SnpCertificate, TheoremError> {
    let mut run = Run::new(TheoremId::ThreeStars, cap);
    run.gate(hypotheses(TheoremId::ThreeStars, d))?;
    run.notes.push("the conclusion \"D satisfies EC\" is read as SNC".into());
    check_cap(d.n(), cap)?;
    let tri = choose(&mut run, d, &delta_shape, "Δ arcs only of the forms xa→yb, yb→zc, zc→xa")?;
    let t = convenient_completion(&mut run, d, &tri.stars)?;
    let w = Weighting::unit(d.n());
    let l = exact_median_order(&t, &w, &Tiebreak::MaxIndexSum(tri.centers()), cap)?.order;
    run.order("L", l.as_slice());
    let f = l.feed().expect("nonempty");
    match tri.star_of(f) {
        None => {
            run.case("whole");
            run.check("N⁺⁺(f) = N⁺⁺_T(f)", d.second_out_set(f) == t.second_out_set(f));
        }
        Some(i) if tri.stars[i].center == f => {
            run.case("center");
            let t2 = star_toward(&t, &tri.stars[i], true);
            run.check("L is a median order of the reoriented completion", is_median(&t2, l.as_slice(), cap)?);
            run.check("N⁺⁺(f) = N⁺⁺_T'(f)", d.second_out_set(f) == t2.second_out_set(f));
        }
        Some(i) => {
            run.case("leaf");
            let c = tri.stars[i].center;
            let next = tri.stars[(i + 1) % 3].center;
            let t2 = t.reoriented(c, f);
            run.check("L is a median order of the reoriented completion", is_median(&t2, l.as_slice(), cap)?);
            let pp = t2.second_out_set(f);
            let a = analyze(&t2, &w, &l)?;
            let tight = pp.contains(next) && t2.out_degree(f) >= pp.len();
            run.check("branch next center ∈ N⁺⁺_T'(a) with d⁺_T'(a) = d⁺⁺_T'(a) not reached", !tight);
            run.note(format!("|G_L| = {}", a.good.len()));
        }
    }
    run.finish(d, vec![f])
}

/// Three stars on a directed triangle, `δ⁺_Δ, δ⁻_Δ > 0`, no sink: at least two witnesses.
pub fn three_stars_two_witnesses(d: &Digraph, cap: usize) -> Result<SnpCertificate, TheoremError> {
    let mut run = Run::new(TheoremId::ThreeStarsTwo, cap);
    run.gate(hypotheses(TheoremId::ThreeStarsTwo, d))?;
    check_cap(d.n(), cap)?;
    let tri = choose(&mut run, d, &arc_pattern, "b→x→c→y→a→z→b")?;
    let index = ComponentIndex::build(d);
    require_good(&run, d, &index)?;
    let l = good_median_order(d, &Weighting::unit(d.n()), Exactness::Exact, cap)?.order;
    run.order("L", l.as_slice());
    let k = tri.vertices();
    let centers = tri.centers();
    let witnesses = two_witnesses(&mut run, d, &index, l.as_slice(), &mut |run, j| {
        if j != k {
            return Err(run.inconsistent(format!("block {j} differs from K = {k}")));
        }
        let mut out = sub_tournament_witnesses(run, d, k, centers, 2)?;
        let size = |i: usize| tri.stars[i].leaves.len();
        // x if |C| ≤ |A|, y if |A| ≤ |B|, otherwise z.
        let center = if size(2) <= size(0) {
            0
        } else if size(0) <= size(1) {
            1
        } else {
            2
        };
        out.push(tri.stars[center].center);
        Ok(out)
    })?;
    run.finish(d, witnesses)
}
