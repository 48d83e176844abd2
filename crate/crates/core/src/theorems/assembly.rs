use crate::dependency::ComponentIndex;
use crate::digraph::{Digraph, VertexSet};
use crate::order::{analyze_in, default_budget, sediment_in, Scaled, SedimentOutcome};

use super::{Run, TheoremError};

/// Witnesses inside a block `J` of size at least two, in the labels of `d`.
pub(crate) type Interior<'a> = dyn FnMut(&mut Run, VertexSet) -> Result<Vec<usize>, TheoremError> + 'a;

/// Two witnesses from a good median order `order` of `d`.
///
/// A feed inside a non-trivial block yields the interior witnesses. Otherwise the
/// whole feed is the first witness and the second comes from sedimenting the
/// prefix order: the feed of the stable order, or, for a periodic prefix, the
/// feed of an order in which an out-neighbor of the original feed is bad.
pub(crate) fn two_witnesses(
    run: &mut Run,
    d: &Digraph,
    index: &ComponentIndex,
    order: &[usize],
    interior: &mut Interior,
) -> Result<Vec<usize>, TheoremError> {
    let n = d.n();
    let f = *order.last().ok_or_else(|| run.inconsistent("empty order"))?;
    let j = index.j_set(f);
    if j.len() > 1 {
        run.case("feed-in-block");
        let inside = interior(run, j)?;
        return Ok(inside);
    }
    run.case("feed-whole");
    if n < 2 {
        return Err(run.inconsistent("a single vertex has no second witness"));
    }
    let s = Scaled::unit(n);
    let blocks = index.blocks(n);
    let prefix = &order[..n - 1];
    let trace = sediment_in(d, &s, &blocks, prefix, default_budget(n - 1));
    run.check("sedimentation steps keep the weight and the feedback property", trace.consistent());
    let chosen = match trace.outcome {
        SedimentOutcome::Stable { q } => {
            run.case(format!("prefix-stable(q={q})"));
            q
        }
        SedimentOutcome::Periodic { start, length } => {
            run.case(format!("prefix-periodic(start={start},length={length})"));
            let outs = d.out_set(f);
            let distinct = &trace.orders[..trace.orders.len() - 1];
            let found = distinct.iter().position(|ord| {
                let a = analyze_in(d, &s, ord);
                let jq = blocks.block_of(a.feed);
                !outs.intersection(a.bad).difference(jq).is_empty()
            });
            found.ok_or_else(|| run.inconsistent("no out-neighbor of the feed is bad in any order of the period"))?
        }
        SedimentOutcome::BudgetExceeded => return Err(run.inconsistent("sedimentation budget exhausted")),
        SedimentOutcome::Invalid { q } => {
            return Err(run.inconsistent(format!("sedimented order {q} violates the block inequality")))
        }
    };
    let sedq = &trace.orders[chosen];
    run.order(format!("Sed^{chosen}(L')"), sedq);
    let g = *sedq.last().expect("nonempty prefix");
    let scope: VertexSet = sedq.iter().copied().collect();
    let jg = blocks.block_of(g).intersection(scope);
    let mut out = vec![f];
    if jg.len() > 1 {
        out.extend(interior(run, jg)?);
    } else {
        out.push(g);
    }
    Ok(out)
}
