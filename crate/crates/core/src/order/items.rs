use crate::dependency::Blocks;
use crate::digraph::{Digraph, VertexSet};

use super::{OrderError, Scaled};

/// Weighted items for the order solvers: single vertices or whole blocks.
///
/// Arc weights are products of item weights, so a block behaves like one vertex
/// carrying the sum of its members' weights. Masks are over item indices.
#[derive(Debug, Clone)]
pub(crate) struct Items {
    pub out: Vec<u64>,
    pub inn: Vec<u64>,
    pub w: Vec<i128>,
    pub size: Vec<i128>,
    /// Tiebreak score of an item starting at position `p` (1-based): `cnt·p + base`.
    pub tie_cnt: Vec<i64>,
    pub tie_base: Vec<i64>,
    /// Vertices of each item, in their internal order.
    pub members: Vec<Vec<usize>>,
}

impl Items {
    pub fn len(&self) -> usize {
        self.w.len()
    }

    /// One item per vertex of `verts`.
    pub fn vertices(d: &Digraph, s: &Scaled, verts: &[usize], target: VertexSet) -> Self {
        let pos: Vec<(usize, usize)> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let compact =
            |set: VertexSet| -> u64 { pos.iter().filter(|&&(v, _)| set.contains(v)).fold(0, |acc, &(_, i)| acc | 1 << i) };
        Items {
            out: verts.iter().map(|&v| compact(d.out_set(v))).collect(),
            inn: verts.iter().map(|&v| compact(d.in_set(v))).collect(),
            w: verts.iter().map(|&v| s.w[v]).collect(),
            size: vec![1; verts.len()],
            tie_cnt: verts.iter().map(|&v| i64::from(target.contains(v))).collect(),
            tie_base: vec![0; verts.len()],
            members: verts.iter().map(|&v| vec![v]).collect(),
        }
    }

    /// One item per block, given each block's internal order.
    pub fn quotient(d: &Digraph, s: &Scaled, blocks: &[Vec<usize>], target: VertexSet) -> Result<Self, OrderError> {
        let k = blocks.len();
        let mut out = vec![0u64; k];
        let mut inn = vec![0u64; k];
        for a in 0..k {
            for b in 0..k {
                if a == b {
                    continue;
                }
                let (ra, rb) = (blocks[a][0], blocks[b][0]);
                let forward = d.has_arc(ra, rb);
                for &u in &blocks[a] {
                    for &v in &blocks[b] {
                        if d.has_arc(u, v) != forward || !d.adjacent(u, v) {
                            let bad = if blocks[a].len() > 1 { &blocks[a] } else { &blocks[b] };
                            return Err(OrderError::NotGood(bad.iter().copied().collect()));
                        }
                    }
                }
                if forward {
                    out[a] |= 1 << b;
                    inn[b] |= 1 << a;
                }
            }
        }
        let mut tie_cnt = Vec::with_capacity(k);
        let mut tie_base = Vec::with_capacity(k);
        for b in blocks {
            let hits: Vec<i64> = b.iter().enumerate().filter(|&(_, &v)| target.contains(v)).map(|(i, _)| i as i64).collect();
            tie_cnt.push(hits.len() as i64);
            tie_base.push(hits.iter().sum());
        }
        Ok(Items {
            out,
            inn,
            w: blocks.iter().map(|b| b.iter().map(|&v| s.w[v]).sum()).collect(),
            size: blocks.iter().map(|b| b.len() as i128).collect(),
            tie_cnt,
            tie_base,
            members: blocks.to_vec(),
        })
    }

    pub fn wsum(&self, mask: u64) -> i128 {
        mask_iter(mask).map(|i| self.w[i]).sum()
    }

    pub fn sizesum(&self, mask: u64) -> i128 {
        mask_iter(mask).map(|i| self.size[i]).sum()
    }

    /// Flattens an item order into a vertex order.
    pub fn expand(&self, order: &[usize]) -> Vec<usize> {
        order.iter().flat_map(|&i| self.members[i].iter().copied()).collect()
    }

    /// `(weight, aux)` of the forward arcs of an item order.
    pub fn potential(&self, order: &[usize]) -> (i128, i128) {
        let mut seen = 0u64;
        let (mut weight, mut aux) = (0, 0);
        for &i in order {
            let back = self.inn[i] & seen;
            let ws = self.wsum(back);
            weight += self.w[i] * ws;
            aux += self.size[i] * ws + self.w[i] * self.sizesum(back);
            seen |= 1 << i;
        }
        (weight, aux)
    }
}

/// Blocks of `blocks` meeting `scope`, restricted to it, in order of first member.
pub(crate) fn scoped_blocks(blocks: &Blocks, scope: VertexSet) -> Vec<VertexSet> {
    let mut out: Vec<VertexSet> = Vec::new();
    for v in scope {
        let b = blocks.block_of(v).intersection(scope);
        if !out.contains(&b) {
            out.push(b);
        }
    }
    out
}

pub(crate) fn mask_iter(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}
