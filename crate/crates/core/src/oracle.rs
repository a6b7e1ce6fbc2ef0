//! Exhaustive reference enumerator for small graphs.
//!
//! Every non-empty subset `A` of one side is visited in Gray-code order
//! while per-vertex hit counts on the other side are kept up to date. `A`
//! yields a maximal biclique when its common neighbourhood `B` is non-empty
//! and no vertex outside `A` sees all of `B`.

use std::collections::BTreeSet;

use crate::enumerate::BicliqueResult;
use crate::error::GraphError;
use crate::graph::{BipartiteGraph, Side, SizeConstraints, VertexRef};

pub type ResultSet = BTreeSet<BicliqueResult>;

pub const ORACLE_MAX_SIDE: usize = 24;

/// Runs over the smaller side.
pub fn oracle_enumerate(g: &BipartiteGraph, k: &SizeConstraints) -> Result<ResultSet, GraphError> {
    let side = if g.left_count() <= g.right_count() { Side::Left } else { Side::Right };
    oracle_enumerate_via(g, k, side)
}

pub fn oracle_enumerate_via(g: &BipartiteGraph, k: &SizeConstraints, side: Side) -> Result<ResultSet, GraphError> {
    let n = g.count(side);
    if n > ORACLE_MAX_SIDE {
        return Err(GraphError::InvalidArgument(format!(
            "oracle side has {n} vertices, limit is {ORACLE_MAX_SIDE}"
        )));
    }
    let opp = side.opposite();
    let m = g.count(opp);
    let mut hits = vec![0u32; m];
    let mut in_a = vec![false; n];
    let mut size = 0u32;
    let mut out = ResultSet::new();

    for step in 1u64..(1u64 << n) {
        let bit = step.trailing_zeros() as usize;
        let v = VertexRef::new(side, bit as u32);
        in_a[bit] = !in_a[bit];
        if in_a[bit] {
            size += 1;
            for &w in g.neighbors(v) {
                hits[w as usize] += 1;
            }
        } else {
            size -= 1;
            for &w in g.neighbors(v) {
                hits[w as usize] -= 1;
            }
        }

        let b: Vec<u32> = (0..m as u32).filter(|&w| hits[w as usize] == size).collect();
        if b.is_empty() {
            continue;
        }
        let (nl, nr) = match side {
            Side::Left => (size as usize, b.len()),
            Side::Right => (b.len(), size as usize),
        };
        if !k.admits(nl, nr) {
            continue;
        }
        // closure: the vertices of `side` seeing all of B are exactly A
        let closed = (0..n).filter(|&u| !in_a[u]).all(|u| {
            let nb = g.neighbors(VertexRef::new(side, u as u32));
            b.iter().any(|w| nb.binary_search(w).is_err())
        });
        if !closed {
            continue;
        }
        let a: Vec<u32> = (0..n as u32).filter(|&u| in_a[u as usize]).collect();
        let r = match side {
            Side::Left => BicliqueResult::from_indices(g, &a, &b),
            Side::Right => BicliqueResult::from_indices(g, &b, &a),
        };
        out.insert(r);
    }
    Ok(out)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Diff {
    pub only_a: Vec<BicliqueResult>,
    pub only_b: Vec<BicliqueResult>,
}

impl Diff {
    pub fn is_empty(&self) -> bool {
        self.only_a.is_empty() && self.only_b.is_empty()
    }
}

pub fn compare(a: &ResultSet, b: &ResultSet) -> Diff {
    Diff {
        only_a: a.difference(b).cloned().collect(),
        only_b: b.difference(a).cloned().collect(),
    }
}
