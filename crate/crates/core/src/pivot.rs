//! Pivot selection.
//!
//! Two rules are provided. The basic rule takes the vertex of `C ∪ X` with
//! the fewest non-neighbours among the opposite candidates. The
//! partition-based rule first splits `C` into `C'` (candidates that see all
//! of the opposite `X` and miss at most two opposite candidates) and the
//! rest, and only accepts pivots that can shrink `C \ C'` or `X`:
//!
//! * (C1) any vertex of `(C \ C') ∪ X`;
//! * (C2) a vertex of `C'` with a non-neighbour in the opposite `C \ C'`.
//!
//! Among the candidates the one with the fewest opposite non-neighbours in
//! `C` wins; ties prefer `X`, then the left side, then the lower index.

use crate::branch::Branch;
use crate::graph::{sorted_difference, sorted_intersection_len, BipartiteGraph, Side, VertexRef};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PivotDecision {
    pub pivot: VertexRef,
    pub pivot_in_c: bool,
    /// Vertices of `C` to branch on, in processing order.
    pub targets: Vec<VertexRef>,
}

impl PivotDecision {
    fn new(g: &BipartiteGraph, b: &Branch, pivot: VertexRef, pivot_in_c: bool) -> Self {
        let opp = pivot.side.opposite();
        let misses = sorted_difference(b.c(opp), g.neighbors(pivot));
        let mut targets = Vec::with_capacity(misses.len() + 1);
        if pivot_in_c {
            targets.push(pivot);
        }
        targets.extend(misses.into_iter().map(|i| VertexRef::new(opp, i)));
        PivotDecision {
            pivot,
            pivot_in_c,
            targets,
        }
    }
}

/// Basic rule: argmin of the complement degree against the opposite `C`
/// over all of `C ∪ X`. Ties: left side first, `C` before `X`, then index.
///
/// Panics when `C` is empty; terminal branches must be handled first.
pub fn pivot_basic(g: &BipartiteGraph, b: &Branch) -> PivotDecision {
    assert!(!b.c_is_empty(), "pivot_basic: candidate set is empty");
    let mut best: Option<(u32, VertexRef, bool)> = None;
    for side in Side::BOTH {
        for (list, cds, in_c) in [(b.c(side), b.c_cd(side), true), (b.x(side), b.x_cd(side), false)] {
            for (&v, &cd) in list.iter().zip(cds) {
                if best.map_or(true, |(d, _, _)| cd < d) {
                    best = Some((cd, VertexRef::new(side, v), in_c));
                }
            }
        }
    }
    let (_, pivot, in_c) = best.expect("non-empty C yields a pivot");
    PivotDecision::new(g, b, pivot, in_c)
}

/// Split of `C` into `C'` and `C \ C'`, as per-side sorted index lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    prime: [Vec<u32>; 2],
    rest: [Vec<u32>; 2],
    flags: [Vec<bool>; 2],
}

impl Partition {
    /// `C'` on `side`.
    pub fn prime(&self, side: Side) -> &[u32] {
        &self.prime[side.idx()]
    }

    /// `C \ C'` on `side`.
    pub fn rest(&self, side: Side) -> &[u32] {
        &self.rest[side.idx()]
    }

    /// Membership flags aligned with `Branch::c(side)`.
    fn flags(&self, side: Side) -> &[bool] {
        &self.flags[side.idx()]
    }
}

pub fn compute_partition(b: &Branch) -> Partition {
    let mut p = Partition {
        prime: [Vec::new(), Vec::new()],
        rest: [Vec::new(), Vec::new()],
        flags: [Vec::new(), Vec::new()],
    };
    for side in Side::BOTH {
        let i = side.idx();
        for ((&v, &cd), &xcd) in b.c(side).iter().zip(b.c_cd(side)).zip(b.c_xcd(side)) {
            let inside = xcd == 0 && cd <= 2;
            p.flags[i].push(inside);
            if inside {
                p.prime[i].push(v);
            } else {
                p.rest[i].push(v);
            }
        }
    }
    p
}

/// True when `v` (in `C'`) misses some vertex of the opposite `C \ C'`.
fn misses_rest(g: &BipartiteGraph, v: VertexRef, p: &Partition) -> bool {
    let rest = p.rest(v.side.opposite());
    !rest.is_empty() && sorted_intersection_len(g.neighbors(v), rest) < rest.len()
}

/// All vertices satisfying (C1) or (C2), in canonical vertex order.
pub fn candidate_pivots(g: &BipartiteGraph, b: &Branch, p: &Partition) -> Vec<VertexRef> {
    let mut out = Vec::new();
    for side in Side::BOTH {
        out.extend(b.x(side).iter().map(|&v| VertexRef::new(side, v)));
        for (&v, &inside) in b.c(side).iter().zip(p.flags(side)) {
            let vr = VertexRef::new(side, v);
            if !inside || misses_rest(g, vr, p) {
                out.push(vr);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Partition-based rule. `None` exactly when no candidate exists, which
/// happens iff `X` is empty and `S ∪ C` is a 2-biplex.
pub fn pivot_partitioned(g: &BipartiteGraph, b: &Branch) -> Option<PivotDecision> {
    let p = compute_partition(b);
    let mut best: Option<(u32, VertexRef, bool)> = None;
    // X first so that ties resolve towards it
    for side in Side::BOTH {
        for (&v, &cd) in b.x(side).iter().zip(b.x_cd(side)) {
            if best.map_or(true, |(d, _, _)| cd < d) {
                best = Some((cd, VertexRef::new(side, v), false));
            }
        }
    }
    for side in Side::BOTH {
        for ((&v, &cd), &inside) in b.c(side).iter().zip(b.c_cd(side)).zip(p.flags(side)) {
            if best.is_some_and(|(d, _, _)| cd >= d) {
                continue;
            }
            let vr = VertexRef::new(side, v);
            if !inside || misses_rest(g, vr, &p) {
                best = Some((cd, vr, true));
            }
        }
    }
    best.map(|(_, pivot, in_c)| PivotDecision::new(g, b, pivot, in_c))
}
