//! Branch state `(S, C, X)` of the branch-and-bound search.
//!
//! Each of the six per-side sets is a strictly ascending index list. Next to
//! the sets the branch caches, for every candidate and exclusion vertex, the
//! number of non-neighbours it has among the candidates of the opposite side,
//! and for every candidate the number of non-neighbours among the opposite
//! exclusion set. The counters are patched incrementally by [`Branch::expand`].

use crate::graph::{sorted_intersection_len, BipartiteGraph, Side, SizeConstraints, VertexRef};

/// Algorithm tier. `Basic` branches until `C` is exhausted, `Bps` adds the
/// 2-biplex stopping criterion, `Ips` also switches to partition-based
/// pivoting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tier {
    Basic,
    Bps,
    Ips,
}

impl Tier {
    pub const ALL: [Tier; 3] = [Tier::Basic, Tier::Bps, Tier::Ips];

    pub fn name(self) -> &'static str {
        match self {
            Tier::Basic => "basic",
            Tier::Bps => "bps",
            Tier::Ips => "ips",
        }
    }

    pub fn uses_biplex_stop(self) -> bool {
        !matches!(self, Tier::Basic)
    }
}

impl std::str::FromStr for Tier {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "basic" => Ok(Tier::Basic),
            "bps" => Ok(Tier::Bps),
            "ips" => Ok(Tier::Ips),
            other => Err(format!("unknown algorithm tier {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminalKind {
    NotTerminal,
    /// `C` and `X` are both empty: `S` is the only candidate.
    TrivialMaximal,
    /// `C` is empty but `X` is not: nothing maximal remains.
    TrivialDead,
    /// `S ∪ C` induces a 2-biplex and `X` is empty.
    BiplexBatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    S,
    C,
    X,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Branch {
    s: [Vec<u32>; 2],
    c: [Vec<u32>; 2],
    x: [Vec<u32>; 2],
    /// `c_cd[side][i]`: non-neighbours of `c[side][i]` in `c[opp]`.
    c_cd: [Vec<u32>; 2],
    /// `x_cd[side][i]`: non-neighbours of `x[side][i]` in `c[opp]`.
    x_cd: [Vec<u32>; 2],
    /// `c_xcd[side][i]`: non-neighbours of `c[side][i]` in `x[opp]`.
    c_xcd: [Vec<u32>; 2],
}

/// Reusable per-graph work arrays for [`Branch::expand_with`].
#[derive(Debug, Clone)]
pub struct Scratch {
    mark: [Vec<bool>; 2],
    hits: [Vec<i32>; 2],
}

impl Scratch {
    pub fn new(g: &BipartiteGraph) -> Self {
        Scratch {
            mark: [vec![false; g.left_count()], vec![false; g.right_count()]],
            hits: [vec![0; g.left_count()], vec![0; g.right_count()]],
        }
    }

    /// Adds `weight` to the hit counter of every neighbour of `from`.
    fn spread(&mut self, g: &BipartiteGraph, side: Side, from: &[u32], weight: i32) {
        let h = &mut self.hits[side.opposite().idx()];
        for &d in from {
            for &nb in g.neighbors(VertexRef::new(side, d)) {
                h[nb as usize] += weight;
            }
        }
    }

    fn unspread(&mut self, g: &BipartiteGraph, side: Side, from: &[u32]) {
        let h = &mut self.hits[side.opposite().idx()];
        for &d in from {
            for &nb in g.neighbors(VertexRef::new(side, d)) {
                h[nb as usize] = 0;
            }
        }
    }
}

fn merge_sorted(a: &[u32], av: &[u32], b: &[u32], bv: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut vals = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i] < b[j]) {
            out.push(a[i]);
            vals.push(av[i]);
            i += 1;
        } else {
            out.push(b[j]);
            vals.push(bv[j]);
            j += 1;
        }
    }
    (out, vals)
}

impl Branch {
    /// The search root: `S = X = ∅` and `C` holds every vertex of positive
    /// degree. Degree-0 vertices can never join a biclique.
    pub fn make_root(g: &BipartiteGraph) -> Branch {
        let c = Side::BOTH.map(|side| {
            (0..g.count(side) as u32)
                .filter(|&i| g.degree(VertexRef::new(side, i)) > 0)
                .collect::<Vec<_>>()
        });
        let mut b = Branch {
            c,
            ..Branch::default()
        };
        b.recompute_caches(g);
        b
    }

    /// Builds a branch from explicit sets and computes its caches from
    /// scratch. Fails when the sets break a branch invariant.
    pub fn from_sets(
        g: &BipartiteGraph,
        s: &[VertexRef],
        c: &[VertexRef],
        x: &[VertexRef],
    ) -> Result<Branch, String> {
        fn split(vs: &[VertexRef]) -> [Vec<u32>; 2] {
            let mut out: [Vec<u32>; 2] = [Vec::new(), Vec::new()];
            for v in vs {
                out[v.side.idx()].push(v.index);
            }
            for o in out.iter_mut() {
                o.sort_unstable();
            }
            out
        }
        let mut b = Branch {
            s: split(s),
            c: split(c),
            x: split(x),
            ..Branch::default()
        };
        b.recompute_caches(g);
        b.check_invariants(g)?;
        Ok(b)
    }

    #[inline]
    pub fn s(&self, side: Side) -> &[u32] {
        &self.s[side.idx()]
    }

    #[inline]
    pub fn c(&self, side: Side) -> &[u32] {
        &self.c[side.idx()]
    }

    #[inline]
    pub fn x(&self, side: Side) -> &[u32] {
        &self.x[side.idx()]
    }

    /// Cached `d̄(c, C_opp)` aligned with [`Branch::c`].
    #[inline]
    pub fn c_cd(&self, side: Side) -> &[u32] {
        &self.c_cd[side.idx()]
    }

    /// Cached `d̄(x, C_opp)` aligned with [`Branch::x`].
    #[inline]
    pub fn x_cd(&self, side: Side) -> &[u32] {
        &self.x_cd[side.idx()]
    }

    /// Cached `d̄(c, X_opp)` aligned with [`Branch::c`].
    #[inline]
    pub fn c_xcd(&self, side: Side) -> &[u32] {
        &self.c_xcd[side.idx()]
    }

    pub fn c_is_empty(&self) -> bool {
        self.c[0].is_empty() && self.c[1].is_empty()
    }

    pub fn x_is_empty(&self) -> bool {
        self.x[0].is_empty() && self.x[1].is_empty()
    }

    pub fn s_len(&self) -> usize {
        self.s[0].len() + self.s[1].len()
    }

    pub fn c_len(&self) -> usize {
        self.c[0].len() + self.c[1].len()
    }

    pub fn x_len(&self) -> usize {
        self.x[0].len() + self.x[1].len()
    }

    pub fn role_of(&self, v: VertexRef) -> Option<Role> {
        let i = v.side.idx();
        if self.s[i].binary_search(&v.index).is_ok() {
            Some(Role::S)
        } else if self.c[i].binary_search(&v.index).is_ok() {
            Some(Role::C)
        } else if self.x[i].binary_search(&v.index).is_ok() {
            Some(Role::X)
        } else {
            None
        }
    }

    /// Cached complement degree of a `C` or `X` vertex against the
    /// opposite side of `C`.
    pub fn cd_against_c(&self, v: VertexRef) -> Option<u32> {
        let i = v.side.idx();
        if let Ok(p) = self.c[i].binary_search(&v.index) {
            Some(self.c_cd[i][p])
        } else if let Ok(p) = self.x[i].binary_search(&v.index) {
            Some(self.x_cd[i][p])
        } else {
            None
        }
    }

    /// Cached complement degree of a `C` vertex against the opposite side
    /// of `X`.
    pub fn cd_against_x(&self, v: VertexRef) -> Option<u32> {
        let i = v.side.idx();
        self.c[i].binary_search(&v.index).ok().map(|p| self.c_xcd[i][p])
    }

    pub fn recompute_caches(&mut self, g: &BipartiteGraph) {
        for side in Side::BOTH {
            let (i, o) = (side.idx(), side.opposite().idx());
            let cd = |pool: &[u32], list: &[u32]| -> Vec<u32> {
                list.iter()
                    .map(|&v| (pool.len() - sorted_intersection_len(g.neighbors(VertexRef::new(side, v)), pool)) as u32)
                    .collect()
            };
            self.c_cd[i] = cd(&self.c[o], &self.c[i]);
            self.x_cd[i] = cd(&self.c[o], &self.x[i]);
            self.c_xcd[i] = cd(&self.x[o], &self.c[i]);
        }
    }

    /// Full O(n·m) scan of the branch invariants.
    pub fn check_invariants(&self, g: &BipartiteGraph) -> Result<(), String> {
        for side in Side::BOTH {
            let i = side.idx();
            for (name, set) in [("S", &self.s[i]), ("C", &self.c[i]), ("X", &self.x[i])] {
                if set.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(format!("{name}_{side:?} not strictly ascending"));
                }
                if set.iter().any(|&v| v as usize >= g.count(side)) {
                    return Err(format!("{name}_{side:?} holds an out-of-range vertex"));
                }
            }
            let all = [&self.s[i], &self.c[i], &self.x[i]];
            for a in 0..3 {
                for b in a + 1..3 {
                    if sorted_intersection_len(all[a], all[b]) != 0 {
                        return Err(format!("sets overlap on side {side:?}"));
                    }
                }
            }
            let o = side.opposite();
            for &u in self.c[i].iter().chain(&self.x[i]).chain(&self.s[i]) {
                let v = VertexRef::new(side, u);
                let nb = g.neighbors(v);
                if sorted_intersection_len(nb, &self.s[o.idx()]) != self.s[o.idx()].len() {
                    return Err(format!("{v} is not adjacent to all of S_{o:?}"));
                }
            }
        }
        let mut fresh = self.clone();
        fresh.recompute_caches(g);
        if fresh != *self {
            return Err("cached complement degrees are stale".into());
        }
        Ok(())
    }

    /// Child branch including `v`, after `preceding` targets were already
    /// explored at this node (they move to `X`). Vertices on the opposite
    /// side that are not adjacent to `v` leave `C` and `X`.
    ///
    /// Panics if `v` or a preceding vertex is not in `C`.
    pub fn expand(&self, g: &BipartiteGraph, v: VertexRef, preceding: &[VertexRef]) -> Branch {
        self.expand_with(g, v, preceding, &mut Scratch::new(g))
    }

    pub fn expand_with(
        &self,
        g: &BipartiteGraph,
        v: VertexRef,
        preceding: &[VertexRef],
        scratch: &mut Scratch,
    ) -> Branch {
        let s = v.side;
        let o = s.opposite();
        let (si, oi) = (s.idx(), o.idx());
        assert!(
            self.c[si].binary_search(&v.index).is_ok(),
            "expand: {v} is not a candidate of this branch"
        );

        let mut prec: [Vec<u32>; 2] = [Vec::new(), Vec::new()];
        for p in preceding {
            assert!(
                *p != v && self.c[p.side.idx()].binary_search(&p.index).is_ok(),
                "expand: preceding vertex {p} is not a candidate"
            );
            scratch.mark[p.side.idx()][p.index as usize] = true;
            prec[p.side.idx()].push(p.index);
        }
        for p in prec.iter_mut() {
            p.sort_unstable();
        }

        let mut child = Branch::default();
        child.s[oi] = self.s[oi].clone();
        let mut s_same = self.s[si].clone();
        let at = s_same.binary_search(&v.index).unwrap_err();
        s_same.insert(at, v.index);
        child.s[si] = s_same;

        // same side candidates: drop v and the preceding targets
        let mut removed_s = vec![v.index];
        let mut moved_s_vals = Vec::new();
        for (k, &u) in self.c[si].iter().enumerate() {
            if u == v.index {
                continue;
            }
            if scratch.mark[si][u as usize] {
                removed_s.push(u);
                moved_s_vals.push(self.c_cd[si][k]);
                continue;
            }
            child.c[si].push(u);
            child.c_cd[si].push(self.c_cd[si][k]);
            child.c_xcd[si].push(self.c_xcd[si][k]);
        }
        removed_s.sort_unstable();

        // opposite candidates: keep neighbours of v that are not preceding
        let nv = g.neighbors(v);
        let mut removed_o = Vec::new();
        let mut moved_o = Vec::new();
        let mut moved_o_vals = Vec::new();
        let mut j = 0;
        for (k, &u) in self.c[oi].iter().enumerate() {
            while j < nv.len() && nv[j] < u {
                j += 1;
            }
            let adjacent = j < nv.len() && nv[j] == u;
            if scratch.mark[oi][u as usize] {
                removed_o.push(u);
                if adjacent {
                    moved_o.push(u);
                    moved_o_vals.push(self.c_cd[oi][k]);
                }
            } else if adjacent {
                child.c[oi].push(u);
                child.c_cd[oi].push(self.c_cd[oi][k]);
                child.c_xcd[oi].push(self.c_xcd[oi][k]);
            } else {
                removed_o.push(u);
            }
        }

        // exclusion sets
        let (xs, xs_vals) = merge_sorted(&self.x[si], &self.x_cd[si], &prec[si], &moved_s_vals);
        child.x[si] = xs;
        child.x_cd[si] = xs_vals;

        let mut kept_x = Vec::new();
        let mut kept_x_vals = Vec::new();
        let mut dropped_x = Vec::new();
        let mut j = 0;
        for (k, &u) in self.x[oi].iter().enumerate() {
            while j < nv.len() && nv[j] < u {
                j += 1;
            }
            if j < nv.len() && nv[j] == u {
                kept_x.push(u);
                kept_x_vals.push(self.x_cd[oi][k]);
            } else {
                dropped_x.push(u);
            }
        }
        let (xo, xo_vals) = merge_sorted(&kept_x, &kept_x_vals, &moved_o, &moved_o_vals);
        child.x[oi] = xo;
        child.x_cd[oi] = xo_vals;

        for p in preceding {
            scratch.mark[p.side.idx()][p.index as usize] = false;
        }

        // same-side counters against the shrunken opposite C
        let dropped = removed_o.len() as i64;
        scratch.spread(g, o, &removed_o, 1);
        {
            let h = &scratch.hits[si];
            for (list, vals) in [(&child.c[si], &mut child.c_cd[si]), (&child.x[si], &mut child.x_cd[si])] {
                for (u, val) in list.iter().zip(vals.iter_mut()) {
                    *val = (*val as i64 - dropped + h[*u as usize] as i64) as u32;
                }
            }
        }
        scratch.unspread(g, o, &removed_o);

        // same-side candidates against the opposite X (lost dropped_x, gained moved_o)
        if !dropped_x.is_empty() || !moved_o.is_empty() {
            scratch.spread(g, o, &dropped_x, 1);
            scratch.spread(g, o, &moved_o, -1);
            let delta = moved_o.len() as i64 - dropped_x.len() as i64;
            let h = &scratch.hits[si];
            for (u, val) in child.c[si].iter().zip(child.c_xcd[si].iter_mut()) {
                *val = (*val as i64 + delta + h[*u as usize] as i64) as u32;
            }
            scratch.unspread(g, o, &dropped_x);
            scratch.unspread(g, o, &moved_o);
        }

        // opposite-side counters against the shrunken same-side C
        let dropped = removed_s.len() as i64;
        scratch.spread(g, s, &removed_s, 1);
        {
            let h = &scratch.hits[oi];
            for (list, vals) in [(&child.c[oi], &mut child.c_cd[oi]), (&child.x[oi], &mut child.x_cd[oi])] {
                for (u, val) in list.iter().zip(vals.iter_mut()) {
                    *val = (*val as i64 - dropped + h[*u as usize] as i64) as u32;
                }
            }
        }
        scratch.unspread(g, s, &removed_s);

        // opposite candidates against the grown same-side X
        if !prec[si].is_empty() {
            scratch.spread(g, s, &prec[si], -1);
            let added = prec[si].len() as i64;
            let h = &scratch.hits[oi];
            for (u, val) in child.c[oi].iter().zip(child.c_xcd[oi].iter_mut()) {
                *val = (*val as i64 + added + h[*u as usize] as i64) as u32;
            }
            scratch.unspread(g, s, &prec[si]);
        }

        #[cfg(debug_assertions)]
        if let Err(e) = child.check_invariants(g) {
            panic!("expand produced an inconsistent branch: {e}");
        }
        child
    }

    pub fn is_two_biplex(&self) -> bool {
        self.c_cd.iter().all(|cds| cds.iter().all(|&d| d <= 2))
    }

    pub fn classify_terminal(&self, tier: Tier) -> TerminalKind {
        if self.c_is_empty() {
            return if !self.x_is_empty() {
                TerminalKind::TrivialDead
            } else if tier.uses_biplex_stop() {
                TerminalKind::BiplexBatch
            } else {
                TerminalKind::TrivialMaximal
            };
        }
        if tier.uses_biplex_stop() && self.x_is_empty() && self.is_two_biplex() {
            TerminalKind::BiplexBatch
        } else {
            TerminalKind::NotTerminal
        }
    }

    /// Size pruning: the branch cannot reach the minimum side sizes.
    pub fn prune_p1(&self, k: &SizeConstraints) -> bool {
        Side::BOTH
            .iter()
            .any(|&side| self.s(side).len() + self.c(side).len() < k.tau(side))
    }

    /// Domination pruning: some exclusion vertex is adjacent to every
    /// opposite candidate, so nothing inside `S ∪ C` is globally maximal.
    pub fn prune_p2(&self) -> bool {
        self.x_cd.iter().any(|cds| cds.contains(&0))
    }
}
