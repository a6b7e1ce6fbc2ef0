//! Batch output for branches whose `S ∪ C` is a 2-biplex and whose `X` is
//! empty.
//!
//! In a 2-biplex every vertex misses at most two vertices of the opposite
//! side, so the cross-side complement has maximum degree two and splits into
//! isolated vertices, paths and even cycles. Maximal bicliques are exactly
//! the maximal independent sets of that complement, which factor into one
//! independent choice per component.

use std::ops::ControlFlow;

use crate::branch::Branch;
use crate::graph::{sorted_difference, BipartiteGraph, Side, SizeConstraints, VertexRef};
use crate::sink::BicliqueSink;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ComplementDecomposition {
    /// Vertices without complement neighbours, including all of `S`.
    pub isolated: Vec<VertexRef>,
    /// Complement paths, lowest endpoint first.
    pub paths: Vec<Vec<VertexRef>>,
    /// Complement cycles, starting at their lowest vertex.
    pub cycles: Vec<Vec<VertexRef>>,
}

impl ComplementDecomposition {
    pub fn vertex_count(&self) -> usize {
        self.isolated.len() + self.paths.iter().map(Vec::len).sum::<usize>() + self.cycles.iter().map(Vec::len).sum::<usize>()
    }
}

/// Traces the complement components of `S ∪ C`.
///
/// Panics if some candidate misses more than two opposite candidates.
pub fn decompose_complement(g: &BipartiteGraph, b: &Branch) -> ComplementDecomposition {
    assert!(b.is_two_biplex(), "decompose_complement: S ∪ C is not a 2-biplex");
    let nl = b.c(Side::Left).len();
    let n = nl + b.c(Side::Right).len();
    let vertex = |local: usize| -> VertexRef {
        if local < nl {
            VertexRef::left(b.c(Side::Left)[local])
        } else {
            VertexRef::right(b.c(Side::Right)[local - nl])
        }
    };

    let mut adj = vec![[u32::MAX; 2]; n];
    let mut deg = vec![0u8; n];
    let right = b.c(Side::Right);
    for (li, (&u, &cd)) in b.c(Side::Left).iter().zip(b.c_cd(Side::Left)).enumerate() {
        if cd == 0 {
            continue;
        }
        for miss in sorted_difference(right, g.neighbors(VertexRef::left(u))) {
            let ri = nl + right.binary_search(&miss).expect("difference comes from C_R");
            adj[li][deg[li] as usize] = ri as u32;
            deg[li] += 1;
            adj[ri][deg[ri] as usize] = li as u32;
            deg[ri] += 1;
        }
    }

    let mut d = ComplementDecomposition::default();
    let mut seen = vec![false; n];
    let walk = |start: usize, first: usize, seen: &mut Vec<bool>| -> Vec<VertexRef> {
        let mut out = vec![vertex(start)];
        seen[start] = true;
        let (mut prev, mut cur) = (start, first);
        while cur != usize::MAX && !seen[cur] {
            seen[cur] = true;
            out.push(vertex(cur));
            let next = adj[cur][..deg[cur] as usize]
                .iter()
                .map(|&x| x as usize)
                .find(|&x| x != prev);
            prev = cur;
            cur = next.unwrap_or(usize::MAX);
        }
        out
    };

    for local in 0..n {
        if deg[local] == 0 {
            seen[local] = true;
        } else if deg[local] == 1 && !seen[local] {
            let path = walk(local, adj[local][0] as usize, &mut seen);
            d.paths.push(path);
        }
    }
    for local in 0..n {
        if !seen[local] {
            let first = adj[local][0].min(adj[local][1]) as usize;
            d.cycles.push(walk(local, first, &mut seen));
        }
    }

    let mut isolated: Vec<VertexRef> = Vec::new();
    for side in Side::BOTH {
        isolated.extend(b.s(side).iter().map(|&i| VertexRef::new(side, i)));
    }
    isolated.extend((0..n).filter(|&i| deg[i] == 0).map(vertex));
    isolated.sort_unstable();
    d.isolated = isolated;
    d
}

/// Extends `seed` (whose last element sits at position `last` of `path`) to
/// every maximal independent set of the path, appending in lexicographic
/// order of the chosen positions.
fn extend_path<T: Copy>(path: &[T], seed: Vec<T>, last: usize, out: &mut Vec<Vec<T>>) {
    let n = path.len();
    let mut stack = vec![(seed, last)];
    while let Some((set, last)) = stack.pop() {
        if last + 2 >= n {
            out.push(set);
            continue;
        }
        if last + 3 < n {
            let mut skip = set.clone();
            skip.push(path[last + 3]);
            stack.push((skip, last + 3));
        }
        let mut next = set;
        next.push(path[last + 2]);
        stack.push((next, last + 2));
    }
}

/// All maximal independent sets of a path graph, whose consecutive entries
/// are adjacent.
///
/// Panics on paths shorter than two vertices.
pub fn mis_from_path<T: Copy>(path: &[T]) -> Vec<Vec<T>> {
    assert!(path.len() >= 2, "mis_from_path: path needs at least two vertices");
    let mut out = Vec::new();
    extend_path(path, vec![path[0]], 0, &mut out);
    extend_path(path, vec![path[1]], 1, &mut out);
    out
}

/// All maximal independent sets of an even cycle.
///
/// Panics on odd cycles or cycles shorter than four.
pub fn mis_from_cycle<T: Copy>(cycle: &[T]) -> Vec<Vec<T>> {
    let n = cycle.len();
    assert!(n >= 4 && n % 2 == 0, "mis_from_cycle: cycle length must be even and at least 4, got {n}");
    if n == 4 {
        return vec![vec![cycle[0], cycle[2]], vec![cycle[1], cycle[3]]];
    }
    let mut out = Vec::new();
    // first vertex taken: the last one is excluded
    extend_path(&cycle[..n - 1], vec![cycle[0]], 0, &mut out);
    // second vertex taken: the first one is excluded
    extend_path(&cycle[1..], vec![cycle[1]], 0, &mut out);
    // neither: the third and the last are forced
    extend_path(&cycle[2..n - 2], vec![cycle[n - 1], cycle[2]], 0, &mut out);
    out
}

/// One maximal independent set of a component, split by side.
#[derive(Debug, Clone)]
struct Choice {
    left: Vec<u32>,
    right: Vec<u32>,
}

impl Choice {
    fn from(vs: Vec<VertexRef>) -> Self {
        let mut c = Choice {
            left: Vec::new(),
            right: Vec::new(),
        };
        for v in vs {
            match v.side {
                Side::Left => c.left.push(v.index),
                Side::Right => c.right.push(v.index),
            }
        }
        c
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BatchOutcome {
    pub emitted: u64,
    /// Vertex-level operations spent walking the combinations.
    pub work: u64,
    pub stopped: bool,
}

/// Emits every maximal biclique of `S ∪ C` that meets `k`.
///
/// Combinations are walked as an odometer over per-component choices; the
/// output buffers are patched by truncating back to the prefix of the
/// component that changed. Prefixes that cannot reach the size constraints
/// even with the largest remaining choices are skipped.
pub fn emit_batch<S: BicliqueSink + ?Sized>(
    b: &Branch,
    d: &ComplementDecomposition,
    k: &SizeConstraints,
    sink: &mut S,
) -> BatchOutcome {
    debug_assert!(b.x_is_empty(), "emit_batch on a branch with exclusions");
    let mut outcome = BatchOutcome::default();

    let comps: Vec<Vec<Choice>> = d
        .paths
        .iter()
        .map(|p| mis_from_path(p))
        .chain(d.cycles.iter().map(|c| mis_from_cycle(c)))
        .map(|sets| sets.into_iter().map(Choice::from).collect())
        .collect();

    let mut left: Vec<u32> = Vec::with_capacity(b.s_len() + b.c_len());
    let mut right: Vec<u32> = Vec::with_capacity(b.s_len() + b.c_len());
    for v in &d.isolated {
        match v.side {
            Side::Left => left.push(v.index),
            Side::Right => right.push(v.index),
        }
    }
    outcome.work += d.isolated.len() as u64;

    // best achievable side sizes from component k onward
    let n = comps.len();
    let mut suffix = vec![(0usize, 0usize); n + 1];
    for i in (0..n).rev() {
        let best_l = comps[i].iter().map(|c| c.left.len()).max().unwrap_or(0);
        let best_r = comps[i].iter().map(|c| c.right.len()).max().unwrap_or(0);
        suffix[i] = (suffix[i + 1].0 + best_l, suffix[i + 1].1 + best_r);
    }
    if !k.admits(left.len() + suffix[0].0, right.len() + suffix[0].1) {
        return outcome;
    }
    if n == 0 {
        outcome.work += 1;
        if sink.accept(&left, &right).is_break() {
            outcome.stopped = true;
        } else {
            outcome.emitted = 1;
        }
        return outcome;
    }

    let mut idx = vec![0usize; n];
    let mut marks = vec![(0usize, 0usize); n];
    let mut level = 0;
    'walk: loop {
        marks[level] = (left.len(), right.len());
        let ch = &comps[level][idx[level]];
        left.extend_from_slice(&ch.left);
        right.extend_from_slice(&ch.right);
        outcome.work += (ch.left.len() + ch.right.len()) as u64 + 1;

        if k.admits(left.len() + suffix[level + 1].0, right.len() + suffix[level + 1].1) {
            if level + 1 < n {
                level += 1;
                idx[level] = 0;
                continue;
            }
            if let ControlFlow::Break(()) = sink.accept(&left, &right) {
                outcome.stopped = true;
                return outcome;
            }
            outcome.emitted += 1;
        }

        loop {
            left.truncate(marks[level].0);
            right.truncate(marks[level].1);
            idx[level] += 1;
            if idx[level] < comps[level].len() {
                continue 'walk;
            }
            if level == 0 {
                break 'walk;
            }
            level -= 1;
        }
    }
    outcome
}
