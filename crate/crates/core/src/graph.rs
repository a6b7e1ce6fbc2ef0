//! Bipartite graph storage, KONECT ingestion and side normalization.
//!
//! Vertices are addressed by a dense, 0-based index within their side. The
//! original identifiers of loaded graphs are kept in a per-side table so that
//! results can be reported in the caller's id space.

use std::collections::HashMap;
use std::fmt;
use std::io::{BufRead, Write};

use crate::error::GraphError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Left, Side::Right];

    #[inline]
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    #[inline]
    pub(crate) fn idx(self) -> usize {
        self as usize
    }
}

/// A vertex of a [`BipartiteGraph`]: a side plus a dense index within it.
///
/// The derived ordering (Left before Right, then ascending index) is the
/// canonical vertex order used for every deterministic tie-break.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexRef {
    pub side: Side,
    pub index: u32,
}

impl VertexRef {
    #[inline]
    pub fn new(side: Side, index: u32) -> Self {
        VertexRef { side, index }
    }

    #[inline]
    pub fn left(index: u32) -> Self {
        VertexRef::new(Side::Left, index)
    }

    #[inline]
    pub fn right(index: u32) -> Self {
        VertexRef::new(Side::Right, index)
    }
}

impl fmt::Display for VertexRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::Left => write!(f, "L{}", self.index),
            Side::Right => write!(f, "R{}", self.index),
        }
    }
}

/// Minimum side sizes a reported biclique must reach.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SizeConstraints {
    tau_l: usize,
    tau_r: usize,
}

impl SizeConstraints {
    pub fn new(tau_l: usize, tau_r: usize) -> Result<Self, GraphError> {
        if tau_l == 0 || tau_r == 0 {
            return Err(GraphError::InvalidArgument(format!(
                "size constraints must be at least 1, got ({tau_l}, {tau_r})"
            )));
        }
        Ok(SizeConstraints { tau_l, tau_r })
    }

    pub fn tau_l(&self) -> usize {
        self.tau_l
    }

    pub fn tau_r(&self) -> usize {
        self.tau_r
    }

    #[inline]
    pub fn tau(&self, side: Side) -> usize {
        match side {
            Side::Left => self.tau_l,
            Side::Right => self.tau_r,
        }
    }

    #[inline]
    pub fn admits(&self, left: usize, right: usize) -> bool {
        left >= self.tau_l && right >= self.tau_r
    }

    pub fn swapped(&self) -> Self {
        SizeConstraints {
            tau_l: self.tau_r,
            tau_r: self.tau_l,
        }
    }
}

impl Default for SizeConstraints {
    fn default() -> Self {
        SizeConstraints { tau_l: 1, tau_r: 1 }
    }
}

/// Immutable bipartite graph in per-side CSR form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    offsets: [Vec<usize>; 2],
    targets: [Vec<u32>; 2],
    ids: [Vec<u64>; 2],
    edge_count: usize,
}

impl BipartiteGraph {
    /// Builds a graph from `(left, right)` index pairs. Duplicates are
    /// collapsed. Original ids default to `index + 1`.
    pub fn from_edges<I>(left: usize, right: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let ids = [
            (1..=left as u64).collect::<Vec<_>>(),
            (1..=right as u64).collect::<Vec<_>>(),
        ];
        Self::from_edges_with_ids(ids, edges)
    }

    pub(crate) fn from_edges_with_ids<I>(ids: [Vec<u64>; 2], edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let counts = [ids[0].len(), ids[1].len()];
        let mut adj: [Vec<Vec<u32>>; 2] = [vec![Vec::new(); counts[0]], vec![Vec::new(); counts[1]]];
        for (l, r) in edges {
            if l as usize >= counts[0] || r as usize >= counts[1] {
                return Err(GraphError::InvalidArgument(format!(
                    "edge ({l}, {r}) out of range for sides ({}, {})",
                    counts[0], counts[1]
                )));
            }
            adj[0][l as usize].push(r);
            adj[1][r as usize].push(l);
        }
        let mut offsets: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
        let mut targets: [Vec<u32>; 2] = [Vec::new(), Vec::new()];
        for s in 0..2 {
            offsets[s].reserve(counts[s] + 1);
            offsets[s].push(0);
            for list in adj[s].iter_mut() {
                list.sort_unstable();
                list.dedup();
                targets[s].extend_from_slice(list);
                offsets[s].push(targets[s].len());
            }
        }
        let edge_count = targets[0].len();
        Ok(BipartiteGraph {
            offsets,
            targets,
            ids,
            edge_count,
        })
    }

    pub fn empty() -> Self {
        BipartiteGraph::from_edges(0, 0, std::iter::empty()).expect("empty graph is valid")
    }

    #[inline]
    pub fn left_count(&self) -> usize {
        self.offsets[0].len().saturating_sub(1)
    }

    #[inline]
    pub fn right_count(&self) -> usize {
        self.offsets[1].len().saturating_sub(1)
    }

    #[inline]
    pub fn count(&self, side: Side) -> usize {
        self.offsets[side.idx()].len().saturating_sub(1)
    }

    pub fn vertex_count(&self) -> usize {
        self.left_count() + self.right_count()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Sorted cross-side neighbours of `v`.
    #[inline]
    pub fn neighbors(&self, v: VertexRef) -> &[u32] {
        let s = v.side.idx();
        let i = v.index as usize;
        &self.targets[s][self.offsets[s][i]..self.offsets[s][i + 1]]
    }

    #[inline]
    pub fn degree(&self, v: VertexRef) -> usize {
        let s = v.side.idx();
        let i = v.index as usize;
        self.offsets[s][i + 1] - self.offsets[s][i]
    }

    pub fn max_degree(&self) -> usize {
        Side::BOTH
            .iter()
            .flat_map(|&side| (0..self.count(side) as u32).map(move |i| VertexRef::new(side, i)))
            .map(|v| self.degree(v))
            .max()
            .unwrap_or(0)
    }

    /// Adjacency test between two vertices on opposite sides.
    #[inline]
    pub fn adjacent(&self, a: VertexRef, b: VertexRef) -> bool {
        if a.side == b.side {
            return false;
        }
        let (probe, target) = if self.degree(a) <= self.degree(b) { (a, b) } else { (b, a) };
        self.neighbors(probe).binary_search(&target.index).is_ok()
    }

    #[inline]
    pub fn original_id(&self, v: VertexRef) -> u64 {
        self.ids[v.side.idx()][v.index as usize]
    }

    pub fn ids(&self, side: Side) -> &[u64] {
        &self.ids[side.idx()]
    }

    /// Map from original id to dense index on `side`.
    pub fn id_index(&self, side: Side) -> HashMap<u64, u32> {
        self.ids[side.idx()]
            .iter()
            .enumerate()
            .map(|(i, &id)| (id, i as u32))
            .collect()
    }

    /// All edges as `(left, right)` index pairs in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.left_count() as u32).flat_map(move |l| {
            self.neighbors(VertexRef::left(l)).iter().map(move |&r| (l, r))
        })
    }

    /// The same graph with the roles of the two sides exchanged.
    pub fn swapped(&self) -> BipartiteGraph {
        BipartiteGraph {
            offsets: [self.offsets[1].clone(), self.offsets[0].clone()],
            targets: [self.targets[1].clone(), self.targets[0].clone()],
            ids: [self.ids[1].clone(), self.ids[0].clone()],
            edge_count: self.edge_count,
        }
    }

    /// Writes the graph as a KONECT edge list: a `% bip |L| |R| m` header and
    /// one `leftId rightId` line per edge, ordered by original ids.
    pub fn write_konect<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "% bip {} {} {}", self.left_count(), self.right_count(), self.edge_count)?;
        let mut pairs: Vec<(u64, u64)> = self
            .edges()
            .map(|(l, r)| (self.ids[0][l as usize], self.ids[1][r as usize]))
            .collect();
        pairs.sort_unstable();
        for (l, r) in pairs {
            writeln!(w, "{l} {r}")?;
        }
        Ok(())
    }

    /// Full structural check of the CSR invariants. Used by tests and by
    /// the generators' postconditions.
    pub fn validate(&self) -> Result<(), GraphError> {
        for side in Side::BOTH {
            let opp = side.opposite();
            for i in 0..self.count(side) as u32 {
                let v = VertexRef::new(side, i);
                let nb = self.neighbors(v);
                if nb.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(GraphError::Invariant(format!("adjacency of {v} not strictly ascending")));
                }
                for &u in nb {
                    if u as usize >= self.count(opp) {
                        return Err(GraphError::Invariant(format!("{v} has out-of-range neighbour {u}")));
                    }
                    if self.neighbors(VertexRef::new(opp, u)).binary_search(&i).is_err() {
                        return Err(GraphError::Invariant(format!("asymmetric edge at {v}")));
                    }
                }
            }
        }
        if self.targets[0].len() != self.edge_count || self.targets[1].len() != self.edge_count {
            return Err(GraphError::Invariant("edge count mismatch".into()));
        }
        Ok(())
    }
}

/// Result of [`normalize_sides`].
#[derive(Debug, Clone)]
pub struct Normalized {
    pub graph: BipartiteGraph,
    /// True when the input's sides were exchanged. Size constraints and
    /// reported sides must be exchanged accordingly.
    pub swapped: bool,
}

/// Makes the smaller side the left side. Ties keep the input orientation.
pub fn normalize_sides(g: BipartiteGraph) -> Normalized {
    if g.left_count() > g.right_count() {
        Normalized {
            graph: g.swapped(),
            swapped: true,
        }
    } else {
        Normalized {
            graph: g,
            swapped: false,
        }
    }
}

/// Number of vertices of `pool` (sorted, on the side opposite to `v`) that
/// are not adjacent to `v`.
pub fn complement_degree(g: &BipartiteGraph, v: VertexRef, pool: &[u32]) -> usize {
    pool.len() - sorted_intersection_len(g.neighbors(v), pool)
}

pub(crate) fn sorted_intersection_len(a: &[u32], b: &[u32]) -> usize {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if small.is_empty() {
        return 0;
    }
    // galloping pays off once the lists are badly unbalanced
    if small.len() * 16 < large.len() {
        return small.iter().filter(|x| large.binary_search(x).is_ok()).count();
    }
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < small.len() && j < large.len() {
        match small[i].cmp(&large[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Elements of sorted `pool` that are absent from sorted `adj`.
pub(crate) fn sorted_difference(pool: &[u32], adj: &[u32]) -> Vec<u32> {
    if adj.len() > pool.len() * 16 {
        return pool.iter().copied().filter(|x| adj.binary_search(x).is_err()).collect();
    }
    let mut out = Vec::new();
    let mut j = 0;
    for &x in pool {
        while j < adj.len() && adj[j] < x {
            j += 1;
        }
        if j >= adj.len() || adj[j] != x {
            out.push(x);
        }
    }
    out
}

/// Reads a KONECT-style edge list. Lines starting with `%` are comments;
/// data lines carry a left id and a right id, any further columns are
/// ignored. Ids are remapped densely per side in first-seen order.
pub fn load_konect<R: BufRead>(reader: R) -> Result<BipartiteGraph, GraphError> {
    let mut maps: [HashMap<u64, u32>; 2] = [HashMap::new(), HashMap::new()];
    let mut ids: [Vec<u64>; 2] = [Vec::new(), Vec::new()];
    let mut edges = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let mut endpoint = [0u32; 2];
        for s in 0..2 {
            let tok = tokens.next().ok_or_else(|| GraphError::Parse {
                line: line_no,
                message: "expected two vertex ids".into(),
            })?;
            let id: i64 = tok.parse().map_err(|_| GraphError::Parse {
                line: line_no,
                message: format!("invalid vertex id {tok:?}"),
            })?;
            if id <= 0 {
                return Err(GraphError::Parse {
                    line: line_no,
                    message: format!("vertex id must be positive, got {id}"),
                });
            }
            let id = id as u64;
            let next = ids[s].len() as u32;
            endpoint[s] = *maps[s].entry(id).or_insert_with(|| {
                ids[s].push(id);
                next
            });
        }
        edges.push((endpoint[0], endpoint[1]));
    }
    BipartiteGraph::from_edges_with_ids(ids, edges)
}
