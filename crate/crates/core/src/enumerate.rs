//! Enumeration driver for the three algorithm tiers.
//!
//! Every node runs the same procedure: terminal test, size pruning,
//! domination pruning, pivot selection, then one child per pivot target in
//! order, each later child excluding the earlier targets. The search uses an
//! explicit stack so deep recursions cannot overflow the thread stack.

use std::collections::HashMap;
use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use crate::biplex::{decompose_complement, emit_batch};
use crate::branch::{Branch, Scratch, TerminalKind, Tier};
use crate::error::GraphError;
use crate::graph::{BipartiteGraph, Side, SizeConstraints, VertexRef};
use crate::ie;
use crate::pivot::{pivot_basic, pivot_partitioned};
use crate::sink::BicliqueSink;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IeMode {
    Off,
    Arbitrary,
    Degree,
    Degeneracy,
    Unilateral,
}

impl IeMode {
    pub const ALL: [IeMode; 5] = [
        IeMode::Off,
        IeMode::Arbitrary,
        IeMode::Degree,
        IeMode::Degeneracy,
        IeMode::Unilateral,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IeMode::Off => "off",
            IeMode::Arbitrary => "arbitrary",
            IeMode::Degree => "degree",
            IeMode::Degeneracy => "degeneracy",
            IeMode::Unilateral => "unilateral",
        }
    }
}

impl std::str::FromStr for IeMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        IeMode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown ie mode {s:?}"))
    }
}

#[derive(Debug, Clone)]
pub struct EnumConfig {
    pub tier: Tier,
    pub constraints: SizeConstraints,
    pub ie_mode: IeMode,
    /// Record inter-output delays. Counters are always exact.
    pub stats_enabled: bool,
    pub emit_limit: Option<u64>,
    pub time_budget: Option<Duration>,
}

impl EnumConfig {
    pub fn new(tier: Tier) -> Self {
        EnumConfig {
            tier,
            constraints: SizeConstraints::default(),
            ie_mode: IeMode::Off,
            stats_enabled: false,
            emit_limit: None,
            time_budget: None,
        }
    }

    pub fn with_constraints(mut self, k: SizeConstraints) -> Self {
        self.constraints = k;
        self
    }

    pub fn with_ie(mut self, mode: IeMode) -> Self {
        self.ie_mode = mode;
        self
    }

    pub fn with_emit_limit(mut self, limit: u64) -> Self {
        self.emit_limit = Some(limit);
        self
    }

    pub fn with_time_budget(mut self, budget: Duration) -> Self {
        self.time_budget = Some(budget);
        self
    }

    pub fn with_delay_samples(mut self) -> Self {
        self.stats_enabled = true;
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EnumStats {
    /// Node entries, terminal or not.
    pub branches: u64,
    pub biplex_batches: u64,
    pub trivial_terminals: u64,
    pub pruned_p1: u64,
    pub pruned_p2: u64,
    pub outputs: u64,
    pub max_depth: u64,
    /// Vertex-level operations spent inside batch output.
    pub batch_work: u64,
    /// The run stopped early on the emit limit or the time budget.
    pub partial: bool,
    pub delay_samples: Vec<Duration>,
}

impl EnumStats {
    /// Adds the counters of `other`; depth is maxed.
    pub fn merge(&mut self, other: &EnumStats) {
        self.branches += other.branches;
        self.biplex_batches += other.biplex_batches;
        self.trivial_terminals += other.trivial_terminals;
        self.pruned_p1 += other.pruned_p1;
        self.pruned_p2 += other.pruned_p2;
        self.outputs += other.outputs;
        self.max_depth = self.max_depth.max(other.max_depth);
        self.batch_work += other.batch_work;
        self.partial |= other.partial;
        self.delay_samples.extend_from_slice(&other.delay_samples);
    }

    /// Counters only, for reproducibility checks.
    pub fn counters(&self) -> [u64; 8] {
        [
            self.branches,
            self.biplex_batches,
            self.trivial_terminals,
            self.pruned_p1,
            self.pruned_p2,
            self.outputs,
            self.max_depth,
            self.batch_work,
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PruneRule {
    P1,
    P2,
}

/// Hooks into the search, for instrumentation and tests.
pub trait SearchObserver {
    fn on_prune(&mut self, _branch: &Branch, _rule: PruneRule) {}
    fn on_batch(&mut self, _branch: &Branch) {}
}

pub struct NoObserver;

impl SearchObserver for NoObserver {}

/// A maximal biclique in original vertex ids, both sides ascending.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BicliqueResult {
    pub left: Vec<u64>,
    pub right: Vec<u64>,
}

impl BicliqueResult {
    pub fn from_indices(g: &BipartiteGraph, left: &[u32], right: &[u32]) -> Self {
        let map = |side: Side, idx: &[u32]| {
            let mut ids: Vec<u64> = idx.iter().map(|&i| g.original_id(VertexRef::new(side, i))).collect();
            ids.sort_unstable();
            ids
        };
        BicliqueResult {
            left: map(Side::Left, left),
            right: map(Side::Right, right),
        }
    }

    pub fn swapped(self) -> Self {
        BicliqueResult {
            left: self.right,
            right: self.left,
        }
    }
}

/// Output adapter: counts, enforces the emit limit and samples delays.
struct Emitter<'s, S: ?Sized> {
    sink: &'s mut S,
    limit: Option<u64>,
    delays: bool,
    last: Instant,
    outputs: u64,
    samples: Vec<Duration>,
}

impl<S: BicliqueSink + ?Sized> BicliqueSink for Emitter<'_, S> {
    fn accept(&mut self, left: &[u32], right: &[u32]) -> ControlFlow<()> {
        if self.limit.is_some_and(|l| self.outputs >= l) {
            return ControlFlow::Break(());
        }
        self.sink.accept(left, right)?;
        self.outputs += 1;
        if self.delays {
            let now = Instant::now();
            self.samples.push(now - self.last);
            self.last = now;
        }
        ControlFlow::Continue(())
    }
}

struct Frame {
    branch: Branch,
    targets: Vec<VertexRef>,
    next: usize,
}

/// Reusable search engine over one graph.
pub struct Search<'g, O: SearchObserver = NoObserver> {
    g: &'g BipartiteGraph,
    cfg: EnumConfig,
    scratch: Scratch,
    started: Instant,
    last_output: Instant,
    observer: O,
    stats: EnumStats,
}

impl<'g> Search<'g, NoObserver> {
    pub fn new(g: &'g BipartiteGraph, cfg: EnumConfig) -> Self {
        Search::with_observer(g, cfg, NoObserver)
    }
}

impl<'g, O: SearchObserver> Search<'g, O> {
    pub fn with_observer(g: &'g BipartiteGraph, cfg: EnumConfig, observer: O) -> Self {
        Search {
            g,
            cfg,
            scratch: Scratch::new(g),
            started: Instant::now(),
            last_output: Instant::now(),
            observer,
            stats: EnumStats::default(),
        }
    }

    pub fn stats(&self) -> &EnumStats {
        &self.stats
    }

    pub fn into_parts(self) -> (EnumStats, O) {
        (self.stats, self.observer)
    }

    /// Explores the subtree rooted at `root`, whose depth is `depth`.
    /// Returns `Break` when the run was cut short.
    pub fn run<S: BicliqueSink + ?Sized>(&mut self, root: Branch, depth: u64, sink: &mut S) -> ControlFlow<()> {
        let mut out = Emitter {
            sink,
            limit: self.cfg.emit_limit.map(|l| l.saturating_sub(self.stats.outputs)),
            delays: self.cfg.stats_enabled,
            last: self.last_output,
            outputs: 0,
            samples: Vec::new(),
        };
        let flow = self.drive(root, depth, &mut out);
        self.stats.outputs += out.outputs;
        self.last_output = out.last;
        self.stats.delay_samples.append(&mut out.samples);
        if flow.is_break() {
            self.stats.partial = true;
        }
        flow
    }

    fn drive<S: BicliqueSink + ?Sized>(&mut self, root: Branch, depth: u64, out: &mut Emitter<'_, S>) -> ControlFlow<()> {
        let mut stack: Vec<Frame> = Vec::new();
        if let Some(f) = self.enter(root, depth, out)? {
            stack.push(f);
        }
        while let Some(top) = stack.last_mut() {
            if top.next == top.targets.len() {
                stack.pop();
                continue;
            }
            let v = top.targets[top.next];
            let child = top.branch.expand_with(self.g, v, &top.targets[..top.next], &mut self.scratch);
            top.next += 1;
            let d = depth + stack.len() as u64;
            if let Some(f) = self.enter(child, d, out)? {
                stack.push(f);
            }
        }
        ControlFlow::Continue(())
    }

    fn enter<S: BicliqueSink + ?Sized>(
        &mut self,
        b: Branch,
        depth: u64,
        out: &mut Emitter<'_, S>,
    ) -> ControlFlow<(), Option<Frame>> {
        if let Some(budget) = self.cfg.time_budget {
            if self.started.elapsed() > budget {
                self.stats.partial = true;
                return ControlFlow::Break(());
            }
        }
        self.stats.branches += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        let k = self.cfg.constraints;

        match b.classify_terminal(self.cfg.tier) {
            TerminalKind::NotTerminal => {}
            TerminalKind::TrivialDead => {
                self.stats.trivial_terminals += 1;
                return ControlFlow::Continue(None);
            }
            TerminalKind::TrivialMaximal => {
                self.stats.trivial_terminals += 1;
                if k.admits(b.s(Side::Left).len(), b.s(Side::Right).len()) {
                    out.accept(b.s(Side::Left), b.s(Side::Right))?;
                }
                return ControlFlow::Continue(None);
            }
            TerminalKind::BiplexBatch => {
                self.stats.biplex_batches += 1;
                self.observer.on_batch(&b);
                let d = decompose_complement(self.g, &b);
                let res = emit_batch(&b, &d, &k, out);
                self.stats.batch_work += res.work;
                if res.stopped {
                    return ControlFlow::Break(());
                }
                return ControlFlow::Continue(None);
            }
        }

        if b.prune_p1(&k) {
            self.stats.pruned_p1 += 1;
            self.observer.on_prune(&b, PruneRule::P1);
            return ControlFlow::Continue(None);
        }
        if b.prune_p2() {
            self.stats.pruned_p2 += 1;
            self.observer.on_prune(&b, PruneRule::P2);
            return ControlFlow::Continue(None);
        }

        let decision = match self.cfg.tier {
            Tier::Basic | Tier::Bps => pivot_basic(self.g, &b),
            Tier::Ips => pivot_partitioned(self.g, &b).expect("non-terminal branch has a pivot candidate"),
        };
        ControlFlow::Continue(Some(Frame {
            branch: b,
            targets: decision.targets,
            next: 0,
        }))
    }
}

/// Enumerates every maximal biclique of `g` meeting the configured size
/// constraints, each exactly once.
pub fn enumerate<S: BicliqueSink + ?Sized>(g: &BipartiteGraph, cfg: &EnumConfig, sink: &mut S) -> EnumStats {
    enumerate_observed(g, cfg, sink, NoObserver).0
}

pub fn enumerate_observed<S: BicliqueSink + ?Sized, O: SearchObserver>(
    g: &BipartiteGraph,
    cfg: &EnumConfig,
    sink: &mut S,
    observer: O,
) -> (EnumStats, O) {
    if cfg.ie_mode != IeMode::Off {
        return ie::enumerate_ie_observed(g, cfg, sink, observer);
    }
    let mut search = Search::with_observer(g, cfg.clone(), observer);
    let _ = search.run(Branch::make_root(g), 0, sink);
    search.into_parts()
}

/// Checks that `r` is a biclique of `g`, maximal in `g`, and meets `k`.
pub fn verify_result(g: &BipartiteGraph, r: &BicliqueResult, k: &SizeConstraints) -> Result<bool, GraphError> {
    let resolve = |side: Side, ids: &[u64]| -> Result<Vec<u32>, GraphError> {
        let index: HashMap<u64, u32> = g.id_index(side);
        ids.iter()
            .map(|id| {
                index
                    .get(id)
                    .copied()
                    .ok_or_else(|| GraphError::InvalidArgument(format!("unknown {side:?} vertex id {id}")))
            })
            .collect()
    };
    let mut left = resolve(Side::Left, &r.left)?;
    let mut right = resolve(Side::Right, &r.right)?;
    left.sort_unstable();
    left.dedup();
    right.sort_unstable();
    right.dedup();
    if left.is_empty() || right.is_empty() || !k.admits(left.len(), right.len()) {
        return Ok(false);
    }
    // a maximal biclique is closed: each side is exactly the common
    // neighbourhood of the other
    let closed = |side: Side, members: &[u32], other: &[u32]| -> bool {
        let mut hits = vec![0usize; g.count(side)];
        for &o in other {
            for &nb in g.neighbors(VertexRef::new(side.opposite(), o)) {
                hits[nb as usize] += 1;
            }
        }
        let common: Vec<u32> = (0..g.count(side) as u32).filter(|&i| hits[i as usize] == other.len()).collect();
        common == members
    };
    Ok(closed(Side::Left, &left, &right) && closed(Side::Right, &right, &left))
}
