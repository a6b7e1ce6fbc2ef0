//! Inclusion-exclusion decomposition over an ordering of the left side.
//!
//! Instance `i` seeds the search with `S = {v_i}`, the candidates
//! `N_1(v_i)` plus the later 2-hop neighbours, and the earlier 2-hop
//! neighbours as exclusions. A maximal biclique is found exactly in the
//! instance of its first left vertex in the ordering.

use std::collections::BTreeSet;
use std::ops::ControlFlow;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::branch::Branch;
use crate::enumerate::{EnumConfig, EnumStats, IeMode, NoObserver, Search, SearchObserver};
use crate::error::GraphError;
use crate::graph::{BipartiteGraph, VertexRef};
use crate::sink::BicliqueSink;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderingKind {
    Arbitrary,
    Degree,
    Degeneracy,
    /// Approximation: peeling on the one-mode projection of the left side.
    Unilateral,
}

impl OrderingKind {
    pub fn from_mode(mode: IeMode) -> Option<Self> {
        match mode {
            IeMode::Off => None,
            IeMode::Arbitrary => Some(OrderingKind::Arbitrary),
            IeMode::Degree => Some(OrderingKind::Degree),
            IeMode::Degeneracy => Some(OrderingKind::Degeneracy),
            IeMode::Unilateral => Some(OrderingKind::Unilateral),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexOrdering {
    pub order: Vec<u32>,
    pub kind: OrderingKind,
}

impl VertexOrdering {
    /// `positions()[u]` is the rank of left vertex `u`.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (i, &u) in self.order.iter().enumerate() {
            pos[u as usize] = i;
        }
        pos
    }
}

/// Left vertices sharing at least one neighbour with `u`, excluding `u`.
fn two_hop(g: &BipartiteGraph, u: u32, mark: &mut [bool]) -> Vec<u32> {
    let mut out = Vec::new();
    mark[u as usize] = true;
    for &r in g.neighbors(VertexRef::left(u)) {
        for &w in g.neighbors(VertexRef::right(r)) {
            if !mark[w as usize] {
                mark[w as usize] = true;
                out.push(w);
            }
        }
    }
    mark[u as usize] = false;
    for &w in &out {
        mark[w as usize] = false;
    }
    out.sort_unstable();
    out
}

/// Repeatedly removes the vertex with the smallest current degree (ties by
/// id) and returns the removal order.
fn peel(n: usize, adj: &[Vec<u32>]) -> Vec<u32> {
    let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut queue: BTreeSet<(usize, u32)> = (0..n as u32).map(|v| (deg[v as usize], v)).collect();
    let mut gone = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while let Some((_, v)) = queue.pop_first() {
        gone[v as usize] = true;
        order.push(v);
        for &w in &adj[v as usize] {
            if !gone[w as usize] {
                queue.remove(&(deg[w as usize], w));
                deg[w as usize] -= 1;
                queue.insert((deg[w as usize], w));
            }
        }
    }
    order
}

pub fn order_vertices(g: &BipartiteGraph, kind: OrderingKind) -> VertexOrdering {
    let nl = g.left_count();
    let order = match kind {
        OrderingKind::Arbitrary => (0..nl as u32).collect(),
        OrderingKind::Degree => {
            let mut o: Vec<u32> = (0..nl as u32).collect();
            o.sort_by_key(|&u| (g.degree(VertexRef::left(u)), u));
            o
        }
        OrderingKind::Degeneracy => {
            // whole graph, left vertices take ids 0..|L|, right ones follow
            let adj: Vec<Vec<u32>> = (0..nl as u32)
                .map(|u| g.neighbors(VertexRef::left(u)).iter().map(|&r| nl as u32 + r).collect())
                .chain((0..g.right_count() as u32).map(|r| g.neighbors(VertexRef::right(r)).to_vec()))
                .collect();
            peel(adj.len(), &adj).into_iter().filter(|&v| (v as usize) < nl).collect()
        }
        OrderingKind::Unilateral => {
            let mut mark = vec![false; nl];
            let adj: Vec<Vec<u32>> = (0..nl as u32).map(|u| two_hop(g, u, &mut mark)).collect();
            peel(nl, &adj)
        }
    };
    VertexOrdering { order, kind }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IeInstance {
    pub seed_vertex: VertexRef,
    pub s: Vec<VertexRef>,
    pub c: Vec<VertexRef>,
    pub x: Vec<VertexRef>,
}

impl IeInstance {
    pub fn size(&self) -> usize {
        self.c.len() + self.x.len()
    }

    pub fn to_branch(&self, g: &BipartiteGraph) -> Result<Branch, GraphError> {
        Branch::from_sets(g, &self.s, &self.c, &self.x).map_err(GraphError::Invariant)
    }
}

fn instance_at(g: &BipartiteGraph, ord: &VertexOrdering, pos: &[usize], i: usize, mark: &mut [bool]) -> IeInstance {
    let v = ord.order[i];
    let mut c: Vec<VertexRef> = Vec::new();
    let mut x: Vec<VertexRef> = Vec::new();
    for w in two_hop(g, v, mark) {
        if pos[w as usize] > i {
            c.push(VertexRef::left(w));
        } else {
            x.push(VertexRef::left(w));
        }
    }
    c.extend(g.neighbors(VertexRef::left(v)).iter().map(|&r| VertexRef::right(r)));
    IeInstance {
        seed_vertex: VertexRef::left(v),
        s: vec![VertexRef::left(v)],
        c,
        x,
    }
}

pub fn build_instance(g: &BipartiteGraph, ord: &VertexOrdering, i: usize) -> Result<IeInstance, GraphError> {
    if i >= ord.order.len() {
        return Err(GraphError::InvalidArgument(format!(
            "instance position {i} out of range for {} left vertices",
            ord.order.len()
        )));
    }
    let mut mark = vec![false; g.left_count()];
    Ok(instance_at(g, ord, &ord.positions(), i, &mut mark))
}

/// Size of the largest root instance, `max |C_i| + |X_i|`.
pub fn gamma(g: &BipartiteGraph, ord: &VertexOrdering) -> usize {
    let pos = ord.positions();
    let mut mark = vec![false; g.left_count()];
    (0..ord.order.len())
        .map(|i| instance_at(g, ord, &pos, i, &mut mark).size())
        .max()
        .unwrap_or(0)
}

pub fn enumerate_ie<S: BicliqueSink + ?Sized>(g: &BipartiteGraph, cfg: &EnumConfig, sink: &mut S) -> EnumStats {
    enumerate_ie_observed(g, cfg, sink, NoObserver).0
}

pub fn enumerate_ie_observed<S: BicliqueSink + ?Sized, O: SearchObserver>(
    g: &BipartiteGraph,
    cfg: &EnumConfig,
    sink: &mut S,
    observer: O,
) -> (EnumStats, O) {
    let kind = OrderingKind::from_mode(cfg.ie_mode).expect("enumerate_ie requires an ie mode");
    let ord = order_vertices(g, kind);
    let pos = ord.positions();
    let mut mark = vec![false; g.left_count()];
    let mut search = Search::with_observer(g, cfg.clone(), observer);
    for i in 0..ord.order.len() {
        let inst = instance_at(g, &ord, &pos, i, &mut mark);
        let root = inst.to_branch(g).expect("root instances satisfy the branch invariants");
        if search.run(root, 1, sink).is_break() {
            break;
        }
    }
    search.into_parts()
}

/// Shared, serialized sink for parallel instance execution.
struct SharedSink<'a, S: ?Sized> {
    inner: &'a Mutex<&'a mut S>,
}

impl<S: BicliqueSink + ?Sized> BicliqueSink for SharedSink<'_, S> {
    fn accept(&mut self, left: &[u32], right: &[u32]) -> ControlFlow<()> {
        self.inner.lock().expect("sink lock poisoned").accept(left, right)
    }
}

/// Runs the instances on `threads` workers. Deliveries are serialized
/// through a lock; their order depends on scheduling, the delivered set
/// does not. The emit limit is not supported here.
pub fn enumerate_ie_parallel<S: BicliqueSink + Send + ?Sized>(
    g: &BipartiteGraph,
    cfg: &EnumConfig,
    sink: &mut S,
    threads: usize,
) -> EnumStats {
    let kind = OrderingKind::from_mode(cfg.ie_mode).expect("enumerate_ie requires an ie mode");
    let ord = order_vertices(g, kind);
    let pos = ord.positions();
    let next = AtomicUsize::new(0);
    let stop = std::sync::atomic::AtomicBool::new(false);
    let shared = Mutex::new(sink);
    let mut wcfg = cfg.clone();
    wcfg.emit_limit = None;

    let parts: Vec<EnumStats> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads.max(1))
            .map(|_| {
                let (ord, pos, next, stop, shared, wcfg) = (&ord, &pos, &next, &stop, &shared, &wcfg);
                scope.spawn(move || {
                    let mut search = Search::new(g, wcfg.clone());
                    let mut mark = vec![false; g.left_count()];
                    let mut out = SharedSink { inner: shared };
                    loop {
                        if stop.load(Ordering::Relaxed) {
                            break;
                        }
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        if i >= ord.order.len() {
                            break;
                        }
                        let root = instance_at(g, ord, pos, i, &mut mark)
                            .to_branch(g)
                            .expect("root instances satisfy the branch invariants");
                        if search.run(root, 1, &mut out).is_break() {
                            stop.store(true, Ordering::Relaxed);
                            break;
                        }
                    }
                    search.into_parts().0
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });

    let mut total = EnumStats::default();
    for p in &parts {
        total.merge(p);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branch::Tier;
    use crate::gen::gen_crown;
    use crate::sink::{CollectSink, CountSink};

    fn star() -> BipartiteGraph {
        BipartiteGraph::from_edges(1, 3, [(0, 0), (0, 1), (0, 2)]).unwrap()
    }

    fn k22() -> BipartiteGraph {
        BipartiteGraph::from_edges(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap()
    }

    fn l(i: u32) -> VertexRef {
        VertexRef::left(i)
    }

    fn r(i: u32) -> VertexRef {
        VertexRef::right(i)
    }

    #[test]
    fn star_orderings() {
        for kind in [
            OrderingKind::Arbitrary,
            OrderingKind::Degree,
            OrderingKind::Degeneracy,
            OrderingKind::Unilateral,
        ] {
            assert_eq!(order_vertices(&star(), kind).order, vec![0]);
        }
    }

    #[test]
    fn degree_ordering_sorts() {
        // degrees [3, 1, 2]
        let g = BipartiteGraph::from_edges(3, 3, [(0, 0), (0, 1), (0, 2), (1, 0), (2, 0), (2, 1)]).unwrap();
        assert_eq!(order_vertices(&g, OrderingKind::Degree).order, vec![1, 2, 0]);
    }

    #[test]
    fn degeneracy_on_crown() {
        // L0 goes first (lowest id); R1 and R2 drop to degree 1 and R1 is
        // peeled next, leaving L2 at degree 1 ahead of L1
        let g = gen_crown(3).unwrap();
        let ord = order_vertices(&g, OrderingKind::Degeneracy);
        assert_eq!(ord.order, vec![0, 2, 1]);
        assert_eq!(ord, order_vertices(&g, OrderingKind::Degeneracy));
    }

    #[test]
    fn instances_of_complete_graph() {
        let g = k22();
        let ord = order_vertices(&g, OrderingKind::Arbitrary);
        let i0 = build_instance(&g, &ord, 0).unwrap();
        assert_eq!(i0.s, vec![l(0)]);
        let mut c = i0.c.clone();
        c.sort();
        assert_eq!(c, vec![l(1), r(0), r(1)]);
        assert!(i0.x.is_empty());

        let i1 = build_instance(&g, &ord, 1).unwrap();
        assert_eq!(i1.s, vec![l(1)]);
        let mut c = i1.c.clone();
        c.sort();
        assert_eq!(c, vec![r(0), r(1)]);
        assert_eq!(i1.x, vec![l(0)]);
        assert!(build_instance(&g, &ord, 2).is_err());
    }

    #[test]
    fn star_instance() {
        let g = star();
        let i0 = build_instance(&g, &order_vertices(&g, OrderingKind::Arbitrary), 0).unwrap();
        assert_eq!(i0.c, vec![r(0), r(1), r(2)]);
        assert!(i0.x.is_empty());
    }

    #[test]
    fn gamma_examples() {
        let arb = |g: &BipartiteGraph| order_vertices(g, OrderingKind::Arbitrary);
        assert_eq!(gamma(&star(), &arb(&star())), 3);
        assert_eq!(gamma(&k22(), &arb(&k22())), 3);
        let crown = gen_crown(3).unwrap();
        assert_eq!(gamma(&crown, &arb(&crown)), 4);
        let empty = BipartiteGraph::empty();
        assert_eq!(gamma(&empty, &arb(&empty)), 0);
    }

    #[test]
    fn crown_under_ie() {
        let g = gen_crown(3).unwrap();
        let cfg = EnumConfig::new(Tier::Ips).with_ie(IeMode::Degeneracy);
        let mut sink = CollectSink::default();
        enumerate_ie(&g, &cfg, &mut sink);
        let n = sink.results.len();
        sink.results.sort();
        sink.results.dedup();
        assert_eq!((n, sink.results.len()), (6, 6));
    }

    #[test]
    fn complete_graph_found_once() {
        let g = k22();
        let cfg = EnumConfig::new(Tier::Ips).with_ie(IeMode::Arbitrary);
        let mut sink = CollectSink::default();
        enumerate_ie(&g, &cfg, &mut sink);
        assert_eq!(sink.results, vec![(vec![0, 1], vec![0, 1])]);

        // the second instance has L0 in X covering both candidates
        let ord = order_vertices(&g, OrderingKind::Arbitrary);
        let b = build_instance(&g, &ord, 1).unwrap().to_branch(&g).unwrap();
        assert!(b.prune_p2());
    }

    #[test]
    fn parallel_matches_sequential() {
        let g = crate::gen::gen_random_bipartite(12, 14, 0.5, 3).unwrap();
        for mode in [IeMode::Degeneracy, IeMode::Unilateral] {
            let cfg = EnumConfig::new(Tier::Ips).with_ie(mode);
            let mut seq = CollectSink::default();
            let s1 = enumerate_ie(&g, &cfg, &mut seq);
            let mut par = CollectSink::default();
            let s2 = enumerate_ie_parallel(&g, &cfg, &mut par, 4);
            seq.results.sort();
            par.results.sort();
            assert_eq!(seq.results, par.results);
            assert_eq!(s1.branches, s2.branches);
            let mut count = CountSink::default();
            enumerate_ie_parallel(&g, &cfg, &mut count, 1);
            assert_eq!(count.count, seq.results.len() as u64);
        }
    }
}
