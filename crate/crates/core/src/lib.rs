//! Maximal biclique enumeration on bipartite graphs.
//!
//! The search works on branches `(S, C, X)` and comes in three tiers:
//! plain pivoting, pivoting with an early stop once `S ∪ C` is a 2-biplex,
//! and the same stop combined with a partition-based pivot. An optional
//! decomposition splits the work into one root instance per left vertex.

pub mod biplex;
pub mod branch;
pub mod enumerate;
pub mod error;
pub mod gen;
pub mod graph;
pub mod ie;
pub mod oracle;
pub mod pivot;
pub mod sink;

pub use branch::{Branch, TerminalKind, Tier};
pub use enumerate::{
    enumerate, enumerate_observed, verify_result, BicliqueResult, EnumConfig, EnumStats, IeMode, NoObserver,
    PruneRule, Search, SearchObserver,
};
pub use error::GraphError;
pub use gen::{gen_crown, gen_random_2biplex, gen_random_bipartite, GraphSpec};
pub use graph::{complement_degree, load_konect, normalize_sides, BipartiteGraph, Normalized, Side, SizeConstraints, VertexRef};
pub use ie::{build_instance, enumerate_ie_parallel, gamma, order_vertices, OrderingKind, VertexOrdering};
pub use oracle::{compare, oracle_enumerate, ResultSet};
pub use sink::{BicliqueSink, CollectSink, CountSink};
