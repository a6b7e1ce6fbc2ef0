//! Fixed graph corpus shared by the benchmarks.

use mbe_core::{BipartiteGraph, GraphSpec};

/// `(label, graph)` pairs; every entry is a generator spec.
pub fn corpus() -> Vec<(String, BipartiteGraph)> {
    ["crown:12", "random:30x30:0.5:seed1", "random:200x200:0.05:seed2", "biplex:14x14:seed3"]
        .into_iter()
        .map(|s| {
            let spec: GraphSpec = s.parse().expect("valid spec");
            (s.to_string(), spec.generate().expect("generator succeeds"))
        })
        .collect()
}
