//! Deterministic synthetic graph generators and the generator spec
//! mini-language (`crown:H`, `random:LxR:P:seedS`, `biplex:LxR:seedS`).

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::GraphError;
use crate::graph::{BipartiteGraph, Side, VertexRef};

/// The crown graph: `u_i` is adjacent to every `v_j` with `j != i`.
pub fn gen_crown(half: usize) -> Result<BipartiteGraph, GraphError> {
    if half < 2 {
        return Err(GraphError::InvalidArgument(format!("crown needs half >= 2, got {half}")));
    }
    let edges = (0..half as u32).flat_map(|i| (0..half as u32).filter(move |&j| j != i).map(move |j| (i, j)));
    BipartiteGraph::from_edges(half, half, edges)
}

/// Erdős–Rényi style bipartite graph: every cross pair is an edge with
/// probability `p`, drawn from a ChaCha8 stream seeded with `seed`.
pub fn gen_random_bipartite(left: usize, right: usize, p: f64, seed: u64) -> Result<BipartiteGraph, GraphError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GraphError::InvalidArgument(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for l in 0..left as u32 {
        for r in 0..right as u32 {
            if rng.gen_bool(p) {
                edges.push((l, r));
            }
        }
    }
    BipartiteGraph::from_edges(left, right, edges)
}

/// A random 2-biplex: its cross-side complement is a disjoint union of
/// isolated vertices, alternating paths and even cycles.
pub fn gen_random_2biplex(left: usize, right: usize, seed: u64) -> Result<BipartiteGraph, GraphError> {
    if left == 0 || right == 0 {
        return Err(GraphError::InvalidArgument("2-biplex generator needs both sides non-empty".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pools: [Vec<u32>; 2] = [(0..left as u32).collect(), (0..right as u32).collect()];
    pools[0].shuffle(&mut rng);
    pools[1].shuffle(&mut rng);

    let mut missing = vec![false; left * right];
    let mut cut = |a: VertexRef, b: VertexRef| {
        let (l, r) = if a.side == Side::Left { (a, b) } else { (b, a) };
        missing[l.index as usize * right + r.index as usize] = true;
    };

    while !pools[0].is_empty() || !pools[1].is_empty() {
        let pairs = pools[0].len().min(pools[1].len());
        match rng.gen_range(0..3) {
            // cycle of 2k vertices
            2 if pairs >= 2 => {
                let k = rng.gen_range(2..=pairs.min(4));
                let mut cycle = Vec::with_capacity(2 * k);
                for _ in 0..k {
                    cycle.push(VertexRef::left(pools[0].pop().unwrap()));
                    cycle.push(VertexRef::right(pools[1].pop().unwrap()));
                }
                for i in 0..cycle.len() {
                    cut(cycle[i], cycle[(i + 1) % cycle.len()]);
                }
            }
            // alternating path
            1 if pairs >= 1 => {
                let mut side = if rng.gen_bool(0.5) { Side::Left } else { Side::Right };
                let target = rng.gen_range(2..=7);
                let mut prev: Option<VertexRef> = None;
                for _ in 0..target {
                    let Some(i) = pools[side.idx()].pop() else { break };
                    let v = VertexRef::new(side, i);
                    if let Some(p) = prev {
                        cut(p, v);
                    }
                    prev = Some(v);
                    side = side.opposite();
                }
            }
            _ => {
                let side = if pools[0].is_empty() {
                    1
                } else if pools[1].is_empty() {
                    0
                } else {
                    rng.gen_range(0..2)
                };
                pools[side].pop();
            }
        }
    }

    let edges = (0..left as u32)
        .flat_map(|l| (0..right as u32).map(move |r| (l, r)))
        .filter(|&(l, r)| !missing[l as usize * right + r as usize]);
    let g = BipartiteGraph::from_edges(left, right, edges)?;
    if !is_k_biplex(&g, 2) {
        return Err(GraphError::Invariant("generated graph is not a 2-biplex".into()));
    }
    Ok(g)
}

/// Every vertex misses at most `k` vertices of the opposite side.
pub fn is_k_biplex(g: &BipartiteGraph, k: usize) -> bool {
    Side::BOTH.iter().all(|&side| {
        let opp = g.count(side.opposite());
        (0..g.count(side) as u32).all(|i| opp - g.degree(VertexRef::new(side, i)) <= k)
    })
}

/// A reproducible graph source, as written in suite files and on the
/// command line.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphSpec {
    Crown { half: usize },
    Random { left: usize, right: usize, p: f64, seed: u64 },
    Biplex { left: usize, right: usize, seed: u64 },
}

impl GraphSpec {
    pub fn generate(&self) -> Result<BipartiteGraph, GraphError> {
        match *self {
            GraphSpec::Crown { half } => gen_crown(half),
            GraphSpec::Random { left, right, p, seed } => gen_random_bipartite(left, right, p, seed),
            GraphSpec::Biplex { left, right, seed } => gen_random_2biplex(left, right, seed),
        }
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::Crown { half } => write!(f, "crown:{half}"),
            GraphSpec::Random { left, right, p, seed } => write!(f, "random:{left}x{right}:{p}:seed{seed}"),
            GraphSpec::Biplex { left, right, seed } => write!(f, "biplex:{left}x{right}:seed{seed}"),
        }
    }
}

fn bad_spec(s: &str) -> GraphError {
    GraphError::InvalidArgument(format!(
        "bad generator spec {s:?} (expected crown:H, random:LxR:P:seedS or biplex:LxR:seedS)"
    ))
}

fn parse_dims(s: &str, whole: &str) -> Result<(usize, usize), GraphError> {
    let (l, r) = s.split_once('x').ok_or_else(|| bad_spec(whole))?;
    Ok((l.parse().map_err(|_| bad_spec(whole))?, r.parse().map_err(|_| bad_spec(whole))?))
}

fn parse_seed(s: &str, whole: &str) -> Result<u64, GraphError> {
    s.strip_prefix("seed")
        .unwrap_or(s)
        .parse()
        .map_err(|_| bad_spec(whole))
}

impl FromStr for GraphSpec {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        match parts.as_slice() {
            ["crown", h] => Ok(GraphSpec::Crown {
                half: h.parse().map_err(|_| bad_spec(s))?,
            }),
            ["random", dims, p, seed] => {
                let (left, right) = parse_dims(dims, s)?;
                let p: f64 = p.parse().map_err(|_| bad_spec(s))?;
                Ok(GraphSpec::Random {
                    left,
                    right,
                    p,
                    seed: parse_seed(seed, s)?,
                })
            }
            ["biplex", dims, seed] => {
                let (left, right) = parse_dims(dims, s)?;
                Ok(GraphSpec::Biplex {
                    left,
                    right,
                    seed: parse_seed(seed, s)?,
                })
            }
            _ => Err(bad_spec(s)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::complement_degree;

    #[test]
    fn crown_structure() {
        let g = gen_crown(3).unwrap();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g.neighbors(VertexRef::left(0)), &[1, 2]);
        for h in 2..8 {
            let g = gen_crown(h).unwrap();
            assert_eq!(g.edge_count(), h * (h - 1));
            let all: Vec<u32> = (0..h as u32).collect();
            for side in Side::BOTH {
                for i in 0..h as u32 {
                    let v = VertexRef::new(side, i);
                    assert_eq!(g.degree(v), h - 1);
                    assert_eq!(complement_degree(&g, v, &all), 1);
                }
            }
        }
        assert!(gen_crown(1).is_err());
    }

    #[test]
    fn random_extremes_and_determinism() {
        assert_eq!(gen_random_bipartite(4, 5, 0.0, 1).unwrap().edge_count(), 0);
        assert_eq!(gen_random_bipartite(4, 5, 1.0, 1).unwrap().edge_count(), 20);
        assert_eq!(gen_random_bipartite(4, 4, 0.5, 7).unwrap(), gen_random_bipartite(4, 4, 0.5, 7).unwrap());
        assert!(gen_random_bipartite(2, 2, 1.5, 0).is_err());
        assert!(gen_random_bipartite(2, 2, -0.1, 0).is_err());
    }

    #[test]
    fn biplex_single_pair_has_two_shapes() {
        let mut seen = std::collections::BTreeSet::new();
        for seed in 0..64 {
            seen.insert(gen_random_2biplex(1, 1, seed).unwrap().edge_count());
        }
        assert!(seen.iter().all(|&m| m <= 1));
    }

    #[test]
    fn biplex_postcondition_holds() {
        for seed in 0..200 {
            let (l, r) = (1 + seed as usize % 9, 1 + (seed as usize * 7) % 11);
            let g = gen_random_2biplex(l, r, seed).unwrap();
            g.validate().unwrap();
            assert!(is_k_biplex(&g, 2));
            assert_eq!(g, gen_random_2biplex(l, r, seed).unwrap());
        }
    }

    #[test]
    fn spec_round_trip() {
        for text in ["crown:12", "random:8x9:0.5:seed7", "biplex:10x10:seed3"] {
            let spec: GraphSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
        assert!("crown".parse::<GraphSpec>().is_err());
        assert!("random:8:0.5:seed1".parse::<GraphSpec>().is_err());
        assert_eq!(
            "random:3x4:1:seed2".parse::<GraphSpec>().unwrap().generate().unwrap().edge_count(),
            12
        );
    }
}
