//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any criterion fails.

use std::ops::ControlFlow;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use mbe_core::biplex::{decompose_complement, emit_batch, mis_from_cycle, mis_from_path};
use mbe_core::ie::{gamma, order_vertices, OrderingKind};
use mbe_core::{
    compare, enumerate, enumerate_observed, gen_crown, gen_random_2biplex, gen_random_bipartite, oracle_enumerate,
    BicliqueResult, BipartiteGraph, Branch, CollectSink, CountSink, EnumConfig, IeMode, PruneRule, ResultSet,
    SearchObserver, Side, SizeConstraints, Tier,
};

const PS: [f64; 4] = [0.3, 0.5, 0.7, 0.9];
const TAUS: [(usize, usize); 4] = [(1, 1), (2, 1), (2, 2), (3, 2)];
const ORDERINGS: [OrderingKind; 4] = [
    OrderingKind::Arbitrary,
    OrderingKind::Degree,
    OrderingKind::Degeneracy,
    OrderingKind::Unilateral,
];

type Outcome = Result<String, String>;

fn tau(t: (usize, usize)) -> SizeConstraints {
    SizeConstraints::new(t.0, t.1).unwrap()
}

/// Seeded corpus of 500 graphs with both sides at most 10.
fn small_corpus() -> Vec<BipartiteGraph> {
    (0..500u64)
        .map(|i| {
            let l = 1 + (i * 7 % 10) as usize;
            let r = 1 + ((i * 3 + i / 10) % 10) as usize;
            gen_random_bipartite(l, r, PS[(i % 4) as usize], 1000 + i).unwrap()
        })
        .collect()
}

fn results(g: &BipartiteGraph, cfg: &EnumConfig) -> (ResultSet, usize) {
    let mut sink = CollectSink::default();
    enumerate(g, cfg, &mut sink);
    let n = sink.results.len();
    let set = sink
        .results
        .iter()
        .map(|(l, r)| BicliqueResult::from_indices(g, l, r))
        .collect();
    (set, n)
}

fn count(g: &BipartiteGraph, cfg: &EnumConfig) -> (u64, mbe_core::EnumStats) {
    let mut sink = CountSink::default();
    let stats = enumerate(g, cfg, &mut sink);
    (sink.count, stats)
}

fn oracle_equivalence(corpus: &[BipartiteGraph]) -> Outcome {
    let started = Instant::now();
    let mut checks = 0u64;
    for (i, g) in corpus.iter().enumerate() {
        for t in TAUS {
            let k = tau(t);
            let want = oracle_enumerate(g, &k).map_err(|e| e.to_string())?;
            for tier in Tier::ALL {
                for mode in IeMode::ALL {
                    let cfg = EnumConfig::new(tier).with_constraints(k).with_ie(mode);
                    let (got, n) = results(g, &cfg);
                    let diff = compare(&got, &want);
                    if !diff.is_empty() || n != got.len() {
                        return Err(format!(
                            "graph {i} tau {t:?} {} {}: {} extra, {} missing, {} duplicates",
                            tier.name(),
                            mode.name(),
                            diff.only_a.len(),
                            diff.only_b.len(),
                            n - got.len()
                        ));
                    }
                    checks += 1;
                }
            }
        }
    }
    let secs = started.elapsed().as_secs_f64();
    let msg = format!("{checks} comparisons, zero diff, {secs:.1}s");
    if secs < 120.0 {
        Ok(msg)
    } else {
        Err(format!("{msg} exceeds 120s"))
    }
}

fn crown_closed_form() -> Outcome {
    let mut parts = Vec::new();
    for half in [3usize, 5, 10, 15] {
        let g = gen_crown(half).unwrap();
        let started = Instant::now();
        let (n, _) = count(&g, &EnumConfig::new(Tier::Ips));
        let secs = started.elapsed().as_secs_f64();
        let want = (1u64 << half) - 2;
        if n != want {
            return Err(format!("crown({half}): {n} results, expected {want}"));
        }
        if half == 15 && secs >= 5.0 {
            return Err(format!("crown(15) took {secs:.2}s"));
        }
        parts.push(format!("crown({half})={n}"));
    }
    Ok(parts.join(", "))
}

fn branch_separation() -> Outcome {
    for half in 3..=16 {
        let (_, s) = count(&gen_crown(half).unwrap(), &EnumConfig::new(Tier::Ips));
        if s.branches != 1 {
            return Err(format!("ips on crown({half}) used {} branches", s.branches));
        }
    }
    let mut parts = vec!["ips=1 for half 3..=16".to_string()];
    for half in [10usize, 12, 14] {
        let (_, s) = count(&gen_crown(half).unwrap(), &EnumConfig::new(Tier::Basic));
        let bound = 1u64 << (half - 1);
        if s.branches < bound {
            return Err(format!("basic on crown({half}): {} branches < {bound}", s.branches));
        }
        parts.push(format!("basic({half})={}", s.branches));
    }
    Ok(parts.join(", "))
}

fn ablation_ordering() -> Outcome {
    let mut totals = [0u64; 3];
    for seed in 0..50u64 {
        let g = gen_random_bipartite(30, 30, 0.5, 4000 + seed).unwrap();
        let mut outs = [0u64; 3];
        for (i, tier) in Tier::ALL.into_iter().enumerate() {
            let (n, s) = count(&g, &EnumConfig::new(tier));
            totals[i] += s.branches;
            outs[i] = n;
        }
        if outs[0] != outs[1] || outs[1] != outs[2] {
            return Err(format!("seed {seed}: tiers disagree on output count {outs:?}"));
        }
    }
    let [basic, bps, ips] = totals;
    let msg = format!("basic={basic}, bps={bps}, ips={ips}, ips/basic={:.3}", ips as f64 / basic as f64);
    if ips <= bps && bps <= basic && (ips as f64) < 0.95 * basic as f64 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

/// Maximal independent sets of a path or cycle on `0..n`, by subset scan.
fn brute_mis(n: usize, cycle: bool) -> Vec<Vec<usize>> {
    let adjacent = |a: usize, b: usize| a.abs_diff(b) == 1 || (cycle && a.abs_diff(b) == n - 1);
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let set: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let independent = set.iter().all(|&a| set.iter().all(|&b| !adjacent(a, b)));
        let maximal = (0..n)
            .filter(|&v| mask >> v & 1 == 0)
            .all(|v| set.iter().any(|&a| adjacent(a, v)));
        if independent && maximal {
            out.push(set);
        }
    }
    out.sort();
    out
}

fn canonical(mut sets: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    for s in &mut sets {
        s.sort_unstable();
    }
    sets.sort();
    sets
}

fn batch_correctness() -> Outcome {
    let k = SizeConstraints::default();
    let mut emitted = 0;
    for seed in 0..200u64 {
        let l = 1 + (seed % 10) as usize;
        let r = 1 + (seed * 7 / 3 % 10) as usize;
        let g = gen_random_2biplex(l, r, 7000 + seed).unwrap();
        let want = oracle_enumerate(&g, &k).unwrap();
        let b = Branch::make_root(&g);
        let got: ResultSet = if b.c_is_empty() {
            ResultSet::new()
        } else {
            let d = decompose_complement(&g, &b);
            let mut sink = CollectSink::default();
            emit_batch(&b, &d, &k, &mut sink);
            let set: ResultSet = sink
                .results
                .iter()
                .map(|(l, r)| BicliqueResult::from_indices(&g, l, r))
                .collect();
            if set.len() != sink.results.len() {
                return Err(format!("2-biplex {seed}: duplicate output"));
            }
            set
        };
        if !compare(&got, &want).is_empty() {
            return Err(format!("2-biplex {seed} ({l}x{r}): batch differs from oracle"));
        }
        emitted += got.len();
    }
    for n in 2..=16 {
        let ids: Vec<usize> = (0..n).collect();
        if canonical(mis_from_path(&ids)) != brute_mis(n, false) {
            return Err(format!("path of length {n}"));
        }
        if n >= 4 && n % 2 == 0 && canonical(mis_from_cycle(&ids)) != brute_mis(n, true) {
            return Err(format!("cycle of length {n}"));
        }
    }
    Ok(format!("200 graphs, {emitted} results; paths 2..=16 and even cycles 4..=16 match"))
}

fn ie_and_gamma(corpus: &[BipartiteGraph]) -> Outcome {
    for (i, g) in corpus.iter().enumerate() {
        let (plain, _) = results(g, &EnumConfig::new(Tier::Ips));
        for mode in IeMode::ALL {
            let (got, n) = results(g, &EnumConfig::new(Tier::Ips).with_ie(mode));
            if n != got.len() || !compare(&got, &plain).is_empty() {
                return Err(format!("graph {i}: {} differs from plain enumeration", mode.name()));
            }
        }
        let n = g.vertex_count();
        let d = g.max_degree();
        for kind in ORDERINGS {
            let gm = gamma(g, &order_vertices(g, kind));
            let ok = if d == 0 { gm == 0 } else { gm <= (n - 1).min(d * d + d - 1) };
            if !ok {
                return Err(format!("graph {i}: gamma {gm} with n={n}, max degree {d} ({kind:?})"));
            }
        }
    }
    let mut worst = 0;
    for seed in 0..20u64 {
        let g = gen_random_bipartite(300, 300, 0.02, 9000 + seed).unwrap();
        for kind in ORDERINGS {
            let gm = gamma(&g, &order_vertices(&g, kind));
            if gm >= g.vertex_count() {
                return Err(format!("sparse graph {seed}: gamma {gm} not below n"));
            }
            worst = worst.max(gm);
        }
    }
    Ok(format!("ie matches plain on 500 graphs; sparse max gamma {worst} < 600"))
}

/// Records every P2 prune and checks it against the maximal bicliques of
/// the whole graph, as side bitmasks.
struct P2Audit {
    maximal: Vec<[u32; 2]>,
    pruned: u64,
    violations: u64,
}

fn mask(ids: &[u32]) -> u32 {
    ids.iter().fold(0, |m, &i| m | 1 << i)
}

impl SearchObserver for P2Audit {
    fn on_prune(&mut self, b: &Branch, rule: PruneRule) {
        if rule != PruneRule::P2 {
            return;
        }
        self.pruned += 1;
        let s = [mask(b.s(Side::Left)), mask(b.s(Side::Right))];
        let sc = [s[0] | mask(b.c(Side::Left)), s[1] | mask(b.c(Side::Right))];
        let inside = |h: &[u32; 2]| (0..2).all(|i| h[i] & s[i] == s[i] && h[i] & !sc[i] == 0);
        if self.maximal.iter().any(inside) {
            self.violations += 1;
        }
    }
}

fn p2_soundness() -> Outcome {
    let mut pruned = 0;
    let mut violations = 0;
    let mut graphs = 0;
    let mut seed = 0u64;
    while pruned < 10_000 && seed < 200_000 {
        let l = 3 + (seed % 4) as usize;
        let r = 12 - l - (seed / 4 % 3) as usize;
        let g = gen_random_bipartite(l, r, PS[(seed / 12 % 4) as usize], 20_000 + seed).unwrap();
        seed += 1;
        let maximal: Vec<[u32; 2]> = oracle_enumerate(&g, &SizeConstraints::default())
            .unwrap()
            .iter()
            .map(|h| {
                // generated graphs use id = index + 1
                let idx = |ids: &[u64]| ids.iter().fold(0u32, |m, &id| m | 1 << (id - 1));
                [idx(&h.left), idx(&h.right)]
            })
            .collect();
        for tier in Tier::ALL {
            for mode in [IeMode::Off, IeMode::Degeneracy] {
                let audit = P2Audit {
                    maximal: maximal.clone(),
                    pruned: 0,
                    violations: 0,
                };
                let cfg = EnumConfig::new(tier).with_ie(mode);
                let (_, audit) = enumerate_observed(&g, &cfg, &mut |_: &[u32], _: &[u32]| ControlFlow::Continue(()), audit);
                pruned += audit.pruned;
                violations += audit.violations;
            }
        }
        graphs += 1;
    }
    let msg = format!("{pruned} P2 prunes over {graphs} graphs, {violations} violations");
    if violations == 0 && pruned >= 10_000 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn size_constraints(corpus: &[BipartiteGraph]) -> Outcome {
    for (i, g) in corpus.iter().enumerate() {
        for tier in Tier::ALL {
            for mode in [IeMode::Off, IeMode::Degeneracy] {
                let base = EnumConfig::new(tier).with_ie(mode);
                let (all, _) = results(g, &base);
                for t in TAUS {
                    let filtered: ResultSet = all
                        .iter()
                        .filter(|r| r.left.len() >= t.0 && r.right.len() >= t.1)
                        .cloned()
                        .collect();
                    let (got, _) = results(g, &base.clone().with_constraints(tau(t)));
                    if !compare(&got, &filtered).is_empty() {
                        return Err(format!("graph {i} {} {} tau {t:?}", tier.name(), mode.name()));
                    }
                }
            }
        }
    }
    Ok("500 graphs x 3 tiers x 2 modes x 4 tau".to_string())
}

fn batch_delay() -> Outcome {
    let g = gen_crown(18).unwrap();
    let total = (1u64 << 18) - 2;
    let started = Instant::now();
    let (n, _) = count(&g, &EnumConfig::new(Tier::Ips));
    let secs = started.elapsed().as_secs_f64();
    if n != total {
        return Err(format!("crown(18) gave {n} results"));
    }
    let points: Vec<(f64, f64)> = (1..=16u64)
        .map(|i| {
            let k = total * i / 16;
            let (_, s) = count(&g, &EnumConfig::new(Tier::Ips).with_emit_limit(k));
            (s.outputs as f64, s.batch_work as f64)
        })
        .collect();
    let m = points.len() as f64;
    let (mx, my) = (
        points.iter().map(|p| p.0).sum::<f64>() / m,
        points.iter().map(|p| p.1).sum::<f64>() / m,
    );
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let r2 = sxy * sxy / (sxx * syy);
    let msg = format!("R^2={r2:.5}, slope {:.2} work/result, {secs:.2}s for {n} results", sxy / sxx);
    if r2 >= 0.99 && secs < 10.0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn run_cli(args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let o = Command::new(env!("CARGO_BIN_EXE_mbe"))
        .args(args)
        .output()
        .expect("spawn mbe");
    (o.status.code(), o.stdout)
}

fn stats_counters(path: &std::path::Path) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let stats = v["stats"].as_object_mut().unwrap();
    stats.remove("max_delay_secs");
    v["stats"].take()
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("mbe-accept-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let stats = dir.join("stats.json");
    let stats_arg = stats.to_str().unwrap().to_string();
    let mut commands: Vec<Vec<String>> = Vec::new();
    for algo in ["basic", "bps", "ips"] {
        for ie in ["off", "degeneracy", "unilateral"] {
            for format in ["lines", "json"] {
                commands.push(
                    [
                        "enumerate", "--gen", "random:25x30:0.4:seed3", "--algo", algo, "--ie", ie, "--format", format,
                        "--tau-l", "2", "--stats", &stats_arg,
                    ]
                    .map(String::from)
                    .to_vec(),
                );
            }
        }
    }
    commands.push(["count", "--gen", "crown:12", "--stats", &stats_arg].map(String::from).to_vec());
    commands.push(["generate", "biplex:20x15:seed4"].map(String::from).to_vec());
    commands.push(["verify", "--trials", "20", "--seed", "5"].map(String::from).to_vec());

    let mut core = Vec::new();
    for _ in 0..2 {
        let g = gen_random_bipartite(25, 25, 0.5, 77).unwrap();
        let mut order = Vec::new();
        let stats = enumerate(&g, &EnumConfig::new(Tier::Ips).with_ie(IeMode::Degree), &mut |l: &[u32], r: &[u32]| {
            order.push((l.to_vec(), r.to_vec()));
            ControlFlow::Continue(())
        });
        core.push((order, stats.counters()));
    }
    if core[0] != core[1] {
        return Err("library enumeration differs between runs".into());
    }

    for cmd in &commands {
        let args: Vec<&str> = cmd.iter().map(String::as_str).collect();
        let has_stats = cmd.contains(&stats_arg);
        let (c1, o1) = run_cli(&args);
        let s1 = has_stats.then(|| stats_counters(&stats));
        let (c2, o2) = run_cli(&args);
        let s2 = has_stats.then(|| stats_counters(&stats));
        if c1 != Some(0) || c1 != c2 || o1 != o2 || s1 != s2 {
            return Err(format!("`mbe {}` is not reproducible", args.join(" ")));
        }
    }
    Ok(format!("{} CLI commands byte-identical, library counters identical", commands.len()))
}

fn main() -> ExitCode {
    let corpus = small_corpus();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("oracle equivalence", Box::new(|| oracle_equivalence(&corpus))),
        ("crown closed form", Box::new(crown_closed_form)),
        ("branch separation", Box::new(branch_separation)),
        ("ablation ordering", Box::new(ablation_ordering)),
        ("2-biplex batch correctness", Box::new(batch_correctness)),
        ("IE exactly-once and gamma", Box::new(|| ie_and_gamma(&corpus))),
        ("P2 soundness", Box::new(p2_soundness)),
        ("size-constraint consistency", Box::new(|| size_constraints(&corpus))),
        ("batch delay", Box::new(batch_delay)),
        ("determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = check();
        let took = Duration::from_millis(started.elapsed().as_millis() as u64);
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail}) [{took:?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({detail}) [{took:?}]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
