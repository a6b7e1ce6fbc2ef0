use std::io::Write;
use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use anyhow::Context;
use mbe_core::{
    compare, normalize_sides, oracle_enumerate, BicliqueResult, BipartiteGraph, EnumConfig, EnumStats,
    GraphSpec, IeMode, ResultSet, Side, SizeConstraints, Tier, VertexRef,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::io::{format_result, load_source, open_output, write_file};
use crate::report::{digest_line, peak_memory_kb, RunConfig, RunReport, StatsReport};
use crate::{
    CliError, EnumerateArgs, GenerateArgs, OutputFormat, VerifyArgs, EXIT_DIFF, EXIT_OK, EXIT_TRUNCATED,
};

fn budget(secs: Option<f64>) -> Result<Option<Duration>, CliError> {
    secs.map(|s| Duration::try_from_secs_f64(s).map_err(|_| CliError::Usage(format!("bad time budget {s}"))))
        .transpose()
}

/// Runs the enumerator on the side-normalized graph and reports every
/// result in the input's orientation and original ids.
pub fn run_normalized<F>(g: BipartiteGraph, cfg: &EnumConfig, mut on_result: F) -> (EnumStats, bool)
where
    F: FnMut(&[u64], &[u64]) -> ControlFlow<()>,
{
    let norm = normalize_sides(g);
    let mut cfg = cfg.clone();
    if norm.swapped {
        cfg.constraints = cfg.constraints.swapped();
    }
    let g = &norm.graph;
    let mut ids = [Vec::new(), Vec::new()];
    let mut sink = |l: &[u32], r: &[u32]| {
        for (buf, (side, idx)) in ids.iter_mut().zip([(Side::Left, l), (Side::Right, r)]) {
            buf.clear();
            buf.extend(idx.iter().map(|&i| g.original_id(VertexRef::new(side, i))));
            buf.sort_unstable();
        }
        if norm.swapped {
            on_result(&ids[1], &ids[0])
        } else {
            on_result(&ids[0], &ids[1])
        }
    };
    let stats = mbe_core::enumerate(g, &cfg, &mut sink);
    (stats, norm.swapped)
}

pub fn enumerate_config(args: &crate::AlgoArgs) -> Result<EnumConfig, CliError> {
    Ok(EnumConfig::new(Tier::from(args.algo))
        .with_constraints(args.constraints()?)
        .with_ie(IeMode::from(args.ie)))
}

pub fn enumerate(args: &EnumerateArgs, count_only: bool) -> anyhow::Result<u8> {
    let count_only = count_only || args.count_only;
    let (label, g) = load_source(args.source.input.as_deref(), args.source.gen.as_deref())?;
    let mut cfg = enumerate_config(&args.algo)?;
    cfg.emit_limit = args.limit;
    cfg.time_budget = budget(args.time_budget)?;
    cfg.stats_enabled = args.stats.is_some();

    let mut out = open_output(&args.output)?;
    let mut line = String::new();
    let mut digest: u64 = 0;
    let mut write_err = None;
    let started = Instant::now();
    let (stats, swapped) = run_normalized(g, &cfg, |l, r| {
        if count_only && args.stats.is_none() {
            return ControlFlow::Continue(());
        }
        format_result(&mut line, args.format, l, r);
        digest = digest.wrapping_add(digest_line(&line));
        if !count_only {
            if let Err(e) = writeln!(out, "{line}") {
                write_err = Some(e);
                return ControlFlow::Break(());
            }
        }
        ControlFlow::Continue(())
    });
    let wall = started.elapsed();
    if let Some(e) = write_err {
        return Err(CliError::Io(format!("writing results: {e}")).into());
    }
    if count_only {
        writeln!(out, "{}", stats.outputs).map_err(|e| CliError::Io(format!("writing count: {e}")))?;
    }
    out.flush().map_err(|e| CliError::Io(format!("writing results: {e}")))?;

    if let Some(path) = &args.stats {
        let report = RunReport {
            dataset: label,
            config: RunConfig {
                algo: cfg.tier.name().to_string(),
                ie: cfg.ie_mode.name().to_string(),
                tau_l: args.algo.tau_l,
                tau_r: args.algo.tau_r,
                limit: args.limit,
                time_budget_secs: args.time_budget,
                swapped_sides: swapped,
            },
            stats: StatsReport::from(&stats),
            wall_clock_secs: wall.as_secs_f64(),
            peak_memory_kb: peak_memory_kb(),
            digest: format!("{digest:016x}"),
        };
        write_file(path, &(serde_json::to_string_pretty(&report)? + "\n"))?;
    }
    Ok(if stats.partial { EXIT_TRUNCATED } else { EXIT_OK })
}

pub fn generate(args: &GenerateArgs) -> anyhow::Result<u8> {
    let g = crate::io::generate(&args.spec)?;
    let mut out = open_output(&args.output)?;
    g.write_konect(&mut out)
        .and_then(|_| out.flush())
        .map_err(|e| CliError::Io(format!("writing graph: {e}")))?;
    Ok(EXIT_OK)
}

fn collect(g: &BipartiteGraph, cfg: &EnumConfig) -> ResultSet {
    let mut set = ResultSet::new();
    run_normalized(g.clone(), cfg, |l, r| {
        set.insert(BicliqueResult {
            left: l.to_vec(),
            right: r.to_vec(),
        });
        ControlFlow::Continue(())
    });
    set
}

/// Compares one graph; prints the diff and returns false on mismatch.
fn verify_one(label: &str, g: &BipartiteGraph, cfg: &EnumConfig, k: &SizeConstraints, fault: bool) -> anyhow::Result<bool> {
    let want = oracle_enumerate(g, k).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut got = collect(g, cfg);
    if fault {
        got.pop_first();
    }
    let diff = compare(&got, &want);
    if diff.is_empty() {
        return Ok(true);
    }
    println!(
        "{label}: {} only in enumerator, {} only in oracle",
        diff.only_a.len(),
        diff.only_b.len()
    );
    let mut line = String::new();
    for (tag, list) in [("+", &diff.only_a), ("-", &diff.only_b)] {
        for r in list {
            format_result(&mut line, OutputFormat::Lines, &r.left, &r.right);
            println!("  {tag} {line}");
        }
    }
    Ok(false)
}

pub fn verify(args: &VerifyArgs) -> anyhow::Result<u8> {
    let cfg = enumerate_config(&args.algo)?;
    let k = cfg.constraints;
    let mut ok = true;
    match args.trials {
        Some(n) => {
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            for _ in 0..n {
                let spec = GraphSpec::Random {
                    left: rng.gen_range(1..=10),
                    right: rng.gen_range(1..=10),
                    p: [0.3, 0.5, 0.7, 0.9][rng.gen_range(0..4)],
                    seed: rng.gen(),
                };
                let g = spec.generate().context("generating trial graph")?;
                ok &= verify_one(&spec.to_string(), &g, &cfg, &k, args.inject_fault)?;
            }
            println!("{n} trials, {}", if ok { "no differences" } else { "differences found" });
        }
        None => {
            let (label, g) = load_source(args.input.as_deref(), args.gen.as_deref())?;
            ok = verify_one(&label, &g, &cfg, &k, args.inject_fault)?;
            if ok {
                println!("{label}: results match the oracle");
            }
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_DIFF })
}
