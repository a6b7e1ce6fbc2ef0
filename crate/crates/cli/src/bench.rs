use std::io::Write;
use std::ops::ControlFlow;
use std::path::Path;
use std::time::{Duration, Instant};

use anyhow::Context;
use mbe_core::ie::{gamma, order_vertices, OrderingKind};
use mbe_core::{normalize_sides, BipartiteGraph, EnumConfig, GraphSpec, IeMode, SizeConstraints, Tier};
use serde::Serialize;

use crate::commands::run_normalized;
use crate::io::{load_path, open_output};
use crate::{BenchArgs, CliError, ReportFormat, EXIT_OK};

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub dataset: String,
    pub algo: String,
    pub ie: String,
    pub repeats: u32,
    pub mean_secs: Option<f64>,
    pub branches: Option<u64>,
    pub outputs: Option<u64>,
    pub biplex_batches: Option<u64>,
    pub gamma: Option<usize>,
    pub partial: Option<bool>,
    /// `(k, cumulative seconds / k)` on a doubling grid of output counts.
    pub delay_curve: Vec<(u64, f64)>,
    pub error: Option<String>,
}

impl BenchRow {
    fn failed(dataset: &str, algo: &str, ie: &str, error: String) -> Self {
        BenchRow {
            dataset: dataset.to_string(),
            algo: algo.to_string(),
            ie: ie.to_string(),
            repeats: 0,
            mean_secs: None,
            branches: None,
            outputs: None,
            biplex_batches: None,
            gamma: None,
            partial: None,
            delay_curve: Vec::new(),
            error: Some(error),
        }
    }
}

fn load_entry(entry: &str) -> anyhow::Result<BipartiteGraph> {
    match entry.parse::<GraphSpec>() {
        Ok(spec) => Ok(spec.generate()?),
        Err(_) => load_path(Path::new(entry)),
    }
}

pub fn delay_curve(samples: &[Duration]) -> Vec<(u64, f64)> {
    let mut curve = Vec::new();
    let mut total = Duration::ZERO;
    let mut next = 1u64;
    for (i, d) in samples.iter().enumerate() {
        total += *d;
        let k = i as u64 + 1;
        if k == next || k == samples.len() as u64 {
            curve.push((k, total.as_secs_f64() / k as f64));
            next = next.saturating_mul(2);
        }
    }
    curve
}

fn run_cell(g: &BipartiteGraph, cfg: &EnumConfig, repeats: u32) -> (f64, mbe_core::EnumStats) {
    let mut total = Duration::ZERO;
    let mut last = None;
    for _ in 0..repeats.max(1) {
        let started = Instant::now();
        let (stats, _) = run_normalized(g.clone(), cfg, |_, _| ControlFlow::Continue(()));
        total += started.elapsed();
        last = Some(stats);
    }
    (
        total.as_secs_f64() / f64::from(repeats.max(1)),
        last.expect("at least one repeat"),
    )
}

pub fn bench_rows(args: &BenchArgs) -> anyhow::Result<Vec<BenchRow>> {
    let suite = std::fs::read_to_string(&args.suite)
        .map_err(|e| CliError::Io(format!("cannot read suite {}: {e}", args.suite.display())))?;
    let k = SizeConstraints::new(args.tau_l, args.tau_r).map_err(|e| CliError::Usage(e.to_string()))?;
    let budget = args
        .time_budget
        .map(|s| Duration::try_from_secs_f64(s).map_err(|_| CliError::Usage(format!("bad time budget {s}"))))
        .transpose()?;

    let mut rows = Vec::new();
    for entry in suite.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let graph = load_entry(entry);
        for &algo in &args.algos {
            let tier = Tier::from(algo);
            for &ie in &args.ie {
                let mode = IeMode::from(ie);
                let g = match &graph {
                    Ok(g) => g,
                    Err(e) => {
                        rows.push(BenchRow::failed(entry, tier.name(), mode.name(), format!("{e:#}")));
                        continue;
                    }
                };
                let mut cfg = EnumConfig::new(tier).with_constraints(k).with_ie(mode).with_delay_samples();
                cfg.time_budget = budget;
                let (mean, stats) = run_cell(g, &cfg, args.repeats);
                let gamma = OrderingKind::from_mode(mode).map(|kind| {
                    let norm = normalize_sides(g.clone()).graph;
                    gamma(&norm, &order_vertices(&norm, kind))
                });
                rows.push(BenchRow {
                    dataset: entry.to_string(),
                    algo: tier.name().to_string(),
                    ie: mode.name().to_string(),
                    repeats: args.repeats.max(1),
                    mean_secs: Some(mean),
                    branches: Some(stats.branches),
                    outputs: Some(stats.outputs),
                    biplex_batches: Some(stats.biplex_batches),
                    gamma,
                    partial: Some(stats.partial),
                    delay_curve: delay_curve(&stats.delay_samples),
                    error: None,
                });
            }
        }
    }
    Ok(rows)
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

pub fn write_csv<W: Write>(mut w: W, rows: &[BenchRow]) -> std::io::Result<()> {
    writeln!(
        w,
        "dataset,algo,ie,repeats,mean_secs,branches,outputs,biplex_batches,gamma,partial,delay_curve,error"
    )?;
    for r in rows {
        let curve: Vec<String> = r.delay_curve.iter().map(|(k, s)| format!("{k}:{s:.3e}")).collect();
        let error = r.error.as_deref().map(|e| format!("\"{}\"", e.replace('"', "\"\""))).unwrap_or_default();
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.dataset,
            r.algo,
            r.ie,
            r.repeats,
            opt(&r.mean_secs),
            opt(&r.branches),
            opt(&r.outputs),
            opt(&r.biplex_batches),
            opt(&r.gamma),
            opt(&r.partial),
            curve.join(";"),
            error
        )?;
    }
    Ok(())
}

pub fn bench(args: &BenchArgs) -> anyhow::Result<u8> {
    let rows = bench_rows(args)?;
    let mut reported = std::collections::BTreeSet::new();
    for r in rows.iter().filter(|r| r.error.is_some()) {
        if reported.insert(&r.dataset) {
            eprintln!("{}: {}", r.dataset, r.error.as_deref().unwrap_or_default());
        }
    }
    let mut out = open_output(&args.report)?;
    match args.format {
        ReportFormat::Csv => write_csv(&mut out, &rows),
        ReportFormat::Json => serde_json::to_writer_pretty(&mut out, &rows)
            .map_err(std::io::Error::from)
            .and_then(|_| writeln!(out)),
    }
    .and_then(|_| out.flush())
    .context("writing bench report")
    .map_err(|e| CliError::Io(format!("{e:#}")))?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_on_doubling_grid() {
        let s = vec![Duration::from_millis(2); 5];
        let c = delay_curve(&s);
        let ks: Vec<u64> = c.iter().map(|p| p.0).collect();
        assert_eq!(ks, vec![1, 2, 4, 5]);
        assert!((c[3].1 - 0.002).abs() < 1e-9);
        assert!(delay_curve(&[]).is_empty());
    }
}
