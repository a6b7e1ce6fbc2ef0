use serde::Serialize;

use mbe_core::EnumStats;

#[derive(Debug, Clone, Serialize)]
pub struct StatsReport {
    pub branches: u64,
    pub biplex_batches: u64,
    pub trivial_terminals: u64,
    pub pruned_p1: u64,
    pub pruned_p2: u64,
    pub outputs: u64,
    pub max_depth: u64,
    pub batch_work: u64,
    pub partial: bool,
    pub max_delay_secs: Option<f64>,
}

impl From<&EnumStats> for StatsReport {
    fn from(s: &EnumStats) -> Self {
        StatsReport {
            branches: s.branches,
            biplex_batches: s.biplex_batches,
            trivial_terminals: s.trivial_terminals,
            pruned_p1: s.pruned_p1,
            pruned_p2: s.pruned_p2,
            outputs: s.outputs,
            max_depth: s.max_depth,
            batch_work: s.batch_work,
            partial: s.partial,
            max_delay_secs: s.delay_samples.iter().max().map(|d| d.as_secs_f64()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub algo: String,
    pub ie: String,
    pub tau_l: usize,
    pub tau_r: usize,
    pub limit: Option<u64>,
    pub time_budget_secs: Option<f64>,
    pub swapped_sides: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub dataset: String,
    pub config: RunConfig,
    pub stats: StatsReport,
    pub wall_clock_secs: f64,
    pub peak_memory_kb: Option<u64>,
    /// Order-independent hash of the result lines, hex.
    pub digest: String,
}

/// FNV-1a of one canonical result line. Summing these over all results
/// gives a digest that does not depend on output order.
pub fn digest_line(line: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in line.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Peak resident set size, where the platform reports it.
pub fn peak_memory_kb() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    status
        .lines()
        .find_map(|l| l.strip_prefix("VmHWM:"))
        .and_then(|v| v.trim().trim_end_matches("kB").trim().parse().ok())
}
