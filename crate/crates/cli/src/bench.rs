//! Delay benchmarks over generator sweeps.

use std::fmt::Write as _;

use poset_enum::audit::PotentialConstants;
use poset_enum::measure::{delay_metrics, run, DelayMetrics, RunOptions};
use poset_enum::runtime::Count;
use poset_enum::stepper::{default_delta_bound, make_stepper, StepError};
use poset_enum::{Kind, Order, Poset};
use rayon::prelude::*;

/// Outputs measured per poset; the families grow exponentially.
pub const DEFAULT_PREFIX: u64 = 1 << 16;

#[derive(Debug, Clone, Copy)]
pub struct BenchConfig {
    pub kind: Kind,
    pub order: Order,
    pub loopless: bool,
    pub prefix: u64,
    pub constants: PotentialConstants,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchRow {
    pub n: u64,
    pub q: u64,
    pub metrics: DelayMetrics,
    /// Largest queue occupancy, loopless runs only.
    pub max_occupancy: Option<usize>,
}

pub fn bench_one(p: &Poset, cfg: &BenchConfig) -> Result<BenchRow, StepError> {
    let st = p.stats();
    let (metrics, max_occupancy) = if cfg.loopless {
        let mut s = make_stepper(p, cfg.kind, default_delta_bound(p), &cfg.constants);
        let mut stamps = Vec::new();
        while (stamps.len() as u64) < cfg.prefix {
            match s.step()? {
                Some(_) => stamps.push(s.ticks()),
                None => break,
            }
        }
        (DelayMetrics::from_stamps(&stamps, s.ticks()), Some(s.max_occupancy()))
    } else {
        let opts = RunOptions::new(cfg.kind, cfg.order).stamped().stop_after(cfg.prefix);
        (delay_metrics(&run(p, &opts, &mut Count::default())), None)
    };
    Ok(BenchRow { n: st.n, q: st.q, metrics, max_occupancy })
}

/// Benchmarks every poset, in parallel; rows keep the input order.
pub fn sweep(posets: &[Poset], cfg: &BenchConfig) -> Result<Vec<BenchRow>, StepError> {
    posets.par_iter().map(|p| bench_one(p, cfg)).collect()
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("n,q,outputs,total_ticks,ticks_per_output,max_gap_ticks,ticks_to_first\n");
    for r in rows {
        let m = &r.metrics;
        writeln!(
            out,
            "{},{},{},{},{:.3},{},{}",
            r.n, r.q, m.outputs, m.total_ticks, m.ticks_per_output, m.max_gap_ticks, m.ticks_to_first
        )
        .unwrap();
    }
    out
}

/// Largest over smallest value; infinite when the smallest is zero.
pub fn spread(values: impl IntoIterator<Item = f64>) -> f64 {
    let (lo, hi) = values.into_iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if lo == f64::INFINITY {
        1.0
    } else {
        hi / lo
    }
}
