//! Instrumented runs and the delay metrics reported by benchmarks.

use alloc::rc::Rc;
use alloc::vec::Vec;
use core::cell::RefCell;
use core::pin::pin;
use core::task::Poll;

use crate::antichains::{self, Direction};
use crate::ideals;
use crate::poset::Poset;
use crate::runtime::{poll_once, Ctx, Frame, Output, Sink, Trace, TraceConfig};
use crate::{Kind, Order};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub kind: Kind,
    pub order: Order,
    /// Only used by Gray antichain walks.
    pub direction: Direction,
    pub trace: Option<TraceConfig>,
    /// Record the tick count at every visit.
    pub stamps: bool,
    /// Stop once this many sets have been visited.
    pub stop_after: Option<u64>,
}

impl RunOptions {
    pub fn new(kind: Kind, order: Order) -> Self {
        RunOptions { kind, order, direction: Direction::Forward, trace: None, stamps: false, stop_after: None }
    }

    pub fn traced(mut self, config: TraceConfig) -> Self {
        self.trace = Some(config);
        self
    }

    pub fn stamped(mut self) -> Self {
        self.stamps = true;
        self
    }

    pub fn stop_after(mut self, visits: u64) -> Self {
        self.stop_after = Some(visits);
        self
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunReport {
    pub visits: u64,
    pub total_ticks: u64,
    /// Largest own-tick sum on a root-to-leaf path; `Δ` of the run.
    pub max_path: u64,
    pub stamps: Vec<u64>,
    pub trace: Option<Trace>,
    /// False when the run was cut short by `stop_after`.
    pub completed: bool,
}

pub(crate) fn root_frame<'c, 'a: 'c>(ctx: Rc<Ctx<'a>>, p: &'c Poset, kind: Kind, order: Order, dir: Direction) -> Frame<'c> {
    match (kind, order) {
        (Kind::Ideals, Order::Basic) => ideals::root_basic(ctx, p),
        (Kind::Ideals, Order::Gray) => ideals::root_gray(ctx, p),
        (Kind::Antichains, Order::Basic) => antichains::root_basic(ctx, p),
        (Kind::Antichains, Order::Gray) => antichains::root_gray(ctx, p, dir),
    }
}

pub fn run(p: &Poset, opts: &RunOptions, sink: &mut dyn Sink) -> RunReport {
    let mut ctx = Ctx::new(p.len(), Output::Sink(sink));
    ctx.stop_after = opts.stop_after;
    ctx.trace = opts.trace.map(|config| RefCell::new(Trace { config, ..Trace::default() }));
    if opts.stamps {
        ctx.stamps = Some(RefCell::new(Vec::new()));
    }
    let ctx = Rc::new(ctx);
    let mut max_path = 0;
    let mut completed = false;
    {
        let mut root = pin!(root_frame(ctx.clone(), p, opts.kind, opts.order, opts.direction));
        loop {
            if let Poll::Ready(cost) = poll_once(root.as_mut()) {
                max_path = cost.max_path;
                completed = true;
                break;
            }
            if ctx.halted.get() {
                break;
            }
        }
    }
    let Ok(mut ctx) = Rc::try_unwrap(ctx) else { unreachable!("frames outlived the run") };
    RunReport {
        visits: ctx.visits.get(),
        total_ticks: ctx.meter.now(),
        max_path,
        stamps: ctx.stamps.take().map(RefCell::into_inner).unwrap_or_default(),
        trace: ctx.trace.take().map(RefCell::into_inner),
        completed,
    }
}

/// Delay figures of one (possibly truncated) run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayMetrics {
    pub outputs: u64,
    pub total_ticks: u64,
    /// Ticks per output after the first one: `(total − first) / (outputs − 1)`.
    /// The setup before the first output is reported on its own.
    pub ticks_per_output: f64,
    /// Largest tick distance between consecutive outputs.
    pub max_gap_ticks: u64,
    pub ticks_to_first: u64,
}

impl DelayMetrics {
    /// From the tick stamp of each output and the ticks of the whole run.
    pub fn from_stamps(stamps: &[u64], total_ticks: u64) -> DelayMetrics {
        let outputs = stamps.len() as u64;
        let first = stamps.first().copied().unwrap_or(0);
        let max_gap = stamps.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0);
        let ticks_per_output = match outputs {
            0 => 0.0,
            1 => total_ticks as f64,
            k => (total_ticks - first) as f64 / (k - 1) as f64,
        };
        DelayMetrics { outputs, total_ticks, ticks_per_output, max_gap_ticks: max_gap, ticks_to_first: first }
    }
}

pub fn delay_metrics(report: &RunReport) -> DelayMetrics {
    let s = &report.stamps;
    // a truncated run is charged up to its last visit
    let total = if report.completed { report.total_ticks } else { s.last().copied().unwrap_or(0) };
    DelayMetrics::from_stamps(s, total)
}
