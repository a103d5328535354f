//! Instrumented runs checked against the potential inequalities.

use poset_enum::audit::{
    check_gap, check_pair_bound, check_pushout, check_pyramid, check_subtree, GapReport, Ledger, PairStats,
    PotentialConstants, PushoutParams, PushoutReport, PyramidReport, Violation,
};
use poset_enum::measure::{run, RunOptions};
use poset_enum::runtime::{Count, TraceConfig};
use poset_enum::{Kind, Order, Poset};

/// Larger posets are audited to depth one unless a depth is given.
pub const FULL_AUDIT_MAX_N: usize = 64;

#[derive(Debug, Clone, Copy)]
pub struct AuditConfig {
    pub kind: Kind,
    pub order: Order,
    pub constants: PotentialConstants,
    pub max_depth: Option<u32>,
    pub pushout: Option<PushoutParams>,
}

impl AuditConfig {
    pub fn new(p: &Poset, kind: Kind, order: Order) -> Self {
        AuditConfig {
            kind,
            order,
            constants: PotentialConstants::calibrated(kind, order),
            max_depth: (p.len() > FULL_AUDIT_MAX_N).then_some(1),
            pushout: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AuditOutcome {
    pub ledger: Ledger,
    pub pyramid: PyramidReport,
    pub pair: Vec<(usize, PairStats)>,
    pub subtree: Vec<Violation>,
    /// Only for complete runs.
    pub gap: Option<GapReport>,
    pub pushout: Option<PushoutReport>,
}

pub fn audit(p: &Poset, cfg: &AuditConfig) -> AuditOutcome {
    let trace = TraceConfig { max_depth: cfg.max_depth, keep_sets: true };
    let opts = RunOptions::new(cfg.kind, cfg.order).traced(trace).stamped();
    let r = run(p, &opts, &mut Count::default());
    let ledger = Ledger::from_trace(p, cfg.kind, r.trace.as_ref().expect("traced run"), cfg.constants);
    let complete = ledger.records.iter().all(|r| !r.phantom);
    AuditOutcome {
        pyramid: check_pyramid(&ledger),
        pair: check_pair_bound(p, &ledger),
        subtree: check_subtree(&ledger),
        gap: complete.then(|| check_gap(&r.stamps, ledger.delta_measured(), &cfg.constants)),
        pushout: cfg.pushout.map(|params| check_pushout(&ledger, params)),
        ledger,
    }
}

fn ids(nodes: impl Iterator<Item = usize>) -> String {
    let v: Vec<String> = nodes.take(20).map(|n| n.to_string()).collect();
    v.join(",")
}

fn line(name: &str, bad: &[usize]) -> String {
    if bad.is_empty() {
        format!("{name}: PASS")
    } else {
        format!("{name}: FAIL ({} nodes: {})", bad.len(), ids(bad.iter().copied()))
    }
}

impl AuditOutcome {
    /// Pyramid, pair bound, subtree and gap checks; push-out is a
    /// comparison and does not count.
    pub fn passed(&self) -> bool {
        self.pyramid.passed() && self.pair.is_empty() && self.subtree.is_empty() && self.gap.is_none_or(|g| g.passed())
    }

    /// One line per check.
    pub fn summary(&self) -> Vec<String> {
        let py = &self.pyramid;
        let mut bad: Vec<usize> = py.violations.iter().chain(&py.inner_violations).chain(&py.singleton_violations).map(|v| v.node).collect();
        bad.sort_unstable();
        bad.dedup();
        let mut out = vec![line("pyramid", &bad)];
        if let Some(s) = py.root_slack {
            out.push(format!("root slack: {s}"));
        }
        out.push(line("pair bound", &self.pair.iter().map(|(n, _)| *n).collect::<Vec<_>>()));
        out.push(line("subtree", &self.subtree.iter().map(|v| v.node).collect::<Vec<_>>()));
        out.push(match &self.gap {
            None => "gap: SKIPPED (depth-limited run)".into(),
            Some(g) if g.passed() => format!("gap: PASS (delta {})", g.delta),
            Some(g) => format!("gap: FAIL (prefix excess {}, pair excess {})", g.prefix_excess, g.pair_excess),
        });
        if let Some(po) = &self.pushout {
            let bad: Vec<usize> = po.violations().map(|(n, _)| *n).collect();
            out.push(line("push-out", &bad));
        }
        out
    }
}

/// Reads `alpha=1.5`, `beta=4` style terms.
pub fn parse_pushout(terms: &[String], tstar: u64) -> Option<PushoutParams> {
    let (mut alpha, mut beta) = (None, None);
    for t in terms.iter().flat_map(|t| t.split(',')) {
        match t.split_once('=')? {
            ("alpha", v) => alpha = Some(v.to_string()),
            ("beta", v) => beta = Some(v.parse().ok()?),
            _ => return None,
        }
    }
    PushoutParams::new(&alpha?, beta?, tstar)
}
