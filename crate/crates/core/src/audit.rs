//! Potential-function ledger over a traced recursion tree and the checks
//! run against it.
//!
//! Every inequality is evaluated in exact integers; the fractional push-out
//! factor is carried as a rational.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::poset::{Poset, PosetStats};
use crate::runtime::Trace;
use crate::{Kind, Order};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PotentialConstants {
    pub alpha: u64,
    pub beta: u64,
    pub gamma: u64,
    pub delta: u64,
    pub mu: u64,
    /// Ticks per coin.
    pub tstar: u64,
}

impl PotentialConstants {
    pub const DEFAULT_TSTAR: u64 = 8;

    pub const IDEALS: PotentialConstants =
        PotentialConstants { alpha: 922, beta: 921, gamma: 385, delta: 192, mu: 1844, tstar: Self::DEFAULT_TSTAR };

    pub const ANTICHAINS: PotentialConstants =
        PotentialConstants { alpha: 196, beta: 195, gamma: 97, delta: 96, mu: 392, tstar: Self::DEFAULT_TSTAR };

    pub fn for_kind(kind: Kind) -> Self {
        match kind {
            Kind::Ideals => Self::IDEALS,
            Kind::Antichains => Self::ANTICHAINS,
        }
    }

    /// Constants with the `T⋆` measured for the given recursion order.
    /// The Gray ideal walk spends up to 11.5 ticks per coin.
    pub fn calibrated(kind: Kind, order: Order) -> Self {
        match (kind, order) {
            (Kind::Ideals, Order::Gray) => Self::IDEALS.with_tstar(12),
            _ => Self::for_kind(kind),
        }
    }

    pub fn with_tstar(mut self, tstar: u64) -> Self {
        self.tstar = tstar;
        self
    }

    pub fn with_mu(mut self, mu: u64) -> Self {
        self.mu = mu;
        self
    }
}

pub fn potential(stats: PosetStats, c: &PotentialConstants) -> u64 {
    c.alpha + c.beta * stats.n + c.gamma * stats.q + c.delta * stats.t
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterationRecord {
    pub id: usize,
    pub parent: Option<usize>,
    pub depth: u32,
    pub branch: usize,
    pub stats: PosetStats,
    pub phi: u64,
    /// Own ticks `T(X)`, children excluded.
    pub ticks: u64,
    pub subtree_ticks: u64,
    pub children: Vec<usize>,
    pub children_phi_sum: u64,
    /// Sets visited by the iteration itself.
    pub visits: u64,
    /// Sets visited in the whole subtree.
    pub subtree_visits: u64,
    pub max_path: u64,
    /// Recorded but not run (depth limit).
    pub phantom: bool,
    /// Every descendant ran.
    pub complete: bool,
    pub elements: Vec<usize>,
    pub chain: Vec<usize>,
}

impl IterationRecord {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct Ledger {
    pub kind: Kind,
    pub constants: PotentialConstants,
    pub records: Vec<IterationRecord>,
    pub stamps: Vec<u64>,
}

impl Ledger {
    /// Builds the ledger from a trace recorded with `keep_sets`. Subposet
    /// statistics are computed by brute force here, never during the run.
    pub fn from_trace(p: &Poset, kind: Kind, trace: &Trace, constants: PotentialConstants) -> Ledger {
        let nodes = &trace.nodes;
        let mut records: Vec<IterationRecord> = nodes
            .iter()
            .enumerate()
            .map(|(id, t)| {
                let stats = p.subset_stats(&t.elements);
                IterationRecord {
                    id,
                    parent: t.parent,
                    depth: t.depth,
                    branch: t.branch,
                    stats,
                    phi: potential(stats, &constants),
                    ticks: t.own_ticks,
                    subtree_ticks: t.subtree_ticks,
                    children: Vec::new(),
                    children_phi_sum: 0,
                    visits: t.visits,
                    subtree_visits: t.visits,
                    max_path: t.max_path,
                    phantom: t.phantom,
                    complete: !t.phantom,
                    elements: t.elements.clone(),
                    chain: t.chain.clone(),
                }
            })
            .collect();
        // children are recorded after their parents
        for id in (0..records.len()).rev() {
            if let Some(par) = records[id].parent {
                let (phi, visits, complete) = (records[id].phi, records[id].subtree_visits, records[id].complete);
                let r = &mut records[par];
                r.children.push(id);
                r.children_phi_sum += phi;
                r.subtree_visits += visits;
                r.complete &= complete;
            }
        }
        for r in &mut records {
            r.children.reverse();
        }
        Ledger { kind, constants, records, stamps: trace.stamps.clone() }
    }

    pub fn root(&self) -> Option<&IterationRecord> {
        self.records.first()
    }

    /// Largest own-tick path sum, the `Δ` of the run.
    pub fn delta_measured(&self) -> u64 {
        self.root().map_or(0, |r| r.max_path)
    }

    /// CSV with header `node_id,parent_id,depth,n,q,t,phi,ticks,visits`;
    /// the root has an empty parent.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("node_id,parent_id,depth,n,q,t,phi,ticks,visits\n");
        for r in self.records.iter().filter(|r| !r.phantom) {
            let parent = r.parent.map(|p| format!("{p}")).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                r.id, parent, r.depth, r.stats.n, r.stats.q, r.stats.t, r.phi, r.ticks, r.visits
            );
        }
        out
    }
}

/// One failed inequality: `lhs >= rhs` did not hold at `node`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    pub node: usize,
    pub lhs: i128,
    pub rhs: i128,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PyramidReport {
    /// `(Σ child Φ + μ·visits − Φ)·T⋆ >= T(X)` at every run node.
    pub violations: Vec<Violation>,
    /// `Σ child Φ − Φ >= n + q` at every inner node.
    pub inner_violations: Vec<Violation>,
    /// Antichain leaf case `μ − Φ >= 1` for single-element subposets.
    pub singleton_violations: Vec<Violation>,
    pub checked: usize,
    /// `Σ child Φ − Φ` at the root, if it is an inner node; at least `n + q`.
    pub root_slack: Option<i128>,
}

impl PyramidReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.inner_violations.is_empty() && self.singleton_violations.is_empty()
    }
}

pub fn check_pyramid(ledger: &Ledger) -> PyramidReport {
    let c = &ledger.constants;
    let mut rep = PyramidReport::default();
    for r in ledger.records.iter().filter(|r| !r.phantom) {
        rep.checked += 1;
        let coins = r.children_phi_sum as i128 + (c.mu * r.visits) as i128 - r.phi as i128;
        let lhs = coins * c.tstar as i128;
        if lhs < r.ticks as i128 {
            rep.violations.push(Violation { node: r.id, lhs, rhs: r.ticks as i128 });
        }
        if !r.is_leaf() {
            let lhs = r.children_phi_sum as i128 - r.phi as i128;
            let rhs = (r.stats.n + r.stats.q) as i128;
            if lhs < rhs {
                rep.inner_violations.push(Violation { node: r.id, lhs, rhs });
            }
            if r.id == 0 {
                rep.root_slack = Some(lhs);
            }
        }
        if ledger.kind == Kind::Antichains && r.stats.n == 1 {
            let lhs = c.mu as i128 - r.phi as i128;
            if lhs < 1 {
                rep.singleton_violations.push(Violation { node: r.id, lhs, rhs: 1 });
            }
        }
    }
    rep
}

/// Subtree bound: ticks of every complete subtree `<= T⋆(μ·visits − Φ)`.
pub fn check_subtree(ledger: &Ledger) -> Vec<Violation> {
    let c = &ledger.constants;
    ledger
        .records
        .iter()
        .filter(|r| r.complete)
        .filter_map(|r| {
            let rhs = c.tstar as i128 * ((c.mu * r.subtree_visits) as i128 - r.phi as i128);
            (r.subtree_ticks as i128 > rhs).then_some(Violation { node: r.id, lhs: rhs, rhs: r.subtree_ticks as i128 })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GapReport {
    pub delta: u64,
    /// `max_j (stamp_j − (Δ + jμT⋆ − 1))`; the prefix bound holds iff `<= 0`.
    pub prefix_excess: i128,
    /// `max_{i<j} (stamp_j − stamp_i) − (2Δ + (j−i)μT⋆ − 1)`; holds iff `<= 0`.
    pub pair_excess: i128,
}

impl GapReport {
    pub fn passed(&self) -> bool {
        self.prefix_excess <= 0 && self.pair_excess <= 0
    }
}

/// Checks the visit-gap bounds on the stamps of a complete run. Visits are
/// numbered from 1.
pub fn check_gap(stamps: &[u64], delta: u64, c: &PotentialConstants) -> GapReport {
    let step = (c.mu * c.tstar) as i128;
    let d = delta as i128;
    let mut prefix_excess = i128::MIN;
    let mut pair_excess = i128::MIN;
    let mut min_g = i128::MAX;
    for (j0, &s) in stamps.iter().enumerate() {
        let j = j0 as i128 + 1;
        prefix_excess = prefix_excess.max(s as i128 - (d + j * step - 1));
        // stamp_j − stamp_i − (j − i)·step = g(j) − g(i)
        let g = s as i128 - j * step;
        if min_g != i128::MAX {
            pair_excess = pair_excess.max(g - min_g - (2 * d - 1));
        }
        min_g = min_g.min(g);
    }
    if stamps.is_empty() {
        prefix_excess = 0;
    }
    if stamps.len() < 2 {
        pair_excess = 0;
    }
    GapReport { delta, prefix_excess, pair_excess }
}

/// Push-out parameters; `alpha = alpha_num / alpha_den > 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PushoutParams {
    pub alpha_num: u64,
    pub alpha_den: u64,
    pub beta: u64,
    pub tstar: u64,
}

impl PushoutParams {
    /// Parses a decimal like `1.5` or `2` for alpha.
    pub fn new(alpha: &str, beta: u64, tstar: u64) -> Option<PushoutParams> {
        let (int, frac) = alpha.split_once('.').unwrap_or((alpha, ""));
        let den = 10u64.checked_pow(frac.len() as u32)?;
        let num = format!("{int}{frac}").parse::<u64>().ok()?;
        (num > den).then_some(PushoutParams { alpha_num: num, alpha_den: den, beta, tstar })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PushoutReport {
    /// `(node, slack · alpha_den)` for every inner node, where slack is
    /// `Σ children T − (α T(X) − β(|C(X)| + 1) T⋆)`.
    pub slack: Vec<(usize, i128)>,
    pub root_slack: Option<i128>,
    /// Nodes that pass push-out but fail the pyramid inequality with the
    /// potential derived from push-out; always empty when the derivation
    /// is sound.
    pub cross_check_failures: Vec<usize>,
}

impl PushoutReport {
    pub fn violations(&self) -> impl Iterator<Item = &(usize, i128)> {
        self.slack.iter().filter(|(_, s)| *s < 0)
    }

    pub fn root_violated(&self) -> bool {
        self.root_slack.is_some_and(|s| s < 0)
    }
}

pub fn check_pushout(ledger: &Ledger, params: PushoutParams) -> PushoutReport {
    let (an, ad) = (params.alpha_num as i128, params.alpha_den as i128);
    let (beta, ts) = (params.beta as i128, params.tstar as i128);
    let recs = &ledger.records;
    let mut slack = Vec::new();
    let mut cross = Vec::new();
    for r in recs.iter().filter(|r| !r.phantom && !r.is_leaf()) {
        if r.children.iter().any(|&c| recs[c].phantom) {
            continue;
        }
        let sum: i128 = r.children.iter().map(|&c| recs[c].ticks as i128).sum();
        let cc = r.children.len() as i128;
        let t = r.ticks as i128;
        let s = sum * ad - (an * t - beta * (cc + 1) * ts * ad);
        slack.push((r.id, s));
        if s >= 0 {
            // Φ(Y) = T(Y)/((α−1)T⋆) + 3β/(α−1); scaled by (α−1)T⋆·ad
            let am1 = an - ad;
            let phi = |ticks: i128| ticks * ad + 3 * beta * ts * ad;
            let lhs = r.children.iter().map(|&c| phi(recs[c].ticks as i128)).sum::<i128>()
                + (ledger.constants.mu * r.visits) as i128 * am1 * ts
                - phi(t);
            if lhs < t * am1 {
                cross.push(r.id);
            }
        }
    }
    let root_slack = slack.iter().find(|(id, _)| *id == 0).map(|&(_, s)| s);
    PushoutReport { slack, root_slack, cross_check_failures: cross }
}

/// `(Σ children T − T(child on branch b)) / T(root)` at the root.
pub fn pushout_ratio(ledger: &Ledger, branch: usize) -> Option<f64> {
    let recs = &ledger.records;
    let root = recs.first()?;
    let mut sum = 0u64;
    let mut excluded = None;
    for &c in &root.children {
        if recs[c].phantom {
            return None;
        }
        sum += recs[c].ticks;
        if recs[c].branch == branch {
            excluded = Some(recs[c].ticks);
        }
    }
    Some((sum - excluded?) as f64 / root.ticks as f64)
}

fn binom3(a: u64) -> u64 {
    if a < 3 {
        0
    } else {
        a * (a - 1) * (a - 2) / 6
    }
}

/// `48 Σ j(C(a_j,3)+1) + 48 Σ j(C(b_j,3)+1) >= Σa · Σb`, `j` from 1.
pub fn check_aux(a: &[u64], b: &[u64]) -> bool {
    assert!(a.iter().chain(b).all(|&x| x >= 1), "entries must be positive");
    let side = |v: &[u64]| -> u128 {
        v.iter().enumerate().map(|(j, &x)| (j as u128 + 1) * (binom3(x) as u128 + 1)).sum::<u128>() * 48
    };
    let lhs = side(a) + side(b);
    let rhs = a.iter().sum::<u64>() as u128 * b.iter().sum::<u64>() as u128;
    lhs >= rhs
}

/// Pair and triple partition counts of one iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PairStats {
    /// Incomparable off-chain pairs with no chain element incomparable to
    /// both.
    pub q3: u64,
    /// `Σ_i |P_i|`.
    pub sum_n: u64,
    /// `Σ_i t″_i`.
    pub sum_t2: u64,
}

impl PairStats {
    pub fn holds(&self) -> bool {
        self.q3 <= 96 * (self.sum_t2 + self.sum_n)
    }
}

/// Computes the partition counts of a node from its elements and chain.
pub fn pair_stats(p: &Poset, kind: Kind, elements: &[usize], chain: &[usize]) -> PairStats {
    let k = chain.len();
    let on_chain = |u: usize| chain.contains(&u);
    let off: Vec<usize> = elements.iter().copied().filter(|&u| !on_chain(u)).collect();
    let mut s = vec![0usize; off.len()];
    let mut l = vec![k + 1; off.len()];
    for (i, &u) in off.iter().enumerate() {
        for (m, &c) in chain.iter().enumerate() {
            if p.less(c, u) {
                s[i] = m + 1;
            }
            if l[i] == k + 1 && p.less(u, c) {
                l[i] = m + 1;
            }
        }
    }
    // number of subposets P_i holding every element with the given levels
    let span = |lo: usize, hi: usize| -> u64 {
        let w = hi as i64 - lo as i64 - if kind == Kind::Antichains { 1 } else { 0 };
        w.max(0) as u64
    };
    let mut out = PairStats::default();
    for i in 0..off.len() {
        out.sum_n += span(s[i], l[i]);
        for j in i + 1..off.len() {
            if p.comparable(off[i], off[j]) {
                continue;
            }
            let (lo, hi) = (s[i].max(s[j]), l[i].min(l[j]));
            if hi <= lo + 1 {
                out.q3 += 1;
            }
            for h in j + 1..off.len() {
                if p.comparable(off[i], off[h]) || p.comparable(off[j], off[h]) {
                    continue;
                }
                let (lo, hi) = (lo.max(s[h]), hi.min(l[h]));
                if hi >= lo + 2 {
                    out.sum_t2 += span(lo, hi);
                }
            }
        }
    }
    out
}

/// Pair bound at every run node with a recorded chain; returns failures.
pub fn check_pair_bound(p: &Poset, ledger: &Ledger) -> Vec<(usize, PairStats)> {
    ledger
        .records
        .iter()
        .filter(|r| !r.phantom && !r.chain.is_empty())
        .filter_map(|r| {
            let st = pair_stats(p, ledger.kind, &r.elements, &r.chain);
            (!st.holds()).then_some((r.id, st))
        })
        .collect()
}
