//! Execution machinery shared by the enumerators: the tick meter, the
//! cursor holding the current set, visit sinks and the recursion trace.
//!
//! Recursion frames are futures. They never wait on anything external; a
//! frame suspends only at a checkpoint once the meter's budget is spent,
//! which is what lets [`crate::stepper`] resume the producer a bounded
//! number of ticks at a time.

use alloc::boxed::Box;
use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::{Cell, RefCell};
use core::future::Future;
use core::pin::{pin, Pin};
use core::task::{Context, Poll, Waker};

pub(crate) type Frame<'a> = Pin<Box<dyn Future<Output = FrameCost> + 'a>>;

/// Abstract instruction counter.
#[derive(Debug)]
pub struct Meter {
    ticks: Cell<u64>,
    limit: Cell<u64>,
    yield_now: Cell<bool>,
}

impl Default for Meter {
    fn default() -> Self {
        Meter { ticks: Cell::new(0), limit: Cell::new(u64::MAX), yield_now: Cell::new(false) }
    }
}

impl Meter {
    #[inline]
    pub fn tick(&self) {
        self.ticks.set(self.ticks.get() + 1);
    }

    #[inline]
    pub fn add(&self, k: u64) {
        self.ticks.set(self.ticks.get() + k);
    }

    #[inline]
    pub fn now(&self) -> u64 {
        self.ticks.get()
    }

    pub(crate) fn set_limit(&self, limit: u64) {
        self.limit.set(limit);
    }

    pub(crate) fn request_yield(&self) {
        self.yield_now.set(true);
    }

    /// Charges one tick, then suspends if the budget is spent.
    #[inline]
    pub(crate) fn step(&self) -> Checkpoint<'_> {
        self.tick();
        Checkpoint { meter: self, done: false }
    }

    /// Charges `k` ticks one at a time so the budget can interrupt.
    pub(crate) async fn charge(&self, k: usize) {
        for _ in 0..k {
            self.step().await;
        }
    }

    #[inline]
    pub(crate) fn checkpoint(&self) -> Checkpoint<'_> {
        Checkpoint { meter: self, done: false }
    }
}

pub(crate) struct Checkpoint<'m> {
    meter: &'m Meter,
    done: bool,
}

impl Future for Checkpoint<'_> {
    type Output = ();

    fn poll(mut self: Pin<&mut Self>, _: &mut Context<'_>) -> Poll<()> {
        let m = self.meter;
        if !self.done && (m.yield_now.get() || m.ticks.get() >= m.limit.get()) {
            self.done = true;
            m.yield_now.set(false);
            Poll::Pending
        } else {
            Poll::Ready(())
        }
    }
}

pub(crate) fn poll_once<F: Future + ?Sized>(f: Pin<&mut F>) -> Poll<F::Output> {
    let mut cx = Context::from_waker(Waker::noop());
    f.poll(&mut cx)
}

pub(crate) fn block_on<F: Future>(f: F) -> F::Output {
    let mut f = pin!(f);
    loop {
        if let Poll::Ready(v) = poll_once(f.as_mut()) {
            return v;
        }
    }
}

/// Change between two consecutively visited sets, as sorted internal ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Delta {
    pub added: Vec<usize>,
    pub removed: Vec<usize>,
}

impl Delta {
    /// Size of the symmetric difference.
    pub fn size(&self) -> usize {
        self.added.len() + self.removed.len()
    }

    /// Applies the change to a membership table.
    pub fn apply(&self, member: &mut [bool]) {
        for &e in &self.removed {
            member[e] = false;
        }
        for &e in &self.added {
            member[e] = true;
        }
    }

    /// Delta from the empty set to `set`.
    pub fn from_set(set: &[usize]) -> Delta {
        let mut added = set.to_vec();
        added.sort_unstable();
        Delta { added, removed: Vec::new() }
    }
}

/// Receives each visited set. `members` lists internal ids in no particular
/// order; `delta` is the change since the previous visit (the first delta is
/// relative to the empty set).
pub trait Sink {
    fn visit(&mut self, members: &[usize], delta: &Delta);
}

impl<F: FnMut(&[usize], &Delta)> Sink for F {
    fn visit(&mut self, members: &[usize], delta: &Delta) {
        self(members, delta)
    }
}

/// Collects every visited set, sorted.
#[derive(Debug, Default, Clone)]
pub struct Collect(pub Vec<Vec<usize>>);

impl Sink for Collect {
    fn visit(&mut self, members: &[usize], _: &Delta) {
        let mut s = members.to_vec();
        s.sort_unstable();
        self.0.push(s);
    }
}

/// Counts visits.
#[derive(Debug, Default, Clone, Copy)]
pub struct Count(pub u64);

impl Sink for Count {
    fn visit(&mut self, _: &[usize], _: &Delta) {
        self.0 += 1;
    }
}

/// Records the delta stream.
#[derive(Debug, Default, Clone)]
pub struct Deltas(pub Vec<Delta>);

impl Sink for Deltas {
    fn visit(&mut self, _: &[usize], delta: &Delta) {
        self.0.push(delta.clone());
    }
}

/// The set under construction, with O(1) membership and pending-change
/// tracking so each visit can report its delta.
#[derive(Debug, Clone)]
pub struct Cursor {
    flags: Vec<bool>,
    pos: Vec<usize>,
    members: Vec<usize>,
    shown: Vec<bool>,
    touched: Vec<bool>,
    pending: Vec<usize>,
}

impl Cursor {
    pub fn new(n: usize) -> Cursor {
        Cursor {
            flags: vec![false; n],
            pos: vec![0; n],
            members: Vec::with_capacity(n),
            shown: vec![false; n],
            touched: vec![false; n],
            pending: Vec::new(),
        }
    }

    #[inline]
    pub fn contains(&self, e: usize) -> bool {
        self.flags[e]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    fn touch(&mut self, e: usize) {
        if !self.touched[e] {
            self.touched[e] = true;
            self.pending.push(e);
        }
    }

    pub fn insert(&mut self, e: usize) {
        debug_assert!(!self.flags[e], "element {e} inserted twice");
        self.flags[e] = true;
        self.pos[e] = self.members.len();
        self.members.push(e);
        self.touch(e);
    }

    pub fn remove(&mut self, e: usize) {
        debug_assert!(self.flags[e], "element {e} removed while absent");
        self.flags[e] = false;
        let p = self.pos[e];
        self.members.swap_remove(p);
        if p < self.members.len() {
            self.pos[self.members[p]] = p;
        }
        self.touch(e);
    }

    /// Sets membership; returns whether anything changed.
    pub fn set(&mut self, e: usize, member: bool) -> bool {
        if self.flags[e] == member {
            return false;
        }
        if member {
            self.insert(e);
        } else {
            self.remove(e);
        }
        true
    }

    /// Pops members until `len` remain. Only meaningful when the members
    /// above `len` were pushed with [`Cursor::insert`] and never removed.
    pub fn truncate(&mut self, len: usize) {
        while self.members.len() > len {
            let e = self.members.pop().unwrap();
            self.flags[e] = false;
            self.touch(e);
        }
    }

    /// Net change since the previous call.
    pub fn take_delta(&mut self) -> Delta {
        let mut d = Delta::default();
        for e in self.pending.drain(..) {
            self.touched[e] = false;
            if self.flags[e] != self.shown[e] {
                self.shown[e] = self.flags[e];
                if self.flags[e] {
                    d.added.push(e);
                } else {
                    d.removed.push(e);
                }
            }
        }
        d.added.sort_unstable();
        d.removed.sort_unstable();
        d
    }
}

/// Cost summary a frame hands back to its parent.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FrameCost {
    /// Ticks spent in the frame and all its descendants.
    pub subtree: u64,
    /// Largest sum of own ticks along a path from this frame to a leaf.
    pub max_path: u64,
}

/// What the trace records.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TraceConfig {
    /// Frames deeper than this are not executed; they are recorded with
    /// their element sets only.
    pub max_depth: Option<u32>,
    /// Keep element and chain lists per node (needed for potentials).
    pub keep_sets: bool,
}

/// One recursion node as observed during a run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TraceNode {
    pub parent: Option<usize>,
    pub depth: u32,
    /// Index of the subposet within the parent's split (`i` of `P_i`).
    pub branch: usize,
    pub size: usize,
    /// Elements of the subposet (internal ids), when kept.
    pub elements: Vec<usize>,
    /// Longest chain chosen by the frame, bottom to top, when kept.
    pub chain: Vec<usize>,
    pub subtree_ticks: u64,
    pub own_ticks: u64,
    pub max_path: u64,
    /// Sets visited by the frame itself.
    pub visits: u64,
    /// Not executed because of the depth limit.
    pub phantom: bool,
}

/// Recursion tree of one run plus the tick stamp of each visit.
#[derive(Debug, Clone, Default)]
pub struct Trace {
    pub config: TraceConfig,
    pub nodes: Vec<TraceNode>,
    pub stamps: Vec<u64>,
}

pub(crate) enum Output<'a> {
    Sink(&'a mut dyn Sink),
    Queue { items: VecDeque<Delta>, capacity: usize },
}

/// State shared by every frame of one run.
pub(crate) struct Ctx<'a> {
    pub meter: Meter,
    pub cursor: RefCell<Cursor>,
    pub out: RefCell<Output<'a>>,
    pub trace: Option<RefCell<Trace>>,
    pub stamps: Option<RefCell<Vec<u64>>>,
    pub visits: Cell<u64>,
    pub stop_after: Option<u64>,
    pub halted: Cell<bool>,
    pub path_bound: Option<u64>,
    pub path_violation: Cell<Option<u64>>,
}

impl<'a> Ctx<'a> {
    pub fn new(n: usize, out: Output<'a>) -> Ctx<'a> {
        Ctx {
            meter: Meter::default(),
            cursor: RefCell::new(Cursor::new(n)),
            out: RefCell::new(out),
            trace: None,
            stamps: None,
            visits: Cell::new(0),
            stop_after: None,
            halted: Cell::new(false),
            path_bound: None,
            path_violation: Cell::new(None),
        }
    }

    #[inline]
    pub fn step(&self) -> Checkpoint<'_> {
        self.meter.step()
    }

    #[inline]
    pub fn insert(&self, e: usize) {
        self.meter.tick();
        self.cursor.borrow_mut().insert(e);
    }

    #[inline]
    pub fn set(&self, e: usize, member: bool) {
        self.meter.tick();
        self.cursor.borrow_mut().set(e, member);
    }

    #[inline]
    pub fn depth_len(&self) -> usize {
        self.cursor.borrow().len()
    }

    /// Pops back to `len` members; one tick per popped element.
    pub async fn truncate(&self, len: usize) {
        while self.depth_len() > len {
            {
                let mut c = self.cursor.borrow_mut();
                let top = c.len() - 1;
                c.truncate(top);
            }
            self.step().await;
        }
    }

    pub async fn visit(&self) {
        self.meter.tick();
        let delta = self.cursor.borrow_mut().take_delta();
        let count = self.visits.get() + 1;
        self.visits.set(count);
        if let Some(s) = &self.stamps {
            s.borrow_mut().push(self.meter.now());
        }
        if let Some(t) = &self.trace {
            t.borrow_mut().stamps.push(self.meter.now());
        }
        match &mut *self.out.borrow_mut() {
            Output::Sink(sink) => {
                let c = self.cursor.borrow();
                sink.visit(c.members(), &delta);
            }
            Output::Queue { items, capacity } => {
                items.push_back(delta);
                if items.len() > *capacity {
                    self.meter.request_yield();
                }
            }
        }
        if self.stop_after == Some(count) {
            self.halted.set(true);
            self.meter.request_yield();
        }
        self.meter.checkpoint().await
    }

    /// Opens a frame. Returns `None` when the frame lies below the trace
    /// depth limit and must not run.
    pub fn enter(&self, parent: Option<usize>, depth: u32, branch: usize, elements: impl Fn() -> Vec<usize>) -> Option<Scope> {
        let start = self.meter.now();
        let mut node = None;
        if let Some(t) = &self.trace {
            let mut t = t.borrow_mut();
            let cfg = t.config;
            let phantom = cfg.max_depth.is_some_and(|d| depth > d);
            let els = if cfg.keep_sets || phantom { elements() } else { Vec::new() };
            t.nodes.push(TraceNode {
                parent,
                depth,
                branch,
                size: els.len(),
                elements: els,
                phantom,
                ..TraceNode::default()
            });
            if phantom {
                return None;
            }
            node = Some(t.nodes.len() - 1);
        }
        Some(Scope { node, start, children_subtree: 0, children_path: 0 })
    }

    pub fn record_chain(&self, scope: &Scope, chain: impl Fn() -> Vec<usize>, size: usize) {
        if let (Some(t), Some(id)) = (&self.trace, scope.node) {
            let mut t = t.borrow_mut();
            t.nodes[id].size = size;
            if t.config.keep_sets {
                t.nodes[id].chain = chain();
            }
        }
    }

    pub fn exit(&self, scope: Scope, own_visits: u64) -> FrameCost {
        let subtree = self.meter.now() - scope.start;
        let own = subtree - scope.children_subtree;
        let cost = FrameCost { subtree, max_path: own + scope.children_path };
        if let (Some(t), Some(id)) = (&self.trace, scope.node) {
            let node = &mut t.borrow_mut().nodes[id];
            node.subtree_ticks = subtree;
            node.own_ticks = own;
            node.max_path = cost.max_path;
            node.visits = own_visits;
        }
        if let Some(bound) = self.path_bound {
            if cost.max_path > bound && self.path_violation.get().is_none() {
                self.path_violation.set(Some(cost.max_path));
            }
        }
        cost
    }
}

/// Bookkeeping for one open frame.
pub(crate) struct Scope {
    pub node: Option<usize>,
    start: u64,
    children_subtree: u64,
    children_path: u64,
}

impl Scope {
    pub fn child_done(&mut self, c: FrameCost) {
        self.children_subtree += c.subtree;
        self.children_path = self.children_path.max(c.max_path);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cursor_nets_toggles() {
        let mut c = Cursor::new(5);
        c.insert(1);
        c.insert(3);
        assert_eq!(c.take_delta(), Delta { added: vec![1, 3], removed: vec![] });
        c.remove(1);
        c.insert(1);
        c.set(4, true);
        c.set(3, false);
        assert_eq!(c.take_delta(), Delta { added: vec![4], removed: vec![3] });
        c.truncate(0);
        assert!(c.is_empty());
        assert_eq!(c.take_delta(), Delta { added: vec![], removed: vec![1, 4] });
    }

    #[test]
    fn checkpoint_yields_once_over_budget() {
        let m = Meter::default();
        m.set_limit(2);
        let mut f = pin!(async {
            m.step().await;
            m.step().await;
            m.step().await;
        });
        assert!(poll_once(f.as_mut()).is_pending());
        assert_eq!(m.now(), 2);
        m.set_limit(u64::MAX);
        assert!(poll_once(f.as_mut()).is_ready());
        assert_eq!(m.now(), 3);
    }
}
