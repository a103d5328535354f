//! Worst-case constant delay on top of the Gray enumerators.
//!
//! The producer is the ordinary enumeration, suspended at tick checkpoints.
//! Its visits go into a bounded queue; the stepper releases one set per
//! call and lets the producer run for `μT⋆` ticks in between, after a
//! warm-up of `Δ` ticks. The `j`-th scheduled pop is due once the producer
//! has run `Δ + j·μT⋆` ticks; a queue over capacity is popped at once.

use alloc::collections::VecDeque;
use alloc::rc::Rc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::antichains::Direction;
use crate::audit::PotentialConstants;
use crate::measure::root_frame;
use crate::poset::Poset;
use crate::runtime::{poll_once, Ctx, Delta, Frame, Output};
use crate::{Kind, Order};

/// Ticks per unit of `n(n + q) + n + 1` that bound a root-to-leaf path,
/// measured over the calibration corpus.
pub const DEFAULT_K: u64 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepError {
    /// The schedule asked for a set the producer had not reached.
    Underflow { emitted: u64 },
    /// A recursion path cost more than the configured bound.
    DeltaBound { bound: u64, observed: u64 },
}

impl fmt::Display for StepError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepError::Underflow { emitted } => write!(f, "queue popped empty after {emitted} outputs"),
            StepError::DeltaBound { bound, observed } => {
                write!(f, "Δ bound violated: path cost {observed} exceeds {bound}")
            }
        }
    }
}

/// `2K(n(n + q) + n + 1)`, a path bound with a 2x safety factor.
pub fn default_delta_bound(p: &Poset) -> u64 {
    let st = p.stats();
    2 * DEFAULT_K * (st.n * (st.n + st.q) + st.n + 1)
}

/// `max(1, ⌈2Δ / (μT⋆)⌉)`.
pub fn capacity_for(delta_bound: u64, c: &PotentialConstants) -> usize {
    (2 * delta_bound).div_ceil(c.mu * c.tstar).max(1) as usize
}

pub struct LooplessStepper<'p> {
    ctx: Rc<Ctx<'static>>,
    producer: Option<Frame<'p>>,
    capacity: usize,
    slot: u64,
    delta_bound: u64,
    emitted: u64,
    /// Producer tick count at which the next scheduled pop is due.
    next_due: u64,
    member: Vec<bool>,
    max_step_ticks: u64,
    max_occupancy: usize,
    failed: bool,
}

/// Stepper over the Gray order of `kind` (forward for antichains).
pub fn make_stepper<'p>(p: &'p Poset, kind: Kind, delta_bound: u64, c: &PotentialConstants) -> LooplessStepper<'p> {
    let capacity = capacity_for(delta_bound, c);
    let mut ctx = Ctx::new(p.len(), Output::Queue { items: VecDeque::with_capacity(capacity + 1), capacity });
    ctx.path_bound = Some(delta_bound);
    let ctx = Rc::new(ctx);
    let producer = root_frame(ctx.clone(), p, kind, Order::Gray, Direction::Forward);
    LooplessStepper {
        ctx,
        producer: Some(producer),
        capacity,
        slot: c.mu * c.tstar,
        delta_bound,
        emitted: 0,
        next_due: delta_bound + c.mu * c.tstar,
        member: vec![false; p.len()],
        max_step_ticks: 0,
        max_occupancy: 0,
        failed: false,
    }
}

impl LooplessStepper<'_> {
    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn emitted(&self) -> u64 {
        self.emitted
    }

    /// Current set as membership flags over internal ids.
    pub fn members(&self) -> &[bool] {
        &self.member
    }

    /// Most producer ticks spent in one call after the first.
    pub fn max_step_ticks(&self) -> u64 {
        self.max_step_ticks
    }

    /// Largest queue length between calls.
    pub fn max_occupancy(&self) -> usize {
        self.max_occupancy
    }

    /// Producer ticks so far.
    pub fn ticks(&self) -> u64 {
        self.ctx.meter.now()
    }

    fn queue_len(&self) -> usize {
        match &*self.ctx.out.borrow() {
            Output::Queue { items, .. } => items.len(),
            Output::Sink(_) => 0,
        }
    }

    fn check_path(&self) -> Result<(), StepError> {
        match self.ctx.path_violation.get() {
            Some(observed) => Err(StepError::DeltaBound { bound: self.delta_bound, observed }),
            None => Ok(()),
        }
    }

    /// Next set as a delta from the previous one; `None` once exhausted.
    pub fn step(&mut self) -> Result<Option<Delta>, StepError> {
        if self.failed {
            return Ok(None);
        }
        let ctx = self.ctx.clone();
        let meter = &ctx.meter;
        let start = meter.now();
        loop {
            if self.queue_len() > self.capacity {
                break;
            }
            if meter.now() >= self.next_due {
                self.next_due += self.slot;
                break;
            }
            let Some(fut) = self.producer.as_mut() else { break };
            meter.set_limit(self.next_due);
            if poll_once(fut.as_mut()).is_ready() {
                self.producer = None;
            }
            if let Err(e) = self.check_path() {
                self.failed = true;
                return Err(e);
            }
        }
        if self.emitted > 0 {
            self.max_step_ticks = self.max_step_ticks.max(meter.now() - start);
        }
        let popped = match &mut *self.ctx.out.borrow_mut() {
            Output::Queue { items, .. } => items.pop_front(),
            Output::Sink(_) => None,
        };
        self.max_occupancy = self.max_occupancy.max(self.queue_len());
        match popped {
            Some(d) => {
                d.apply(&mut self.member);
                self.emitted += 1;
                Ok(Some(d))
            }
            None if self.producer.is_none() => Ok(None),
            None => {
                self.failed = true;
                Err(StepError::Underflow { emitted: self.emitted })
            }
        }
    }
}

impl Iterator for LooplessStepper<'_> {
    type Item = Result<Delta, StepError>;

    fn next(&mut self) -> Option<Self::Item> {
        self.step().transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{antichain, chain};

    #[test]
    fn chain2_steps_in_order() {
        let p = chain(2);
        let c = PotentialConstants::IDEALS;
        let mut s = make_stepper(&p, Kind::Ideals, default_delta_bound(&p), &c);
        assert_eq!(s.step(), Ok(Some(Delta::default())));
        assert_eq!(s.step(), Ok(Some(Delta { added: vec![0], removed: vec![] })));
        assert_eq!(s.step(), Ok(Some(Delta { added: vec![1], removed: vec![] })));
        assert_eq!(s.step(), Ok(None));
    }

    #[test]
    fn empty_poset_has_one_visit() {
        let p = antichain(0);
        let c = PotentialConstants::IDEALS;
        let s = make_stepper(&p, Kind::Ideals, default_delta_bound(&p), &c);
        assert!(s.capacity() >= 1);
        assert_eq!(s.count(), 1);
    }

    #[test]
    fn capacity_is_monotone() {
        let c = PotentialConstants::IDEALS;
        let caps: Vec<usize> = [0, 1, 10_000, 100_000, 1_000_000].iter().map(|&d| capacity_for(d, &c)).collect();
        assert!(caps.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(capacity_for(0, &c), 1);
    }

    #[test]
    fn occupancy_within_capacity() {
        let p = antichain(10);
        let c = PotentialConstants::ANTICHAINS;
        let mut s = make_stepper(&p, Kind::Antichains, 5_000, &c);
        assert_eq!(s.by_ref().map(Result::unwrap).count(), 1024);
        assert!(s.max_occupancy() <= s.capacity());
        assert!(s.max_step_ticks() <= c.mu * c.tstar);
    }

    #[test]
    fn tiny_bound_trips() {
        let p = antichain(6);
        let c = PotentialConstants::IDEALS;
        let mut s = make_stepper(&p, Kind::Ideals, 10, &c);
        let err = core::iter::from_fn(|| s.step().transpose()).find_map(Result::err);
        assert!(matches!(err, Some(StepError::DeltaBound { bound: 10, .. })));
    }
}
