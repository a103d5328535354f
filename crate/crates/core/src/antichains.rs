//! Antichain enumeration.
//!
//! An antichain of `Q` holds at most one element of a longest chain. Those
//! holding `c_i` are `c_i` plus an antichain of `P_i = {u : s_u < i < l_u}`,
//! the elements incomparable to `c_i`; the rest are antichains of the
//! off-chain elements.
//!
//! In the Gray order each class `c_i` runs its child backwards, so the
//! class starts at `{c_i}` and ends at `{c_i, c'}`, where `c'` opens the
//! child's own forward walk; every forward walk ends at the empty set.

use alloc::boxed::Box;
use alloc::rc::Rc;
use alloc::vec::Vec;

use crate::chain::{ChainFrame, View};
use crate::poset::Poset;
use crate::runtime::{block_on, Ctx, Frame, FrameCost, Output, Sink};

/// Direction of a Gray walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Starts at a singleton, ends at the empty set.
    Forward,
    /// The forward sequence reversed.
    Reverse,
}

pub fn enumerate_antichains_basic(p: &Poset, sink: &mut dyn Sink) -> u64 {
    let ctx = Rc::new(Ctx::new(p.len(), Output::Sink(sink)));
    block_on(root_basic(ctx.clone(), p));
    ctx.visits.get()
}

/// Consecutive antichains differ in at most three elements.
pub fn enumerate_antichains_gray(p: &Poset, sink: &mut dyn Sink, dir: Direction) -> u64 {
    let ctx = Rc::new(Ctx::new(p.len(), Output::Sink(sink)));
    block_on(root_gray(ctx.clone(), p, dir));
    ctx.visits.get()
}

pub(crate) fn root_basic<'c, 'a: 'c>(ctx: Rc<Ctx<'a>>, p: &'c Poset) -> Frame<'c> {
    frame(ctx, View::primal(p), (0..p.len()).collect(), None, None, 0, 0)
}

pub(crate) fn root_gray<'c, 'a: 'c>(ctx: Rc<Ctx<'a>>, p: &'c Poset, dir: Direction) -> Frame<'c> {
    frame(ctx, View::primal(p), (0..p.len()).collect(), Some(dir == Direction::Reverse), None, 0, 0)
}

async fn sub_keys(ctx: &Ctx<'_>, f: &ChainFrame, sub: &[usize]) -> Vec<usize> {
    ctx.meter.charge(sub.len()).await;
    sub.iter().map(|&p| f.keys[p]).collect()
}

/// `gray` is `None` for the basic order, else whether to run reversed.
fn frame<'c, 'a: 'c>(
    ctx: Rc<Ctx<'a>>,
    view: View<'c>,
    keys: Vec<usize>,
    gray: Option<bool>,
    parent: Option<usize>,
    depth: u32,
    branch: usize,
) -> Frame<'c> {
    Box::pin(async move {
        let Some(mut scope) = ctx.enter(parent, depth, branch, || keys.clone()) else {
            return FrameCost::default();
        };
        if keys.is_empty() {
            ctx.visit().await;
            return ctx.exit(scope, 1);
        }
        let meter = &ctx.meter;
        let f = ChainFrame::build(meter, view, keys).await;
        ctx.record_chain(&scope, || f.chain_keys(), f.keys.len());
        let node = scope.node;
        let k = f.k();
        let base = ctx.depth_len();
        let child_gray = |reversed: bool| gray.map(|_| reversed);

        if gray == Some(true) {
            let rest = f.off_chain(meter).await;
            let child = sub_keys(&ctx, &f, &rest).await;
            scope.child_done(frame(ctx.clone(), view, child, child_gray(true), node, depth + 1, 0).await);
            let mut sub = f.l_buckets[k + 1].clone();
            meter.charge(sub.len()).await;
            for i in (1..=k).rev() {
                ctx.step().await;
                if i < k {
                    sub = f.antichain_down(meter, &sub, i + 1).await;
                }
                ctx.truncate(base).await;
                ctx.insert(f.keys[f.chain[i - 1]]);
                let child = sub_keys(&ctx, &f, &sub).await;
                scope.child_done(frame(ctx.clone(), view, child, child_gray(false), node, depth + 1, i).await);
            }
            ctx.truncate(base).await;
            return ctx.exit(scope, 0);
        }

        let mut sub = f.s_buckets[0].clone();
        meter.charge(sub.len()).await;
        for i in 1..=k {
            ctx.step().await;
            if i > 1 {
                sub = f.antichain_up(meter, &sub, i).await;
            }
            ctx.truncate(base).await;
            ctx.insert(f.keys[f.chain[i - 1]]);
            let child = sub_keys(&ctx, &f, &sub).await;
            scope.child_done(frame(ctx.clone(), view, child, child_gray(true), node, depth + 1, i).await);
        }
        ctx.truncate(base).await;
        let rest = f.off_chain(meter).await;
        let child = sub_keys(&ctx, &f, &rest).await;
        scope.child_done(frame(ctx.clone(), view, child, child_gray(false), node, depth + 1, 0).await);
        ctx.exit(scope, 0)
    })
}
