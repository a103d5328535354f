//! Ideal enumeration.
//!
//! Both orders split the ideals of a subposet `Q` by the highest chain
//! element they contain. With `c_1..c_k` a longest chain of `Q`, the ideals
//! containing exactly `c_1..c_i` are `c_1..c_i`, the elements forced below
//! `c_i`, and an arbitrary ideal of `P_i = {u : s_u <= i < l_u}`.
//!
//! The Gray order walks these classes in a zigzag (down through one parity,
//! up through the other) so that the last set of one class and the first
//! set of the next differ in at most three elements. Descending classes run
//! their child in the dual order, which turns "shrink to nothing" into a
//! forward walk.

use alloc::boxed::Box;
use alloc::rc::Rc;
use alloc::vec;
use alloc::vec::Vec;

use crate::chain::{ChainFrame, View};
use crate::poset::Poset;
use crate::runtime::{block_on, Ctx, Frame, FrameCost, Output, Sink};

/// Enumerates all ideals in the basic order. Returns the number visited.
pub fn enumerate_ideals_basic(p: &Poset, sink: &mut dyn Sink) -> u64 {
    let ctx = Rc::new(Ctx::new(p.len(), Output::Sink(sink)));
    block_on(root_basic(ctx.clone(), p));
    ctx.visits.get()
}

/// Enumerates all ideals so that consecutive ideals differ in at most three
/// elements, starting from the empty set and ending at the whole poset.
pub fn enumerate_ideals_gray(p: &Poset, sink: &mut dyn Sink) -> u64 {
    let ctx = Rc::new(Ctx::new(p.len(), Output::Sink(sink)));
    block_on(root_gray(ctx.clone(), p));
    ctx.visits.get()
}

pub(crate) fn root_basic<'c, 'a: 'c>(ctx: Rc<Ctx<'a>>, p: &'c Poset) -> Frame<'c> {
    basic(ctx, View::primal(p), (0..p.len()).collect(), None, 0, 0)
}

pub(crate) fn root_gray<'c, 'a: 'c>(ctx: Rc<Ctx<'a>>, p: &'c Poset) -> Frame<'c> {
    walk(ctx, View::primal(p), (0..p.len()).collect(), Anchor::List(Vec::new()), false, None, 0, 0)
}

fn elems(view: View<'_>, keys: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = keys.iter().map(|&k| view.elem(k)).collect();
    out.sort_unstable();
    out
}

async fn sub_keys(ctx: &Ctx<'_>, frame: &ChainFrame, sub: &[usize]) -> Vec<usize> {
    ctx.meter.charge(sub.len()).await;
    sub.iter().map(|&p| frame.keys[p]).collect()
}

fn basic<'c, 'a: 'c>(
    ctx: Rc<Ctx<'a>>,
    view: View<'c>,
    keys: Vec<usize>,
    parent: Option<usize>,
    depth: u32,
    branch: usize,
) -> Frame<'c> {
    Box::pin(async move {
        let Some(mut scope) = ctx.enter(parent, depth, branch, || elems(view, &keys)) else {
            return FrameCost::default();
        };
        if keys.is_empty() {
            ctx.visit().await;
            return ctx.exit(scope, 1);
        }
        let frame = ChainFrame::build(&ctx.meter, view, keys).await;
        ctx.record_chain(&scope, || elems(view, &frame.chain_keys()), frame.keys.len());
        let node = scope.node;
        let base = ctx.depth_len();
        let mut sub = frame.ideal_direct(&ctx.meter, 0).await;
        for i in 0..=frame.k() {
            ctx.step().await;
            if i > 0 {
                ctx.insert(view.elem(frame.keys[frame.chain[i - 1]]));
                for &u in &frame.l_buckets[i] {
                    ctx.step().await;
                    ctx.insert(view.elem(frame.keys[u]));
                }
                sub = frame.ideal_up(&ctx.meter, &sub, i).await;
            }
            let child = sub_keys(&ctx, &frame, &sub).await;
            let cost = basic(ctx.clone(), view, child, node, depth + 1, i).await;
            scope.child_done(cost);
        }
        ctx.truncate(base).await;
        ctx.exit(scope, 0)
    })
}

/// Where a Gray walk starts (forward) or ends (reversed).
#[derive(Debug, Clone)]
pub(crate) enum Anchor {
    /// An ideal other than the whole subposet, as sorted keys.
    List(Vec<usize>),
    /// The whole subposet minus the top of its longest chain.
    FullMinusTop,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    /// Class walked from its entry set down to the empty set.
    Desc,
    /// Class 0, where the zigzag turns from descending to ascending.
    Turn,
    /// Class walked up to its full set.
    Asc,
    /// Top class, ideals avoiding `y`; always the first block.
    Lower,
    /// Top class, ideals containing `y`; always the last block.
    Upper,
}

#[derive(Debug, Clone, Copy)]
struct Block {
    kind: Kind,
    idx: usize,
    /// Class walked just before, `None` for the first block.
    pred: Option<usize>,
}

impl Block {
    fn split(&self) -> bool {
        matches!(self.kind, Kind::Lower | Kind::Upper)
    }

    fn descending(&self) -> bool {
        matches!(self.kind, Kind::Desc | Kind::Lower)
    }
}

/// Block order for an anchor in class `zeta`.
fn plan(zeta: usize, k: usize) -> Vec<Block> {
    let b = |kind, idx, pred| Block { kind, idx, pred };
    let mut out = Vec::with_capacity(k + 2);
    out.push(if zeta == k {
        b(Kind::Lower, k, None)
    } else if zeta == 0 {
        b(Kind::Turn, 0, None)
    } else {
        b(Kind::Desc, zeta, None)
    });
    if zeta > 0 {
        let mut i = zeta;
        while i >= 3 {
            i -= 2;
            out.push(b(Kind::Desc, i, Some(i + 2)));
        }
        out.push(b(Kind::Turn, 0, Some(i)));
        // climb the parity the descent skipped
        let mut j = if zeta.is_multiple_of(2) { 1 } else { 2 };
        let mut pred = 0;
        while j < zeta {
            out.push(b(Kind::Asc, j, Some(pred)));
            pred = j;
            j += 2;
        }
    }
    if zeta == k {
        out.push(b(Kind::Upper, k, Some(k - 1)));
    } else {
        if zeta < k {
            out.push(b(Kind::Asc, zeta + 1, Some(zeta.saturating_sub(1))));
        }
        for i in zeta + 2..=k {
            out.push(b(Kind::Asc, i, Some(i - 1)));
        }
    }
    out
}

struct Gray<'c> {
    view: View<'c>,
    frame: ChainFrame,
    anchor: Vec<bool>,
    /// Smallest position outside the anchor, set when the anchor lies in
    /// the top class.
    y: Option<usize>,
    mark: Vec<u32>,
    stamp: u32,
}

impl Gray<'_> {
    fn k(&self) -> usize {
        self.frame.k()
    }

    fn elem(&self, u: usize) -> usize {
        self.view.elem(self.frame.keys[u])
    }

    fn below_eq(&self, a: usize, b: usize) -> bool {
        a == b || self.view.less(self.frame.keys[a], self.frame.keys[b])
    }

    fn in_split(&self, kind: Kind, u: usize) -> bool {
        let y = self.y.expect("split without y");
        match kind {
            Kind::Lower => !self.below_eq(y, u),
            _ => !self.below_eq(u, y),
        }
    }

    /// Entry membership of a region element. Unperturbed: children whose
    /// anchor is the full set minus its top remove that element themselves.
    fn region_flag(&self, b: Block, child_rev: bool, u: usize) -> bool {
        if child_rev {
            return !b.descending();
        }
        let f = &self.frame;
        match (b.pred, b.kind) {
            (None, _) => self.anchor[u],
            (Some(p), Kind::Desc | Kind::Turn) => f.l[u] <= p,
            (Some(p), Kind::Asc) => f.s[u] <= p,
            (Some(_), Kind::Upper) => true,
            (Some(_), Kind::Lower) => unreachable!("lower block is always first"),
        }
    }

    /// Membership of an element outside the block's region.
    fn outside_flag(&self, b: Block, u: usize) -> bool {
        let f = &self.frame;
        let ci = f.chain_index[u];
        let idx = b.idx;
        if ci != 0 {
            return ci <= idx;
        }
        match b.kind {
            Kind::Upper => true,
            _ => f.l[u] <= idx,
        }
    }
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn walk<'c, 'a: 'c>(
    ctx: Rc<Ctx<'a>>,
    view: View<'c>,
    keys: Vec<usize>,
    anchor: Anchor,
    rev: bool,
    parent: Option<usize>,
    depth: u32,
    branch: usize,
) -> Frame<'c> {
    Box::pin(async move {
        let Some(mut scope) = ctx.enter(parent, depth, branch, || elems(view, &keys)) else {
            return FrameCost::default();
        };
        if keys.is_empty() {
            ctx.visit().await;
            return ctx.exit(scope, 1);
        }
        let meter = &ctx.meter;
        let frame = ChainFrame::build(meter, view, keys).await;
        ctx.record_chain(&scope, || elems(view, &frame.chain_keys()), frame.keys.len());
        let node = scope.node;
        let m = frame.keys.len();
        let k = frame.k();
        let top = frame.chain[k - 1];

        let mut flags = vec![false; m];
        let full_minus_top = matches!(anchor, Anchor::FullMinusTop);
        match &anchor {
            Anchor::List(list) => {
                let mut j = 0;
                for &a in list {
                    ctx.step().await;
                    while frame.keys[j] < a {
                        j += 1;
                    }
                    debug_assert_eq!(frame.keys[j], a, "anchor outside the subposet");
                    flags[j] = true;
                }
                meter.charge(m).await;
            }
            Anchor::FullMinusTop => {
                meter.charge(m).await;
                flags.iter_mut().for_each(|f| *f = true);
                flags[top] = false;
            }
        }
        let mut zeta = 0;
        for i in (1..=k).rev() {
            ctx.step().await;
            if flags[frame.chain[i - 1]] {
                zeta = i;
                break;
            }
        }
        let mut y = None;
        if zeta == k {
            for (u, &inside) in flags.iter().enumerate().take(m) {
                ctx.step().await;
                if !inside {
                    y = Some(u);
                    break;
                }
            }
            debug_assert!(y.is_some(), "anchor is the whole subposet");
        }

        let dual = view.is_dual();
        let total = view.poset().len();
        let mut g = Gray { view, frame, anchor: flags, y, mark: vec![0; m], stamp: 0 };

        let mut blocks = plan(zeta, k);
        if rev {
            blocks.reverse();
        } else if full_minus_top {
            ctx.set(g.elem(top), dual);
        }

        let mut roll: Option<(Vec<usize>, usize)> = None;
        let mut prev: Option<(Block, Vec<usize>)> = None;
        for b in blocks {
            ctx.step().await;
            let region = if b.split() {
                let mut r = Vec::new();
                for &u in &g.frame.l_buckets[k + 1] {
                    ctx.step().await;
                    if g.in_split(b.kind, u) {
                        r.push(u);
                    }
                }
                r
            } else {
                let (list, from) = match roll.take() {
                    Some(x) => x,
                    None => (g.frame.ideal_direct(meter, b.idx).await, b.idx),
                };
                let list = g.frame.ideal_move(meter, list, from, b.idx).await;
                meter.charge(list.len()).await;
                roll = Some((list.clone(), b.idx));
                list
            };

            // forward-order entry set of the region and the child it calls for
            let mut f_any = false;
            let mut f_all = true;
            for &u in &region {
                ctx.step().await;
                let f = g.region_flag(b, false, u);
                f_any |= f;
                f_all &= f;
            }
            let (child_rev, flip, fmt) = match b.kind {
                Kind::Desc | Kind::Lower => (!f_any, true, !f_any),
                Kind::Turn => (f_all, false, f_all),
                Kind::Asc | Kind::Upper => (false, false, f_all),
            };
            let child_rev = child_rev ^ rev;

            if let Some((pb, pr)) = &prev {
                transition(&ctx, &mut g, *pb, pr, b, &region, child_rev).await;
            }

            let branch = if b.kind == Kind::Upper { k + 1 } else { b.idx };
            let cost = if region.is_empty() {
                walk(ctx.clone(), view, Vec::new(), Anchor::List(Vec::new()), false, node, depth + 1, branch).await
            } else {
                let child_view = if flip { view.flipped() } else { view };
                let map = |u: usize| if flip { total - 1 - g.frame.keys[u] } else { g.frame.keys[u] };
                meter.charge(region.len()).await;
                let mut child: Vec<usize> = region.iter().map(|&u| map(u)).collect();
                let child_anchor = if fmt {
                    Anchor::FullMinusTop
                } else {
                    meter.charge(region.len()).await;
                    let mut a: Vec<usize> =
                        region.iter().filter(|&&u| g.region_flag(b, false, u) != flip).map(|&u| map(u)).collect();
                    if flip {
                        a.reverse();
                    }
                    Anchor::List(a)
                };
                if flip {
                    child.reverse();
                }
                walk(ctx.clone(), child_view, child, child_anchor, child_rev, node, depth + 1, branch).await
            };
            scope.child_done(cost);
            prev = Some((b, region));
        }
        ctx.exit(scope, 0)
    })
}

/// Moves the cursor from wherever the previous block left it to the entry
/// set of block `b`.
async fn transition(ctx: &Ctx<'_>, g: &mut Gray<'_>, pb: Block, pr: &[usize], b: Block, region: &[usize], child_rev: bool) {
    g.stamp += 1;
    let stamp = g.stamp;
    for &u in region {
        g.mark[u] = stamp;
    }
    ctx.meter.charge(region.len()).await;
    let dual = g.view.is_dual();
    let k = g.k();
    let apply = |u: usize, g: &Gray<'_>| {
        let want = if g.frame.chain_index[u] == 0 && g.mark[u] == stamp {
            g.region_flag(b, child_rev, u)
        } else {
            g.outside_flag(b, u)
        };
        ctx.set(g.elem(u), want ^ dual);
    };
    for &u in pr.iter().chain(region) {
        ctx.step().await;
        apply(u, g);
    }
    if pb.split() || b.split() {
        for &u in &g.frame.l_buckets[k + 1] {
            ctx.step().await;
            apply(u, g);
        }
    }
    let (lo, hi) = (pb.idx.min(b.idx), pb.idx.max(b.idx));
    for i in lo + 1..=hi {
        ctx.step().await;
        apply(g.frame.chain[i - 1], g);
        for &u in &g.frame.l_buckets[i] {
            ctx.step().await;
            apply(u, g);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{antichain, chain};
    use crate::runtime::Collect;

    fn kinds(p: &[Block]) -> Vec<(char, usize, Option<usize>)> {
        p.iter()
            .map(|b| {
                let c = match b.kind {
                    Kind::Desc => 'D',
                    Kind::Turn => 'T',
                    Kind::Asc => 'A',
                    Kind::Lower => 'L',
                    Kind::Upper => 'U',
                };
                (c, b.idx, b.pred)
            })
            .collect()
    }

    #[test]
    fn plan_from_bottom() {
        assert_eq!(kinds(&plan(0, 2)), vec![('T', 0, None), ('A', 1, Some(0)), ('A', 2, Some(1))]);
    }

    #[test]
    fn plan_even_zeta() {
        assert_eq!(
            kinds(&plan(4, 5)),
            vec![
                ('D', 4, None),
                ('D', 2, Some(4)),
                ('T', 0, Some(2)),
                ('A', 1, Some(0)),
                ('A', 3, Some(1)),
                ('A', 5, Some(3)),
            ]
        );
    }

    #[test]
    fn plan_odd_zeta() {
        assert_eq!(
            kinds(&plan(3, 4)),
            vec![('D', 3, None), ('D', 1, Some(3)), ('T', 0, Some(1)), ('A', 2, Some(0)), ('A', 4, Some(2))]
        );
        assert_eq!(kinds(&plan(1, 1)), vec![('L', 1, None), ('T', 0, Some(1)), ('U', 1, Some(0))]);
    }

    #[test]
    fn plan_top_class() {
        assert_eq!(
            kinds(&plan(2, 2)),
            vec![('L', 2, None), ('T', 0, Some(2)), ('A', 1, Some(0)), ('U', 2, Some(1))]
        );
    }

    #[test]
    fn chain_ideals_are_prefixes() {
        let p = chain(3);
        let mut c = Collect::default();
        assert_eq!(enumerate_ideals_basic(&p, &mut c), 4);
        assert_eq!(c.0, vec![vec![], vec![0], vec![0, 1], vec![0, 1, 2]]);
        let mut g = Collect::default();
        assert_eq!(enumerate_ideals_gray(&p, &mut g), 4);
        assert_eq!(g.0, c.0);
    }

    #[test]
    fn antichain_ideals_count() {
        let p = antichain(4);
        let mut c = Collect::default();
        assert_eq!(enumerate_ideals_gray(&p, &mut c), 16);
        assert_eq!(c.0.first(), Some(&vec![]));
        assert_eq!(c.0.last(), Some(&vec![0, 1, 2, 3]));
    }
}
