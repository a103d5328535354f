//! Longest chains, chain levels and the subposet buckets every iteration of
//! the enumerators is built on.
//!
//! A subposet is a sorted list of *keys*. Keys are element ids seen through
//! a [`View`]: the primal view uses ids directly, the dual view reverses the
//! order (`key = n - 1 - id`), so sorted key lists stay topologically sorted
//! in both. Inside a frame everything is indexed by *position* in the key
//! list, which keeps per-frame storage proportional to the subposet.

use alloc::vec;
use alloc::vec::Vec;

use crate::poset::Poset;
use crate::runtime::{block_on, Meter};

/// Order seen by a frame: the poset itself or its dual.
#[derive(Clone, Copy, Debug)]
pub struct View<'p> {
    poset: &'p Poset,
    dual: bool,
}

impl<'p> View<'p> {
    pub fn primal(poset: &'p Poset) -> Self {
        View { poset, dual: false }
    }

    pub fn dual(poset: &'p Poset) -> Self {
        View { poset, dual: true }
    }

    pub fn flipped(self) -> Self {
        View { poset: self.poset, dual: !self.dual }
    }

    pub fn is_dual(&self) -> bool {
        self.dual
    }

    pub fn poset(&self) -> &'p Poset {
        self.poset
    }

    /// Strict order between keys.
    #[inline]
    pub fn less(&self, a: usize, b: usize) -> bool {
        if self.dual {
            let top = self.poset.len() - 1;
            self.poset.less(top - b, top - a)
        } else {
            self.poset.less(a, b)
        }
    }

    /// Element id of a key. The map is an involution, so it also maps ids
    /// back to keys.
    #[inline]
    pub fn elem(&self, key: usize) -> usize {
        if self.dual {
            self.poset.len() - 1 - key
        } else {
            key
        }
    }
}

/// Greedy decomposition into antichains; positions refer to the input list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AntichainDecomposition {
    keys: Vec<usize>,
    levels: Vec<Vec<usize>>,
    level_of: Vec<usize>,
    pred: Vec<Option<usize>>,
}

impl AntichainDecomposition {
    /// Levels `A_1..A_k` as keys, each in insertion order.
    pub fn levels(&self) -> Vec<Vec<usize>> {
        self.levels.iter().map(|l| l.iter().map(|&p| self.keys[p]).collect()).collect()
    }

    /// Predecessor link of `key`, if any.
    pub fn pred(&self, key: usize) -> Option<usize> {
        let p = self.keys.binary_search(&key).ok()?;
        self.pred[p].map(|q| self.keys[q])
    }

    /// Longest chain as keys, bottom to top.
    pub fn longest_chain(&self) -> Vec<usize> {
        chain_positions(&self.levels, &self.pred).into_iter().map(|p| self.keys[p]).collect()
    }
}

/// Inserts elements in key order; each one goes one level above the first
/// smaller element met scanning levels from the top, members of a level in
/// insertion order.
pub(crate) async fn decompose_positions(
    meter: &Meter,
    view: View<'_>,
    keys: &[usize],
) -> (Vec<Vec<usize>>, Vec<usize>, Vec<Option<usize>>) {
    let mut levels: Vec<Vec<usize>> = Vec::new();
    let mut level_of = vec![0; keys.len()];
    let mut pred = vec![None; keys.len()];
    for (i, &u) in keys.iter().enumerate() {
        meter.step().await;
        let mut hit = None;
        'scan: for t in (0..levels.len()).rev() {
            for &v in &levels[t] {
                meter.step().await;
                if view.less(keys[v], u) {
                    hit = Some((t, v));
                    break 'scan;
                }
            }
        }
        let t = match hit {
            Some((t, v)) => {
                pred[i] = Some(v);
                t + 1
            }
            None => 0,
        };
        if t == levels.len() {
            levels.push(Vec::new());
        }
        levels[t].push(i);
        level_of[i] = t;
    }
    (levels, level_of, pred)
}

fn chain_positions(levels: &[Vec<usize>], pred: &[Option<usize>]) -> Vec<usize> {
    let mut chain = Vec::with_capacity(levels.len());
    let mut cur = levels.last().map(|top| top[0]);
    while let Some(p) = cur {
        chain.push(p);
        cur = pred[p];
    }
    chain.reverse();
    chain
}

pub fn decompose(view: View<'_>, keys: &[usize]) -> AntichainDecomposition {
    let meter = Meter::default();
    let (levels, level_of, pred) = block_on(decompose_positions(&meter, view, keys));
    AntichainDecomposition { keys: keys.to_vec(), levels, level_of, pred }
}

pub fn longest_chain(d: &AntichainDecomposition) -> Vec<usize> {
    d.longest_chain()
}

/// Per-iteration structure: longest chain, levels `s`/`l` and buckets.
///
/// Chain indices are 1-based (`c_1..c_k`); for off-chain positions `s` is
/// the largest index of a chain element below, 0 if none, and `l` the
/// smallest index above, `k + 1` if none.
#[derive(Debug, Clone)]
pub struct ChainFrame {
    pub(crate) keys: Vec<usize>,
    pub(crate) chain: Vec<usize>,
    /// 0 for off-chain positions, else the chain index.
    pub(crate) chain_index: Vec<usize>,
    pub(crate) s: Vec<usize>,
    pub(crate) l: Vec<usize>,
    /// `S_0..S_k`, ascending positions.
    pub(crate) s_buckets: Vec<Vec<usize>>,
    /// `L_0..L_{k+1}`; `L_0` is always empty.
    pub(crate) l_buckets: Vec<Vec<usize>>,
    /// Off-chain positions, ascending.
    pub(crate) off: Vec<usize>,
    /// Rolling subposet, ascending positions.
    pub(crate) sub: Vec<usize>,
}

impl ChainFrame {
    pub(crate) async fn build(meter: &Meter, view: View<'_>, keys: Vec<usize>) -> ChainFrame {
        let (levels, level_of, pred) = decompose_positions(meter, view, &keys).await;
        let chain = chain_positions(&levels, &pred);
        meter.charge(chain.len()).await;
        let k = chain.len();
        let m = keys.len();
        let mut chain_index = vec![0; m];
        for (i, &p) in chain.iter().enumerate() {
            chain_index[p] = i + 1;
        }
        let mut s = vec![0; m];
        let mut l = vec![k + 1; m];
        let mut s_buckets = vec![Vec::new(); k + 1];
        let mut l_buckets = vec![Vec::new(); k + 2];
        let mut off = Vec::with_capacity(m - k);
        for u in 0..m {
            meter.step().await;
            if chain_index[u] != 0 {
                s[u] = chain_index[u];
                l[u] = chain_index[u];
                continue;
            }
            // u sits on level i (1-based) and c_i shares it, so s < i < l
            let i = level_of[u] + 1;
            let mut su = 0;
            for j in (1..i).rev() {
                meter.step().await;
                if view.less(keys[chain[j - 1]], keys[u]) {
                    su = j;
                    break;
                }
            }
            let mut lu = k + 1;
            for j in i + 1..=k {
                meter.step().await;
                if view.less(keys[u], keys[chain[j - 1]]) {
                    lu = j;
                    break;
                }
            }
            debug_assert!(su + 2 <= lu, "chain is not a longest chain");
            s[u] = su;
            l[u] = lu;
            s_buckets[su].push(u);
            l_buckets[lu].push(u);
            off.push(u);
        }
        ChainFrame { keys, chain, chain_index, s, l, s_buckets, l_buckets, off, sub: Vec::new() }
    }

    /// Synchronous constructor for inspection and tests.
    pub fn new(view: View<'_>, keys: &[usize]) -> ChainFrame {
        let meter = Meter::default();
        block_on(ChainFrame::build(&meter, view, keys.to_vec()))
    }

    /// Chain length `k`.
    pub fn k(&self) -> usize {
        self.chain.len()
    }

    pub fn chain_keys(&self) -> Vec<usize> {
        self.chain.iter().map(|&p| self.keys[p]).collect()
    }

    fn pos(&self, key: usize) -> usize {
        self.keys.binary_search(&key).expect("key not in frame")
    }

    /// `(s_u, l_u)` of a key.
    pub fn levels_of(&self, key: usize) -> (usize, usize) {
        let p = self.pos(key);
        (self.s[p], self.l[p])
    }

    /// `S_i` as keys.
    pub fn s_bucket(&self, i: usize) -> Vec<usize> {
        self.s_buckets[i].iter().map(|&p| self.keys[p]).collect()
    }

    /// `L_i` as keys.
    pub fn l_bucket(&self, i: usize) -> Vec<usize> {
        self.l_buckets[i].iter().map(|&p| self.keys[p]).collect()
    }

    /// The rolling subposet as keys.
    pub fn sub(&self) -> Vec<usize> {
        self.sub.iter().map(|&p| self.keys[p]).collect()
    }

    /// Resets the rolling subposet to `P_0 = S_0`.
    pub fn reset_subposet(&mut self) {
        self.sub = self.s_buckets[0].clone();
    }

    /// `P_{i-1} -> P_i = (P_{i-1} \ L_i) ∪ S_i`.
    pub fn advance_subposet(&mut self, i: usize) {
        let meter = Meter::default();
        self.sub = block_on(self.ideal_up(&meter, &self.sub, i));
    }

    /// `P_{i-1} -> P_i` for ideals: drop `l = i`, merge `S_i`.
    pub(crate) async fn ideal_up(&self, meter: &Meter, cur: &[usize], i: usize) -> Vec<usize> {
        let add = self.s_buckets.get(i).map_or(&[][..], |b| &b[..]);
        reshape(meter, cur, |u| self.l[u] != i, add).await
    }

    /// `P_i -> P_{i-1}` for ideals: drop `s = i`, merge `L_i`.
    pub(crate) async fn ideal_down(&self, meter: &Meter, cur: &[usize], i: usize) -> Vec<usize> {
        reshape(meter, cur, |u| self.s[u] != i, &self.l_buckets[i]).await
    }

    /// `P_i` for ideals built from scratch.
    pub(crate) async fn ideal_direct(&self, meter: &Meter, i: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for u in 0..self.keys.len() {
            meter.step().await;
            if self.chain_index[u] == 0 && self.s[u] <= i && i < self.l[u] {
                out.push(u);
            }
        }
        out
    }

    /// Moves an ideal subposet list from index `from` to index `to`.
    pub(crate) async fn ideal_move(&self, meter: &Meter, mut cur: Vec<usize>, mut from: usize, to: usize) -> Vec<usize> {
        while from < to {
            from += 1;
            cur = self.ideal_up(meter, &cur, from).await;
        }
        while from > to {
            cur = self.ideal_down(meter, &cur, from).await;
            from -= 1;
        }
        cur
    }

    /// Off-chain positions, ascending.
    pub(crate) async fn off_chain(&self, meter: &Meter) -> Vec<usize> {
        meter.charge(self.off.len()).await;
        self.off.clone()
    }

    /// Antichain subposets `P_i = {s < i < l}`: step `i - 1 -> i`.
    pub(crate) async fn antichain_up(&self, meter: &Meter, cur: &[usize], i: usize) -> Vec<usize> {
        reshape(meter, cur, |u| self.l[u] != i, &self.s_buckets[i - 1]).await
    }

    /// Antichain subposets: step `i -> i - 1`.
    pub(crate) async fn antichain_down(&self, meter: &Meter, cur: &[usize], i: usize) -> Vec<usize> {
        reshape(meter, cur, |u| self.s[u] != i - 1, &self.l_buckets[i]).await
    }
}

/// Filters `cur` by `keep` and merges the sorted list `add` into it.
pub(crate) async fn reshape(meter: &Meter, cur: &[usize], keep: impl Fn(usize) -> bool, add: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(cur.len() + add.len());
    let mut j = 0;
    for &u in cur {
        meter.step().await;
        if !keep(u) {
            continue;
        }
        while j < add.len() && add[j] < u {
            meter.step().await;
            out.push(add[j]);
            j += 1;
        }
        out.push(u);
    }
    for &a in &add[j..] {
        meter.step().await;
        out.push(a);
    }
    out
}

/// Which end of the chain to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainEnd {
    Min,
    Max,
}

/// Bottom or top of the longest chain a child frame would pick for `keys`.
/// `None` for an empty subposet.
pub fn pick_perturbation(view: View<'_>, keys: &[usize], end: ChainEnd) -> Option<usize> {
    let chain = decompose(view, keys).longest_chain();
    match end {
        ChainEnd::Min => chain.first().copied(),
        ChainEnd::Max => chain.last().copied(),
    }
}

/// Splits `P_k` around `y`: elements not above `y`, elements not below `y`,
/// and the downset of `y`. All three as keys.
pub fn split_for_top(view: View<'_>, keys: &[usize], y: usize) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    let mut down = Vec::new();
    for &u in keys {
        let le = u == y || view.less(u, y);
        let ge = u == y || view.less(y, u);
        if !ge {
            lower.push(u);
        }
        if !le {
            upper.push(u);
        } else {
            down.push(u);
        }
    }
    (lower, upper, down)
}
