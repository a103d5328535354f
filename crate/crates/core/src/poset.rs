//! Finite posets stored as dense strict-order bit tables.
//!
//! Every [`Poset`] is transitively closed and topologically labeled: `u ≺ v`
//! implies `u < v` on the internal ids. The label an element carried in the
//! input is kept in [`Poset::label`] so output can be mapped back.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;
use core::fmt;

const WORD: usize = 64;

/// Errors raised while building a poset from declared relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PosetError {
    /// A relation referenced an id outside `0..n`.
    OutOfRange { id: usize, n: usize },
    /// The declared relations contain a cycle (including `u ≺ u`).
    NotPartialOrder,
}

impl fmt::Display for PosetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PosetError::OutOfRange { id, n } => write!(f, "element id {id} out of range for poset of size {n}"),
            PosetError::NotPartialOrder => f.write_str("not a partial order"),
        }
    }
}

impl core::error::Error for PosetError {}

/// Square bit matrix, one row per element.
#[derive(Clone, PartialEq, Eq)]
pub(crate) struct BitMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub(crate) fn new(n: usize) -> Self {
        let words = n.div_ceil(WORD).max(1);
        BitMatrix { n, words, bits: vec![0; n * words] }
    }

    #[inline]
    pub(crate) fn get(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.words + c / WORD] >> (c % WORD) & 1 == 1
    }

    #[inline]
    pub(crate) fn set(&mut self, r: usize, c: usize) {
        self.bits[r * self.words + c / WORD] |= 1 << (c % WORD);
    }

    pub(crate) fn row(&self, r: usize) -> &[u64] {
        &self.bits[r * self.words..(r + 1) * self.words]
    }

    /// `row[dst] |= row[src]`.
    pub(crate) fn or_row_into(&mut self, src: usize, dst: usize) {
        let w = self.words;
        for x in 0..w {
            let v = self.bits[src * w + x];
            self.bits[dst * w + x] |= v;
        }
    }

    /// Warshall closure on bit rows.
    fn close(&mut self) {
        let w = self.words;
        for k in 0..self.n {
            let (kw, kb) = (k / WORD, k % WORD);
            for i in 0..self.n {
                if self.bits[i * w + kw] >> kb & 1 == 1 && i != k {
                    for x in 0..w {
                        let v = self.bits[k * w + x];
                        self.bits[i * w + x] |= v;
                    }
                }
            }
        }
    }
}

/// Immutable finite poset on `0..n`, closed and topologically labeled.
#[derive(Clone, PartialEq, Eq)]
pub struct Poset {
    less: BitMatrix,
    labels: Vec<usize>,
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Poset")
            .field("n", &self.len())
            .field("covers", &self.cover_relations())
            .field("labels", &self.labels)
            .finish()
    }
}

/// Size, incomparable pairs and 3-antichains of a poset.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct PosetStats {
    pub n: u64,
    pub q: u64,
    pub t: u64,
}

impl Poset {
    /// Builds a poset from `u ≺ v` relations on arbitrary labels `0..n`.
    ///
    /// The transitive closure is taken, so cover relations suffice. The
    /// result is relabeled topologically; ties between incomparable elements
    /// are broken by the smaller input label.
    pub fn from_relations(n: usize, relations: &[(usize, usize)]) -> Result<Poset, PosetError> {
        let mut m = BitMatrix::new(n);
        for &(u, v) in relations {
            for id in [u, v] {
                if id >= n {
                    return Err(PosetError::OutOfRange { id, n });
                }
            }
            if u == v {
                return Err(PosetError::NotPartialOrder);
            }
            m.set(u, v);
        }
        m.close();
        if (0..n).any(|u| m.get(u, u)) {
            return Err(PosetError::NotPartialOrder);
        }
        Ok(Self::relabeled(&m))
    }

    /// Relabels a closed, acyclic relation so that `u ≺ v ⇒ u < v`.
    fn relabeled(m: &BitMatrix) -> Poset {
        let order = topological_order(m);
        let n = m.n;
        let mut rank = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            rank[old] = new;
        }
        let mut less = BitMatrix::new(n);
        for u in 0..n {
            for v in 0..n {
                if m.get(u, v) {
                    less.set(rank[u], rank[v]);
                }
            }
        }
        Poset { less, labels: order }
    }

    /// Wraps an already closed, topologically labeled table. Used by the
    /// generators, which construct ids in topological order.
    pub(crate) fn from_closed(less: BitMatrix) -> Poset {
        debug_assert!((0..less.n).all(|u| (0..=u).all(|v| !less.get(u, v))));
        let labels = (0..less.n).collect();
        Poset { less, labels }
    }

    pub fn len(&self) -> usize {
        self.less.n
    }

    pub fn is_empty(&self) -> bool {
        self.less.n == 0
    }

    /// Strict order test `u ≺ v`.
    #[inline]
    pub fn less(&self, u: usize, v: usize) -> bool {
        self.less.get(u, v)
    }

    #[inline]
    pub fn comparable(&self, u: usize, v: usize) -> bool {
        u == v || self.less(u, v) || self.less(v, u)
    }

    /// Input label of internal element `u`.
    pub fn label(&self, u: usize) -> usize {
        self.labels[u]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Same order with labels reset to the internal ids.
    pub fn with_identity_labels(&self) -> Poset {
        Poset { less: self.less.clone(), labels: (0..self.len()).collect() }
    }

    /// Pairs `(u, v)` where `v` covers `u` (transitive reduction), sorted.
    pub fn cover_relations(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut down = BitMatrix::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if self.less(u, v) {
                    down.set(v, u);
                }
            }
        }
        let mut out = Vec::new();
        for u in 0..n {
            let up = self.less.row(u);
            for v in u + 1..n {
                if self.less(u, v) && up.iter().zip(down.row(v)).all(|(a, b)| a & b == 0) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Incomparable pairs and 3-antichains of the whole poset.
    pub fn stats(&self) -> PosetStats {
        let all: Vec<usize> = (0..self.len()).collect();
        self.subset_stats(&all)
    }

    /// Statistics of the subposet induced by `elements` (any order).
    ///
    /// Brute force over incomparability bit rows, `O(m³ / 64)`; reserved for
    /// audits and oracles.
    pub fn subset_stats(&self, elements: &[usize]) -> PosetStats {
        let m = elements.len();
        let mut inc = BitMatrix::new(m);
        let mut q = 0u64;
        for i in 0..m {
            for j in i + 1..m {
                if !self.comparable(elements[i], elements[j]) {
                    inc.set(i, j);
                    inc.set(j, i);
                    q += 1;
                }
            }
        }
        let mut t = 0u64;
        let words = inc.words;
        for i in 0..m {
            for j in i + 1..m {
                if !inc.get(i, j) {
                    continue;
                }
                // count w > j incomparable with both
                let (ri, rj) = (inc.row(i), inc.row(j));
                for x in (j + 1) / WORD..words {
                    let mut both = ri[x] & rj[x];
                    if x == (j + 1) / WORD {
                        let shift = (j + 1) % WORD;
                        both &= !0u64 << shift;
                    }
                    t += u64::from(both.count_ones());
                }
            }
        }
        PosetStats { n: m as u64, q, t }
    }
}

/// Kahn's algorithm over a closed relation, always taking the smallest
/// available label.
fn topological_order(m: &BitMatrix) -> Vec<usize> {
    let n = m.n;
    let mut indeg = vec![0usize; n];
    for u in 0..n {
        for (v, d) in indeg.iter_mut().enumerate() {
            if m.get(u, v) {
                *d += 1;
            }
        }
    }
    let mut ready: BinaryHeap<Reverse<usize>> = (0..n).filter(|&v| indeg[v] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(u)) = ready.pop() {
        order.push(u);
        for (v, d) in indeg.iter_mut().enumerate() {
            if m.get(u, v) {
                *d -= 1;
                if *d == 0 {
                    ready.push(Reverse(v));
                }
            }
        }
    }
    order
}

/// Relabels a poset given by an arbitrary labeling of a closed relation.
///
/// `less[u][v]` must already be a strict partial order. Returns the
/// isomorphic poset with `u ≺ v ⇒ u < v`; the input labels are kept.
pub fn topological_relabel(n: usize, less: impl Fn(usize, usize) -> bool) -> Poset {
    let mut m = BitMatrix::new(n);
    for u in 0..n {
        for v in 0..n {
            if less(u, v) {
                m.set(u, v);
            }
        }
    }
    Poset::relabeled(&m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v_poset() -> Poset {
        Poset::from_relations(3, &[(0, 2), (1, 2)]).unwrap()
    }

    #[test]
    fn closure_of_declared_chain() {
        let p = Poset::from_relations(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(p.less(0, 2));
        assert_eq!(p.stats(), PosetStats { n: 3, q: 0, t: 0 });
    }

    #[test]
    fn no_relations_is_antichain() {
        let p = Poset::from_relations(3, &[]).unwrap();
        assert_eq!(p.stats().q, 3);
        assert_eq!(p.stats().t, 1);
    }

    #[test]
    fn cycle_rejected() {
        assert_eq!(Poset::from_relations(2, &[(0, 1), (1, 0)]), Err(PosetError::NotPartialOrder));
        assert_eq!(Poset::from_relations(2, &[(1, 1)]), Err(PosetError::NotPartialOrder));
        assert_eq!(
            Poset::from_relations(2, &[(0, 5)]),
            Err(PosetError::OutOfRange { id: 5, n: 2 })
        );
    }

    #[test]
    fn reversed_chain_is_relabeled() {
        let p = Poset::from_relations(3, &[(2, 1), (1, 0)]).unwrap();
        assert!(p.less(0, 1) && p.less(1, 2) && p.less(0, 2));
        assert_eq!(p.labels(), &[2, 1, 0]);
    }

    #[test]
    fn sorted_input_keeps_identity() {
        let p = Poset::from_relations(4, &[(0, 1), (1, 3), (2, 3)]).unwrap();
        assert_eq!(p.labels(), &[0, 1, 2, 3]);
    }

    #[test]
    fn v_poset_top_gets_largest_id() {
        // a=2, b=0 below c=1
        let p = Poset::from_relations(3, &[(2, 1), (0, 1)]).unwrap();
        assert_eq!(p.labels(), &[0, 2, 1]);
        for u in 0..3 {
            for v in 0..3 {
                if p.less(u, v) {
                    assert!(u < v);
                }
            }
        }
    }

    #[test]
    fn v_poset_stats() {
        assert_eq!(v_poset().stats(), PosetStats { n: 3, q: 1, t: 0 });
    }

    #[test]
    fn covers_are_reduction() {
        let p = Poset::from_relations(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        assert_eq!(p.cover_relations(), vec![(0, 1), (1, 2), (2, 3)]);
    }

    #[test]
    fn generic_relabel() {
        let p = topological_relabel(3, |u, v| u > v);
        assert!(p.less(0, 1) && p.less(1, 2));
        assert_eq!(p.labels(), &[2, 1, 0]);
    }
}
