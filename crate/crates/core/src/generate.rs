//! Deterministic poset families used by tests, audits and benchmarks.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::poset::{BitMatrix, Poset};

/// Generator parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Chain(usize),
    Antichain(usize),
    /// Random DAG on `0..n` with each forward edge present with
    /// probability `density`, then closed.
    Random { n: usize, density: f64, seed: u64 },
    /// The layered poset on which the push-out argument breaks down.
    Uno(usize),
}

pub fn generate(family: Family) -> Poset {
    match family {
        Family::Chain(n) => chain(n),
        Family::Antichain(n) => antichain(n),
        Family::Random { n, density, seed } => random(n, density, seed),
        Family::Uno(l) => uno(l),
    }
}

pub fn chain(n: usize) -> Poset {
    let mut m = BitMatrix::new(n);
    for u in 0..n {
        for v in u + 1..n {
            m.set(u, v);
        }
    }
    Poset::from_closed(m)
}

pub fn antichain(n: usize) -> Poset {
    Poset::from_closed(BitMatrix::new(n))
}

pub fn random(n: usize, density: f64, seed: u64) -> Poset {
    assert!((0.0..=1.0).contains(&density), "density must lie in [0, 1]");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Compare against a 53-bit threshold so density 1.0 is exact.
    let threshold = (density * (1u64 << 53) as f64) as u64;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.next_u64() >> 11 < threshold {
                edges.push((u, v));
            }
        }
    }
    closed_forward(n, &edges)
}

/// Sizes of the antichains `A_1..A_{2l}`.
pub fn uno_layer_sizes(l: usize) -> Vec<usize> {
    assert!(l >= 1, "uno needs l >= 1");
    let size = |i: usize| 1 + l.div_ceil(i);
    let mut sizes: Vec<usize> = (1..=l).rev().map(size).collect();
    sizes.extend((1..=l).map(size));
    sizes
}

/// Builds the `2l`-layer poset. Layer `A_i` occupies a contiguous id
/// range in layer order and its first id is the chain element `c_i`.
pub fn uno(l: usize) -> Poset {
    let sizes = uno_layer_sizes(l);
    let mut start = Vec::with_capacity(sizes.len() + 1);
    let mut acc = 0;
    for &s in &sizes {
        start.push(acc);
        acc += s;
    }
    start.push(acc);
    let layer = |i: usize| start[i - 1]..start[i];
    let c = |i: usize| start[i - 1];

    let mut edges = Vec::new();
    for i in 1..2 * l {
        edges.push((c(i), c(i + 1)));
    }
    for i in 2..=l {
        for a in layer(i).skip(1) {
            for b in layer(i - 1) {
                edges.push((b, a));
            }
        }
    }
    for a in layer(l) {
        edges.push((a, c(l + 1)));
    }
    for a in layer(l + 1) {
        edges.push((c(l), a));
    }
    for i in l + 1..2 * l {
        for a in layer(i).skip(1) {
            for b in layer(i + 1) {
                edges.push((a, b));
            }
        }
    }
    closed_forward(acc, &edges)
}

/// Closure of forward edges (`u < v`); the ids are already topological.
fn closed_forward(n: usize, edges: &[(usize, usize)]) -> Poset {
    let mut m = BitMatrix::new(n);
    for &(u, v) in edges {
        debug_assert!(u < v);
        m.set(u, v);
    }
    // reverse sweep: row u absorbs the closed rows of its successors
    for u in (0..n).rev() {
        for v in u + 1..n {
            if m.get(u, v) {
                m.or_row_into(v, u);
            }
        }
    }
    Poset::from_closed(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use crate::poset::PosetStats;

    #[test]
    fn chain_and_antichain_stats() {
        assert_eq!(chain(4).stats(), PosetStats { n: 4, q: 0, t: 0 });
        assert_eq!(antichain(4).stats(), PosetStats { n: 4, q: 6, t: 4 });
    }

    #[test]
    fn uno_sizes() {
        assert_eq!(uno(1).len(), 4);
        assert_eq!(uno(3).len(), 18);
        assert_eq!(uno_layer_sizes(3), vec![2, 3, 4, 4, 3, 2]);
    }

    #[test]
    fn uno_chain_is_comparable() {
        let p = uno(3);
        let cs = [0, 2, 5, 9, 13, 16];
        for w in cs.windows(2) {
            assert!(p.less(w[0], w[1]));
        }
        // A_1 \ c_1 sits below A_2 \ c_2 but not below c_2
        assert!(p.less(1, 3));
        assert!(!p.less(1, 2));
        // halves are incomparable off the chain
        assert!(!p.comparable(6, 10));
    }

    #[test]
    fn random_is_deterministic() {
        let a = random(30, 0.2, 7);
        let b = random(30, 0.2, 7);
        assert_eq!(a, b);
        assert_ne!(a, random(30, 0.2, 8));
        assert_eq!(random(10, 1.0, 1).stats().q, 0);
        assert_eq!(random(10, 0.0, 1).stats().q, 45);
    }
}
