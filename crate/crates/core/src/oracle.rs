//! Brute-force references for small posets and checks on visit sequences.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::poset::Poset;

/// Largest poset the subset scans accept.
pub const BRUTE_MAX: usize = 22;

/// A family of sets, each a sorted list of ids.
pub type SetFamily = BTreeSet<Vec<usize>>;

fn masks(p: &Poset) -> (Vec<u32>, Vec<u32>) {
    assert!(p.len() <= BRUTE_MAX, "brute force is limited to {BRUTE_MAX} elements");
    let n = p.len();
    let mut below = alloc::vec![0u32; n];
    let mut cmp = alloc::vec![0u32; n];
    for u in 0..n {
        for v in 0..n {
            if p.less(u, v) {
                below[v] |= 1 << u;
            }
            if u != v && p.comparable(u, v) {
                cmp[v] |= 1 << u;
            }
        }
    }
    (below, cmp)
}

fn unpack(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}

pub fn brute_ideals(p: &Poset) -> SetFamily {
    let (below, _) = masks(p);
    let n = p.len();
    (0u32..1 << n)
        .filter(|&m| (0..n).all(|v| m >> v & 1 == 0 || below[v] & !m == 0))
        .map(|m| unpack(m, n))
        .collect()
}

pub fn brute_antichains(p: &Poset) -> SetFamily {
    let (_, cmp) = masks(p);
    let n = p.len();
    (0u32..1 << n)
        .filter(|&m| (0..n).all(|v| m >> v & 1 == 0 || cmp[v] & m == 0))
        .map(|m| unpack(m, n))
        .collect()
}

pub fn is_ideal(p: &Poset, set: &[usize]) -> bool {
    let mut member = alloc::vec![false; p.len()];
    for &v in set {
        member[v] = true;
    }
    set.iter().all(|&v| (0..p.len()).all(|u| !p.less(u, v) || member[u]))
}

pub fn is_antichain(p: &Poset, set: &[usize]) -> bool {
    set.iter().all(|&u| set.iter().all(|&v| u == v || !p.comparable(u, v)))
}

/// Size of the symmetric difference of two sorted sets.
pub fn distance(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut d) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => {
                d += 1;
                i += 1;
            }
            core::cmp::Ordering::Greater => {
                d += 1;
                j += 1;
            }
            core::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    d + (a.len() - i) + (b.len() - j)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mismatch {
    Duplicate(Vec<usize>),
    Unexpected(Vec<usize>),
    Missing(Vec<usize>),
    /// Consecutive visits `i` and `i + 1` are `distance` apart.
    Jump { index: usize, distance: usize },
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mismatch::Duplicate(s) => write!(f, "set {s:?} visited twice"),
            Mismatch::Unexpected(s) => write!(f, "set {s:?} is not in the family"),
            Mismatch::Missing(s) => write!(f, "set {s:?} never visited"),
            Mismatch::Jump { index, distance } => {
                write!(f, "visits {index} and {} differ in {distance} elements", index + 1)
            }
        }
    }
}

/// Checks that `seq` lists every set of `expected` exactly once.
pub fn verify_permutation(seq: &[Vec<usize>], expected: &SetFamily) -> Result<(), Mismatch> {
    let mut seen = SetFamily::new();
    for s in seq {
        if !expected.contains(s) {
            return Err(Mismatch::Unexpected(s.clone()));
        }
        if !seen.insert(s.clone()) {
            return Err(Mismatch::Duplicate(s.clone()));
        }
    }
    match expected.iter().find(|s| !seen.contains(*s)) {
        Some(s) => Err(Mismatch::Missing(s.clone())),
        None => Ok(()),
    }
}

/// Checks that consecutive sets differ in at most `max` elements.
pub fn verify_gray(seq: &[Vec<usize>], max: usize) -> Result<(), Mismatch> {
    for (index, w) in seq.windows(2).enumerate() {
        let distance = distance(&w[0], &w[1]);
        if distance > max {
            return Err(Mismatch::Jump { index, distance });
        }
    }
    Ok(())
}

/// Largest distance between consecutive sets.
pub fn max_distance(seq: &[Vec<usize>]) -> usize {
    seq.windows(2).map(|w| distance(&w[0], &w[1])).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use crate::generate::{antichain, chain};

    #[test]
    fn brute_counts() {
        assert_eq!(brute_ideals(&chain(4)).len(), 5);
        assert_eq!(brute_ideals(&antichain(4)).len(), 16);
        assert_eq!(brute_antichains(&chain(4)).len(), 5);
        assert_eq!(brute_antichains(&antichain(4)).len(), 16);
        let v = Poset::from_relations(3, &[(0, 2), (1, 2)]).unwrap();
        assert_eq!(brute_ideals(&v).len(), 5);
        assert_eq!(brute_antichains(&v).len(), 5);
    }

    #[test]
    fn distance_and_checks() {
        assert_eq!(distance(&[0, 2, 3], &[1, 2]), 3);
        let fam: SetFamily = [vec![], vec![0]].into_iter().collect();
        assert!(verify_permutation(&[vec![0], vec![]], &fam).is_ok());
        assert_eq!(verify_permutation(&[vec![0]], &fam), Err(Mismatch::Missing(vec![])));
        assert_eq!(
            verify_gray(&[vec![], vec![0, 1, 2, 3]], 3),
            Err(Mismatch::Jump { index: 0, distance: 4 })
        );
    }
}
