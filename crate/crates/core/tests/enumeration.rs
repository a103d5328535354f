use poset_enum::antichains::{enumerate_antichains_basic, enumerate_antichains_gray, Direction};
use poset_enum::generate::{antichain, chain, random, uno};
use poset_enum::ideals::{enumerate_ideals_basic, enumerate_ideals_gray};
use poset_enum::oracle::{brute_antichains, brute_ideals, max_distance, verify_gray, verify_permutation};
use poset_enum::runtime::{Collect, Delta, Deltas};
use poset_enum::Poset;
use proptest::prelude::*;

fn sweep() -> Vec<Poset> {
    let mut out = vec![chain(1), chain(5), antichain(1), antichain(6), uno(1), uno(2)];
    for n in 2..=11 {
        for (i, d) in [0.1, 0.25, 0.5, 0.8].into_iter().enumerate() {
            for seed in 0..6 {
                out.push(random(n, d, seed * 31 + i as u64));
            }
        }
    }
    out
}

fn check_ideals(p: &Poset) {
    let fam = brute_ideals(p);
    let mut b = Collect::default();
    assert_eq!(enumerate_ideals_basic(p, &mut b), fam.len() as u64);
    verify_permutation(&b.0, &fam).unwrap();
    let mut g = Collect::default();
    enumerate_ideals_gray(p, &mut g);
    verify_permutation(&g.0, &fam).unwrap_or_else(|e| panic!("{e} on {:?}", p.cover_relations()));
    verify_gray(&g.0, 3).unwrap_or_else(|e| panic!("{e} on {:?}", p.cover_relations()));
    assert_eq!(g.0.first(), Some(&vec![]));
    assert_eq!(g.0.last(), Some(&(0..p.len()).collect::<Vec<_>>()));
}

fn check_antichains(p: &Poset) {
    let fam = brute_antichains(p);
    let mut b = Collect::default();
    assert_eq!(enumerate_antichains_basic(p, &mut b), fam.len() as u64);
    verify_permutation(&b.0, &fam).unwrap();
    let mut f = Collect::default();
    enumerate_antichains_gray(p, &mut f, Direction::Forward);
    verify_permutation(&f.0, &fam).unwrap();
    verify_gray(&f.0, 3).unwrap();
    let mut r = Collect::default();
    enumerate_antichains_gray(p, &mut r, Direction::Reverse);
    r.0.reverse();
    assert_eq!(f.0, r.0);
}

#[test]
fn ideals_match_brute_force() {
    for p in sweep() {
        check_ideals(&p);
    }
}

#[test]
fn antichains_match_brute_force() {
    for p in sweep() {
        check_antichains(&p);
    }
}

#[test]
fn gray_ideals_reach_distance_three() {
    let worst = sweep()
        .iter()
        .map(|p| {
            let mut g = Collect::default();
            enumerate_ideals_gray(p, &mut g);
            max_distance(&g.0)
        })
        .max();
    assert_eq!(worst, Some(3));
}

#[test]
fn deltas_replay_to_sets() {
    let p = random(9, 0.3, 5);
    let mut sets = Collect::default();
    enumerate_ideals_gray(&p, &mut sets);
    let mut deltas = Deltas::default();
    enumerate_ideals_gray(&p, &mut deltas);
    let mut member = vec![false; p.len()];
    for (d, s) in deltas.0.iter().zip(&sets.0) {
        d.apply(&mut member);
        let got: Vec<usize> = (0..p.len()).filter(|&i| member[i]).collect();
        assert_eq!(&got, s);
    }
    assert_eq!(deltas.0[0], Delta::default());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_posets(n in 1usize..=12, density in 0.0f64..1.0, seed in any::<u64>()) {
        let p = random(n, density, seed);
        check_ideals(&p);
        check_antichains(&p);
    }
}
