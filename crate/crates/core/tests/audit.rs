use poset_enum::audit::*;
use poset_enum::generate::{antichain, chain, random, uno};
use poset_enum::measure::{run, RunOptions};
use poset_enum::runtime::{Count, Deltas, TraceConfig};
use poset_enum::stepper::{default_delta_bound, make_stepper};
use poset_enum::{Kind, Order, Poset, PosetStats};
use proptest::prelude::*;

fn v_poset() -> Poset {
    Poset::from_relations(3, &[(0, 2), (1, 2)]).unwrap()
}

fn ledger(p: &Poset, kind: Kind, order: Order) -> (Ledger, Vec<u64>) {
    let cfg = TraceConfig { max_depth: None, keep_sets: true };
    let r = run(p, &RunOptions::new(kind, order).traced(cfg).stamped(), &mut Count::default());
    let c = PotentialConstants::calibrated(kind, order);
    (Ledger::from_trace(p, kind, r.trace.as_ref().unwrap(), c), r.stamps)
}

/// Pair and triple counts straight from the definition.
fn naive_stats(p: &Poset, e: &[usize]) -> PosetStats {
    let inc = |a: usize, b: usize| !p.less(a, b) && !p.less(b, a);
    let (mut q, mut t) = (0, 0);
    for (i, &a) in e.iter().enumerate() {
        for (j, &b) in e.iter().enumerate().skip(i + 1) {
            if inc(a, b) {
                q += 1;
                t += e[j + 1..].iter().filter(|&&c| inc(a, c) && inc(b, c)).count() as u64;
            }
        }
    }
    PosetStats { n: e.len() as u64, q, t }
}

#[test]
fn potential_constants() {
    let i = PotentialConstants::IDEALS;
    assert_eq!((i.alpha, i.beta, i.gamma, i.delta), (922, 921, 385, 192));
    let a = PotentialConstants::ANTICHAINS;
    assert_eq!((a.alpha, a.beta, a.gamma, a.delta, a.mu), (196, 195, 97, 96, 392));
    assert!(a.mu > a.alpha + a.beta);
    assert!(i.mu > i.alpha + i.beta);
}

#[test]
fn potential_values() {
    let c = PotentialConstants::IDEALS;
    assert_eq!(potential(PosetStats::default(), &c), 922);
    for n in 0..20 {
        assert_eq!(potential(chain(n as usize).stats(), &c), 922 + 921 * n);
    }
    assert_eq!(potential(v_poset().stats(), &c), 4070);
}

#[test]
fn chain_root_is_tight() {
    for n in 1..=30 {
        for order in [Order::Basic, Order::Gray] {
            let (l, _) = ledger(&chain(n), Kind::Ideals, order);
            let root = l.root().unwrap();
            assert_eq!(root.children.len(), n + 1);
            assert_eq!(root.children_phi_sum as i128 - root.phi as i128, n as i128);
            assert_eq!(check_pyramid(&l).root_slack, Some(n as i128));
        }
    }
}

#[test]
fn v_poset_children() {
    let (l, _) = ledger(&v_poset(), Kind::Ideals, Order::Basic);
    let root = l.root().unwrap();
    let mut phis: Vec<u64> = root.children.iter().map(|&c| l.records[c].phi).collect();
    phis.sort_unstable();
    assert_eq!(phis, [922, 1843, 1843]);
    assert_eq!(root.children_phi_sum - root.phi, 538);
}

#[test]
fn antichain_singleton_leaf() {
    let (l, _) = ledger(&antichain(1), Kind::Antichains, Order::Basic);
    let c = &l.constants;
    let single = l.records.iter().find(|r| r.stats.n == 1).unwrap();
    assert_eq!(c.mu as i128 - single.phi as i128, 1);
    assert!(check_pyramid(&l).passed());
}

#[test]
fn ledger_matches_definitions() {
    let mut posets = vec![v_poset(), uno(2), antichain(5)];
    posets.extend((0..12).map(|s| random(9, 0.3, s)));
    for p in &posets {
        for kind in [Kind::Ideals, Kind::Antichains] {
            for order in [Order::Basic, Order::Gray] {
                let (l, stamps) = ledger(p, kind, order);
                let c = l.constants;
                for r in &l.records {
                    let st = naive_stats(p, &r.elements);
                    assert_eq!(r.stats, st);
                    assert_eq!(r.phi, c.alpha + c.beta * st.n + c.gamma * st.q + c.delta * st.t);
                    let kids: u64 = r.children.iter().map(|&k| l.records[k].phi).sum();
                    assert_eq!(r.children_phi_sum, kids);
                    let own: u64 = r.children.iter().map(|&k| l.records[k].subtree_ticks).sum();
                    assert_eq!(r.subtree_ticks, r.ticks + own);
                }
                let root = l.root().unwrap();
                assert_eq!(root.subtree_visits, stamps.len() as u64);
                assert!(check_pyramid(&l).passed());
                assert!(check_subtree(&l).is_empty());
                assert!(check_gap(&stamps, l.delta_measured(), &c).passed());
                assert!(check_pair_bound(p, &l).is_empty());
            }
        }
    }
}

#[test]
fn pair_partitions() {
    for n in 1..10 {
        let a = antichain(n);
        let (l, _) = ledger(&a, Kind::Ideals, Order::Basic);
        let root = l.root().unwrap();
        assert_eq!(pair_stats(&a, Kind::Ideals, &root.elements, &root.chain).q3, 0);
        let c = chain(n);
        let (l, _) = ledger(&c, Kind::Ideals, Order::Basic);
        let root = l.root().unwrap();
        assert!(pair_stats(&c, Kind::Ideals, &root.elements, &root.chain).holds());
    }
}

#[test]
fn aux_inequality() {
    assert!(check_aux(&[1], &[1]));
    assert!(check_aux(&[4], &[4]));
    // every pair of vectors of length <= 3 with entries <= 6
    let mut vecs: Vec<Vec<u64>> = vec![];
    for len in 1..=3u32 {
        for code in 0..6u64.pow(len) {
            vecs.push((0..len).map(|i| 1 + code / 6u64.pow(i) % 6).collect());
        }
    }
    for a in &vecs {
        for b in &vecs {
            assert!(check_aux(a, b), "{a:?} {b:?}");
        }
    }
}

#[test]
fn pushout_on_leaf_children() {
    let (l, _) = ledger(&chain(6), Kind::Ideals, Order::Basic);
    let rep = check_pushout(&l, PushoutParams::new("2", 0, 8).unwrap());
    assert!(rep.root_violated());
}

#[test]
fn pushout_implies_pyramid() {
    for p in [uno(2), uno(3), random(10, 0.2, 1), antichain(6)] {
        let (l, _) = ledger(&p, Kind::Ideals, Order::Basic);
        for (alpha, beta) in [("1.5", 4), ("2", 8), ("1.1", 0)] {
            let rep = check_pushout(&l, PushoutParams::new(alpha, beta, 8).unwrap());
            assert!(rep.cross_check_failures.is_empty());
        }
    }
}

#[test]
fn csv_export() {
    let (l, _) = ledger(&chain(3), Kind::Ideals, Order::Basic);
    let csv = l.to_csv();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "node_id,parent_id,depth,n,q,t,phi,ticks,visits");
    assert_eq!(rows.len(), 6);
    assert!(rows[1].starts_with("0,,0,3,0,0,3685,"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn stepper_replays_gray(n in 0usize..12, density in 0.0f64..0.9, seed in any::<u64>(), ideals in any::<bool>()) {
        let p = random(n, density, seed);
        let kind = if ideals { Kind::Ideals } else { Kind::Antichains };
        let c = PotentialConstants::calibrated(kind, Order::Gray);
        let mut gray = Deltas::default();
        run(&p, &RunOptions::new(kind, Order::Gray), &mut gray);
        let mut s = make_stepper(&p, kind, default_delta_bound(&p), &c);
        let got: Vec<_> = s.by_ref().collect::<Result<_, _>>().unwrap();
        prop_assert_eq!(got, gray.0);
        prop_assert!(s.max_occupancy() <= s.capacity());
        prop_assert!(s.max_step_ticks() <= c.mu * c.tstar);
    }
}
