use std::process::{Command, Output};

use poset_enum::generate::random;
use poset_enum::oracle::distance;
use poset_enum_cli::format::{apply_delta_line, parse_poset, parse_set_line, write_poset};
use proptest::prelude::*;

fn posetenum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_posetenum")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn sets(args: &[&str]) -> Vec<Vec<usize>> {
    let o = posetenum(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o).lines().map(|l| parse_set_line(l).unwrap()).collect()
}

#[test]
fn counts() {
    assert_eq!(stdout(&posetenum(&["enumerate", "--gen", "chain:3", "--kind", "ideals", "--count"])), "4\n");
    assert_eq!(stdout(&posetenum(&["enumerate", "--gen", "antichain:10", "--kind", "ideals", "--count"])), "1024\n");
    assert_eq!(stdout(&posetenum(&["enumerate", "--gen", "antichain:10", "--loopless", "--count"])), "1024\n");
}

#[test]
fn v_poset_antichains_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.poset");
    std::fs::write(&path, "poset 3\nrel 0 2\nrel 1 2\n").unwrap();
    let s = sets(&["enumerate", "--in", path.to_str().unwrap(), "--kind", "antichains", "--order", "gray"]);
    assert_eq!(s.len(), 5);
    assert!(s.windows(2).all(|w| distance(&w[0], &w[1]) <= 3));
    assert_eq!(s.last().unwrap(), &Vec::<usize>::new());
}

#[test]
fn deltas_replay_to_sets() {
    let cases: &[&[&str]] = &[
        &["--gen", "random:9:0.3:4", "--kind", "ideals", "--order", "gray"],
        &["--gen", "random:9:0.3:4", "--kind", "ideals", "--order", "basic"],
        &["--gen", "uno:2", "--kind", "antichains", "--order", "gray", "--reverse"],
        &["--gen", "random:8:0.2:1", "--kind", "antichains", "--order", "gray", "--loopless"],
    ];
    for case in cases {
        let mut args = vec!["enumerate"];
        args.extend_from_slice(case);
        let expected = sets(&args);
        args.push("--deltas");
        let o = posetenum(&args);
        let text = stdout(&o);
        let mut lines = text.lines();
        let mut cur = parse_set_line(lines.next().unwrap()).unwrap();
        let mut replayed = vec![cur.clone()];
        for l in lines {
            apply_delta_line(&mut cur, l).unwrap();
            replayed.push(cur.clone());
        }
        assert_eq!(replayed, expected, "{case:?}");
    }
}

#[test]
fn loopless_matches_gray() {
    for kind in ["ideals", "antichains"] {
        let base = ["enumerate", "--gen", "random:10:0.25:3", "--kind", kind, "--order", "gray"];
        let mut loopless = base.to_vec();
        loopless.push("--loopless");
        assert_eq!(sets(&base), sets(&loopless), "{kind}");
    }
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.poset");
    std::fs::write(&bad, "poset 2\nrel 0 1\nrel 1 0\n").unwrap();
    let missing = dir.path().join("missing");
    let runs: &[&[&str]] = &[
        &["enumerate", "--in", bad.to_str().unwrap()],
        &["enumerate", "--in", missing.to_str().unwrap()],
        &["enumerate", "--gen", "tree:4"],
        &["enumerate", "--gen", "chain:4", "--order", "basic", "--loopless"],
        &["audit", "--gen", "chain:4", "--pushout", "alpha=0.5", "beta=4"],
    ];
    for args in runs {
        let o = posetenum(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    let o = posetenum(&["enumerate", "--in", bad.to_str().unwrap()]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("not a partial order"));
}

#[test]
fn audit_chain_is_tight() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("ledger.csv");
    let o = posetenum(&["audit", "--gen", "chain:50", "--kind", "ideals", "--out", csv.to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    for check in ["pyramid: PASS", "root slack: 50", "pair bound: PASS", "subtree: PASS", "gap: PASS"] {
        assert!(text.contains(check), "{check} missing from\n{text}");
    }
    let ledger = std::fs::read_to_string(csv).unwrap();
    assert!(ledger.starts_with("node_id,parent_id,depth,n,q,t,phi,ticks,visits\n"));
    assert_eq!(ledger.lines().count(), 1 + 52);
}

#[test]
fn audit_antichains_pass() {
    let o = posetenum(&["audit", "--gen", "antichain:6", "--kind", "antichains"]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn audit_uno_reports_pushout() {
    let o = posetenum(&["audit", "--gen", "uno:16", "--kind", "ideals", "--order", "basic", "--pushout", "alpha=2", "beta=4"]);
    let text = stdout(&o);
    assert!(text.contains("pyramid: PASS"));
    assert!(text.lines().any(|l| l.starts_with("push-out: ")));
    assert!(text.contains("gap: SKIPPED"));
}

#[test]
fn audit_violation_exits_3() {
    let o = posetenum(&["audit", "--gen", "antichain:5", "--tstar", "1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("pyramid: FAIL"));
    let o = posetenum(&["enumerate", "--gen", "antichain:5", "--count", "--audit", "--tstar", "1"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stdout(&o), "32\n");
}

#[test]
fn bench_csv() {
    let o = posetenum(&["bench", "--family", "antichain", "--sizes", "10,20", "--prefix", "500", "--loopless"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,q,outputs,total_ticks,ticks_per_output,max_gap_ticks,ticks_to_first");
    assert!(lines[1].starts_with("10,45,500,"));
    assert!(lines[2].starts_with("20,190,500,"));
}

#[test]
fn write_round_trips() {
    let o = posetenum(&["write", "--gen", "random:12:0.3:5"]);
    let p = parse_poset(&stdout(&o)).unwrap();
    let q = random(12, 0.3, 5);
    for u in 0..12 {
        for v in 0..12 {
            assert_eq!(p.less(u, v), q.less(u, v));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn file_format_round_trip(n in 1usize..14, density in 0.0f64..0.8, seed in any::<u64>()) {
        let p = random(n, density, seed);
        let back = parse_poset(&write_poset(&p)).unwrap();
        let label_less = |q: &poset_enum::Poset| {
            let mut rel = vec![vec![false; n]; n];
            for u in 0..n {
                for v in 0..n {
                    rel[q.label(u)][q.label(v)] = q.less(u, v);
                }
            }
            rel
        };
        prop_assert_eq!(label_less(&p), label_less(&back));
        prop_assert_eq!(write_poset(&back), write_poset(&p));
    }
}
