//! Acceptance gate: one test per criterion, each printing a pass/fail
//! line. Grid bounds and runtime limits are pinned here and in the suite
//! constants; the CLI round-trip/determinism criterion lives in the CLI
//! crate's own acceptance target.

use std::time::{Duration, Instant};

use cellspec_core::generators::{
    canonical_form, enumerate_preorders, labeled_preorders, random_preorder,
};
use cellspec_core::suites::{run_suite, SuiteOptions};
use cellspec_core::spectrum::invariant_chain_report;
use cellspec_core::Preorder;

fn run_clean(criterion: usize, name: &str, suite: &str, limit: Option<Duration>) {
    let start = Instant::now();
    let result = run_suite(suite, &SuiteOptions::default()).expect("suite runs");
    let elapsed = start.elapsed();
    assert!(
        result.passed(),
        "criterion {criterion} ({name}): FAIL — {} violations, first: {:?}",
        result.violations.len(),
        result.violations.first()
    );
    if let Some(limit) = limit {
        assert!(
            elapsed <= limit,
            "criterion {criterion} ({name}): FAIL — runtime {elapsed:?} over {limit:?}"
        );
    }
    println!(
        "criterion {criterion} ({name}): PASS — {} instances, 0 violations, {:?}",
        result.instances, elapsed
    );
}

#[test]
fn criterion_01_tech1_union_test() {
    run_clean(
        1,
        "subset-poset incompatibility equals union test",
        "tech1",
        Some(Duration::from_secs(300)),
    );
}

#[test]
fn criterion_02_t_family_antichain() {
    run_clean(2, "diagonal pair family is an antichain", "t-family", None);
}

#[test]
fn criterion_03_witness_family() {
    run_clean(
        3,
        "derived families verify and project correctly",
        "witness-family",
        None,
    );
}

#[test]
fn criterion_04_direction_theorem() {
    run_clean(
        4,
        "characterization violations refute oracle membership",
        "agreement-experiment",
        None,
    );
}

#[test]
fn criterion_05_tech2_linked_singletons() {
    run_clean(5, "2-linked subsets give singleton antichains", "tech2", None);
}

#[test]
fn criterion_06_pullback() {
    run_clean(
        6,
        "pullbacks preserve maximal antichains",
        "proj-pullback",
        None,
    );
}

#[test]
fn criterion_07_denspec_finite() {
    run_clean(
        7,
        "density-scaled families force big subset-poset antichains",
        "denspec-finite",
        None,
    );
}

#[test]
fn criterion_08_invariant_chain() {
    let start = Instant::now();
    let mut instances = 0usize;
    let mut check = |p: &Preorder, label: &str| {
        let report = invariant_chain_report(p, 4).expect("nonempty");
        let c = report.cellularity;
        let d = report.density;
        let ind: Vec<usize> = report.linked_free.iter().map(|&(_, i)| i).collect();
        assert_eq!(ind[0], c, "criterion 8: c != ind_2 on {label}");
        assert!(
            ind.windows(2).all(|w| w[0] <= w[1]),
            "criterion 8: ind not monotone on {label}"
        );
        assert!(
            report
                .linked_free
                .iter()
                .all(|&(n, i)| i <= (n - 1) * d),
            "criterion 8: ind_n > (n-1)d on {label}"
        );
        assert!(c <= d, "criterion 8: c > d on {label}");
        assert!(
            c <= report.fin_pc.unwrap_or(report.fin_pc_lower),
            "criterion 8: c > fin-pc on {label}"
        );
        assert!(
            report.all_checks_hold(),
            "criterion 8: report checks failed on {label}: {:?}",
            report.checks
        );
        instances += 1;
    };
    for p in enumerate_preorders(5).expect("within cap") {
        check(&p, "canonical instance");
    }
    let biases = [0.15, 0.3, 0.6];
    for i in 0..1000u64 {
        let size = (i % 8) as usize + 1;
        let bias = biases[(i % 3) as usize];
        let p = random_preorder(size, bias, 0xC0FFEE ^ i);
        check(&p, &format!("random instance {i}"));
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed <= Duration::from_secs(600),
        "criterion 8: FAIL — runtime {elapsed:?} over 10 minutes"
    );
    println!(
        "criterion 8 (invariant chain): PASS — {instances} instances, 0 violations, {elapsed:?}"
    );
}

#[test]
fn criterion_09_topology_bridge() {
    run_clean(
        9,
        "down-set spaces preserve cellularity; space products match poset products",
        "alexandrov",
        None,
    );
}

#[test]
fn criterion_10_enumeration_self_consistency() {
    let start = Instant::now();
    let scan = labeled_preorders(3).expect("within cap");
    assert_eq!(
        scan.count, 29,
        "criterion 10: FAIL — labeled count at size 3 is {}",
        scan.count
    );
    let all: Vec<Vec<u8>> = enumerate_preorders(4)
        .expect("within cap")
        .map(|p| canonical_form(&p).expect("within cap").bytes().to_vec())
        .collect();
    for (i, a) in all.iter().enumerate() {
        for b in &all[i + 1..] {
            assert_ne!(a, b, "criterion 10: FAIL — isomorphic duplicates in stream");
        }
    }
    // the stream covers exactly the labeled oracle's classes
    for n in 1..=4 {
        let oracle = labeled_preorders(n).expect("within cap");
        let stream: std::collections::BTreeSet<Vec<u8>> = enumerate_preorders(n)
            .expect("within cap")
            .filter(|p| p.size() == n)
            .map(|p| canonical_form(&p).expect("within cap").bytes().to_vec())
            .collect();
        assert_eq!(
            oracle.classes, stream,
            "criterion 10: FAIL — stream misses or invents classes at size {n}"
        );
    }
    println!(
        "criterion 10 (enumeration self-consistency): PASS — 29 labeled at size 3, {} canonical instances, {:?}",
        all.len(),
        start.elapsed()
    );
}

#[test]
fn criterion_11_solver_cross_check() {
    let start = Instant::now();
    let mut instances = 0usize;
    for p in enumerate_preorders(6).expect("within cap") {
        let exact = p.cellularity().expect("nonempty");
        let oracle = p.cellularity_bruteforce().expect("within cap");
        assert_eq!(
            exact.size, oracle.size,
            "criterion 11: FAIL — solver mismatch on canonical instance"
        );
        instances += 1;
    }
    let biases = [0.1, 0.25, 0.5];
    for i in 0..500u64 {
        let size = (i % 12) as usize + 1;
        let p = random_preorder(size, biases[(i % 3) as usize], 0xACC ^ i);
        let exact = p.cellularity().expect("nonempty");
        let oracle = p.cellularity_bruteforce().expect("within cap");
        assert_eq!(
            exact.size, oracle.size,
            "criterion 11: FAIL — solver mismatch on random instance {i}"
        );
        assert!(p.is_antichain(&p.element_set(&exact.witness).expect("valid")));
        instances += 1;
    }
    println!(
        "criterion 11 (solver cross-check): PASS — {instances} instances, exact agreement, {:?}",
        start.elapsed()
    );
}
