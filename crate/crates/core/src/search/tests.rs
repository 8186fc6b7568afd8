use super::*;
use crate::exactnum::ratio;
use num_traits::{Signed, Zero};

fn grid() -> Vec<Rational> {
    vec![ratio(1, 3), ratio(1, 2), ratio(2, 3)]
}

#[test]
fn generation_is_deterministic() {
    let fam = InstanceFamily::lattice_points(2, 5, 0.3, 1);
    let a = generate(&fam, 2).unwrap();
    assert_eq!(a, generate(&fam, 2).unwrap());
    assert_eq!(a.len(), 2);
    // instance i only depends on its own stream
    assert_eq!(generate(&fam, 5).unwrap()[..2], a[..]);
    let other = InstanceFamily::lattice_points(2, 5, 0.3, 2);
    assert_ne!(a, generate(&other, 2).unwrap());
}

#[test]
fn generator_contracts() {
    let fam = InstanceFamily::box_union(1, 3, 3, 4, 7);
    for (k, l) in generate(&fam, 20).unwrap() {
        for s in [k, l] {
            assert!(!s.boxes().is_empty() && s.boxes().len() <= 3);
            for b in s.boxes() {
                let f = &b.factors[0];
                for e in [&f.lo, &f.hi] {
                    assert!((e * ratio(4, 1)).is_integer());
                    assert!(e.abs() <= ratio(3, 1));
                }
            }
        }
    }
    let full = InstanceFamily::lattice_points(2, 2, 1.0, 3);
    let (k, _) = &generate(&full, 1).unwrap()[0];
    assert_eq!(k.points().len(), 25);
    assert!(generate(&InstanceFamily::lattice_points(2, 2, 0.0, 3), 1).is_err());
}

#[test]
fn main_scan_has_no_violations() {
    let fam = InstanceFamily::lattice_points(2, 3, 0.25, 11);
    let r = scan(&ScanSpec::new(fam, TheoremId::MainBm, grid(), 150)).unwrap();
    assert_eq!(r.instances_run, 450);
    assert_eq!(r.violation_count, 0);
    assert!(!r.unexpected);
    assert!(r.min_slack_instance.is_some());
}

#[test]
fn naive_scan_finds_violations() {
    let fam = InstanceFamily::box_union(1, 4, 1, 4, 5);
    let r = scan(&ScanSpec::new(fam, TheoremId::Naive, grid(), 100)).unwrap();
    assert!(r.violation_count > 0);
    assert!(!r.unexpected);
    let v = &r.violations[0];
    assert_eq!(v.certificate.verdict, Verdict::Violated);
    assert!(v.slack < Rational::zero());
    assert_eq!(r.min_slack_instance.unwrap().certificate.verdict, Verdict::Violated);
}

#[test]
fn card_sum_cubes_give_equalities_that_reverify() {
    let fam = InstanceFamily::lattice_points(2, 1, 1.0, 0);
    let r = scan(&ScanSpec::new(fam, TheoremId::CardSum, vec![], 3)).unwrap();
    assert_eq!(r.equality_count, 3);
    for e in &r.equality_instances {
        let c = crate::verifiers::verify_card_sum(&e.k, &e.l).unwrap();
        assert_eq!(c.verdict, Verdict::HoldsEqual);
    }
}

#[test]
fn unguarded_half_sum_is_not_flagged() {
    let fam = InstanceFamily::box_union(1, 2, 1, 3, 9);
    let mut spec = ScanSpec::new(fam, TheoremId::HalfSum, vec![ratio(1, 2)], 60);
    let guarded = scan(&spec).unwrap();
    spec.unguarded = true;
    let open = scan(&spec).unwrap();
    assert!(open.instances_run >= guarded.instances_run);
    assert!(!open.unexpected);
    assert_eq!(guarded.violation_count, 0);
}

#[test]
fn reports_are_reproducible() {
    let fam = InstanceFamily::box_union(2, 3, 2, 2, 42);
    let spec = ScanSpec::new(fam, TheoremId::MainBm, grid(), 20);
    let a = serde_json::to_string(&scan(&spec).unwrap()).unwrap();
    let b = serde_json::to_string(&scan(&spec).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn repro_suite_passes() {
    let checks = repro_paper();
    let table = repro_table(&checks);
    for c in &checks {
        assert!(c.passed, "{}: {}", c.name, c.detail);
    }
    assert!(table.contains("lambda-third-failure"));
}
