use ffgeom::theorems::{Theorem, Tier};
use ffgeom_harness::config::{instance_seed, parse_grid};
use ffgeom_harness::report::{Row, SCHEMA};
use ffgeom_harness::{estimate_constant, run_identity_suite, run_theorem_sweep, Fault, IdentityConfig, NotApplicable, Policy, SweepConfig};

fn row(q: u32, observed: f64, bound: f64, flags: &[&str]) -> Row {
    Row {
        schema: SCHEMA,
        theorem_id: "incidence".into(),
        p: q,
        ell: 1,
        q,
        d: 2,
        size_a: 1,
        size_b: 1,
        size_p: 1,
        size_r: 1,
        observed,
        bound: Some(bound),
        constant: Some(observed / bound),
        flags: flags.iter().map(|s| s.to_string()).collect(),
        case: "all".into(),
        family: "test".into(),
        instance: 0,
    }
}

#[test]
fn constant_estimate_uses_clean_rows() {
    let rows = vec![row(3, 1.0, 2.0, &[]), row(5, 3.0, 4.0, &[]), row(5, 100.0, 1.0, &["validity-range"]), row(7, 1.0, 1.0, &[])];
    let s = estimate_constant(Theorem::Incidence, &rows).unwrap();
    assert_eq!(s.rows, 3);
    assert_eq!(s.max_constant, 1.0);
    assert_eq!(s.per_q, vec![(3, 0.5), (5, 0.75), (7, 1.0)]);
    assert!((s.stability_ratio - 4.0 / 3.0).abs() < 1e-12);
    assert!(!s.grows_with_q);
    let growing = vec![row(3, 1.0, 4.0, &[]), row(11, 3.0, 4.0, &[])];
    assert!(estimate_constant(Theorem::Incidence, &growing).unwrap().grows_with_q);
}

#[test]
fn constant_estimate_not_applicable() {
    assert_eq!(Theorem::ProjectionCount.tier(), Tier::Exact);
    assert_eq!(estimate_constant(Theorem::ProjectionCount, &[]).unwrap_err(), NotApplicable::ExplicitConstant);
    assert_eq!(estimate_constant(Theorem::Incidence, &[]).unwrap_err(), NotApplicable::NoData);
    let flagged = vec![row(3, 1.0, 1.0, &["hypothesis"])];
    assert_eq!(estimate_constant(Theorem::Incidence, &flagged).unwrap_err(), NotApplicable::NoData);
}

#[test]
fn grid_parsing() {
    assert_eq!(parse_grid("3:1:2, 3:2:2").unwrap(), vec![(3, 1, 2), (3, 2, 2)]);
    assert!(parse_grid("").unwrap().is_empty());
    assert!(parse_grid("3:1").is_err());
    assert!(parse_grid("a:1:2").is_err());
}

#[test]
fn seeds_depend_on_every_coordinate() {
    let base = instance_seed(1, "t", (3, 1, 2), 0);
    assert_eq!(base, instance_seed(1, "t", (3, 1, 2), 0));
    for other in [
        instance_seed(2, "t", (3, 1, 2), 0),
        instance_seed(1, "u", (3, 1, 2), 0),
        instance_seed(1, "t", (5, 1, 2), 0),
        instance_seed(1, "t", (3, 2, 2), 0),
        instance_seed(1, "t", (3, 1, 3), 0),
        instance_seed(1, "t", (3, 1, 2), 1),
    ] {
        assert_ne!(base, other);
    }
}

#[test]
fn oversized_or_invalid_cells_are_rejected() {
    assert!(run_theorem_sweep(&SweepConfig::new(Theorem::Quadruple, vec![(4, 1, 2)])).is_err());
    assert!(run_theorem_sweep(&SweepConfig::new(Theorem::Quadruple, vec![(13, 1, 4)])).is_err());
    assert!(run_theorem_sweep(&SweepConfig::new(Theorem::Quadruple, vec![(3, 1, 0)])).is_err());
}

#[test]
fn identity_suite_flags_only_the_faulted_identity() {
    let cfg = IdentityConfig { grid: vec![(3, 1, 2), (3, 2, 2)], trials: 2, seed: 3, fault: None };
    let clean = run_identity_suite(&cfg).unwrap();
    assert!(clean.passed());
    let faulty = run_identity_suite(&IdentityConfig { fault: Some(Fault::SphereSign), ..cfg }).unwrap();
    assert!(!faulty.passed());
    let failed: Vec<&str> = faulty.identities.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    assert!(failed.iter().all(|&n| n == "sphere-spectrum"), "{failed:?}");
    assert!(faulty.identities.iter().any(|c| !c.passed && c.repro.is_some()));
}

#[test]
fn every_theorem_sweeps_on_a_small_cell() {
    for &t in Theorem::ALL {
        let mut cfg = SweepConfig::new(t, vec![(3, 1, 2)]);
        cfg.trials = 2;
        cfg.policy = Policy::Mixed;
        let report = run_theorem_sweep(&cfg).unwrap_or_else(|e| panic!("{t}: {e}"));
        assert!(!report.rows.is_empty(), "{t}");
        assert!(report.rows.iter().all(|r| r.theorem_id == t.id()));
        assert!(report.violations.is_empty(), "{t}: {:?}", report.violations);
    }
}
