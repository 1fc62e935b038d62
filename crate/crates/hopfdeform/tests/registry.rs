use hopfdeform::{registry, run, Command, RunConfig};

#[test]
fn entries_round_trip_through_json() {
    for e in registry::EXAMPLES {
        let cfg = e.config();
        let text = cfg.to_json();
        assert_eq!(RunConfig::from_json(&text).unwrap(), cfg, "{}", e.name);
    }
}

#[test]
fn z_cubic_split_classification() {
    let mut cfg = registry::find("z-cubic").unwrap().config();
    cfg.command = Command::Split;
    cfg.sample_budget = 50;
    let r = run(&cfg).unwrap();
    assert!(r.pass);
    assert_eq!(r.summary["split.l1_zero"], true);
    assert_eq!(r.summary["split.l2_equals_l"], true);
    assert_eq!(r.summary["split.constant_antipodes"], true);
    assert_eq!(
        r.summary["split.classification"],
        "trivial with constant antipodes"
    );
    assert!(r.classifier.coboundary_witness);
}

#[test]
fn symmetric_matrix_split_has_vanishing_l2() {
    let mut cfg = registry::find("zd-symmetric").unwrap().config();
    cfg.sample_budget = 50;
    let r = run(&cfg).unwrap();
    assert!(r.pass);
    assert_eq!(r.summary["split.l2_zero"], true);
    assert_eq!(r.evaluations[0].value, "L1 = 1+0i, L2 = 0+0i");
}

#[test]
fn oscillator_report_contains_ccr() {
    let mut cfg = registry::find("oscillator").unwrap().config();
    cfg.t_grid = vec![1.0];
    cfg.sample_budget = 40;
    let r = run(&cfg).unwrap();
    assert!(r.pass);
    let ccr = r.evaluations.iter().find(|e| e.op == "commutator").unwrap();
    assert_eq!(ccr.value, "(1+0i) 1");
    assert_eq!(r.classifier.hermitian, Some(true));
}

#[test]
fn commands_select_suites() {
    let mut cfg = registry::find("zd-matrix").unwrap().config();
    cfg.sample_budget = 20;
    cfg.command = Command::Validate;
    let r = run(&cfg).unwrap();
    assert!(r.get("structure.associativity").is_some());
    assert!(r.get("deformation.associativity").is_none());
    cfg.command = Command::Antipode;
    let r = run(&cfg).unwrap();
    assert!(r.get("hopf.antipode_identity").is_some());
    assert!(r.get("structure.associativity").is_none());
    cfg.command = Command::TrivialCheck;
    assert!(matches!(run(&cfg), Err(hopfdeform::CliError::Config(_))));
}
