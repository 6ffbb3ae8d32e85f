use diffeo::suite::{run, Golden, ModeChoice, Suite, SuiteParams};

fn golden() -> Golden {
    Golden::parse(&Golden::render_bn().unwrap(), &Golden::render_census().unwrap()).unwrap()
}

#[test]
fn reports_are_deterministic() {
    let params = SuiteParams {
        max_n: Some(6),
        ..SuiteParams::default()
    };
    for suite in [Suite::Bn, Suite::Vanish, Suite::Interacting] {
        let a = run(suite, &params, Some(&golden())).to_json();
        let b = run(suite, &params, Some(&golden())).to_json();
        assert_eq!(a, b, "{suite}");
        assert!(a.contains("\"schema\": 1"));
    }
}

#[test]
fn bn_suite_matches_golden() {
    let params = SuiteParams {
        n: Some(5),
        ..SuiteParams::default()
    };
    let report = run(Suite::Bn, &params, Some(&golden()));
    assert!(report.passed());
    assert_eq!(report.cases.len(), 5);
}

#[test]
fn random_vanishing_case() {
    let params = SuiteParams {
        n: Some(6),
        mode: Some(ModeChoice::Random),
        seeds: 5,
        ..SuiteParams::default()
    };
    let report = run(Suite::Vanish, &params, Some(&golden()));
    assert!(report.passed(), "{}", report.to_json());
}

#[test]
fn tampered_golden_fails() {
    let mut g = golden();
    g.bn.insert(3, "-6*a2".into());
    let params = SuiteParams {
        n: Some(3),
        ..SuiteParams::default()
    };
    assert!(!run(Suite::Bn, &params, Some(&g)).passed());
}
