use schcalc::verifier::{run_suite, run_suites, Context, SuiteConfig, SUITES};
use schcalc::Error;

fn ctx(config: SuiteConfig) -> Context {
    Context::new(config).unwrap()
}

#[test]
fn lemma_suites_pass_on_defaults() {
    let c = ctx(SuiteConfig::default());
    for name in ["lemma56", "zygmund", "lemma21"] {
        let r = run_suite(&c, name).unwrap();
        let failed: Vec<_> = r.failures().map(|c| (&c.quantity, c.empirical)).collect();
        assert!(r.pass, "{name}: {failed:?}");
    }
}

#[test]
fn every_suite_is_described() {
    for s in SUITES {
        assert!(schcalc::verifier::describe_suite(s).is_some(), "{s}");
    }
    assert!(schcalc::verifier::describe_suite("thm99").is_none());
}

#[test]
fn preconditions_are_reported_as_errors() {
    let c = ctx(SuiteConfig {
        alphas: vec![0.8],
        betas: vec![0.5],
        ..SuiteConfig::default()
    });
    assert!(matches!(run_suite(&c, "thm13"), Err(Error::InvalidArgument(_))));
    let c = ctx(SuiteConfig {
        period: 2.0,
        ..SuiteConfig::default()
    });
    assert!(matches!(run_suite(&c, "thm15"), Err(Error::Unresolvable(_))));
    assert!(matches!(run_suite(&c, "nope"), Err(Error::Config(_))));
    assert!(matches!(run_suites(&c, &["nope".into()]), Err(Error::Config(_))));
}

#[test]
fn concurrent_and_sequential_runs_agree() {
    let config = SuiteConfig {
        grid_n: 64,
        ..SuiteConfig::default()
    };
    let names: Vec<String> = ["spectrum", "radius", "thm12", "lemma56"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let a = run_suites(&ctx(config.clone()), &names).unwrap();
    let c = ctx(config);
    for (r, n) in a.iter().zip(&names) {
        assert_eq!(&r.suite, n);
        assert_eq!(r.to_json().unwrap(), run_suite(&c, n).unwrap().to_json().unwrap());
    }
}

#[test]
fn every_check_carries_the_config_hash() {
    let c = ctx(SuiteConfig {
        grid_n: 64,
        ..SuiteConfig::default()
    });
    let r = run_suite(&c, "thm13").unwrap();
    assert!(!r.checks.is_empty());
    assert!(r
        .checks
        .iter()
        .all(|k| k.config_hash == c.hash() && k.empirical.is_finite()));
}
