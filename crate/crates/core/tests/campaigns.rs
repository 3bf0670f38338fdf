use envrad::campaign::{run_suite, Suite};
use envrad::Engine;

#[test]
fn every_suite_passes_a_short_run() {
    let engine = Engine::default();
    for suite in Suite::ALL {
        let start = std::time::Instant::now();
        let r = run_suite(suite, &engine, 11, 24);
        eprintln!("{suite}: {}/{} in {:?}", r.passed, r.cases, start.elapsed());
        assert!(r.ok(), "{}", serde_json::to_string_pretty(&r.to_json()).unwrap());
    }
}

#[test]
fn reports_are_deterministic() {
    let engine = Engine::default();
    let a = run_suite(Suite::IsoAgamma, &engine, 5, 16).to_json();
    let b = run_suite(Suite::IsoAgamma, &engine, 5, 16).to_json();
    assert_eq!(a, b);
}

#[test]
fn zero_cases_is_vacuous() {
    let r = run_suite(Suite::Naturality, &Engine::default(), 1, 0);
    assert!(r.ok());
    assert_eq!(r.to_json()["vacuous"], true);
}

#[test]
fn suite_names_parse() {
    for s in Suite::ALL {
        assert_eq!(s.name().parse::<Suite>().unwrap(), s);
    }
    assert!("nonsense".parse::<Suite>().is_err());
}
