use mvf_core::checks::{cross_check, round_trips};
use mvf_core::fixtures;
use mvf_core::oracle::{random_fixture_seeded, OracleBudget};

#[test]
fn fixtures_agree_with_oracles() {
    for (name, doc) in fixtures::all() {
        let report = cross_check(doc.field(), 7, OracleBudget::fixtures()).unwrap();
        assert!(report.passed(), "{name}: {:#?}", report.findings);
        assert!(report.checks > 40, "{name}: only {} checks", report.checks);
    }
}

#[test]
fn fixtures_round_trip() {
    for (name, doc) in fixtures::all() {
        let report = round_trips(doc.field(), 7).unwrap();
        assert!(report.passed(), "{name}: {:#?}", report.findings);
    }
}

#[test]
fn random_fields_agree_with_oracles() {
    let mut checks = 0;
    for seed in 0..120u64 {
        let field = random_fixture_seeded(seed, 5, 14);
        let report = cross_check(&field, seed, OracleBudget::default()).unwrap();
        assert!(report.passed(), "seed {seed}: {:#?}", report.findings);
        let trips = round_trips(&field, seed).unwrap();
        assert!(trips.passed(), "seed {seed}: {:#?}", trips.findings);
        checks += report.checks + trips.checks;
    }
    assert!(checks > 120 * 20);
}
