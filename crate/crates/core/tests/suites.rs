use padic_hodge::verify::{run_suite, Suite, DEFAULT_SEED};

fn check(suite: Suite, skip: &[&str]) {
    let outcomes = run_suite(suite, DEFAULT_SEED, &[]);
    for o in &outcomes {
        println!("{o}");
    }
    let failed: Vec<_> = outcomes.iter().filter(|o| !o.passed() && !skip.contains(&o.name.as_str())).collect();
    assert!(failed.is_empty(), "failed: {:?}", failed.iter().map(|o| &o.name).collect::<Vec<_>>());
}

#[test]
fn padic_suite() {
    check(Suite::Padic, &[]);
}

#[test]
fn isocrystal_suite() {
    check(Suite::Isocrystal, &[]);
}

#[test]
fn filtration_suite() {
    check(Suite::Filtration, &[]);
}

#[test]
fn orbit_suite() {
    check(Suite::Orbit, &[]);
}

// the decay envelope is reported by the acceptance target
#[test]
fn fourier_suite() {
    check(Suite::Fourier, &["decay-envelope"]);
}
