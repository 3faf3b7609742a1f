use qtsetlin::flags::PrimeField;
use qtsetlin::verify::{run_suite, Suite, VerifyConfig};

#[test]
fn every_suite_passes_at_small_sizes() {
    let config = VerifyConfig { n_max: 3, primes: vec![PrimeField::new(2).unwrap(), PrimeField::new(3).unwrap()], seed: 5 };
    let results = run_suite(Suite::All, &config);
    for suite in Suite::EACH {
        assert!(results.iter().any(|r| r.suite == suite), "{suite} ran no checks");
    }
    let failed: Vec<_> = results.iter().filter(|r| !r.pass).collect();
    assert!(failed.is_empty(), "{failed:#?}");
}

#[test]
fn results_are_deterministic_for_a_seed() {
    let config = VerifyConfig { n_max: 3, primes: vec![PrimeField::new(2).unwrap()], seed: 9 };
    assert_eq!(run_suite(Suite::Word, &config), run_suite(Suite::Word, &config));
}
