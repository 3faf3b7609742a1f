//! Seeded sampling of generic rational rates: small random rationals,
//! normalized to sum 1 and resampled until the eigenvalue catalog has
//! pairwise distinct values.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::Composition;
use crate::error::{Error, Result};
use crate::hecke_chains::{PermRates, WordRates};
use crate::spectra::{eigen_catalog_perm, eigen_catalog_word, is_generic};
use crate::Rational;

const ATTEMPTS: usize = 200;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `a / b` with `1 <= a, b <= bound`.
pub fn small_rational(rng: &mut impl Rng, bound: i64) -> Rational {
    Rational::new(BigInt::from(rng.gen_range(1..=bound)), BigInt::from(rng.gen_range(1..=bound)))
}

fn normalized(values: Vec<Rational>) -> Vec<Rational> {
    let total: Rational = values.iter().sum();
    values.into_iter().map(|v| v / &total).collect()
}

/// Positive rates summing to 1 with a generic permutation catalog.
pub fn generic_perm_rates(n: usize, q: &Rational, rng: &mut impl Rng) -> Result<PermRates<Rational>> {
    for _ in 0..ATTEMPTS {
        let x = normalized((0..n).map(|_| small_rational(rng, 12)).collect());
        let rates = PermRates::new(q.clone(), x)?;
        if is_generic(&eigen_catalog_perm(&rates)) {
            return Ok(rates);
        }
    }
    Err(Error::Degenerate(format!("no generic rates found for n = {n}, q = {q}")))
}

/// Positive word rates summing to 1 with a generic word catalog.
pub fn generic_word_rates(m: &Composition, q: &Rational, rng: &mut impl Rng) -> Result<WordRates<Rational>> {
    for _ in 0..ATTEMPTS {
        let xbar = normalized((0..m.len()).map(|_| small_rational(rng, 12)).collect());
        let rates = WordRates::new(q.clone(), xbar, m.clone())?;
        if is_generic(&eigen_catalog_word(&rates)) {
            return Ok(rates);
        }
    }
    Err(Error::Degenerate(format!("no generic rates found for m = {m}, q = {q}")))
}

/// Permutation rates that are compatible with `m`, obtained from generic word rates.
pub fn compatible_perm_rates(m: &Composition, q: &Rational, rng: &mut impl Rng) -> Result<PermRates<Rational>> {
    Ok(generic_word_rates(m, q, rng)?.to_perm_rates())
}

/// Positive rates summing to 1, without a genericity requirement.
pub fn positive_rates(n: usize, q: &Rational, rng: &mut impl Rng) -> Result<PermRates<Rational>> {
    PermRates::new(q.clone(), normalized((0..n).map(|_| small_rational(rng, 12)).collect()))
}
