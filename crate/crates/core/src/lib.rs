//! Exact construction and verification of the q-deformed Tsetlin library.
//!
//! Three Markov chains are built from the right action of the type A Hecke
//! algebra: on permutations, on words with fixed content, and on complete
//! flags of `F_p^n`. For each chain the crate evaluates the closed-form
//! stationary distribution and eigenvalue catalog, and checks them against
//! independent routes (left null spaces, the right Cayley graph of the
//! q-free left regular band, brute-force enumeration).
//!
//! All numerical code is generic over [`Scalar`]; the exact instantiation
//! over arbitrary-precision rationals is exposed through the aliases below.

pub mod combinatorics;
pub mod error;
pub mod exact;
pub mod flags;
pub mod hecke_chains;
pub mod lumping;
pub mod sampling;
pub mod spectra;
pub mod stationary;
pub mod verify;

pub use error::{Error, Result};
pub use exact::{Matrix, Scalar};

/// Arbitrary-precision rational, always in lowest terms.
pub type Rational = num_rational::BigRational;
/// Dense matrix of exact rationals.
pub type ExactMatrix = Matrix<Rational>;
/// Row vector of exact rationals.
pub type ExactVector = Vec<Rational>;

pub type ExactPermRates = hecke_chains::PermRates<Rational>;
pub type ExactWordRates = hecke_chains::WordRates<Rational>;
pub type ExactEigenEntry = spectra::EigenEntry<Rational>;

/// Parses a rational in the canonical `a/b` (or `a`) form.
pub fn parse_rational(s: &str) -> Result<Rational> {
    s.trim()
        .parse::<Rational>()
        .map_err(|e| Error::Parse(format!("{s:?}: {e}")))
}

/// Canonical serialization: `a/b` with `b > 0`, or `a` when `b = 1`.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}
