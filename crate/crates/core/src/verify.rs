//! Verification suites shared by the command line and the test targets.
//! Every check compares two independent exact computations.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rand::Rng;

use crate::combinatorics::{derangements, Composition, Permutation};
use crate::error::{Error, Result};
use crate::exact::{ipow, Matrix, Scalar};
use crate::flags::{
    enumerate_flags, flag_count, hecke_generator_coset, rcayley_stationary, transition_matrix_flags,
    transition_matrix_flags_hecke, PartialFlag, PrimeField,
};
use crate::hecke_chains::{hecke_generator_perm, hecke_generator_word, transition_matrix_perm, transition_matrix_word, PermRates};
use crate::lumping::{check_commuting, proj_flags_to_perms, proj_perms_to_words, push_forward, Diagram};
use crate::sampling::{compatible_perm_rates, generic_perm_rates, generic_word_rates, positive_rates, seeded, small_rational};
use crate::spectra::{
    eigen_catalog_flags, eigen_catalog_perm, eigen_catalog_word, verify_annihilation, verify_multiplicities, EigenLabel,
};
use crate::stationary::{
    perm_formula_factors, stationary_flags_formula, stationary_oracle, stationary_perm_formula, stationary_word_formula,
    word_formula_factors,
};
use crate::{parse_rational, Rational};

/// Largest flag space the suites build.
pub const MAX_FLAG_STATES: u128 = 400;
/// Largest flag space on which nullities are computed.
pub const MAX_FLAG_SPECTRUM_STATES: u128 = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Perm,
    Word,
    Flag,
    Lumping,
    Hecke,
    Q1Reduction,
    Properties,
}

impl Suite {
    pub const EACH: [Suite; 7] =
        [Suite::Perm, Suite::Word, Suite::Flag, Suite::Lumping, Suite::Hecke, Suite::Q1Reduction, Suite::Properties];
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "perm" => Suite::Perm,
            "word" => Suite::Word,
            "flag" => Suite::Flag,
            "lumping" => Suite::Lumping,
            "hecke" => Suite::Hecke,
            "q1-reduction" => Suite::Q1Reduction,
            "properties" => Suite::Properties,
            other => return Err(Error::Parse(format!("unknown suite {other:?}"))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::All => "all",
            Suite::Perm => "perm",
            Suite::Word => "word",
            Suite::Flag => "flag",
            Suite::Lumping => "lumping",
            Suite::Hecke => "hecke",
            Suite::Q1Reduction => "q1-reduction",
            Suite::Properties => "properties",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub n_max: usize,
    pub primes: Vec<PrimeField>,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            n_max: 3,
            primes: vec![PrimeField::new(2).expect("prime"), PrimeField::new(3).expect("prime")],
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub suite: Suite,
    pub name: String,
    pub pass: bool,
    pub detail: Option<String>,
}

struct Recorder {
    suite: Suite,
    results: Vec<CheckResult>,
}

impl Recorder {
    fn check(&mut self, name: impl Into<String>, f: impl FnOnce() -> Result<bool>) {
        let (pass, detail) = match f() {
            Ok(pass) => (pass, None),
            Err(e) => (false, Some(e.to_string())),
        };
        self.results.push(CheckResult { suite: self.suite, name: name.into(), pass, detail });
    }
}

/// Runs a suite (or all of them) and returns one result per check.
pub fn run_suite(suite: Suite, config: &VerifyConfig) -> Vec<CheckResult> {
    if suite == Suite::All {
        return Suite::EACH.iter().flat_map(|s| run_suite(*s, config)).collect();
    }
    let mut rec = Recorder { suite, results: Vec::new() };
    let mut rng = seeded(config.seed);
    match suite {
        Suite::Perm => perm_suite(&mut rec, config, &mut rng),
        Suite::Word => word_suite(&mut rec, config, &mut rng),
        Suite::Flag => flag_suite(&mut rec, config, &mut rng),
        Suite::Lumping => lumping_suite(&mut rec, config, &mut rng),
        Suite::Hecke => hecke_suite(&mut rec, config),
        Suite::Q1Reduction => q1_suite(&mut rec, config, &mut rng),
        Suite::Properties => property_suite(&mut rec, config, &mut rng),
        Suite::All => unreachable!(),
    }
    rec.results
}

fn q_samples() -> Vec<Rational> {
    ["2", "3", "5/2"].iter().map(|s| parse_rational(s).expect("literal")).collect()
}

/// All compositions of `n`.
pub fn compositions(n: usize) -> Vec<Composition> {
    if n == 0 {
        return vec![];
    }
    (0u64..1 << (n - 1))
        .map(|mask| {
            let mut parts = vec![1];
            for i in 0..n - 1 {
                if mask >> i & 1 == 1 {
                    parts.push(1);
                } else {
                    *parts.last_mut().expect("nonempty") += 1;
                }
            }
            Composition::new(parts).expect("positive parts")
        })
        .collect()
}

fn perm_suite(rec: &mut Recorder, config: &VerifyConfig, rng: &mut impl Rng) {
    for n in 1..=config.n_max.min(5) {
        for q in q_samples() {
            let Ok(x) = generic_perm_rates(n, &q, rng) else {
                rec.check(format!("perm n={n} q={q} generic rates"), || Ok(false));
                continue;
            };
            let tag = format!("perm n={n} q={q}");
            rec.check(format!("{tag} formula is a left eigenvector summing to 1"), || {
                let t = transition_matrix_perm(&x)?;
                let psi = stationary_perm_formula(&x)?;
                Ok(psi.is_left_eigenvector(&t, &x.total())? && psi.sum().is_one())
            });
            rec.check(format!("{tag} formula equals null-space oracle"), || {
                let t = transition_matrix_perm(&x)?;
                Ok(stationary_oracle(&t, &x.total())? == stationary_perm_formula(&x)?)
            });
            if n <= 4 {
                rec.check(format!("{tag} nullities equal derangement counts"), || {
                    let t = transition_matrix_perm(&x)?;
                    Ok(verify_multiplicities(&t, &eigen_catalog_perm(&x)).pass())
                });
                rec.check(format!("{tag} annihilation product vanishes"), || {
                    let t = transition_matrix_perm(&x)?;
                    Ok(verify_annihilation(&t, &eigen_catalog_perm(&x)))
                });
            }
        }
        rec.check(format!("perm n={n} q=1/2 formula is a left eigenvector"), || {
            let x = positive_rates(n, &parse_rational("1/2")?, rng)?;
            let psi = stationary_perm_formula(&x)?;
            psi.is_left_eigenvector(&transition_matrix_perm(&x)?, &x.total())
        });
    }
}

fn word_compositions(n_max: usize) -> Vec<Composition> {
    let mut out: Vec<Composition> = (1..=n_max.min(4)).flat_map(compositions).collect();
    if n_max >= 6 {
        out.push(Composition::new(vec![3, 3]).expect("positive parts"));
    }
    out
}

fn word_suite(rec: &mut Recorder, config: &VerifyConfig, rng: &mut impl Rng) {
    for m in word_compositions(config.n_max) {
        let q = q_samples()[rng.gen_range(0..3)].clone();
        let tag = format!("word m={m} q={q}");
        let x = match generic_word_rates(&m, &q, rng) {
            Ok(x) => x,
            Err(e) => {
                rec.check(format!("{tag} generic rates"), || Err(e));
                continue;
            }
        };
        rec.check(format!("{tag} formula equals null-space oracle"), || {
            let t = transition_matrix_word(&x)?;
            let psi = stationary_word_formula(&x)?;
            Ok(psi.is_left_eigenvector(&t, &x.total())? && stationary_oracle(&t, &x.total())? == psi)
        });
        rec.check(format!("{tag} nullities equal poset derangement counts"), || {
            let t = transition_matrix_word(&x)?;
            let cat = eigen_catalog_word(&x);
            Ok(verify_multiplicities(&t, &cat).pass() && verify_annihilation(&t, &cat))
        });
        rec.check(format!("{tag} word catalog lies in permutation catalog"), || {
            Ok(crate::spectra::word_catalog_in_perm_catalog(&x))
        });
    }
}

fn flag_sizes(config: &VerifyConfig) -> Vec<(usize, PrimeField)> {
    let mut out = Vec::new();
    for &field in &config.primes {
        for n in 1..=config.n_max {
            if flag_count(n, field) <= MAX_FLAG_STATES {
                out.push((n, field));
            }
        }
    }
    out
}

fn flag_suite(rec: &mut Recorder, config: &VerifyConfig, rng: &mut impl Rng) {
    for (n, field) in flag_sizes(config) {
        let tag = format!("flag n={n} p={}", field.p());
        let x = match generic_perm_rates(n, &field.q(), rng) {
            Ok(x) => x,
            Err(e) => {
                rec.check(format!("{tag} generic rates"), || Err(e));
                continue;
            }
        };
        rec.check(format!("{tag} line insertion equals Hecke composition"), || {
            Ok(transition_matrix_flags(&x, field)? == transition_matrix_flags_hecke(&x, field)?)
        });
        rec.check(format!("{tag} formula equals null-space oracle"), || {
            let t = transition_matrix_flags(&x, field)?;
            Ok(stationary_oracle(&t, &x.total())? == stationary_flags_formula(&x, field)?)
        });
        rec.check(format!("{tag} formula equals Cayley-graph paths"), || {
            let psi = stationary_flags_formula(&x, field)?;
            for (flag, v) in psi.iter() {
                if rcayley_stationary(&x, flag)? != *v {
                    return Ok(false);
                }
            }
            Ok(true)
        });
        if flag_count(n, field) <= MAX_FLAG_SPECTRUM_STATES {
            rec.check(format!("{tag} nullities equal predicted multiplicities"), || {
                let t = transition_matrix_flags(&x, field)?;
                let cat = eigen_catalog_flags(&x, field)?;
                Ok(verify_multiplicities(&t, &cat).pass() && verify_annihilation(&t, &cat))
            });
        }
    }
}

fn lumping_suite(rec: &mut Recorder, config: &VerifyConfig, rng: &mut impl Rng) {
    for (n, field) in flag_sizes(config) {
        let tag = format!("lumping n={n} p={}", field.p());
        let x = match generic_perm_rates(n, &field.q(), rng) {
            Ok(x) => x,
            Err(e) => {
                rec.check(format!("{tag} generic rates"), || Err(e));
                continue;
            }
        };
        for d in [Diagram::FlagsPermsProjection(field), Diagram::FlagsPermsInclusion(field)] {
            rec.check(format!("{tag} {d} commutes"), || check_commuting(&d, &x));
        }
        rec.check(format!("{tag} flag stationary vector lumps to permutations"), || {
            let flags = stationary_flags_formula(&x, field)?;
            let perms = stationary_perm_formula(&x)?;
            let coset_ok = perms.iter().all(|(pi, v)| {
                let f = crate::stationary::flag_formula_factors(pi, &x).map(|f| f.value());
                f.is_ok_and(|f| *v == ipow(&field.q::<Rational>(), crate::combinatorics::coinv(pi.as_slice()) as i64) * f)
            });
            Ok(coset_ok && push_forward(&flags, &proj_flags_to_perms(n, field))? == perms)
        });
    }
    for m in (2..=config.n_max.min(4)).flat_map(compositions) {
        let q = q_samples()[rng.gen_range(0..3)].clone();
        let tag = format!("lumping m={m} q={q}");
        let x = match compatible_perm_rates(&m, &q, rng) {
            Ok(x) => x,
            Err(e) => {
                rec.check(format!("{tag} compatible rates"), || Err(e));
                continue;
            }
        };
        for d in [Diagram::PermsWordsProjection(m.clone()), Diagram::PermsWordsInclusion(m.clone())] {
            rec.check(format!("{tag} {d} commutes"), || check_commuting(&d, &x));
        }
        rec.check(format!("{tag} permutation stationary vector lumps to words"), || {
            let w = x.to_word_rates(&m)?;
            let perms = stationary_perm_formula(&x)?;
            Ok(push_forward(&perms, &proj_perms_to_words(&m))? == stationary_word_formula(&w)?)
        });
    }
}

/// Quadratic, braid and far-commutation relations for generators `T_1..T_{n-1}`.
pub fn hecke_relations_hold<T: Scalar>(generators: &[Matrix<T>], q: &T) -> Result<bool> {
    let Some(first) = generators.first() else {
        return Ok(true);
    };
    let id = Matrix::identity(first.rows());
    for t in generators {
        if !t.add(&id)?.mul(&t.shift(q))?.is_zero() {
            return Ok(false);
        }
    }
    for i in 0..generators.len() {
        for j in i + 1..generators.len() {
            let (a, b) = (&generators[i], &generators[j]);
            let holds = if j == i + 1 {
                a.mul(b)?.mul(a)? == b.mul(a)?.mul(b)?
            } else {
                a.mul(b)? == b.mul(a)?
            };
            if !holds {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn hecke_suite(rec: &mut Recorder, config: &VerifyConfig) {
    let n_max = config.n_max.min(4);
    for n in 2..=n_max {
        for q in q_samples() {
            rec.check(format!("hecke relations on permutations n={n} q={q}"), || {
                let gens = (1..n).map(|i| hecke_generator_perm(i, n, &q).map(|g| g.into_matrix())).collect::<Result<Vec<_>>>()?;
                hecke_relations_hold(&gens, &q)
            });
        }
        for m in compositions(n) {
            let q = Rational::from_integer(3.into());
            rec.check(format!("hecke relations on words m={m} q={q}"), || {
                let gens = (1..n).map(|i| hecke_generator_word(i, &m, &q).map(|g| g.into_matrix())).collect::<Result<Vec<_>>>()?;
                hecke_relations_hold(&gens, &q)
            });
        }
    }
    for (n, field) in flag_sizes(config) {
        if n < 2 || n > n_max {
            continue;
        }
        rec.check(format!("hecke relations on flags n={n} p={}", field.p()), || {
            let gens = (1..n)
                .map(|i| hecke_generator_coset::<Rational>(i, n, field).map(|g| g.into_matrix()))
                .collect::<Result<Vec<_>>>()?;
            hecke_relations_hold(&gens, &field.q())
        });
    }
}

fn q1_suite(rec: &mut Recorder, config: &VerifyConfig, rng: &mut impl Rng) {
    let one = Rational::one();
    for n in 1..=config.n_max.min(5) {
        let x = match generic_perm_rates(n, &one, rng) {
            Ok(x) => x,
            Err(e) => {
                rec.check(format!("q=1 n={n} generic rates"), || Err(e));
                continue;
            }
        };
        rec.check(format!("q=1 n={n} formula equals classical product"), || {
            let psi = stationary_perm_formula(&x)?;
            let ok = psi.iter().all(|(pi, v)| *v == classical_stationary(pi, &x));
            Ok(ok)
        });
        rec.check(format!("q=1 n={n} catalog is subset sums with derangement counts"), || {
            Ok(eigen_catalog_perm(&x).iter().all(|e| {
                let EigenLabel::Subset(s) = &e.label else { return false };
                let sum = s.iter().fold(Rational::zero(), |acc, &i| acc + x.x_at(i));
                e.value == sum && e.multiplicity == derangements(n - s.len())
            }))
        });
    }
}

/// `prod_i x_{pi_i} / (x_{pi_i} + ... + x_{pi_n})`, the move-to-front stationary law.
pub fn classical_stationary<T: Scalar>(pi: &Permutation, rates: &PermRates<T>) -> T {
    let s = pi.as_slice();
    (0..s.len()).fold(T::one(), |acc, i| {
        let tail = s[i..].iter().fold(T::zero(), |a, &j| a + rates.x_at(j));
        acc * rates.x_at(s[i]) / tail
    })
}

fn property_suite(rec: &mut Recorder, config: &VerifyConfig, rng: &mut impl Rng) {
    let n_max = config.n_max.clamp(2, 4);
    let mut configs_ok = 0;
    let mut configs = 0;
    let mut failures = Vec::new();
    for k in 0..50 {
        configs += 1;
        let n = rng.gen_range(1..=n_max);
        let ok: Result<bool> = (|| {
            let ok = match k % 3 {
                0 => {
                    let q = small_rational(rng, 5);
                    let x = PermRates::new(q, (0..n).map(|_| small_rational(rng, 9)).collect())?;
                    let t = transition_matrix_perm(&x)?;
                    t.matrix().row_sums().iter().all(|s| *s == x.total())
                        && eigen_catalog_perm(&x).iter().map(|e| e.multiplicity).sum::<u128>() == t.dim() as u128
                }
                1 => {
                    let comps = compositions(n);
                    let m = comps[rng.gen_range(0..comps.len())].clone();
                    let q = small_rational(rng, 5);
                    let xbar = (0..m.len()).map(|_| small_rational(rng, 9)).collect();
                    let x = crate::hecke_chains::WordRates::new(q, xbar, m)?;
                    let t = transition_matrix_word(&x)?;
                    t.matrix().row_sums().iter().all(|s| *s == x.total())
                        && eigen_catalog_word(&x).iter().map(|e| e.multiplicity).sum::<u128>() == t.dim() as u128
                }
                _ => {
                    let field = config.primes[rng.gen_range(0..config.primes.len())];
                    let n = (1..=n.min(3)).rev().find(|&n| flag_count(n, field) <= MAX_FLAG_STATES).unwrap_or(1);
                    let x = PermRates::new(field.q(), (0..n).map(|_| small_rational(rng, 9)).collect())?;
                    let t = transition_matrix_flags(&x, field)?;
                    t.matrix().row_sums().iter().all(|s| *s == x.total())
                        && t.matrix().to_rows().iter().flatten().all(|v| *v >= Rational::zero())
                        && eigen_catalog_flags(&x, field)?.iter().map(|e| e.multiplicity).sum::<u128>() == t.dim() as u128
                }
            };
            Ok(ok)
        })();
        match ok {
            Ok(true) => configs_ok += 1,
            Ok(false) => failures.push(format!("config {k}")),
            Err(e) => failures.push(format!("config {k}: {e}")),
        }
    }
    rec.results.push(CheckResult {
        suite: Suite::Properties,
        name: format!("row sums and catalog totals on {configs} random configurations"),
        pass: configs_ok == configs,
        detail: (!failures.is_empty()).then(|| failures.join("; ")),
    });

    rec.check("stationary factors positive for q >= 1 and positive rates", || {
        for _ in 0..10 {
            let q = Rational::one() + small_rational(rng, 4);
            let n = rng.gen_range(1..=n_max);
            let x = PermRates::new(q.clone(), (0..n).map(|_| small_rational(rng, 9)).collect())?;
            for pi in Permutation::all(n) {
                if !perm_formula_factors(&pi, &x)?.all_factors_positive() {
                    return Ok(false);
                }
            }
            let comps = compositions(n);
            let m = comps[rng.gen_range(0..comps.len())].clone();
            let w = crate::hecke_chains::WordRates::new(q, (0..m.len()).map(|_| small_rational(rng, 9)).collect(), m.clone())?;
            for word in m.words() {
                if !word_formula_factors(&word, &w)?.all_factors_positive() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    });

    rec.check("left regular band: idempotence and aba = ab on 100 random pairs", || {
        for _ in 0..100 {
            let field = config.primes[rng.gen_range(0..config.primes.len())];
            let n = rng.gen_range(1..=3);
            let sample = |rng: &mut dyn rand::RngCore| {
                let k = rng.gen_range(0..=n + 1);
                let vectors: Vec<Vec<u32>> = (0..k).map(|_| (0..n).map(|_| rng.gen_range(0..field.p())).collect()).collect();
                PartialFlag::from_vectors(n, &vectors, field)
            };
            let a = sample(rng)?;
            let b = sample(rng)?;
            if a.product(&a) != a || a.product(&b).product(&a) != a.product(&b) {
                return Ok(false);
            }
        }
        Ok(true)
    });

    rec.check("flag catalog multiplicities sum to the number of flags", || {
        for &field in &config.primes {
            for n in 1..=n_max {
                let x = PermRates::new(field.q::<Rational>(), vec![Rational::one(); n])?;
                let total: u128 = eigen_catalog_flags(&x, field)?.iter().map(|e| e.multiplicity).sum();
                if total != flag_count(n, field) || enumerate_flags(n.min(3), field).len() as u128 != flag_count(n.min(3), field) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    });
}

/// Whether every check passed.
pub fn all_pass(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compositions_of_four() {
        let all: Vec<String> = compositions(4).iter().map(ToString::to_string).collect();
        assert_eq!(all.len(), 8);
        assert!(all.contains(&"(1,3)".to_string()));
        assert!(all.contains(&"(4)".to_string()));
    }

    #[test]
    fn suite_names_roundtrip() {
        for s in Suite::EACH.iter().chain([Suite::All].iter()) {
            assert_eq!(s.to_string().parse::<Suite>().unwrap(), *s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn small_suites_pass() {
        let config = VerifyConfig { n_max: 3, primes: vec![PrimeField::new(2).unwrap()], seed: 11 };
        for suite in [Suite::Hecke, Suite::Q1Reduction, Suite::Perm] {
            let results = run_suite(suite, &config);
            assert!(!results.is_empty());
            let failed: Vec<_> = results.iter().filter(|r| !r.pass).collect();
            assert!(failed.is_empty(), "{failed:?}");
        }
    }
}
