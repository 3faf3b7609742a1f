//! Projections and inclusions between flags, permutations and words, and
//! the commuting diagrams they satisfy with the transition operators.

use std::hash::Hash;

use crate::combinatorics::{coinv, destandardize, inv, standardize, young_subgroup, Composition, Permutation, Word};
use crate::error::{Error, Result};
use crate::exact::{ipow, Matrix, Scalar};
use crate::flags::{enumerate_flags, transition_matrix_flags, FlagRep, PrimeField};
use crate::hecke_chains::{index_states, transition_matrix_perm, transition_matrix_word, PermRates, WordRates};
use crate::stationary::StationaryVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntertwinerKind {
    Projection,
    Inclusion,
}

/// Linear map between two state spaces; row = source state.
#[derive(Clone, Debug, PartialEq)]
pub struct IntertwinerMatrix<T, S, U> {
    pub matrix: Matrix<T>,
    pub source: Vec<S>,
    pub target: Vec<U>,
    pub kind: IntertwinerKind,
}

impl<T: Scalar, S, U: Clone + Eq + Hash> IntertwinerMatrix<T, S, U> {
    fn build(source: Vec<S>, target: Vec<U>, kind: IntertwinerKind, row: impl Fn(&S) -> Vec<(U, T)>) -> Self {
        let index = index_states(&target);
        let mut matrix = Matrix::<T>::zeros(source.len(), target.len());
        for (r, s) in source.iter().enumerate() {
            for (u, v) in row(s) {
                let c = index[&u];
                matrix[(r, c)] = matrix[(r, c)].clone() + v;
            }
        }
        IntertwinerMatrix { matrix, source, target, kind }
    }
}

/// `gB -> pi` for `gB` in `[pi]`.
pub fn proj_flags_to_perms<T: Scalar>(n: usize, field: PrimeField) -> IntertwinerMatrix<T, FlagRep, Permutation> {
    IntertwinerMatrix::build(enumerate_flags(n, field), Permutation::all(n), IntertwinerKind::Projection, |f| vec![(f.coset_perm(), T::one())])
}

/// `pi -> q^{inv(pi)} sum_{gB in [pi]} gB`.
pub fn incl_perms_to_flags<T: Scalar>(n: usize, field: PrimeField) -> IntertwinerMatrix<T, Permutation, FlagRep> {
    let flags = enumerate_flags(n, field);
    let q: T = field.q();
    IntertwinerMatrix::build(Permutation::all(n), flags.clone(), IntertwinerKind::Inclusion, |pi| {
        let c = ipow(&q, inv(pi.as_slice()) as i64);
        flags.iter().filter(|f| f.coset_perm() == *pi).map(|f| (f.clone(), c.clone())).collect()
    })
}

/// `sigma -> destd_m(sigma)`.
pub fn proj_perms_to_words<T: Scalar>(m: &Composition) -> IntertwinerMatrix<T, Permutation, Word> {
    IntertwinerMatrix::build(Permutation::all(m.total()), m.words(), IntertwinerKind::Projection, |pi| {
        vec![(destandardize(pi, m).expect("sizes agree"), T::one())]
    })
}

/// Inversions of a Young subgroup element, counted block by block.
pub fn inv_m(tau: &Permutation, m: &Composition) -> usize {
    (1..=m.len()).map(|j| inv(&tau.as_slice()[m.partial_sum(j - 1)..m.partial_sum(j)])).sum()
}

/// `w -> sum_{tau in S_m} q^{-inv_m(tau)} tau . std(w)`, with `tau` acting on values.
pub fn incl_words_to_perms<T: Scalar>(m: &Composition, q: &T) -> IntertwinerMatrix<T, Word, Permutation> {
    let group = young_subgroup(m);
    IntertwinerMatrix::build(m.words(), Permutation::all(m.total()), IntertwinerKind::Inclusion, |w| {
        let s = standardize(w, m).expect("word has content m");
        group.iter().map(|tau| (tau.compose(&s), ipow(q, -(inv_m(tau, m) as i64)))).collect()
    })
}

pub fn is_m_compatible<T: Scalar>(rates: &PermRates<T>, m: &Composition) -> bool {
    rates.is_compatible(m)
}

pub fn map_rates_perm_to_word<T: Scalar>(rates: &PermRates<T>, m: &Composition) -> Result<WordRates<T>> {
    rates.to_word_rates(m)
}

pub fn map_rates_word_to_perm<T: Scalar>(rates: &WordRates<T>) -> PermRates<T> {
    rates.to_perm_rates()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagram {
    FlagsPermsProjection(PrimeField),
    FlagsPermsInclusion(PrimeField),
    PermsWordsProjection(Composition),
    PermsWordsInclusion(Composition),
}

impl std::fmt::Display for Diagram {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Diagram::FlagsPermsProjection(k) => write!(f, "flags->perms projection (p={})", k.p()),
            Diagram::FlagsPermsInclusion(k) => write!(f, "perms->flags inclusion (p={})", k.p()),
            Diagram::PermsWordsProjection(m) => write!(f, "perms->words projection (m={m})"),
            Diagram::PermsWordsInclusion(m) => write!(f, "words->perms inclusion (m={m})"),
        }
    }
}

/// Checks one intertwining identity exactly:
/// `T_flags P = P T_perm`, `J T_flags = T_perm J`,
/// `T_perm P_w = P_w T_word`, `J_w T_perm = T_word J_w`.
pub fn check_commuting<T: Scalar>(diagram: &Diagram, rates: &PermRates<T>) -> Result<bool> {
    let n = rates.n();
    match diagram {
        Diagram::FlagsPermsProjection(field) => {
            let tf = transition_matrix_flags(rates, *field)?.into_matrix();
            let tp = transition_matrix_perm(rates)?.into_matrix();
            let p = proj_flags_to_perms::<T>(n, *field).matrix;
            Ok(tf.mul(&p)? == p.mul(&tp)?)
        }
        Diagram::FlagsPermsInclusion(field) => {
            let tf = transition_matrix_flags(rates, *field)?.into_matrix();
            let tp = transition_matrix_perm(rates)?.into_matrix();
            let j = incl_perms_to_flags::<T>(n, *field).matrix;
            Ok(j.mul(&tf)? == tp.mul(&j)?)
        }
        Diagram::PermsWordsProjection(m) => {
            let wr = rates.to_word_rates(m)?;
            let tp = transition_matrix_perm(rates)?.into_matrix();
            let tw = transition_matrix_word(&wr)?.into_matrix();
            let p = proj_perms_to_words::<T>(m).matrix;
            Ok(tp.mul(&p)? == p.mul(&tw)?)
        }
        Diagram::PermsWordsInclusion(m) => {
            let wr = rates.to_word_rates(m)?;
            let tp = transition_matrix_perm(rates)?.into_matrix();
            let tw = transition_matrix_word(&wr)?.into_matrix();
            let j = incl_words_to_perms(m, rates.q()).matrix;
            Ok(j.mul(&tp)? == tw.mul(&j)?)
        }
    }
}

/// Pushes a stationary vector through a projection: masses add over fibres.
pub fn push_forward<T: Scalar, S: Clone + Eq + Hash + std::fmt::Display, U: Clone + Eq + Hash + std::fmt::Display>(
    v: &StationaryVector<T, S>,
    proj: &IntertwinerMatrix<T, S, U>,
) -> Result<StationaryVector<T, U>> {
    if proj.kind != IntertwinerKind::Projection {
        return Err(Error::Degenerate("push-forward needs a projection".into()));
    }
    if proj.source.len() != v.states().len() || proj.source.iter().zip(v.states()).any(|(a, b)| a != b) {
        return Err(Error::DimensionMismatch("vector and projection use different states".into()));
    }
    StationaryVector::new(proj.target.clone(), proj.matrix.left_apply(v.values())?)
}

/// `q^{coinv(pi)}`, the size of the double coset `[pi]` at `q = p`.
pub fn coset_size<T: Scalar>(pi: &Permutation, q: &T) -> T {
    ipow(q, coinv(pi.as_slice()) as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::q_factorial;
    use crate::stationary::{stationary_flags_formula, stationary_perm_formula, stationary_word_formula};
    use crate::{parse_rational, Rational};

    fn r(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn projection_columns_count_cosets() {
        let p = proj_flags_to_perms::<Rational>(3, f(2));
        for (c, pi) in p.target.iter().enumerate() {
            let ones = (0..p.matrix.rows()).filter(|&i| p.matrix[(i, c)] == r("1")).count();
            assert_eq!(ones, 1 << coinv(pi.as_slice()));
        }
        let p2 = proj_flags_to_perms::<Rational>(2, f(2));
        let counts: Vec<usize> = (0..2).map(|c| (0..3).filter(|&i| p2.matrix[(i, c)] == r("1")).count()).collect();
        assert_eq!(counts, vec![2, 1]);
    }

    #[test]
    fn inclusion_rows() {
        let j = incl_perms_to_flags::<Rational>(3, f(2));
        let row = |s: &str| j.source.iter().position(|p| p.to_string() == s).unwrap();
        let nonzero = |i: usize| j.matrix.row(i).iter().filter(|v| **v != Rational::from_integer(0.into())).cloned().collect::<Vec<_>>();
        assert_eq!(nonzero(row("213")), vec![r("2"); 4]);
        assert_eq!(nonzero(row("321")), vec![r("8")]);
        assert_eq!(nonzero(row("123")), vec![r("1"); 8]);
    }

    #[test]
    fn word_inclusion_example() {
        let m = Composition::new(vec![3, 1]).unwrap();
        let q = r("5");
        let j = incl_words_to_perms(&m, &q);
        let w: Word = "1211".parse().unwrap();
        let row = j.source.iter().position(|x| *x == w).unwrap();
        let expected = [("1423", "1"), ("2413", "1/5"), ("1432", "1/5"), ("2431", "1/25"), ("3412", "1/25"), ("3421", "1/125")];
        let nonzero: Vec<(String, Rational)> = j
            .target
            .iter()
            .zip(j.matrix.row(row))
            .filter(|(_, v)| **v != r("0"))
            .map(|(p, v)| (p.to_string(), v.clone()))
            .collect();
        assert_eq!(nonzero.len(), 6);
        for (p, v) in expected {
            assert!(nonzero.contains(&(p.to_string(), r(v))), "{p}");
        }
        let qinv = r("1") / q;
        let row_sum = j.matrix.row_sums()[row].clone();
        assert_eq!(row_sum, q_factorial(3, &qinv));
    }

    #[test]
    fn trivial_composition_gives_identities() {
        let m = Composition::new(vec![1, 1, 1]).unwrap();
        assert_eq!(proj_perms_to_words::<Rational>(&m).matrix, Matrix::identity(6));
        assert_eq!(incl_words_to_perms(&m, &r("3")).matrix, Matrix::identity(6));
    }

    #[test]
    fn compatibility_examples() {
        let m = Composition::new(vec![2, 1]).unwrap();
        let x = PermRates::new(r("2"), vec![r("1/2"), r("1/4"), r("1/4")]).unwrap();
        assert!(is_m_compatible(&x, &m));
        let x3 = PermRates::new(r("3"), vec![r("1/2"), r("1/4"), r("1/4")]).unwrap();
        assert!(!is_m_compatible(&x3, &m));
        assert!(map_rates_perm_to_word(&x3, &m).is_err());
        assert!(is_m_compatible(&x3, &Composition::new(vec![1, 1, 1]).unwrap()));
        let w = map_rates_perm_to_word(&x, &m).unwrap();
        assert_eq!(w.total(), r("1"));
        for j in 1..=2 {
            assert_eq!(w.ybar(j), x.y(m.partial_sum(j)));
            for i in m.partial_sum(j - 1) + 1..=m.partial_sum(j) {
                assert_eq!(x.y(i), w.ybar(j));
            }
        }
        assert_eq!(map_rates_word_to_perm(&w), x);
    }

    #[test]
    fn diagrams_commute() {
        for p in [2, 3] {
            let x = PermRates::new(f(p).q(), vec![r("2/9"), r("4/9"), r("1/3")]).unwrap();
            assert!(check_commuting(&Diagram::FlagsPermsProjection(f(p)), &x).unwrap());
            assert!(check_commuting(&Diagram::FlagsPermsInclusion(f(p)), &x).unwrap());
        }
        let m = Composition::new(vec![2, 2]).unwrap();
        let w = WordRates::new(r("2"), vec![r("1/3"), r("2/3")], m.clone()).unwrap();
        let x = w.to_perm_rates();
        assert!(check_commuting(&Diagram::PermsWordsProjection(m.clone()), &x).unwrap());
        assert!(check_commuting(&Diagram::PermsWordsInclusion(m), &x).unwrap());
    }

    #[test]
    fn stationary_vectors_lump() {
        let x = PermRates::new(r("3"), vec![r("1/6"), r("1/2"), r("1/3")]).unwrap();
        let flags = stationary_flags_formula(&x, f(3)).unwrap();
        let perms = stationary_perm_formula(&x).unwrap();
        assert_eq!(push_forward(&flags, &proj_flags_to_perms(3, f(3))).unwrap(), perms);

        let m = Composition::new(vec![1, 2]).unwrap();
        let w = WordRates::new(r("3"), vec![r("1/4"), r("3/4")], m.clone()).unwrap();
        let perms = stationary_perm_formula(&w.to_perm_rates()).unwrap();
        let words = stationary_word_formula(&w).unwrap();
        assert_eq!(push_forward(&perms, &proj_perms_to_words(&m)).unwrap(), words);
    }
}
