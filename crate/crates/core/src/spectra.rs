//! Eigenvalue catalogs with predicted multiplicities, and their exact
//! verification by nullity and annihilation.

use std::fmt;
use std::hash::Hash;

use crate::combinatorics::{poset_derangements, q_derangement_int, q_int};
use crate::error::{Error, Result};
use crate::exact::{ipow, rank_nullity, Matrix, Scalar};
use crate::flags::PrimeField;
use crate::hecke_chains::{LinearOperator, PermRates, WordRates};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EigenLabel {
    /// Subset `S = {i_1 > ... > i_k}` of `[n]`, stored decreasingly.
    Subset(Vec<usize>),
    /// Upper set of the chain poset, given by the counts `a_i`.
    UpperSet(Vec<usize>),
}

impl fmt::Display for EigenLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        match self {
            EigenLabel::Subset(s) => write!(f, "{{{}}}", join(s)),
            EigenLabel::UpperSet(a) => write!(f, "({})", join(a)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenEntry<T> {
    pub label: EigenLabel,
    pub value: T,
    pub multiplicity: u128,
}

/// Subsets of `[n]` as decreasing sequences, ordered by their bitmask.
fn subsets(n: usize) -> Vec<Vec<usize>> {
    (0u64..1 << n).map(|mask| (1..=n).rev().filter(|i| mask >> (i - 1) & 1 == 1).collect()).collect()
}

/// `lambda_S = sum_j x_{i_j} / q^{n - i_j - j + 1}` for decreasing `S`.
pub fn subset_eigenvalue<T: Scalar>(s: &[usize], rates: &PermRates<T>) -> T {
    let n = rates.n() as i64;
    s.iter().zip(1..).fold(T::zero(), |acc, (&i, j): (&usize, i64)| acc + rates.x_at(i) / ipow(rates.q(), n - i as i64 - j + 1))
}

/// `lambda_a = sum_j xbar_j q^{a_{j+1} + ... + a_l} [a_j]_q / (q^{n - n_j} [m_j]_q)`.
pub fn upper_set_eigenvalue<T: Scalar>(a: &[usize], rates: &WordRates<T>) -> T {
    let m = rates.composition();
    let n = m.total() as i64;
    let q = rates.q();
    (1..=m.len()).fold(T::zero(), |acc, j| {
        let above: usize = a[j..].iter().sum();
        let num = rates.xbar_at(j) * ipow(q, above as i64) * q_int(a[j - 1], q);
        let den = ipow(q, n - m.partial_sum(j) as i64) * q_int(m.part(j), q);
        acc + num / den
    })
}

/// One entry per subset `S`, multiplicity `d_{n-|S|}`.
pub fn eigen_catalog_perm<T: Scalar>(rates: &PermRates<T>) -> Vec<EigenEntry<T>> {
    let n = rates.n();
    subsets(n)
        .into_iter()
        .map(|s| EigenEntry {
            value: subset_eigenvalue(&s, rates),
            multiplicity: crate::combinatorics::derangements(n - s.len()),
            label: EigenLabel::Subset(s),
        })
        .collect()
}

/// One entry per upper set `a`, multiplicity the number of poset derangements
/// of the remaining chains.
pub fn eigen_catalog_word<T: Scalar>(rates: &WordRates<T>) -> Vec<EigenEntry<T>> {
    let m = rates.composition();
    m.upper_sets()
        .into_iter()
        .map(|a| EigenEntry {
            value: upper_set_eigenvalue(&a, rates),
            multiplicity: poset_derangements(m, &a).expect("upper set of m"),
            label: EigenLabel::UpperSet(a),
        })
        .collect()
}

/// One entry per subset `S`, multiplicity `d_{n-k}(p) p^{sum_j (n - j + 1 - i_j)}`
/// for `k = |S| < n` and 1 for `S = [n]`.
pub fn eigen_catalog_flags<T: Scalar>(rates: &PermRates<T>, field: PrimeField) -> Result<Vec<EigenEntry<T>>> {
    if *rates.q() != field.q::<T>() {
        return Err(Error::InvalidRates(format!("q = {} differs from the field size {}", rates.q(), field.p())));
    }
    let n = rates.n();
    let p = u128::from(field.p());
    Ok(subsets(n)
        .into_iter()
        .map(|s| {
            let k = s.len();
            let multiplicity = if k == n {
                1
            } else {
                let exponent: usize = s.iter().zip(1..).map(|(&i, j): (&usize, usize)| n + 1 - j - i).sum();
                q_derangement_int(n - k, u64::from(field.p())) * p.pow(exponent as u32)
            };
            EigenEntry { value: subset_eigenvalue(&s, rates), multiplicity, label: EigenLabel::Subset(s) }
        })
        .collect())
}

/// Entries sharing a value, with multiplicities summed; first-occurrence order.
#[derive(Clone, Debug, PartialEq)]
pub struct MergedEntry<T> {
    pub labels: Vec<EigenLabel>,
    pub value: T,
    pub multiplicity: u128,
}

pub fn merge_catalog<T: Scalar>(catalog: &[EigenEntry<T>]) -> Vec<MergedEntry<T>> {
    let mut out: Vec<MergedEntry<T>> = Vec::new();
    for e in catalog {
        match out.iter_mut().find(|m| m.value == e.value) {
            Some(m) => {
                m.labels.push(e.label.clone());
                m.multiplicity += e.multiplicity;
            }
            None => out.push(MergedEntry { labels: vec![e.label.clone()], value: e.value.clone(), multiplicity: e.multiplicity }),
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultiplicityCheck<T> {
    pub labels: Vec<EigenLabel>,
    pub value: T,
    pub predicted: u128,
    pub computed: u128,
}

impl<T> MultiplicityCheck<T> {
    pub fn pass(&self) -> bool {
        self.predicted == self.computed
    }

    pub fn label(&self) -> String {
        self.labels.iter().map(ToString::to_string).collect::<Vec<_>>().join("=")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultiplicityReport<T> {
    pub checks: Vec<MultiplicityCheck<T>>,
    pub dimension: usize,
    pub predicted_total: u128,
}

impl<T> MultiplicityReport<T> {
    /// Every merged entry matches and the multiplicities fill the space.
    pub fn pass(&self) -> bool {
        self.checks.iter().all(MultiplicityCheck::pass) && self.predicted_total == self.dimension as u128
    }
}

/// Compares `nullity(M - lambda I)` with the predicted multiplicity of every
/// distinct catalog value.
pub fn verify_multiplicities<T: Scalar, S: Clone + Eq + Hash + fmt::Display>(
    op: &LinearOperator<T, S>,
    catalog: &[EigenEntry<T>],
) -> MultiplicityReport<T> {
    let checks = merge_catalog(catalog)
        .into_iter()
        .map(|m| {
            let (_, nullity) = rank_nullity(&op.matrix().shift(&m.value));
            MultiplicityCheck { labels: m.labels, value: m.value, predicted: m.multiplicity, computed: nullity as u128 }
        })
        .collect();
    MultiplicityReport { checks, dimension: op.dim(), predicted_total: catalog.iter().map(|e| e.multiplicity).sum() }
}

/// Whether the product of `M - lambda I` over the distinct catalog values vanishes.
pub fn verify_annihilation<T: Scalar, S: Clone + Eq + Hash + fmt::Display>(op: &LinearOperator<T, S>, catalog: &[EigenEntry<T>]) -> bool {
    annihilates(op.matrix(), catalog.iter().map(|e| &e.value))
}

pub fn annihilates<'a, T: Scalar + 'a>(m: &Matrix<T>, values: impl IntoIterator<Item = &'a T>) -> bool {
    let mut distinct: Vec<&T> = Vec::new();
    for v in values {
        if !distinct.contains(&v) {
            distinct.push(v);
        }
    }
    let mut product = Matrix::identity(m.rows());
    for v in distinct {
        product = product.mul(&m.shift(v)).expect("square matrix");
        if product.is_zero() {
            return true;
        }
    }
    product.is_zero()
}

/// Whether all catalog values are pairwise distinct.
pub fn is_generic<T: Scalar>(catalog: &[EigenEntry<T>]) -> bool {
    merge_catalog(catalog).len() == catalog.len()
}

/// Maps word rates to permutation rates and checks every word-catalog value
/// is a permutation-catalog value.
pub fn word_catalog_in_perm_catalog<T: Scalar>(rates: &WordRates<T>) -> bool {
    let perm = eigen_catalog_perm(&rates.to_perm_rates());
    eigen_catalog_word(rates).iter().all(|w| perm.iter().any(|p| p.value == w.value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{derangements, multinomial, Composition};
    use crate::hecke_chains::{transition_matrix_perm, transition_matrix_word};
    use crate::{parse_rational, Rational};

    fn r(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn perm_rates(q: &str, x: &[&str]) -> PermRates<Rational> {
        PermRates::new(r(q), x.iter().map(|v| r(v)).collect()).unwrap()
    }

    #[test]
    fn three_letter_catalog() {
        let x = perm_rates("5/2", &["2/7", "3/11", "5/13"]);
        let cat = eigen_catalog_perm(&x);
        assert_eq!(cat.len(), 8);
        let q = r("5/2");
        let find = |s: &[usize]| cat.iter().find(|e| e.label == EigenLabel::Subset(s.to_vec())).unwrap().clone();
        assert_eq!(find(&[]).value, r("0"));
        assert_eq!(find(&[]).multiplicity, 2);
        assert_eq!(find(&[1]).value, x.x_at(1) / (q.clone() * q.clone()));
        assert_eq!(find(&[2]).value, x.x_at(2) / q.clone());
        assert_eq!(find(&[3]).value, x.x_at(3));
        assert!([[1], [2], [3]].iter().all(|s| find(s).multiplicity == 1));
        assert!([[2, 1], [3, 1], [3, 2]].iter().all(|s| find(s).multiplicity == 0));
        assert_eq!(find(&[3, 2, 1]).value, x.total());
        assert_eq!(find(&[3, 2, 1]).multiplicity, 1);
        assert_eq!(cat.iter().map(|e| e.multiplicity).sum::<u128>(), 6);
    }

    #[test]
    fn perm_nullities_match() {
        let x = perm_rates("5/2", &["2/7", "3/11", "5/13"]);
        let t = transition_matrix_perm(&x).unwrap();
        let cat = eigen_catalog_perm(&x);
        let report = verify_multiplicities(&t, &cat);
        assert!(report.pass(), "{report:?}");
        assert!(verify_annihilation(&t, &cat));
    }

    #[test]
    fn q_one_catalog_is_subset_sums() {
        let x = perm_rates("1", &["1", "2", "4", "8"]);
        for e in eigen_catalog_perm(&x) {
            let EigenLabel::Subset(s) = &e.label else { unreachable!() };
            assert_eq!(e.value, s.iter().fold(r("0"), |acc, &i| acc + x.x_at(i)));
            assert_eq!(e.multiplicity, derangements(4 - s.len()));
        }
    }

    #[test]
    fn flag_catalog_small_field() {
        let field = PrimeField::new(2).unwrap();
        let x = perm_rates("2", &["1/2", "1/3", "1/6"]);
        let cat = eigen_catalog_flags(&x, field).unwrap();
        let mult = |s: &[usize]| cat.iter().find(|e| e.label == EigenLabel::Subset(s.to_vec())).unwrap().multiplicity;
        assert_eq!((mult(&[]), mult(&[1]), mult(&[2]), mult(&[3]), mult(&[3, 2, 1])), (6, 8, 4, 2, 1));
        assert_eq!(mult(&[2, 1]) + mult(&[3, 1]) + mult(&[3, 2]), 0);
        assert_eq!(cat.iter().map(|e| e.multiplicity).sum::<u128>(), 21);
        for n in 1..=5 {
            for p in [2, 3, 5] {
                let f = PrimeField::new(p).unwrap();
                let x = PermRates::new(f.q::<Rational>(), vec![r("1"); n]).unwrap();
                let total: u128 = eigen_catalog_flags(&x, f).unwrap().iter().map(|e| e.multiplicity).sum();
                assert_eq!(total, crate::flags::flag_count(n, f));
            }
        }
    }

    #[test]
    fn word_table_three_three() {
        let q = r("3");
        let m = Composition::new(vec![3, 3]).unwrap();
        let w = WordRates::new(q.clone(), vec![r("2/5"), r("3/5")], m.clone()).unwrap();
        let cat = eigen_catalog_word(&w);
        assert_eq!(cat.len(), 16);
        let q3 = q_int(3, &q);
        let entry = |a: [usize; 2]| cat.iter().find(|e| e.label == EigenLabel::UpperSet(a.to_vec())).unwrap().clone();
        let (x1, x2) = (w.xbar_at(1), w.xbar_at(2));
        assert_eq!(entry([1, 1]).value, (x1.clone() + x2.clone() * q.clone() * q.clone()) / (q.clone() * q.clone() * q3));
        assert_eq!(entry([1, 1]).multiplicity, 2);
        assert_eq!(entry([3, 3]).value, x1 + x2);
        assert_eq!(entry([0, 0]).multiplicity, 6);
        for a in [[3, 0], [0, 3], [3, 1], [1, 3], [3, 2], [2, 3]] {
            assert_eq!(entry(a).multiplicity, 0);
        }
        assert_eq!(cat.iter().map(|e| e.multiplicity).sum::<u128>(), multinomial(&m));
    }

    #[test]
    fn word_nullities_match() {
        let m = Composition::new(vec![2, 2]).unwrap();
        let w = WordRates::new(r("7/3"), vec![r("2/9"), r("7/9")], m).unwrap();
        let t = transition_matrix_word(&w).unwrap();
        let cat = eigen_catalog_word(&w);
        assert!(verify_multiplicities(&t, &cat).pass());
        assert!(verify_annihilation(&t, &cat));
        assert!(word_catalog_in_perm_catalog(&w));
    }

    #[test]
    fn jordan_block_is_not_annihilated() {
        let m = Matrix::from_rows(vec![vec![r("0"), r("1")], vec![r("0"), r("0")]]).unwrap();
        assert!(!annihilates(&m, [&r("0")]));
        assert!(annihilates(&Matrix::<Rational>::zeros(2, 2), [&r("0")]));
    }

    #[test]
    fn merging_sums_multiplicities() {
        let x = perm_rates("1", &["1", "1"]);
        let merged = merge_catalog(&eigen_catalog_perm(&x));
        assert_eq!(merged.len(), 3);
        assert_eq!(merged[1].labels.len(), 2);
    }
}
