//! Permutations, words, compositions, permutation statistics, q-analogues
//! and derangement counts.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exact::{ipow, Scalar};

/// Rearranges `v` into the next larger arrangement in lexicographic order.
fn next_arrangement(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("successor exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// All arrangements of the multiset in `sorted`, lexicographically.
fn arrangements(mut sorted: Vec<usize>) -> Vec<Vec<usize>> {
    sorted.sort_unstable();
    let mut out = vec![sorted.clone()];
    while next_arrangement(&mut sorted) {
        out.push(sorted.clone());
    }
    out
}

fn format_sequence(f: &mut fmt::Formatter<'_>, seq: &[usize]) -> fmt::Result {
    if seq.iter().all(|&v| v < 10) {
        for v in seq {
            write!(f, "{v}")?;
        }
        Ok(())
    } else {
        let parts: Vec<String> = seq.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

fn parse_sequence(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| Error::Parse(format!("{t:?}: {e}")));
    if s.contains(',') {
        s.split(',').map(parse).collect()
    } else {
        s.chars()
            .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| Error::Parse(format!("bad digit {c:?}"))))
            .collect()
    }
}

/// A permutation of `{1..n}` in one-line notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(values: Vec<usize>) -> Result<Self> {
        let n = values.len();
        let mut seen = vec![false; n + 1];
        for &v in &values {
            if v == 0 || v > n || seen[v] {
                return Err(Error::InvalidPermutation(format!("{values:?}")));
            }
            seen[v] = true;
        }
        Ok(Permutation(values))
    }

    pub(crate) fn new_unchecked(values: Vec<usize>) -> Self {
        Permutation(values)
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n).collect())
    }

    /// The longest element `n n-1 ... 1`.
    pub fn longest(n: usize) -> Self {
        Permutation((1..=n).rev().collect())
    }

    /// All permutations of size `n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Self> {
        arrangements((1..=n).collect()).into_iter().map(Permutation).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Value at the 1-based position `i`.
    pub fn at(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Permutation(inv)
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Self) -> Self {
        Permutation(other.0.iter().map(|&v| self.0[v - 1]).collect())
    }
}

impl AsRef<[usize]> for Permutation {
    fn as_ref(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format_sequence(f, &self.0)
    }
}

impl FromStr for Permutation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Permutation::new(parse_sequence(s)?)
    }
}

/// A composition `m = (m_1, ..., m_l)` of `n` with positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Composition(Vec<usize>);

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::InvalidComposition(format!("{parts:?}")));
        }
        Ok(Composition(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// Number of parts `l`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `m_j` for 1-based `j`.
    pub fn part(&self, j: usize) -> usize {
        self.0[j - 1]
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// Partial sum `n_j = m_1 + ... + m_j`, with `n_0 = 0`.
    pub fn partial_sum(&self, j: usize) -> usize {
        self.0[..j].iter().sum()
    }

    /// Letter whose block contains the value `v`.
    pub fn block_of(&self, v: usize) -> usize {
        let mut acc = 0;
        for (j, &m) in self.0.iter().enumerate() {
            acc += m;
            if v <= acc {
                return j + 1;
            }
        }
        panic!("value {v} exceeds {}", self.total());
    }

    /// All words of content `m` in lexicographic order.
    pub fn words(&self) -> Vec<Word> {
        let letters: Vec<usize> =
            self.0.iter().enumerate().flat_map(|(j, &m)| std::iter::repeat_n(j + 1, m)).collect();
        arrangements(letters).into_iter().map(Word).collect()
    }

    /// Upper sets `a` with `0 <= a_i <= m_i`, lexicographically.
    pub fn upper_sets(&self) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for &m in &self.0 {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<usize>| {
                    (0..=m).map(move |a| {
                        let mut next = prefix.clone();
                        next.push(a);
                        next
                    })
                })
                .collect();
        }
        out
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for Composition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = inner
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Composition::new(parts)
    }
}

/// A word over `{1..l}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(letters: Vec<usize>) -> Result<Self> {
        if letters.contains(&0) {
            return Err(Error::InvalidWord(format!("{letters:?}")));
        }
        Ok(Word(letters))
    }

    pub(crate) fn new_unchecked(letters: Vec<usize>) -> Self {
        Word(letters)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn at(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Multiplicities of the letters `1..=l`.
    pub fn content(&self, l: usize) -> Vec<usize> {
        let mut c = vec![0; l];
        for &a in &self.0 {
            c[a - 1] += 1;
        }
        c
    }

    pub fn has_content(&self, m: &Composition) -> bool {
        self.0.iter().all(|&a| a <= m.len()) && self.content(m.len()) == m.parts()
    }
}

impl AsRef<[usize]> for Word {
    fn as_ref(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format_sequence(f, &self.0)
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Word::new(parse_sequence(s)?)
    }
}

/// Number of pairs `i < j` with `s_i > s_j`.
pub fn inv(seq: &[usize]) -> usize {
    let mut count = 0;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                count += 1;
            }
        }
    }
    count
}

/// Number of pairs `i < j` with `s_i < s_j`.
pub fn coinv(seq: &[usize]) -> usize {
    let mut count = 0;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] < seq[j] {
                count += 1;
            }
        }
    }
    count
}

/// 1-based positions `k` with `s_k <= s_i` for every `i < k`.
///
/// For permutations this is the usual strict notion, for words it allows
/// repeated minima.
pub fn lrm_positions(seq: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut min = usize::MAX;
    for (i, &v) in seq.iter().enumerate() {
        if v <= min {
            out.push(i + 1);
            min = v;
        }
    }
    out
}

/// Smallest 1-based `i < k` with `s_i < s_k`.
pub fn p_k(seq: &[usize], k: usize) -> Result<usize> {
    if k == 0 || k > seq.len() {
        return Err(Error::IndexOutOfRange { index: k, max: seq.len() });
    }
    (1..k).find(|&i| seq[i - 1] < seq[k - 1]).ok_or(Error::LeftToRightMinimum(k))
}

/// Replaces the letters `j` of `w`, left to right, by the values of block `j`.
pub fn standardize(w: &Word, m: &Composition) -> Result<Permutation> {
    if !w.has_content(m) {
        return Err(Error::InvalidWord(format!("{w} does not have content {m}")));
    }
    let mut next: Vec<usize> = (0..m.len()).map(|j| m.partial_sum(j) + 1).collect();
    let values = w
        .as_slice()
        .iter()
        .map(|&a| {
            let v = next[a - 1];
            next[a - 1] += 1;
            v
        })
        .collect();
    Ok(Permutation(values))
}

/// Replaces each value of `pi` by the index of its block in `m`.
pub fn destandardize(pi: &Permutation, m: &Composition) -> Result<Word> {
    if pi.len() != m.total() {
        return Err(Error::DimensionMismatch(format!("permutation of size {} vs {m}", pi.len())));
    }
    Ok(Word(pi.as_slice().iter().map(|&v| m.block_of(v)).collect()))
}

/// Elements of the Young subgroup `S_{m_1} x ... x S_{m_l}`, each acting
/// within its block of values.
pub fn young_subgroup(m: &Composition) -> Vec<Permutation> {
    let mut out = vec![Vec::<usize>::new()];
    for j in 1..=m.len() {
        let offset = m.partial_sum(j - 1);
        let block = Permutation::all(m.part(j));
        out = out
            .into_iter()
            .flat_map(|prefix| {
                block.iter().map(move |b| {
                    let mut next = prefix.clone();
                    next.extend(b.as_slice().iter().map(|&v| v + offset));
                    next
                })
            })
            .collect();
    }
    out.into_iter().map(Permutation).collect()
}

/// `[k]_q = 1 + q + ... + q^{k-1}`.
pub fn q_int<T: Scalar>(k: usize, q: &T) -> T {
    (0..k).fold(T::zero(), |acc, j| acc + ipow(q, j as i64))
}

pub fn q_factorial<T: Scalar>(k: usize, q: &T) -> T {
    (1..=k).fold(T::one(), |acc, j| acc * q_int(j, q))
}

/// `d_k(q) = [k]_q! * sum_{j=0}^{k} (-1)^j q^{C(j,2)} / [j]_q!`.
pub fn q_derangement<T: Scalar>(k: usize, q: &T) -> T {
    let sum = (0..=k).fold(T::zero(), |acc, j| {
        let term = ipow(q, (j * j.saturating_sub(1) / 2) as i64) / q_factorial(j, q);
        if j % 2 == 0 {
            acc + term
        } else {
            acc - term
        }
    });
    q_factorial(k, q) * sum
}

/// `d_k(q)` at an integer `q`, via `d_k = [k]_q d_{k-1} + (-1)^k q^{C(k,2)}`.
pub fn q_derangement_int(k: usize, q: u64) -> u128 {
    let q = q as i128;
    let mut d: i128 = 1;
    for j in 1..=k {
        let qint: i128 = (0..j).map(|e| q.pow(e as u32)).sum();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        d = qint * d + sign * q.pow((j * (j - 1) / 2) as u32);
    }
    u128::try_from(d).expect("derangement counts are nonnegative")
}

/// Number of fixed-point-free permutations of `k` elements.
pub fn derangements(k: usize) -> u128 {
    q_derangement_int(k, 1)
}

/// Linear extensions of the disjoint union of chains of sizes `sizes`,
/// with chain `i` labelled by the next `sizes[i]` consecutive integers,
/// listed lexicographically as one-line sequences.
pub fn chain_linear_extensions(sizes: &[usize]) -> Vec<Vec<usize>> {
    fn go(sizes: &[usize], offsets: &[usize], used: &mut [usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if used.iter().zip(sizes).all(|(u, s)| u == s) {
            out.push(cur.clone());
            return;
        }
        for i in 0..sizes.len() {
            if used[i] < sizes[i] {
                used[i] += 1;
                cur.push(offsets[i] + used[i]);
                go(sizes, offsets, used, cur, out);
                cur.pop();
                used[i] -= 1;
            }
        }
    }
    let offsets: Vec<usize> = (0..sizes.len()).map(|i| sizes[..i].iter().sum()).collect();
    let mut out = Vec::new();
    go(sizes, &offsets, &mut vec![0; sizes.len()], &mut Vec::new(), &mut out);
    out
}

/// Linear extensions of the chains left after removing the top `a_i`
/// elements from a chain of size `m_i`.
pub fn linear_extensions(m: &Composition, a: &[usize]) -> Result<Vec<Vec<usize>>> {
    Ok(chain_linear_extensions(&remaining_chains(m, a)?))
}

/// Linear extensions `pi` of the remaining poset with `pi_j != j` for all `j`.
pub fn poset_derangements(m: &Composition, a: &[usize]) -> Result<u128> {
    let count = linear_extensions(m, a)?
        .iter()
        .filter(|ext| ext.iter().enumerate().all(|(j, &v)| v != j + 1))
        .count();
    Ok(count as u128)
}

fn remaining_chains(m: &Composition, a: &[usize]) -> Result<Vec<usize>> {
    if a.len() != m.len() || a.iter().zip(m.parts()).any(|(ai, mi)| ai > mi) {
        return Err(Error::DimensionMismatch(format!("{a:?} is not an upper set of {m}")));
    }
    Ok(m.parts().iter().zip(a).map(|(mi, ai)| mi - ai).collect())
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `q`-binomial coefficient evaluated at `q`.
pub fn q_binomial<T: Scalar>(n: usize, k: usize, q: &T) -> T {
    if k > n {
        return T::zero();
    }
    q_factorial(n, q) / (q_factorial(k, q) * q_factorial(n - k, q))
}

/// Multinomial `n! / (m_1! ... m_l!)`.
pub fn multinomial(m: &Composition) -> u128 {
    let mut acc = 1u128;
    let mut total = 0;
    for &part in m.parts() {
        total += part;
        acc *= binomial(total, part);
    }
    acc
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use proptest::prelude::*;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn permutations_are_lexicographic() {
        let all: Vec<String> = Permutation::all(3).iter().map(ToString::to_string).collect();
        assert_eq!(all, ["123", "132", "213", "231", "312", "321"]);
        assert_eq!(Permutation::all(5).len(), 120);
    }

    #[test]
    fn words_are_lexicographic() {
        let m = Composition::new(vec![1, 2]).unwrap();
        let all: Vec<String> = m.words().iter().map(ToString::to_string).collect();
        assert_eq!(all, ["122", "212", "221"]);
        assert_eq!(Composition::new(vec![2, 2, 1]).unwrap().words().len(), 30);
    }

    #[test]
    fn statistics_on_examples() {
        assert_eq!(inv(perm("3142").as_slice()), 3);
        assert_eq!(coinv(perm("3142").as_slice()), 3);
        assert_eq!(lrm_positions(perm("3142").as_slice()), vec![1, 2]);
        assert_eq!(lrm_positions(&[2, 2, 3, 1]), vec![1, 2, 4]);
        assert_eq!(p_k(perm("3142").as_slice(), 3), Ok(1));
        assert_eq!(p_k(perm("3142").as_slice(), 4), Ok(2));
        assert_eq!(p_k(perm("3142").as_slice(), 2), Err(Error::LeftToRightMinimum(2)));
        assert_eq!(p_k(&[2, 2, 3, 1], 3), Ok(1));
    }

    #[test]
    fn standardization_roundtrip() {
        let m = Composition::new(vec![3, 1]).unwrap();
        let w: Word = "1211".parse().unwrap();
        let s = standardize(&w, &m).unwrap();
        assert_eq!(s.to_string(), "1423");
        assert_eq!(destandardize(&s, &m).unwrap(), w);
    }

    #[test]
    fn young_subgroup_size() {
        let m = Composition::new(vec![2, 3]).unwrap();
        let g = young_subgroup(&m);
        assert_eq!(g.len(), 12);
        assert!(g.iter().all(|t| t.as_slice()[..2].iter().all(|&v| v <= 2)));
    }

    #[test]
    fn q_analogues() {
        let q = Rational::from_integer(2.into());
        assert_eq!(q_int(3, &q), Rational::from_integer(7.into()));
        assert_eq!(q_factorial(3, &q), Rational::from_integer(21.into()));
        assert_eq!(q_binomial(4, 2, &q), Rational::from_integer(35.into()));
    }

    #[test]
    fn derangement_values() {
        assert_eq!((0..=5).map(derangements).collect::<Vec<_>>(), vec![1, 0, 1, 2, 9, 44]);
        assert_eq!(q_derangement_int(1, 2), 0);
        assert_eq!(q_derangement_int(2, 2), 2);
        assert_eq!(q_derangement_int(3, 2), 6);
    }

    #[test]
    fn derangements_match_brute_force() {
        for n in 0..=6 {
            let brute = Permutation::all(n)
                .iter()
                .filter(|p| p.as_slice().iter().enumerate().all(|(i, &v)| v != i + 1))
                .count() as u128;
            assert_eq!(derangements(n), brute);
        }
    }

    #[test]
    fn q_derangement_forms_agree() {
        for q in 1..=4u64 {
            let qr = Rational::from_integer((q as i64).into());
            for k in 0..=6 {
                assert_eq!(q_derangement(k, &qr), Rational::from_integer((q_derangement_int(k, q) as i64).into()));
            }
        }
    }

    #[test]
    fn poset_derangement_example() {
        let m = Composition::new(vec![2, 2]).unwrap();
        let ext: Vec<String> = linear_extensions(&m, &[0, 0])
            .unwrap()
            .iter()
            .map(|e| e.iter().map(ToString::to_string).collect())
            .collect();
        assert_eq!(ext, ["1234", "1324", "1342", "3124", "3142", "3412"]);
        assert_eq!(poset_derangements(&m, &[0, 0]).unwrap(), 2);
    }

    #[test]
    fn chains_of_size_one_give_derangements() {
        for n in 0..=5 {
            let m = Composition::new(vec![1; n.max(1)]).unwrap();
            let a = vec![0; m.len()];
            assert_eq!(poset_derangements(&m, &a).unwrap(), derangements(m.len()));
        }
    }

    proptest! {
        #[test]
        fn inv_plus_coinv(v in Just((1..=6usize).collect::<Vec<_>>()).prop_shuffle()) {
            prop_assert_eq!(inv(&v) + coinv(&v), 15);
        }

        #[test]
        fn linear_extension_count_is_multinomial(parts in prop::collection::vec(1usize..=3, 1..=3)) {
            let m = Composition::new(parts).unwrap();
            let a = vec![0; m.len()];
            prop_assert_eq!(linear_extensions(&m, &a).unwrap().len() as u128, multinomial(&m));
        }

        #[test]
        fn words_are_distinct_with_content(parts in prop::collection::vec(1usize..=2, 1..=3)) {
            let m = Composition::new(parts).unwrap();
            let words = m.words();
            prop_assert_eq!(words.len() as u128, multinomial(&m));
            prop_assert!(words.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(words.iter().all(|w| w.has_content(&m)));
        }
    }
}
