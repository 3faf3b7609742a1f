//! Transition operators of the q-deformed Tsetlin library on permutations
//! and on words of fixed content, built from the right action of the Hecke
//! algebra generators.

use std::collections::HashMap;
use std::fmt::Display;
use std::hash::Hash;

use crate::combinatorics::{q_int, Composition, Permutation, Word};
use crate::error::{Error, Result};
use crate::exact::{ipow, Matrix, Scalar};

/// Rates `x_1..x_n` and deformation parameter `q` for the permutation chain.
#[derive(Clone, Debug, PartialEq)]
pub struct PermRates<T> {
    q: T,
    x: Vec<T>,
}

impl<T: Scalar> PermRates<T> {
    pub fn new(q: T, x: Vec<T>) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::InvalidRates("q must be nonzero".into()));
        }
        if x.is_empty() {
            return Err(Error::InvalidRates("at least one rate is required".into()));
        }
        Ok(PermRates { q, x })
    }

    pub fn q(&self) -> &T {
        &self.q
    }

    pub fn x(&self) -> &[T] {
        &self.x
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// `x_i` for 1-based `i`.
    pub fn x_at(&self, i: usize) -> T {
        self.x[i - 1].clone()
    }

    /// Scaled rate `y_i = x_i / q^{n-i}`.
    pub fn y(&self, i: usize) -> T {
        self.x_at(i) / ipow(&self.q, (self.n() - i) as i64)
    }

    pub fn total(&self) -> T {
        self.x.iter().fold(T::zero(), |acc, v| acc + v.clone())
    }

    /// Rescales the rates to sum to one.
    pub fn normalized(&self) -> Result<Self> {
        let total = self.total();
        if total.is_zero() {
            return Err(Error::InvalidRates("rates sum to zero".into()));
        }
        Ok(PermRates { q: self.q.clone(), x: self.x.iter().map(|v| v.clone() / total.clone()).collect() })
    }

    /// Whether `y_i` is constant on every block of `m`.
    pub fn is_compatible(&self, m: &Composition) -> bool {
        m.total() == self.n()
            && (1..=m.len()).all(|j| {
                let lo = m.partial_sum(j - 1) + 1;
                let hi = m.partial_sum(j);
                (lo..hi).all(|i| self.y(i) == self.y(i + 1))
            })
    }

    /// Word rates `xbar_j = [m_j]_q x_{n_j}`; requires compatibility.
    pub fn to_word_rates(&self, m: &Composition) -> Result<WordRates<T>> {
        if !self.is_compatible(m) {
            return Err(Error::NotCompatible(m.to_string()));
        }
        let xbar = (1..=m.len()).map(|j| q_int(m.part(j), &self.q) * self.x_at(m.partial_sum(j))).collect();
        WordRates::new(self.q.clone(), xbar, m.clone())
    }
}

/// Rates `xbar_1..xbar_l`, parameter `q` and content `m` for the word chain.
#[derive(Clone, Debug, PartialEq)]
pub struct WordRates<T> {
    q: T,
    xbar: Vec<T>,
    m: Composition,
}

impl<T: Scalar> WordRates<T> {
    pub fn new(q: T, xbar: Vec<T>, m: Composition) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::InvalidRates("q must be nonzero".into()));
        }
        if xbar.len() != m.len() {
            return Err(Error::InvalidRates(format!("{} rates for composition {m}", xbar.len())));
        }
        for j in 1..=m.len() {
            if q_int(m.part(j), &q).is_zero() {
                return Err(Error::InvalidRates(format!("[{}]_q vanishes", m.part(j))));
            }
        }
        Ok(WordRates { q, xbar, m })
    }

    pub fn q(&self) -> &T {
        &self.q
    }

    pub fn xbar(&self) -> &[T] {
        &self.xbar
    }

    pub fn composition(&self) -> &Composition {
        &self.m
    }

    pub fn xbar_at(&self, j: usize) -> T {
        self.xbar[j - 1].clone()
    }

    /// Scaled rate `ybar_j = xbar_j / (q^{n - n_j} [m_j]_q)`.
    pub fn ybar(&self, j: usize) -> T {
        let n = self.m.total();
        let shift = n - self.m.partial_sum(j);
        self.xbar_at(j) / (ipow(&self.q, shift as i64) * q_int(self.m.part(j), &self.q))
    }

    pub fn total(&self) -> T {
        self.xbar.iter().fold(T::zero(), |acc, v| acc + v.clone())
    }

    /// Permutation rates `x_{n_{j-1}+i} = q^{m_j - i} xbar_j / [m_j]_q`.
    pub fn to_perm_rates(&self) -> PermRates<T> {
        let mut x = Vec::with_capacity(self.m.total());
        for j in 1..=self.m.len() {
            let mj = self.m.part(j);
            let top = self.xbar_at(j) / q_int(mj, &self.q);
            for i in 1..=mj {
                x.push(ipow(&self.q, (mj - i) as i64) * top.clone());
            }
        }
        PermRates { q: self.q.clone(), x }
    }
}

/// A matrix together with the ordered list of states indexing its rows and
/// columns. Row `s` describes the image of the basis vector `s`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearOperator<T, S: Eq + Hash> {
    states: Vec<S>,
    index: HashMap<S, usize>,
    matrix: Matrix<T>,
}

impl<T: Scalar, S: Clone + Eq + Hash + Display> LinearOperator<T, S> {
    pub fn new(states: Vec<S>, matrix: Matrix<T>) -> Result<Self> {
        if matrix.rows() != states.len() || matrix.cols() != states.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} states for a {}x{} matrix",
                states.len(),
                matrix.rows(),
                matrix.cols()
            )));
        }
        let index = index_states(&states);
        Ok(LinearOperator { states, index, matrix })
    }

    pub fn states(&self) -> &[S] {
        &self.states
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn index_of(&self, s: &S) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Entry in row `from`, column `to`.
    pub fn entry(&self, from: &S, to: &S) -> Result<T> {
        let i = self.index_of(from).ok_or_else(|| Error::Parse(format!("unknown state {from}")))?;
        let j = self.index_of(to).ok_or_else(|| Error::Parse(format!("unknown state {to}")))?;
        Ok(self.matrix[(i, j)].clone())
    }

    /// Operator product `self * other` acting on the right: first `self`, then `other`.
    pub fn then(&self, other: &Self) -> Result<Self> {
        if self.states != other.states {
            return Err(Error::DimensionMismatch("operators on different state lists".into()));
        }
        Ok(LinearOperator { states: self.states.clone(), index: self.index.clone(), matrix: self.matrix.mul(&other.matrix)? })
    }
}

pub(crate) fn index_states<S: Clone + Eq + Hash>(states: &[S]) -> HashMap<S, usize> {
    states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect()
}

/// States that are sequences, acted on by swapping adjacent positions.
pub(crate) trait SequenceState: Clone + Eq + Hash + AsRef<[usize]> {
    fn from_sequence(v: Vec<usize>) -> Self;
}

impl SequenceState for Permutation {
    fn from_sequence(v: Vec<usize>) -> Self {
        Permutation::new_unchecked(v)
    }
}

impl SequenceState for Word {
    fn from_sequence(v: Vec<usize>) -> Self {
        Word::new_unchecked(v)
    }
}

/// `s T_i = q (s s_i)` if `s_{i+1} <= s_i`, else `s s_i + (q - 1) s`.
fn hecke_action<T: Scalar, S: SequenceState>(states: &[S], index: &HashMap<S, usize>, i: usize, q: &T) -> Matrix<T> {
    let mut m = Matrix::<T>::zeros(states.len(), states.len());
    for (r, s) in states.iter().enumerate() {
        let seq = s.as_ref();
        let mut swapped = seq.to_vec();
        swapped.swap(i - 1, i);
        let c = index[&S::from_sequence(swapped)];
        if seq[i] <= seq[i - 1] {
            m[(r, c)] = m[(r, c)].clone() + q.clone();
        } else {
            m[(r, c)] = m[(r, c)].clone() + T::one();
            m[(r, r)] = m[(r, r)].clone() + q.clone() - T::one();
        }
    }
    m
}

fn check_generator(i: usize, n: usize) -> Result<()> {
    if i == 0 || i >= n {
        return Err(Error::IndexOutOfRange { index: i, max: n.saturating_sub(1) });
    }
    Ok(())
}

/// Matrix of `T_i` on permutations of size `n`.
pub fn hecke_generator_perm<T: Scalar>(i: usize, n: usize, q: &T) -> Result<LinearOperator<T, Permutation>> {
    check_generator(i, n)?;
    let states = Permutation::all(n);
    let index = index_states(&states);
    let matrix = hecke_action(&states, &index, i, q);
    Ok(LinearOperator { states, index, matrix })
}

/// Matrix of `T_i` on words of content `m`.
pub fn hecke_generator_word<T: Scalar>(i: usize, m: &Composition, q: &T) -> Result<LinearOperator<T, Word>> {
    check_generator(i, m.total())?;
    let states = m.words();
    let index = index_states(&states);
    let matrix = hecke_action(&states, &index, i, q);
    Ok(LinearOperator { states, index, matrix })
}

/// Diagonal operator `pi -> y_{pi_1} pi`.
pub fn weight_operator_perm<T: Scalar>(rates: &PermRates<T>) -> LinearOperator<T, Permutation> {
    let states = Permutation::all(rates.n());
    let matrix = Matrix::diagonal(states.iter().map(|p| rates.y(p.at(1))).collect());
    let index = index_states(&states);
    LinearOperator { states, index, matrix }
}

/// Diagonal operator `w -> ybar_{w_1} w`.
pub fn weight_operator_word<T: Scalar>(rates: &WordRates<T>) -> LinearOperator<T, Word> {
    let states = rates.composition().words();
    let matrix = Matrix::diagonal(states.iter().map(|w| rates.ybar(w.at(1))).collect());
    let index = index_states(&states);
    LinearOperator { states, index, matrix }
}

/// `sum_{i=1}^{n} T_{i-1} ... T_1 X` for generator matrices `T_1..T_{n-1}`
/// and the diagonal `X` given by `weights`.
pub fn compose_transition<T: Scalar>(generators: &[Matrix<T>], weights: &[T]) -> Result<Matrix<T>> {
    let dim = weights.len();
    let mut prefix = Matrix::identity(dim);
    let mut sum = prefix.clone();
    for g in generators {
        prefix = g.mul(&prefix)?;
        sum = sum.add(&prefix)?;
    }
    Ok(Matrix::from_fn(dim, dim, |r, c| sum[(r, c)].clone() * weights[c].clone()))
}

fn sequence_transition<T: Scalar, S: SequenceState>(states: Vec<S>, q: &T, weight: impl Fn(&S) -> T) -> Result<LinearOperator<T, S>> {
    let n = states.first().map_or(0, |s| s.as_ref().len());
    let index = index_states(&states);
    let generators: Vec<Matrix<T>> = (1..n).map(|i| hecke_action(&states, &index, i, q)).collect();
    let weights: Vec<T> = states.iter().map(weight).collect();
    let matrix = compose_transition(&generators, &weights)?;
    Ok(LinearOperator { states, index, matrix })
}

/// Transition operator of the q-deformed Tsetlin library on permutations,
/// states in lexicographic order.
pub fn transition_matrix_perm<T: Scalar>(rates: &PermRates<T>) -> Result<LinearOperator<T, Permutation>> {
    sequence_transition(Permutation::all(rates.n()), rates.q(), |p| rates.y(p.at(1)))
}

/// Transition operator on words of content `m`, states in lexicographic order.
pub fn transition_matrix_word<T: Scalar>(rates: &WordRates<T>) -> Result<LinearOperator<T, Word>> {
    sequence_transition(rates.composition().words(), rates.q(), |w| rates.ybar(w.at(1)))
}
