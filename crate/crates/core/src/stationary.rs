//! Closed-form stationary distributions of the three chains and a
//! null-space oracle.

use std::fmt::Display;
use std::hash::Hash;

use crate::combinatorics::{inv, lrm_positions, p_k, q_factorial, Permutation, Word};
use crate::error::{Error, Result};
use crate::exact::{ipow, left_null_space, Scalar};
use crate::flags::{enumerate_coset, FlagRep, PrimeField};
use crate::hecke_chains::{LinearOperator, PermRates, WordRates};
use num_traits::Zero;

/// Values indexed by an ordered list of states.
#[derive(Clone, Debug, PartialEq)]
pub struct StationaryVector<T, S> {
    states: Vec<S>,
    values: Vec<T>,
}

impl<T: Scalar, S: Clone + Eq + Hash + Display> StationaryVector<T, S> {
    pub fn new(states: Vec<S>, values: Vec<T>) -> Result<Self> {
        if states.len() != values.len() {
            return Err(Error::DimensionMismatch(format!("{} states, {} values", states.len(), values.len())));
        }
        Ok(StationaryVector { states, values })
    }

    pub fn states(&self) -> &[S] {
        &self.states
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn get(&self, s: &S) -> Option<&T> {
        self.states.iter().position(|t| t == s).map(|i| &self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&S, &T)> {
        self.states.iter().zip(&self.values)
    }

    pub fn sum(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, v| acc + v.clone())
    }

    /// Whether `v M = lambda v` for the operator on the same state list.
    pub fn is_left_eigenvector(&self, op: &LinearOperator<T, S>, lambda: &T) -> Result<bool> {
        if op.states() != self.states.as_slice() {
            return Err(Error::DimensionMismatch("operator indexed by different states".into()));
        }
        let image = op.matrix().left_apply(&self.values)?;
        Ok(image.iter().zip(&self.values).all(|(a, v)| *a == lambda.clone() * v.clone()))
    }
}

/// `prefactor * prod(numerators) / prod(denominators)`, kept factored so
/// positivity can be checked factor by factor.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductFormula<T> {
    pub prefactor: T,
    pub numerators: Vec<T>,
    pub denominators: Vec<T>,
}

impl<T: Scalar> ProductFormula<T> {
    pub fn value(&self) -> T {
        let num = self.numerators.iter().fold(self.prefactor.clone(), |acc, v| acc * v.clone());
        self.denominators.iter().fold(num, |acc, v| acc / v.clone())
    }

    pub fn all_factors_positive(&self) -> bool {
        std::iter::once(&self.prefactor).chain(&self.numerators).chain(&self.denominators).all(|v| v.is_positive())
    }
}

fn decreasing(b: &[usize]) -> Vec<usize> {
    let mut sorted = b.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    sorted
}

/// `kappa(b; x) = sum_i x_{b_i} q^{i + b_i - k - 1}` over `b` sorted decreasingly.
pub fn kappa_perm<T: Scalar>(b: &[usize], rates: &PermRates<T>) -> T {
    let k = b.len() as i64;
    decreasing(b).iter().zip(1..).fold(T::zero(), |acc, (&bi, i): (&usize, i64)| {
        acc + rates.x_at(bi) * ipow(rates.q(), i + bi as i64 - k - 1)
    })
}

/// `kappa(b; xbar) = sum_i q^{i + n_{b_i} - k - 1} xbar_{b_i} / [m_{b_i}]_q`
/// over `b` sorted decreasingly.
pub fn kappa_word<T: Scalar>(b: &[usize], rates: &WordRates<T>) -> T {
    let m = rates.composition();
    let k = b.len() as i64;
    decreasing(b).iter().zip(1..).fold(T::zero(), |acc, (&bi, i): (&usize, i64)| {
        let shift = i + m.partial_sum(bi) as i64 - k - 1;
        acc + ipow(rates.q(), shift) * rates.xbar_at(bi) / crate::combinatorics::q_int(m.part(bi), rates.q())
    })
}

/// Shared shape of the permutation and word formulas.
fn sequence_factors<T: Scalar>(seq: &[usize], prefactor: T, total: &T, q: &T, kappa: impl Fn(&[usize]) -> T) -> Result<ProductFormula<T>> {
    let n = seq.len();
    let lrm = lrm_positions(seq);
    let mut numerators = Vec::with_capacity(n.saturating_sub(1));
    let mut denominators = Vec::with_capacity(n.saturating_sub(1));
    for k in 1..n {
        if lrm.contains(&k) {
            numerators.push(kappa(&seq[k - 1..k]));
        } else {
            let pk = p_k(seq, k)?;
            let full = kappa(&seq[pk - 1..k]);
            let short = kappa(&seq[pk - 1..k - 1]);
            numerators.push(full - short / q.clone());
        }
        denominators.push(total.clone() - ipow(q, k as i64 - n as i64 - 1) * kappa(&seq[..k - 1]));
    }
    Ok(ProductFormula { prefactor, numerators, denominators })
}

fn check_denominators<T: Scalar>(f: &ProductFormula<T>, state: &impl Display) -> Result<()> {
    match f.denominators.iter().position(Zero::is_zero) {
        Some(k) => Err(Error::ZeroDenominator { state: state.to_string(), factor: k + 1 }),
        None => Ok(()),
    }
}


/// Factors of `Psi_pi` for the permutation chain.
pub fn perm_formula_factors<T: Scalar>(pi: &Permutation, rates: &PermRates<T>) -> Result<ProductFormula<T>> {
    if pi.len() != rates.n() {
        return Err(Error::DimensionMismatch(format!("permutation of size {} for {} rates", pi.len(), rates.n())));
    }
    let q = rates.q();
    let total = kappa_perm(Permutation::longest(rates.n()).as_slice(), rates);
    let prefactor = ipow(q, -(inv(pi.as_slice()) as i64));
    sequence_factors(pi.as_slice(), prefactor, &total, q, |b| kappa_perm(b, rates))
}

/// Factors of `Psi_w` for the word chain.
pub fn word_formula_factors<T: Scalar>(w: &Word, rates: &WordRates<T>) -> Result<ProductFormula<T>> {
    let m = rates.composition();
    if !w.has_content(m) {
        return Err(Error::InvalidWord(format!("{w} does not have content {m}")));
    }
    let q = rates.q();
    let prefactor = m
        .parts()
        .iter()
        .fold(ipow(q, -(inv(w.as_slice()) as i64)), |acc, &mi| acc * ipow(q, -((mi * mi.saturating_sub(1) / 2) as i64)) * q_factorial(mi, q));
    sequence_factors(w.as_slice(), prefactor, &rates.total(), q, |b| kappa_word(b, rates))
}

/// Stationary vector of the permutation chain over all of `S_n`.
pub fn stationary_perm_formula<T: Scalar>(rates: &PermRates<T>) -> Result<StationaryVector<T, Permutation>> {
    let states = Permutation::all(rates.n());
    let values = states
        .iter()
        .map(|pi| {
            let f = perm_formula_factors(pi, rates)?;
            check_denominators(&f, pi)?;
            Ok(f.value())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StationaryVector { states, values })
}

/// Stationary vector of the word chain over all words of the given content.
pub fn stationary_word_formula<T: Scalar>(rates: &WordRates<T>) -> Result<StationaryVector<T, Word>> {
    let states = rates.composition().words();
    let values = states
        .iter()
        .map(|w| {
            let f = word_formula_factors(w, rates)?;
            check_denominators(&f, w)?;
            Ok(f.value())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StationaryVector { states, values })
}

/// Factors of `Psi_{F_pi}` for the flag chain: numerator `k` is
/// `f(pi_1..pi_k)` and denominator `k` is
/// `(sum x - sum_{s in pi_1..pi_{k-1}} x_s / q^{n-s-b_k(s)}) / sum x`.
pub fn flag_formula_factors<T: Scalar>(pi: &Permutation, rates: &PermRates<T>) -> Result<ProductFormula<T>> {
    let n = rates.n();
    if pi.len() != n {
        return Err(Error::DimensionMismatch(format!("permutation of size {} for {n} rates", pi.len())));
    }
    let q = rates.q();
    let total = rates.total();
    if total.is_zero() {
        return Err(Error::InvalidRates("rates sum to zero".into()));
    }
    let mut numerators = Vec::with_capacity(n);
    let mut denominators = Vec::with_capacity(n);
    for k in 1..=n {
        let before = &pi.as_slice()[..k - 1];
        let b = |s: usize| before.iter().filter(|&&t| t > s).count() as i64;
        let scaled = |s: usize| rates.x_at(s) / ipow(q, n as i64 - s as i64 - b(s));
        let pk = pi.at(k);
        let f = pi.as_slice()[..k].iter().filter(|&&s| s <= pk).fold(T::zero(), |acc, &s| {
            let term = scaled(s) / total.clone();
            if s < pk {
                acc + term * (q.clone() - T::one())
            } else {
                acc + term
            }
        });
        let d = before.iter().fold(total.clone(), |acc, &s| acc - scaled(s));
        numerators.push(f);
        denominators.push(d / total.clone());
    }
    Ok(ProductFormula { prefactor: T::one(), numerators, denominators })
}

/// Stationary vector of the flag chain, constant on double cosets.
pub fn stationary_flags_formula<T: Scalar>(rates: &PermRates<T>, field: PrimeField) -> Result<StationaryVector<T, FlagRep>> {
    if *rates.q() != field.q::<T>() {
        return Err(Error::InvalidRates(format!("q = {} differs from the field size {}", rates.q(), field.p())));
    }
    let mut states = Vec::new();
    let mut values = Vec::new();
    for pi in Permutation::all(rates.n()) {
        let f = flag_formula_factors(&pi, rates)?;
        check_denominators(&f, &pi)?;
        let v = f.value();
        for flag in enumerate_coset(&pi, field) {
            states.push(flag);
            values.push(v.clone());
        }
    }
    Ok(StationaryVector { states, values })
}

/// The unique left eigenvector of `op` for `total`, normalized to sum 1.
pub fn stationary_oracle<T: Scalar, S: Clone + Eq + Hash + Display>(op: &LinearOperator<T, S>, total: &T) -> Result<StationaryVector<T, S>> {
    let basis = left_null_space(&op.matrix().shift(total));
    if basis.len() != 1 {
        return Err(Error::EigenspaceDimension(basis.len()));
    }
    let v = basis.into_iter().next().expect("one vector");
    let sum = v.iter().fold(T::zero(), |acc, x| acc + x.clone());
    if sum.is_zero() {
        return Err(Error::Degenerate("eigenvector sums to zero".into()));
    }
    Ok(StationaryVector { states: op.states().to_vec(), values: v.into_iter().map(|x| x / sum.clone()).collect() })
}
