//! Complete flags in `F_p^n`: prime-field arithmetic, canonical coset
//! representatives, the q-Tsetlin operator on flags and the left regular
//! band of partial flags.

use std::collections::HashSet;
use std::fmt;

use crate::combinatorics::{q_factorial, q_int, Permutation};
use crate::error::{Error, Result};
use crate::exact::{int, Matrix, Scalar};
use crate::hecke_chains::{compose_transition, index_states, LinearOperator, PermRates};

/// Residue in `[0, p)`.
pub type FieldElement = u32;

/// The prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        let prime = p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d));
        if !prime || p > u64::from(u16::MAX) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p: p as u32 })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// `p` as a scalar, the value of `q` for chains on flags.
    pub fn q<T: Scalar>(&self) -> T {
        int(i64::from(self.p))
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        (a + b) % self.p
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        (a + self.p - b) % self.p
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        (a * b) % self.p
    }

    pub fn neg(&self, a: u32) -> u32 {
        (self.p - a) % self.p
    }

    pub fn inv(&self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.p), "zero has no inverse");
        let mut acc = 1;
        for _ in 0..self.p - 2 {
            acc = self.mul(acc, a);
        }
        acc
    }

    /// `u - a v` coordinatewise.
    fn axpy(&self, u: &mut [u32], a: u32, v: &[u32]) {
        for (x, y) in u.iter_mut().zip(v) {
            *x = self.sub(*x, self.mul(a, *y));
        }
    }

    fn scale(&self, u: &mut [u32], a: u32) {
        for x in u.iter_mut() {
            *x = self.mul(*x, a);
        }
    }
}

/// The line `<e_i + sum_{k>i} c_k e_k>`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Line {
    lead: usize,
    tail: Vec<FieldElement>,
}

impl Line {
    pub fn new(n: usize, lead: usize, tail: Vec<FieldElement>) -> Result<Self> {
        if lead == 0 || lead > n {
            return Err(Error::IndexOutOfRange { index: lead, max: n });
        }
        if tail.len() != n - lead {
            return Err(Error::DimensionMismatch(format!("tail of length {} for lead {lead} in dimension {n}", tail.len())));
        }
        Ok(Line { lead, tail })
    }

    /// Line spanned by a nonzero vector.
    pub fn spanned_by(v: &[FieldElement], field: PrimeField) -> Result<Self> {
        let i = v.iter().position(|&c| c != 0).ok_or_else(|| Error::DimensionMismatch("zero vector spans no line".into()))?;
        let inv = field.inv(v[i]);
        Ok(Line { lead: i + 1, tail: v[i + 1..].iter().map(|&c| field.mul(c, inv)).collect() })
    }

    /// 1-based index of the leading coordinate.
    pub fn lead(&self) -> usize {
        self.lead
    }

    pub fn tail(&self) -> &[FieldElement] {
        &self.tail
    }

    pub fn dim(&self) -> usize {
        self.lead + self.tail.len()
    }

    pub fn vector(&self) -> Vec<FieldElement> {
        let mut v = vec![0; self.lead - 1];
        v.push(1);
        v.extend_from_slice(&self.tail);
        v
    }
}

/// All vectors of `F_p^len` in lexicographic order.
fn all_vectors(len: usize, field: PrimeField) -> Vec<Vec<FieldElement>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<u32>| {
                (0..field.p()).map(move |c| {
                    let mut v = prefix.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
    }
    out
}

/// The `[n]_p` lines of `F_p^n`, by lead index and then tail.
pub fn enumerate_lines(n: usize, field: PrimeField) -> Vec<Line> {
    (1..=n).flat_map(|i| all_vectors(n - i, field).into_iter().map(move |tail| Line { lead: i, tail })).collect()
}

fn check_rates<T: Scalar>(rates: &PermRates<T>, n: usize, field: PrimeField) -> Result<()> {
    if rates.n() != n {
        return Err(Error::InvalidRates(format!("{} rates for dimension {n}", rates.n())));
    }
    if *rates.q() != field.q::<T>() {
        return Err(Error::InvalidRates(format!("q = {} differs from the field size {}", rates.q(), field.p())));
    }
    Ok(())
}

/// Weight `x_i / q^{n-i}` of a line with lead index `i`.
pub fn line_weight<T: Scalar>(line: &Line, rates: &PermRates<T>) -> T {
    rates.y(line.lead)
}

/// A complete flag, stored as its canonical representative: the rightmost
/// nonzero entry of every row is 1 and is the topmost nonzero entry of its
/// column. Column `j` spans `V_j / V_{j-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FlagRep {
    n: usize,
    field: PrimeField,
    entries: Vec<FieldElement>,
}

impl FlagRep {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// Entry at 0-based `(row, col)`.
    pub fn entry(&self, row: usize, col: usize) -> FieldElement {
        self.entries[row * self.n + col]
    }

    pub fn rows(&self) -> Vec<Vec<FieldElement>> {
        self.entries.chunks(self.n).map(<[u32]>::to_vec).collect()
    }

    /// 0-based column `j`.
    pub fn column(&self, j: usize) -> Vec<FieldElement> {
        (0..self.n).map(|r| self.entry(r, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<FieldElement>> {
        (0..self.n).map(|j| self.column(j)).collect()
    }

    /// 1-based row of the pivot of 0-based column `j`.
    pub fn pivot_row(&self, j: usize) -> usize {
        (0..self.n).find(|&r| self.entry(r, j) != 0).expect("columns are nonzero") + 1
    }

    /// Double coset label: `pi_j` is the pivot row of column `j`.
    pub fn coset_perm(&self) -> Permutation {
        Permutation::new_unchecked((0..self.n).map(|j| self.pivot_row(j)).collect())
    }

    /// The flag's first line `V_1`.
    pub fn first_line(&self) -> Line {
        Line::spanned_by(&self.column(0), self.field).expect("columns are nonzero")
    }

    /// Canonical representative of `h g B`.
    pub fn left_multiply(&self, h: &[Vec<FieldElement>]) -> Result<FlagRep> {
        if h.len() != self.n || h.iter().any(|row| row.len() != self.n) {
            return Err(Error::DimensionMismatch("left factor must be n x n".into()));
        }
        let f = self.field;
        let product: Vec<Vec<u32>> = (0..self.n)
            .map(|r| (0..self.n).map(|c| (0..self.n).fold(0, |acc, k| f.add(acc, f.mul(h[r][k], self.entry(k, c))))).collect())
            .collect();
        canonicalize_coset(&product, f)
    }

    /// Parses rows of residues separated by `|`; rows are digit strings,
    /// or comma-separated when `p > 10`.
    pub fn parse(s: &str, field: PrimeField) -> Result<FlagRep> {
        let rows: Vec<Vec<u32>> = s
            .trim()
            .split('|')
            .map(|row| {
                let cells: Vec<std::result::Result<u32, String>> = if row.contains(',') {
                    row.split(',').map(|c| c.trim().parse::<u32>().map_err(|e| e.to_string())).collect()
                } else {
                    row.chars().map(|c| c.to_digit(10).ok_or_else(|| format!("bad digit {c:?}"))).collect()
                };
                cells.into_iter().collect::<std::result::Result<Vec<u32>, String>>().map_err(Error::Parse)
            })
            .collect::<Result<_>>()?;
        if rows.iter().flatten().any(|&v| v >= field.p()) {
            return Err(Error::Parse(format!("entries of {s:?} must be residues mod {}", field.p())));
        }
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Parse(format!("{s:?} is not square")));
        }
        let flag = canonicalize_coset(&rows, field)?;
        if flag.rows() != rows {
            return Err(Error::Parse(format!("{s:?} is not a canonical representative")));
        }
        Ok(flag)
    }
}

impl fmt::Display for FlagRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.field.p() > 10 { "," } else { "" };
        let rows: Vec<String> = self
            .entries
            .chunks(self.n)
            .map(|row| row.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep))
            .collect();
        write!(f, "{}", rows.join("|"))
    }
}

/// Reduces columns left to right against earlier pivots, dropping columns
/// that lie in the span of their predecessors.
fn canonical_columns(columns: impl IntoIterator<Item = Vec<FieldElement>>, field: PrimeField) -> Vec<(Vec<FieldElement>, usize)> {
    let mut out: Vec<(Vec<u32>, usize)> = Vec::new();
    for mut c in columns {
        for (prev, pivot) in &out {
            let a = c[*pivot];
            if a != 0 {
                field.axpy(&mut c, a, prev);
            }
        }
        if let Some(pivot) = c.iter().position(|&v| v != 0) {
            let inv = field.inv(c[pivot]);
            field.scale(&mut c, inv);
            out.push((c, pivot));
        }
    }
    out
}

/// Canonical representative of the flag spanned by the columns of `rows`
/// (an `n x m` matrix with `m >= n`), keeping each column that is not in the
/// span of the ones before it.
pub fn canonicalize_coset(rows: &[Vec<FieldElement>], field: PrimeField) -> Result<FlagRep> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != m) {
        return Err(Error::DimensionMismatch("ragged matrix".into()));
    }
    let columns = (0..m).map(|j| rows.iter().map(|r| r[j] % field.p()).collect());
    from_columns(n, canonical_columns(columns, field), field)
}

fn from_columns(n: usize, cols: Vec<(Vec<FieldElement>, usize)>, field: PrimeField) -> Result<FlagRep> {
    if cols.len() != n {
        return Err(Error::SingularMatrix { p: field.p() });
    }
    let mut entries = vec![0; n * n];
    for (j, (c, _)) in cols.iter().enumerate() {
        for (r, &v) in c.iter().enumerate() {
            entries[r * n + j] = v;
        }
    }
    Ok(FlagRep { n, field, entries })
}

/// Cells `(row, col)` (0-based) left free in the representatives of `[pi]`,
/// listed column by column.
#[allow(clippy::needless_range_loop)]
fn free_cells(pi: &Permutation) -> Vec<(usize, usize)> {
    let n = pi.len();
    let mut cells = Vec::new();
    let mut used = vec![false; n + 1];
    for c in 0..n {
        let pivot = pi.at(c + 1);
        for r in pivot + 1..=n {
            if !used[r] {
                cells.push((r - 1, c));
            }
        }
        used[pivot] = true;
    }
    cells
}

/// Flags in the double coset `[pi]`, free entries in lexicographic order.
pub fn enumerate_coset(pi: &Permutation, field: PrimeField) -> Vec<FlagRep> {
    let n = pi.len();
    let cells = free_cells(pi);
    all_vectors(cells.len(), field)
        .into_iter()
        .map(|values| {
            let mut entries = vec![0; n * n];
            for c in 0..n {
                entries[(pi.at(c + 1) - 1) * n + c] = 1;
            }
            for (&(r, c), v) in cells.iter().zip(values) {
                entries[r * n + c] = v;
            }
            FlagRep { n, field, entries }
        })
        .collect()
}

/// All `[n]_p!` flags, grouped by double coset in lexicographic order.
pub fn enumerate_flags(n: usize, field: PrimeField) -> Vec<FlagRep> {
    Permutation::all(n).iter().flat_map(|pi| enumerate_coset(pi, field)).collect()
}

/// The flag `(L, V_1 + L, ..., V_{n-1} + L)` with the repeated subspace removed.
pub fn insert_line(flag: &FlagRep, line: &Line) -> Result<FlagRep> {
    if line.dim() != flag.n {
        return Err(Error::DimensionMismatch(format!("line in dimension {} for flag in dimension {}", line.dim(), flag.n)));
    }
    let columns = std::iter::once(line.vector()).chain(flag.columns());
    from_columns(flag.n, canonical_columns(columns, flag.field), flag.field)
}

fn flag_operator<T: Scalar>(states: Vec<FlagRep>, mut image: impl FnMut(&FlagRep) -> Result<Vec<(FlagRep, T)>>) -> Result<LinearOperator<T, FlagRep>> {
    let index = index_states(&states);
    let mut m = Matrix::<T>::zeros(states.len(), states.len());
    for (r, f) in states.iter().enumerate() {
        for (g, w) in image(f)? {
            let c = index[&g];
            m[(r, c)] = m[(r, c)].clone() + w;
        }
    }
    LinearOperator::new(states, m)
}

/// `(gB) T_i = g s_i B + sum_{t != 0} g f_i(t) B` on the flag basis.
pub fn hecke_generator_coset<T: Scalar>(i: usize, n: usize, field: PrimeField) -> Result<LinearOperator<T, FlagRep>> {
    if i == 0 || i >= n {
        return Err(Error::IndexOutOfRange { index: i, max: n.saturating_sub(1) });
    }
    flag_operator(enumerate_flags(n, field), |g| Ok(coset_generator_image(g, i)))
}

fn coset_generator_image<T: Scalar>(g: &FlagRep, i: usize) -> Vec<(FlagRep, T)> {
    let field = g.field;
    let cols = g.columns();
    let mut out = Vec::with_capacity(field.p() as usize);
    let mut swapped = cols.clone();
    swapped.swap(i - 1, i);
    out.push(swapped);
    for t in 1..field.p() {
        let mut sheared = cols.clone();
        let (a, b) = (sheared[i - 1].clone(), sheared[i].clone());
        sheared[i - 1] = a.iter().zip(&b).map(|(&x, &y)| field.add(x, field.mul(t, y))).collect();
        out.push(sheared);
    }
    out.into_iter()
        .map(|c| (from_columns(g.n, canonical_columns(c, field), field).expect("invertible"), T::one()))
        .collect()
}

/// Transition operator on flags: row `F` carries `line_weight(L)` at
/// `insert_line(F, L)` for every line `L`.
pub fn transition_matrix_flags<T: Scalar>(rates: &PermRates<T>, field: PrimeField) -> Result<LinearOperator<T, FlagRep>> {
    let n = rates.n();
    check_rates(rates, n, field)?;
    let lines = enumerate_lines(n, field);
    flag_operator(enumerate_flags(n, field), |f| {
        lines.iter().map(|l| Ok((insert_line(f, l)?, line_weight(l, rates)))).collect()
    })
}

/// The same operator assembled as `sum_i T_{i-1} ... T_1 X` from the coset
/// generators and the weight `x_i / q^{n-i}` of the first column's pivot row.
pub fn transition_matrix_flags_hecke<T: Scalar>(rates: &PermRates<T>, field: PrimeField) -> Result<LinearOperator<T, FlagRep>> {
    let n = rates.n();
    check_rates(rates, n, field)?;
    let states = enumerate_flags(n, field);
    let generators = (1..n)
        .map(|i| hecke_generator_coset::<T>(i, n, field).map(LinearOperator::into_matrix))
        .collect::<Result<Vec<_>>>()?;
    let weights: Vec<T> = states.iter().map(|f| rates.y(f.pivot_row(0))).collect();
    let matrix = compose_transition(&generators, &weights)?;
    LinearOperator::new(states, matrix)
}

/// Number of flags `[n]_p!`.
pub fn flag_count(n: usize, field: PrimeField) -> u128 {
    let q: num_rational::BigRational = field.q();
    q_factorial(n, &q).to_integer().try_into().expect("flag count fits")
}

/// Number of lines `[n]_p`.
pub fn line_count(n: usize, field: PrimeField) -> u128 {
    let q: num_rational::BigRational = field.q();
    q_int(n, &q).to_integer().try_into().expect("line count fits")
}

/// Nonzero rows of the reduced row echelon form.
fn reduce_rows(vectors: Vec<Vec<FieldElement>>, field: PrimeField) -> Vec<Vec<FieldElement>> {
    let mut rows = vectors;
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = field.inv(rows[rank][col]);
        field.scale(&mut rows[rank], inv);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let a = row[col];
                field.axpy(row, a, &pivot);
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rows
}

/// A subspace of `F_p^n`, stored by its reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    n: usize,
    field: PrimeField,
    basis: Vec<Vec<FieldElement>>,
}

impl Subspace {
    pub fn zero(n: usize, field: PrimeField) -> Self {
        Subspace { n, field, basis: vec![] }
    }

    pub fn span(n: usize, vectors: &[Vec<FieldElement>], field: PrimeField) -> Result<Self> {
        if vectors.iter().any(|v| v.len() != n) {
            return Err(Error::DimensionMismatch(format!("vectors must have length {n}")));
        }
        let reduced: Vec<Vec<u32>> = vectors.iter().map(|v| v.iter().map(|&c| c % field.p()).collect()).collect();
        Ok(Subspace { n, field, basis: reduce_rows(reduced, field) })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<FieldElement>] {
        &self.basis
    }

    pub fn join(&self, other: &Subspace) -> Subspace {
        let mut vectors = self.basis.clone();
        vectors.extend(other.basis.iter().cloned());
        Subspace { n: self.n, field: self.field, basis: reduce_rows(vectors, self.field) }
    }

    pub fn contains(&self, v: &[FieldElement]) -> bool {
        let mut vectors = self.basis.clone();
        vectors.push(v.to_vec());
        reduce_rows(vectors, self.field).len() == self.dim()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }
}

/// A chain of strictly increasing subspaces, an element of the q-free left
/// regular band. The empty chain is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartialFlag {
    n: usize,
    field: PrimeField,
    chain: Vec<Subspace>,
}

impl PartialFlag {
    pub fn empty(n: usize, field: PrimeField) -> Self {
        PartialFlag { n, field, chain: vec![] }
    }

    /// Chain of spans of successive prefixes of `vectors`, repeats removed.
    pub fn from_vectors(n: usize, vectors: &[Vec<FieldElement>], field: PrimeField) -> Result<Self> {
        let mut out = Self::empty(n, field);
        for k in 1..=vectors.len() {
            let s = Subspace::span(n, &vectors[..k], field)?;
            out.push(s);
        }
        Ok(out)
    }

    pub fn line(line: &Line, field: PrimeField) -> Self {
        let n = line.dim();
        Self::from_vectors(n, &[line.vector()], field).expect("line has dimension n")
    }

    /// The first `k` subspaces `V_1, ..., V_k` of a complete flag.
    pub fn prefix_of(flag: &FlagRep, k: usize) -> Self {
        Self::from_vectors(flag.n, &flag.columns()[..k], flag.field).expect("columns have length n")
    }

    pub fn of_flag(flag: &FlagRep) -> Self {
        Self::prefix_of(flag, flag.n)
    }

    pub fn chain(&self) -> &[Subspace] {
        &self.chain
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    fn push(&mut self, s: Subspace) {
        if self.chain.last().map_or(0, Subspace::dim) < s.dim() {
            self.chain.push(s);
        }
    }

    /// `(V_1, ..., V_k) (W_1, ..., W_l) = (V_1, ..., V_k, V_k + W_1, ..., V_k + W_l)`
    /// with repeats removed.
    pub fn product(&self, other: &PartialFlag) -> PartialFlag {
        lrb_product(self, other)
    }
}

pub fn lrb_product(a: &PartialFlag, b: &PartialFlag) -> PartialFlag {
    let mut out = a.clone();
    let top = a.chain.last().cloned().unwrap_or_else(|| Subspace::zero(a.n, a.field));
    for w in &b.chain {
        out.push(top.join(w));
    }
    out
}

/// Stationary probability of `flag` from paths in the right Cayley graph of
/// the left regular band generated by the weighted lines. Rates must sum to 1.
pub fn rcayley_stationary<T: Scalar>(rates: &PermRates<T>, flag: &FlagRep) -> Result<T> {
    let n = flag.n;
    let field = flag.field;
    check_rates(rates, n, field)?;
    if !(rates.total() - T::one()).is_zero() {
        return Err(Error::InvalidRates("rates must sum to 1".into()));
    }
    let generators: Vec<(PartialFlag, T)> =
        enumerate_lines(n, field).iter().map(|l| (PartialFlag::line(l, field), line_weight(l, rates))).collect();
    let prefixes: Vec<PartialFlag> = (0..=n).map(|k| PartialFlag::prefix_of(flag, k)).collect();
    let weight_of = |from: &PartialFlag, to: &PartialFlag| {
        generators.iter().filter(|(g, _)| from.product(g) == *to).fold(T::zero(), |acc, (_, w)| acc + w.clone())
    };
    let mut value = T::one();
    for k in 1..=n {
        value = value * weight_of(&prefixes[k - 1], &prefixes[k]);
    }
    for (k, prefix) in prefixes.iter().enumerate().take(n).skip(1) {
        let leave = T::one() - weight_of(prefix, prefix);
        if leave.is_zero() {
            return Err(Error::ZeroDenominator { state: flag.to_string(), factor: k });
        }
        value = value / leave;
    }
    Ok(value)
}

/// Distinct flags reachable from `flag` by replacing `V_i`; used to
/// cross-check the coset generator.
pub fn neighbours_at(flag: &FlagRep, i: usize) -> Vec<FlagRep> {
    let field = flag.field;
    let cols = flag.columns();
    let below = Subspace::span(flag.n, &cols[..i - 1], field).expect("columns have length n");
    let current = Subspace::span(flag.n, &cols[..i], field).expect("columns have length n");
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for a in 0..field.p() {
        for b in 0..field.p() {
            let v: Vec<u32> = cols[i - 1].iter().zip(&cols[i]).map(|(&x, &y)| field.add(field.mul(a, x), field.mul(b, y))).collect();
            if below.contains(&v) {
                continue;
            }
            let w = below.join(&Subspace::span(flag.n, std::slice::from_ref(&v), field).expect("length n"));
            if w == current || !seen.insert(w) {
                continue;
            }
            let mut new_cols = cols[..i - 1].to_vec();
            new_cols.push(v);
            new_cols.extend(cols[i - 1..].iter().cloned());
            out.push(from_columns(flag.n, canonical_columns(new_cols, field), field).expect("spans F_p^n"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::coinv;
    use crate::{parse_rational, Rational};
    use proptest::prelude::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn r(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn rates(p: u64, x: &[&str]) -> PermRates<Rational> {
        PermRates::new(Rational::from_integer(p.into()), x.iter().map(|v| r(v)).collect()).unwrap()
    }

    #[test]
    fn primes_are_checked() {
        assert!(PrimeField::new(2).is_ok());
        assert!(PrimeField::new(7).is_ok());
        assert_eq!(PrimeField::new(4), Err(Error::NotPrime(4)));
        assert_eq!(PrimeField::new(1), Err(Error::NotPrime(1)));
        assert_eq!(f(7).inv(3), 5);
    }

    #[test]
    fn line_counts() {
        assert_eq!(enumerate_lines(2, f(2)).len(), 3);
        assert_eq!(enumerate_lines(3, f(2)).len(), 7);
        assert_eq!(enumerate_lines(3, f(3)).len(), 13);
        let vecs: Vec<Vec<u32>> = enumerate_lines(2, f(2)).iter().map(Line::vector).collect();
        assert_eq!(vecs, vec![vec![1, 0], vec![1, 1], vec![0, 1]]);
    }

    #[test]
    fn line_weights_by_lead() {
        let x = rates(2, &["1/2", "1/3", "1/6"]);
        let lines = enumerate_lines(3, f(2));
        for i in 1..=3 {
            let same: Vec<_> = lines.iter().filter(|l| l.lead() == i).collect();
            assert_eq!(same.len(), 1 << (3 - i));
            assert!(same.iter().all(|l| line_weight(l, &x) == x.y(i)));
        }
        let total = lines.iter().fold(Rational::from_integer(0.into()), |acc, l| acc + line_weight(l, &x));
        assert_eq!(total, x.total());
        let example = Line::spanned_by(&[1, 1, 0], f(3)).unwrap();
        let x3 = rates(3, &["1", "1", "1"]);
        assert_eq!(line_weight(&example, &x3), r("1/9"));
    }

    #[test]
    fn coset_example_reduces() {
        let m = vec![vec![1, 0, 1, 0], vec![1, 1, 0, 0], vec![0, 1, 2, 1]];
        let c = canonicalize_coset(&m, f(3)).unwrap();
        assert_eq!(c.rows(), vec![vec![1, 0, 0], vec![1, 1, 0], vec![0, 1, 1]]);

        let original = canonicalize_coset(&[vec![0, 1, 0], vec![1, 0, 0], vec![1, 2, 1]], f(3)).unwrap();
        assert_eq!(original.coset_perm().to_string(), "213");
        let line = Line::spanned_by(&[1, 1, 0], f(3)).unwrap();
        assert_eq!(insert_line(&original, &line).unwrap(), c);
    }

    #[test]
    fn flag_counts_and_coset_sizes() {
        assert_eq!(enumerate_flags(2, f(2)).len(), 3);
        assert_eq!(enumerate_flags(3, f(2)).len(), 21);
        assert_eq!(enumerate_flags(3, f(3)).len(), 52);
        for p in [2, 3] {
            for n in 1..=4 {
                let flags = enumerate_flags(n, f(p));
                assert_eq!(flags.len() as u128, flag_count(n, f(p)));
                let distinct: HashSet<_> = flags.iter().collect();
                assert_eq!(distinct.len(), flags.len());
            }
        }
        let sizes: Vec<usize> = Permutation::all(3).iter().map(|pi| enumerate_coset(pi, f(2)).len()).collect();
        assert_eq!(sizes, vec![8, 4, 4, 2, 2, 1]);
        for pi in Permutation::all(4) {
            assert_eq!(enumerate_coset(&pi, f(3)).len(), 3usize.pow(coinv(pi.as_slice()) as u32));
        }
    }

    #[test]
    fn two_dimensional_flags() {
        let rows: Vec<Vec<Vec<u32>>> = enumerate_flags(2, f(2)).iter().map(FlagRep::rows).collect();
        assert_eq!(rows, vec![vec![vec![1, 0], vec![0, 1]], vec![vec![1, 0], vec![1, 1]], vec![vec![0, 1], vec![1, 0]]]);
    }

    #[test]
    fn permutation_matrices_give_their_labels() {
        for pi in Permutation::all(4) {
            let mut rows = vec![vec![0; 4]; 4];
            for j in 0..4 {
                rows[pi.at(j + 1) - 1][j] = 1;
            }
            let flag = canonicalize_coset(&rows, f(2)).unwrap();
            assert_eq!(flag.rows(), rows);
            assert_eq!(flag.coset_perm(), pi);
        }
        let alpha = canonicalize_coset(&[vec![0, 1, 0], vec![0, 2, 1], vec![1, 0, 0]], f(3)).unwrap();
        assert_eq!(alpha.coset_perm().to_string(), "312");
    }

    #[test]
    fn enumerated_flags_are_canonical() {
        for flag in enumerate_flags(3, f(3)) {
            assert_eq!(canonicalize_coset(&flag.rows(), f(3)).unwrap(), flag);
            assert_eq!(FlagRep::parse(&flag.to_string(), f(3)).unwrap(), flag);
        }
        assert!(FlagRep::parse("11|01", f(2)).is_err());
        assert!(FlagRep::parse("10|10", f(2)).is_err());
    }

    #[test]
    fn serialization() {
        let flag = canonicalize_coset(&[vec![0, 1, 0], vec![1, 0, 0], vec![1, 0, 1]], f(2)).unwrap();
        assert_eq!(flag.to_string(), "010|100|101");
    }

    #[test]
    fn singular_matrices_are_rejected() {
        assert_eq!(canonicalize_coset(&[vec![1, 2], vec![2, 4]], f(3)), Err(Error::SingularMatrix { p: 3 }));
    }

    #[test]
    fn inserting_lines_in_the_plane() {
        let flag = canonicalize_coset(&[vec![1, 0], vec![0, 1]], f(2)).unwrap();
        let images: Vec<Vec<Vec<u32>>> =
            enumerate_lines(2, f(2)).iter().map(|l| insert_line(&flag, l).unwrap().rows()).collect();
        assert_eq!(images, vec![vec![vec![1, 0], vec![0, 1]], vec![vec![1, 0], vec![1, 1]], vec![vec![0, 1], vec![1, 0]]]);
        let x = rates(2, &["1/3", "2/3"]);
        let t = transition_matrix_flags(&x, f(2)).unwrap();
        let row: Vec<Rational> = t.matrix().row(t.index_of(&flag).unwrap()).to_vec();
        assert_eq!(row, vec![r("1/6"), r("1/6"), r("2/3")]);
    }

    #[test]
    fn inserting_own_first_line_is_identity() {
        for flag in enumerate_flags(3, f(3)) {
            assert_eq!(insert_line(&flag, &flag.first_line()).unwrap(), flag);
        }
    }

    #[test]
    fn two_constructions_of_the_flag_operator_agree() {
        for (p, x) in [(2, vec!["1/2", "1/3", "1/6"]), (3, vec!["2/7", "1/7", "4/7"])] {
            let x = rates(p, &x);
            let a = transition_matrix_flags(&x, f(p)).unwrap();
            let b = transition_matrix_flags_hecke(&x, f(p)).unwrap();
            assert_eq!(a, b);
            assert!(a.matrix().row_sums().iter().all(|s| *s == x.total()));
        }
    }

    #[test]
    fn coset_generator_relations_and_neighbours() {
        let q = r("2");
        let t: Vec<_> = (1..3).map(|i| hecke_generator_coset::<Rational>(i, 3, f(2)).unwrap()).collect();
        let id = Matrix::identity(21);
        for (i, ti) in (1..).zip(&t) {
            let m = ti.matrix();
            assert!(m.add(&id).unwrap().mul(&m.shift(&q)).unwrap().is_zero());
            for flag in ti.states() {
                let mut expected = neighbours_at(flag, i);
                expected.sort_by_key(ToString::to_string);
                let row = m.row(ti.index_of(flag).unwrap());
                let mut actual: Vec<FlagRep> = ti.states().iter().zip(row).filter(|(_, v)| **v != r("0")).map(|(s, v)| {
                    assert_eq!(*v, r("1"));
                    s.clone()
                }).collect();
                actual.sort_by_key(ToString::to_string);
                assert_eq!(actual, expected);
            }
        }
        let braid_l = t[0].then(&t[1]).unwrap().then(&t[0]).unwrap();
        let braid_r = t[1].then(&t[0]).unwrap().then(&t[1]).unwrap();
        assert_eq!(braid_l, braid_r);
    }

    #[test]
    fn lrb_example_in_three_dimensions() {
        let field = f(2);
        let v = PartialFlag::from_vectors(3, &[vec![1, 1, 0], vec![1, 0, 0]], field).unwrap();
        let w = PartialFlag::from_vectors(3, &[vec![0, 1, 0], vec![0, 0, 1]], field).unwrap();
        let vw = v.product(&w);
        let expected = PartialFlag::from_vectors(3, &[vec![1, 1, 0], vec![1, 0, 0], vec![0, 0, 1]], field).unwrap();
        assert_eq!(vw, expected);
        let wv = w.product(&v);
        let expected = PartialFlag::from_vectors(3, &[vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]], field).unwrap();
        assert_eq!(wv, expected);
        assert_eq!(wv.len(), 3);
    }

    #[test]
    fn cayley_stationary_of_antidominant_flag() {
        let x = rates(2, &["1/2", "1/3", "1/6"]);
        let anti = enumerate_coset(&Permutation::longest(3), f(2)).remove(0);
        let (x1, x2, x3) = (x.x_at(1), x.x_at(2), x.x_at(3));
        assert_eq!(rcayley_stationary(&x, &anti).unwrap(), x2 * x3 / (x1 + x.x_at(2)));
        let total = enumerate_flags(3, f(2)).iter().fold(r("0"), |acc, fl| acc + rcayley_stationary(&x, fl).unwrap());
        assert_eq!(total, r("1"));
        assert!(rcayley_stationary(&rates(2, &["1", "1", "1"]), &anti).is_err());
    }

    fn partial_flag_strategy() -> impl Strategy<Value = PartialFlag> {
        prop::collection::vec(prop::collection::vec(0u32..3, 3), 0..=3)
            .prop_map(|vs| PartialFlag::from_vectors(3, &vs, f(3)).unwrap())
    }

    fn invertible_strategy(lower: bool) -> impl Strategy<Value = Vec<Vec<u32>>> {
        (prop::collection::vec(1u32..3, 3), prop::collection::vec(0u32..3, 3)).prop_map(move |(d, o)| {
            let mut m = vec![vec![0; 3]; 3];
            for i in 0..3 {
                m[i][i] = d[i];
            }
            if lower {
                m[1][0] = o[0];
                m[2][0] = o[1];
                m[2][1] = o[2];
            } else {
                m[0][1] = o[0];
                m[0][2] = o[1];
                m[1][2] = o[2];
            }
            m
        })
    }

    fn mat_mul_fp(a: &[Vec<u32>], b: &[Vec<u32>], field: PrimeField) -> Vec<Vec<u32>> {
        (0..a.len())
            .map(|i| (0..b[0].len()).map(|j| (0..b.len()).fold(0, |acc, k| field.add(acc, field.mul(a[i][k], b[k][j])))).collect())
            .collect()
    }

    proptest! {
        #[test]
        fn lrb_axioms(a in partial_flag_strategy(), b in partial_flag_strategy()) {
            prop_assert_eq!(a.product(&a), a.clone());
            prop_assert_eq!(a.product(&b).product(&a), a.product(&b));
        }

        #[test]
        fn canonical_form_is_constant_on_cosets(idx in 0usize..52, b in invertible_strategy(false)) {
            let field = f(3);
            let flag = &enumerate_flags(3, field)[idx];
            let gb = mat_mul_fp(&flag.rows(), &b, field);
            prop_assert_eq!(&canonicalize_coset(&gb, field).unwrap(), flag);
        }

        #[test]
        fn insert_line_keeps_a_valid_flag(idx in 0usize..52, l in 0usize..13) {
            let field = f(3);
            let flag = &enumerate_flags(3, field)[idx];
            let line = &enumerate_lines(3, field)[l];
            let image = insert_line(flag, line).unwrap();
            prop_assert_eq!(&canonicalize_coset(&image.rows(), field).unwrap(), &image);
            prop_assert_eq!(image.first_line(), line.clone());
        }

        #[test]
        fn lower_triangular_action_commutes(h in invertible_strategy(true)) {
            let field = f(3);
            let x = rates(3, &["1/2", "1/5", "3/10"]);
            let t = transition_matrix_flags(&x, field).unwrap();
            let sigma: Vec<usize> = t.states().iter().map(|s| t.index_of(&s.left_multiply(&h).unwrap()).unwrap()).collect();
            let m = t.matrix();
            for a in 0..m.rows() {
                for b in 0..m.cols() {
                    prop_assert_eq!(&m[(a, b)], &m[(sigma[a], sigma[b])]);
                }
            }
        }
    }
}
