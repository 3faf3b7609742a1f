//! Scalar abstraction and dense matrices with exact elimination.

use std::fmt::{Debug, Display};
use std::ops::{Index, IndexMut};

use num_traits::{FromPrimitive, Num, Signed, Zero};

use crate::error::{Error, Result};

/// Field-like scalar: exact rationals or floating point.
pub trait Scalar:
    Clone + Debug + Display + PartialEq + PartialOrd + Num + Signed + FromPrimitive + Send + Sync
{
}

impl<T> Scalar for T where
    T: Clone + Debug + Display + PartialEq + PartialOrd + Num + Signed + FromPrimitive + Send + Sync
{
}

pub fn int<T: Scalar>(v: i64) -> T {
    T::from_i64(v).expect("integer representable in scalar type")
}

/// `base^exp` for any integer exponent; `base` must be nonzero when `exp < 0`.
pub fn ipow<T: Scalar>(base: &T, exp: i64) -> T {
    let mut acc = T::one();
    for _ in 0..exp.unsigned_abs() {
        acc = acc * base.clone();
    }
    if exp < 0 {
        T::one() / acc
    } else {
        acc
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn diagonal(diag: Vec<T>) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, d) in diag.into_iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, s: &T) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v.clone() * s.clone()).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        })
    }

    /// `self - lambda * I`.
    pub fn shift(&self, lambda: &T) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            m[(i, i)] = m[(i, i)].clone() - lambda.clone();
        }
        m
    }

    pub fn row_sums(&self) -> Vec<T> {
        (0..self.rows)
            .map(|i| self.row(i).iter().fold(T::zero(), |acc, v| acc + v.clone()))
            .collect()
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} rows",
                v.len(),
                self.rows
            )));
        }
        let mut out = vec![T::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, a) in self.row(i).iter().enumerate() {
                if !a.is_zero() {
                    out[j] = out[j].clone() + vi.clone() * a.clone();
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        mat_mul(self, other)
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }
}


impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// Matrix product, skipping zero entries of the left factor.
pub fn mat_mul<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut out = Matrix::<T>::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = &a[(i, k)];
            if aik.is_zero() {
                continue;
            }
            for j in 0..b.cols {
                let bkj = &b[(k, j)];
                if !bkj.is_zero() {
                    out[(i, j)] = out[(i, j)].clone() + aik.clone() * bkj.clone();
                }
            }
        }
    }
    Ok(out)
}

/// Rank and nullity (`cols - rank`) by fraction-free Bareiss elimination.
#[allow(clippy::needless_range_loop)]
pub fn rank_nullity<T: Scalar>(m: &Matrix<T>) -> (usize, usize) {
    let mut a = m.to_rows();
    let (rows, cols) = (m.rows, m.cols);
    let mut prev = T::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank][col].clone();
        for i in rank + 1..rows {
            let factor = a[i][col].clone();
            for j in col + 1..cols {
                let v = pivot.clone() * a[i][j].clone() - factor.clone() * a[rank][j].clone();
                a[i][j] = v / prev.clone();
            }
            a[i][col] = T::zero();
        }
        prev = pivot;
        rank += 1;
    }
    (rank, cols - rank)
}

/// Reduced row echelon form; returns the reduced rows and pivot columns.
pub fn rref<T: Scalar>(m: &Matrix<T>) -> (Vec<Vec<T>>, Vec<usize>) {
    let mut a = m.to_rows();
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = T::one() / a[r][col].clone();
        let support: Vec<usize> = (col..cols).filter(|&j| !a[r][j].is_zero()).collect();
        for &j in &support {
            a[r][j] = a[r][j].clone() * inv.clone();
        }
        let (before, rest) = a.split_at_mut(r);
        let (pivot_row, after) = rest.split_first_mut().expect("pivot row exists");
        for row in before.iter_mut().chain(after.iter_mut()) {
            let factor = row[col].clone();
            if factor.is_zero() {
                continue;
            }
            for &j in &support {
                row[j] = row[j].clone() - factor.clone() * pivot_row[j].clone();
            }
        }
        pivots.push(col);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

/// Row echelon form by forward elimination only. Among candidate rows the
/// sparsest is taken as pivot to limit fill-in.
fn echelon<T: Scalar>(m: &Matrix<T>) -> (Vec<Vec<T>>, Vec<usize>) {
    let mut a = m.to_rows();
    let (rows, cols) = (m.rows, m.cols);
    let mut weight: Vec<usize> = a.iter().map(|r| r.iter().filter(|v| !v.is_zero()).count()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).filter(|&i| !a[i][col].is_zero()).min_by_key(|&i| weight[i]) else {
            continue;
        };
        a.swap(r, p);
        weight.swap(r, p);
        let support: Vec<usize> = (col..cols).filter(|&j| !a[r][j].is_zero()).collect();
        let inv = T::one() / a[r][col].clone();
        let (head, tail) = a.split_at_mut(r + 1);
        let pivot_row = &head[r];
        for (offset, row) in tail.iter_mut().enumerate() {
            if row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone() * inv.clone();
            for &j in &support {
                row[j] = row[j].clone() - factor.clone() * pivot_row[j].clone();
            }
            weight[r + 1 + offset] = row.iter().filter(|v| !v.is_zero()).count();
        }
        pivots.push(col);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

/// Basis of `{ v : M v = 0 }`, one vector per free column.
pub fn null_space<T: Scalar>(m: &Matrix<T>) -> Vec<Vec<T>> {
    let (upper, pivots) = echelon(m);
    let cols = m.cols;
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![T::zero(); cols];
            v[f] = T::one();
            for (row, &p) in upper.iter().zip(&pivots).rev() {
                let acc = row[p + 1..]
                    .iter()
                    .zip(&v[p + 1..])
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone());
                v[p] = -acc / row[p].clone();
            }
            v
        })
        .collect()
}

/// Basis of `{ v : v M = 0 }`.
pub fn left_null_space<T: Scalar>(m: &Matrix<T>) -> Vec<Vec<T>> {
    null_space(&m.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix<Rational>> {
        prop::collection::vec(-3i64..=3, rows * cols).prop_map(move |v| {
            Matrix::from_fn(rows, cols, |i, j| Rational::from_integer(v[i * cols + j].into()))
        })
    }

    #[test]
    fn ipow_handles_negative_exponents() {
        assert_eq!(ipow(&r(2, 1), -3), r(1, 8));
        assert_eq!(ipow(&r(2, 3), 2), r(4, 9));
        assert_eq!(ipow(&r(5, 1), 0), r(1, 1));
    }

    #[test]
    fn rank_of_known_matrices() {
        let m = Matrix::from_rows(vec![
            vec![r(1, 1), r(2, 1), r(3, 1)],
            vec![r(2, 1), r(4, 1), r(6, 1)],
            vec![r(1, 1), r(0, 1), r(1, 1)],
        ])
        .unwrap();
        assert_eq!(rank_nullity(&m), (2, 1));
        assert_eq!(rank_nullity(&Matrix::<Rational>::identity(4)), (4, 0));
        assert_eq!(rank_nullity(&Matrix::<Rational>::zeros(3, 2)), (0, 2));
    }

    #[test]
    fn left_null_space_of_stochastic_matrix() {
        let m = Matrix::from_rows(vec![vec![r(1, 2), r(1, 2)], vec![r(1, 4), r(3, 4)]]).unwrap();
        let ns = left_null_space(&m.shift(&r(1, 1)));
        assert_eq!(ns.len(), 1);
        let v = &ns[0];
        assert_eq!(v[1].clone() / v[0].clone(), r(2, 1));
    }

    #[test]
    fn mul_rejects_bad_shapes() {
        let a = Matrix::<Rational>::zeros(2, 3);
        assert!(mat_mul(&a, &a).is_err());
    }

    proptest! {
        #[test]
        fn rank_plus_nullity_is_cols(m in small_matrix(4, 5)) {
            let (rank, nullity) = rank_nullity(&m);
            prop_assert_eq!(rank + nullity, 5);
            prop_assert_eq!(null_space(&m).len(), nullity);
            prop_assert_eq!(rref(&m).1.len(), rank);
        }

        #[test]
        fn null_space_vectors_are_annihilated(m in small_matrix(4, 4)) {
            for v in left_null_space(&m) {
                prop_assert!(m.left_apply(&v).unwrap().iter().all(Zero::is_zero));
            }
        }

        #[test]
        fn product_is_associative(a in small_matrix(3, 3), b in small_matrix(3, 3), c in small_matrix(3, 3)) {
            let left = mat_mul(&mat_mul(&a, &b).unwrap(), &c).unwrap();
            let right = mat_mul(&a, &mat_mul(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }
    }
}
