//! Dense matrices over an exact field: determinant, inverse, kernel and
//! linear solves by fraction-free-enough Gaussian elimination.

use super::{Cyclotomic, ExactError, Rational};
use num::{One, Zero};
use std::fmt;

/// Minimal field interface needed by the exact linear algebra.
pub trait Field: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Result<Self, ExactError>;
    fn neg(&self) -> Self;
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Result<Self, ExactError> {
        if Zero::is_zero(other) {
            return Err(ExactError::DivisionByZero);
        }
        Ok(self / other)
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Field for Cyclotomic {
    fn zero() -> Self {
        Cyclotomic::zero()
    }
    fn one() -> Self {
        Cyclotomic::one()
    }
    fn is_zero(&self) -> bool {
        Cyclotomic::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        Cyclotomic::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        Cyclotomic::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Cyclotomic::mul(self, other)
    }
    fn div(&self, other: &Self) -> Result<Self, ExactError> {
        Cyclotomic::div(self, other)
    }
    fn neg(&self) -> Self {
        Cyclotomic::neg(self)
    }
}

#[derive(Clone, PartialEq)]
pub struct Matrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn new(rows: usize, cols: usize, data: Vec<F>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
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

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = F::zero();
            for k in 0..self.cols {
                acc = acc.add(&self[(i, k)].mul(&other[(k, j)]));
            }
            acc
        })
    }

    pub fn add_mat(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].add(&other[(i, j)]))
    }

    pub fn scale(&self, s: &F) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].mul(s))
    }

    /// Reduced row echelon form; returns (rref, pivot columns, det-if-square).
    fn rref(&self) -> (Self, Vec<usize>, Option<F>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut det = if self.rows == self.cols { Some(F::one()) } else { None };
        let mut row = 0;
        for col in 0..m.cols {
            if row >= m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                det = det.map(|_| F::zero());
                continue;
            };
            if p != row {
                for j in 0..m.cols {
                    let a = m[(p, j)].clone();
                    let b = m[(row, j)].clone();
                    m[(p, j)] = b;
                    m[(row, j)] = a;
                }
                det = det.map(|d| d.neg());
            }
            let pivot = m[(row, col)].clone();
            det = det.map(|d| d.mul(&pivot));
            for j in col..m.cols {
                m[(row, j)] = m[(row, j)].div(&pivot).expect("nonzero pivot");
            }
            for r in 0..m.rows {
                if r != row && !m[(r, col)].is_zero() {
                    let f = m[(r, col)].clone();
                    for j in col..m.cols {
                        let t = f.mul(&m[(row, j)]);
                        m[(r, j)] = m[(r, j)].sub(&t);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        if row < m.rows {
            det = det.map(|_| F::zero());
        }
        (m, pivots, det)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn determinant(&self) -> F {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        self.rref().2.expect("square")
    }

    /// Exact inverse; `inverse * self == identity` exactly.
    pub fn inverse(&self) -> Result<Self, ExactError> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = F::one();
        }
        let (r, pivots, _) = aug.rref();
        if pivots.len() < n || pivots.iter().enumerate().any(|(k, &c)| c != k) {
            return Err(ExactError::SingularMatrix);
        }
        Ok(Self::from_fn(n, n, |i, j| r[(i, n + j)].clone()))
    }

    /// Solve `self * x = rhs` for a single column.
    pub fn solve(&self, rhs: &[F]) -> Result<Vec<F>, ExactError> {
        assert_eq!(self.rows, rhs.len());
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Self::zeros(n, n + 1);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n)] = rhs[i].clone();
        }
        let (r, pivots, _) = aug.rref();
        if pivots.len() < n || pivots.iter().enumerate().any(|(k, &c)| c != k) {
            return Err(ExactError::SingularMatrix);
        }
        Ok((0..n).map(|i| r[(i, n)].clone()).collect())
    }

    /// Basis of the right kernel.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let (r, pivots, _) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![F::zero(); self.cols];
                v[fc] = F::one();
                for (prow, &pc) in pivots.iter().enumerate() {
                    v[pc] = r[(prow, fc)].neg();
                }
                v
            })
            .collect()
    }
}

impl<F: Field> std::ops::Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F: Field> std::ops::IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

impl<F: Field + fmt::Display> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}
