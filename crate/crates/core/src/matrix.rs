//! Small dense matrices over a coefficient field, and determinants over
//! commutative rings by row expansion.

use crate::error::{Error, Result};
use crate::scalar::Coeff;

/// Relative pivot size below which a floating-point matrix is treated as singular.
pub const FLOAT_SINGULAR_RTOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<C> {
    rows: usize,
    cols: usize,
    data: Vec<C>,
}

impl<C: Coeff> Matrix<C> {
    pub fn from_rows(rows: Vec<Vec<C>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != ncols) {
            return Err(Error::Shape("ragged matrix rows".into()));
        }
        Ok(Matrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> C) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn identity(size: usize) -> Self {
        Self::from_fn(size, size, |i, j| if i == j { C::one() } else { C::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &C {
        &self.data[i * self.cols + j]
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Matrix<D> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(C::zero(), |acc, k| {
                acc + self.get(i, k).clone() * rhs.get(k, j).clone()
            })
        }))
    }

    fn max_abs(&self) -> f64 {
        self.data.iter().map(Coeff::abs_f64).fold(0.0, f64::max)
    }

    /// Gauss–Jordan inverse with partial pivoting.
    ///
    /// Exact scalars are singular only when a pivot column is identically zero;
    /// floating-point scalars are also rejected when the best pivot falls below
    /// [`FLOAT_SINGULAR_RTOL`] relative to the largest entry.
    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::Shape("inverse of a non-square matrix".into()));
        }
        let size = self.rows;
        let floor = match C::MODE {
            crate::scalar::ScalarMode::Exact => 0.0,
            crate::scalar::ScalarMode::Float => FLOAT_SINGULAR_RTOL * self.max_abs(),
        };
        let mut a = self.clone();
        let mut inv = Self::identity(size);
        for col in 0..size {
            let pivot = (col..size)
                .filter(|&r| !a.get(r, col).is_zero())
                .max_by(|&x, &y| a.get(x, col).abs_f64().total_cmp(&a.get(y, col).abs_f64()))
                .ok_or(Error::Singular)?;
            if a.get(pivot, col).abs_f64() <= floor {
                return Err(Error::Singular);
            }
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let scale = a.get(col, col).inv().ok_or(Error::Singular)?;
            a.scale_row(col, &scale);
            inv.scale_row(col, &scale);
            for r in 0..size {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let factor = a.get(r, col).clone();
                a.subtract_row_multiple(r, col, &factor);
                inv.subtract_row_multiple(r, col, &factor);
            }
        }
        Ok(inv)
    }

    /// Determinant by Gaussian elimination.
    pub fn determinant(&self) -> Result<C> {
        if self.rows != self.cols {
            return Err(Error::Shape("determinant of a non-square matrix".into()));
        }
        let size = self.rows;
        let mut a = self.clone();
        let mut det = C::one();
        for col in 0..size {
            let Some(pivot) = (col..size)
                .filter(|&r| !a.get(r, col).is_zero())
                .max_by(|&x, &y| a.get(x, col).abs_f64().total_cmp(&a.get(y, col).abs_f64()))
            else {
                return Ok(C::zero());
            };
            if pivot != col {
                a.swap_rows(col, pivot);
                det = -det;
            }
            let p = a.get(col, col).clone();
            let p_inv = p.inv().expect("nonzero pivot");
            for r in col + 1..size {
                if a.get(r, col).is_zero() {
                    continue;
                }
                let factor = a.get(r, col).clone() * p_inv.clone();
                a.subtract_row_multiple(r, col, &factor);
            }
            det = det * p;
        }
        Ok(det)
    }

    /// Whether `self` is unitary, exactly for exact scalars and entrywise within
    /// `tol` for floating-point scalars.
    pub fn is_unitary(&self, tol: f64) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let Ok(product) = self.adjoint().mul(self) else {
            return false;
        };
        let id = Self::identity(self.rows);
        product.data.iter().zip(&id.data).all(|(x, y)| match C::MODE {
            crate::scalar::ScalarMode::Exact => x == y,
            crate::scalar::ScalarMode::Float => (x.clone() - y.clone()).abs_f64() <= tol,
        })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, row: usize, s: &C) {
        for j in 0..self.cols {
            let idx = row * self.cols + j;
            self.data[idx] = self.data[idx].clone() * s.clone();
        }
    }

    fn subtract_row_multiple(&mut self, target: usize, source: usize, factor: &C) {
        for j in 0..self.cols {
            let s = self.data[source * self.cols + j].clone();
            if s.is_zero() {
                continue;
            }
            let idx = target * self.cols + j;
            self.data[idx] = self.data[idx].clone() - factor.clone() * s;
        }
    }
}

/// Ring operations needed by [`expand_determinant`]. Entries must commute.
pub(crate) trait DetEntry: Clone {
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
}

/// Fraction-free determinant over a commutative ring by Laplace expansion
/// along rows, memoised over the set of consumed columns.
pub(crate) fn expand_determinant<T: DetEntry>(
    size: usize,
    entry: impl Fn(usize, usize) -> T,
    zero: T,
    one: T,
) -> T {
    if size == 0 {
        return one;
    }
    assert!(size <= 16, "determinant expansion limited to 16x16");
    let full = (1usize << size) - 1;
    let mut layer: Vec<Option<T>> = vec![None; 1 << size];
    layer[0] = Some(one);
    for mask in 0..full {
        let Some(acc) = layer[mask].take() else {
            continue;
        };
        let row = mask.count_ones() as usize;
        for col in 0..size {
            if mask & (1 << col) != 0 {
                continue;
            }
            let a = entry(row, col);
            if a.is_zero() {
                continue;
            }
            // Position of `col` among the still-unused columns gives the sign.
            let position = col - (mask & ((1 << col) - 1)).count_ones() as usize;
            let mut term = acc.mul(&a);
            if position % 2 == 1 {
                term = term.neg();
            }
            let next = mask | (1 << col);
            layer[next] = Some(match layer[next].take() {
                Some(existing) => existing.add(&term),
                None => term,
            });
        }
    }
    layer[full].take().unwrap_or(zero)
}
