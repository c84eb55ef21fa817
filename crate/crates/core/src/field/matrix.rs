use std::fmt::Debug;

use num_complex::Complex;
use num_traits::{Float, Zero};

use super::Field;

/// Relative tolerance for floating-point pivots. Heuristic: exact mode is authoritative.
pub const DEFAULT_FLOAT_TOLERANCE: f64 = 1e-9;

/// Dense row-major matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows(rows: Vec<Vec<T>>, cols: usize) -> Self {
        let mut m = Matrix::zeros(0, cols);
        for row in rows {
            m.push_row(row);
        }
        m
    }

    pub fn push_row(&mut self, row: Vec<T>) {
        assert_eq!(row.len(), self.cols, "row length does not match column count");
        self.data.extend(row);
        self.rows += 1;
    }

    pub fn transpose(&self) -> Self {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j].clone();
            }
        }
        out
    }

    pub fn map<U: Clone + Zero>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T> Matrix<T> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[T]> {
        (0..self.rows).map(move |i| self.row(i))
    }
}

impl<T: Field> Matrix<T> {
    pub fn rank(&self) -> usize {
        T::rank_of(self)
    }

    /// Product `self * other`.
    pub fn mul(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out: Matrix<T> = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j).clone() + a.clone() * other.get(k, j).clone();
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Fraction-free elimination.
    ///
    /// Rows are first scaled to integral entries, then reduced with the
    /// Bareiss update `a_ij <- (p a_ij - a_ic a_rj) / p_prev`; the division is
    /// exact in the ring of integers. Pivots are the first nonzero entry when
    /// scanning columns left to right and rows top to bottom.
    pub fn bareiss_rank(&self) -> usize {
        let (rows, cols) = (self.rows, self.cols);
        let mut a: Vec<Vec<T>> = (0..rows)
            .map(|i| {
                let row = self.row(i);
                let scale = T::integral_scale(row);
                row.iter().map(|x| x.clone() * scale.clone()).collect()
            })
            .collect();
        let mut prev_inv = T::one();
        let mut rank = 0;
        for c in 0..cols {
            if rank == rows {
                break;
            }
            let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            let (upper, lower) = a.split_at_mut(rank + 1);
            let pivot_row = &upper[rank];
            let pivot = pivot_row[c].clone();
            for row in lower.iter_mut() {
                let factor = std::mem::replace(&mut row[c], T::zero());
                for j in c + 1..cols {
                    let mut v = pivot.clone() * row[j].clone();
                    if !factor.is_zero() && !pivot_row[j].is_zero() {
                        v = v - factor.clone() * pivot_row[j].clone();
                    }
                    row[j] = v * prev_inv.clone();
                }
            }
            prev_inv = pivot
                .inverse()
                .expect("pivot is nonzero by construction");
            rank += 1;
        }
        rank
    }
}

impl<F> Matrix<Complex<F>>
where
    F: Float + Debug,
{
    /// Rank by Gaussian elimination with partial pivoting; a pivot counts when its
    /// magnitude exceeds `tol` times the largest entry of the input.
    pub fn pivoted_rank(&self, tol: F) -> usize {
        let (rows, cols) = (self.rows, self.cols);
        let scale = self.data.iter().fold(F::zero(), |m, z| m.max(z.norm()));
        if scale == F::zero() {
            return 0;
        }
        let threshold = tol * scale;
        let mut a: Vec<Vec<Complex<F>>> = (0..rows).map(|i| self.row(i).to_vec()).collect();
        let mut rank = 0;
        for c in 0..cols {
            if rank == rows {
                break;
            }
            let (p, best) = (rank..rows)
                .map(|i| (i, a[i][c].norm()))
                .fold((rank, F::neg_infinity()), |acc, x| if x.1 > acc.1 { x } else { acc });
            if best <= threshold {
                continue;
            }
            a.swap(rank, p);
            let pivot = a[rank][c];
            let (upper, lower) = a.split_at_mut(rank + 1);
            let pivot_row = &upper[rank];
            for row in lower.iter_mut() {
                let f = row[c] / pivot;
                if f == Complex::zero() {
                    continue;
                }
                for j in c..cols {
                    row[j] = row[j] - f * pivot_row[j];
                }
            }
            rank += 1;
        }
        rank
    }
}

impl<T: Debug> Debug for Matrix<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}
