//! Dense exact linear algebra over any [`Scalar`] field. Vectors are rows and matrices act
//! on the right, so the image of `v` under `M` is `v * M`.

mod charpoly;
mod subspace;

pub use charpoly::{cayley_hamilton_holds, charpoly, eval_poly_matrix};
pub use subspace::Subspace;

use crate::arith::scalar::Scalar;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T: Scalar> {
    pub ctx: T::Ctx,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<T>>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(ctx: &T::Ctx, rows: usize, cols: usize) -> Self {
        Matrix {
            ctx: ctx.clone(),
            rows,
            cols,
            data: vec![vec![T::zero_in(ctx); cols]; rows],
        }
    }

    pub fn identity(ctx: &T::Ctx, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.data[i][i] = T::one_in(ctx);
        }
        m
    }

    pub fn from_rows(ctx: &T::Ctx, cols: usize, data: Vec<Vec<T>>) -> Self {
        assert!(data.iter().all(|r| r.len() == cols), "ragged matrix rows");
        Matrix {
            ctx: ctx.clone(),
            rows: data.len(),
            cols,
            data,
        }
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(|x| x.eq_zero()))
    }

    pub fn transpose(&self) -> Self {
        let data = (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.data[i][j].clone()).collect())
            .collect();
        Matrix::from_rows(&self.ctx, self.rows, data)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let data = self.data.iter().map(|r| vec_mat(r, other)).collect();
        Ok(Matrix::from_rows(&self.ctx, other.cols, data))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a.add_ref(b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a.sub_ref(b))
    }

    fn zip(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| f(x, y)).collect())
            .collect();
        Ok(Matrix::from_rows(&self.ctx, self.cols, data))
    }

    pub fn scale(&self, c: &T) -> Self {
        let data = self
            .data
            .iter()
            .map(|r| r.iter().map(|x| x.mul_ref(c)).collect())
            .collect();
        Matrix::from_rows(&self.ctx, self.cols, data)
    }

    pub fn map<U: Scalar>(&self, ctx: &U::Ctx, f: impl Fn(&T) -> U) -> Matrix<U> {
        let data = self.data.iter().map(|r| r.iter().map(&f).collect()).collect();
        Matrix::from_rows(ctx, self.cols, data)
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero_in(&self.ctx), |acc, i| acc.add_ref(&self.data[i][i]))
    }

    /// Reduced row echelon form; returns the matrix (zero rows dropped) and pivot columns.
    pub fn rref(&self) -> (Vec<Vec<T>>, Vec<usize>) {
        let order: Vec<usize> = (0..self.cols).collect();
        rref_rows(self.data.clone(), &order)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// `{ v : v * M = 0 }`.
    pub fn left_kernel(&self) -> Subspace<T> {
        let t = self.transpose();
        Subspace::from_basis_unchecked(&self.ctx, self.rows, right_kernel_basis(&t))
    }

    /// `{ x : M * x = 0 }`, as row vectors.
    pub fn right_kernel(&self) -> Subspace<T> {
        Subspace::from_basis_unchecked(&self.ctx, self.cols, right_kernel_basis(self))
    }

    /// Row space of the matrix, i.e. the image of `v -> v * M`.
    pub fn image(&self) -> Subspace<T> {
        Subspace::from_rows(&self.ctx, self.cols, self.data.clone())
    }

    /// Solves `M x = b`. Returns one solution together with a basis of the right kernel.
    pub fn solve(&self, b: &[T]) -> Result<(Vec<T>, Subspace<T>)> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: b.len(),
            });
        }
        let aug: Vec<Vec<T>> = self
            .data
            .iter()
            .zip(b)
            .map(|(r, bi)| {
                let mut r = r.clone();
                r.push(bi.clone());
                r
            })
            .collect();
        let order: Vec<usize> = (0..=self.cols).collect();
        let (r, piv) = rref_rows(aug, &order);
        if piv.last() == Some(&self.cols) {
            return Err(Error::Inconsistent);
        }
        let mut x = vec![T::zero_in(&self.ctx); self.cols];
        for (row, &p) in r.iter().zip(&piv) {
            x[p] = row[self.cols].clone();
        }
        Ok((x, self.right_kernel()))
    }

    /// Solves `x M = b` for row vectors.
    pub fn solve_left(&self, b: &[T]) -> Result<Vec<T>> {
        Ok(self.transpose().solve(b)?.0)
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::SingularMatrix);
        }
        let n = self.rows;
        let aug: Vec<Vec<T>> = (0..n)
            .map(|i| {
                let mut r = self.data[i].clone();
                r.extend((0..n).map(|j| if i == j { T::one_in(&self.ctx) } else { T::zero_in(&self.ctx) }));
                r
            })
            .collect();
        let order: Vec<usize> = (0..2 * n).collect();
        let (r, piv) = rref_rows(aug, &order);
        if piv.len() < n || piv[n - 1] != n - 1 {
            return Err(Error::SingularMatrix);
        }
        let data = r.into_iter().map(|row| row[n..].to_vec()).collect();
        Ok(Matrix::from_rows(&self.ctx, n, data))
    }

    pub fn determinant(&self) -> T {
        assert!(self.is_square());
        let mut a = self.data.clone();
        let n = self.rows;
        let mut det = T::one_in(&self.ctx);
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].eq_zero()) else {
                return T::zero_in(&self.ctx);
            };
            if p != c {
                a.swap(p, c);
                det = det.neg_ref();
            }
            let piv = a[c][c].clone();
            det = det.mul_ref(&piv);
            let inv = piv.inv().expect("nonzero pivot");
            for r in c + 1..n {
                if a[r][c].eq_zero() {
                    continue;
                }
                let f = a[r][c].mul_ref(&inv);
                for j in c..n {
                    let t = f.mul_ref(&a[c][j]);
                    a[r][j] = a[r][j].sub_ref(&t);
                }
            }
        }
        det
    }
}

pub fn vec_mat<T: Scalar>(v: &[T], m: &Matrix<T>) -> Vec<T> {
    let mut out = vec![T::zero_in(&m.ctx); m.cols];
    for (vi, row) in v.iter().zip(&m.data) {
        if vi.eq_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(row) {
            if !x.eq_zero() {
                *o = o.add_ref(&vi.mul_ref(x));
            }
        }
    }
    out
}

pub fn dot<T: Scalar>(a: &[T], b: &[T], ctx: &T::Ctx) -> T {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.eq_zero() && !y.eq_zero())
        .fold(T::zero_in(ctx), |acc, (x, y)| acc.add_ref(&x.mul_ref(y)))
}

pub fn vec_add<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.add_ref(y)).collect()
}

pub fn vec_sub<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.sub_ref(y)).collect()
}

pub fn vec_scale<T: Scalar>(a: &[T], c: &T) -> Vec<T> {
    a.iter().map(|x| x.mul_ref(c)).collect()
}

pub fn is_zero_vec<T: Scalar>(a: &[T]) -> bool {
    a.iter().all(|x| x.eq_zero())
}

/// Gauss–Jordan elimination visiting columns in `order`; zero rows are dropped and the
/// remaining rows are sorted by pivot position in `order`.
pub fn rref_rows<T: Scalar>(mut rows: Vec<Vec<T>>, order: &[usize]) -> (Vec<Vec<T>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for &c in order {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].eq_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        if !inv.eq_one() {
            for x in rows[r].iter_mut() {
                if !x.eq_zero() {
                    *x = x.mul_ref(&inv);
                }
            }
        }
        let (before, rest) = rows.split_at_mut(r);
        let (prow, after) = rest.split_first_mut().unwrap();
        for row in before.iter_mut().chain(after.iter_mut()) {
            if row[c].eq_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(prow.iter()) {
                if !y.eq_zero() {
                    *x = x.sub_ref(&f.mul_ref(y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

fn right_kernel_basis<T: Scalar>(m: &Matrix<T>) -> Vec<Vec<T>> {
    let (r, piv) = m.rref();
    let mut out = Vec::new();
    for f in 0..m.cols {
        if piv.contains(&f) {
            continue;
        }
        let mut x = vec![T::zero_in(&m.ctx); m.cols];
        x[f] = T::one_in(&m.ctx);
        for (row, &p) in r.iter().zip(&piv) {
            x[p] = row[f].neg_ref();
        }
        out.push(x);
    }
    out
}
