use super::{dot, rref_rows, vec_mat, Matrix};
use crate::arith::scalar::Scalar;
use crate::error::{Error, Result};

/// A subspace of `T^ambient`, stored as a reduced row echelon basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<T: Scalar> {
    pub ctx: T::Ctx,
    pub ambient: usize,
    pub basis: Vec<Vec<T>>,
    pub pivots: Vec<usize>,
}

impl<T: Scalar> Subspace<T> {
    pub fn from_rows(ctx: &T::Ctx, ambient: usize, rows: Vec<Vec<T>>) -> Self {
        let order: Vec<usize> = (0..ambient).collect();
        let (basis, pivots) = rref_rows(rows, &order);
        Subspace {
            ctx: ctx.clone(),
            ambient,
            basis,
            pivots,
        }
    }

    pub(crate) fn from_basis_unchecked(ctx: &T::Ctx, ambient: usize, rows: Vec<Vec<T>>) -> Self {
        Self::from_rows(ctx, ambient, rows)
    }

    pub fn zero(ctx: &T::Ctx, ambient: usize) -> Self {
        Self::from_rows(ctx, ambient, Vec::new())
    }

    pub fn full(ctx: &T::Ctx, ambient: usize) -> Self {
        Self::from_rows(ctx, ambient, Matrix::<T>::identity(ctx, ambient).data)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_matrix(&self) -> Matrix<T> {
        Matrix::from_rows(&self.ctx, self.ambient, self.basis.clone())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                found: other.ambient,
            });
        }
        Ok(())
    }

    /// Coordinates of `v` in the echelon basis, or `None` when `v` is not in the subspace.
    pub fn coordinates(&self, v: &[T]) -> Option<Vec<T>> {
        let c: Vec<T> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let back = self.combine(&c);
        if back.as_slice() == v {
            Some(c)
        } else {
            None
        }
    }

    pub fn combine(&self, coords: &[T]) -> Vec<T> {
        vec_mat(coords, &self.basis_matrix())
    }

    pub fn contains(&self, v: &[T]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Self) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Ok(Self::from_rows(&self.ctx, self.ambient, rows))
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.dim() == 0 || other.dim() == 0 {
            return Ok(Self::zero(&self.ctx, self.ambient));
        }
        // Solve a*U = b*V through the left kernel of the stacked matrix [U; V].
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        let stacked = Matrix::from_rows(&self.ctx, self.ambient, rows);
        let ker = stacked.left_kernel();
        let u = self.basis_matrix();
        let vecs = ker
            .basis
            .iter()
            .map(|k| vec_mat(&k[..self.dim()], &u))
            .collect();
        Ok(Self::from_rows(&self.ctx, self.ambient, vecs))
    }

    /// `{ v : <u, v> = 0 for all u }` where `<u, v> = u G v^T`.
    pub fn perp(&self, gram: &Matrix<T>) -> Result<Self> {
        if gram.rows != self.ambient || !gram.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                found: gram.rows,
            });
        }
        if gram.rank() < self.ambient {
            return Err(Error::SingularGram);
        }
        let ug = self.basis_matrix().mul(gram)?;
        Ok(ug.right_kernel())
    }

    /// Image of the subspace under `v -> v * M`.
    pub fn image_under(&self, m: &Matrix<T>) -> Self {
        let rows = self.basis.iter().map(|v| vec_mat(v, m)).collect();
        Self::from_rows(&self.ctx, m.cols, rows)
    }

    /// Matrix of an operator on this subspace with respect to the echelon basis, given its
    /// action on ambient vectors. Fails when the subspace is not stable.
    pub fn restrict(&self, op: impl Fn(&[T]) -> Vec<T>) -> Result<Matrix<T>> {
        let mut data = Vec::with_capacity(self.dim());
        for v in &self.basis {
            let w = op(v);
            match self.coordinates(&w) {
                Some(c) => data.push(c),
                None => return Err(Error::DomainNotStable("image leaves the subspace".into())),
            }
        }
        Ok(Matrix::from_rows(&self.ctx, self.dim(), data))
    }

    /// Gram matrix of the restricted bilinear form.
    pub fn gram(&self, gram: &Matrix<T>) -> Matrix<T> {
        let ug: Vec<Vec<T>> = self.basis.iter().map(|u| vec_mat(u, gram)).collect();
        let data = ug
            .iter()
            .map(|x| self.basis.iter().map(|v| dot(x, v, &self.ctx)).collect())
            .collect();
        Matrix::from_rows(&self.ctx, self.dim(), data)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, Rational};

    fn sub(rows: &[&[i64]]) -> Subspace<Rational> {
        let n = rows.first().map_or(3, |r| r.len());
        Subspace::from_rows(&(), n, rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    #[test]
    fn grassmann_and_perp() {
        let u = sub(&[&[1, 0, 0, 1], &[0, 1, 1, 0]]);
        let v = sub(&[&[1, 1, 1, 1], &[0, 0, 1, 2]]);
        let s = u.sum(&v).unwrap();
        let i = u.intersect(&v).unwrap();
        assert_eq!(s.dim() + i.dim(), u.dim() + v.dim());
        assert!(i.contains(&[int(1), int(1), int(1), int(1)]));
        assert_eq!(u.intersect(&u).unwrap(), u);
        let g = Matrix::identity(&(), 4);
        let p = u.perp(&g).unwrap();
        assert_eq!(p.dim(), 2);
        assert_eq!(p.perp(&g).unwrap(), u);
        assert_eq!(Subspace::<Rational>::full(&(), 4).perp(&g).unwrap().dim(), 0);
    }
}
