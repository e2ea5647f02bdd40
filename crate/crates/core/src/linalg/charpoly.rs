use super::Matrix;
use crate::arith::scalar::Scalar;

/// Characteristic polynomial `det(x I - A)`, coefficients low degree first, by the
/// Faddeev–LeVerrier recurrence. Needs characteristic zero (or larger than the size).
pub fn charpoly<T: Scalar>(a: &Matrix<T>) -> Vec<T> {
    assert!(a.is_square(), "charpoly of a non-square matrix");
    let n = a.rows;
    let ctx = &a.ctx;
    let mut coeffs = vec![T::zero_in(ctx); n + 1];
    coeffs[n] = T::one_in(ctx);
    let mut m = Matrix::zeros(ctx, n, n);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = a.mul(&m).expect("square");
        for i in 0..n {
            next.data[i][i] = next.data[i][i].add_ref(&coeffs[n - k + 1]);
        }
        let am = a.mul(&next).expect("square");
        let kinv = T::from_int(ctx, k as i64).inv().expect("characteristic too small");
        coeffs[n - k] = am.trace().mul_ref(&kinv).neg_ref();
        m = next;
    }
    coeffs
}

/// Evaluates a polynomial (low degree first) at a square matrix.
pub fn eval_poly_matrix<T: Scalar>(p: &[T], a: &Matrix<T>) -> Matrix<T> {
    let n = a.rows;
    let mut acc = Matrix::zeros(&a.ctx, n, n);
    for c in p.iter().rev() {
        acc = acc.mul(a).expect("square");
        for i in 0..n {
            acc.data[i][i] = acc.data[i][i].add_ref(c);
        }
    }
    acc
}

pub fn cayley_hamilton_holds<T: Scalar>(a: &Matrix<T>) -> bool {
    eval_poly_matrix(&charpoly(a), a).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, Rational};

    #[test]
    fn identity_and_companion() {
        let id = Matrix::<Rational>::identity(&(), 2);
        assert_eq!(charpoly(&id), vec![int(1), int(-2), int(1)]);
        // companion matrix of x^3 - 2x + 5
        let c = Matrix::from_rows(
            &(),
            3,
            vec![
                vec![int(0), int(1), int(0)],
                vec![int(0), int(0), int(1)],
                vec![int(-5), int(2), int(0)],
            ],
        );
        assert_eq!(charpoly(&c), vec![int(5), int(-2), int(0), int(1)]);
        assert!(cayley_hamilton_holds(&c));
    }
}
