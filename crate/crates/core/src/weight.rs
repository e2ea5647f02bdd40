//! The module V_{k,k} = V_k ⊗ conj(V_k): monomial basis, the twisted right action of 2×2
//! matrices, the invariant pairing and the plus-space involution.
//!
//! A vector is a flat coefficient list of length (k+1)^2; index i*(k+1) + j holds the
//! coefficient of X^{k-i} Y^i Xb^{k-j} Yb^j.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::rational::Rational;
use crate::arith::scalar::Scalar;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::quad::QuadInt;

/// A 2×2 matrix over O_d, acting on the right.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GMatrix {
    pub a: QuadInt,
    pub b: QuadInt,
    pub c: QuadInt,
    pub d: QuadInt,
}

impl GMatrix {
    pub fn new(a: QuadInt, b: QuadInt, c: QuadInt, d: QuadInt) -> Self {
        GMatrix { a, b, c, d }
    }

    pub fn from_ints(field: u32, e: [i64; 4]) -> Self {
        GMatrix::new(
            QuadInt::from_int(field, e[0]),
            QuadInt::from_int(field, e[1]),
            QuadInt::from_int(field, e[2]),
            QuadInt::from_int(field, e[3]),
        )
    }

    pub fn field(&self) -> u32 {
        self.a.d
    }

    pub fn identity(field: u32) -> Self {
        Self::from_ints(field, [1, 0, 0, 1])
    }

    pub fn det(&self) -> QuadInt {
        self.a.mul(&self.d).sub(&self.b.mul(&self.c))
    }

    pub fn mul(&self, o: &Self) -> Self {
        GMatrix {
            a: self.a.mul(&o.a).add(&self.b.mul(&o.c)),
            b: self.a.mul(&o.b).add(&self.b.mul(&o.d)),
            c: self.c.mul(&o.a).add(&self.d.mul(&o.c)),
            d: self.c.mul(&o.b).add(&self.d.mul(&o.d)),
        }
    }

    /// g^ι = det(g) g^{-1}, the adjugate.
    pub fn iota(&self) -> Self {
        GMatrix {
            a: self.d.clone(),
            b: self.b.neg(),
            c: self.c.neg(),
            d: self.a.clone(),
        }
    }

    pub fn conj(&self) -> Self {
        GMatrix {
            a: self.a.conj(),
            b: self.b.conj(),
            c: self.c.conj(),
            d: self.d.conj(),
        }
    }

    pub fn scale(&self, u: &QuadInt) -> Self {
        GMatrix {
            a: self.a.mul(u),
            b: self.b.mul(u),
            c: self.c.mul(u),
            d: self.d.mul(u),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&QuadInt::from_int(self.field(), -1))
    }

    /// Inverse of a matrix whose determinant is a unit.
    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        if !det.is_unit() {
            return Err(Error::SingularMatrix);
        }
        // det^{-1} = conj(det) for a unit of norm 1
        Ok(self.iota().scale(&det.conj()))
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        Ok((0..e.unsigned_abs()).fold(Self::identity(self.field()), |acc, _| acc.mul(&base)))
    }

    pub fn entries(&self) -> [&QuadInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// Equality up to multiplication by ±1.
    pub fn eq_projective(&self, o: &Self) -> bool {
        self == o || *self == o.neg()
    }

    /// Equality up to multiplication by any unit of O_d.
    pub fn eq_up_to_unit(&self, o: &Self) -> bool {
        QuadInt::units(self.field()).iter().any(|u| *self == o.scale(u))
    }

    pub fn is_identity_projective(&self) -> bool {
        self.eq_projective(&Self::identity(self.field()))
    }
}

/// The (k+1)×(k+1) matrix of g on V_k: row i holds the coefficients of (aX+bY)^{k-i}(cX+dY)^i.
pub fn rho_k(g: &GMatrix, k: usize) -> Vec<Vec<QuadInt>> {
    let field = g.field();
    let linear_power = |x: &QuadInt, y: &QuadInt, m: usize| -> Vec<QuadInt> {
        // (xX + yY)^m as coefficients of X^{m-j} Y^j
        let mut p = vec![QuadInt::one(field)];
        for _ in 0..m {
            let mut next = vec![QuadInt::zero(field); p.len() + 1];
            for (j, c) in p.iter().enumerate() {
                next[j] = next[j].add(&c.mul(x));
                next[j + 1] = next[j + 1].add(&c.mul(y));
            }
            p = next;
        }
        p
    };
    let ab: Vec<Vec<QuadInt>> = (0..=k).map(|m| linear_power(&g.a, &g.b, m)).collect();
    let cd: Vec<Vec<QuadInt>> = (0..=k).map(|m| linear_power(&g.c, &g.d, m)).collect();
    (0..=k)
        .map(|i| {
            let (p, q) = (&ab[k - i], &cd[i]);
            let mut row = vec![QuadInt::zero(field); k + 1];
            for (s, x) in p.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (t, y) in q.iter().enumerate() {
                    row[s + t] = row[s + t].add(&x.mul(y));
                }
            }
            row
        })
        .collect()
}

/// Maps x + yω into a field containing O_d.
#[derive(Clone, Debug)]
pub struct QuadMap<T: Scalar> {
    pub ctx: T::Ctx,
    pub omega: T,
}

impl<T: Scalar> QuadMap<T> {
    pub fn new(ctx: &T::Ctx, omega: T) -> Self {
        QuadMap {
            ctx: ctx.clone(),
            omega,
        }
    }

    pub fn map(&self, q: &QuadInt) -> T {
        let x = T::from_rational(&self.ctx, &Rational::from_integer(q.x.clone()));
        if q.y.is_zero() {
            return x;
        }
        let y = T::from_rational(&self.ctx, &Rational::from_integer(q.y.clone()));
        x.add_ref(&y.mul_ref(&self.omega))
    }

    pub fn map_rows(&self, m: &[Vec<QuadInt>]) -> Vec<Vec<T>> {
        m.iter().map(|r| r.iter().map(|q| self.map(q)).collect()).collect()
    }
}

/// The action of one matrix on V_{k,k} as the pair (ρ_k(g), ρ_k(conj g)).
#[derive(Clone, Debug)]
pub struct Action<T: Scalar> {
    pub k: usize,
    pub left: Vec<Vec<T>>,
    pub right: Vec<Vec<T>>,
    ctx: T::Ctx,
}

impl<T: Scalar> Action<T> {
    pub fn new(g: &GMatrix, k: usize, map: &QuadMap<T>) -> Self {
        Action {
            k,
            left: map.map_rows(&rho_k(g, k)),
            right: map.map_rows(&rho_k(&g.conj(), k)),
            ctx: map.ctx.clone(),
        }
    }

    /// v · g, computed as A^T C B on the coefficient matrix C.
    pub fn apply(&self, v: &[T]) -> Vec<T> {
        apply_pair(v, &self.left, &self.right, self.k, &self.ctx)
    }

    pub fn matrix(&self) -> Matrix<T> {
        let n = self.k + 1;
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut row = Vec::with_capacity(n * n);
                for ip in 0..n {
                    for jp in 0..n {
                        row.push(self.left[i][ip].mul_ref(&self.right[j][jp]));
                    }
                }
                data.push(row);
            }
        }
        Matrix::from_rows(&self.ctx, n * n, data)
    }
}

pub fn apply_pair<T: Scalar>(v: &[T], a: &[Vec<T>], b: &[Vec<T>], k: usize, ctx: &T::Ctx) -> Vec<T> {
    let n = k + 1;
    // M1 = C B
    let mut m1 = vec![T::zero_in(ctx); n * n];
    for i in 0..n {
        for j in 0..n {
            let c = &v[i * n + j];
            if c.eq_zero() {
                continue;
            }
            for jp in 0..n {
                let bj = &b[j][jp];
                if !bj.eq_zero() {
                    m1[i * n + jp] = m1[i * n + jp].add_ref(&c.mul_ref(bj));
                }
            }
        }
    }
    // out = A^T M1
    let mut out = vec![T::zero_in(ctx); n * n];
    for i in 0..n {
        for ip in 0..n {
            let aa = &a[i][ip];
            if aa.eq_zero() {
                continue;
            }
            for jp in 0..n {
                let m = &m1[i * n + jp];
                if !m.eq_zero() {
                    out[ip * n + jp] = out[ip * n + jp].add_ref(&aa.mul_ref(m));
                }
            }
        }
    }
    out
}

/// Full (k+1)^2 square matrix of v ↦ v·g.
pub fn action_matrix<T: Scalar>(g: &GMatrix, k: usize, map: &QuadMap<T>) -> Result<Matrix<T>> {
    if g.det().is_zero() {
        return Err(Error::SingularMatrix);
    }
    Ok(Action::new(g, k, map).matrix())
}

pub fn binomial(n: usize, r: usize) -> BigInt {
    (0..r).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// Pairing weights (-1)^α / C(k, α) of the factor pairing on V_k.
fn pairing_weights(k: usize) -> Vec<Rational> {
    (0..=k)
        .map(|a| {
            let s = if a % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            Rational::new(s, binomial(k, a))
        })
        .collect()
}

/// <P, Q> = Σ (-1)^{α+γ} C(k,α)^{-1} C(k,γ)^{-1} c_{αγ}(P) c_{k-α,k-γ}(Q).
pub fn pairing<T: Scalar>(p: &[T], q: &[T], k: usize, ctx: &T::Ctx) -> T {
    let n = k + 1;
    let w = pairing_weights(k);
    let mut acc = T::zero_in(ctx);
    for a in 0..n {
        for g in 0..n {
            let x = &p[a * n + g];
            let y = &q[(k - a) * n + (k - g)];
            if x.eq_zero() || y.eq_zero() {
                continue;
            }
            let c = T::from_rational(ctx, &(&w[a] * &w[g]));
            acc = acc.add_ref(&c.mul_ref(&x.mul_ref(y)));
        }
    }
    acc
}

pub fn gram_matrix<T: Scalar>(k: usize, ctx: &T::Ctx) -> Matrix<T> {
    let n = k + 1;
    let w = pairing_weights(k);
    let mut m = Matrix::zeros(ctx, n * n, n * n);
    for a in 0..n {
        for g in 0..n {
            m.data[a * n + g][(k - a) * n + (k - g)] = T::from_rational(ctx, &(&w[a] * &w[g]));
        }
    }
    m
}

/// J = diag(ε, 1) for the unit generator ε of O_d.
pub fn j_matrix(d: u32) -> GMatrix {
    GMatrix::new(
        QuadInt::epsilon(d),
        QuadInt::zero(d),
        QuadInt::zero(d),
        QuadInt::one(d),
    )
}

/// The plus-space involution δ(P) = P·J.
pub fn delta<T: Scalar>(p: &[T], k: usize, d: u32, map: &QuadMap<T>) -> Vec<T> {
    Action::new(&j_matrix(d), k, map).apply(p)
}

pub fn dim(k: usize) -> usize {
    (k + 1) * (k + 1)
}

pub fn index(k: usize, i: usize, j: usize) -> usize {
    i * (k + 1) + j
}

/// X^k Xb^k - Y^k Yb^k.
pub fn eisenstein_vector<T: Scalar>(k: usize, ctx: &T::Ctx) -> Vec<T> {
    let mut v = vec![T::zero_in(ctx); dim(k)];
    v[0] = T::one_in(ctx);
    v[dim(k) - 1] = T::one_in(ctx).neg_ref();
    v
}

/// Monomial label such as `X^9*Y*Xb^10`.
pub fn monomial_name(k: usize, i: usize, j: usize) -> String {
    let mut parts = Vec::new();
    for (var, e) in [("X", k - i), ("Y", i), ("Xb", k - j), ("Yb", j)] {
        match e {
            0 => {}
            1 => parts.push(var.to_string()),
            _ => parts.push(format!("{var}^{e}")),
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Sign of (-1)^e as a rational.
pub fn sign(e: usize) -> Rational {
    if e % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Numerical magnitude helper used by reports: largest absolute numerator.
pub fn max_abs_numerator(v: &[Rational]) -> BigInt {
    v.iter().map(|c| c.numer().abs()).max().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::numfield::NFElement;
    use crate::arith::rational::{int, rat};
    use crate::quad::quadratic_field;

    fn kmap(d: u32) -> QuadMap<NFElement> {
        let k = quadratic_field(d).unwrap();
        QuadMap::new(&k, NFElement::generator(&k))
    }

    #[test]
    fn s_flips_and_signs() {
        let k = 4;
        let map = kmap(11);
        let s = GMatrix::from_ints(11, [0, -1, 1, 0]);
        let act = Action::new(&s, k, &map);
        let ctx = map.ctx.clone();
        for i in 0..=k {
            for j in 0..=k {
                let mut v = vec![NFElement::zero_in(&ctx); dim(k)];
                v[index(k, i, j)] = NFElement::one_in(&ctx);
                let w = act.apply(&v);
                let mut expect = vec![NFElement::zero_in(&ctx); dim(k)];
                expect[index(k, k - i, k - j)] = NFElement::rational(&ctx, &sign(i + j));
                assert_eq!(w, expect);
            }
        }
    }

    #[test]
    fn t_matches_binomial_expansion() {
        let t = GMatrix::from_ints(11, [1, 1, 0, 1]);
        let r = rho_k(&t, 2);
        // X^2 -> (X+Y)^2, XY -> (X+Y)Y, Y^2 -> Y^2
        let lit = |v: &[i64]| v.iter().map(|&x| QuadInt::from_int(11, x)).collect::<Vec<_>>();
        assert_eq!(r, vec![lit(&[1, 2, 1]), lit(&[0, 1, 1]), lit(&[0, 0, 1])]);
    }

    #[test]
    fn pairing_examples() {
        let k = 10;
        let n = dim(k);
        let mut p = vec![int(0); n];
        let mut q = vec![int(0); n];
        p[0] = int(1);
        q[n - 1] = int(1);
        assert_eq!(pairing(&p, &q, k, &()), int(1));
        let mut p = vec![int(0); n];
        let mut q = vec![int(0); n];
        p[index(k, 1, 0)] = int(1);
        q[index(k, 9, 10)] = int(1);
        assert_eq!(pairing(&p, &q, k, &()), rat(-1, 10));
        let g = gram_matrix::<Rational>(k, &());
        assert_eq!(g, g.transpose());
        assert_eq!(g.rank(), n);
    }

    #[test]
    fn iota_and_delta() {
        let g = GMatrix::new(QuadInt::new(11, 1, 1), QuadInt::zero(11), QuadInt::zero(11), QuadInt::one(11));
        let gi = g.iota();
        assert_eq!(gi.iota(), g);
        assert_eq!(gi.det(), g.det());
        let s = GMatrix::from_ints(11, [0, -1, 1, 0]);
        assert!(s.iota().eq_projective(&s));
        let map = kmap(11);
        let ctx = map.ctx.clone();
        let k = 10;
        let e = eisenstein_vector::<NFElement>(k, &ctx);
        assert_eq!(delta(&e, k, 11, &map), e);
        let mut v = vec![NFElement::zero_in(&ctx); dim(k)];
        v[index(k, 1, 0)] = NFElement::one_in(&ctx);
        let dv = delta(&v, k, 11, &map);
        assert_eq!(dv[index(k, 1, 0)], NFElement::one_in(&ctx).neg_ref());
    }
}
