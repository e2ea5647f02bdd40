//! Number fields Q[x]/(m) with m monic irreducible, elements in the power basis of the root,
//! field embeddings and composita.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::factor::{factor_z, is_irreducible};
use super::poly::{self, format_zpoly, to_q, trim, xgcd_q, QPoly, ZPoly};
use super::rational::{format_rational, Rational};
use super::scalar::Scalar;
use crate::error::{Error, Result};
use crate::linalg::{charpoly, Matrix};

pub const DEGREE_CAP: usize = 16;

#[derive(Debug)]
pub struct NumberField {
    modulus: ZPoly,
    degree: usize,
    name: String,
    /// `x^(n+i)` reduced modulo the defining polynomial, for `i < n - 1`.
    reduction: Vec<Vec<BigInt>>,
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus
    }
}

pub type Field = Arc<NumberField>;

impl NumberField {
    /// Builds Q[x]/(m); `m` must be monic and irreducible of degree at most 16.
    pub fn new(modulus: ZPoly, name: &str) -> Result<Field> {
        let mut modulus = modulus;
        trim(&mut modulus);
        let degree = modulus.len().checked_sub(1).filter(|&d| d > 0).ok_or_else(|| {
            Error::InvalidModulus("defining polynomial must have positive degree".into())
        })?;
        if !modulus[degree].is_one() {
            return Err(Error::InvalidModulus(format!(
                "{} is not monic",
                format_zpoly(&modulus, "x")
            )));
        }
        if degree > DEGREE_CAP {
            return Err(Error::DegreeCapExceeded(degree));
        }
        if degree > 1 && !is_irreducible(&modulus) {
            return Err(Error::Reducible(format_zpoly(&modulus, "x")));
        }
        Ok(Arc::new(Self::build(modulus, degree, name)))
    }

    fn build(modulus: ZPoly, degree: usize, name: &str) -> Self {
        let n = degree;
        let mut reduction = Vec::new();
        // x^n = -(m_0 + ... + m_{n-1} x^{n-1})
        let mut cur: Vec<BigInt> = modulus[..n].iter().map(|c| -c).collect();
        for _ in 0..n.saturating_sub(1) {
            reduction.push(cur.clone());
            let top = cur[n - 1].clone();
            let mut next = vec![BigInt::zero(); n];
            for i in (1..n).rev() {
                next[i] = cur[i - 1].clone();
            }
            for i in 0..n {
                next[i] -= &top * &modulus[i];
            }
            cur = next;
        }
        NumberField {
            modulus,
            degree,
            name: name.to_string(),
            reduction,
        }
    }

    pub fn rationals() -> Field {
        Arc::new(Self::build(vec![BigInt::zero(), BigInt::one()], 1, "x"))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &ZPoly {
        &self.modulus
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn discriminant_of_modulus(&self) -> Rational {
        // disc = (-1)^(n(n-1)/2) N(m'(x))
        let f = Arc::new(Self::build(self.modulus.clone(), self.degree, &self.name));
        let dm = poly::derivative(&to_q(&self.modulus));
        let n = NFElement::from_qpoly(&f, &dm).norm();
        let sign = if (self.degree * (self.degree - 1) / 2) % 2 == 1 { -1 } else { 1 };
        n * Rational::from_integer(sign.into())
    }
}

/// An element `num(x) / den` of a number field.
#[derive(Clone)]
pub struct NFElement {
    field: Field,
    num: Vec<BigInt>,
    den: BigInt,
}

impl PartialEq for NFElement {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.field, &other.field) || self.field == other.field)
            && self.den == other.den
            && self.num == other.num
    }
}

impl fmt::Debug for NFElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for NFElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with(self.field.name()))
    }
}

impl NFElement {
    fn normalized(field: &Field, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        let g = num.iter().fold(den.clone(), |acc, c| acc.gcd(c));
        if !g.is_one() && !g.is_zero() {
            for c in num.iter_mut() {
                *c = &*c / &g;
            }
            den /= &g;
        }
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -&*c;
            }
        }
        if num.iter().all(|c| c.is_zero()) {
            den = BigInt::one();
        }
        NFElement {
            field: field.clone(),
            num,
            den,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn from_coords(field: &Field, coords: &[Rational]) -> Self {
        assert_eq!(coords.len(), field.degree, "coordinate length must equal the degree");
        let den = coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coords
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Self::normalized(field, num, den)
    }

    pub fn from_integers(field: &Field, num: Vec<BigInt>, den: BigInt) -> Self {
        assert_eq!(num.len(), field.degree);
        Self::normalized(field, num, den)
    }

    /// Element represented by an arbitrary rational polynomial in the generator.
    pub fn from_qpoly(field: &Field, p: &[Rational]) -> Self {
        let (_, r) = poly::divrem_q(p, &to_q(&field.modulus));
        let mut coords = r;
        coords.resize(field.degree, Rational::zero());
        Self::from_coords(field, &coords)
    }

    pub fn generator(field: &Field) -> Self {
        let mut c = vec![Rational::zero(); field.degree];
        if field.degree == 1 {
            c[0] = Rational::from_integer(-field.modulus[0].clone());
        } else {
            c[1] = Rational::one();
        }
        Self::from_coords(field, &c)
    }

    pub fn rational(field: &Field, r: &Rational) -> Self {
        let mut num = vec![BigInt::zero(); field.degree];
        num[0] = r.numer().clone();
        Self::normalized(field, num, r.denom().clone())
    }

    pub fn coords(&self) -> Vec<Rational> {
        self.num
            .iter()
            .map(|c| Rational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn to_qpoly(&self) -> QPoly {
        let mut c = self.coords();
        trim(&mut c);
        c
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.num[1..].iter().all(|c| c.is_zero()) {
            Some(Rational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    pub fn is_integral_coords(&self) -> bool {
        self.den.is_one()
    }

    fn same_field(&self, other: &Self) {
        debug_assert!(
            Arc::ptr_eq(&self.field, &other.field) || self.field == other.field,
            "field mismatch"
        );
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::one_in(&self.field);
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul_ref(&b);
            }
            b = b.mul_ref(&b);
            e >>= 1;
        }
        r
    }

    /// Multiplication-by-self matrix: row i holds the coordinates of `x^i * self`.
    pub fn mult_matrix(&self) -> Matrix<Rational> {
        let n = self.field.degree;
        let mut rows = Vec::with_capacity(n);
        let mut xi = Self::one_in(&self.field);
        let x = Self::generator(&self.field);
        for _ in 0..n {
            rows.push(xi.mul_ref(self).coords());
            xi = xi.mul_ref(&x);
        }
        Matrix::from_rows(&(), n, rows)
    }

    /// Characteristic polynomial over Q of multiplication by the element, low degree first.
    pub fn charpoly(&self) -> QPoly {
        charpoly(&self.mult_matrix())
    }

    /// Monic minimal polynomial over Q.
    pub fn minpoly(&self) -> QPoly {
        let cp = self.charpoly();
        let z = poly::q_to_primitive_z(&cp);
        let (_, fac) = factor_z(&z);
        debug_assert_eq!(fac.len(), 1, "charpoly of a field element is a prime power");
        poly::monic_q(&to_q(&fac[0].0))
    }

    pub fn norm(&self) -> Rational {
        if self.field.degree == 1 {
            return self.coords()[0].clone();
        }
        self.mult_matrix().determinant()
    }

    pub fn trace(&self) -> Rational {
        self.mult_matrix().trace()
    }

    pub fn eval_qpoly(p: &[Rational], x: &Self) -> Self {
        p.iter().rev().fold(Self::zero_in(&x.field), |acc, c| {
            acc.mul_ref(x).add_ref(&Self::rational(&x.field, c))
        })
    }

    pub fn eval_zpoly(p: &[BigInt], x: &Self) -> Self {
        Self::eval_qpoly(&to_q(p), x)
    }

    pub fn format_with(&self, var: &str) -> String {
        let c = self.coords();
        let mut s = String::new();
        for (i, ci) in c.iter().enumerate().rev() {
            if ci.is_zero() {
                continue;
            }
            let neg = ci.is_negative();
            let a = ci.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if i == 0 || !a.is_one() {
                s.push_str(&format_rational(&a));
                if i > 0 {
                    s.push('*');
                }
            }
            s.push_str(&mono);
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }
}

impl Scalar for NFElement {
    type Ctx = Field;

    fn ctx(&self) -> Field {
        self.field.clone()
    }

    fn zero_in(ctx: &Field) -> Self {
        NFElement {
            field: ctx.clone(),
            num: vec![BigInt::zero(); ctx.degree],
            den: BigInt::one(),
        }
    }

    fn one_in(ctx: &Field) -> Self {
        let mut num = vec![BigInt::zero(); ctx.degree];
        num[0] = BigInt::one();
        NFElement {
            field: ctx.clone(),
            num,
            den: BigInt::one(),
        }
    }

    fn from_rational(ctx: &Field, r: &Rational) -> Self {
        Self::rational(ctx, r)
    }

    fn eq_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    fn add_ref(&self, other: &Self) -> Self {
        self.same_field(other);
        if other.eq_zero() {
            return self.clone();
        }
        if self.eq_zero() {
            return other.clone();
        }
        if self.den == other.den {
            let num = self.num.iter().zip(&other.num).map(|(a, b)| a + b).collect();
            return Self::normalized(&self.field, num, self.den.clone());
        }
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| a * &other.den + b * &self.den)
            .collect();
        Self::normalized(&self.field, num, &self.den * &other.den)
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self.same_field(other);
        let n = self.field.degree;
        if self.eq_zero() || other.eq_zero() {
            return Self::zero_in(&self.field);
        }
        let mut prod = vec![BigInt::zero(); 2 * n - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let mut num: Vec<BigInt> = prod[..n].to_vec();
        for (j, c) in prod[n..].iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (l, r) in self.field.reduction[j].iter().enumerate() {
                if !r.is_zero() {
                    num[l] += c * r;
                }
            }
        }
        Self::normalized(&self.field, num, &self.den * &other.den)
    }

    fn neg_ref(&self) -> Self {
        NFElement {
            field: self.field.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }

    fn inv(&self) -> Result<Self> {
        if self.eq_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.field.degree == 1 {
            return Ok(Self::rational(&self.field, &self.coords()[0].recip()));
        }
        let (g, s, _) = xgcd_q(&self.to_qpoly(), &to_q(&self.field.modulus));
        debug_assert_eq!(g.len(), 1);
        Ok(Self::from_qpoly(&self.field, &s))
    }
}

/// A field homomorphism determined by the image of the source generator.
#[derive(Clone, Debug, PartialEq)]
pub struct Embedding {
    pub source: Field,
    pub target: Field,
    pub image: NFElement,
}

impl Embedding {
    pub fn new(source: &Field, target: &Field, image: NFElement) -> Result<Self> {
        if !NFElement::eval_zpoly(source.modulus(), &image).eq_zero() {
            return Err(Error::InvalidModulus(
                "image does not satisfy the source polynomial".into(),
            ));
        }
        Ok(Embedding {
            source: source.clone(),
            target: target.clone(),
            image,
        })
    }

    pub fn identity(field: &Field) -> Self {
        Embedding {
            source: field.clone(),
            target: field.clone(),
            image: NFElement::generator(field),
        }
    }

    pub fn apply(&self, x: &NFElement) -> NFElement {
        NFElement::eval_qpoly(&x.coords(), &self.image)
    }

    pub fn compose(&self, then: &Embedding) -> Embedding {
        Embedding {
            source: self.source.clone(),
            target: then.target.clone(),
            image: then.apply(&self.image),
        }
    }

    /// Inverse of an embedding between fields of equal degree.
    pub fn inverse(&self) -> Result<Embedding> {
        let n = self.source.degree;
        if n != self.target.degree {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.target.degree,
            });
        }
        let mut rows = Vec::with_capacity(n);
        let mut p = NFElement::one_in(&self.target);
        for _ in 0..n {
            rows.push(p.coords());
            p = p.mul_ref(&self.image);
        }
        let b = Matrix::from_rows(&(), n, rows);
        let target_gen = NFElement::generator(&self.target).coords();
        let u = b.solve_left(&target_gen)?;
        let image = NFElement::from_coords(&self.source, &u);
        Embedding::new(&self.target, &self.source, image)
    }
}

#[derive(Clone, Debug)]
pub struct Compositum {
    pub field: Field,
    pub left: Embedding,
    pub right: Embedding,
}

/// All fields occurring in the tensor product F ⊗ G, each with the two embeddings, ordered by
/// degree (largest first) and then by defining polynomial.
pub fn composita(f: &Field, g: &Field, name: &str) -> Result<Vec<Compositum>> {
    let (n, m) = (f.degree, g.degree);
    let big_n = n * m;
    if big_n > DEGREE_CAP {
        return Err(Error::DegreeCapExceeded(big_n));
    }
    // Basis a^i c^j of the tensor algebra, index i*m + j.
    let a_mat = tensor_mult(f, n, m, true);
    let c_mat = tensor_mult(g, n, m, false);
    let mut s = 0i64;
    let (chi, theta) = loop {
        let theta = a_mat
            .add(&c_mat.scale(&Rational::from_integer(s.into())))
            .expect("same shape");
        let chi = charpoly(&theta);
        let d = poly::derivative(&chi);
        if poly::gcd_q(&chi, &d).len() == 1 {
            break (chi, theta);
        }
        s += 1;
    };
    // theta powers form a basis of the tensor algebra.
    let mut powers = Vec::with_capacity(big_n);
    let mut v = vec![Rational::zero(); big_n];
    v[0] = Rational::one();
    for _ in 0..big_n {
        powers.push(v.clone());
        v = crate::linalg::vec_mat(&v, &theta);
    }
    let pm = Matrix::from_rows(&(), big_n, powers);
    let unit = |idx: usize| {
        let mut e = vec![Rational::zero(); big_n];
        e[idx] = Rational::one();
        e
    };
    let a_in_theta = if n > 1 {
        pm.solve_left(&unit(m))?
    } else {
        let mut e = vec![Rational::zero(); big_n];
        e[0] = Rational::from_integer(-f.modulus[0].clone());
        pm.solve_left(&e)?
    };
    let c_in_theta = if m > 1 {
        pm.solve_left(&unit(1))?
    } else {
        let mut e = vec![Rational::zero(); big_n];
        e[0] = Rational::from_integer(-g.modulus[0].clone());
        pm.solve_left(&e)?
    };
    let chi_z = poly::q_to_primitive_z(&chi);
    let (_, factors) = factor_z(&chi_z);
    let mut out = Vec::new();
    for (h, _) in factors {
        let field = NumberField::new(h, name)?;
        let left = Embedding::new(f, &field, NFElement::from_qpoly(&field, &a_in_theta))?;
        let right = Embedding::new(g, &field, NFElement::from_qpoly(&field, &c_in_theta))?;
        out.push(Compositum { field, left, right });
    }
    out.sort_by(|x, y| {
        y.field
            .degree
            .cmp(&x.field.degree)
            .then_with(|| x.field.modulus.iter().rev().cmp(y.field.modulus.iter().rev()))
    });
    Ok(out)
}

fn tensor_mult(field: &Field, n: usize, m: usize, left: bool) -> Matrix<Rational> {
    let size = n * m;
    let gen = NFElement::generator(field);
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        for j in 0..m {
            let mut row = vec![Rational::zero(); size];
            // multiply the basis vector a^i c^j by the relevant generator
            let (k, other) = if left { (i, j) } else { (j, i) };
            let mut pw = vec![Rational::zero(); field.degree];
            pw[k] = Rational::one();
            let img = NFElement::from_coords(field, &pw).mul_ref(&gen).coords();
            for (t, c) in img.into_iter().enumerate() {
                let idx = if left { t * m + other } else { other * m + t };
                row[idx] = c;
            }
            rows.push(row);
        }
    }
    Matrix::from_rows(&(), size, rows)
}

/// The compositum of largest degree.
pub fn compositum(f: &Field, g: &Field, name: &str) -> Result<Compositum> {
    Ok(composita(f, g, name)?.remove(0))
}

/// A compositum in which the given elements of F and G are identified.
pub fn compositum_over(
    f: &Field,
    g: &Field,
    f_sub: &NFElement,
    g_sub: &NFElement,
    name: &str,
) -> Result<Compositum> {
    composita(f, g, name)?
        .into_iter()
        .find(|c| c.left.apply(f_sub) == c.right.apply(g_sub))
        .ok_or(Error::NoAutomorphism)
}

/// All roots in `field` of an integer polynomial, sorted by coordinates.
pub fn roots_in_field(q: &[BigInt], field: &Field) -> Result<Vec<NFElement>> {
    let mut roots = Vec::new();
    for (h, _) in factor_z(q).1 {
        if h.len() == 2 {
            let r = Rational::new(-h[0].clone(), h[1].clone());
            roots.push(NFElement::rational(field, &r));
            continue;
        }
        if field.degree % (h.len() - 1) != 0 {
            continue;
        }
        let qf = NumberField::new(poly::primitive_part(&monic_z(&h)?), "y")?;
        for c in composita(field, &qf, "z")? {
            if c.field.degree != field.degree {
                continue;
            }
            let back = c.left.inverse()?;
            let r = back.apply(&c.right.image);
            if !roots.contains(&r) {
                roots.push(r);
            }
        }
    }
    roots.sort_by(|a, b| {
        let (ca, cb) = (a.coords(), b.coords());
        ca.iter().rev().cmp(cb.iter().rev())
    });
    Ok(roots)
}

fn monic_z(h: &[BigInt]) -> Result<ZPoly> {
    if h.last().is_some_and(|l| l.is_one()) {
        Ok(h.to_vec())
    } else {
        Err(Error::InvalidModulus(format!(
            "{} is not monic",
            format_zpoly(h, "x")
        )))
    }
}

/// Field automorphisms, as embeddings of the field into itself.
pub fn automorphisms(field: &Field) -> Result<Vec<Embedding>> {
    roots_in_field(field.modulus(), field)?
        .into_iter()
        .map(|r| Embedding::new(field, field, r))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::poly::zpoly;
    use crate::arith::rational::{int, rat};

    #[test]
    fn inverse_norm_trace() {
        let k = NumberField::new(zpoly(&[11, 0, 1]), "x").unwrap();
        let x = NFElement::generator(&k);
        let inv = x.inv().unwrap();
        assert_eq!(inv.coords(), vec![int(0), rat(-1, 11)]);
        assert_eq!(x.norm(), int(11));
        let l = NumberField::new(zpoly(&[3448449, 0, 3725, 0, 1]), "T").unwrap();
        let t = NFElement::generator(&l);
        assert_eq!(t.norm(), int(3448449));
        assert_eq!(t.trace(), int(0));
        assert_eq!(t.minpoly(), to_q(&zpoly(&[3448449, 0, 3725, 0, 1])));
        assert!(NumberField::new(zpoly(&[-1, 0, 1]), "x").is_err());
    }

    #[test]
    fn compositum_of_quadratics() {
        let k = NumberField::new(zpoly(&[3, -1, 1]), "w").unwrap();
        let l = NumberField::new(zpoly(&[-81829, 0, 1]), "b").unwrap();
        let c = compositum(&k, &l, "z").unwrap();
        assert_eq!(c.field.degree(), 4);
        let lt = NumberField::new(zpoly(&[3448449, 0, 3725, 0, 1]), "T").unwrap();
        let roots = roots_in_field(lt.modulus(), &c.field).unwrap();
        assert_eq!(roots.len(), 4);
        let kk = compositum(&k, &k, "z").unwrap();
        assert_eq!(kk.field.degree(), 2);
        let q = NumberField::rationals();
        let qk = compositum(&q, &k, "z").unwrap();
        assert_eq!(qk.field.degree(), 2);
        let w = NFElement::generator(&k);
        let both = compositum_over(&k, &k, &w, &w, "z").unwrap();
        assert_eq!(both.left.apply(&w), both.right.apply(&w));
    }

    #[test]
    fn automorphisms_of_biquadratic() {
        let k = NumberField::new(zpoly(&[3, -1, 1]), "w").unwrap();
        let l = NumberField::new(zpoly(&[-81829, 0, 1]), "b").unwrap();
        let c = compositum(&k, &l, "z").unwrap();
        let auts = automorphisms(&c.field).unwrap();
        assert_eq!(auts.len(), 4);
        assert!(auts.iter().any(|a| *a == Embedding::identity(&c.field)));
    }
}
