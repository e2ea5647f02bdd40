//! Dense univariate polynomials over Z and Q, coefficients stored low degree first.
//! The zero polynomial is the empty vector.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::Rational;

pub type ZPoly = Vec<BigInt>;
pub type QPoly = Vec<Rational>;

pub fn trim<T: Zero>(p: &mut Vec<T>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn degree<T>(p: &[T]) -> Option<usize> {
    p.len().checked_sub(1)
}

pub fn zpoly(coeffs: &[i64]) -> ZPoly {
    let mut p: ZPoly = coeffs.iter().map(|&c| BigInt::from(c)).collect();
    trim(&mut p);
    p
}

pub fn to_q(p: &[BigInt]) -> QPoly {
    p.iter().cloned().map(Rational::from_integer).collect()
}

pub fn add<T: Clone + Zero>(a: &[T], b: &[T]) -> Vec<T>
where
    for<'x> &'x T: std::ops::Add<&'x T, Output = T>,
{
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        out.push(match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x + y,
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        });
    }
    trim(&mut out);
    out
}

pub fn sub<T: Clone + Zero>(a: &[T], b: &[T]) -> Vec<T>
where
    for<'x> &'x T: std::ops::Sub<&'x T, Output = T>,
{
    let n = a.len().max(b.len());
    let z = T::zero();
    let mut out: Vec<T> = (0..n)
        .map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z))
        .collect();
    trim(&mut out);
    out
}

pub fn mul<T: Clone + Zero>(a: &[T], b: &[T]) -> Vec<T>
where
    for<'x> &'x T: std::ops::Mul<&'x T, Output = T>,
{
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![T::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x * y;
        }
    }
    trim(&mut out);
    out
}

pub fn scale<T: Clone + Zero>(a: &[T], c: &T) -> Vec<T>
where
    for<'x> &'x T: std::ops::Mul<&'x T, Output = T>,
{
    let mut out: Vec<T> = a.iter().map(|x| x * c).collect();
    trim(&mut out);
    out
}

pub fn derivative<T: Clone + Zero + From<BigInt>>(a: &[T]) -> Vec<T>
where
    for<'x> &'x T: std::ops::Mul<&'x T, Output = T>,
{
    let mut out: Vec<T> = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * &T::from(BigInt::from(i)))
        .collect();
    trim(&mut out);
    out
}

pub fn eval_q(p: &[Rational], x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

pub fn eval_z(p: &[BigInt], x: &BigInt) -> BigInt {
    p.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// Quotient and remainder over Q.
pub fn divrem_q(a: &[Rational], b: &[Rational]) -> (QPoly, QPoly) {
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut r: QPoly = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lc_inv = Rational::one() / b[db].clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![Rational::zero(); r.len() - db];
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let c = r[r.len() - 1].clone() * &lc_inv;
        for (j, bj) in b.iter().enumerate() {
            r[k + j] = r[k + j].clone() - &c * bj;
        }
        q[k] = c;
        r.pop();
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub fn monic_q(a: &[Rational]) -> QPoly {
    match a.last() {
        None => Vec::new(),
        Some(lc) => {
            let inv = Rational::one() / lc.clone();
            a.iter().map(|c| c * &inv).collect()
        }
    }
}

/// Monic gcd over Q.
pub fn gcd_q(a: &[Rational], b: &[Rational]) -> QPoly {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = divrem_q(&x, &y);
        x = y;
        y = r;
    }
    monic_q(&x)
}

/// Extended gcd over Q: returns (g, s, t) with s a + t b = g, g monic.
pub fn xgcd_q(a: &[Rational], b: &[Rational]) -> (QPoly, QPoly, QPoly) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    trim(&mut r0);
    trim(&mut r1);
    let (mut s0, mut s1) = (vec![Rational::one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![Rational::one()]);
    while !r1.is_empty() {
        let (q, r) = divrem_q(&r0, &r1);
        let s2 = sub(&s0, &mul(&q, &s1));
        let t2 = sub(&t0, &mul(&q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if let Some(lc) = r0.last().cloned() {
        let inv = Rational::one() / lc;
        r0 = scale(&r0, &inv);
        s0 = scale(&s0, &inv);
        t0 = scale(&t0, &inv);
    }
    (r0, s0, t0)
}

pub fn content(p: &[BigInt]) -> BigInt {
    p.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
}

/// Primitive part with positive leading coefficient.
pub fn primitive_part(p: &[BigInt]) -> ZPoly {
    let c = content(p);
    if c.is_zero() {
        return Vec::new();
    }
    let sign = if p.last().is_some_and(|l| l.is_negative()) { -c } else { c };
    p.iter().map(|x| x / &sign).collect()
}

/// Clears denominators of a rational polynomial and returns its primitive integer part.
pub fn q_to_primitive_z(p: &[Rational]) -> ZPoly {
    let l = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let z: ZPoly = p.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
    primitive_part(&z)
}

/// Exact division in Z[x]; `None` when `b` does not divide `a`.
pub fn div_exact_z(a: &[BigInt], b: &[BigInt]) -> Option<ZPoly> {
    let db = b.len().checked_sub(1)?;
    let lc = &b[db];
    let mut r: ZPoly = a.to_vec();
    trim(&mut r);
    if r.is_empty() {
        return Some(Vec::new());
    }
    if r.len() < b.len() {
        return None;
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let (c, rem) = r[r.len() - 1].div_rem(lc);
        if !rem.is_zero() {
            return None;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= &c * bj;
        }
        q[k] = c;
        r.pop();
        trim(&mut r);
    }
    if r.is_empty() {
        trim(&mut q);
        Some(q)
    } else {
        None
    }
}

/// Compose `p(c * x)`.
pub fn scale_variable_z(p: &[BigInt], c: &BigInt) -> ZPoly {
    let mut pw = BigInt::one();
    let mut out = Vec::with_capacity(p.len());
    for a in p {
        out.push(a * &pw);
        pw *= c;
    }
    trim(&mut out);
    out
}

pub fn format_zpoly(p: &[BigInt], var: &str) -> String {
    if p.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
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
            s.push_str(&a.to_string());
            if i > 0 {
                s.push('*');
            }
        }
        s.push_str(&mono);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;

    #[test]
    fn division_and_gcd() {
        let a = to_q(&zpoly(&[-1, 0, 1]));
        let b = to_q(&zpoly(&[-1, 1]));
        let (q, r) = divrem_q(&a, &b);
        assert_eq!(q, to_q(&zpoly(&[1, 1])));
        assert!(r.is_empty());
        let g = gcd_q(&a, &to_q(&zpoly(&[1, 2, 1])));
        assert_eq!(g, to_q(&zpoly(&[1, 1])));
        let (g, s, t) = xgcd_q(&to_q(&zpoly(&[11, 0, 1])), &to_q(&zpoly(&[0, 1])));
        assert_eq!(g, vec![rat(1, 1)]);
        let lhs = add(&mul(&s, &to_q(&zpoly(&[11, 0, 1]))), &mul(&t, &to_q(&zpoly(&[0, 1]))));
        assert_eq!(lhs, vec![rat(1, 1)]);
    }

    #[test]
    fn exact_division_detects_remainders() {
        let a = zpoly(&[-1, 0, 1]);
        assert_eq!(div_exact_z(&a, &zpoly(&[1, 1])), Some(zpoly(&[-1, 1])));
        assert_eq!(div_exact_z(&a, &zpoly(&[2, 1])), None);
        assert_eq!(format_zpoly(&zpoly(&[3448449, 0, 3725, 0, 1]), "x"), "x^4 + 3725*x^2 + 3448449");
    }
}
