//! Finite fields F_p[t]/(g) with g monic irreducible over F_p.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::modp::{Fp, FpPoly};
use super::rational::Rational;
use super::scalar::Scalar;
use crate::error::{Error, Result};

#[derive(Debug, PartialEq, Eq)]
pub struct FiniteField {
    pub p: u64,
    pub modulus: FpPoly,
}

pub type FField = Arc<FiniteField>;

impl FiniteField {
    pub fn new(p: u64, modulus: FpPoly) -> Result<FField> {
        let fp = Fp::new(p);
        let m = fp.monic(&modulus);
        if m.len() < 2 {
            return Err(Error::InvalidModulus("residue modulus must have positive degree".into()));
        }
        let n = m.len() - 1;
        let dd = fp.distinct_degree(&m);
        if !fp.is_squarefree(&m) || dd.len() != 1 || dd[0].1 != n {
            return Err(Error::Reducible(format!("{:?} mod {}", m, p)));
        }
        Ok(Arc::new(FiniteField { p, modulus: m }))
    }

    pub fn prime_field(p: u64) -> FField {
        Arc::new(FiniteField {
            p,
            modulus: vec![0, 1],
        })
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn size(&self) -> BigInt {
        num_traits::pow(BigInt::from(self.p), self.degree())
    }

    fn fp(&self) -> Fp {
        Fp::new(self.p)
    }
}

#[derive(Clone, PartialEq)]
pub struct FFElement {
    field: FField,
    coords: Vec<u64>,
}

impl fmt::Debug for FFElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FFElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coords
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match i {
                0 => c.to_string(),
                1 => format!("{c}*t"),
                _ => format!("{c}*t^{i}"),
            })
            .collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

impl FFElement {
    pub fn from_poly(field: &FField, p: &[u64]) -> Self {
        let fp = field.fp();
        let reduced: Vec<u64> = p.iter().map(|&c| c % field.p).collect();
        let mut r = fp.prem(&reduced, &field.modulus);
        r.resize(field.degree(), 0);
        FFElement {
            field: field.clone(),
            coords: r,
        }
    }

    pub fn field(&self) -> &FField {
        &self.field
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    /// The value as an integer mod p when the element lies in the prime field.
    pub fn as_prime_field(&self) -> Option<u64> {
        if self.coords[1..].iter().all(|&c| c == 0) {
            Some(self.coords[0])
        } else {
            None
        }
    }

    pub fn from_bigint(field: &FField, n: &BigInt) -> Self {
        let r = n.mod_floor(&BigInt::from(field.p)).to_u64().unwrap();
        Self::from_poly(field, &[r])
    }

    fn poly(&self) -> FpPoly {
        let mut v = self.coords.clone();
        self.field.fp().trim(&mut v);
        v
    }
}

impl Scalar for FFElement {
    type Ctx = FField;

    fn ctx(&self) -> FField {
        self.field.clone()
    }
    fn zero_in(ctx: &FField) -> Self {
        Self::from_poly(ctx, &[])
    }
    fn one_in(ctx: &FField) -> Self {
        Self::from_poly(ctx, &[1])
    }
    /// Panics when p divides the denominator.
    fn from_rational(ctx: &FField, r: &Rational) -> Self {
        let n = Self::from_bigint(ctx, r.numer());
        let d = Self::from_bigint(ctx, r.denom());
        n.mul_ref(&d.inv().expect("denominator divisible by the characteristic"))
    }
    fn eq_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
    fn add_ref(&self, other: &Self) -> Self {
        let fp = self.field.fp();
        let coords = self.coords.iter().zip(&other.coords).map(|(&a, &b)| fp.add(a, b)).collect();
        FFElement {
            field: self.field.clone(),
            coords,
        }
    }
    fn sub_ref(&self, other: &Self) -> Self {
        let fp = self.field.fp();
        let coords = self.coords.iter().zip(&other.coords).map(|(&a, &b)| fp.sub(a, b)).collect();
        FFElement {
            field: self.field.clone(),
            coords,
        }
    }
    fn mul_ref(&self, other: &Self) -> Self {
        let fp = self.field.fp();
        Self::from_poly(&self.field, &fp.pmul(&self.poly(), &other.poly()))
    }
    fn neg_ref(&self) -> Self {
        let fp = self.field.fp();
        FFElement {
            field: self.field.clone(),
            coords: self.coords.iter().map(|&a| fp.neg(a)).collect(),
        }
    }
    fn inv(&self) -> Result<Self> {
        if self.eq_zero() {
            return Err(Error::DivisionByZero);
        }
        let fp = self.field.fp();
        let (g, s, _) = fp.pxgcd(&self.poly(), &self.field.modulus);
        debug_assert_eq!(g, vec![1]);
        Ok(Self::from_poly(&self.field, &s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_in_f4_and_f43sq() {
        let f4 = FiniteField::new(2, vec![1, 1, 1]).unwrap();
        let t = FFElement::from_poly(&f4, &[0, 1]);
        let t3 = t.mul_ref(&t).mul_ref(&t);
        assert!(t3.eq_one());
        assert!(FiniteField::new(2, vec![1, 0, 1]).is_err());
        let f = FiniteField::new(43, vec![1, 0, 1]).unwrap();
        let a = FFElement::from_poly(&f, &[5, 7]);
        assert!(a.mul_ref(&a.inv().unwrap()).eq_one());
        let r = FFElement::from_rational(&f, &Rational::new(1.into(), 2.into()));
        assert_eq!(r.as_prime_field(), Some(22));
    }
}
