//! The field interface shared by rationals, number-field elements and finite-field elements.

use std::fmt::Debug;

use num_traits::{One, Zero};

use super::rational::Rational;
use crate::error::{Error, Result};

/// An element of an exact field. `Ctx` identifies the field (for example the defining
/// polynomial) so that constants can be created without an existing element.
pub trait Scalar: Clone + PartialEq + Debug + Send + Sync {
    type Ctx: Clone + PartialEq + Debug + Send + Sync;

    fn ctx(&self) -> Self::Ctx;
    fn zero_in(ctx: &Self::Ctx) -> Self;
    fn one_in(ctx: &Self::Ctx) -> Self;
    fn from_rational(ctx: &Self::Ctx, r: &Rational) -> Self;
    fn eq_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn inv(&self) -> Result<Self>;

    fn from_int(ctx: &Self::Ctx, n: i64) -> Self {
        Self::from_rational(ctx, &Rational::from_integer(n.into()))
    }
    fn eq_one(&self) -> bool {
        *self == Self::one_in(&self.ctx())
    }
    fn div_ref(&self, other: &Self) -> Result<Self> {
        Ok(self.mul_ref(&other.inv()?))
    }
}

impl Scalar for Rational {
    type Ctx = ();

    fn ctx(&self) {}
    fn zero_in(_: &()) -> Self {
        Rational::zero()
    }
    fn one_in(_: &()) -> Self {
        Rational::one()
    }
    fn from_rational(_: &(), r: &Rational) -> Self {
        r.clone()
    }
    fn eq_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn inv(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }
}
