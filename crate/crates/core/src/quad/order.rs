//! The maximal order of a number field, by p-maximal enlargement of the equation order at
//! every prime where the Dedekind criterion fails, and norms of fractional ideals over it.

use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::finite_field::{FFElement, FiniteField};
use crate::arith::integer::factor_integer;
use crate::arith::numfield::{Field, NFElement};
use crate::arith::rational::Rational;
use crate::arith::scalar::Scalar;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::quad::ideal::{is_regular, IdealLattice};

#[derive(Clone, Debug)]
pub struct MaximalOrder {
    pub field: Field,
    /// Z-basis as a lattice in the power basis.
    pub lattice: IdealLattice,
    /// Primes at which the equation order had to be enlarged.
    pub enlarged_at: Vec<u64>,
}

fn mod_p(c: &Rational, p: u64) -> Result<u64> {
    if !c.is_integer() {
        return Err(Error::RecipeViolation("non-integral order coordinate".into()));
    }
    let pb = BigInt::from(p);
    Ok(((c.to_integer() % &pb + &pb) % &pb).to_u64().unwrap())
}

fn fp_left_kernel(rows: Vec<Vec<u64>>, cols: usize, p: u64) -> Vec<Vec<u64>> {
    let ff = FiniteField::prime_field(p);
    let data = rows
        .into_iter()
        .map(|r| r.into_iter().map(|c| FFElement::from_poly(&ff, &[c])).collect())
        .collect();
    let m: Matrix<FFElement> = Matrix::from_rows(&ff, cols, data);
    m.left_kernel()
        .basis
        .into_iter()
        .map(|v| v.iter().map(|x| x.as_prime_field().unwrap()).collect())
        .collect()
}

fn combine(basis: &[NFElement], c: &[u64], field: &Field) -> NFElement {
    basis
        .iter()
        .zip(c)
        .filter(|(_, &ci)| ci != 0)
        .fold(NFElement::zero_in(field), |acc, (b, &ci)| acc.add_ref(&b.mul_ref(&NFElement::from_int(field, ci as i64))))
}

/// One enlargement step at p: the ring of multipliers of the p-radical.
fn enlarge(order: &IdealLattice, p: u64) -> Result<IdealLattice> {
    let field = &order.field;
    let n = field.degree();
    let basis = order.basis_elements();
    let mut q = p;
    while (q as usize) < n {
        q *= p;
    }
    let frob: Vec<Vec<u64>> = basis
        .iter()
        .map(|b| {
            let img = b.pow(q as u32);
            order.coordinates(&img).iter().map(|c| mod_p(c, p)).collect::<Result<Vec<u64>>>()
        })
        .collect::<Result<_>>()?;
    let pe = NFElement::from_int(field, p as i64);
    let mut rad_gens: Vec<NFElement> = fp_left_kernel(frob, n, p)
        .iter()
        .map(|c| combine(&basis, c, field))
        .collect();
    rad_gens.extend(basis.iter().map(|b| b.mul_ref(&pe)));
    let radical = IdealLattice::z_span(field, &rad_gens)?;
    let rad_basis = radical.basis_elements();
    let mut rows = Vec::with_capacity(n);
    for b in &basis {
        let mut row = Vec::with_capacity(n * n);
        for a in &rad_basis {
            for c in radical.coordinates(&b.mul_ref(a)) {
                row.push(mod_p(&c, p)?);
            }
        }
        rows.push(row);
    }
    let inv_p = NFElement::rational(field, &Rational::new(1.into(), p.into()));
    let mut gens = basis.clone();
    gens.extend(
        fp_left_kernel(rows, n * n, p)
            .iter()
            .map(|c| combine(&basis, c, field).mul_ref(&inv_p)),
    );
    IdealLattice::z_span(field, &gens)
}

static ORDERS: Mutex<Vec<Arc<MaximalOrder>>> = Mutex::new(Vec::new());

impl MaximalOrder {
    /// The maximal order of `field`, computed once per process.
    pub fn of(field: &Field) -> Result<Arc<MaximalOrder>> {
        if let Some(o) = ORDERS.lock().unwrap().iter().find(|o| o.field == *field) {
            return Ok(o.clone());
        }
        let o = Arc::new(MaximalOrder::compute(field)?);
        ORDERS.lock().unwrap().push(o.clone());
        Ok(o)
    }

    pub fn compute(field: &Field) -> Result<MaximalOrder> {
        let mut lattice = IdealLattice::unit(field);
        let disc = field.discriminant_of_modulus();
        let mut enlarged_at = Vec::new();
        if !disc.is_zero() {
            let d = disc.numer().abs() * disc.denom();
            for (p, e) in factor_integer(&d) {
                if e < 2 {
                    continue;
                }
                let p = p.to_u64().ok_or_else(|| Error::IrregularPrime(p.to_string()))?;
                if is_regular(field, p) {
                    continue;
                }
                loop {
                    let next = enlarge(&lattice, p)?;
                    if next == lattice {
                        break;
                    }
                    lattice = next;
                }
                enlarged_at.push(p);
            }
        }
        Ok(MaximalOrder {
            field: field.clone(),
            lattice,
            enlarged_at,
        })
    }

    /// Discriminant of the maximal order.
    pub fn discriminant(&self) -> Rational {
        let idx = self.lattice.norm();
        self.field.discriminant_of_modulus() * &idx * &idx
    }

    /// The fractional ideal generated by `gens` over the maximal order, as a lattice.
    pub fn ideal(&self, gens: &[NFElement]) -> Result<IdealLattice> {
        let basis = self.lattice.basis_elements();
        let prods: Vec<NFElement> = gens
            .iter()
            .filter(|g| !g.eq_zero())
            .flat_map(|g| basis.iter().map(move |b| g.mul_ref(b)))
            .collect();
        if prods.is_empty() {
            return Err(Error::DivisionByZero);
        }
        IdealLattice::z_span(&self.field, &prods)
    }

    /// Absolute norm of the fractional ideal generated by `gens`.
    pub fn ideal_norm(&self, gens: &[NFElement]) -> Result<Rational> {
        Ok(self.ideal(gens)?.norm() / self.lattice.norm())
    }

    pub fn contains(&self, x: &NFElement) -> bool {
        self.lattice.contains(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::numfield::NumberField;
    use crate::arith::poly::zpoly;

    #[test]
    fn gaussian_and_non_monogenic_index() {
        // x^2 + 4: Z[2i] has index 2 in Z[i].
        let f = NumberField::new(zpoly(&[4, 0, 1]), "t").unwrap();
        let o = MaximalOrder::compute(&f).unwrap();
        assert_eq!(o.discriminant(), Rational::from_integer((-4).into()));
        assert_eq!(o.enlarged_at, vec![2]);
        let half_t = NFElement::generator(&f).mul_ref(&NFElement::rational(&f, &Rational::new(1.into(), 2.into())));
        assert!(o.contains(&half_t));
    }

    #[test]
    fn ideal_norms_match_element_norms() {
        // Q(sqrt(-3)) from x^2 + 3 (index 2 at 2).
        let f = NumberField::new(zpoly(&[3, 0, 1]), "t").unwrap();
        let o = MaximalOrder::compute(&f).unwrap();
        assert_eq!(o.discriminant(), Rational::from_integer((-3).into()));
        let x = NFElement::generator(&f).add_ref(&NFElement::from_int(&f, 1));
        assert_eq!(o.ideal_norm(&[x.clone()]).unwrap(), x.norm());
        let two = NFElement::from_int(&f, 2);
        assert_eq!(o.ideal_norm(&[x, two]).unwrap(), Rational::from_integer(4.into()));
    }
}
