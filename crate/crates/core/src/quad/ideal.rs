//! Fractional ideals of the equation order Z[θ] of a number field Q(θ), stored as a
//! row-style Hermite normal form lattice with a denominator.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::finite_field::{FFElement, FField, FiniteField};
use crate::arith::modp::{Fp, FpPoly};
use crate::arith::numfield::{Field, NFElement};
use crate::arith::poly::{self, ZPoly};
use crate::arith::rational::{int_valuation, Rational};
use crate::arith::scalar::Scalar;
use crate::error::{Error, Result};

pub const VALUATION_CAP: u32 = 64;

fn int_valuation_u64(n: &BigInt, p: u64) -> u64 {
    int_valuation(n, &BigInt::from(p))
}

/// The lattice (1/den) · span_Z(rows). Rows are coordinate vectors in the power basis and
/// form an upper-triangular Hermite normal form with positive diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct IdealLattice {
    pub field: Field,
    pub rows: Vec<Vec<BigInt>>,
    pub den: BigInt,
}

/// Upper-triangular row HNF of a full-rank integer lattice.
pub fn hnf(mut gens: Vec<Vec<BigInt>>, n: usize) -> Option<Vec<Vec<BigInt>>> {
    gens.retain(|r| r.iter().any(|c| !c.is_zero()));
    let mut out: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for col in 0..n {
        // Reduce all remaining generators to a single row with nonzero entry in `col`.
        loop {
            let nz: Vec<usize> = (0..gens.len()).filter(|&i| !gens[i][col].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            let piv = *nz.iter().min_by_key(|&&i| gens[i][col].abs()).unwrap();
            let pr = gens[piv].clone();
            for &i in &nz {
                if i == piv {
                    continue;
                }
                let q = gens[i][col].div_floor(&pr[col]);
                for (a, b) in gens[i].iter_mut().zip(&pr) {
                    *a -= &q * b;
                }
            }
        }
        let idx = (0..gens.len()).find(|&i| !gens[i][col].is_zero())?;
        let mut row = gens.swap_remove(idx);
        if row[col].is_negative() {
            for c in row.iter_mut() {
                *c = -&*c;
            }
        }
        gens.retain(|r| r.iter().any(|c| !c.is_zero()));
        out.push(row);
    }
    // Reduce above-diagonal entries.
    for i in 0..n {
        for k in 0..i {
            let q = out[k][i].div_floor(&out[i][i]);
            if !q.is_zero() {
                let ri = out[i].clone();
                for (a, b) in out[k].iter_mut().zip(&ri) {
                    *a -= &q * b;
                }
            }
        }
    }
    Some(out)
}

impl IdealLattice {
    fn normalize(field: &Field, rows: Vec<Vec<BigInt>>, den: BigInt) -> Result<Self> {
        let n = field.degree();
        let rows = hnf(rows, n).ok_or(Error::DivisionByZero)?;
        let g = rows
            .iter()
            .flat_map(|r| r.iter())
            .fold(den.clone(), |acc, c| acc.gcd(c));
        let (rows, den) = if g.is_one() {
            (rows, den)
        } else {
            (
                rows.into_iter()
                    .map(|r| r.into_iter().map(|c| c / &g).collect())
                    .collect(),
                den / &g,
            )
        };
        Ok(IdealLattice {
            field: field.clone(),
            rows,
            den,
        })
    }

    /// The ideal generated by the given elements as a module over the equation order.
    pub fn from_generators(field: &Field, gens: &[NFElement]) -> Result<Self> {
        let n = field.degree();
        let den = gens.iter().fold(BigInt::one(), |acc, g| acc.lcm(g.denominator()));
        let theta = NFElement::generator(field);
        let mut rows = Vec::new();
        for g in gens {
            let mut cur = g.clone();
            for _ in 0..n {
                rows.push(integer_coords(&cur, &den));
                cur = cur.mul_ref(&theta);
            }
        }
        Self::normalize(field, rows, den)
    }

    /// The Z-span of the given elements, which must have full rank.
    pub fn z_span(field: &Field, gens: &[NFElement]) -> Result<Self> {
        let den = gens.iter().fold(BigInt::one(), |acc, g| acc.lcm(g.denominator()));
        let rows = gens.iter().map(|g| integer_coords(g, &den)).collect();
        Self::normalize(field, rows, den)
    }

    /// Coordinates of x with respect to `basis_elements`.
    pub fn coordinates(&self, x: &NFElement) -> Vec<Rational> {
        let n = self.field.degree();
        let mut v: Vec<Rational> = x
            .coords()
            .iter()
            .map(|c| c * Rational::from_integer(self.den.clone()))
            .collect();
        let mut out = vec![Rational::zero(); n];
        for i in 0..n {
            let c = &v[i] / Rational::from_integer(self.rows[i][i].clone());
            for j in i..n {
                v[j] = &v[j] - &c * Rational::from_integer(self.rows[i][j].clone());
            }
            out[i] = c;
        }
        out
    }

    pub fn principal(x: &NFElement) -> Result<Self> {
        Self::from_generators(x.field(), std::slice::from_ref(x))
    }

    pub fn unit(field: &Field) -> Self {
        Self::principal(&NFElement::one_in(field)).expect("nonzero")
    }

    pub fn basis_elements(&self) -> Vec<NFElement> {
        self.rows
            .iter()
            .map(|r| NFElement::from_integers(&self.field, r.clone(), self.den.clone()))
            .collect()
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        let den = self.den.lcm(&other.den);
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for (id, s) in [(self, &den / &self.den), (other, &den / &other.den)] {
            rows.extend(id.rows.iter().map(|r| r.iter().map(|c| c * &s).collect()));
        }
        Self::normalize(&self.field, rows, den)
    }

    pub fn product(&self, other: &Self) -> Result<Self> {
        let a = self.basis_elements();
        let b = other.basis_elements();
        let prods: Vec<NFElement> = a
            .iter()
            .flat_map(|x| b.iter().map(move |y| x.mul_ref(y)))
            .collect();
        let den = &self.den * &other.den;
        let rows = prods.iter().map(|p| integer_coords(p, &den)).collect();
        Self::normalize(&self.field, rows, den)
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut r = Self::unit(&self.field);
        for _ in 0..e {
            r = r.product(self)?;
        }
        Ok(r)
    }

    /// Index of the lattice relative to the equation order.
    pub fn norm(&self) -> Rational {
        let det: BigInt = self.rows.iter().enumerate().map(|(i, r)| r[i].clone()).product();
        Rational::new(det, num_traits::pow(self.den.clone(), self.field.degree()))
    }

    pub fn contains(&self, x: &NFElement) -> bool {
        // den * x must be an integral combination of the rows.
        let scaled = x.coords();
        let n = self.field.degree();
        let mut v: Vec<Rational> = scaled
            .iter()
            .map(|c| c * Rational::from_integer(self.den.clone()))
            .collect();
        for i in 0..n {
            let c = &v[i] / Rational::from_integer(self.rows[i][i].clone());
            if !c.is_integer() {
                return false;
            }
            for j in i..n {
                v[j] = &v[j] - &c * Rational::from_integer(self.rows[i][j].clone());
            }
        }
        true
    }

    pub fn contains_ideal(&self, other: &Self) -> bool {
        other.basis_elements().iter().all(|b| self.contains(b))
    }

    /// Closure of the lattice under multiplication by the generator.
    pub fn is_order_module(&self) -> bool {
        let theta = NFElement::generator(&self.field);
        self.basis_elements().iter().all(|b| self.contains(&b.mul_ref(&theta)))
    }
}

fn integer_coords(x: &NFElement, den: &BigInt) -> Vec<BigInt> {
    let s = den / x.denominator();
    x.numerators().iter().map(|c| c * &s).collect()
}

/// A prime P = pO + g(θ)O of the equation order at a regular prime p.
#[derive(Debug)]
pub struct PrimeIdeal {
    pub p: u64,
    /// Monic lift of the irreducible factor of the defining polynomial modulo p.
    pub g: ZPoly,
    pub residue_degree: usize,
    pub ramification: u32,
    pub lattice: IdealLattice,
    pub residue_field: FField,
    /// Lifts g'(θ) of the other primes above p with their ramification indices.
    others: Vec<(NFElement, u32)>,
    powers: Mutex<Vec<IdealLattice>>,
}

impl PartialEq for PrimeIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.lattice == other.lattice
    }
}

impl Clone for PrimeIdeal {
    fn clone(&self) -> Self {
        PrimeIdeal {
            p: self.p,
            g: self.g.clone(),
            residue_degree: self.residue_degree,
            ramification: self.ramification,
            lattice: self.lattice.clone(),
            residue_field: self.residue_field.clone(),
            others: self.others.clone(),
            powers: Mutex::new(self.powers.lock().unwrap().clone()),
        }
    }
}

/// Factorization of the defining polynomial modulo p into monic irreducibles with
/// multiplicities, sorted by (degree, coefficients).
pub fn factor_mod_p(f: &[BigInt], p: u64) -> Vec<(FpPoly, u32)> {
    let fp = Fp::new(p);
    let pb = BigInt::from(p);
    let mut fbar: FpPoly = f.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
    fp.trim(&mut fbar);
    let fbar = fp.monic(&fbar);
    let mut rng = ChaCha8Rng::seed_from_u64(p);
    let mut distinct: Vec<FpPoly> = Vec::new();
    // Product of the distinct irreducible factors of each degree via gcd with x^(p^d) - x.
    let mut rest = fbar.clone();
    let mut h: FpPoly = vec![0, 1];
    let mut d = 0;
    while rest.len() > 1 {
        d += 1;
        h = fp.powmod(&h, p as u128, &fbar);
        let g = fp.pgcd(&rest, &fp.psub(&h, &[0, 1]));
        if g.len() > 1 {
            // g is squarefree: gcd with the squarefree x^(p^d) - x.
            let parts = if p == 2 {
                split_brute(&fp, &g, d)
            } else {
                fp.equal_degree(&g, d, &mut rng)
            };
            for u in parts {
                while fp.prem(&rest, &u).is_empty() && rest.len() > 1 {
                    rest = fp.pdivrem(&rest, &u).0;
                }
                distinct.push(u);
            }
        }
        if d > f.len() {
            break;
        }
    }
    let mut out: Vec<(FpPoly, u32)> = distinct
        .into_iter()
        .map(|u| {
            let mut e = 0;
            let mut r = fbar.clone();
            while r.len() > 1 && fp.prem(&r, &u).is_empty() {
                r = fp.pdivrem(&r, &u).0;
                e += 1;
            }
            (u, e)
        })
        .collect();
    out.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.iter().rev().cmp(b.0.iter().rev())));
    out
}

/// Splits a product of distinct degree-d irreducibles over a tiny field by trial division.
fn split_brute(fp: &Fp, g: &[u64], d: usize) -> Vec<FpPoly> {
    let mut out = Vec::new();
    let mut rest = g.to_vec();
    let total = fp.p.pow(d as u32);
    for code in 0..total {
        if rest.len() <= 1 {
            break;
        }
        let mut cand = Vec::with_capacity(d + 1);
        let mut c = code;
        for _ in 0..d {
            cand.push(c % fp.p);
            c /= fp.p;
        }
        cand.push(1);
        if fp.prem(&rest, &cand).is_empty() {
            rest = fp.pdivrem(&rest, &cand).0;
            out.push(cand);
        }
    }
    out
}

/// Dedekind criterion for the equation order of `field` at p.
pub fn is_regular(field: &Field, p: u64) -> bool {
    let m = field.modulus();
    let fp = Fp::new(p);
    let fac = factor_mod_p(m, p);
    let gbar = fac.iter().fold(vec![1u64], |acc, (u, _)| fp.pmul(&acc, u));
    let hbar = fac.iter().fold(vec![1u64], |acc, (u, e)| {
        (1..*e).fold(acc, |a, _| fp.pmul(&a, u))
    });
    let lift = |a: &[u64]| -> ZPoly { a.iter().map(|&c| BigInt::from(c)).collect() };
    let (g, h) = (lift(&gbar), lift(&hbar));
    let diff = poly::sub(m, &poly::mul(&g, &h));
    let pb = BigInt::from(p);
    let fz: ZPoly = diff.iter().map(|c| c / &pb).collect();
    let pbar = |a: &[BigInt]| -> FpPoly {
        let mut v: FpPoly = a.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
        fp.trim(&mut v);
        v
    };
    let fbar = pbar(&fz);
    let gcd = fp.pgcd(&fp.pgcd(&fbar, &gbar), &hbar);
    gcd.len() == 1
}

fn nf_from_fp(field: &Field, a: &[u64]) -> NFElement {
    let q: Vec<Rational> = a.iter().map(|&c| Rational::from_integer(c.into())).collect();
    NFElement::from_qpoly(field, &q)
}

/// Primes of the equation order above p. Fails with `IrregularPrime` unless the Dedekind
/// criterion certifies p.
pub fn primes_above(p: u64, field: &Field) -> Result<Vec<PrimeIdeal>> {
    if !is_regular(field, p) {
        return Err(Error::IrregularPrime(p.to_string()));
    }
    let fac = factor_mod_p(field.modulus(), p);
    let gens: Vec<NFElement> = fac.iter().map(|(u, _)| nf_from_fp(field, u)).collect();
    let pe = NFElement::from_int(field, p as i64);
    let mut out = Vec::new();
    for (i, (u, e)) in fac.iter().enumerate() {
        let lattice = IdealLattice::from_generators(field, &[pe.clone(), gens[i].clone()])?;
        let others = fac
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(j, (_, ej))| (gens[j].clone(), *ej))
            .collect();
        out.push(PrimeIdeal {
            p,
            g: u.iter().map(|&c| BigInt::from(c)).collect(),
            residue_degree: u.len() - 1,
            ramification: *e,
            residue_field: FiniteField::new(p, u.clone())?,
            powers: Mutex::new(vec![IdealLattice::unit(field), lattice.clone()]),
            lattice,
            others,
        });
    }
    Ok(out)
}

impl PrimeIdeal {
    pub fn norm(&self) -> BigInt {
        num_traits::pow(BigInt::from(self.p), self.residue_degree)
    }

    pub fn field(&self) -> &Field {
        &self.lattice.field
    }

    fn power(&self, j: usize) -> Result<IdealLattice> {
        let mut pw = self.powers.lock().unwrap();
        while pw.len() <= j {
            let next = pw.last().unwrap().product(&self.lattice)?;
            pw.push(next);
        }
        Ok(pw[j].clone())
    }

    fn valuation_integral(&self, a: &NFElement) -> Result<i64> {
        let mut j = 0usize;
        loop {
            if j as u32 >= VALUATION_CAP {
                return Err(Error::ValuationCap);
            }
            if !self.power(j + 1)?.contains(a) {
                return Ok(j as i64);
            }
            j += 1;
        }
    }

    /// v_P(x) for nonzero x.
    pub fn valuation(&self, x: &NFElement) -> Result<i64> {
        if x.eq_zero() {
            return Err(Error::DivisionByZero);
        }
        let num = NFElement::from_integers(x.field(), x.numerators().to_vec(), BigInt::one());
        let vn = self.valuation_integral(&num)?;
        let vd = int_valuation_u64(x.denominator(), self.p) as i64 * self.ramification as i64;
        Ok(vn - vd)
    }

    pub fn valuation_rational(&self, r: &Rational) -> i64 {
        let vn = int_valuation_u64(r.numer(), self.p) as i64;
        let vd = int_valuation_u64(r.denom(), self.p) as i64;
        (vn - vd) * self.ramification as i64
    }

    fn reduce_integral(&self, a: &[BigInt]) -> FFElement {
        let pb = BigInt::from(self.p);
        let coeffs: Vec<u64> = a.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
        FFElement::from_poly(&self.residue_field, &coeffs)
    }

    /// Image of x in the residue field; requires v_P(x) >= 0.
    pub fn reduce(&self, x: &NFElement) -> Result<FFElement> {
        if x.eq_zero() {
            return Ok(FFElement::zero_in(&self.residue_field));
        }
        let v = self.valuation(x)?;
        if v < 0 {
            return Err(Error::UndefinedReduction(v));
        }
        let den = x.denominator();
        let m = int_valuation_u64(den, self.p) as u32;
        if m == 0 {
            let n = self.reduce_integral(x.numerators());
            let d = FFElement::from_bigint(&self.residue_field, den);
            return n.div_ref(&d);
        }
        // Multiply through by z, a P-unit lying deep in every other prime above p, so that
        // the p-power in the denominator cancels inside the equation order.
        let field = x.field();
        let z = self
            .others
            .iter()
            .fold(NFElement::one_in(field), |acc, (g, e)| acc.mul_ref(&g.pow(e * m)));
        let pm = num_traits::pow(BigInt::from(self.p), m as usize);
        let num = NFElement::from_integers(field, x.numerators().to_vec(), BigInt::one());
        let w = num.mul_ref(&z).mul_ref(&NFElement::rational(field, &Rational::new(BigInt::one(), pm.clone())));
        if !w.is_integral_coords() {
            return Err(Error::IrregularPrime(self.p.to_string()));
        }
        let rest = den / pm;
        let zr = self.reduce_integral(z.numerators()).mul_ref(&FFElement::from_bigint(&self.residue_field, &rest));
        self.reduce_integral(w.numerators()).div_ref(&zr)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::numfield::NumberField;
    use crate::arith::poly::zpoly;
    use crate::arith::rational::int;
    use crate::quad::{quadratic_field, QuadInt};

    #[test]
    fn ideal_products_and_gcds() {
        let k = quadratic_field(11).unwrap();
        let w = QuadInt::omega(11);
        let a = IdealLattice::principal(&w.to_nf(&k)).unwrap();
        let b = IdealLattice::principal(&w.conj().to_nf(&k)).unwrap();
        let three = IdealLattice::principal(&NFElement::from_int(&k, 3)).unwrap();
        assert_eq!(a.product(&b).unwrap(), three);
        let two = IdealLattice::principal(&NFElement::from_int(&k, 2)).unwrap();
        assert_eq!(two.sum(&three).unwrap(), IdealLattice::unit(&k));
        assert_eq!(a.norm(), int(3));
        assert!(a.is_order_module());
    }

    #[test]
    fn splitting_in_k11() {
        let k = quadratic_field(11).unwrap();
        let p3 = primes_above(3, &k).unwrap();
        assert_eq!(p3.len(), 2);
        assert!(p3.iter().all(|p| p.norm() == BigInt::from(3)));
        let p2 = primes_above(2, &k).unwrap();
        assert_eq!(p2.len(), 1);
        assert_eq!(p2[0].norm(), BigInt::from(4));
        let p11 = primes_above(11, &k).unwrap();
        assert_eq!((p11.len(), p11[0].ramification), (1, 2));
    }

    #[test]
    fn valuations_and_reduction() {
        let q = NumberField::rationals();
        let p691 = primes_above(691, &q).unwrap().remove(0);
        let d = NFElement::rational(&q, &Rational::new(691.into(), 31452624.into()));
        assert_eq!(p691.valuation(&d).unwrap(), 1);
        let one = NFElement::one_in(&q);
        assert_eq!(p691.valuation(&one).unwrap(), 0);
        assert!(p691.reduce(&one).unwrap().eq_one());
        assert_eq!(
            p691.reduce(&d.inv().unwrap()).unwrap_err(),
            Error::UndefinedReduction(-1)
        );
        // In Q(sqrt(-11)) with the ramified prime above 11, reduction of (1 + w)/11 * 11.
        let l = NumberField::new(zpoly(&[3448449, 0, 3725, 0, 1]), "T").unwrap();
        let ps = primes_above(173, &l).unwrap();
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].residue_degree, 2);
        assert_eq!(ps[0].ramification, 2);
        assert_eq!(ps[0].lattice.norm(), int(173 * 173));
    }
}
