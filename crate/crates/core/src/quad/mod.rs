//! The rings O_d = Z[ω_d] for the five norm-Euclidean imaginary quadratic fields, and ideal
//! arithmetic in equation orders of general number fields.

pub mod ideal;
pub mod order;

use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::integer::{is_prime_u64, small_primes};
use crate::arith::numfield::{Field, NFElement, NumberField};
use crate::arith::rational::{round_half_even, Rational};
use crate::error::{Error, Result};

pub const FIELDS: [u32; 5] = [1, 2, 3, 7, 11];

/// Trace and norm of ω_d: its minimal polynomial is x^2 - t x + n.
pub fn omega_params(d: u32) -> Result<(i64, i64)> {
    match d {
        1 => Ok((0, 1)),
        2 => Ok((0, 2)),
        3 => Ok((1, 1)),
        7 => Ok((1, 2)),
        11 => Ok((1, 3)),
        _ => Err(Error::UnsupportedField(d)),
    }
}

pub fn check_field(d: u32) -> Result<()> {
    omega_params(d).map(|_| ())
}

/// K_d = Q(ω_d) as a number field with generator `w`.
pub fn quadratic_field(d: u32) -> Result<Field> {
    static CELLS: [OnceLock<Field>; 5] = [
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
    ];
    let (t, n) = omega_params(d)?;
    let idx = FIELDS.iter().position(|&x| x == d).unwrap();
    Ok(CELLS[idx]
        .get_or_init(|| {
            NumberField::new(vec![BigInt::from(n), BigInt::from(-t), BigInt::one()], "w")
                .expect("x^2 - t x + n is irreducible")
        })
        .clone())
}

/// The element x + y ω_d of O_d.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadInt {
    pub d: u32,
    pub x: BigInt,
    pub y: BigInt,
}

impl PartialOrd for QuadInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadInt {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.d, &self.x, &self.y).cmp(&(other.d, &other.x, &other.y))
    }
}

impl QuadInt {
    pub fn new(d: u32, x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        debug_assert!(FIELDS.contains(&d));
        QuadInt {
            d,
            x: x.into(),
            y: y.into(),
        }
    }

    pub fn from_int(d: u32, x: impl Into<BigInt>) -> Self {
        Self::new(d, x, 0)
    }

    pub fn zero(d: u32) -> Self {
        Self::new(d, 0, 0)
    }

    pub fn one(d: u32) -> Self {
        Self::new(d, 1, 0)
    }

    pub fn omega(d: u32) -> Self {
        Self::new(d, 0, 1)
    }

    fn params(&self) -> (i64, i64) {
        omega_params(self.d).expect("validated field")
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        QuadInt {
            d: self.d,
            x: &self.x + &o.x,
            y: &self.y + &o.y,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        QuadInt {
            d: self.d,
            x: &self.x - &o.x,
            y: &self.y - &o.y,
        }
    }

    pub fn neg(&self) -> Self {
        QuadInt {
            d: self.d,
            x: -&self.x,
            y: -&self.y,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (t, n) = self.params();
        let yy = &self.y * &o.y;
        QuadInt {
            d: self.d,
            x: &self.x * &o.x - &yy * n,
            y: &self.x * &o.y + &self.y * &o.x + &yy * t,
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        QuadInt {
            d: self.d,
            x: &self.x * c,
            y: &self.y * c,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(self.d), |acc, _| acc.mul(self))
    }

    /// Galois conjugate: ω ↦ t - ω.
    pub fn conj(&self) -> Self {
        let (t, _) = self.params();
        QuadInt {
            d: self.d,
            x: &self.x + &self.y * t,
            y: -&self.y,
        }
    }

    pub fn norm(&self) -> BigInt {
        let (t, n) = self.params();
        &self.x * &self.x + &self.x * &self.y * t + &self.y * &self.y * n
    }

    pub fn trace(&self) -> BigInt {
        let (t, _) = self.params();
        &self.x * 2 + &self.y * t
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    /// Exact quotient, or `None` when `o` does not divide `self`.
    pub fn div_exact(&self, o: &Self) -> Option<Self> {
        let n = o.norm();
        if n.is_zero() {
            return None;
        }
        let p = self.mul(&o.conj());
        if p.x.is_multiple_of(&n) && p.y.is_multiple_of(&n) {
            Some(QuadInt {
                d: self.d,
                x: p.x / &n,
                y: p.y / n,
            })
        } else {
            None
        }
    }

    pub fn divides(&self, o: &Self) -> bool {
        o.div_exact(self).is_some()
    }

    /// Euclidean division with the nearest-lattice-point rounding described in the crate docs:
    /// returns (q, r) with self = q b + r and N(r) < N(b). Ties round to even.
    pub fn divmod(&self, b: &Self) -> Result<(Self, Self)> {
        let nb = b.norm();
        if nb.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.mul(&b.conj());
        let xr = Rational::new(p.x.clone(), nb.clone());
        let yr = Rational::new(p.y.clone(), nb.clone());
        let q = match self.d {
            1 | 2 => QuadInt::new(self.d, round_half_even(&xr), round_half_even(&yr)),
            _ => {
                // self/b = X + Y ω with ω = (1 + sqrt(-d))/2, i.e. s + t sqrt(-d) with
                // s = X + Y/2 and t = Y/2.
                let n = round_half_even(&yr);
                let half = Rational::new(BigInt::one(), BigInt::from(2));
                let m = round_half_even(&(xr + (yr - Rational::from_integer(n.clone())) * half));
                QuadInt::new(self.d, m, n)
            }
        };
        let r = self.sub(&q.mul(b));
        debug_assert!(r.norm() < nb);
        Ok((q, r))
    }

    pub fn units(d: u32) -> Vec<QuadInt> {
        let mut u = vec![QuadInt::new(d, 1, 0), QuadInt::new(d, -1, 0)];
        match d {
            1 => {
                u.push(QuadInt::new(d, 0, 1));
                u.push(QuadInt::new(d, 0, -1));
            }
            3 => {
                for (x, y) in [(0, 1), (0, -1), (-1, 1), (1, -1)] {
                    u.push(QuadInt::new(d, x, y));
                }
            }
            _ => {}
        }
        u
    }

    /// The unit generator ε used for the plus-space involution.
    pub fn epsilon(d: u32) -> QuadInt {
        match d {
            1 | 3 => QuadInt::omega(d),
            _ => QuadInt::new(d, -1, 0),
        }
    }

    /// Canonical associate: the lexicographically largest (x, y) among unit multiples.
    pub fn normalize_associate(&self) -> QuadInt {
        QuadInt::units(self.d)
            .iter()
            .map(|u| u.mul(self))
            .max_by(|a, b| (&a.x, &a.y).cmp(&(&b.x, &b.y)))
            .unwrap()
    }

    pub fn is_associate(&self, o: &Self) -> bool {
        self.normalize_associate() == o.normalize_associate()
    }

    pub fn gcd(&self, o: &Self) -> QuadInt {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.divmod(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a
    }

    pub fn to_nf(&self, field: &Field) -> NFElement {
        NFElement::from_coords(
            field,
            &[
                Rational::from_integer(self.x.clone()),
                Rational::from_integer(self.y.clone()),
            ],
        )
    }

    /// Parses `a`, `a+b*w`, `a-b*w` (whitespace ignored; `w`, `-w`, `b*w` also accepted).
    pub fn parse(d: u32, s: &str) -> Result<QuadInt> {
        check_field(d)?;
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("invalid element literal {s:?}"));
        if t.is_empty() {
            return Err(bad());
        }
        let parse_int = |u: &str| u.parse::<BigInt>().map_err(|_| bad());
        if !t.ends_with('w') {
            return Ok(QuadInt::new(d, parse_int(&t)?, 0));
        }
        let body = &t[..t.len() - 1];
        // split at the last sign that is not leading
        let split = body
            .char_indices()
            .rev()
            .find(|&(i, c)| i > 0 && (c == '+' || c == '-'))
            .map(|(i, _)| i);
        let (a, b) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("0", body),
        };
        let b = b.strip_suffix('*').unwrap_or(b);
        let bval = match b {
            "" | "+" => BigInt::one(),
            "-" => -BigInt::one(),
            _ => parse_int(b.strip_prefix('+').unwrap_or(b))?,
        };
        Ok(QuadInt::new(d, parse_int(a)?, bval))
    }

    /// Literal in the `a`, `a+b*w`, `a-b*w` grammar.
    pub fn to_literal(&self) -> String {
        if self.y.is_zero() {
            self.x.to_string()
        } else if self.y.is_negative() {
            format!("{}-{}*w", self.x, -&self.y)
        } else {
            format!("{}+{}*w", self.x, self.y)
        }
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeff = |c: &BigInt| {
            if c.abs().is_one() {
                "w".to_string()
            } else {
                format!("{}w", c.abs())
            }
        };
        match (self.x.is_zero(), self.y.is_zero()) {
            (_, true) => write!(f, "{}", self.x),
            (true, false) => write!(f, "{}{}", if self.y.is_negative() { "-" } else { "" }, coeff(&self.y)),
            (false, false) => write!(
                f,
                "{} {} {}",
                self.x,
                if self.y.is_negative() { "-" } else { "+" },
                coeff(&self.y)
            ),
        }
    }
}

/// Quotients of the Euclidean algorithm applied to num/den.
pub fn euclidean_cf(num: &QuadInt, den: &QuadInt) -> Result<Vec<QuadInt>> {
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let mut out = Vec::new();
    let (mut a, mut b) = (num.clone(), den.clone());
    while !b.is_zero() {
        let (q, r) = a.divmod(&b)?;
        out.push(q);
        a = b;
        b = r;
    }
    Ok(out)
}

/// Checks that `pi` is a prime element and returns the rational prime below it.
pub fn prime_below(pi: &QuadInt) -> Result<u64> {
    let n = pi.norm();
    let not_prime = || Error::NotPrime(pi.to_literal());
    let nn = n.to_u64().ok_or_else(not_prime)?;
    if is_prime_u64(nn) {
        return Ok(nn);
    }
    let r = (nn as f64).sqrt().round() as u64;
    if r * r == nn && is_prime_u64(r) && is_inert(pi.d, r) && pi.is_associate(&QuadInt::from_int(pi.d, r)) {
        return Ok(r);
    }
    Err(not_prime())
}

fn omega_roots_mod(d: u32, p: u64) -> Vec<u64> {
    let (t, n) = omega_params(d).unwrap();
    let (t, n) = (t.rem_euclid(p as i64) as u64, n.rem_euclid(p as i64) as u64);
    (0..p)
        .filter(|&r| (r * r % p + p * p - t * r % p + n) % p == 0)
        .collect()
}

pub fn is_inert(d: u32, p: u64) -> bool {
    omega_roots_mod(d, p).is_empty()
}

/// Prime elements of O_d of norm at most `bound`, one per prime ideal, normalized to the
/// canonical associate and ordered by norm, then by (x, y).
pub fn primes_up_to_norm(d: u32, bound: u64) -> Result<Vec<QuadInt>> {
    check_field(d)?;
    let mut out = Vec::new();
    for p in small_primes(bound) {
        let roots = omega_roots_mod(d, p);
        if roots.is_empty() {
            if p.checked_mul(p).is_some_and(|q| q <= bound) {
                out.push(QuadInt::from_int(d, p));
            }
            continue;
        }
        let pz = QuadInt::from_int(d, p);
        let mut found: Vec<QuadInt> = Vec::new();
        for r in roots {
            let g = pz.gcd(&QuadInt::new(d, -(r as i64), 1)).normalize_associate();
            if !found.contains(&g) {
                found.push(g);
            }
        }
        out.extend(found);
    }
    out.sort_by(|a, b| a.norm().cmp(&b.norm()).then((&a.x, &a.y).cmp(&(&b.x, &b.y))));
    Ok(out)
}

/// Complete residue system modulo `pi`: the points of the fundamental parallelepiped of the
/// Hermite normal form of the lattice pi·O_d in (x, y) coordinates.
pub fn residues_mod(pi: &QuadInt) -> Result<Vec<QuadInt>> {
    prime_below(pi)?;
    let (h1, h2) = hnf_diagonal(pi);
    let mut out = Vec::new();
    let (h1, h2) = (h1.to_u64().unwrap(), h2.to_u64().unwrap());
    for y in 0..h2 {
        for x in 0..h1 {
            out.push(QuadInt::new(pi.d, x, y));
        }
    }
    Ok(out)
}

/// Diagonal (h1, h2) of the upper-triangular HNF of pi·O_d with rows (h1, 0), (c, h2).
fn hnf_diagonal(pi: &QuadInt) -> (BigInt, BigInt) {
    let a = pi.clone();
    let b = pi.mul(&QuadInt::omega(pi.d));
    let (mut r0, mut r1) = ((a.x, a.y), (b.x, b.y));
    // Euclid on the y-coordinates.
    while !r1.1.is_zero() {
        let q = r0.1.div_floor(&r1.1);
        let next = (&r0.0 - &q * &r1.0, &r0.1 - &q * &r1.1);
        r0 = std::mem::replace(&mut r1, next);
    }
    // r1 = (h1, 0), r0 = (c, h2)
    (r1.0.abs(), r0.1.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_divisions() {
        let five = QuadInt::from_int(11, 5);
        let w = QuadInt::omega(11);
        assert_eq!(five.divmod(&w).unwrap(), (QuadInt::new(11, 2, -2), QuadInt::new(11, -1, 0)));
        let a = QuadInt::new(11, 5, 3);
        let two = QuadInt::from_int(11, 2);
        assert_eq!(a.divmod(&two).unwrap(), (QuadInt::new(11, 2, 2), QuadInt::new(11, 1, -1)));
        assert_eq!(a.divmod(&a).unwrap(), (QuadInt::one(11), QuadInt::zero(11)));
        assert_eq!(a.divmod(&QuadInt::zero(11)).unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn continued_fractions() {
        let five = QuadInt::from_int(11, 5);
        let w = QuadInt::omega(11);
        assert_eq!(
            euclidean_cf(&five, &w).unwrap(),
            vec![QuadInt::new(11, 2, -2), QuadInt::new(11, 0, -1)]
        );
        assert_eq!(euclidean_cf(&w, &w).unwrap(), vec![QuadInt::one(11)]);
        assert_eq!(euclidean_cf(&five, &QuadInt::one(11)).unwrap(), vec![five]);
    }

    #[test]
    fn residue_systems() {
        let w = QuadInt::omega(11);
        assert_eq!(
            residues_mod(&w).unwrap(),
            vec![QuadInt::from_int(11, 0), QuadInt::from_int(11, 1), QuadInt::from_int(11, 2)]
        );
        assert_eq!(
            residues_mod(&QuadInt::from_int(11, 2)).unwrap(),
            vec![
                QuadInt::new(11, 0, 0),
                QuadInt::new(11, 1, 0),
                QuadInt::new(11, 0, 1),
                QuadInt::new(11, 1, 1)
            ]
        );
        assert!(residues_mod(&QuadInt::from_int(11, 3)).is_err());
        assert!(residues_mod(&QuadInt::from_int(11, 6)).is_err());
    }

    #[test]
    fn prime_lists() {
        let ps = primes_up_to_norm(11, 11).unwrap();
        let lits: Vec<String> = ps.iter().map(|p| p.to_literal()).collect();
        assert_eq!(lits, ["0+1*w", "1-1*w", "2", "1+1*w", "2-1*w", "1-2*w"]);
        for d in FIELDS {
            for p in primes_up_to_norm(d, 60).unwrap() {
                assert!(prime_below(&p).is_ok());
            }
        }
    }

    #[test]
    fn literals_round_trip() {
        for s in ["5", "-3", "1+2*w", "1-2*w", "0+1*w", "-7-1*w"] {
            assert_eq!(QuadInt::parse(11, s).unwrap().to_literal(), s);
        }
        assert_eq!(QuadInt::parse(11, "w").unwrap(), QuadInt::omega(11));
        assert_eq!(QuadInt::parse(11, "1 - w").unwrap(), QuadInt::new(11, 1, -1));
        assert!(QuadInt::parse(11, "x").is_err());
        assert!(QuadInt::parse(5, "1").is_err());
    }
}
