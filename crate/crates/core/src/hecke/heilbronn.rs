//! Continued-fraction paths and Heilbronn matrices.

use crate::error::{Error, Result};
use crate::quad::{euclidean_cf, prime_below, residues_mod, QuadInt};
use crate::weight::GMatrix;

/// Unimodular path matrices for the cusp num/den.
///
/// With convergents p_i/q_i of the Euclidean expansion and p_{-1}/q_{-1} = 1/0, the i-th
/// matrix is (p_i, -p_{i-1}; q_i, -q_{i-1}) up to the sign making its determinant 1. It sends
/// the path {0, ∞} to {p_{i-1}/q_{i-1}, p_i/q_i}, so the paths chain from ∞ to num/den.
pub fn manin_path(num: &QuadInt, den: &QuadInt) -> Result<Vec<GMatrix>> {
    let d = num.d;
    if den.is_zero() {
        return Ok(Vec::new());
    }
    let g = num.gcd(den);
    let (num, den) = (
        num.div_exact(&g).ok_or(Error::DivisionByZero)?,
        den.div_exact(&g).ok_or(Error::DivisionByZero)?,
    );
    let cf = euclidean_cf(&num, &den)?;
    let (mut p_prev, mut q_prev) = (QuadInt::one(d), QuadInt::zero(d));
    let (mut p, mut q) = (cf[0].clone(), QuadInt::one(d));
    let mut out = Vec::with_capacity(cf.len());
    for (i, a) in cf.iter().enumerate() {
        if i > 0 {
            let pn = a.mul(&p).add(&p_prev);
            let qn = a.mul(&q).add(&q_prev);
            p_prev = std::mem::replace(&mut p, pn);
            q_prev = std::mem::replace(&mut q, qn);
        }
        let mut m = GMatrix::new(p.clone(), p_prev.neg(), q.clone(), q_prev.neg());
        let det = m.det();
        if !det.is_unit() {
            return Err(Error::NotPrime(format!("convergent determinant {det}")));
        }
        // scale the second column by det^{-1} = conj(det)
        let u = det.conj();
        m.b = m.b.mul(&u);
        m.d = m.d.mul(&u);
        out.push(m);
    }
    // the last convergent reaches num/den up to the unit g absorbed above
    Ok(out)
}

/// The Heilbronn matrices attached to a prime element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeilbronnSet {
    pub d: u32,
    pub pi: QuadInt,
    pub matrices: Vec<GMatrix>,
    /// Matrices failing N(a) > N(b) ≥ 0, N(d) > N(c) ≥ 0.
    pub diagnostics: Vec<String>,
}

/// Smallest-norm representative of r modulo pi.
fn reduce_residue(r: &QuadInt, pi: &QuadInt) -> Result<QuadInt> {
    Ok(r.divmod(pi)?.1)
}

/// Generates H_π. For each residue r (reduced to small norm) the walk starts at
/// (π, -r; 0, 1) and right-multiplies by (0, -1; 1, q) for the nearest-integer quotients q of
/// the expansion of -π / r, recording every intermediate matrix. The coset (1, 0; 0, π) is
/// added once. Every matrix has determinant exactly π.
pub fn heilbronn_set(pi: &QuadInt) -> Result<HeilbronnSet> {
    prime_below(pi)?;
    let d = pi.d;
    let zero = QuadInt::zero(d);
    let one = QuadInt::one(d);
    let mut mats = vec![GMatrix::new(one.clone(), zero.clone(), zero.clone(), pi.clone())];
    for r in residues_mod(pi)? {
        let r = reduce_residue(&r, pi)?;
        let (mut x1, mut x2, mut y1, mut y2) = (pi.clone(), r.neg(), zero.clone(), one.clone());
        let (mut a, mut b) = (pi.neg(), r.clone());
        mats.push(GMatrix::new(x1.clone(), x2.clone(), y1.clone(), y2.clone()));
        while !b.is_zero() {
            let (q, c) = a.divmod(&b)?;
            a = b.neg();
            b = c;
            let x3 = q.mul(&x2).sub(&x1);
            x1 = std::mem::replace(&mut x2, x3);
            let y3 = q.mul(&y2).sub(&y1);
            y1 = std::mem::replace(&mut y2, y3);
            mats.push(GMatrix::new(x1.clone(), x2.clone(), y1.clone(), y2.clone()));
        }
    }
    mats.sort();
    let mut diagnostics = Vec::new();
    for m in &mats {
        if m.det() != *pi {
            return Err(Error::RecipeViolation(format!("determinant of {m:?} is not π")));
        }
        let ok = m.a.norm() > m.b.norm() && m.d.norm() > m.c.norm();
        if !ok {
            diagnostics.push(format_matrix(m));
        }
    }
    Ok(HeilbronnSet {
        d,
        pi: pi.clone(),
        matrices: mats,
        diagnostics,
    })
}

pub fn format_matrix(m: &GMatrix) -> String {
    format!(
        "[{}, {}; {}, {}]",
        m.a.to_literal(),
        m.b.to_literal(),
        m.c.to_literal(),
        m.d.to_literal()
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::primes_up_to_norm;

    #[test]
    fn path_endpoints() {
        let d = 11;
        let zero = QuadInt::zero(d);
        let one = QuadInt::one(d);
        let s = manin_path(&zero, &one).unwrap();
        assert_eq!(s, vec![GMatrix::from_ints(d, [0, -1, 1, 0])]);
        assert!(manin_path(&one, &zero).unwrap().is_empty());
        let five = QuadInt::from_int(d, 5);
        let w = QuadInt::omega(d);
        let path = manin_path(&five, &w).unwrap();
        assert_eq!(path.len(), euclidean_cf(&five, &w).unwrap().len());
        for m in &path {
            assert_eq!(m.det(), one);
        }
        // consecutive paths share endpoints: column 1 of m_i equals ± column 2 of m_{i+1}
        for pair in path.windows(2) {
            let (u, v) = (&pair[0], &pair[1]);
            let same = (u.a == v.b.neg() && u.c == v.d.neg()) || (u.a == v.b && u.c == v.d);
            assert!(same);
        }
        let last = path.last().unwrap();
        // last column 1 is proportional to (5, ω)
        assert!(last.a.mul(&w) == last.c.mul(&five));
    }

    #[test]
    fn sets_have_determinant_pi() {
        for d in [1, 2, 3, 7, 11] {
            for pi in primes_up_to_norm(d, 30).unwrap() {
                let h = heilbronn_set(&pi).unwrap();
                let mut sorted = h.matrices.clone();
                sorted.sort();
                assert_eq!(sorted, h.matrices);
                let diag = GMatrix::new(pi.clone(), QuadInt::zero(d), QuadInt::zero(d), QuadInt::one(d));
                let anti = GMatrix::new(QuadInt::one(d), QuadInt::zero(d), QuadInt::zero(d), pi.clone());
                assert!(h.matrices.contains(&diag) && h.matrices.contains(&anti));
            }
        }
    }
}
