//! Factorization of integer polynomials: squarefree decomposition, modular factoring,
//! multifactor Hensel lifting and subset recombination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::integer::small_primes;
use super::modp::{Fp, FpPoly};
use super::poly::{
    content, degree, derivative, div_exact_z, divrem_q, gcd_q, primitive_part, q_to_primitive_z,
    to_q, trim, ZPoly,
};

/// Full factorization over Z: content and primitive irreducible factors with multiplicity.
/// Factors have positive leading coefficient, sorted by degree then coefficients.
pub fn factor_z(f: &[BigInt]) -> (BigInt, Vec<(ZPoly, u32)>) {
    let mut f = f.to_vec();
    trim(&mut f);
    if f.is_empty() {
        return (BigInt::zero(), Vec::new());
    }
    let mut c = content(&f);
    if f.last().unwrap().is_negative() {
        c = -c;
    }
    let prim = primitive_part(&f);
    let mut out = Vec::new();
    for (part, mult) in squarefree_decomposition(&prim) {
        for g in factor_squarefree_z(&part) {
            out.push((g, mult));
        }
    }
    out.sort_by(|a, b| cmp_poly(&a.0, &b.0));
    (c, out)
}

/// Irreducible factors of a primitive polynomial, with multiplicity, ignoring units.
pub fn irreducible_factors(f: &[BigInt]) -> Vec<(ZPoly, u32)> {
    factor_z(f).1
}

pub fn is_irreducible(f: &[BigInt]) -> bool {
    let fac = irreducible_factors(f);
    fac.len() == 1 && fac[0].1 == 1 && degree(&fac[0].0) == degree(f)
}

fn cmp_poly(a: &[BigInt], b: &[BigInt]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.iter().rev().cmp(b.iter().rev()))
}

/// Yun's algorithm over Q, returning primitive integer parts.
pub fn squarefree_decomposition(f: &[BigInt]) -> Vec<(ZPoly, u32)> {
    let fq = to_q(f);
    if f.len() <= 1 {
        return Vec::new();
    }
    let df = derivative(&fq);
    let a0 = gcd_q(&fq, &df);
    let mut b = divrem_q(&fq, &a0).0;
    let mut c = divrem_q(&df, &a0).0;
    let mut d = super::poly::sub(&c, &derivative(&b));
    let mut out = Vec::new();
    let mut i = 1;
    loop {
        let a = gcd_q(&b, &d);
        if a.len() > 1 {
            out.push((q_to_primitive_z(&a), i));
        }
        b = divrem_q(&b, &a).0;
        if b.len() <= 1 {
            break;
        }
        c = divrem_q(&d, &a).0;
        d = super::poly::sub(&c, &derivative(&b));
        i += 1;
    }
    out
}

/// Factors a primitive squarefree polynomial of positive degree.
pub fn factor_squarefree_z(f: &[BigInt]) -> Vec<ZPoly> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![primitive_part(f)];
    }
    let l = f[n].clone();
    // F(x) = l^(n-1) f(x / l) is monic with integer coefficients.
    let mut big_f = Vec::with_capacity(n + 1);
    let mut pw = BigInt::one();
    let mut pows = vec![BigInt::one(); n + 1];
    for i in (0..n).rev() {
        pows[i] = pw.clone();
        pw *= &l;
    }
    for i in 0..n {
        big_f.push(&f[i] * &pows[i]);
    }
    big_f.push(BigInt::one());
    let monic_factors = factor_monic_squarefree(&big_f);
    let mut out: Vec<ZPoly> = monic_factors
        .into_iter()
        .map(|g| primitive_part(&super::poly::scale_variable_z(&g, &l)))
        .collect();
    out.sort_by(|a, b| cmp_poly(a, b));
    out
}

fn reduce_poly(f: &[BigInt], p: u64) -> FpPoly {
    let pb = BigInt::from(p);
    let mut out: FpPoly = f.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

fn factor_monic_squarefree(f: &[BigInt]) -> Vec<ZPoly> {
    let n = f.len() - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    // Pick among a few good primes the one with the fewest modular factors.
    let mut best: Option<(u64, Vec<FpPoly>)> = None;
    let mut tried = 0;
    for p in small_primes(100_000).into_iter().skip(1) {
        let fp = Fp::new(p);
        let fbar = reduce_poly(f, p);
        if fbar.len() != n + 1 || !fp.is_squarefree(&fbar) {
            continue;
        }
        let fac = fp.factor_squarefree(&fbar, &mut rng);
        if fac.len() == 1 {
            return vec![f.to_vec()];
        }
        if best.as_ref().map_or(true, |(_, b)| fac.len() < b.len()) {
            best = Some((p, fac));
        }
        tried += 1;
        if tried >= 6 {
            break;
        }
    }
    let (p, modular) = best.expect("no good prime found");
    // Coefficient bound for factors of a monic integer polynomial.
    let norm1: BigInt = f.iter().map(|c| c.abs()).sum();
    let bound = (BigInt::one() << (n + 1)) * norm1;
    let pb = BigInt::from(p);
    let mut modulus = pb.clone();
    let mut k = 1u32;
    while modulus <= bound {
        modulus = &modulus * &modulus;
        k *= 2;
    }
    let _ = k;
    let lifted = multifactor_lift(f, &modular, p, &modulus);
    recombine(f, lifted, &modulus)
}

fn sym_mod(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn zmod(a: &[BigInt], m: &BigInt) -> ZPoly {
    let mut out: ZPoly = a.iter().map(|c| c.mod_floor(m)).collect();
    trim(&mut out);
    out
}

fn zmul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ZPoly {
    zmod(&super::poly::mul(a, b), m)
}

fn zadd(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ZPoly {
    zmod(&super::poly::add(a, b), m)
}

fn zsub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ZPoly {
    zmod(&super::poly::sub(a, b), m)
}

/// Division by a monic polynomial modulo m.
fn zdivrem_monic(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (ZPoly, ZPoly) {
    let mut r = zmod(a, m);
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = r.last().unwrap().clone();
        for (j, bj) in b.iter().enumerate() {
            r[k + j] = (&r[k + j] - &c * bj).mod_floor(m);
        }
        q[k] = c;
        r.pop();
    }
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

fn lift_fp(a: &[u64]) -> ZPoly {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// Quadratic Hensel lifting of f = g h (g, h monic) from p to `target` through a factor tree.
fn multifactor_lift(f: &[BigInt], factors: &[FpPoly], p: u64, target: &BigInt) -> Vec<ZPoly> {
    if factors.len() == 1 {
        return vec![zmod(f, target)];
    }
    let fp = Fp::new(p);
    let mid = factors.len() / 2;
    let gbar = factors[..mid].iter().fold(vec![1u64], |acc, u| fp.pmul(&acc, u));
    let hbar = factors[mid..].iter().fold(vec![1u64], |acc, u| fp.pmul(&acc, u));
    let (one, sbar, tbar) = fp.pxgcd(&gbar, &hbar);
    debug_assert_eq!(one, vec![1]);
    let mut g = lift_fp(&gbar);
    let mut h = lift_fp(&hbar);
    let mut s = lift_fp(&sbar);
    let mut t = lift_fp(&tbar);
    let mut m = BigInt::from(p);
    while &m < target {
        let m2 = &m * &m;
        let e = zsub(f, &zmul(&g, &h, &m2), &m2);
        let (q, r) = zdivrem_monic(&zmul(&s, &e, &m2), &h, &m2);
        let g_new = zadd(&zadd(&g, &zmul(&t, &e, &m2), &m2), &zmul(&q, &g, &m2), &m2);
        let h_new = zadd(&h, &r, &m2);
        let b = zsub(
            &zadd(&zmul(&s, &g_new, &m2), &zmul(&t, &h_new, &m2), &m2),
            &[BigInt::one()],
            &m2,
        );
        let (c, d) = zdivrem_monic(&zmul(&s, &b, &m2), &h_new, &m2);
        s = zsub(&s, &d, &m2);
        t = zsub(&zsub(&t, &zmul(&t, &b, &m2), &m2), &zmul(&c, &g_new, &m2), &m2);
        g = g_new;
        h = h_new;
        m = m2;
    }
    let mut out = multifactor_lift(&g, &factors[..mid], p, target);
    out.extend(multifactor_lift(&h, &factors[mid..], p, target));
    out
}

/// Zassenhaus recombination of lifted monic factors.
fn recombine(f: &[BigInt], mut lifted: Vec<ZPoly>, m: &BigInt) -> Vec<ZPoly> {
    let mut f = f.to_vec();
    let mut out = Vec::new();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut found = false;
        for subset in subsets(lifted.len(), size) {
            let prod = subset
                .iter()
                .fold(vec![BigInt::one()], |acc, &i| zmul(&acc, &lifted[i], m));
            let cand: ZPoly = prod.iter().map(|c| sym_mod(c, m)).collect();
            if !f[0].is_zero() && !cand[0].is_zero() && !f[0].is_multiple_of(&cand[0]) {
                continue;
            }
            if let Some(q) = div_exact_z(&f, &cand) {
                out.push(cand);
                f = q;
                let mut keep = Vec::new();
                for (i, u) in lifted.into_iter().enumerate() {
                    if !subset.contains(&i) {
                        keep.push(u);
                    }
                }
                lifted = keep;
                found = true;
                break;
            }
        }
        if !found {
            size += 1;
        }
    }
    if f.len() > 1 {
        out.push(f);
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::poly::{mul, zpoly};

    fn product(fs: &[(ZPoly, u32)]) -> ZPoly {
        let mut acc = vec![BigInt::one()];
        for (g, e) in fs {
            for _ in 0..*e {
                acc = mul(&acc, g);
            }
        }
        acc
    }

    #[test]
    fn swinnerton_dyer_style_product() {
        // (x^2 + 1)(x^2 - 2)(x^2 + x + 1)^2 (3x - 5)
        let f = product(&[
            (zpoly(&[1, 0, 1]), 1),
            (zpoly(&[-2, 0, 1]), 1),
            (zpoly(&[1, 1, 1]), 2),
            (zpoly(&[-5, 3]), 1),
        ]);
        let (c, fac) = factor_z(&f);
        assert_eq!(c, BigInt::one());
        assert_eq!(fac.len(), 4);
        assert_eq!(product(&fac), f);
        assert!(fac.contains(&(zpoly(&[1, 1, 1]), 2)));
    }

    #[test]
    fn irreducible_quartic_stays_whole() {
        let f = zpoly(&[3448449, 0, 3725, 0, 1]);
        assert!(is_irreducible(&f));
        // x^4 + 1 is irreducible over Q but splits modulo every prime.
        assert!(is_irreducible(&zpoly(&[1, 0, 0, 0, 1])));
        assert!(!is_irreducible(&zpoly(&[4, 0, 0, 0, 1])));
    }

    #[test]
    fn non_monic_and_negative_content() {
        let f = super::super::poly::scale(&mul(&zpoly(&[1, 2]), &zpoly(&[-1, 0, 3])), &BigInt::from(-6));
        let (c, fac) = factor_z(&f);
        assert_eq!(c, BigInt::from(-6));
        assert_eq!(fac, vec![(zpoly(&[1, 2]), 1), (zpoly(&[-1, 0, 3]), 1)]);
    }
}
