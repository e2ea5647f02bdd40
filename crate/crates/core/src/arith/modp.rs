//! Polynomials over the prime field F_p with p < 2^32, coefficients low degree first.

use rand::Rng;

use super::integer::inv_mod_u64;

pub type FpPoly = Vec<u64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Self {
        assert!(p >= 2 && p < (1 << 32));
        Fp { p }
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }
    pub fn neg(&self, a: u64) -> u64 {
        (self.p - a) % self.p
    }
    pub fn inv(&self, a: u64) -> u64 {
        inv_mod_u64(a % self.p, self.p).expect("inverse of zero in F_p")
    }
    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.p;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }
    pub fn reduce_i64(&self, a: i64) -> u64 {
        a.rem_euclid(self.p as i64) as u64
    }

    pub fn trim(&self, a: &mut FpPoly) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn padd(&self, a: &[u64], b: &[u64]) -> FpPoly {
        let n = a.len().max(b.len());
        let mut out: FpPoly = (0..n)
            .map(|i| self.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
            .collect();
        self.trim(&mut out);
        out
    }

    pub fn psub(&self, a: &[u64], b: &[u64]) -> FpPoly {
        let n = a.len().max(b.len());
        let mut out: FpPoly = (0..n)
            .map(|i| self.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
            .collect();
        self.trim(&mut out);
        out
    }

    pub fn pmul(&self, a: &[u64], b: &[u64]) -> FpPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % self.p;
            }
        }
        self.trim(&mut out);
        out
    }

    pub fn pscale(&self, a: &[u64], c: u64) -> FpPoly {
        let mut out: FpPoly = a.iter().map(|&x| self.mul(x, c)).collect();
        self.trim(&mut out);
        out
    }

    pub fn pdivrem(&self, a: &[u64], b: &[u64]) -> (FpPoly, FpPoly) {
        assert!(!b.is_empty(), "polynomial division by zero");
        let mut r = a.to_vec();
        self.trim(&mut r);
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let db = b.len() - 1;
        let inv = self.inv(b[db]);
        let mut q = vec![0u64; r.len() - db];
        while r.len() > db {
            let k = r.len() - 1 - db;
            let c = self.mul(*r.last().unwrap(), inv);
            if c != 0 {
                for (j, &bj) in b.iter().enumerate() {
                    r[k + j] = self.sub(r[k + j], self.mul(c, bj));
                }
            }
            q[k] = c;
            r.pop();
        }
        self.trim(&mut r);
        self.trim(&mut q);
        (q, r)
    }

    pub fn prem(&self, a: &[u64], b: &[u64]) -> FpPoly {
        self.pdivrem(a, b).1
    }

    pub fn monic(&self, a: &[u64]) -> FpPoly {
        match a.last() {
            None => Vec::new(),
            Some(&lc) => self.pscale(a, self.inv(lc)),
        }
    }

    pub fn pgcd(&self, a: &[u64], b: &[u64]) -> FpPoly {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        self.trim(&mut x);
        self.trim(&mut y);
        while !y.is_empty() {
            let r = self.prem(&x, &y);
            x = y;
            y = r;
        }
        self.monic(&x)
    }

    /// Returns (g, s, t) with s a + t b = g and g monic.
    pub fn pxgcd(&self, a: &[u64], b: &[u64]) -> (FpPoly, FpPoly, FpPoly) {
        let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
        self.trim(&mut r0);
        self.trim(&mut r1);
        let (mut s0, mut s1) = (vec![1u64], Vec::new());
        let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
        while !r1.is_empty() {
            let (q, r) = self.pdivrem(&r0, &r1);
            let s2 = self.psub(&s0, &self.pmul(&q, &s1));
            let t2 = self.psub(&t0, &self.pmul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if let Some(&lc) = r0.last() {
            let inv = self.inv(lc);
            r0 = self.pscale(&r0, inv);
            s0 = self.pscale(&s0, inv);
            t0 = self.pscale(&t0, inv);
        }
        (r0, s0, t0)
    }

    pub fn pderiv(&self, a: &[u64]) -> FpPoly {
        let mut out: FpPoly = a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| self.mul(c, i as u64 % self.p))
            .collect();
        self.trim(&mut out);
        out
    }

    pub fn powmod(&self, base: &[u64], mut e: u128, m: &[u64]) -> FpPoly {
        let mut r = self.prem(&[1], m);
        let mut b = self.prem(base, m);
        while e > 0 {
            if e & 1 == 1 {
                r = self.prem(&self.pmul(&r, &b), m);
            }
            b = self.prem(&self.pmul(&b, &b), m);
            e >>= 1;
        }
        r
    }

    pub fn eval(&self, a: &[u64], x: u64) -> u64 {
        a.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }

    pub fn is_squarefree(&self, a: &[u64]) -> bool {
        let d = self.pderiv(a);
        if d.is_empty() {
            return a.len() <= 1;
        }
        self.pgcd(a, &d).len() == 1
    }

    /// Distinct-degree factorization of a monic squarefree polynomial: (product, degree) pairs.
    pub fn distinct_degree(&self, f: &[u64]) -> Vec<(FpPoly, usize)> {
        let mut out = Vec::new();
        let mut f = self.monic(f);
        let x: FpPoly = vec![0, 1];
        let mut h = x.clone();
        let mut d = 0;
        while f.len() > 1 {
            d += 1;
            if 2 * d > f.len() - 1 {
                let deg = f.len() - 1;
                out.push((f.clone(), deg));
                break;
            }
            h = self.powmod(&h, self.p as u128, &f);
            let g = self.pgcd(&f, &self.psub(&h, &x));
            if g.len() > 1 {
                f = self.pdivrem(&f, &g).0;
                h = self.prem(&h, &f);
                out.push((g, d));
            }
        }
        out
    }

    /// Cantor–Zassenhaus equal-degree splitting for odd p.
    pub fn equal_degree<R: Rng>(&self, f: &[u64], d: usize, rng: &mut R) -> Vec<FpPoly> {
        let n = f.len() - 1;
        if n == d {
            return vec![self.monic(f)];
        }
        assert!(self.p % 2 == 1, "equal-degree splitting needs odd p");
        let e = (((self.p as u128).pow(d as u32)) - 1) / 2;
        loop {
            let mut a: FpPoly = (0..n).map(|_| rng.gen_range(0..self.p)).collect();
            self.trim(&mut a);
            if a.len() <= 1 {
                continue;
            }
            let b = self.psub(&self.powmod(&a, e, f), &[1]);
            let g = self.pgcd(f, &b);
            if g.len() > 1 && g.len() < f.len() {
                let h = self.pdivrem(f, &g).0;
                let mut out = self.equal_degree(&g, d, rng);
                out.extend(self.equal_degree(&h, d, rng));
                return out;
            }
        }
    }

    /// Monic irreducible factors of a squarefree polynomial, sorted by (degree, coefficients).
    pub fn factor_squarefree<R: Rng>(&self, f: &[u64], rng: &mut R) -> Vec<FpPoly> {
        let mut out = Vec::new();
        for (g, d) in self.distinct_degree(f) {
            out.extend(self.equal_degree(&g, d, rng));
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    /// Roots in F_p of `f`, sorted ascending (brute force for small p, splitting otherwise).
    pub fn roots<R: Rng>(&self, f: &[u64], rng: &mut R) -> Vec<u64> {
        let mut f = f.to_vec();
        self.trim(&mut f);
        if f.len() <= 1 {
            return Vec::new();
        }
        if self.p < 1000 {
            return (0..self.p).filter(|&x| self.eval(&f, x) == 0).collect();
        }
        let xp = self.powmod(&[0, 1], self.p as u128, &f);
        let g = self.pgcd(&f, &self.psub(&xp, &[0, 1]));
        if g.len() <= 1 {
            return Vec::new();
        }
        let mut r: Vec<u64> = self
            .equal_degree(&g, 1, rng)
            .into_iter()
            .map(|l| self.neg(l[0]))
            .collect();
        r.sort();
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn factors_multiply_back() {
        let f = Fp::new(43);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let poly = f.pmul(&f.pmul(&[1, 0, 1], &[3, 1]), &[5, 2, 0, 1]);
        let poly = f.monic(&poly);
        let fac = f.factor_squarefree(&poly, &mut rng);
        let prod = fac.iter().fold(vec![1u64], |acc, g| f.pmul(&acc, g));
        assert_eq!(prod, poly);
        for g in &fac {
            let sub = f.factor_squarefree(g, &mut rng);
            assert_eq!(sub.len(), 1);
        }
    }

    #[test]
    fn roots_match_brute_force() {
        let f = Fp::new(1009);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let poly = f.pmul(&f.pmul(&[1004, 1], &[3, 1]), &[1, 0, 1]);
        let brute: Vec<u64> = (0..1009).filter(|&x| f.eval(&poly, x) == 0).collect();
        assert_eq!(f.roots(&poly, &mut rng), brute);
    }
}
