//! Integer factorization: trial division, Miller-Rabin and Pollard-Brent rho.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

const TRIAL_BOUND: u64 = 10_000;

/// Factors `n >= 1` into `(prime, exponent)` pairs with strictly increasing primes.
pub fn factor_integer(n: &BigInt) -> Vec<(BigInt, u32)> {
    assert!(n.is_positive(), "factor_integer needs a positive argument");
    let mut n = n.clone();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    let push = |out: &mut Vec<(BigInt, u32)>, p: BigInt| match out.iter_mut().find(|(q, _)| *q == p) {
        Some(e) => e.1 += 1,
        None => out.push((p, 1)),
    };
    let mut p = 2u64;
    while p <= TRIAL_BOUND {
        let bp = BigInt::from(p);
        if &bp * &bp > n {
            break;
        }
        loop {
            let (q, r) = n.div_rem(&bp);
            if !r.is_zero() {
                break;
            }
            n = q;
            push(&mut out, bp.clone());
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !n.is_one() {
        let mut stack = vec![n];
        while let Some(m) = stack.pop() {
            if m.is_one() {
                continue;
            }
            if is_probable_prime(&m) {
                push(&mut out, m);
                continue;
            }
            let f = pollard_brent(&m);
            stack.push(f.clone());
            stack.push(m / f);
        }
    }
    out.sort();
    out
}

pub fn is_probable_prime(n: &BigInt) -> bool {
    if *n < BigInt::from(2) {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &SMALL {
        let bp = BigInt::from(p);
        if *n == bp {
            return true;
        }
        if (n % &bp).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let nm1 = n - &one;
    let mut d = nm1.clone();
    let mut s = 0;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    // These twelve bases are deterministic below 3.3e24; beyond that the test is probabilistic.
    'witness: for &a in &SMALL {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: &BigInt) -> BigInt {
    if n.is_even() {
        return BigInt::from(2);
    }
    let mut c = BigInt::one();
    loop {
        let f = |x: &BigInt| (x * x + &c) % n;
        let mut y = BigInt::from(2);
        let mut r = 1u64;
        let mut q = BigInt::one();
        let mut g = BigInt::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        let m = 64u64;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    q = (q * (&x - &y).abs()) % n;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
        }
        if g == *n {
            loop {
                ys = f(&ys);
                g = (&x - &ys).abs().gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if g != *n {
            return g;
        }
        c += 1;
    }
}

pub fn small_primes(bound: u64) -> Vec<u64> {
    let n = bound as usize + 1;
    let mut sieve = vec![true; n.max(2)];
    sieve[0] = false;
    if n > 1 {
        sieve[1] = false;
    }
    let mut i = 2;
    while i * i < n {
        if sieve[i] {
            let mut j = i * i;
            while j < n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (0..n).filter(|&i| sieve[i]).map(|i| i as u64).collect()
}

pub fn is_prime_u64(n: u64) -> bool {
    is_probable_prime(&BigInt::from(n))
}

/// Modular inverse of `a` modulo the prime `p`.
pub fn inv_mod_u64(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return None;
    }
    let (g, x, _) = ext_gcd_i128(a as i128, p as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(p as i128) as u64)
}

fn ext_gcd_i128(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd_i128(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

pub fn to_u64(n: &BigInt) -> Option<u64> {
    n.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn factors_documented_values() {
        assert_eq!(factor_integer(&b(691)), vec![(b(691), 1)]);
        assert!(factor_integer(&b(1)).is_empty());
        let f = factor_integer(&b(31452624));
        assert_eq!(f, vec![(b(2), 4), (b(3), 4), (b(7), 1), (b(3467), 1)]);
        let prod: BigInt = f.iter().map(|(p, e)| num_traits::pow(p.clone(), *e as usize)).product();
        assert_eq!(prod, b(31452624));
        assert_eq!(factor_integer(&b(81829)), vec![(b(11), 1), (b(43), 1), (b(173), 1)]);
    }

    #[test]
    fn factors_large_semiprime() {
        let p = BigInt::from(1_000_000_007u64);
        let q = BigInt::from(998_244_353u64);
        let n = &p * &q * 4;
        assert_eq!(factor_integer(&n), vec![(b(2), 2), (q, 1), (p, 1)]);
    }

    #[test]
    fn trial_division_oracle_agrees() {
        for n in 1..3000i64 {
            let f = factor_integer(&b(n));
            let prod = f.iter().fold(BigInt::one(), |acc, (p, e)| acc * p.pow(*e));
            assert_eq!(prod, b(n));
            assert!(f.windows(2).all(|w| w[0].0 < w[1].0));
            assert!(f.iter().all(|(p, _)| is_probable_prime(p)));
        }
    }
}
