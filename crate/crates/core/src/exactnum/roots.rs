//! Integer root extraction and v-th-power-free splitting.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Roots;
use num_traits::{One, ToPrimitive, Zero};

const SIEVE_LIMIT: usize = 1 << 16;

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut composite = vec![false; SIEVE_LIMIT + 1];
        let mut primes = Vec::new();
        for i in 2..=SIEVE_LIMIT {
            if !composite[i] {
                primes.push(i as u32);
                let mut j = i * i;
                while j <= SIEVE_LIMIT {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        primes
    })
}

/// Splits `n` as `s^v * rest` with `rest` free of v-th powers.
///
/// Trial division runs over primes below 2^16 while `p^(v+1) <= m`. When the
/// loop stops on that bound the cofactor has at most `v` prime factors, so a
/// single perfect-power test settles it and the split is exact. Cofactors that
/// survive the whole prime table are only tested for being a perfect v-th power.
pub fn split_power(n: &BigUint, v: u32) -> (BigUint, BigUint) {
    assert!(v >= 1, "root degree must be positive");
    if v == 1 || n.is_zero() {
        return (n.clone(), BigUint::one());
    }
    if n.bits() <= 127 {
        let (s, rest) = split_power_u128(n.to_u128().unwrap_or(0), v);
        return (BigUint::from(s), BigUint::from(rest));
    }
    let mut m = n.clone();
    let mut s = BigUint::one();
    let mut rest = BigUint::one();
    for &p in small_primes() {
        if m.bits() <= 127 {
            let (s2, r2) = split_power_u128(m.to_u128().unwrap_or(0), v);
            return (s * s2, rest * r2);
        }
        let pb = BigUint::from(p);
        if pb.pow(v + 1) > m {
            break;
        }
        let mut e = 0u32;
        loop {
            let (q, r) = num_integer::Integer::div_rem(&m, &pb);
            if !r.is_zero() {
                break;
            }
            m = q;
            e += 1;
        }
        if e > 0 {
            s *= pb.pow(e / v);
            rest *= pb.pow(e % v);
        }
    }
    if !m.is_one() {
        let r = m.nth_root(v);
        if r.pow(v) == m {
            s *= r;
        } else {
            rest *= m;
        }
    }
    (s, rest)
}

fn checked_pow(base: u128, exp: u32) -> Option<u128> {
    base.checked_pow(exp)
}

fn split_power_u128(n: u128, v: u32) -> (u128, u128) {
    if n <= 1 {
        return (n, 1);
    }
    let mut m = n;
    let mut s: u128 = 1;
    let mut rest: u128 = 1;
    for &p in small_primes() {
        let p = p as u128;
        match checked_pow(p, v + 1) {
            Some(pp) if pp <= m => {}
            _ => break,
        }
        if m.is_multiple_of(p) {
            let mut e = 0u32;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            s *= p.pow(e / v);
            rest *= p.pow(e % v);
        }
    }
    if m > 1 {
        let r = m.nth_root(v);
        if checked_pow(r, v) == Some(m) {
            s *= r;
        } else {
            rest *= m;
        }
    }
    (s, rest)
}

/// Exact k-th root of `n` when `n` is a perfect k-th power.
pub fn exact_root(n: &BigUint, k: u32) -> Option<BigUint> {
    let r = n.nth_root(k);
    (r.pow(k) == n.clone()).then_some(r)
}

/// `floor(n^(1/k))` together with whether the root is exact.
pub fn floor_root(n: &BigUint, k: u32) -> (BigUint, bool) {
    let r = n.nth_root(k);
    let exact = &r.pow(k) == n;
    (r, exact)
}
