//! Machine-word modular arithmetic: powers, inverses, orders, primitive
//! roots and primality. Everything here is exact and deterministic.

use num_bigint::BigUint;
use num_traits::{One, Zero};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    assert!(m > 0);
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, for `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    assert!(r0 == 1, "inv_mod: {a} not invertible mod {m}");
    t0.rem_euclid(m as i128) as u64
}

/// Deterministic Miller-Rabin for u64 (the standard 12-base certificate).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn primes_below(n: u64) -> Vec<u64> {
    let n = n as usize;
    if n < 3 {
        return Vec::new();
    }
    let mut sieve = vec![true; n];
    sieve[0] = false;
    sieve[1] = false;
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

/// Trial-division factorization; fine at desk scale.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Multiplicative order of `a` modulo the prime `p`.
pub fn multiplicative_order(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "order of 0 mod {p}");
    let mut order = p - 1;
    for (f, _) in factor(p - 1) {
        while order % f == 0 && pow_mod(a, order / f, p) == 1 {
            order /= f;
        }
    }
    order
}

pub fn is_primitive_root(v: u64, p: u64) -> bool {
    v % p != 0 && multiplicative_order(v, p) == p - 1
}

pub fn smallest_primitive_root(p: u64) -> u64 {
    (2..p)
        .find(|&v| is_primitive_root(v, p))
        .expect("every prime has a primitive root")
}

/// All primitive roots modulo `p`, ascending.
pub fn primitive_roots(p: u64) -> Vec<u64> {
    let g = smallest_primitive_root(p);
    let mut roots: Vec<u64> = (1..p - 1)
        .filter(|&k| gcd(k, p - 1) == 1)
        .map(|k| pow_mod(g, k, p))
        .collect();
    roots.sort_unstable();
    roots
}

/// `v^e mod p` lifted to 1..p−1, with `e` allowed to be negative.
pub fn lift_pow(v: u64, e: i64, p: u64) -> u64 {
    let e_red = e.rem_euclid((p - 1) as i64) as u64;
    pow_mod(v, e_red, p)
}

/// Miller-Rabin on big integers with fixed small-prime bases plus
/// deterministic pseudo-random witnesses. Probabilistic but ample for
/// "is this table entry prime" checks.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Ok(small) = u64::try_from(n) {
        return is_prime_u64(small);
    }
    let two = BigUint::from(2u32);
    if (n % 2u32).is_zero() {
        return false;
    }
    for p in primes_below(2000) {
        let bp = BigUint::from(p);
        if (n % &bp).is_zero() {
            return n == &bp;
        }
    }
    let n_minus_1 = n - 1u32;
    let mut d = n_minus_1.clone();
    let mut s = 0u32;
    while (&d % 2u32).is_zero() {
        d >>= 1;
        s += 1;
    }
    // 40 fixed witnesses derived from a simple counter hash
    let mut witness_src = BigUint::from(0x9e3779b97f4a7c15u64);
    'outer: for _ in 0..40 {
        witness_src = (&witness_src * 6364136223846793005u64 + 1442695040888963407u64)
            % (&n_minus_1 - 2u32)
            + 2u32;
        let mut x = witness_src.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    #[test]
    fn small_primes() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(131));
        assert!(is_prime_u64(4673706701));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(561)); // Carmichael
        assert_eq!(primes_below(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
    }

    #[test]
    fn orders_and_roots() {
        assert_eq!(smallest_primitive_root(5), 2);
        assert_eq!(smallest_primitive_root(7), 3);
        assert_eq!(smallest_primitive_root(131), 2);
        assert_eq!(smallest_primitive_root(137), 3);
        // 2 is a quadratic residue mod 167 (167 ≡ −1 mod 8), so not primitive.
        assert_eq!(multiplicative_order(2, 167), 83);
        assert_eq!(smallest_primitive_root(167), 5);
        assert_eq!(multiplicative_order(3, 5), 4);
        assert_eq!(multiplicative_order(3, 11), 5);
        assert_eq!(primitive_roots(7), vec![3, 5]);
    }

    #[test]
    fn inverse_and_lift() {
        assert_eq!(inv_mod(2, 5), 3);
        assert_eq!(lift_pow(2, -1, 5), 3);
        assert_eq!(lift_pow(2, -3, 5), 2);
        assert_eq!(lift_pow(3, 0, 7), 1);
    }

    #[test]
    fn big_primality() {
        let h = BigUint::from_str("46890540621121").unwrap();
        assert!(is_probable_prime(&h));
        let h = BigUint::from_str("5123189985484229035947419").unwrap();
        assert!(is_probable_prime(&h));
        let c = BigUint::from_str("5123189985484229035947421").unwrap();
        assert!(!is_probable_prime(&c));
    }
}
