//! Integer primality and factorization at desk scale: deterministic
//! Miller-Rabin for u64/u128 and Pollard rho with trial division.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

pub fn mulmod_u128(a: u128, b: u128, m: u128) -> u128 {
    // schoolbook double-and-add; m < 2^127
    if let (Some(a64), Some(b64), Some(m64)) = (a.try_into().ok(), b.try_into().ok(), m.try_into().ok()) {
        let (a64, b64, m64): (u64, u64, u64) = (a64, b64, m64);
        return ((a64 as u128 * b64 as u128) % m64 as u128) as u128;
    }
    let mut result: u128 = 0;
    let mut a = a % m;
    let mut b = b % m;
    while b > 0 {
        if b & 1 == 1 {
            result = result.checked_add(a).map(|v| v % m).unwrap_or_else(|| {
                (result % m).wrapping_add(a % m).wrapping_sub(if result % m >= m - a % m { m } else { 0 })
            });
            result %= m;
        }
        a = a.checked_add(a).map(|v| v % m).unwrap_or_else(|| (a << 1).wrapping_sub(m));
        a %= m;
        b >>= 1;
    }
    result
}

pub fn powmod_u128(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc: u128 = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod_u128(acc, base, m);
        }
        base = mulmod_u128(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for n < 3.3 * 10^24.
pub fn is_prime_u128(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
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
    'witness: for a in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod_u128(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod_u128(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn is_prime_u64(n: u64) -> bool {
    is_prime_u128(n as u128)
}

fn pollard_rho(n: u128) -> u128 {
    // Brent's variant
    let mut c: u128 = 1;
    loop {
        let f = |x: u128| (mulmod_u128(x, x, n) + c) % n;
        let mut x: u128 = 2;
        let mut y: u128 = 2;
        let mut d: u128 = 1;
        let mut count = 0u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            let diff = if x > y { x - y } else { y - x };
            if diff == 0 {
                d = n;
                break;
            }
            d = gcd_u128(diff, n);
            count += 1;
            if count > 1 << 26 {
                d = n;
                break;
            }
        }
        if d != n {
            return d;
        }
        c += 1;
        assert!(c < 64, "pollard rho failed");
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Factor n >= 1 into (prime, exponent) pairs, ascending.
pub fn factor_u128(mut n: u128) -> Vec<(u128, u32)> {
    let mut out: Vec<(u128, u32)> = Vec::new();
    let mut push = |p: u128, out: &mut Vec<(u128, u32)>| {
        if let Some(last) = out.iter_mut().find(|(q, _)| *q == p) {
            last.1 += 1;
        } else {
            out.push((p, 1));
        }
    };
    for p in 2u128..=7 {
        while n % p == 0 {
            push(p, &mut out);
            n /= p;
        }
    }
    let mut p = 11u128;
    let mut wheel = [2u128, 4].into_iter().cycle();
    while p * p <= n && p < 100_000 {
        while n % p == 0 {
            push(p, &mut out);
            n /= p;
        }
        p += wheel.next().unwrap();
    }
    // remaining part: recursive rho
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u128(m) {
            push(m, &mut out);
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    out.sort();
    out
}

/// Factor |n| for a nonzero BigInt that fits in u128.
pub fn factor_bigint(n: &BigInt) -> crate::Result<Vec<(u64, u32)>> {
    assert!(!n.is_zero());
    let v = n
        .abs()
        .to_u128()
        .ok_or_else(|| crate::Error::Unsupported("factorization beyond u128 scale".into()))?;
    Ok(factor_u128(v)
        .into_iter()
        .map(|(p, e)| (p.try_into().expect("prime fits u64"), e))
        .collect())
}

/// Simple sieve of Eratosthenes returning all primes <= n.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return vec![];
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut p = 2;
    while p * p <= n {
        if sieve[p] {
            let mut k = p * p;
            while k <= n {
                sieve[k] = false;
                k += p;
            }
        }
        p += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(i, &b)| if b { Some(i as u64) } else { None })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(1_000_000_007u64 * 3));
        assert!(is_prime_u128(170141183460469231731687303715884105727)); // 2^127 - 1
    }

    #[test]
    fn factoring() {
        assert_eq!(factor_u128(2u128.pow(8) * 17), vec![(2, 8), (17, 1)]);
        let f = factor_u128(600851475143);
        let back: u128 = f.iter().map(|(p, e)| p.pow(*e)).product();
        assert_eq!(back, 600851475143);
        assert!(f.iter().all(|&(p, _)| is_prime_u128(p)));
    }

    #[test]
    fn sieve() {
        let ps = primes_up_to(100);
        assert_eq!(ps.len(), 25);
        assert_eq!(ps[24], 97);
    }
}
