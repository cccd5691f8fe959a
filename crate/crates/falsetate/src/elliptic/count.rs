//! Point counting on reductions: exhaustive enumeration for small primes and
//! a Shanks-Mestre baby-step giant-step count for large ones.

use super::curve::Curve;
use crate::numerics::bigint_valuation;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// Naive counting is used below this bound; BSGS above it.
pub const NAIVE_CUTOFF: u64 = 20_000;

fn modq(x: &BigInt, q: u64) -> u64 {
    let r = x % BigInt::from(q);
    let r = if r.is_negative() { r + BigInt::from(q) } else { r };
    r.to_u64().unwrap()
}

fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    (a as u128 * b as u128 % q as u128) as u64
}

fn add_mod(a: u64, b: u64, q: u64) -> u64 {
    let s = a + b;
    if s >= q {
        s - q
    } else {
        s
    }
}

fn sub_mod(a: u64, b: u64, q: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + q - b
    }
}

fn pow_mod(mut b: u64, mut e: u64, q: u64) -> u64 {
    let mut acc = 1u64;
    b %= q;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, q);
        }
        b = mul_mod(b, b, q);
        e >>= 1;
    }
    acc
}

fn legendre(a: u64, q: u64) -> i32 {
    let a = a % q;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (q - 1) / 2, q) == 1 {
        1
    } else {
        -1
    }
}

/// Tonelli-Shanks square root mod odd prime q; input must be a QR.
fn sqrt_mod(a: u64, q: u64) -> u64 {
    let a = a % q;
    if a == 0 {
        return 0;
    }
    if q % 4 == 3 {
        return pow_mod(a, (q + 1) / 4, q);
    }
    // write q-1 = s * 2^r
    let mut s = q - 1;
    let mut r = 0u32;
    while s % 2 == 0 {
        s /= 2;
        r += 1;
    }
    // find a non-residue
    let mut z = 2;
    while legendre(z, q) != -1 {
        z += 1;
    }
    let mut m = r;
    let mut c = pow_mod(z, s, q);
    let mut t = pow_mod(a, s, q);
    let mut res = pow_mod(a, (s + 1) / 2, q);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, q);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), q);
        m = i;
        c = mul_mod(b, b, q);
        t = mul_mod(t, c, q);
        res = mul_mod(res, b, q);
    }
    res
}

/// Short Weierstrass coefficients (A, B) mod q with q >= 5:
/// y^2 = x^3 + Ax + B, isomorphic to E over F_q.
fn short_model(e: &Curve, q: u64) -> (u64, u64) {
    let a = modq(&(-27 * e.c4()), q);
    let b = modq(&(-54 * e.c6()), q);
    (a, b)
}

/// #E(F_q) for good reduction at q, including the point at infinity.
pub fn count_points(e: &Curve, q: u64) -> Result<u64> {
    if !(e.disc() % BigInt::from(q)).is_zero() {
        // fine
    } else {
        return Err(Error::BadPrime(format!("{q} divides the discriminant")));
    }
    if q <= 3 {
        let a = e.a_invariants();
        let mut n = 1u64;
        for x in 0..q {
            for y in 0..q {
                let f = BigInt::from(y) * y + &a[0] * x * y + &a[2] * y
                    - (BigInt::from(x) * x * x + &a[1] * x * x + &a[3] * x + &a[4]);
                if modq(&f, q) == 0 {
                    n += 1;
                }
            }
        }
        return Ok(n);
    }
    let (aa, bb) = short_model(e, q);
    if q <= NAIVE_CUTOFF {
        Ok(naive_count(aa, bb, q))
    } else {
        Ok(bsgs_count(aa, bb, q))
    }
}

fn naive_count(a: u64, b: u64, q: u64) -> u64 {
    // quadratic-residue table
    let mut chi = vec![-1i8; q as usize];
    chi[0] = 0;
    let mut x = 1u64;
    while x <= q / 2 {
        chi[mul_mod(x, x, q) as usize] = 1;
        x += 1;
    }
    let mut n: i64 = q as i64 + 1;
    for x in 0..q {
        let t = (mul_mod(mul_mod(x, x, q), x, q) + mul_mod(a, x, q) + b) % q;
        n += chi[t as usize] as i64;
    }
    n as u64
}

// ---- BSGS point counting ----

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct Pt {
    x: u64,
    y: u64,
    inf: bool,
}

struct Fp {
    q: u64,
    a: u64,
}

impl Fp {
    fn add(&self, p1: Pt, p2: Pt) -> Pt {
        let q = self.q;
        if p1.inf {
            return p2;
        }
        if p2.inf {
            return p1;
        }
        if p1.x == p2.x {
            if add_mod(p1.y, p2.y, q) == 0 {
                return Pt { x: 0, y: 0, inf: true };
            }
            // doubling
            let num = add_mod(mul_mod(3, mul_mod(p1.x, p1.x, q), q), self.a, q);
            let den = mul_mod(2, p1.y, q);
            let l = mul_mod(num, pow_mod(den, q - 2, q), q);
            let x3 = sub_mod(mul_mod(l, l, q), mul_mod(2, p1.x, q), q);
            let y3 = sub_mod(mul_mod(l, sub_mod(p1.x, x3, q), q), p1.y, q);
            return Pt { x: x3, y: y3, inf: false };
        }
        let num = sub_mod(p2.y, p1.y, q);
        let den = sub_mod(p2.x, p1.x, q);
        let l = mul_mod(num, pow_mod(den, q - 2, q), q);
        let x3 = sub_mod(sub_mod(mul_mod(l, l, q), p1.x, q), p2.x, q);
        let y3 = sub_mod(mul_mod(l, sub_mod(p1.x, x3, q), q), p1.y, q);
        Pt { x: x3, y: y3, inf: false }
    }

    fn mul(&self, mut k: u64, p: Pt) -> Pt {
        let mut acc = Pt { x: 0, y: 0, inf: true };
        let mut base = p;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            k >>= 1;
        }
        acc
    }
}

/// Multiples m in [lo, hi] of the annihilator of P found by BSGS on
/// [q+1-s, q+1+s].
fn annihilators(fp: &Fp, p: Pt, q: u64) -> Vec<u64> {
    let s = (2.0 * (q as f64).sqrt()).floor() as u64 + 1;
    let lo = q + 1 - s;
    let width = 2 * s + 1;
    let bs = (width as f64).sqrt().ceil() as u64 + 1;
    // baby steps: j*P for j in [0, bs)
    let mut table = std::collections::HashMap::with_capacity(bs as usize);
    let mut cur = Pt { x: 0, y: 0, inf: true };
    for j in 0..bs {
        table.entry(if cur.inf { u64::MAX } else { cur.x }).or_insert_with(Vec::new).push((j, cur));
        cur = fp.add(cur, p);
    }
    // giant steps: (lo + i*bs)*P for i = 0, 1, ...
    let step = fp.mul(bs, p);
    let mut giant = fp.mul(lo, p);
    let mut out = Vec::new();
    let mut i = 0u64;
    while i * bs <= width + bs {
        if let Some(entries) = table.get(&(if giant.inf { u64::MAX } else { giant.x })) {
            for &(j, bp) in entries {
                let base = lo + i * bs;
                // giant = (lo + i*bs)P; match giant = +-(jP) -> m = base -+ j
                if giant.inf && bp.inf {
                    if base <= lo + width {
                        out.push(base);
                    }
                } else if !giant.inf && !bp.inf && giant.x == bp.x {
                    if giant.y == bp.y && base >= j {
                        let m = base - j;
                        if m >= lo && m <= lo + width {
                            out.push(m);
                        }
                    }
                    if giant.y == (fp.q - bp.y) % fp.q {
                        let m = base + j;
                        if m >= lo && m <= lo + width {
                            out.push(m);
                        }
                    }
                }
            }
        }
        giant = fp.add(giant, step);
        i += 1;
    }
    out.sort_unstable();
    out.dedup();
    // keep genuine annihilators only
    out.retain(|&m| fp.mul(m, p).inf);
    out
}

/// Exact order of P given some annihilator m > 0.
fn point_order(fp: &Fp, p: Pt, m: u64) -> u64 {
    let mut ord = m;
    for (f, _) in crate::numerics::factor::factor_u128(m as u128) {
        let f = f as u64;
        while ord % f == 0 && fp.mul(ord / f, p).inf {
            ord /= f;
        }
    }
    ord
}

/// Shanks-Mestre count for q > 229 with good reduction.
fn bsgs_count(a: u64, b: u64, q: u64) -> u64 {
    let s = (2.0 * (q as f64).sqrt()).floor() as u64 + 1;
    let lo = q + 1 - s;
    let hi = q + 1 + s;
    // twist by a non-residue d: y^2 = x^3 + A d^2 x + B d^3
    let mut d = 2;
    while legendre(d, q) != -1 {
        d += 1;
    }
    let at = mul_mod(a, mul_mod(d, d, q), q);
    let bt = mul_mod(b, mul_mod(d, mul_mod(d, d, q), q), q);
    let mut rng = q.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(12345) | 1;
    let mut next = move || {
        rng ^= rng << 13;
        rng ^= rng >> 7;
        rng ^= rng << 17;
        rng
    };
    let mut lcm_e: u64 = 1;
    let mut lcm_t: u64 = 1;
    for _ in 0..200 {
        for side in 0..2 {
            let (aa, bb) = if side == 0 { (a, b) } else { (at, bt) };
            let fp = Fp { q, a: aa };
            // random point
            let p = loop {
                let x = next() % q;
                let t = (mul_mod(mul_mod(x, x, q), x, q) + mul_mod(aa, x, q) + bb) % q;
                if legendre(t, q) == 1 {
                    break Pt { x, y: sqrt_mod(t, q), inf: false };
                }
            };
            let anns = annihilators(&fp, p, q);
            if anns.is_empty() {
                continue;
            }
            let ord = point_order(&fp, p, anns[0]);
            if side == 0 {
                lcm_e = num_integer::lcm(lcm_e, ord);
            } else {
                lcm_t = num_integer::lcm(lcm_t, ord);
            }
            // candidates for #E: multiples of lcm_e in [lo, hi]; and via the
            // twist #E = 2q + 2 - #E_t with #E_t a multiple of lcm_t
            let cands: Vec<u64> = multiples_in(lcm_e, lo, hi)
                .into_iter()
                .filter(|n| multiples_in(lcm_t, lo, hi).contains(&(2 * q + 2 - n)))
                .collect();
            if cands.len() == 1 {
                return cands[0];
            }
        }
    }
    // should not happen for q > 229 by Mestre's theorem
    naive_count(a, b, q)
}

fn multiples_in(d: u64, lo: u64, hi: u64) -> Vec<u64> {
    let first = lo.div_ceil(d) * d;
    (0..)
        .map(|i| first + i * d)
        .take_while(|&m| m <= hi)
        .collect()
}

/// Trace of Frobenius a_q for a prime of good reduction.
pub fn ap(e: &Curve, q: u64) -> Result<BigInt> {
    let n = count_points(e, q)?;
    Ok(BigInt::from(q) + 1 - BigInt::from(n))
}

/// alpha^f + beta^f where alpha, beta are the Frobenius roots at q:
/// t_0 = 2, t_1 = a_q, t_k = a_q t_{k-1} - q t_{k-2}.
pub fn trace_over_extension(aq: &BigInt, q: u64, f: u32) -> BigInt {
    let mut t0 = BigInt::from(2);
    let mut t1 = aq.clone();
    if f == 0 {
        return t0;
    }
    for _ in 1..f {
        let t2 = aq * &t1 - BigInt::from(q) * &t0;
        t0 = t1;
        t1 = t2;
    }
    t1
}

/// Hasse-bound check helper used by tests.
pub fn hasse_ok(aq: &BigInt, q: u64) -> bool {
    let bound = 4 * BigInt::from(q);
    aq * aq <= bound
}

/// Valuation of |E~(F_q)| at p, used by Iwasawa-theoretic code.
pub fn reduced_points_valuation(e: &Curve, q: u64, p: u64) -> Result<u32> {
    let n = BigInt::from(count_points(e, q)?);
    Ok(if (&n % BigInt::from(p)).is_zero() { bigint_valuation(&n, p) } else { 0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e21() -> Curve {
        Curve::from_i64([1, 0, 0, 1, 0]).unwrap()
    }

    #[test]
    fn golden_traces() {
        // paper: P_5 = 1 + 2T + 5T^2 so a_5 = -2; P_2 = 1 + T + 2T^2 so a_2 = -1
        assert_eq!(ap(&e21(), 5).unwrap(), BigInt::from(-2));
        assert_eq!(ap(&e21(), 2).unwrap(), BigInt::from(-1));
        // 11a3: a_2 = -2, a_3 = -1 (known expansion of the level-11 form)
        let e11 = Curve::from_i64([0, -1, 1, 0, 0]).unwrap();
        assert_eq!(ap(&e11, 2).unwrap(), BigInt::from(-2));
        assert_eq!(ap(&e11, 3).unwrap(), BigInt::from(-1));
    }

    #[test]
    fn bad_prime_rejected() {
        assert!(ap(&e21(), 3).is_err());
    }

    #[test]
    fn hasse_bound_small_primes() {
        let e = e21();
        for q in [2u64, 5, 11, 13, 17, 19, 23, 97, 101] {
            let a = ap(&e, q).unwrap();
            assert!(hasse_ok(&a, q), "Hasse fails at {q}");
        }
    }

    #[test]
    fn bsgs_matches_naive() {
        let e = e21();
        // force both paths on the same primes just above/below nothing:
        for q in [10007u64, 10009, 10037, 4001, 5003] {
            let (a, b) = short_model(&e, q);
            let naive = naive_count(a, b, q);
            let fast = bsgs_count(a, b, q);
            assert_eq!(naive, fast, "mismatch at {q}");
        }
    }

    #[test]
    fn trace_recurrence() {
        // |E(F_{q^f})| = q^f + 1 - (alpha^f + beta^f): check against naive
        // count over F_4 is not directly available; instead check the
        // identity t_2 = a^2 - 2q
        let a = BigInt::from(-2);
        assert_eq!(trace_over_extension(&a, 5, 2), BigInt::from(4 - 10));
        assert_eq!(trace_over_extension(&a, 5, 1), a);
    }
}
