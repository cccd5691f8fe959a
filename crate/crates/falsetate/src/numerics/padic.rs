//! p-adic numbers to tracked finite precision O(p^N).
//!
//! Precision is explicit per value; subtraction of close values shrinks the
//! known precision and is never silently padded.

use crate::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use num_traits::Signed;

/// Element of Q_p known to precision O(p^(val + prec)).
///
/// A nonzero value is `unit * p^val` with `unit` a p-adic unit known modulo
/// p^prec. Exact zero is represented with `unit = 0` and carries an absolute
/// precision in `val + prec`.
#[derive(Debug, Clone)]
pub struct PadicNumber {
    p: u64,
    val: i64,
    unit: BigUint,
    prec: u32,
}

impl PadicNumber {
    pub fn zero(p: u64, abs_prec: i64) -> Self {
        PadicNumber { p, val: abs_prec, unit: BigUint::zero(), prec: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Valuation; meaningless for exact zero (use `is_zero`).
    pub fn valuation(&self) -> i64 {
        self.val
    }

    /// Relative precision: number of known unit digits.
    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Absolute precision: the value is known modulo p^abs_prec.
    pub fn abs_prec(&self) -> i64 {
        self.val + self.prec as i64
    }

    pub fn unit_part(&self) -> &BigUint {
        &self.unit
    }

    fn pk(p: u64, k: u32) -> BigUint {
        BigUint::from(p).pow(k)
    }

    fn make(p: u64, val: i64, unit: BigUint, prec: u32) -> Self {
        if prec == 0 || unit.is_zero() {
            return PadicNumber::zero(p, val + prec as i64);
        }
        let mut unit = unit % Self::pk(p, prec);
        if unit.is_zero() {
            return PadicNumber::zero(p, val + prec as i64);
        }
        // strip p factors out of the unit (cancellation): precision shrinks
        let mut val = val;
        let mut prec = prec;
        let pb = BigUint::from(p);
        while (&unit % &pb).is_zero() {
            unit /= &pb;
            val += 1;
            prec -= 1;
            if prec == 0 {
                return PadicNumber::zero(p, val);
            }
        }
        PadicNumber { p, val, unit, prec }
    }

    pub fn from_bigint(v: &BigInt, p: u64, prec: u32) -> Self {
        if v.is_zero() {
            return PadicNumber::zero(p, prec as i64);
        }
        let mut val = 0i64;
        let mut n = v.abs().to_biguint().unwrap();
        let pb = BigUint::from(p);
        while (&n % &pb).is_zero() {
            n /= &pb;
            val += 1;
        }
        let modulus = Self::pk(p, prec);
        let mut unit = n % &modulus;
        if v.is_negative() {
            unit = (&modulus - unit) % &modulus;
        }
        PadicNumber::make(p, val, unit, prec)
    }

    pub fn from_i64(v: i64, p: u64, prec: u32) -> Self {
        Self::from_bigint(&BigInt::from(v), p, prec)
    }

    /// num/den as a p-adic number; den need not be a unit.
    pub fn from_ratio(num: &BigInt, den: &BigInt, p: u64, prec: u32) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Internal("p-adic division by zero".into()));
        }
        let a = Self::from_bigint(num, p, prec + 2);
        let b = Self::from_bigint(den, p, prec + 2);
        Ok(a.div(&b).with_prec(prec))
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let prec = prec.min(self.prec);
        PadicNumber::make(self.p, self.val, self.unit.clone(), prec)
    }

    /// Digit d_i of the full expansion `sum d_i p^(val + i)`, 0 <= i < prec.
    pub fn digit(&self, i: u32) -> u64 {
        assert!(i < self.prec);
        let pb = BigUint::from(self.p);
        ((&self.unit / pb.pow(i)) % &pb).to_u64().unwrap()
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let m = Self::pk(self.p, self.prec);
        PadicNumber::make(self.p, self.val, &m - (&self.unit % &m), self.prec)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let p = self.p;
        if self.is_zero() {
            let ap = self.abs_prec().min(other.abs_prec());
            if other.is_zero() {
                return PadicNumber::zero(p, ap);
            }
            let keep = (ap - other.val).clamp(0, other.prec as i64) as u32;
            return PadicNumber::make(p, other.val, other.unit.clone(), keep);
        }
        if other.is_zero() {
            return other.add(self);
        }
        let val = self.val.min(other.val);
        let abs = self.abs_prec().min(other.abs_prec());
        if abs <= val {
            return PadicNumber::zero(p, abs);
        }
        let prec = (abs - val) as u32;
        let m = Self::pk(p, prec + 2);
        let lift = |x: &PadicNumber| -> BigUint {
            (&x.unit * Self::pk(p, (x.val - val) as u32)) % &m
        };
        let s = (lift(self) + lift(other)) % &m;
        PadicNumber::make(p, val, s, prec)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let p = self.p;
        if self.is_zero() || other.is_zero() {
            // ord(xy) >= ord(x)+ord(y); for zero operands use abs precision
            let v1 = if self.is_zero() { self.abs_prec() } else { self.val };
            let v2 = if other.is_zero() { other.abs_prec() } else { other.val };
            return PadicNumber::zero(p, v1 + v2);
        }
        let prec = self.prec.min(other.prec);
        let u = (&self.unit * &other.unit) % Self::pk(p, prec);
        PadicNumber::make(p, self.val + other.val, u, prec)
    }

    /// Multiplicative inverse; fails on (numerical) zero.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::InsufficientPrecision("inverting p-adic zero".into()));
        }
        let m = Self::pk(self.p, self.prec);
        let u = BigInt::from(self.unit.clone());
        let mm = BigInt::from(m.clone());
        let g = u.extended_gcd(&mm);
        debug_assert!(g.gcd.is_one());
        let inv = ((g.x % &mm) + &mm) % &mm;
        Ok(PadicNumber::make(
            self.p,
            -self.val,
            inv.to_biguint().unwrap(),
            self.prec,
        ))
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv().expect("division by p-adic zero"))
    }

    pub fn pow_i64(&self, k: i64) -> Self {
        if k == 0 {
            return PadicNumber::from_i64(1, self.p, self.prec.max(1));
        }
        let base = if k >= 0 { self.clone() } else { self.inv().expect("pow of zero") };
        let mut acc: Option<PadicNumber> = None;
        let mut e = k.unsigned_abs();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => b.clone(),
                    Some(a) => a.mul(&b),
                });
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        acc.unwrap()
    }

    /// ord_p as Some(v), or None for (numerical) zero.
    pub fn ord(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.val)
        }
    }

    pub fn is_unit(&self) -> bool {
        !self.is_zero() && self.val == 0
    }

    /// Congruent modulo p^k, as far as both are known.
    pub fn congruent_mod(&self, other: &Self, k: i64) -> bool {
        let d = self.sub(other);
        match d.ord() {
            None => d.abs_prec() >= k,
            Some(v) => v >= k,
        }
    }

    /// Largest k <= both absolute precisions with x = y mod p^k.
    pub fn congruence_depth(&self, other: &Self) -> i64 {
        let d = self.sub(other);
        match d.ord() {
            None => d.abs_prec(),
            Some(v) => v,
        }
    }
}

impl PartialEq for PadicNumber {
    /// Equality to the shared precision.
    fn eq(&self, other: &Self) -> bool {
        let k = self.abs_prec().min(other.abs_prec());
        self.congruent_mod(other, k)
    }
}

impl std::fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0 + O({}^{})", self.p, self.abs_prec());
        }
        let mut parts: Vec<String> = Vec::new();
        for i in 0..self.prec {
            let d = self.digit(i);
            if d == 0 {
                continue;
            }
            let e = self.val + i as i64;
            let s = match e {
                0 => format!("{}", d),
                1 => {
                    if d == 1 {
                        format!("{}", self.p)
                    } else {
                        format!("{}*{}", d, self.p)
                    }
                }
                _ => {
                    if d == 1 {
                        format!("{}^{}", self.p, e)
                    } else {
                        format!("{}*{}^{}", d, self.p, e)
                    }
                }
            };
            parts.push(s);
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{} + O({}^{})", parts.join(" + "), self.p, self.abs_prec())
    }
}

/// Unit root u and complement w = p/u of 1 - a_p T + p T^2 for an ordinary
/// prime: u + w = a_p, u*w = p, u = a_p mod p.
pub fn hensel_roots(ap: &BigInt, p: u64, prec: u32) -> Result<(PadicNumber, PadicNumber)> {
    if (ap % BigInt::from(p)).is_zero() {
        return Err(Error::NotOrdinary);
    }
    let wp = prec + 2;
    let a = PadicNumber::from_bigint(ap, p, wp);
    // Newton for f(x) = x^2 - a_p x + p, starting from x = a_p mod p
    let mut x = PadicNumber::from_bigint(&(ap % BigInt::from(p)), p, wp);
    let pp = PadicNumber::from_i64(p as i64, p, wp);
    for _ in 0..(64 - (wp as u64).leading_zeros() + 2) {
        let fx = x.mul(&x).sub(&a.mul(&x)).add(&pp);
        let dfx = x.add(&x).sub(&a);
        x = x.sub(&fx.div(&dfx));
    }
    let u = x.with_prec(prec);
    debug_assert!(u.is_unit());
    let w = pp.with_prec(prec + 1).div(&u);
    Ok((u, w.with_prec(prec)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hensel_unit_root_21a4_at_5() {
        // a_5 = -2 for 21A4; unit root u = 3 + 2*5 + 4*5^2 + 2*5^3 + ...
        let (u, w) = hensel_roots(&BigInt::from(-2), 5, 10).unwrap();
        assert_eq!(u.valuation(), 0);
        assert_eq!(u.digit(0), 3);
        assert_eq!(u.digit(1), 2);
        assert_eq!(u.digit(2), 4);
        assert_eq!(u.digit(3), 2);
        assert_eq!(u.digit(4), 1);
        assert_eq!(u.digit(5), 4);
        // u + w = a_p, u*w = p to full precision
        let sum = u.add(&w);
        assert!(sum.congruent_mod(&PadicNumber::from_i64(-2, 5, 10), 10));
        let prod = u.mul(&w);
        assert!(prod.congruent_mod(&PadicNumber::from_i64(5, 5, 10), 10));
        // w expansion from the paper: 2*5 + 2*5^3 + 3*5^4 + ...
        assert_eq!(w.valuation(), 1);
        assert_eq!(w.digit(0), 2);
        assert_eq!(w.digit(1), 0);
        assert_eq!(w.digit(2), 2);
        assert_eq!(w.digit(3), 3);
    }

    #[test]
    fn hensel_congruence_mod_p() {
        let (u, _) = hensel_roots(&BigInt::from(1), 3, 1).unwrap();
        assert!(u.congruent_mod(&PadicNumber::from_i64(1, 3, 1), 1));
    }

    #[test]
    fn supersingular_rejected() {
        assert!(matches!(hensel_roots(&BigInt::from(10), 5, 4), Err(Error::NotOrdinary)));
    }

    #[test]
    fn random_ordinary_pairs_factor() {
        // u + w = a_p and u*w = p for many ordinary (a_p, p)
        let primes = [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
            73, 79, 83, 89, 97];
        let mut count = 0;
        let mut seed = 0x9e3779b97f4a7c15u64;
        while count < 100 {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let p = primes[(seed >> 33) as usize % primes.len()];
            let bound = 2.0 * (p as f64).sqrt();
            let a = ((seed >> 7) % (2 * bound as u64 + 1)) as i64 - bound as i64;
            if a.unsigned_abs() % p == 0 {
                continue;
            }
            let (u, w) = hensel_roots(&BigInt::from(a), p, 12).unwrap();
            assert!(u.add(&w).congruent_mod(&PadicNumber::from_i64(a, p, 12), 12));
            assert!(u.mul(&w).congruent_mod(&PadicNumber::from_i64(p as i64, p, 12), 12));
            count += 1;
        }
    }

    #[test]
    fn cancellation_shrinks_precision() {
        let p = 5;
        let a = PadicNumber::from_i64(26, p, 6); // 1 + 5^2
        let b = PadicNumber::from_i64(1, p, 6);
        let d = a.sub(&b); // 5^2, known to O(5^6)
        assert_eq!(d.valuation(), 2);
        assert_eq!(d.abs_prec(), 6);
        assert_eq!(d.prec(), 4);
    }

    #[test]
    fn arithmetic_roundtrip_properties() {
        let mut seed = 12345u64;
        for _ in 0..200 {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
            let p = [3u64, 5, 7][(seed >> 60) as usize % 3];
            let x = PadicNumber::from_i64(((seed >> 10) % 10_000) as i64 + 1, p, 8);
            let y = PadicNumber::from_i64(((seed >> 30) % 10_000) as i64 + 1, p, 8);
            let back = x.add(&y).sub(&y);
            let k = back.abs_prec().min(x.abs_prec());
            assert!(back.congruent_mod(&x, k));
            if !y.is_zero() {
                let back2 = x.mul(&y).div(&y);
                let k2 = back2.abs_prec().min(x.abs_prec());
                assert!(back2.congruent_mod(&x, k2));
            }
        }
    }

    #[test]
    fn display_format() {
        let (u, _) = hensel_roots(&BigInt::from(-2), 5, 4).unwrap();
        assert_eq!(format!("{}", u), "3 + 2*5 + 4*5^2 + 2*5^3 + O(5^4)");
    }
}
