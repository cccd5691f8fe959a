//! Integral Weierstrass models over Q: invariants, coordinate changes, and
//! global minimalization via the Kraus-Connell reconstruction.

use crate::numerics::factor::factor_bigint;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Elliptic curve over Q given by a global minimal Weierstrass model
/// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Curve {
    pub a1: BigInt,
    pub a2: BigInt,
    pub a3: BigInt,
    pub a4: BigInt,
    pub a6: BigInt,
    disc: BigInt,
    c4: BigInt,
    c6: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BInvariants {
    pub b2: BigInt,
    pub b4: BigInt,
    pub b6: BigInt,
    pub b8: BigInt,
}

pub fn b_invariants(a: &[BigInt; 5]) -> BInvariants {
    let [a1, a2, a3, a4, a6] = a;
    let b2 = a1 * a1 + 4 * a2;
    let b4 = 2 * a4 + a1 * a3;
    let b6 = a3 * a3 + 4 * a6;
    let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * (a3 * a3) - a4 * a4;
    BInvariants { b2, b4, b6, b8 }
}

pub fn c_invariants(b: &BInvariants) -> (BigInt, BigInt) {
    let c4 = &b.b2 * &b.b2 - 24 * &b.b4;
    let c6 = -(&b.b2 * &b.b2 * &b.b2) + 36 * &b.b2 * &b.b4 - 216 * &b.b6;
    (c4, c6)
}

pub fn discriminant(b: &BInvariants) -> BigInt {
    -(&b.b2 * &b.b2) * &b.b8 - 8 * (&b.b4 * &b.b4 * &b.b4) - 27 * (&b.b6 * &b.b6)
        + 9 * &b.b2 * &b.b4 * &b.b6
}

/// Coordinate change x = u^2 x' + r, y = u^3 y' + s u^2 x' + t.
pub fn transform(a: &[BigInt; 5], u: &BigInt, r: &BigInt, s: &BigInt, t: &BigInt) -> [BigInt; 5] {
    let [a1, a2, a3, a4, a6] = a;
    let a1n = a1 + 2 * s;
    let a2n = a2 - s * a1 + 3 * r - s * s;
    let a3n = a3 + r * a1 + 2 * t;
    let a4n = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t;
    let a6n = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - t * r * a1;
    let out = [a1n, a2n, a3n, a4n, a6n];
    let mut res = [BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero()];
    for (i, (v, e)) in out.into_iter().zip([1u32, 2, 3, 4, 6]).enumerate() {
        let d = u.pow(e);
        let (q, rem) = num_integer::Integer::div_rem(&v, &d);
        assert!(rem.is_zero(), "non-integral transform");
        res[i] = q;
    }
    res
}

/// Kraus-Connell reconstruction of a-invariants from (c4, c6).
/// Returns None when no integral model with these invariants exists.
pub fn model_from_c4c6(c4: &BigInt, c6: &BigInt) -> Option<[BigInt; 5]> {
    // b2 is any residue of -c6 mod 12; take the absolutely least one
    let mut b2 = (-c6) % 12;
    if b2 > BigInt::from(6) {
        b2 -= 12;
    }
    if b2 < BigInt::from(-5) {
        b2 += 12;
    }
    let num_b4 = &b2 * &b2 - c4;
    if (&num_b4 % 24) != BigInt::zero() {
        return None;
    }
    let b4 = num_b4 / 24;
    let b2cube: BigInt = &b2 * &b2 * &b2;
    let num_b6: BigInt = -b2cube + 36 * &b2 * &b4 - c6;
    if (&num_b6 % 216) != BigInt::zero() {
        return None;
    }
    let b6 = num_b6 / 216;
    let a1 = &b2 & BigInt::from(1);
    let a2 = (&b2 - &a1 * &a1) / 4;
    let a3 = &b6 & BigInt::from(1);
    let num_a4 = &b4 - &a1 * &a3;
    if (&num_a4 % 2) != BigInt::zero() {
        return None;
    }
    let a4 = num_a4 / 2;
    let num_a6 = &b6 - &a3 * &a3;
    if (&num_a6 % 4) != BigInt::zero() {
        return None;
    }
    let a6 = num_a6 / 4;
    let a = [a1, a2, a3, a4, a6];
    let b = b_invariants(&a);
    let (c4b, c6b) = c_invariants(&b);
    if &c4b == c4 && &c6b == c6 {
        Some(a)
    } else {
        None
    }
}

impl Curve {
    /// Construct from a-invariants; the model is re-minimalized globally.
    pub fn new(a: [BigInt; 5]) -> Result<Curve> {
        let b = b_invariants(&a);
        let disc = discriminant(&b);
        if disc.is_zero() {
            return Err(Error::Parse("singular model (discriminant 0)".into()));
        }
        let (c4, c6) = c_invariants(&b);
        // find the largest u with an integral model for (c4/u^4, c6/u^6)
        let mut u = BigInt::from(1);
        for (q, e) in factor_bigint(&disc)? {
            let qb = BigInt::from(q);
            let max_e = (e / 12) + 1;
            for _ in 0..max_e {
                let cand = &u * &qb;
                let u4 = cand.pow(4);
                let u6 = cand.pow(6);
                if (&c4 % &u4).is_zero() && (&c6 % &u6).is_zero() {
                    let c4n = &c4 / &u4;
                    let c6n = &c6 / &u6;
                    if model_from_c4c6(&c4n, &c6n).is_some() {
                        u = cand;
                        continue;
                    }
                }
                break;
            }
        }
        let (c4m, c6m) = (&c4 / u.pow(4), &c6 / u.pow(6));
        let am = model_from_c4c6(&c4m, &c6m)
            .ok_or_else(|| Error::Internal("minimal model reconstruction failed".into()))?;
        let bm = b_invariants(&am);
        let discm = discriminant(&bm);
        let [a1, a2, a3, a4, a6] = am;
        Ok(Curve { a1, a2, a3, a4, a6, disc: discm, c4: c4m, c6: c6m })
    }

    pub fn from_i64(a: [i64; 5]) -> Result<Curve> {
        Curve::new(a.map(BigInt::from))
    }

    /// Parse "a1,a2,a3,a4,a6".
    pub fn parse(s: &str) -> Result<Curve> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 5 {
            return Err(Error::Parse(format!("expected 5 coefficients, got {}", parts.len())));
        }
        let mut a: Vec<BigInt> = Vec::with_capacity(5);
        for p in parts {
            // tolerate unicode minus
            let p = p.replace('\u{2212}', "-");
            a.push(p.parse().map_err(|_| Error::Parse(format!("bad integer: {p}")))?);
        }
        Curve::new([a[0].clone(), a[1].clone(), a[2].clone(), a[3].clone(), a[4].clone()])
    }

    pub fn a_invariants(&self) -> [BigInt; 5] {
        [
            self.a1.clone(),
            self.a2.clone(),
            self.a3.clone(),
            self.a4.clone(),
            self.a6.clone(),
        ]
    }

    pub fn b_invariants(&self) -> BInvariants {
        b_invariants(&self.a_invariants())
    }

    pub fn disc(&self) -> &BigInt {
        &self.disc
    }

    pub fn c4(&self) -> &BigInt {
        &self.c4
    }

    pub fn c6(&self) -> &BigInt {
        &self.c6
    }

    /// j-invariant c4^3 / disc as an exact rational.
    pub fn j_invariant(&self) -> num_rational::BigRational {
        num_rational::BigRational::new(self.c4.pow(3), self.disc.clone())
    }

    /// Bad primes: primes dividing the minimal discriminant.
    pub fn bad_primes(&self) -> Result<Vec<u64>> {
        Ok(factor_bigint(&self.disc)?.into_iter().map(|(p, _)| p).collect())
    }

    pub fn is_semistable(&self) -> Result<bool> {
        for q in self.bad_primes()? {
            if super::tate::tate_local(self, q)?.kind == super::ReductionKind::Additive {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Conductor N(E) via Tate's algorithm at each bad prime.
    pub fn conductor(&self) -> Result<BigInt> {
        let mut n = BigInt::from(1);
        for q in self.bad_primes()? {
            let ld = super::tate::tate_local(self, q)?;
            n *= BigInt::from(q).pow(ld.conductor_exponent);
        }
        Ok(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants_21a4() {
        // y^2 + xy = x^3 + x
        let e = Curve::from_i64([1, 0, 0, 1, 0]).unwrap();
        assert_eq!(e.disc(), &BigInt::from(-63));
        let j = e.j_invariant();
        assert_eq!(j, num_rational::BigRational::new(BigInt::from(-103823), BigInt::from(-63)));
        // j = 47^3 / (3^2 * 7); and 47^3 = 103823
    }

    #[test]
    fn invariants_11a3_and_272c1() {
        let e = Curve::from_i64([0, -1, 1, 0, 0]).unwrap();
        assert_eq!(e.disc(), &BigInt::from(-11));
        let e2 = Curve::from_i64([0, -1, 0, -4, 0]).unwrap();
        assert_eq!(e2.disc(), &BigInt::from(4352)); // 2^8 * 17
    }

    #[test]
    fn non_minimal_model_is_reduced() {
        // scale 11a3 by u = 2: same curve, non-minimal model
        let a = [0i64, -1, 1, 0, 0].map(BigInt::from);
        let big = transform(&a, &BigInt::from(1), &BigInt::zero(), &BigInt::zero(), &BigInt::zero());
        // manual u-scaling the other way: multiply a_i by u^i
        let scaled = [
            &big[0] * 2,
            &big[1] * 4,
            &big[2] * 8,
            &big[3] * 16,
            &big[4] * 64,
        ];
        let e = Curve::new(scaled).unwrap();
        assert_eq!(e.disc(), &BigInt::from(-11));
    }

    #[test]
    fn conductors_match_labels() {
        let e21 = Curve::from_i64([1, 0, 0, 1, 0]).unwrap();
        assert_eq!(e21.conductor().unwrap(), BigInt::from(21));
        let e272 = Curve::from_i64([0, -1, 0, -4, 0]).unwrap();
        assert_eq!(e272.conductor().unwrap(), BigInt::from(272));
        let e11 = Curve::from_i64([0, -1, 1, 0, 0]).unwrap();
        assert_eq!(e11.conductor().unwrap(), BigInt::from(11));
    }
}
