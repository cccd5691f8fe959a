//! Exact arithmetic in cyclotomic fields Q(zeta_n).
//!
//! Values are dense coefficient vectors of length phi(n) in the power basis
//! 1, zeta, ..., zeta^(phi(n)-1), reduced by the n-th cyclotomic polynomial.
//! The complex embedding always takes zeta = e^(2 pi i / n).

use crate::numerics::complex::HPComplex;
use crate::numerics::real::HPReal;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// Shared per-conductor data: the cyclotomic polynomial and a full table
/// reducing zeta^k for 0 <= k < 2n into the power basis.
struct CycloCtx {
    phi: usize,
    /// reduction of zeta^k as integer coordinate vectors, k < 2n
    pow_table: Vec<Vec<BigInt>>,
}

static CTX_CACHE: Mutex<Option<HashMap<u32, Arc<CycloCtx>>>> = Mutex::new(None);

fn euler_phi(n: u32) -> u32 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Coefficients of the n-th cyclotomic polynomial (ascending, monic).
pub fn cyclotomic_poly(n: u32) -> Vec<BigInt> {
    // (x^n - 1) / prod_{d|n, d<n} Phi_d, by repeated exact division
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let phid = cyclotomic_poly(d);
            num = poly_div_exact(&num, &phid);
        }
    }
    num
}

fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    assert!(den[dd].is_one());
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); dn - dd + 1];
    for i in (0..=dn - dd).rev() {
        let c = rem[i + dd].clone();
        quot[i] = c.clone();
        if c.is_zero() {
            continue;
        }
        for j in 0..=dd {
            rem[i + j] -= &c * &den[j];
        }
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quot
}

fn ctx(n: u32) -> Arc<CycloCtx> {
    {
        let guard = CTX_CACHE.lock().unwrap();
        if let Some(map) = guard.as_ref() {
            if let Some(c) = map.get(&n) {
                return c.clone();
            }
        }
    }
    let phi = euler_phi(n) as usize;
    let phin = cyclotomic_poly(n);
    // pow_table[k] = coordinates of zeta^k, built by the relation
    // zeta^phi = -(c_0 + c_1 zeta + ... + c_{phi-1} zeta^{phi-1})
    let mut table: Vec<Vec<BigInt>> = Vec::with_capacity(2 * n as usize);
    for k in 0..phi {
        let mut row = vec![BigInt::zero(); phi];
        row[k] = BigInt::one();
        table.push(row);
    }
    for k in phi..2 * n as usize {
        // zeta^k = zeta * zeta^(k-1); multiply previous row by zeta
        let prev = table[k - 1].clone();
        let mut row = vec![BigInt::zero(); phi];
        for (j, c) in prev.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if j + 1 < phi {
                row[j + 1] += c;
            } else {
                // zeta^phi = -sum c_i zeta^i
                for i in 0..phi {
                    row[i] -= c * &phin[i];
                }
            }
        }
        table.push(row);
    }
    let c = Arc::new(CycloCtx { phi, pow_table: table });
    let mut guard = CTX_CACHE.lock().unwrap();
    guard.get_or_insert_with(HashMap::new).insert(n, c.clone());
    c
}

/// Element of Q(zeta_n) in reduced power-basis form.
#[derive(Debug, Clone)]
pub struct CycloNumber {
    n: u32,
    coeffs: Vec<BigRational>,
}

impl CycloNumber {
    pub fn zero(n: u32) -> Self {
        let phi = euler_phi(n) as usize;
        CycloNumber { n, coeffs: vec![BigRational::zero(); phi] }
    }

    pub fn one(n: u32) -> Self {
        Self::from_rational(n, &BigRational::one())
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn from_rational(n: u32, r: &BigRational) -> Self {
        let mut z = Self::zero(n);
        z.coeffs[0] = r.clone();
        z
    }

    pub fn from_int(n: u32, v: i64) -> Self {
        Self::from_rational(n, &BigRational::from(BigInt::from(v)))
    }

    /// zeta_n^k.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        let c = ctx(n);
        let k = k.rem_euclid(n as i64) as usize;
        let row = &c.pow_table[k];
        CycloNumber {
            n,
            coeffs: row.iter().map(|x| BigRational::from(x.clone())).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_rational() {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        CycloNumber {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        CycloNumber {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        CycloNumber { n: self.n, coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        CycloNumber { n: self.n, coeffs: self.coeffs.iter().map(|a| a * r).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let c = ctx(self.n);
        let phi = c.phi;
        let mut prod = vec![BigRational::zero(); 2 * phi - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                prod[i + j] += a * b;
            }
        }
        let mut out = vec![BigRational::zero(); phi];
        for (k, v) in prod.into_iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            for (i, r) in c.pow_table[k].iter().enumerate() {
                if !r.is_zero() {
                    out[i] += &v * r;
                }
            }
        }
        CycloNumber { n: self.n, coeffs: out }
    }

    /// Galois action zeta -> zeta^a, for gcd(a, n) = 1.
    pub fn galois(&self, a: u32) -> Self {
        let c = ctx(self.n);
        let a = a % self.n;
        assert!(num_integer::gcd(a, self.n) == 1, "galois exponent not coprime");
        let mut out = vec![BigRational::zero(); c.phi];
        for (i, v) in self.coeffs.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let k = (a as usize * i) % self.n as usize;
            for (j, r) in c.pow_table[k].iter().enumerate() {
                if !r.is_zero() {
                    out[j] += v * r;
                }
            }
        }
        CycloNumber { n: self.n, coeffs: out }
    }

    /// Complex conjugation.
    pub fn conj(&self) -> Self {
        self.galois(self.n - 1)
    }

    /// Trace to Q: sum over all Galois conjugates.
    pub fn trace_to_q(&self) -> BigRational {
        let mut acc = Self::zero(self.n);
        for a in 1..self.n {
            if num_integer::gcd(a, self.n) == 1 {
                acc = acc.add(&self.galois(a));
            }
        }
        debug_assert!(acc.is_rational());
        acc.coeffs[0].clone()
    }

    /// Map into Q(zeta_m) with n | m.
    pub fn embed_into(&self, m: u32) -> Self {
        assert!(m % self.n == 0, "target conductor must be a multiple");
        let step = (m / self.n) as i64;
        let mut out = CycloNumber::zero(m);
        for (i, v) in self.coeffs.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            out = out.add(&CycloNumber::root_of_unity(m, step * i as i64).scale(v));
        }
        out
    }

    /// Multiplicative inverse by exact linear algebra.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Internal("inverse of cyclotomic zero".into()));
        }
        let c = ctx(self.n);
        let phi = c.phi;
        // columns: self * zeta^j in the power basis
        let mut mat = vec![vec![BigRational::zero(); phi + 1]; phi];
        for j in 0..phi {
            let col = self.mul(&CycloNumber::root_of_unity(self.n, j as i64));
            for i in 0..phi {
                mat[i][j] = col.coeffs[i].clone();
            }
        }
        mat[0][phi] = BigRational::one();
        // Gaussian elimination
        for col in 0..phi {
            let piv = (col..phi).find(|&r| !mat[r][col].is_zero());
            let piv = piv.ok_or_else(|| Error::Internal("singular cyclotomic element".into()))?;
            mat.swap(col, piv);
            let inv = mat[col][col].recip();
            for x in mat[col].iter_mut() {
                *x *= &inv;
            }
            for r in 0..phi {
                if r != col && !mat[r][col].is_zero() {
                    let f = mat[r][col].clone();
                    for k in 0..=phi {
                        let t = &mat[col][k] * &f;
                        mat[r][k] -= t;
                    }
                }
            }
        }
        let coeffs = (0..phi).map(|i| mat[i][phi].clone()).collect();
        Ok(CycloNumber { n: self.n, coeffs })
    }

    /// |x|^2 = x * conj(x); rational for elements we ever take it of.
    pub fn abs_square(&self) -> Result<BigRational> {
        let m = self.mul(&self.conj());
        m.as_rational()
            .ok_or_else(|| Error::Internal("abs_square not rational".into()))
    }

    /// Numerical embedding with zeta = e^(2 pi i / n), with error bound.
    pub fn embed(&self, prec: u32) -> HPComplex {
        let two_pi = crate::numerics::real::pi(prec + 32).scale2(1);
        let mut re = HPReal::zero(prec + 32);
        let mut im = HPReal::zero(prec + 32);
        for (i, v) in self.coeffs.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let frac = BigRational::new(BigInt::from(i as u32), BigInt::from(self.n));
            let theta = two_pi.mul(&HPReal::from_ratio(&frac, prec + 32));
            let (s, c) = theta.sin_cos();
            let vv = HPReal::from_ratio(v, prec + 32);
            re = re.add(&vv.mul(&c));
            im = im.add(&vv.mul(&s));
        }
        HPComplex::new(re.with_prec(prec), im.with_prec(prec))
    }
}

impl PartialEq for CycloNumber {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.coeffs == other.coeffs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polys() {
        let p5 = cyclotomic_poly(5);
        assert_eq!(p5, vec![1, 1, 1, 1, 1].into_iter().map(BigInt::from).collect::<Vec<_>>());
        let p12 = cyclotomic_poly(12);
        assert_eq!(
            p12,
            vec![1, 0, -1, 0, 1].into_iter().map(BigInt::from).collect::<Vec<_>>()
        );
    }

    #[test]
    fn vanishing_sum_of_fifth_roots() {
        let mut s = CycloNumber::zero(5);
        for k in 0..5 {
            s = s.add(&CycloNumber::root_of_unity(5, k));
        }
        assert!(s.is_zero());
    }

    #[test]
    fn i_embeds_to_i() {
        let z4 = CycloNumber::root_of_unity(4, 1);
        let v = z4.embed(128);
        assert!(v.re.mag_log2_upper() < -100.0);
        assert!((v.im.to_f64() - 1.0).abs() < 1e-30);
    }

    #[test]
    fn zeta8_plus_inverse_is_sqrt2() {
        let x = CycloNumber::root_of_unity(8, 1).add(&CycloNumber::root_of_unity(8, -1));
        let v = x.embed(192);
        let sqrt2 = HPReal::from_i64(2, 192).sqrt();
        let d = v.re.sub(&sqrt2);
        assert!(d.mag_log2_upper() < -180.0, "{}", d.mag_log2_upper());
        assert!(v.im.mag_log2_upper() < -180.0);
    }

    #[test]
    fn inverse_roundtrip() {
        let x = CycloNumber::root_of_unity(20, 3)
            .add(&CycloNumber::from_int(20, 2))
            .add(&CycloNumber::root_of_unity(20, 7).scale(&BigRational::new(1.into(), 3.into())));
        let y = x.inv().unwrap();
        assert_eq!(x.mul(&y), CycloNumber::one(20));
    }

    #[test]
    fn embedding_is_ring_hom() {
        // random pairs: embed(x*y) = embed(x)*embed(y) within bounds
        let mut seed = 7u64;
        for _ in 0..60 {
            let mut next = || {
                seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((seed >> 33) % 11) as i64 - 5
            };
            let n = 20;
            let phi = 8;
            let mk = |next: &mut dyn FnMut() -> i64| {
                let mut c = CycloNumber::zero(n);
                for i in 0..phi {
                    let v = next();
                    if v != 0 {
                        c = c.add(
                            &CycloNumber::root_of_unity(n, i).scale(&BigRational::from(BigInt::from(v))),
                        );
                    }
                }
                c
            };
            let x = mk(&mut next);
            let y = mk(&mut next);
            let lhs = x.mul(&y).embed(128);
            let rhs = x.embed(128).mul(&y.embed(128));
            let d = lhs.sub(&rhs);
            assert!(d.re.mag_log2_upper() < -96.0);
            assert!(d.im.mag_log2_upper() < -96.0);
        }
    }

    #[test]
    fn trace_of_zeta5() {
        // Tr(zeta_5) = -1
        let t = CycloNumber::root_of_unity(5, 1).trace_to_q();
        assert_eq!(t, BigRational::from(BigInt::from(-1)));
    }

    #[test]
    fn embed_into_larger_conductor() {
        let z5 = CycloNumber::root_of_unity(5, 1);
        let in20 = z5.embed_into(20);
        assert_eq!(in20, CycloNumber::root_of_unity(20, 4));
    }
}
