//! High-precision real scalars carrying an absolute error bound.
//!
//! A value is `mant * 2^exp` with an arbitrary-precision mantissa, together
//! with an upper bound on the absolute error kept in log2 form. Every
//! operation propagates the bound conservatively; transcendental functions
//! add their truncation bounds with a safety factor of 2.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Mutex;

/// Guard bits kept beyond the nominal precision before rounding.
const GUARD: u64 = 32;

/// Absolute error bound, stored as log2(bound). `NEG_INFINITY` means exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbsErr(pub f64);

impl AbsErr {
    pub fn exact() -> Self {
        AbsErr(f64::NEG_INFINITY)
    }
    pub fn from_log2(l: f64) -> Self {
        AbsErr(l)
    }
    pub fn log2(self) -> f64 {
        self.0
    }
    pub fn is_exact(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }
    /// Bound for the sum of two errors: log2(2^a + 2^b), padded slightly.
    pub fn plus(self, other: AbsErr) -> AbsErr {
        AbsErr(log2_add(self.0, other.0))
    }
    /// Error scaled by 2^k.
    pub fn scale2(self, k: i64) -> AbsErr {
        AbsErr(self.0 + k as f64)
    }
    /// Error scaled by a factor given as log2.
    pub fn scale_log2(self, l: f64) -> AbsErr {
        if self.is_exact() {
            self
        } else {
            AbsErr(self.0 + l)
        }
    }
}

pub(crate) fn log2_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    // log2(2^hi + 2^lo) = hi + log2(1 + 2^(lo-hi)); padded by 1e-9 for safety
    hi + (1.0 + (lo - hi).exp2()).log2() + 1e-9
}

/// High-precision real number with a tracked absolute error bound.
#[derive(Debug, Clone)]
pub struct HPReal {
    mant: BigInt,
    exp: i64,
    prec: u32,
    err: AbsErr,
}

impl HPReal {
    pub fn zero(prec: u32) -> Self {
        HPReal { mant: BigInt::zero(), exp: 0, prec, err: AbsErr::exact() }
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        HPReal { mant: BigInt::from(v), exp: 0, prec, err: AbsErr::exact() }
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Self {
        HPReal { mant: v.clone(), exp: 0, prec, err: AbsErr::exact() }.normalized()
    }

    pub fn from_bigint_exp2(mant: BigInt, exp: i64, prec: u32, err: AbsErr) -> Self {
        HPReal { mant, exp, prec, err }.normalized()
    }

    pub fn from_f64(v: f64, prec: u32) -> Self {
        assert!(v.is_finite());
        let r = BigRational::from_float(v).expect("finite f64");
        Self::from_ratio(&r, prec)
    }

    /// Round a rational to `prec` bits; error at most one ulp unless dyadic.
    pub fn from_ratio(r: &BigRational, prec: u32) -> Self {
        if r.is_zero() {
            return Self::zero(prec);
        }
        let num = r.numer();
        let den = r.denom();
        let shift = prec as i64 + GUARD as i64 + den.bits() as i64 - num.bits() as i64 + 2;
        let shift = shift.max(0) as u64;
        let q = (num << shift) / den;
        let exact = (&q * den) == (num << shift);
        let err = if exact { AbsErr::exact() } else { AbsErr::from_log2(-(shift as f64)) };
        HPReal { mant: q, exp: -(shift as i64), prec, err }.normalized()
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn err(&self) -> AbsErr {
        self.err
    }

    pub fn with_err(mut self, err: AbsErr) -> Self {
        self.err = err;
        self
    }

    pub fn with_added_err_log2(mut self, l: f64) -> Self {
        self.err = self.err.plus(AbsErr::from_log2(l));
        self
    }

    pub fn with_prec(mut self, prec: u32) -> Self {
        self.prec = prec;
        self.normalized()
    }

    pub fn is_zero_value(&self) -> bool {
        self.mant.is_zero()
    }

    /// Exact rational represented by (mant, exp), ignoring the error field.
    pub fn value_rational(&self) -> BigRational {
        let num = self.mant.clone();
        if self.exp >= 0 {
            BigRational::from(num << self.exp as u64)
        } else {
            BigRational::new(num, BigInt::from(1) << (-self.exp) as u64)
        }
    }

    /// Upper bound on log2 |value| (value only, not error).
    pub fn mag_log2_upper(&self) -> f64 {
        if self.mant.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.mant.bits() as f64 + self.exp as f64
        }
    }

    /// Lower bound on log2 |value|.
    pub fn mag_log2_lower(&self) -> f64 {
        if self.mant.is_zero() {
            f64::NEG_INFINITY
        } else {
            (self.mant.bits() as f64 - 1.0) + self.exp as f64
        }
    }

    fn normalized(mut self) -> Self {
        let limit = self.prec as u64 + GUARD;
        let bits = self.mant.bits();
        if bits > limit {
            let k = (bits - limit) as i64;
            // truncation toward -inf; error at most one ulp at the new scale
            self.mant = &self.mant >> k as u64;
            self.exp += k;
            self.err = self.err.plus(AbsErr::from_log2(self.exp as f64));
        }
        if self.mant.is_zero() {
            self.exp = 0;
        }
        self
    }

    pub fn neg(&self) -> Self {
        HPReal { mant: -&self.mant, exp: self.exp, prec: self.prec, err: self.err }
    }

    pub fn abs(&self) -> Self {
        HPReal { mant: self.mant.abs(), exp: self.exp, prec: self.prec, err: self.err }
    }

    /// Exact multiplication by 2^k.
    pub fn scale2(&self, k: i64) -> Self {
        HPReal {
            mant: self.mant.clone(),
            exp: self.exp + k,
            prec: self.prec,
            err: self.err.scale2(k),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        let err = self.err.plus(other.err);
        if self.mant.is_zero() {
            return HPReal { prec, err, ..other.clone() }.normalized();
        }
        if other.mant.is_zero() {
            return HPReal { prec, err, ..self.clone() }.normalized();
        }
        // Align to the smaller exponent, but drop bits far below the error
        // floor and the significance window to keep mantissas short.
        let hi = self.top_bit().max(other.top_bit());
        let floor = hi - (prec as i64 + 2 * GUARD as i64);
        let (a, b) = (self, other);
        let target = a.exp.min(b.exp).max(floor.min(a.exp).min(b.exp));
        let shift_from = |x: &HPReal| -> (BigInt, AbsErr) {
            if x.exp >= target {
                ((&x.mant) << (x.exp - target) as u64, AbsErr::exact())
            } else {
                let k = (target - x.exp) as u64;
                ((&x.mant) >> k, AbsErr::from_log2(target as f64))
            }
        };
        let (ma, ea) = shift_from(a);
        let (mb, eb) = shift_from(b);
        HPReal { mant: ma + mb, exp: target, prec, err: err.plus(ea).plus(eb) }.normalized()
    }

    fn top_bit(&self) -> i64 {
        self.mant.bits() as i64 + self.exp
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        let err = self
            .err
            .scale_log2(other.mag_log2_upper().max(other.err.log2()))
            .plus(other.err.scale_log2(self.mag_log2_upper()))
            .plus(AbsErr(self.err.log2() + other.err.log2()));
        HPReal {
            mant: &self.mant * &other.mant,
            exp: self.exp + other.exp,
            prec,
            err,
        }
        .normalized()
    }

    pub fn mul_i64(&self, v: i64) -> Self {
        HPReal {
            mant: &self.mant * v,
            exp: self.exp,
            prec: self.prec,
            err: self.err.scale_log2((v.unsigned_abs().max(1) as f64).log2()),
        }
        .normalized()
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn div(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        assert!(!other.mant.is_zero(), "division by zero value");
        // require the divisor to be significantly larger than its error
        let den_low = other.mag_log2_lower();
        let w = prec as i64 + GUARD as i64;
        let shift = (w + other.mant.bits() as i64 - self.mant.bits() as i64).max(0) as u64;
        let q = (&self.mant << shift) / &other.mant;
        let exp = self.exp - other.exp - shift as i64;
        let round_err = AbsErr::from_log2(exp as f64);
        let quot_mag = self.mag_log2_upper() - den_low;
        let prop = if self.err.is_exact() && other.err.is_exact() {
            AbsErr::exact()
        } else {
            // |dq| <= (|da| + |q||db|) / (|b| - |db|); padded by one bit
            let num = log2_add(self.err.log2(), other.err.log2() + quot_mag);
            AbsErr::from_log2(num - den_low + 1.0)
        };
        HPReal { mant: q, exp, prec, err: prop.plus(round_err) }.normalized()
    }

    pub fn recip(&self) -> Self {
        HPReal::from_i64(1, self.prec).div(self)
    }

    /// Square root; the argument must not be significantly negative.
    pub fn sqrt(&self) -> Self {
        let prec = self.prec;
        if self.mant.is_negative() {
            // tolerate tiny negatives within the error bound
            assert!(
                self.mag_log2_upper() <= self.err.log2() + 1.0,
                "sqrt of negative value"
            );
            return HPReal::zero(prec)
                .with_err(AbsErr::from_log2(self.err.log2() / 2.0 + 1.0));
        }
        if self.mant.is_zero() {
            return HPReal::zero(prec).with_err(AbsErr::from_log2(self.err.log2() / 2.0 + 1.0));
        }
        let w = 2 * (prec as i64 + GUARD as i64);
        let mut shift = w - self.mant.bits() as i64;
        // keep exponent parity so that exp/2 is integral
        if (self.exp - shift) % 2 != 0 {
            shift += 1;
        }
        let m = if shift >= 0 { &self.mant << shift as u64 } else { &self.mant >> (-shift) as u64 };
        let root = m.sqrt();
        let exp = (self.exp - shift) / 2;
        let round = AbsErr::from_log2(exp as f64);
        let prop = if self.err.is_exact() {
            AbsErr::exact()
        } else {
            // |d sqrt| <= |dx| / (2 sqrt(x_low)) when x_low > 0, else sqrt(|dx|)
            let half_mag = self.mag_log2_lower() / 2.0;
            if self.err.log2() < self.mag_log2_lower() - 2.0 {
                AbsErr::from_log2(self.err.log2() - half_mag - 1.0 + 1.0)
            } else {
                AbsErr::from_log2(self.err.log2() / 2.0 + 1.0)
            }
        };
        HPReal { mant: root, exp, prec, err: prop.plus(round) }.normalized()
    }

    pub fn pow_i64(&self, k: i64) -> Self {
        if k == 0 {
            return HPReal::from_i64(1, self.prec);
        }
        let mut base = if k > 0 { self.clone() } else { self.recip() };
        let mut e = k.unsigned_abs();
        let mut acc: Option<HPReal> = None;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc.unwrap()
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.mant.bits() as i64;
        if bits == 0 {
            return 0.0;
        }
        let keep = 64.min(bits);
        let top = (&self.mant >> (bits - keep) as u64).to_i128().unwrap() as f64;
        top * ((self.exp + bits - keep) as f64).exp2()
    }

    /// Compare the represented values, ignoring error bounds.
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        let d = self.sub(other);
        if d.mant.is_zero() {
            Ordering::Equal
        } else if d.mant.is_negative() {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    pub fn is_positive_value(&self) -> bool {
        self.mant.is_positive()
    }

    /// True when the value is certainly positive given its error bound.
    pub fn definitely_positive(&self) -> bool {
        self.mant.is_positive() && self.mag_log2_lower() > self.err.log2()
    }

    /// Nearest integer together with the distance to it (value only).
    pub fn round_to_bigint(&self) -> (BigInt, HPReal) {
        let r = self.value_rational();
        let n = round_rational(&r);
        let dist = self.sub(&HPReal::from_bigint(&n, self.prec));
        (n, dist)
    }

    // ----- transcendental functions -----

    /// exp(x). The error bound includes the propagated input error.
    pub fn exp(&self) -> Self {
        let prec = self.prec;
        let wp = prec + 64;
        let x = HPReal { err: AbsErr::exact(), ..self.clone() }.with_prec(wp);
        // range reduce: x = k ln2 + r, |r| <= 0.7
        let l2 = ln2(wp);
        let k_real = x.div(&l2);
        let (k, _) = k_real.round_to_bigint();
        let k_i64 = k.to_i64().expect("exp argument out of range");
        let r = x.sub(&l2.mul(&HPReal::from_bigint(&k, wp)));
        // halve j times
        let j = (prec as f64).sqrt() as i64 + 2;
        let rs = r.scale2(-j);
        // Taylor
        let mut term = HPReal::from_i64(1, wp);
        let mut sum = HPReal::from_i64(1, wp);
        let mut m = 1i64;
        loop {
            term = term.mul(&rs);
            term = term.div(&HPReal::from_i64(m, wp));
            sum = sum.add(&term);
            if term.mag_log2_upper() < -(wp as f64) {
                break;
            }
            m += 1;
            assert!(m < 10_000, "exp series failed to converge");
        }
        // truncation bound: first omitted term magnitude, doubled
        sum = sum.with_added_err_log2(term.mag_log2_upper() + 1.0);
        let mut y = sum;
        for _ in 0..j {
            y = y.square();
        }
        let mut out = y.scale2(k_i64).with_prec(prec);
        if !self.err.is_exact() {
            // |d exp| <= exp(x) * (e^da - 1) <= 2 * exp(x) * da for da <= 1/2
            let extra = self.err.log2() + out.mag_log2_upper() + 1.0;
            out = out.with_added_err_log2(extra);
        }
        out
    }

    /// Natural logarithm; the argument must be certainly positive.
    pub fn ln(&self) -> Self {
        let prec = self.prec;
        assert!(self.mant.is_positive(), "ln of non-positive value");
        let wp = prec + 64;
        let x = HPReal { err: AbsErr::exact(), ..self.clone() }.with_prec(wp);
        // write x = 2^e * y with y in [0.75, 1.5)
        let mut e = x.top_bit();
        let mut y = x.scale2(-e);
        // y in [0.5, 1): lift into [0.75, 1.5)
        let three_quarters = HPReal::from_ratio(&BigRational::new(3.into(), 4.into()), wp);
        if y.cmp_value(&three_quarters) == Ordering::Less {
            y = y.scale2(1);
            e -= 1;
        }
        // ln y = 2 atanh(z), z = (y-1)/(y+1), |z| <= 0.2
        let one = HPReal::from_i64(1, wp);
        let z = y.sub(&one).div(&y.add(&one));
        let z2 = z.square();
        let mut term = z.clone();
        let mut sum = z.clone();
        let mut m = 1i64;
        loop {
            term = term.mul(&z2);
            let t = term.div(&HPReal::from_i64(2 * m + 1, wp));
            sum = sum.add(&t);
            if t.mag_log2_upper() < -(wp as f64) {
                break;
            }
            m += 1;
            assert!(m < 100_000, "ln series failed to converge");
        }
        sum = sum.with_added_err_log2(term.mag_log2_upper() + 2.0);
        let lnx = sum.scale2(1).add(&ln2(wp).mul(&HPReal::from_i64(e, wp)));
        let mut out = lnx.with_prec(prec);
        if !self.err.is_exact() {
            // |d ln| <= da / x_low * 2
            let extra = self.err.log2() - self.mag_log2_lower() + 1.0;
            out = out.with_added_err_log2(extra);
        }
        out
    }

    /// (sin x, cos x). Argument is reduced modulo pi/2 internally.
    pub fn sin_cos(&self) -> (Self, Self) {
        let prec = self.prec;
        let wp = prec + 64;
        let x = HPReal { err: AbsErr::exact(), ..self.clone() }.with_prec(wp);
        let half_pi = pi(wp).scale2(-1);
        let (q, _) = x.div(&half_pi).round_to_bigint();
        let q_i = ((q.clone() % BigInt::from(4) + BigInt::from(4)) % BigInt::from(4))
            .to_i64()
            .unwrap();
        let r = x.sub(&half_pi.mul(&HPReal::from_bigint(&q, wp)));
        let (s, c) = sin_cos_reduced(&r, wp);
        let (mut s, mut c) = match q_i {
            0 => (s, c),
            1 => (c, s.neg()),
            2 => (s.neg(), c.neg()),
            _ => (c.neg(), s),
        };
        if !self.err.is_exact() {
            s = s.with_added_err_log2(self.err.log2() + 0.1);
            c = c.with_added_err_log2(self.err.log2() + 0.1);
        }
        (s.with_prec(prec), c.with_prec(prec))
    }
}

/// Taylor sine/cosine for |r| <= 1.
fn sin_cos_reduced(r: &HPReal, wp: u32) -> (HPReal, HPReal) {
    let r2 = r.square();
    let mut term = r.clone();
    let mut sin = r.clone();
    let mut m = 1i64;
    loop {
        term = term.mul(&r2).div(&HPReal::from_i64((2 * m) * (2 * m + 1), wp)).neg();
        sin = sin.add(&term);
        if term.mag_log2_upper() < -(wp as f64) {
            break;
        }
        m += 1;
        assert!(m < 10_000);
    }
    sin = sin.with_added_err_log2(term.mag_log2_upper() + 1.0);
    let mut term = HPReal::from_i64(1, wp);
    let mut cos = HPReal::from_i64(1, wp);
    let mut m = 1i64;
    loop {
        term = term.mul(&r2).div(&HPReal::from_i64((2 * m - 1) * (2 * m), wp)).neg();
        cos = cos.add(&term);
        if term.mag_log2_upper() < -(wp as f64) {
            break;
        }
        m += 1;
        assert!(m < 10_000);
    }
    cos = cos.with_added_err_log2(term.mag_log2_upper() + 1.0);
    (sin, cos)
}

pub(crate) fn round_rational(r: &BigRational) -> BigInt {
    use num_traits::Euclid;
    let two = BigInt::from(2);
    let num = r.numer() * &two + r.denom();
    let den = r.denom() * &two;
    num.div_euclid(&den)
}

// ----- cached constants -----

#[derive(PartialEq, Eq, Hash, Clone, Copy)]
enum ConstKey {
    Pi,
    Ln2,
    Gamma,
    Zeta(u32),
}

static CONSTS: Mutex<Option<HashMap<(ConstKey, u32), HPReal>>> = Mutex::new(None);

fn cached(key: ConstKey, prec: u32, f: impl FnOnce(u32) -> HPReal) -> HPReal {
    let bucket = prec.div_ceil(64) * 64;
    {
        let guard = CONSTS.lock().unwrap();
        if let Some(map) = guard.as_ref() {
            if let Some(v) = map.get(&(key, bucket)) {
                return v.clone().with_prec(prec);
            }
        }
    }
    let v = f(bucket);
    let mut guard = CONSTS.lock().unwrap();
    guard
        .get_or_insert_with(HashMap::new)
        .insert((key, bucket), v.clone());
    v.with_prec(prec)
}

/// Fixed-point arctan(1/x) at scale 2^w; returns (scaled value, ulp error count).
fn atan_inv_fp(x: u64, w: u64) -> (BigInt, u64) {
    let x2 = BigInt::from(x) * BigInt::from(x);
    let mut p = (BigInt::from(1) << w) / BigInt::from(x);
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    let mut ulps = 2u64;
    loop {
        let term = &p / BigInt::from(2 * k + 1);
        if term.is_zero() {
            break;
        }
        if k % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        p /= &x2;
        k += 1;
        ulps += 2;
    }
    (sum, ulps)
}

/// Fixed-point atanh(1/x) at scale 2^w.
fn atanh_inv_fp(x: u64, w: u64) -> (BigInt, u64) {
    let x2 = BigInt::from(x) * BigInt::from(x);
    let mut p = (BigInt::from(1) << w) / BigInt::from(x);
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    let mut ulps = 2u64;
    loop {
        let term = &p / BigInt::from(2 * k + 1);
        if term.is_zero() {
            break;
        }
        sum += &term;
        p /= &x2;
        k += 1;
        ulps += 2;
    }
    (sum, ulps)
}

/// pi via Machin's formula.
pub fn pi(prec: u32) -> HPReal {
    cached(ConstKey::Pi, prec, |p| {
        let w = p as u64 + 2 * GUARD;
        let (a, ua) = atan_inv_fp(5, w);
        let (b, ub) = atan_inv_fp(239, w);
        let v = a * 16 - b * 4;
        let ulps = 16 * ua + 4 * ub;
        HPReal::from_bigint_exp2(
            v,
            -(w as i64),
            p,
            AbsErr::from_log2((ulps as f64).log2() - w as f64),
        )
    })
}

/// ln 2 = 2 atanh(1/3).
pub fn ln2(prec: u32) -> HPReal {
    cached(ConstKey::Ln2, prec, |p| {
        let w = p as u64 + 2 * GUARD;
        let (a, ua) = atanh_inv_fp(3, w);
        HPReal::from_bigint_exp2(
            a * 2,
            -(w as i64),
            p,
            AbsErr::from_log2((2 * ua) as f64 + 1.0 - w as f64),
        )
    })
}

/// Euler-Mascheroni constant via the Brent-McMillan Bessel formula:
/// gamma = S0(2n)/I0(2n) - ln n + O(e^{-4n}).
pub fn euler_gamma(prec: u32) -> HPReal {
    cached(ConstKey::Gamma, prec, |p| {
        let n = ((p as f64 + 48.0) * std::f64::consts::LN_2 / 4.0).ceil() as i64 + 2;
        let wp = p + (4.0 * n as f64 * std::f64::consts::LOG2_E) as u32 + 96;
        let nn = HPReal::from_i64(n * n, wp);
        let mut term = HPReal::from_i64(1, wp);
        let mut i0 = HPReal::from_i64(1, wp);
        let mut s0 = HPReal::zero(wp);
        let mut h = HPReal::zero(wp);
        let mut k = 1i64;
        loop {
            term = term.mul(&nn).div(&HPReal::from_i64(k * k, wp));
            h = h.add(&HPReal::from_i64(k, wp).recip());
            i0 = i0.add(&term);
            s0 = s0.add(&term.mul(&h));
            if term.mag_log2_upper() < i0.mag_log2_upper() - (wp as f64) {
                break;
            }
            k += 1;
            assert!(k < 100 * n, "gamma series failed to converge");
        }
        let g = s0.div(&i0).sub(&HPReal::from_i64(n, wp).ln());
        // method error ~ pi e^{-4n}: add 2^{-5.77 n + 2}
        g.with_added_err_log2(-5.77 * n as f64 + 2.0).with_prec(p)
    })
}

/// Bernoulli numbers B_0, B_1, ... as exact rationals (B_1 = -1/2).
pub fn bernoulli(upto: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(upto + 1);
    for m in 0..=upto {
        // B_m = -1/(m+1) * sum_{k<m} C(m+1,k) B_k
        let mut acc = BigRational::zero();
        let mut binom = BigInt::from(1);
        for (k, bk) in b.iter().enumerate().take(m) {
            // binom = C(m+1, k)
            acc += bk * BigRational::from(binom.clone());
            binom = &binom * BigInt::from((m + 1 - k) as i64) / BigInt::from((k + 1) as i64);
        }
        if m == 0 {
            b.push(BigRational::from(BigInt::from(1)));
        } else {
            b.push(-acc / BigRational::from(BigInt::from((m + 1) as i64)));
        }
    }
    b
}

/// zeta(s) for integer s >= 2 by Euler-Maclaurin at N = 256.
pub fn zeta_int(s: u32, prec: u32) -> HPReal {
    assert!(s >= 2);
    cached(ConstKey::Zeta(s), prec, |p| {
        let wp = p + 96;
        let n = 256i64;
        let mut sum = HPReal::zero(wp);
        for k in 1..n {
            sum = sum.add(&HPReal::from_i64(k, wp).pow_i64(-(s as i64)));
        }
        let nf = HPReal::from_i64(n, wp);
        // N^{1-s}/(s-1) + N^{-s}/2
        sum = sum.add(&nf.pow_i64(1 - s as i64).div(&HPReal::from_i64(s as i64 - 1, wp)));
        sum = sum.add(&nf.pow_i64(-(s as i64)).scale2(-1));
        // Bernoulli tail: sum_j B_{2j}/(2j)! * (s)_{2j-1} * N^{-s-2j+1}
        let bern = bernoulli(200);
        let mut fact = BigRational::from(BigInt::from(1));
        let mut poch = BigRational::from(BigInt::from(1));
        let mut last_log = f64::NEG_INFINITY;
        for j in 1..=96usize {
            // fact = (2j)!, poch = s(s+1)...(s+2j-2)
            fact *= BigRational::from(BigInt::from((2 * j - 1) as i64) * BigInt::from(2 * j as i64));
            if j == 1 {
                poch = BigRational::from(BigInt::from(s as i64));
            } else {
                poch *= BigRational::from(
                    BigInt::from((s as i64 + 2 * j as i64 - 3) * (s as i64 + 2 * j as i64 - 2)),
                );
            }
            let coef = &bern[2 * j] / &fact * &poch;
            let t = HPReal::from_ratio(&coef, wp)
                .mul(&nf.pow_i64(-(s as i64) - 2 * j as i64 + 1));
            sum = sum.add(&t);
            last_log = t.mag_log2_upper();
            if last_log < -(wp as f64) {
                break;
            }
        }
        sum.with_added_err_log2(last_log + 2.0).with_prec(p)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_arithmetic_and_errors() {
        let p = 128;
        let a = HPReal::from_ratio(&BigRational::new(1.into(), 3.into()), p);
        let b = HPReal::from_ratio(&BigRational::new(1.into(), 7.into()), p);
        let s = a.add(&b);
        let expected = BigRational::new(10.into(), 21.into());
        let d = s.sub(&HPReal::from_ratio(&expected, p));
        assert!(d.mag_log2_upper() < -120.0);
        assert!(s.err.log2() < -120.0);
        let q = a.div(&b);
        let dq = q.sub(&HPReal::from_ratio(&BigRational::new(7.into(), 3.into()), p));
        assert!(dq.mag_log2_upper() < -120.0);
    }

    #[test]
    fn sqrt_squares_back() {
        let p = 192;
        let x = HPReal::from_i64(2, p);
        let r = x.sqrt();
        let back = r.square().sub(&x);
        assert!(back.mag_log2_upper() < -180.0);
    }

    #[test]
    fn pi_matches_f64() {
        let v = pi(128);
        assert!((v.to_f64() - std::f64::consts::PI).abs() < 1e-14);
        assert!(v.err.log2() < -140.0);
    }

    #[test]
    fn exp_ln_roundtrip() {
        let p = 160;
        let x = HPReal::from_ratio(&BigRational::new(17.into(), 5.into()), p);
        let y = x.exp().ln();
        let d = y.sub(&x);
        assert!(d.mag_log2_upper() < -140.0, "mag {}", d.mag_log2_upper());
        // exp(1) against known digits
        let e = HPReal::from_i64(1, p).exp();
        assert!((e.to_f64() - std::f64::consts::E).abs() < 1e-14);
    }

    #[test]
    fn gamma_and_zeta_known_digits() {
        let g = euler_gamma(128);
        assert!((g.to_f64() - 0.5772156649015328606).abs() < 1e-15);
        let z3 = zeta_int(3, 128);
        assert!((z3.to_f64() - 1.2020569031595942854).abs() < 1e-14);
        let z2 = zeta_int(2, 128);
        let pi2_6 = pi(128).square().div(&HPReal::from_i64(6, 128));
        assert!(z2.sub(&pi2_6).mag_log2_upper() < -120.0);
    }

    #[test]
    fn sin_cos_identity() {
        let p = 128;
        let x = HPReal::from_ratio(&BigRational::new(7.into(), 3.into()), p);
        let (s, c) = x.sin_cos();
        let one = s.square().add(&c.square());
        let d = one.sub(&HPReal::from_i64(1, p));
        assert!(d.mag_log2_upper() < -115.0);
        assert!((s.to_f64() - (7.0f64 / 3.0).sin()).abs() < 1e-14);
    }
}
