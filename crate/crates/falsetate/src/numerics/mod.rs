//! Exact and high-precision scalar arithmetic underpinning every other
//! module: arbitrary-precision integers and rationals, p-adic numbers with
//! explicit precision, cyclotomic numbers, and error-bounded reals.
//!
//! All values are immutable after construction and safe to share across
//! threads.

pub mod complex;
pub mod cyclo;
pub mod factor;
pub mod padic;
pub mod real;

pub use complex::HPComplex;
pub use cyclo::CycloNumber;
pub use padic::{hensel_roots, PadicNumber};
pub use real::{AbsErr, HPReal};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

/// Numerical embedding of a cyclotomic number at B bits.
pub fn cyclo_embed(x: &CycloNumber, bits: u32) -> HPComplex {
    x.embed(bits)
}

/// Parse a decimal string like "-3.60892324311" into an exact rational.
pub fn rat_from_decimal(s: &str) -> crate::Result<BigRational> {
    let s = s.trim();
    let (sign, body) = match s.strip_prefix('-') {
        Some(b) => (-1, b),
        None => (1, s),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((a, b)) => (a, b),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(crate::Error::Parse(format!("bad decimal: {s}")));
    }
    let digits: String = format!("{int_part}{frac_part}");
    let num: BigInt = digits
        .parse()
        .map_err(|_| crate::Error::Parse(format!("bad decimal: {s}")))?;
    let den = BigInt::from(10u32).pow(frac_part.len() as u32);
    Ok(BigRational::new(num * sign, den))
}

/// Integer square root floor for nonnegative BigInt.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative_helper());
    n.sqrt()
}

trait NegHelper {
    fn is_negative_helper(&self) -> bool;
}
impl NegHelper for BigInt {
    fn is_negative_helper(&self) -> bool {
        use num_traits::Signed;
        self.is_negative()
    }
}

/// Valuation ord_p(n) of a nonzero integer.
pub fn bigint_valuation(n: &BigInt, p: u64) -> u32 {
    assert!(!n.is_zero());
    let mut n = n.clone();
    let pb = BigInt::from(p);
    let mut v = 0;
    while (&n % &pb).is_zero() {
        n /= &pb;
        v += 1;
    }
    v
}

/// Valuation and valuation of a rational: ord_p(num) - ord_p(den).
pub fn rat_valuation(r: &BigRational, p: u64) -> i64 {
    assert!(!r.is_zero());
    bigint_valuation(r.numer(), p) as i64 - bigint_valuation(r.denom(), p) as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_parse() {
        let r = rat_from_decimal("0.451115405388").unwrap();
        assert_eq!(r, BigRational::new(451115405388i64.into(), 1000000000000i64.into()));
        let neg = rat_from_decimal("-2.5").unwrap();
        assert_eq!(neg, BigRational::new((-5).into(), 2.into()));
    }

    #[test]
    fn valuations() {
        assert_eq!(bigint_valuation(&BigInt::from(250), 5), 3);
        assert_eq!(rat_valuation(&BigRational::new(4.into(), 50.into()), 5), -2);
    }
}
