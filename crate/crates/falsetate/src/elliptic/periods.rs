//! Real and imaginary periods of the Neron differential by
//! arithmetic-geometric-mean iteration on the real period lattice.
//!
//! Conventions: Omega_+ > 0 is the least positive real period; Omega_- lies
//! in iR with positive imaginary part, normalized so that the lattice is
//! <Omega_+, (Omega_+ + i Omega_-im)/2> for disc < 0 and
//! <Omega_+, 2 i Omega_-im> for disc > 0 (pinned against known curves).

use super::curve::Curve;
use crate::numerics::real::{pi, HPReal};
use crate::Result;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Periods of E: Omega_+ and the imaginary part of Omega_-.
#[derive(Debug, Clone)]
pub struct Periods {
    pub omega_plus: HPReal,
    pub omega_minus_im: HPReal,
}

fn agm(a0: &HPReal, b0: &HPReal, prec: u32) -> HPReal {
    let mut a = a0.clone();
    let mut b = b0.clone();
    for _ in 0..prec as usize + 16 {
        let an = a.add(&b).scale2(-1);
        let bn = a.mul(&b).sqrt();
        let diff = an.sub(&bn);
        a = an;
        b = bn;
        if diff.mag_log2_upper() < a.mag_log2_upper() - prec as f64 - 8.0 {
            break;
        }
    }
    // final error: |a - b| dominates
    let gap = a.sub(&b).mag_log2_upper();
    a.with_added_err_log2(gap + 1.0)
}

/// Real roots of 4x^3 + b2 x^2 + 2 b4 x + b6, descending, by exact-sign
/// bisection followed by refinement.
fn real_roots(e: &Curve, prec: u32) -> Vec<HPReal> {
    let b = e.b_invariants();
    let eval = |x: &BigRational| -> BigRational {
        let x2 = x * x;
        let x3 = &x2 * x;
        BigRational::from(BigInt::from(4)) * x3
            + BigRational::from(b.b2.clone()) * x2
            + BigRational::from(2 * b.b4.clone()) * x
            + BigRational::from(b.b6.clone())
    };
    // root bound: 1 + max |coeff|/4
    let bound: BigInt = BigInt::from(2)
        + (b.b2.abs().max(BigInt::from(2 * b.b4.clone()).abs()).max(b.b6.abs()) / BigInt::from(4))
            .max(BigInt::from(1));
    let mut roots = Vec::new();
    // scan integer intervals for sign changes, then bisect
    let lo = -bound.clone();
    let hi = bound.clone();
    let n_steps = 4096u32;
    let width = BigRational::new(&hi - &lo, BigInt::from(n_steps));
    let mut prev_x = BigRational::from(lo.clone());
    let mut prev_s = eval(&prev_x);
    for i in 1..=n_steps {
        let x = BigRational::from(lo.clone()) + BigRational::from(BigInt::from(i)) * width.clone();
        let s = eval(&x);
        if s.is_zero() {
            roots.push(x.clone());
        } else if prev_s.is_negative() != s.is_negative() && !prev_s.is_zero() {
            // bisect to prec bits
            let mut a = prev_x.clone();
            let mut bb = x.clone();
            let mut fa = prev_s.clone();
            for _ in 0..prec + 16 {
                let mid = (&a + &bb) / BigRational::from(BigInt::from(2));
                let fm = eval(&mid);
                if fm.is_zero() {
                    a = mid.clone();
                    bb = mid;
                    break;
                }
                if fa.is_negative() == fm.is_negative() {
                    a = mid;
                    fa = fm;
                } else {
                    bb = mid;
                }
            }
            roots.push((&a + &bb) / BigRational::from(BigInt::from(2)));
        }
        prev_x = x;
        prev_s = s;
    }
    let mut out: Vec<HPReal> = roots
        .into_iter()
        .map(|r| HPReal::from_ratio(&r, prec).with_added_err_log2(-(prec as f64) - 8.0))
        .collect();
    out.sort_by(|a, b| b.cmp_value(a));
    out
}

/// Omega_+ and Omega_-/i at absolute error below 2^(-bits+margin).
pub fn periods(e: &Curve, bits: u32) -> Result<Periods> {
    let prec = bits + 64;
    let roots = real_roots(e, prec);
    let two_pi = pi(prec).scale2(1);
    let pi_v = pi(prec);
    let (omega_plus, omega_minus_im) = if e.disc().is_positive() {
        // three real roots e1 > e2 > e3:
        // Omega_+ = 2 pi / M(sqrt(e1-e3), sqrt(e1-e2))
        // Omega_-im = pi / (2 M(sqrt(e1-e3), sqrt(e2-e3)))
        assert_eq!(roots.len(), 3, "disc > 0 needs three real roots");
        let (e1, e2, e3) = (&roots[0], &roots[1], &roots[2]);
        let m1 = agm(&e1.sub(e3).sqrt(), &e1.sub(e2).sqrt(), prec);
        let m2 = agm(&e1.sub(e3).sqrt(), &e2.sub(e3).sqrt(), prec);
        (two_pi.div(&m1), pi_v.div(&m2).scale2(-1))
    } else {
        // one real root e1; complex pair beta +- i gamma:
        // A = sqrt((e1-beta)^2 + gamma^2), B = e1 - beta
        // Omega_+ = 2 pi / M(2 sqrt(A), sqrt(2A + 2B))
        // Omega_-im = pi / M(2 sqrt(A), sqrt(2A - 2B))
        assert_eq!(roots.len(), 1, "disc < 0 needs one real root");
        let e1 = &roots[0];
        let b = e.b_invariants();
        // 4x^3+b2x^2+2b4x+b6 = 4(x-e1)(x^2+px+q): p = e1 + b2/4, q from b6
        let b2 = HPReal::from_bigint(&b.b2, prec);
        let b4 = HPReal::from_bigint(&b.b4, prec);
        let p = e1.add(&b2.scale2(-2));
        // A^2 = e1^2 + p e1 + q with q = (2 b4/4 + p*?); use q = b6/(4 e1)..
        // safer: q = (f/4)/(x - e1) remainder: q = e1^2 + (b2/4) e1 + b4/2
        let q = e1.square().add(&b2.scale2(-2).mul(e1)).add(&b4.scale2(-1));
        let a2 = e1.square().add(&p.mul(e1)).add(&q);
        let a_val = a2.sqrt();
        let b_val = e1.add(&p.scale2(-1));
        let sa = a_val.sqrt();
        let m1 = agm(&sa.scale2(1), &a_val.add(&b_val).scale2(1).sqrt(), prec);
        let m2 = agm(&sa.scale2(1), &a_val.sub(&b_val).scale2(1).sqrt(), prec);
        (two_pi.div(&m1), pi_v.div(&m2))
    };
    Ok(Periods {
        omega_plus: omega_plus.with_prec(bits),
        omega_minus_im: omega_minus_im.with_prec(bits),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat_from_decimal;

    fn close_to(v: &HPReal, dec: &str, tol_log2: f64) {
        let r = rat_from_decimal(dec).unwrap();
        let d = v.sub(&HPReal::from_ratio(&r, v.prec()));
        assert!(
            d.mag_log2_upper() < tol_log2,
            "value {} vs {} differs: 2^{}",
            v.to_f64(),
            dec,
            d.mag_log2_upper()
        );
    }

    #[test]
    fn golden_21a4_periods() {
        let e = Curve::from_i64([1, 0, 0, 1, 0]).unwrap();
        let p = periods(&e, 128).unwrap();
        // paper: Omega_+ ~ 3.60892324311, Omega_- ~ 1.91098978075 i
        close_to(&p.omega_plus, "3.60892324311", -32.0);
        close_to(&p.omega_minus_im, "1.91098978075", -32.0);
        assert!(p.omega_plus.err().log2() < -120.0);
    }

    #[test]
    fn golden_272c1_periods() {
        let e = Curve::from_i64([0, -1, 0, -4, 0]).unwrap();
        let p = periods(&e, 128).unwrap();
        close_to(&p.omega_plus, "3.47306346", -24.0);
        // paper: 2 Omega+ Omega- ~ 6.75008201 i
        let prod = p.omega_plus.mul(&p.omega_minus_im).scale2(1);
        close_to(&prod, "6.75008201", -24.0);
    }

    #[test]
    fn precision_doubling_consistent() {
        let e = Curve::from_i64([0, -1, 1, 0, 0]).unwrap();
        let p1 = periods(&e, 96).unwrap();
        let p2 = periods(&e, 192).unwrap();
        let d = p1.omega_plus.sub(&p2.omega_plus);
        assert!(d.mag_log2_upper() <= p1.omega_plus.err().log2().max(-96.0) + 2.0);
    }
}
