//! Local data of E over the tower fields K, L, F via reduction-transfer
//! rules, and the minimal-model correction ideal at additive primes.

pub use crate::fieldtower::TowerField;

use super::count::ap;
use super::curve::Curve;
use super::tate::tate_local;
use super::{KodairaSymbol, LocalData, PrimeOfField, ReductionKind};
use crate::fieldtower::{primes_over, Tower};
use crate::numerics::bigint_valuation;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// Local data of E at every prime of the given field above q.
///
/// Transfer rules: good stays good (a_v from the Frobenius power trace);
/// split multiplicative stays split; non-split flips to split exactly when
/// the residue degree is even; Tamagawa numbers follow ord_v(Delta) in the
/// split case and the parity rule in the non-split case. Additive reduction
/// at unramified primes keeps its kind and Kodaira symbol; the Tamagawa
/// number is carried from Q with `tamagawa_certified = false` since the
/// component group may split after base change.
pub fn local_data_over(
    e: &Curve,
    field: TowerField,
    q: u64,
    tower: &Tower,
) -> Result<Vec<LocalData>> {
    let base = tate_local(e, q)?;
    if base.kind == ReductionKind::Additive && tower.m % q == 0 {
        return Err(Error::Unsupported(format!(
            "additive ramified prime {q} divides m"
        )));
    }
    let primes = primes_over(q, field, tower)?;
    let mut out = Vec::new();
    for pr in primes {
        out.push(transfer_one(e, &base, pr)?);
    }
    Ok(out)
}

fn transfer_one(e: &Curve, base: &LocalData, pr: PrimeOfField) -> Result<LocalData> {
    let q = pr.under;
    let f = pr.residue_degree;
    let e_ram = pr.ramification;
    match base.kind {
        ReductionKind::Good => Ok(LocalData {
            prime: pr,
            kind: ReductionKind::Good,
            kodaira: KodairaSymbol::I(0),
            tamagawa: 1,
            split: None,
            conductor_exponent: 0,
            v_disc: 0,
            tamagawa_certified: true,
        }),
        ReductionKind::SplitMult | ReductionKind::NonsplitMult => {
            let was_split = base.kind == ReductionKind::SplitMult;
            // non-split flips to split iff the residue degree is even
            let split = was_split || f % 2 == 0;
            let v_disc = base.v_disc * e_ram;
            let tamagawa = if split {
                v_disc as u64
            } else if v_disc % 2 == 0 {
                2
            } else {
                1
            };
            let _ = q;
            let _ = e;
            Ok(LocalData {
                prime: pr,
                kind: if split { ReductionKind::SplitMult } else { ReductionKind::NonsplitMult },
                kodaira: KodairaSymbol::I(v_disc),
                tamagawa,
                split: Some(split),
                conductor_exponent: 1,
                v_disc,
                tamagawa_certified: true,
            })
        }
        ReductionKind::Additive => {
            // unramified base change (q does not divide m by the caller's
            // check, and q != p since E is good ordinary at p): the kind and
            // Kodaira symbol persist; the component group may gain rational
            // components, so the Q-level Tamagawa number is flagged.
            Ok(LocalData {
                prime: pr,
                kind: ReductionKind::Additive,
                kodaira: base.kodaira,
                tamagawa: base.tamagawa,
                split: None,
                conductor_exponent: base.conductor_exponent,
                v_disc: base.v_disc * e_ram,
                tamagawa_certified: false,
            })
        }
    }
}

/// All bad-prime local data of E over a tower field, including the a_v
/// traces where reduction becomes good (never happens for semistable E at
/// unramified primes, so the base data suffices here).
pub fn all_bad_local_data(
    e: &Curve,
    field: TowerField,
    tower: &Tower,
) -> Result<Vec<LocalData>> {
    let mut out = Vec::new();
    for q in e.bad_primes()? {
        out.extend(local_data_over(e, field, q, tower)?);
    }
    Ok(out)
}

/// Tamagawa product over all bad primes of the field, counting multiplicity.
pub fn tamagawa_product(e: &Curve, field: Option<TowerField>, tower: &Tower) -> Result<BigInt> {
    let mut prod = BigInt::from(1);
    match field {
        None => {
            for q in e.bad_primes()? {
                prod *= BigInt::from(tate_local(e, q)?.tamagawa);
            }
        }
        Some(f) => {
            for ld in all_bad_local_data(e, f, tower)? {
                prod *= BigInt::from(ld.tamagawa).pow(ld.prime.count);
            }
        }
    }
    Ok(prod)
}

// ---------- minimal-model correction ideal ----------

/// Valuations of the correction ideal A_{E/k} at the primes where it is
/// nontrivial, together with its norm.
#[derive(Debug, Clone)]
pub struct ModelCorrection {
    pub field: TowerField,
    /// (rational prime under w, ord_w(A), residue degree of w)
    pub entries: Vec<(u64, u32, u32)>,
    pub norm: BigInt,
}

impl ModelCorrection {
    pub fn trivial(field: TowerField) -> Self {
        ModelCorrection { field, entries: vec![], norm: BigInt::from(1) }
    }
}

/// The fractional ideal measuring the failure of the Q-minimal Neron
/// differential to stay minimal over k. Trivial when E/Q is semistable;
/// at additive primes ell | m it is found by searching coordinate changes
/// x -> pi^(2s) x', y -> pi^(3s) y' (with translations) over the ramified
/// local field.
pub fn model_correction(e: &Curve, field: TowerField, tower: &Tower) -> Result<ModelCorrection> {
    let mut entries: Vec<(u64, u32, u32)> = Vec::new();
    for q in e.bad_primes()? {
        let base = tate_local(e, q)?;
        if base.kind != ReductionKind::Additive {
            continue;
        }
        for pr in primes_over(q, field, tower)? {
            if pr.ramification == 1 {
                // Neron models commute with unramified base change
                continue;
            }
            let s = minimal_scaling_over_ramified(e, q, pr.ramification, tower)?;
            if s > 0 {
                for _ in 0..pr.count {
                    entries.push((q, s, pr.residue_degree));
                }
            }
        }
    }
    let mut norm = BigInt::from(1);
    for &(q, s, f) in &entries {
        norm *= BigInt::from(q).pow(s * f);
    }
    Ok(ModelCorrection { field, entries, norm })
}

/// Largest s such that some integral coordinate change with u = pi^s makes
/// the model integral over the totally ramified local field of degree p
/// above ell. Searches shear/translation parameters digit by digit.
fn minimal_scaling_over_ramified(
    e: &Curve,
    ell: u64,
    _e_ram: u32,
    tower: &Tower,
) -> Result<u32> {
    let ring = RamifiedRing::new(ell, tower)?;
    let mut s = 0u32;
    while integral_model_exists(e, &ring, s + 1)? {
        s += 1;
        if s > 24 {
            return Err(Error::Internal("runaway scaling search".into()));
        }
    }
    Ok(s)
}

/// Arithmetic in O = Z_ell[x]/(x^p - m) at a prime ell | m with
/// a = v_ell(m) coprime to p; elements are polynomials mod ell^64.
/// The normalized valuation has v(x) = a and v(ell) = p.
struct RamifiedRing {
    ell: u64,
    p: u64,
    m: u64,
    a: u32,
    modulus: BigInt,
}

type RElt = Vec<BigInt>;

impl RamifiedRing {
    fn new(ell: u64, tower: &Tower) -> Result<RamifiedRing> {
        let a = crate::numerics::bigint_valuation(&BigInt::from(tower.m), ell);
        if a == 0 || a % tower.p as u32 == 0 {
            return Err(Error::Internal("ramified ring needs v_ell(m) nonzero mod p".into()));
        }
        Ok(RamifiedRing {
            ell,
            p: tower.p,
            m: tower.m,
            a,
            modulus: BigInt::from(ell).pow(64),
        })
    }

    /// v(sum c_i x^i) = min_i (p * v_ell(c_i) + i * a); None for zero.
    fn valuation(&self, coeffs: &[BigInt]) -> Option<u32> {
        let mut v = u32::MAX;
        for (i, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let vc = bigint_valuation(c, self.ell);
            v = v.min(self.p as u32 * vc + i as u32 * self.a);
        }
        if v == u32::MAX {
            None
        } else {
            Some(v)
        }
    }

    fn reduce(&self, coeffs: &mut Vec<BigInt>) {
        while coeffs.len() > self.p as usize {
            let c = coeffs.pop().unwrap();
            let deg = coeffs.len();
            let idx = deg - self.p as usize;
            coeffs[idx] += c * BigInt::from(self.m);
        }
        while coeffs.len() < self.p as usize {
            coeffs.push(BigInt::zero());
        }
        for c in coeffs.iter_mut() {
            *c = ((&*c % &self.modulus) + &self.modulus) % &self.modulus;
        }
    }

    fn mul(&self, a: &[BigInt], b: &[BigInt]) -> RElt {
        let mut prod = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        self.reduce(&mut prod);
        prod
    }

    fn add(&self, a: &[BigInt], b: &[BigInt]) -> RElt {
        let mut out: Vec<BigInt> = a.iter().zip(b).map(|(u, v)| u + v).collect();
        self.reduce(&mut out);
        out
    }

    fn sub(&self, a: &[BigInt], b: &[BigInt]) -> RElt {
        let mut out: Vec<BigInt> = a.iter().zip(b).map(|(u, v)| u - v).collect();
        self.reduce(&mut out);
        out
    }

    fn scale(&self, k: i64, a: &[BigInt]) -> RElt {
        let mut out: Vec<BigInt> = a.iter().map(|u| u * k).collect();
        self.reduce(&mut out);
        out
    }

    fn from_bigint(&self, v: &BigInt) -> RElt {
        let mut c = vec![BigInt::zero(); self.p as usize];
        c[0] = ((v % &self.modulus) + &self.modulus) % &self.modulus;
        c
    }

    fn zero(&self) -> RElt {
        vec![BigInt::zero(); self.p as usize]
    }

    /// Integral element of valuation exactly d: x^c * ell^e with
    /// c*a + e*p = d, 0 <= c < p, e >= 0; None when d is not in the
    /// numerical semigroup <a, p>.
    fn level_rep(&self, d: u32) -> Option<RElt> {
        for c in 0..self.p as u32 {
            let rest = d as i64 - (c * self.a) as i64;
            if rest >= 0 && rest % self.p as i64 == 0 {
                let e = (rest / self.p as i64) as u32;
                let mut out = self.zero();
                out[c as usize] = BigInt::from(self.ell).pow(e);
                return Some(out);
            }
        }
        None
    }
}

/// Transformed a-invariants over the ramified ring for parameters
/// (r, sh, t) and scale left implicit: returns the numerators F_i with
/// a_i' = F_i / pi^(i s).
fn transformed_numerators(
    ring: &RamifiedRing,
    a: &[BigInt; 5],
    r: &RElt,
    sh: &RElt,
    t: &RElt,
) -> [RElt; 5] {
    let a1 = ring.from_bigint(&a[0]);
    let a2 = ring.from_bigint(&a[1]);
    let a3 = ring.from_bigint(&a[2]);
    let a4 = ring.from_bigint(&a[3]);
    let a6 = ring.from_bigint(&a[4]);
    let f1 = ring.add(&a1, &ring.scale(2, sh));
    let f2 = ring.sub(
        &ring.add(&ring.sub(&a2, &ring.mul(sh, &a1)), &ring.scale(3, r)),
        &ring.mul(sh, sh),
    );
    let f3 = ring.add(&ring.add(&a3, &ring.mul(r, &a1)), &ring.scale(2, t));
    let f4 = {
        let t1 = ring.sub(&a4, &ring.mul(sh, &a3));
        let t2 = ring.add(&t1, &ring.scale(2, &ring.mul(r, &a2)));
        let t3 = ring.sub(&t2, &ring.mul(&ring.add(t, &ring.mul(r, sh)), &a1));
        let t4 = ring.add(&t3, &ring.scale(3, &ring.mul(r, r)));
        ring.sub(&t4, &ring.scale(2, &ring.mul(sh, t)))
    };
    let f6 = {
        let t1 = ring.add(&a6, &ring.mul(r, &a4));
        let t2 = ring.add(&t1, &ring.mul(&ring.mul(r, r), &a2));
        let t3 = ring.add(&t2, &ring.mul(&ring.mul(r, r), r));
        let t4 = ring.sub(&t3, &ring.mul(t, &a3));
        let t5 = ring.sub(&t4, &ring.mul(t, t));
        ring.sub(&t5, &ring.mul(&ring.mul(t, r), &a1))
    };
    [f1, f2, f3, f4, f6]
}

/// Does an integral model exist at scale u = pi^s? Parameters (r, sh, t)
/// matter only modulo pi^(6s); they are searched digit by digit with the
/// sound prune v(F_i) >= min(i*s, depth) (later digits change F_i only at
/// valuation >= depth).
fn integral_model_exists(e: &Curve, ring: &RamifiedRing, s: u32) -> Result<bool> {
    let a = [
        e.a1.clone(),
        e.a2.clone(),
        e.a3.clone(),
        e.a4.clone(),
        e.a6.clone(),
    ];
    let depth_max = 6 * s;
    let ok_at = |r: &RElt, sh: &RElt, t: &RElt, depth: u32| -> bool {
        let f = transformed_numerators(ring, &a, r, sh, t);
        for (i, fi) in [1u32, 2, 3, 4, 6].into_iter().zip(&f) {
            let want = (i * s).min(depth);
            if let Some(v) = ring.valuation(fi) {
                if v < want {
                    return false;
                }
            }
        }
        true
    };
    let mut frontier: Vec<(RElt, RElt, RElt)> = vec![(ring.zero(), ring.zero(), ring.zero())];
    for depth in 0..depth_max {
        let rep = match ring.level_rep(depth) {
            Some(rep) => rep,
            None => {
                // no digit at this level in O; just re-filter at new depth
                frontier.retain(|(r, sh, t)| ok_at(r, sh, t, depth + 1));
                if frontier.is_empty() {
                    return Ok(false);
                }
                continue;
            }
        };
        let mut next = Vec::new();
        for (r, sh, t) in frontier {
            for dr in 0..ring.ell as i64 {
                for dsh in 0..ring.ell as i64 {
                    for dt in 0..ring.ell as i64 {
                        let bump = |base: &RElt, d: i64| -> RElt {
                            if d == 0 {
                                base.clone()
                            } else {
                                ring.add(base, &ring.scale(d, &rep))
                            }
                        };
                        let cand = (bump(&r, dr), bump(&sh, dsh), bump(&t, dt));
                        if ok_at(&cand.0, &cand.1, &cand.2, depth + 1) {
                            next.push(cand);
                        }
                    }
                }
            }
        }
        if next.len() > 500_000 {
            return Err(Error::Internal("model search state explosion".into()));
        }
        if next.is_empty() {
            return Ok(false);
        }
        frontier = next;
    }
    Ok(frontier.iter().any(|(r, sh, t)| ok_at(r, sh, t, depth_max)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e21() -> Curve {
        Curve::from_i64([1, 0, 0, 1, 0]).unwrap()
    }

    #[test]
    fn golden_local_data_over_k() {
        let t = Tower::new(5, 2).unwrap();
        // (21A4, K, q=3): one prime, f = 4, split I2, c = 2
        let l = local_data_over(&e21(), TowerField::K, 3, &t).unwrap();
        assert_eq!(l.len(), 1);
        assert_eq!(l[0].prime.residue_degree, 4);
        assert_eq!(l[0].kind, ReductionKind::SplitMult);
        assert_eq!(l[0].kodaira, KodairaSymbol::I(2));
        assert_eq!(l[0].tamagawa, 2);
    }

    #[test]
    fn golden_local_data_over_l() {
        let t = Tower::new(5, 2).unwrap();
        // (21A4, L, q=7): two primes, f=1 nonsplit c=1 and f=4 split c=1
        let mut l = local_data_over(&e21(), TowerField::L, 7, &t).unwrap();
        l.sort_by_key(|d| d.prime.residue_degree);
        assert_eq!(l.len(), 2);
        assert_eq!(l[0].prime.residue_degree, 1);
        assert_eq!(l[0].kind, ReductionKind::NonsplitMult);
        assert_eq!(l[0].tamagawa, 1);
        assert_eq!(l[1].prime.residue_degree, 4);
        assert_eq!(l[1].kind, ReductionKind::SplitMult);
        assert_eq!(l[1].tamagawa, 1);
    }

    #[test]
    fn golden_local_data_over_f() {
        let t = Tower::new(5, 2).unwrap();
        // (21A4, F, q=3): five primes, all split I2, c=2
        let l = local_data_over(&e21(), TowerField::F, 3, &t).unwrap();
        let total: u32 = l.iter().map(|d| d.prime.count).sum();
        assert_eq!(total, 5);
        for d in &l {
            assert_eq!(d.kind, ReductionKind::SplitMult);
            assert_eq!(d.tamagawa, 2);
            assert_eq!(d.kodaira, KodairaSymbol::I(2));
        }
    }

    #[test]
    fn semistable_correction_trivial() {
        let t = Tower::new(5, 2).unwrap();
        for f in [TowerField::K, TowerField::L, TowerField::F] {
            let c = model_correction(&e21(), f, &t).unwrap();
            assert_eq!(c.norm, BigInt::from(1));
        }
    }

    #[test]
    fn correction_272c1_over_l() {
        // paper: A_{E/L} = (cbrt 2), norm 2, for E = 272C1, p = 3, m = 2
        let e = Curve::from_i64([0, -1, 0, -4, 0]).unwrap();
        let t = Tower::new(3, 2).unwrap();
        let c = model_correction(&e, TowerField::L, &t).unwrap();
        assert_eq!(c.norm, BigInt::from(2));
    }
}
