//! Arithmetic of the tower Q ⊂ K = Q(mu_p) ⊂ F = Q(mu_p, m^(1/p)) and of
//! L = Q(m^(1/p)): prime splitting, conductors, Frobenius classification and
//! Kummer symbols.
//!
//! Primes of K above an unramified q are represented by a chosen root of
//! the p-th cyclotomic polynomial Hensel-lifted into the unramified
//! extension of Z_q of the right degree; valuations are read off through
//! this embedding.

use crate::elliptic::PrimeOfField;
use crate::numerics::cyclo::CycloNumber;
use crate::numerics::factor::{factor_u128, is_prime_u64};
use crate::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Behavior of the prime of K above p in F/K.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PBehavior {
    Ramified,
    Split,
    Inert,
}

/// Field in the tower above Q.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TowerField {
    /// K = Q(mu_p)
    K,
    /// L = Q(m^(1/p))
    L,
    /// F = Q(mu_p, m^(1/p))
    F,
}

/// The false Tate tower parameters (p, m).
#[derive(Debug, Clone)]
pub struct Tower {
    pub p: u64,
    pub m: u64,
    n_psi: u32,
    behavior: PBehavior,
}

impl Tower {
    pub fn new(p: u64, m: u64) -> Result<Tower> {
        if p < 3 || !is_prime_u64(p) {
            return Err(Error::Parse(format!("p = {p} must be an odd prime")));
        }
        if m < 2 {
            return Err(Error::Parse("m must be at least 2".into()));
        }
        for (q, e) in factor_u128(m as u128) {
            let _ = q;
            if e >= p as u32 {
                return Err(Error::Parse(format!("m = {m} is not {p}-power free")));
            }
        }
        let (behavior, n_psi) = classify_at_p(p, m);
        Ok(Tower { p, m, n_psi, behavior })
    }

    /// N(sigma) = |Delta_K| = p^(p-2).
    pub fn sigma_conductor(&self) -> BigInt {
        BigInt::from(self.p).pow(self.p as u32 - 2)
    }

    /// Local conductor exponent of the Kummer character of F/K at the prime
    /// above p: 0 if split, 2 in the wild unit case, p+1 when p | m.
    pub fn n_psi(&self) -> u32 {
        self.n_psi
    }

    /// Splitting of the prime of K above p in F/K.
    pub fn p_behavior(&self) -> PBehavior {
        self.behavior
    }

    /// N(rho) = |disc of Q(m^(1/p))| = prod_{q | m, q != p} q^(p-1) times
    /// p^((p-2) + n_psi).
    pub fn rho_conductor(&self) -> BigInt {
        let mut n = BigInt::from(self.p).pow(self.p as u32 - 2 + self.n_psi);
        for (q, _) in factor_u128(self.m as u128) {
            if q != self.p as u128 {
                n *= BigInt::from(q).pow(self.p as u32 - 1);
            }
        }
        n
    }

    /// ord_p of N(rho).
    pub fn n_rho_at_p(&self) -> u32 {
        self.p as u32 - 2 + self.n_psi
    }

    /// Canonical representative of m: the smallest m' <= m defining the same
    /// field Q(m^(1/p)) (powers modulo p-th powers).
    pub fn canonical_m(&self) -> u64 {
        let facs = factor_u128(self.m as u128);
        let mut best = self.m;
        for j in 1..self.p as u32 {
            let mut cand: u128 = 1;
            for &(q, e) in &facs {
                cand = cand.saturating_mul(q.pow((e * j) % self.p as u32));
            }
            if cand >= 2 && (cand as u64) < best {
                best = cand as u64;
            }
        }
        best
    }
}

/// Classify the prime above p in F/K from the p-adic shape of m. For
/// integer m the inert case cannot occur: non-split m sits at unit-filtration
/// level p-1 exactly (wild, n_psi = 2) or is a p-th power in K_v (split).
fn classify_at_p(p: u64, m: u64) -> (PBehavior, u32) {
    if m % p == 0 {
        return (PBehavior::Ramified, p as u32 + 1);
    }
    // m^(p-1) mod p^2
    let p2 = BigUint::from(p) * BigUint::from(p);
    let t = BigUint::from(m).modpow(&BigUint::from(p - 1), &p2);
    if t == BigUint::one() {
        (PBehavior::Split, 0)
    } else {
        (PBehavior::Ramified, 2)
    }
}

/// Legendre symbol (a/p) by Euler's criterion.
pub fn legendre(a: i64, p: u64) -> i32 {
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    let r = BigUint::from(a)
        .modpow(&BigUint::from((p - 1) / 2), &BigUint::from(p))
        .to_u64()
        .unwrap();
    if r == 1 {
        1
    } else {
        -1
    }
}

/// Frobenius classification of an unramified prime q.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrobClass {
    pub q: u64,
    /// multiplicative order of q mod p
    pub order: u32,
    /// for q = 1 mod p only: whether x^p - m has a root (hence p roots) mod q
    pub split_in_l: Option<bool>,
}

pub fn frobenius_class(q: u64, tower: &Tower) -> Result<FrobClass> {
    let p = tower.p;
    if q == p || tower.m % q == 0 {
        return Err(Error::BadPrime(format!("{q} ramifies in the tower")));
    }
    let mut order = 1u32;
    let mut acc = q % p;
    while acc != 1 {
        acc = (acc as u128 * q as u128 % p as u128) as u64;
        order += 1;
    }
    let split_in_l = if order == 1 {
        let r = BigUint::from(tower.m % q)
            .modpow(&BigUint::from((q - 1) / p), &BigUint::from(q));
        Some(r == BigUint::one())
    } else {
        None
    };
    Ok(FrobClass { q, order, split_in_l })
}

/// Splitting of a rational prime q in a tower field as a list of prime
/// descriptors (residue degree, ramification, count).
pub fn primes_over(q: u64, field: TowerField, tower: &Tower) -> Result<Vec<PrimeOfField>> {
    let p = tower.p;
    let mk = |f: u32, e: u32, count: u32| PrimeOfField {
        under: q,
        residue_degree: f,
        ramification: e,
        count,
    };
    if q == p {
        return Ok(match field {
            TowerField::K => vec![mk(1, p as u32 - 1, 1)],
            TowerField::L => match tower.p_behavior() {
                PBehavior::Ramified => vec![mk(1, p as u32, 1)],
                PBehavior::Split => vec![mk(1, 1, 1), mk(1, p as u32 - 1, 1)],
                PBehavior::Inert => {
                    return Err(Error::Unsupported("p inert in F/K".into()));
                }
            },
            TowerField::F => match tower.p_behavior() {
                PBehavior::Ramified => vec![mk(1, (p as u32 - 1) * p as u32, 1)],
                PBehavior::Split => vec![mk(1, p as u32 - 1, p as u32)],
                PBehavior::Inert => {
                    return Err(Error::Unsupported("p inert in F/K".into()));
                }
            },
        });
    }
    if tower.m % q == 0 {
        // tame ramification of degree p over each prime of K
        let d = order_mod(q, p);
        let g = (p as u32 - 1) / d;
        return Ok(match field {
            TowerField::K => vec![mk(d, 1, g)],
            TowerField::L => vec![mk(1, p as u32, 1)],
            TowerField::F => vec![mk(d, p as u32, g)],
        });
    }
    let fc = frobenius_class(q, tower)?;
    let d = fc.order;
    let g_k = (p as u32 - 1) / d;
    Ok(match field {
        TowerField::K => vec![mk(d, 1, g_k)],
        TowerField::L => {
            if d == 1 {
                if fc.split_in_l == Some(true) {
                    vec![mk(1, 1, p as u32)]
                } else {
                    vec![mk(p as u32, 1, 1)]
                }
            } else {
                vec![mk(1, 1, 1), mk(d, 1, (p as u32 - 1) / d)]
            }
        }
        TowerField::F => {
            if d == 1 {
                if fc.split_in_l == Some(true) {
                    vec![mk(1, 1, p as u32 * (p as u32 - 1))]
                } else {
                    vec![mk(p as u32, 1, p as u32 - 1)]
                }
            } else {
                vec![mk(d, 1, p as u32 * (p as u32 - 1) / d)]
            }
        }
    })
}

fn order_mod(q: u64, p: u64) -> u32 {
    let mut order = 1u32;
    let mut acc = q % p;
    assert!(acc != 0);
    while acc != 1 {
        acc = (acc as u128 * q as u128 % p as u128) as u64;
        order += 1;
    }
    order
}

// ---------- primes of K via unramified q-adic embeddings ----------

/// Arithmetic in R = Z[y]/(q^k, g(y)) with g monic irreducible mod q.
#[derive(Debug, Clone)]
struct UnramRing {
    q: u64,
    k: u32,
    modulus: BigUint,
    /// monic, ascending coefficients, degree d
    g: Vec<BigUint>,
}

type Elt = Vec<BigUint>;

impl UnramRing {
    fn d(&self) -> usize {
        self.g.len() - 1
    }

    fn zero(&self) -> Elt {
        vec![BigUint::zero(); self.d()]
    }

    fn from_u64(&self, c: u64) -> Elt {
        let mut e = self.zero();
        e[0] = BigUint::from(c) % &self.modulus;
        e
    }

    fn from_bigint(&self, c: &BigInt) -> Elt {
        let m = BigInt::from(self.modulus.clone());
        let r = ((c % &m) + &m) % &m;
        let mut e = self.zero();
        e[0] = r.to_biguint().unwrap();
        e
    }

    fn add(&self, a: &Elt, b: &Elt) -> Elt {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x + y) % &self.modulus)
            .collect()
    }

    fn sub(&self, a: &Elt, b: &Elt) -> Elt {
        a.iter()
            .zip(b)
            .map(|(x, y)| ((x + &self.modulus) - (y % &self.modulus)) % &self.modulus)
            .collect()
    }

    fn mul(&self, a: &Elt, b: &Elt) -> Elt {
        let d = self.d();
        let mut prod = vec![BigUint::zero(); 2 * d - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                prod[i + j] = (&prod[i + j] + x * y) % &self.modulus;
            }
        }
        // reduce by monic g
        for i in (d..2 * d - 1).rev() {
            let c = prod[i].clone();
            if c.is_zero() {
                continue;
            }
            prod[i] = BigUint::zero();
            for j in 0..d {
                // prod[i-d+j] -= c * g[j]
                let t = (&c * &self.g[j]) % &self.modulus;
                prod[i - d + j] = ((&prod[i - d + j] + &self.modulus) - t) % &self.modulus;
            }
        }
        prod.truncate(d);
        prod
    }

    fn pow(&self, a: &Elt, mut e: BigUint) -> Elt {
        let mut acc = self.from_u64(1);
        let mut base = a.clone();
        while !e.is_zero() {
            if (&e % 2u32) == BigUint::one() {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a unit (nonzero mod q) by lifting the F_{q^d} inverse.
    fn inv(&self, a: &Elt) -> Elt {
        // Fermat in the residue field then Newton: x -> x(2 - a x)
        let qd_minus_2 = BigUint::from(self.q).pow(self.d() as u32) - 2u32;
        let mut x = self.pow(a, qd_minus_2);
        for _ in 0..self.k.ilog2() + 2 {
            let ax = self.mul(a, &x);
            let two_minus = self.sub(&self.from_u64(2), &ax);
            x = self.mul(&x, &two_minus);
        }
        debug_assert_eq!(self.mul(a, &x), self.from_u64(1));
        x
    }

    /// q-valuation of a nonzero element: trusted while < k.
    fn valuation(&self, a: &Elt) -> Option<u32> {
        let mut v = u32::MAX;
        for c in a {
            if !c.is_zero() {
                let mut w = 0u32;
                let mut cc = c.clone();
                let qb = BigUint::from(self.q);
                while (&cc % &qb).is_zero() {
                    cc /= &qb;
                    w += 1;
                }
                v = v.min(w);
            }
        }
        if v == u32::MAX {
            None
        } else {
            Some(v)
        }
    }
}

/// A prime of K = Q(zeta_p) above an unramified rational prime q, labeled
/// by the Hensel-lifted root of Phi_p it sends zeta_p to.
#[derive(Debug, Clone)]
pub struct PrimeOfK {
    pub q: u64,
    /// residue degree = order of q mod p
    pub degree: u32,
    ring: UnramRing,
    root: Elt,
}

/// Deterministic search for a monic irreducible polynomial of degree d
/// over F_q, plus construction of a degree-d unramified ring mod q^k.
fn build_ring(q: u64, d: u32, k: u32) -> UnramRing {
    let modulus = BigUint::from(q).pow(k);
    if d == 1 {
        return UnramRing { q, k, modulus, g: vec![BigUint::zero(), BigUint::one()] };
    }
    // try y^d + c y + c' style polynomials deterministically
    let mut seed = 1u64;
    loop {
        let g = gen_poly(q, d, &mut seed);
        if poly_irreducible(&g, q) {
            let g: Vec<BigUint> = g.into_iter().map(BigUint::from).collect();
            return UnramRing { q, k, modulus, g };
        }
    }
}

fn gen_poly(q: u64, d: u32, seed: &mut u64) -> Vec<u64> {
    let mut g = vec![0u64; d as usize + 1];
    g[d as usize] = 1;
    *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut s = *seed;
    for c in g.iter_mut().take(d as usize) {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1);
        *c = (s >> 11) % q;
    }
    g
}

/// Irreducibility over F_q via gcd(y^(q^i) - y, g) for i <= d/2.
fn poly_irreducible(g: &[u64], q: u64) -> bool {
    let d = g.len() - 1;
    let powq = |a: &Vec<u64>| -> Vec<u64> {
        // a(y)^q mod g
        poly_powmod(a, q as u128, g, q)
    };
    let mut x_power = vec![0u64, 1]; // y
    for i in 1..=d / 2 {
        x_power = powq(&x_power);
        // gcd(x_power - y, g)
        let mut diff = x_power.clone();
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = (diff[1] + q - 1) % q;
        let gdeg = poly_gcd_deg(&diff, g, q);
        if gdeg > 0 {
            return false;
        }
        let _ = i;
    }
    true
}

fn poly_mulmod(a: &[u64], b: &[u64], g: &[u64], q: u64) -> Vec<u64> {
    let d = g.len() - 1;
    let mut prod = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u128 * y as u128) % q as u128;
        }
    }
    // reduce by monic g
    for i in (d..prod.len()).rev() {
        let c = prod[i] % q as u128;
        if c == 0 {
            continue;
        }
        prod[i] = 0;
        for j in 0..d {
            let sub = c * g[j] as u128 % q as u128;
            prod[i - d + j] = (prod[i - d + j] + q as u128 - sub) % q as u128;
        }
    }
    prod.truncate(d.max(1));
    let mut out: Vec<u64> = prod.into_iter().map(|v| (v % q as u128) as u64).collect();
    while out.len() > 1 && *out.last().unwrap() == 0 {
        out.pop();
    }
    out
}

fn poly_powmod(a: &[u64], mut e: u128, g: &[u64], q: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut base = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &base, g, q);
        }
        base = poly_mulmod(&base, &base, g, q);
        e >>= 1;
    }
    acc
}

fn poly_normalize(v: &mut Vec<u64>) {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
}

fn poly_is_zero(v: &[u64]) -> bool {
    v.len() == 1 && v[0] == 0
}

/// Remainder of a mod b over F_q (b nonzero).
fn poly_rem(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let inv = |x: u64| -> u64 {
        BigUint::from(x)
            .modpow(&BigUint::from(q - 2), &BigUint::from(q))
            .to_u64()
            .unwrap()
    };
    let mut a = a.to_vec();
    poly_normalize(&mut a);
    let mut b = b.to_vec();
    poly_normalize(&mut b);
    assert!(!poly_is_zero(&b));
    let db = b.len() - 1;
    let lead_inv = inv(*b.last().unwrap());
    while !poly_is_zero(&a) && a.len() - 1 >= db && a.len() > 1 || (db == 0 && !poly_is_zero(&a)) {
        if db == 0 {
            return vec![0];
        }
        let da = a.len() - 1;
        if da < db {
            break;
        }
        let c = a[da] as u128 * lead_inv as u128 % q as u128;
        for j in 0..=db {
            let sub = c * b[j] as u128 % q as u128;
            let idx = da - db + j;
            a[idx] = ((a[idx] as u128 + q as u128 - sub) % q as u128) as u64;
        }
        poly_normalize(&mut a);
    }
    a
}

fn poly_gcd_deg(a: &[u64], b: &[u64], q: u64) -> usize {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    poly_normalize(&mut a);
    poly_normalize(&mut b);
    while !poly_is_zero(&b) {
        let r = poly_rem(&a, &b, q);
        a = b;
        b = r;
    }
    a.len() - 1
}

/// All primes of K above an unramified q != p, labeled by Frobenius-orbit
/// representatives of the roots of Phi_p.
pub fn primes_of_k_above(q: u64, p: u64, prec_k: u32) -> Result<Vec<PrimeOfK>> {
    if q == p {
        return Err(Error::BadPrime("p is ramified in K".into()));
    }
    let d = order_mod(q, p);
    let ring = build_ring(q, d, prec_k);
    // find a root of Phi_p in the residue field: an element of order p
    let qd_minus_1 = BigUint::from(q).pow(d) - 1u32;
    let cof = &qd_minus_1 / BigUint::from(p);
    let mut z = None;
    let mut seed = 2u64;
    for _ in 0..10_000 {
        let cand = random_elt(&ring, &mut seed);
        if ring.valuation(&cand) != Some(0) {
            continue;
        }
        let w = ring.pow(&cand, cof.clone());
        if w != ring.from_u64(1) {
            z = Some(w);
            break;
        }
    }
    let mut z = z.ok_or_else(|| Error::Internal("no p-th root of unity found".into()))?;
    // Hensel-lift: z <- z - Phi_p(z)/Phi_p'(z)
    for _ in 0..prec_k.ilog2() + 2 {
        let fz = eval_cyclo_poly(&ring, &z, p);
        let dfz = eval_cyclo_poly_deriv(&ring, &z, p);
        let corr = ring.mul(&fz, &ring.inv(&dfz));
        z = ring.sub(&z, &corr);
    }
    debug_assert!(ring.valuation(&eval_cyclo_poly(&ring, &z, p)).is_none());
    // orbit representatives of <q> acting on exponents 1..p-1
    let mut seen = vec![false; p as usize];
    let mut reps = Vec::new();
    for j in 1..p {
        if seen[j as usize] {
            continue;
        }
        let mut t = j;
        loop {
            seen[t as usize] = true;
            t = t * q % p;
            if t == j {
                break;
            }
        }
        reps.push(j);
    }
    Ok(reps
        .into_iter()
        .map(|j| PrimeOfK {
            q,
            degree: d,
            ring: ring.clone(),
            root: ring.pow(&z, BigUint::from(j)),
        })
        .collect())
}

fn random_elt(ring: &UnramRing, seed: &mut u64) -> Elt {
    let mut e = ring.zero();
    for c in e.iter_mut() {
        *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        *c = BigUint::from((*seed >> 13) % ring.q);
    }
    e
}

/// Phi_p(z) = 1 + z + ... + z^(p-1).
fn eval_cyclo_poly(ring: &UnramRing, z: &Elt, p: u64) -> Elt {
    let mut acc = ring.from_u64(1);
    let mut pw = ring.from_u64(1);
    for _ in 1..p {
        pw = ring.mul(&pw, z);
        acc = ring.add(&acc, &pw);
    }
    acc
}

fn eval_cyclo_poly_deriv(ring: &UnramRing, z: &Elt, p: u64) -> Elt {
    // sum_{i=1}^{p-1} i z^(i-1)
    let mut acc = ring.zero();
    let mut pw = ring.from_u64(1);
    for i in 1..p {
        let term: Elt = pw.iter().map(|c| (c * i) % &ring.modulus).collect();
        acc = ring.add(&acc, &term);
        pw = ring.mul(&pw, z);
    }
    acc
}

impl PrimeOfK {
    /// Norm of this prime: q^degree.
    pub fn norm(&self) -> BigUint {
        BigUint::from(self.q).pow(self.degree)
    }

    /// Evaluate a conductor-p cyclotomic number under zeta -> root; the
    /// coefficients must be q-integral.
    fn embed(&self, x: &CycloNumber) -> Result<Elt> {
        let mut acc = self.ring.zero();
        let mut pw = self.ring.from_u64(1);
        for (i, c) in x.coeffs().iter().enumerate() {
            if i > 0 {
                pw = self.ring.mul(&pw, &self.root);
            }
            if c.is_zero() {
                continue;
            }
            let den = c.denom();
            if (den % BigInt::from(self.q)).is_zero() {
                return Err(Error::Internal("embedding a non-q-integral element".into()));
            }
            let den_inv = self.ring.inv(&self.ring.from_bigint(den));
            let num_elt = self.ring.from_bigint(c.numer());
            let coef = self.ring.mul(&num_elt, &den_inv);
            acc = self.ring.add(&acc, &self.ring.mul(&coef, &pw));
        }
        Ok(acc)
    }

    /// ord_w(x) for a nonzero q-integral cyclotomic integer.
    pub fn ord(&self, x: &CycloNumber) -> Result<u32> {
        let e = self.embed(x)?;
        match self.ring.valuation(&e) {
            Some(v) if v < self.ring.k - 2 => Ok(v),
            Some(_) | None => Err(Error::InsufficientPrecision(
                "q-adic precision too low for ord_w".into(),
            )),
        }
    }

    /// Kummer symbol c with Frob_w(m^(1/p)) = zeta^c m^(1/p):
    /// m^((Nw-1)/p) = root^c in the residue field.
    pub fn kummer_symbol(&self, m: u64, p: u64) -> Result<u32> {
        if m % self.q == 0 {
            return Err(Error::BadPrime("kummer symbol at a prime dividing m".into()));
        }
        let nw_minus_1 = BigUint::from(self.q).pow(self.degree) - 1u32;
        let e = &nw_minus_1 / BigUint::from(p);
        let mval = self.ring.pow(&self.ring.from_u64(m % self.q), e);
        // compare against powers of the root in the residue field (mod q)
        let reduce_mod_q = |x: &Elt| -> Vec<u64> {
            x.iter()
                .map(|c| (c % BigUint::from(self.q)).to_u64().unwrap())
                .collect()
        };
        let target = reduce_mod_q(&mval);
        let mut pw = self.ring.from_u64(1);
        for c in 0..p {
            if reduce_mod_q(&pw) == target {
                return Ok(c as u32);
            }
            pw = self.ring.mul(&pw, &self.root);
        }
        Err(Error::Internal("kummer symbol not a p-th root of unity".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tower_validation() {
        assert!(Tower::new(5, 2).is_ok());
        assert!(Tower::new(4, 2).is_err());
        assert!(Tower::new(3, 16).is_err()); // 2^3 | 16
        assert!(Tower::new(3, 1).is_err());
    }

    #[test]
    fn rho_conductor_examples() {
        // paper: N(rho) = 2^4 5^5 for (p, m) = (5, 2)
        let t = Tower::new(5, 2).unwrap();
        assert_eq!(t.rho_conductor(), BigInt::from(2u64.pow(4) * 5u64.pow(5)));
        assert_eq!(t.p_behavior(), PBehavior::Ramified);
        // oracle: disc Q(2^(1/3)) = -108 => N(rho) = 108
        let t3 = Tower::new(3, 2).unwrap();
        assert_eq!(t3.rho_conductor(), BigInt::from(108));
        // 11^4 != 1 mod 25: same wildness as m = 2
        let t11 = Tower::new(5, 11).unwrap();
        assert_eq!(t11.rho_conductor(), BigInt::from(11u64.pow(4)) * BigInt::from(5u64.pow(5)));
        // p | m: n_psi = p + 1, e.g. disc Q(3^(1/3)) = -3^5
        let tm3 = Tower::new(3, 3).unwrap();
        assert_eq!(tm3.rho_conductor(), BigInt::from(243));
    }

    #[test]
    fn p_behavior_split_case() {
        // 10 = (irr?) test the cube criterion: split iff 10^2 = 1 mod 9;
        // 100 mod 9 = 1, so 10 is a cube in Q_3(mu_3) and p splits
        let t = Tower::new(3, 10).unwrap();
        assert_eq!(t.p_behavior(), PBehavior::Split);
        let t2 = Tower::new(3, 2).unwrap();
        assert_eq!(t2.p_behavior(), PBehavior::Ramified);
    }

    #[test]
    fn frobenius_classes_golden() {
        let t = Tower::new(5, 2).unwrap();
        // paper: x^5 - 2 irreducible mod 11; 151 splits completely
        let f11 = frobenius_class(11, &t).unwrap();
        assert_eq!(f11.order, 1);
        assert_eq!(f11.split_in_l, Some(false));
        let f151 = frobenius_class(151, &t).unwrap();
        assert_eq!(f151.order, 1);
        assert_eq!(f151.split_in_l, Some(true));
        // q = -1 mod 5 has order 2
        let f19 = frobenius_class(19, &t).unwrap();
        assert_eq!(f19.order, 2);
        let f3 = frobenius_class(3, &t).unwrap();
        assert_eq!(f3.order, 4);
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(79, 3), 1);
        assert_eq!(legendre(2, 5), -1);
        // Euler criterion cross-check
        for q in [2i64, 3, 7, 11, 13] {
            let e = BigUint::from(q as u64).modpow(&BigUint::from(2u32), &BigUint::from(5u32));
            let expected = if e == BigUint::one() { 1 } else { -1 };
            assert_eq!(legendre(q, 5), expected);
        }
    }

    #[test]
    fn splitting_matches_brute_force() {
        // residue degrees from FrobClass match factoring x^p - m and Phi_p
        // mod q for q < 2000
        let t = Tower::new(5, 2).unwrap();
        for q in crate::numerics::factor::primes_up_to(2000) {
            if q == 5 || q == 2 {
                continue;
            }
            let lf = primes_over(q, TowerField::L, &t).unwrap();
            let degs_expected = brute_factor_degrees_xp_m(q, 5, 2);
            let mut degs: Vec<u32> = Vec::new();
            for pr in &lf {
                for _ in 0..pr.count {
                    degs.push(pr.residue_degree);
                }
            }
            degs.sort();
            assert_eq!(degs, degs_expected, "q = {q}");
            // sum of e*f over primes of F equals [F:Q] = p(p-1)
            let ff = primes_over(q, TowerField::F, &t).unwrap();
            let total: u32 = ff
                .iter()
                .map(|pr| pr.residue_degree * pr.ramification * pr.count)
                .sum();
            assert_eq!(total, 20);
        }
    }

    /// Degrees of the irreducible factors of x^p - m over F_q by
    /// distinct-degree factorization: G_j = deg gcd(x^(q^j) - x, f) counts
    /// roots lying in F_{q^j}.
    fn brute_factor_degrees_xp_m(q: u64, p: u64, m: u64) -> Vec<u32> {
        let mut f = vec![0u64; p as usize + 1];
        f[0] = (q - m % q) % q;
        f[p as usize] = 1;
        let mut counts: Vec<u32> = vec![0; p as usize + 1];
        let mut xq = vec![0u64, 1]; // x
        for j in 1..=p as usize {
            xq = poly_powmod(&xq, q as u128, &f, q);
            // gcd(xq - x, f)
            let mut diff = xq.clone();
            if diff.len() < 2 {
                diff.resize(2, 0);
            }
            diff[1] = (diff[1] + q - 1) % q;
            let gj = poly_gcd_deg(&diff, &f, q) as u32;
            // gj = sum over d | j of d * counts[d]
            let mut known = 0u32;
            for d in 1..=j {
                if j % d == 0 {
                    known += d as u32 * counts[d];
                }
            }
            assert!(gj >= known && (gj - known) % j as u32 == 0);
            counts[j] = (gj - known) / j as u32;
        }
        let mut degs = Vec::new();
        for (d, &c) in counts.iter().enumerate() {
            for _ in 0..c {
                degs.push(d as u32);
            }
        }
        degs.sort();
        degs
    }

    #[test]
    fn kummer_symbols() {
        // totally split q = 151 for (5, 2): all symbols are 0
        for w in primes_of_k_above(151, 5, 8).unwrap() {
            assert_eq!(w.kummer_symbol(2, 5).unwrap(), 0);
        }
        // q = 11 inert in L: symbol nonzero
        let ws = primes_of_k_above(11, 5, 8).unwrap();
        assert_eq!(ws.len(), 4);
        for w in &ws {
            assert_ne!(w.kummer_symbol(2, 5).unwrap(), 0);
        }
    }

    #[test]
    fn ord_w_consistency() {
        use num_rational::BigRational;
        // element x = 3 + zeta in K = Q(mu_5): sum of f_w * ord_w over w | q
        // must equal v_q(Norm(x)) for several q
        let x = CycloNumber::root_of_unity(5, 1)
            .add(&CycloNumber::from_rational(5, &BigRational::from(BigInt::from(3))));
        // Norm = Phi_5 evaluated suitably: Norm(3 + zeta) = prod (3 + zeta^a)
        let mut norm = CycloNumber::one(5);
        for a in 1..5 {
            norm = norm.mul(&x.galois(a));
        }
        let n = norm.as_rational().unwrap();
        let nint = n.numer().clone();
        for q in [11u64, 19, 31, 41] {
            let vq = if (&nint % BigInt::from(q)).is_zero() {
                crate::numerics::bigint_valuation(&nint, q)
            } else {
                0
            };
            let total: u32 = primes_of_k_above(q, 5, 10)
                .unwrap()
                .iter()
                .map(|w| w.ord(&x).unwrap() * w.degree)
                .sum();
            assert_eq!(total, vq, "q = {q}");
        }
    }
}
