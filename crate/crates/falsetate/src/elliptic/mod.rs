//! Elliptic-curve local and global data over Q and over the tower fields:
//! Tate's algorithm, point counts, periods, torsion, local L-factors, and
//! minimal-model correction ideals.

pub mod count;
pub mod curve;
pub mod over;
pub mod periods;
pub mod tate;
pub mod torsion;

pub use count::{ap, trace_over_extension};
pub use curve::Curve;
pub use over::{local_data_over, model_correction, ModelCorrection, TowerField};
pub use periods::{periods, Periods};
pub use tate::tate_local;
pub use torsion::torsion_order;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

/// Reduction kind at a finite prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionKind {
    Good,
    SplitMult,
    NonsplitMult,
    Additive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KodairaSymbol {
    /// I_0 is good reduction; I_n (n >= 1) multiplicative.
    I(u32),
    /// I_n^* (n >= 0).
    IStar(u32),
    II,
    III,
    IV,
    IVStar,
    IIIStar,
    IIStar,
}

impl KodairaSymbol {
    /// Number of components of the special fiber (for Ogg's formula).
    pub fn components(&self) -> u32 {
        match self {
            KodairaSymbol::I(0) => 1,
            KodairaSymbol::I(n) => *n,
            KodairaSymbol::IStar(n) => 5 + n,
            KodairaSymbol::II => 1,
            KodairaSymbol::III => 2,
            KodairaSymbol::IV => 3,
            KodairaSymbol::IVStar => 7,
            KodairaSymbol::IIIStar => 8,
            KodairaSymbol::IIStar => 9,
        }
    }
}

impl std::fmt::Display for KodairaSymbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KodairaSymbol::I(n) => write!(f, "I{n}"),
            KodairaSymbol::IStar(n) => write!(f, "I{n}*"),
            KodairaSymbol::II => write!(f, "II"),
            KodairaSymbol::III => write!(f, "III"),
            KodairaSymbol::IV => write!(f, "IV"),
            KodairaSymbol::IVStar => write!(f, "IV*"),
            KodairaSymbol::IIIStar => write!(f, "III*"),
            KodairaSymbol::IIStar => write!(f, "II*"),
        }
    }
}

/// Descriptor of a prime of a tower field lying over a rational prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeOfField {
    pub under: u64,
    /// residue degree f = [F_v : F_q]
    pub residue_degree: u32,
    /// ramification index over Q
    pub ramification: u32,
    /// number of isomorphic primes sharing this data (bookkeeping)
    pub count: u32,
}

impl PrimeOfField {
    pub fn rational(q: u64) -> Self {
        PrimeOfField { under: q, residue_degree: 1, ramification: 1, count: 1 }
    }

    /// Norm(v) = q^f.
    pub fn norm(&self) -> BigInt {
        BigInt::from(self.under).pow(self.residue_degree)
    }
}

/// Local data of E at one prime of the base or a tower field.
#[derive(Debug, Clone)]
pub struct LocalData {
    pub prime: PrimeOfField,
    pub kind: ReductionKind,
    pub kodaira: KodairaSymbol,
    pub tamagawa: u64,
    /// For multiplicative reduction only.
    pub split: Option<bool>,
    pub conductor_exponent: u32,
    /// Valuation of the minimal discriminant at this prime.
    pub v_disc: u32,
    /// False when the Tamagawa number at an unramified additive prime is
    /// carried over from Q without a component-group splitting check.
    pub tamagawa_certified: bool,
}

impl LocalData {
    /// Local polynomial P_v(T) with a_v supplied for good reduction.
    pub fn local_poly(&self, av: Option<&BigInt>) -> Vec<BigRational> {
        let one = BigRational::one();
        match self.kind {
            ReductionKind::Good => {
                let a = av.expect("good reduction needs a_v");
                vec![
                    one,
                    BigRational::from(-a.clone()),
                    BigRational::from(self.prime.norm()),
                ]
            }
            ReductionKind::SplitMult => vec![one.clone(), -one],
            ReductionKind::NonsplitMult => vec![one.clone(), one],
            ReductionKind::Additive => vec![one],
        }
    }
}
